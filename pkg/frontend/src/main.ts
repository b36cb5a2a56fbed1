import { wire } from "./ui.js";

wire(document);
