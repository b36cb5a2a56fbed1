import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { Window } from "happy-dom";

export const repoRoot = fileURLToPath(new URL("../..", import.meta.url));

/** Fresh DOM with the console page loaded, typed as the browser would see it. */
export function loadPage(): { window: Window; document: Document } {
  const html = readFileSync(fileURLToPath(new URL("../index.html", import.meta.url)), "utf8");
  const window = new Window();
  window.document.write(html);
  return { window, document: window.document as unknown as Document };
}

export async function until(check: () => boolean, timeoutMs = 5000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!check()) {
    if (Date.now() > deadline) throw new Error("condition not reached in time");
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

export function setInput(document: Document, id: string, value: string): void {
  const node = document.getElementById(id) as HTMLInputElement | null;
  if (!node) throw new Error(`missing #${id}`);
  node.value = value;
}

export function click(document: Document, id: string): void {
  const node = document.getElementById(id) as HTMLButtonElement | null;
  if (!node) throw new Error(`missing #${id}`);
  node.click();
}

export function text(document: Document, id: string): string {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node.textContent ?? "";
}

/** Set the tri-state pick for one attribute to "+", "-" or "". */
export function pick(document: Document, attr: string, value: string): void {
  const picks = document.getElementById("attrPicks");
  if (!picks) throw new Error("missing #attrPicks");
  for (const select of Array.from(picks.querySelectorAll("select"))) {
    const node = select as HTMLSelectElement;
    if (node.dataset.attr === attr) {
      node.value = value;
      return;
    }
  }
  throw new Error(`no pick for attribute ${attr}`);
}
