// DOM wiring for the expert console. All lookups go through the document
// handed in, so the same code runs in a real browser and under a DOM
// emulation in tests.

import { ConsoleState, ExpertConsole } from "./console.js";
import { ConsortexClient, ServiceClient } from "./protocol.js";
import { implicationText, questionText } from "./format.js";

export interface WireOptions {
  /** Poll cadence while waiting for work. */
  pollMs?: number;
  /** Client factory, replaceable in tests. */
  makeClient?: (baseUrl: string) => ServiceClient;
}

export interface ConsoleHandle {
  current(): ExpertConsole | null;
  stop(): void;
}

export function wire(doc: Document, options: WireOptions = {}): ConsoleHandle {
  const el = <T extends HTMLElement>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
  };

  const serverUrl = el<HTMLInputElement>("serverUrl");
  const sessionId = el<HTMLInputElement>("sessionId");
  const blockIndex = el<HTMLInputElement>("blockIndex");
  const expertName = el<HTMLInputElement>("expertName");
  const joinBtn = el<HTMLButtonElement>("joinBtn");
  const pollBtn = el<HTMLButtonElement>("pollBtn");
  const joinInfo = el("joinInfo");
  const errorBox = el("errorBox");
  const phasePill = el("phasePill");
  const taskCard = el("taskCard");
  const taskKind = el("taskKind");
  const taskTitle = el("taskTitle");
  const taskQuestion = el("taskQuestion");
  const attrPicks = el("attrPicks");
  const queryActions = el("queryActions");
  const combineActions = el("combineActions");
  const exName = el<HTMLInputElement>("exName");
  const acceptBtn = el<HTMLButtonElement>("acceptBtn");
  const refuteBtn = el<HTMLButtonElement>("refuteBtn");
  const combineKnownBtn = el<HTMLButtonElement>("combineKnownBtn");
  const combineUnknownBtn = el<HTMLButtonElement>("combineUnknownBtn");
  const reportCard = el("reportCard");
  const reportPre = el("reportPre");
  const logBox = el("logBox");

  const makeClient = options.makeClient ?? ((base: string) => new ConsortexClient(base));
  const pollMs = options.pollMs ?? 400;

  const origin = doc.defaultView?.location?.origin;
  if (!serverUrl.value && origin && origin.startsWith("http")) {
    serverUrl.value = origin;
  }

  let active: ExpertConsole | null = null;
  let timer: ReturnType<typeof setInterval> | null = null;
  let inFlight = false;
  let renderedTask = "";

  function stopTimer(): void {
    if (timer !== null) clearInterval(timer);
    timer = null;
  }

  function startTimer(): void {
    stopTimer();
    timer = setInterval(() => {
      if (!active || inFlight || active.state.stage !== "idle") return;
      inFlight = true;
      active.refresh().finally(() => {
        inFlight = false;
      });
    }, pollMs);
  }

  function renderPicks(block: string[]): void {
    attrPicks.innerHTML = "";
    for (const attr of block) {
      const row = doc.createElement("div");
      const name = doc.createElement("span");
      name.className = "mono";
      name.textContent = attr;
      const select = doc.createElement("select");
      select.dataset.attr = attr;
      for (const [value, label] of [
        ["", "leave out"],
        ["+", "present"],
        ["-", "absent"],
      ]) {
        const opt = doc.createElement("option");
        opt.value = value;
        opt.textContent = label;
        select.appendChild(opt);
      }
      row.appendChild(name);
      row.appendChild(select);
      attrPicks.appendChild(row);
    }
  }

  function collectPicks(): { present: string[]; absent: string[] } {
    const present: string[] = [];
    const absent: string[] = [];
    for (const select of Array.from(attrPicks.querySelectorAll("select"))) {
      const attr = (select as HTMLSelectElement).dataset.attr ?? "";
      const value = (select as HTMLSelectElement).value;
      if (value === "+") present.push(attr);
      if (value === "-") absent.push(attr);
    }
    return { present, absent };
  }

  function render(state: ConsoleState): void {
    phasePill.textContent = state.phase ? `${state.stage} (${state.phase})` : state.stage;
    errorBox.textContent = state.error ?? "";
    if (state.token) {
      joinInfo.textContent = `${state.expert} in ${state.session}, block: ${state.block.join(" ")}, token ${state.token}`;
    }

    const task = state.task;
    if (task && task.kind !== "none") {
      taskCard.classList.remove("hidden");
      const key = `${task.kind}:${task.queryId}`;
      if (key !== renderedTask) {
        renderedTask = key;
        renderPicks(state.block);
        exName.value = "";
      }
      if (task.kind === "query") {
        taskKind.textContent = `Query ${task.queryId}`;
        taskTitle.textContent = implicationText(task.premise, task.conclusion);
        taskQuestion.textContent = questionText(task.premise, task.conclusion);
        queryActions.classList.remove("hidden");
        combineActions.classList.add("hidden");
      } else {
        taskKind.textContent = `Combine ${task.queryId}`;
        taskTitle.textContent = task.name;
        taskQuestion.textContent =
          "Another party refuted with this object. Share what you know about it.";
        queryActions.classList.add("hidden");
        combineActions.classList.remove("hidden");
      }
    } else {
      taskCard.classList.add("hidden");
      renderedTask = "";
    }

    if (state.result) {
      reportCard.classList.remove("hidden");
      reportPre.textContent = state.result.report;
    }
    logBox.textContent = state.log.join("\n");
    if (state.stage === "finished") stopTimer();
  }

  joinBtn.onclick = () => {
    const base = serverUrl.value.trim();
    const session = sessionId.value.trim();
    const block = Number.parseInt(blockIndex.value.trim(), 10);
    if (!base || !session || Number.isNaN(block)) {
      errorBox.textContent = "server, session and block index are required";
      return;
    }
    stopTimer();
    active = new ExpertConsole(makeClient(base));
    active.subscribe(render);
    void active.join(session, block, expertName.value.trim()).then(() => startTimer());
  };

  pollBtn.onclick = () => {
    void active?.refresh();
  };
  acceptBtn.onclick = () => {
    void active?.accept();
  };
  refuteBtn.onclick = () => {
    if (!active) return;
    const { present, absent } = collectPicks();
    void active.refute(exName.value, present, absent);
  };
  combineKnownBtn.onclick = () => {
    if (!active) return;
    const { present, absent } = collectPicks();
    void active.answerCombine(true, present, absent);
  };
  combineUnknownBtn.onclick = () => {
    void active?.answerCombine(false);
  };

  return {
    current: () => active,
    stop: () => stopTimer(),
  };
}
