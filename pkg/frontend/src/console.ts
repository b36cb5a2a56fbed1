/**
 * Session-side state machine for one expert.
 *
 * The console joins a session under a block index, then alternates between
 * polling for work and submitting answers. It never inspects server state
 * beyond what the wire protocol exposes to a registered expert, so several
 * consoles (and simulated parties on the server) can share one session.
 */

import {
  AnswerAck,
  PollTask,
  Phase,
  ServiceClient,
  ServiceError,
  SessionResult,
} from "./protocol.js";
import { exampleLine, implicationText } from "./format.js";

export type Stage = "detached" | "idle" | "query" | "combine" | "finished";

export interface ConsoleState {
  stage: Stage;
  session: string | null;
  expert: string | null;
  token: string | null;
  block: string[];
  attributes: string[];
  phase: Phase | null;
  task: PollTask | null;
  result: SessionResult | null;
  log: string[];
  error: string | null;
}

type Listener = (state: ConsoleState) => void;

function freshState(): ConsoleState {
  return {
    stage: "detached",
    session: null,
    expert: null,
    token: null,
    block: [],
    attributes: [],
    phase: null,
    task: null,
    result: null,
    log: [],
    error: null,
  };
}

export class ExpertConsole {
  private readonly client: ServiceClient;
  private readonly listeners: Listener[] = [];
  readonly state: ConsoleState = freshState();

  constructor(client: ServiceClient) {
    this.client = client;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private note(line: string): void {
    this.state.log.push(line);
  }

  private fail(err: unknown): void {
    if (err instanceof ServiceError) {
      this.state.error = `${err.code}: ${err.message}`;
      this.note(`error ${err.code}: ${err.message}`);
      this.emit();
      return;
    }
    throw err;
  }

  async join(session: string, block: number, name: string): Promise<void> {
    this.state.error = null;
    try {
      const reg = await this.client.registerExpert(session, block, name || undefined);
      this.state.session = reg.session;
      this.state.token = reg.token;
      this.state.block = reg.block;
      this.state.attributes = reg.attributes;
      this.state.expert = name || `expert ${block}`;
      this.state.stage = "idle";
      this.note(`joined ${reg.session} as ${this.state.expert} (${reg.block.join(" ")})`);
      this.emit();
      await this.refresh();
    } catch (err) {
      this.fail(err);
    }
  }

  /** One poll round; no-op unless joined and waiting for work. */
  async refresh(): Promise<void> {
    if (!this.state.session || !this.state.token) return;
    if (this.state.stage === "finished") return;
    this.state.error = null;
    try {
      const task = await this.client.poll(this.state.session, this.state.token);
      if (task.kind === "none") {
        this.state.task = null;
        this.state.phase = task.phase;
        if (task.phase === "done") {
          await this.finish();
          return;
        }
        this.state.stage = "idle";
      } else {
        const changed =
          this.state.task === null ||
          this.state.task.kind !== task.kind ||
          this.state.task.queryId !== task.queryId;
        this.state.task = task;
        this.state.stage = task.kind;
        if (changed && task.kind === "query") {
          this.note(`query ${task.queryId}: ${implicationText(task.premise, task.conclusion)}`);
        }
        if (changed && task.kind === "combine") {
          this.note(`combine ${task.queryId}: your view of ${task.name}?`);
        }
      }
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  private async applyAck(ack: AnswerAck): Promise<void> {
    this.state.task = null;
    this.state.phase = ack.phase;
    if (ack.phase === "done") {
      await this.finish();
      return;
    }
    this.state.stage = "idle";
    this.emit();
  }

  private async finish(): Promise<void> {
    this.state.stage = "finished";
    this.state.task = null;
    this.state.phase = "done";
    if (this.state.result === null && this.state.session) {
      this.state.result = await this.client.result(this.state.session);
      this.note("session finished");
    }
    this.emit();
  }

  async accept(): Promise<void> {
    const task = this.state.task;
    if (!task || task.kind !== "query") {
      this.state.error = "no query to answer";
      this.emit();
      return;
    }
    this.state.error = null;
    try {
      const ack = await this.client.accept(this.state.session!, this.state.token!, task.queryId);
      this.note(`accepted query ${task.queryId}`);
      await this.applyAck(ack);
    } catch (err) {
      this.fail(err);
    }
  }

  async refute(name: string, present: string[], absent: string[]): Promise<void> {
    const task = this.state.task;
    if (!task || task.kind !== "query") {
      this.state.error = "no query to answer";
      this.emit();
      return;
    }
    if (!name.trim()) {
      this.state.error = "counterexample needs a name";
      this.emit();
      return;
    }
    if (present.some((a) => absent.includes(a))) {
      this.state.error = "an attribute cannot be both present and absent";
      this.emit();
      return;
    }
    this.state.error = null;
    try {
      const ack = await this.client.refute(
        this.state.session!,
        this.state.token!,
        task.queryId,
        name.trim(),
        present,
        absent,
      );
      this.note(`refuted query ${task.queryId} with ${exampleLine(name.trim(), present, absent)}`);
      await this.applyAck(ack);
    } catch (err) {
      this.fail(err);
    }
  }

  async answerCombine(known: boolean, present: string[] = [], absent: string[] = []): Promise<void> {
    const task = this.state.task;
    if (!task || task.kind !== "combine") {
      this.state.error = "no combine request pending";
      this.emit();
      return;
    }
    if (known && present.some((a) => absent.includes(a))) {
      this.state.error = "an attribute cannot be both present and absent";
      this.emit();
      return;
    }
    this.state.error = null;
    try {
      const ack = await this.client.answerCombine(
        this.state.session!,
        this.state.token!,
        task.queryId,
        known,
        present,
        absent,
      );
      this.note(
        known
          ? `shared view of ${task.name}: ${exampleLine(task.name, present, absent)}`
          : `does not know ${task.name}`,
      );
      await this.applyAck(ack);
    } catch (err) {
      this.fail(err);
    }
  }
}
