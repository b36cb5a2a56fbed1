/**
 * Typed client for the session service wire protocol.
 *
 * Every operation is a POST of a JSON body to /api/<op>; responses are JSON
 * with an "ok" flag. Failures carry an error code plus a human message and
 * are surfaced as ServiceError. The client works in the browser and under
 * node 20 (global fetch in both).
 */

export type Phase = "awaiting-answers" | "awaiting-combine" | "done";

export interface SessionOptions {
  mode?: "strong" | "sampled";
  policy?: "all" | "first" | "max-block" | "cost" | "sample";
  costs?: number[];
  sample_size?: number;
  seed?: number;
  combining?: boolean;
  combine_timeout?: number;
  sim_experts?: number[];
}

export interface CreateSessionRequest {
  context?: string;
  target?: string;
  domain?: string;
  options?: SessionOptions;
}

export interface SessionInfo {
  session: string;
  phase: Phase;
  queryId: number;
  attributes: string[];
  blocks: string[][];
}

export interface Registration {
  session: string;
  token: string;
  block: string[];
  attributes: string[];
}

/** What a poll hands the expert: a query to judge, a combine request, or nothing. */
export type PollTask =
  | { kind: "query"; queryId: number; premise: string[]; conclusion: string[]; block: string[] }
  | { kind: "combine"; queryId: number; name: string; block: string[] }
  | { kind: "none"; phase: Phase; queryId: number };

export interface AnswerAck {
  ack: boolean;
  phase: Phase;
  queryId: number;
}

export interface ResultMeta {
  queries: number;
  accepts: number;
  refutes: number;
  nulls: number;
  repairs: number;
  deferred: number;
  interval: boolean;
}

export interface SessionResult {
  session: string;
  report: string;
  base: string[];
  deferred: string[];
  examples: string[];
  meta: ResultMeta;
}

export class ServiceError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.name = "ServiceError";
    this.code = code;
    this.status = status;
  }
}

/** The slice of the protocol the console needs; implemented by ConsortexClient. */
export interface ServiceClient {
  registerExpert(session: string, block: number, name?: string): Promise<Registration>;
  poll(session: string, token: string): Promise<PollTask>;
  accept(session: string, token: string, queryId: number): Promise<AnswerAck>;
  refute(
    session: string,
    token: string,
    queryId: number,
    name: string,
    present: string[],
    absent: string[],
  ): Promise<AnswerAck>;
  answerCombine(
    session: string,
    token: string,
    queryId: number,
    known: boolean,
    present?: string[],
    absent?: string[],
  ): Promise<AnswerAck>;
  result(session: string): Promise<SessionResult>;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ConsortexClient implements ServiceClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async post(op: string, body: Record<string, unknown>): Promise<Record<string, unknown>> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/${op}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    let payload: Record<string, unknown> = {};
    try {
      payload = (await resp.json()) as Record<string, unknown>;
    } catch {
      payload = {};
    }
    if (!resp.ok || payload.ok !== true) {
      const code = typeof payload.error === "string" ? payload.error : "internal";
      const message = typeof payload.message === "string" ? payload.message : `http ${resp.status}`;
      throw new ServiceError(code, message, resp.status);
    }
    return payload;
  }

  async health(): Promise<boolean> {
    const resp = await this.fetchImpl(`${this.baseUrl}/healthz`);
    if (!resp.ok) return false;
    const payload = (await resp.json()) as { ok?: unknown };
    return payload.ok === true;
  }

  async createSession(req: CreateSessionRequest): Promise<SessionInfo> {
    const payload = await this.post("create-session", { ...req });
    return {
      session: payload.session as string,
      phase: payload.phase as Phase,
      queryId: payload.query_id as number,
      attributes: payload.attributes as string[],
      blocks: payload.blocks as string[][],
    };
  }

  async registerExpert(session: string, block: number, name?: string): Promise<Registration> {
    const body: Record<string, unknown> = { session, block };
    if (name !== undefined) body.name = name;
    const payload = await this.post("register-expert", body);
    return {
      session: payload.session as string,
      token: payload.token as string,
      block: payload.block as string[],
      attributes: payload.attributes as string[],
    };
  }

  async poll(session: string, token: string): Promise<PollTask> {
    const payload = await this.post("poll", { session, token });
    const queryId = payload.query_id as number;
    if (payload.kind === "query") {
      return {
        kind: "query",
        queryId,
        premise: payload.premise as string[],
        conclusion: payload.conclusion as string[],
        block: payload.block as string[],
      };
    }
    if (payload.kind === "combine") {
      return { kind: "combine", queryId, name: payload.name as string, block: payload.block as string[] };
    }
    return { kind: "none", phase: payload.phase as Phase, queryId };
  }

  private ack(payload: Record<string, unknown>): AnswerAck {
    return {
      ack: payload.ack === true,
      phase: payload.phase as Phase,
      queryId: payload.query_id as number,
    };
  }

  async accept(session: string, token: string, queryId: number): Promise<AnswerAck> {
    const payload = await this.post("answer", {
      session,
      token,
      kind: "query",
      query_id: queryId,
      verdict: "accept",
    });
    return this.ack(payload);
  }

  async refute(
    session: string,
    token: string,
    queryId: number,
    name: string,
    present: string[],
    absent: string[],
  ): Promise<AnswerAck> {
    const payload = await this.post("answer", {
      session,
      token,
      kind: "query",
      query_id: queryId,
      verdict: "refute",
      name,
      present,
      absent,
    });
    return this.ack(payload);
  }

  async answerCombine(
    session: string,
    token: string,
    queryId: number,
    known: boolean,
    present: string[] = [],
    absent: string[] = [],
  ): Promise<AnswerAck> {
    const body: Record<string, unknown> = { session, token, kind: "combine", query_id: queryId, known };
    if (known) {
      body.present = present;
      body.absent = absent;
    }
    const payload = await this.post("answer", body);
    return this.ack(payload);
  }

  async result(session: string): Promise<SessionResult> {
    const payload = await this.post("result", { session });
    return {
      session: payload.session as string,
      report: payload.report as string,
      base: payload.base as string[],
      deferred: payload.deferred as string[],
      examples: payload.examples as string[],
      meta: payload.meta as unknown as ResultMeta,
    };
  }

  async status(session: string): Promise<Record<string, unknown>> {
    return this.post("session-status", { session });
  }

  async combineTimeout(session: string): Promise<Phase> {
    const payload = await this.post("combine-timeout", { session });
    return payload.phase as Phase;
  }
}
