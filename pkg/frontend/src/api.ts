// Typed client for the stepping service. All engine calls go through one
// serialized queue: the trainer never has two requests in flight, so
// responses can never arrive out of order.

export type Rendered = { minimal: string; full: string; polish: string };

export type Move = { law: string; direction: "LR" | "RL"; preview: string };

export type ParseResponse = { ast: unknown; atoms: string[]; rendered: Rendered };

export type ApplyResponse = { result: Rendered; moves: Move[]; goalReached: boolean };

export type OptionsResponse = { moves: Move[] };

export type StepRecord = {
  law: string;
  direction: "LR" | "RL";
  path: number[];
  result: string;
};

export type ExerciseSummary = {
  id: string;
  kind: string;
  title: string;
  statement: string;
  goal?: string;
};

export type SubmitResponse = { verdict: string; feedback?: string; expected?: unknown };

export class ApiError extends Error {
  constructor(readonly status: number, readonly payload: Record<string, unknown>) {
    super(`${status}: ${JSON.stringify(payload)}`);
  }
}

export class Api {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(readonly baseUrl: string) {}

  private call<T>(path: string, body?: unknown): Promise<T> {
    const run = async (): Promise<T> => {
      const response = await fetch(this.baseUrl + path, {
        method: body === undefined ? "GET" : "POST",
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      const payload = (await response.json()) as Record<string, unknown>;
      if (!response.ok) {
        throw new ApiError(response.status, payload);
      }
      return payload as T;
    };
    const next = this.queue.then(run, run);
    this.queue = next.catch(() => undefined); // keep the chain alive after errors
    return next;
  }

  health(): Promise<{ status: string }> {
    return this.call("/api/health");
  }

  parse(text: string): Promise<ParseResponse> {
    return this.call("/api/parse", { text });
  }

  stepOptions(formula: string, path: number[]): Promise<OptionsResponse> {
    return this.call("/api/step/options", { formula, path });
  }

  stepApply(
    formula: string,
    path: number[],
    law: string,
    direction: "LR" | "RL",
    goal?: string,
  ): Promise<ApplyResponse> {
    return this.call("/api/step/apply", { formula, path, law, direction, goal });
  }

  exercises(): Promise<{ exercises: ExerciseSummary[] }> {
    return this.call("/api/exercises");
  }

  submit(exerciseId: string, derivation: unknown): Promise<SubmitResponse> {
    return this.call(`/api/exercises/${exerciseId}/submit`, { derivation });
  }
}
