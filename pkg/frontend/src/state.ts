// Trainer state and transitions. Every formula string held here came from a
// service response verbatim; the client never rewrites anything itself.

import { Api, ApiError, ExerciseSummary, Move, StepRecord } from "./api.js";

export type HistoryEntry = {
  step: StepRecord;
  beforeMinimal: string;
  beforeFull: string;
  afterMinimal: string;
  afterFull: string;
};

export type Draft = {
  exerciseId: string;
  startMinimal: string;
  startFull: string;
  history: HistoryEntry[];
};

export type Listener = () => void;

const DRAFT_PREFIX = "discreta-draft:";

export class TrainerState {
  exercise: ExerciseSummary | null = null;
  startMinimal = "";
  startFull = "";
  currentMinimal = "";
  currentFull = "";
  history: HistoryEntry[] = [];
  selectedPath: number[] | null = null;
  moves: Move[] = [];
  goalReached = false;
  busy = false;
  error: string | null = null;
  submitResult: string | null = null;

  private listeners: Listener[] = [];

  constructor(
    readonly api: Api,
    readonly storage: Storage | null = null,
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
    if (this.busy) return undefined;
    this.busy = true;
    this.error = null;
    this.emit();
    try {
      return await work();
    } catch (err) {
      this.error = err instanceof ApiError ? describeApiError(err) : String(err);
      return undefined;
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  async loadExercise(exercise: ExerciseSummary): Promise<void> {
    await this.guarded(async () => {
      const parsed = await this.api.parse(exercise.statement);
      this.exercise = exercise;
      this.startMinimal = parsed.rendered.minimal;
      this.startFull = parsed.rendered.full;
      this.history = [];
      this.selectedPath = null;
      this.moves = [];
      this.goalReached = false;
      this.submitResult = null;
      this.currentMinimal = this.startMinimal;
      this.currentFull = this.startFull;
      const draft = this.loadDraft(exercise.id);
      if (draft && draft.startMinimal === this.startMinimal) {
        this.history = draft.history;
        const last = draft.history[draft.history.length - 1];
        if (last) {
          this.currentMinimal = last.afterMinimal;
          this.currentFull = last.afterFull;
        }
        this.goalReached = this.currentMinimal === (this.exercise.goal ?? "T");
      }
    });
  }

  async selectNode(path: number[]): Promise<void> {
    await this.guarded(async () => {
      const options = await this.api.stepOptions(this.currentMinimal, path);
      this.selectedPath = path;
      this.moves = options.moves;
    });
  }

  async applyMove(law: string, direction: "LR" | "RL"): Promise<void> {
    const path = this.selectedPath;
    if (path === null) return;
    await this.guarded(async () => {
      const goal = this.exercise?.goal ?? "T";
      const applied = await this.api.stepApply(this.currentMinimal, path, law, direction, goal);
      this.history.push({
        step: { law, direction, path: [...path], result: applied.result.minimal },
        beforeMinimal: this.currentMinimal,
        beforeFull: this.currentFull,
        afterMinimal: applied.result.minimal,
        afterFull: applied.result.full,
      });
      this.currentMinimal = applied.result.minimal;
      this.currentFull = applied.result.full;
      this.goalReached = applied.goalReached;
      this.selectedPath = null;
      this.moves = [];
      this.saveDraft();
    });
  }

  undo(): void {
    const last = this.history.pop();
    if (!last) return;
    this.currentMinimal = last.beforeMinimal;
    this.currentFull = last.beforeFull;
    this.goalReached = false;
    this.selectedPath = null;
    this.moves = [];
    this.submitResult = null;
    this.saveDraft();
    this.emit();
  }

  derivation(): unknown {
    return {
      format: 1,
      start: this.startMinimal,
      goal: this.exercise?.goal ?? "T",
      steps: this.history.map((entry) => entry.step),
    };
  }

  async submit(): Promise<void> {
    const exercise = this.exercise;
    if (!exercise) return;
    await this.guarded(async () => {
      const result = await this.api.submit(exercise.id, this.derivation());
      this.submitResult = result.feedback ?? result.verdict;
      if (result.verdict === "valid") {
        this.clearDraft();
      }
    });
  }

  // -- drafts ---------------------------------------------------------------

  private draftKey(exerciseId: string): string {
    return DRAFT_PREFIX + exerciseId;
  }

  private saveDraft(): void {
    if (!this.storage || !this.exercise) return;
    const draft: Draft = {
      exerciseId: this.exercise.id,
      startMinimal: this.startMinimal,
      startFull: this.startFull,
      history: this.history,
    };
    this.storage.setItem(this.draftKey(this.exercise.id), JSON.stringify(draft));
  }

  private loadDraft(exerciseId: string): Draft | null {
    if (!this.storage) return null;
    const raw = this.storage.getItem(this.draftKey(exerciseId));
    if (!raw) return null;
    try {
      return JSON.parse(raw) as Draft;
    } catch {
      return null;
    }
  }

  private clearDraft(): void {
    if (this.storage && this.exercise) {
      this.storage.removeItem(this.draftKey(this.exercise.id));
    }
  }
}

function describeApiError(err: ApiError): string {
  const detail = err.payload["detail"] ?? err.payload["error"] ?? "request failed";
  return `service error (${err.status}): ${String(detail)}`;
}
