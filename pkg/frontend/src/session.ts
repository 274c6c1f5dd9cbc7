/**
 * The annotate loop: fetch task, label, submit, auto-advance.
 *
 * Failures are non-destructive: a submit that cannot reach the service
 * keeps the task and the ticked labels so `retry()` can resend them,
 * and a failed fetch can simply be retried. Rejections the server would
 * never accept (HTTP 4xx) surface as errors without wiping state either.
 */

import { ApiError, ServiceClient, Task } from "./api.js";
import {
  ChecklistState,
  emptyChecklist,
  isComplete,
  toggleFlag,
  toggleNoError,
  toPayload,
} from "./labels.js";

export type SessionPhase =
  | "idle"
  | "loading"
  | "labeling"
  | "submitting"
  | "done"
  | "error";

export interface SessionSnapshot {
  phase: SessionPhase;
  task: Task | null;
  checklist: ChecklistState;
  submitted: number;
  lastError: string | null;
}

type Listener = (snapshot: SessionSnapshot) => void;

export class AnnotationSession {
  private phase: SessionPhase = "idle";
  private task: Task | null = null;
  private checklist: ChecklistState = emptyChecklist();
  private submitted = 0;
  private lastError: string | null = null;
  private failedAction: "fetch" | "submit" | null = null;
  private readonly listeners: Listener[] = [];

  constructor(
    private readonly client: ServiceClient,
    private readonly annotatorId: string,
    private readonly allCodes: readonly string[],
  ) {}

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  snapshot(): SessionSnapshot {
    return {
      phase: this.phase,
      task: this.task,
      checklist: this.checklist,
      submitted: this.submitted,
      lastError: this.lastError,
    };
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) {
      listener(snap);
    }
  }

  canSubmit(): boolean {
    return this.phase === "labeling" && isComplete(this.checklist);
  }

  async start(): Promise<void> {
    this.phase = "loading";
    this.emit();
    try {
      await this.client.register(this.annotatorId);
    } catch (error) {
      this.fail("fetch", error);
      return;
    }
    await this.advance();
  }

  /** Fetch the next task; "done" when the queue is exhausted. */
  async advance(): Promise<void> {
    this.phase = "loading";
    this.emit();
    let task: Task | null;
    try {
      task = await this.client.nextTask(this.annotatorId);
    } catch (error) {
      this.fail("fetch", error);
      return;
    }
    this.task = task;
    this.checklist = emptyChecklist();
    this.lastError = null;
    this.failedAction = null;
    this.phase = task === null ? "done" : "labeling";
    this.emit();
  }

  toggleFlag(code: string): void {
    if (this.phase !== "labeling" || !this.allCodes.includes(code)) {
      return;
    }
    this.checklist = toggleFlag(this.checklist, code);
    this.emit();
  }

  toggleNoError(): void {
    if (this.phase !== "labeling") {
      return;
    }
    this.checklist = toggleNoError(this.checklist);
    this.emit();
  }

  async submit(): Promise<void> {
    if (!this.canSubmit() || this.task === null) {
      return;
    }
    this.phase = "submitting";
    this.emit();
    try {
      await this.client.submit(
        this.task.task_id,
        this.annotatorId,
        toPayload(this.checklist, this.allCodes),
      );
    } catch (error) {
      this.fail("submit", error);
      return;
    }
    this.submitted += 1;
    await this.advance();
  }

  /** Re-run whatever failed last, with state (labels included) intact. */
  async retry(): Promise<void> {
    if (this.phase !== "error") {
      return;
    }
    if (this.failedAction === "submit" && this.task !== null) {
      this.phase = "labeling";
      this.emit();
      await this.submit();
    } else {
      await this.advance();
    }
  }

  private fail(action: "fetch" | "submit", error: unknown): void {
    this.failedAction = action;
    this.lastError =
      error instanceof ApiError
        ? `${error.message}: ${JSON.stringify(error.detail)}`
        : error instanceof Error
          ? error.message
          : String(error);
    this.phase = "error";
    this.emit();
  }
}
