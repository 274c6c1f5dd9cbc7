/**
 * Typed client for the annotation service's wire protocol.
 *
 * The fetch implementation is injected so the session logic can be
 * exercised against a scripted transport in tests.
 */

export interface TaxonomyExample {
  source: string;
  simplification: string;
}

export interface TaxonomyCode {
  code: string;
  display: string;
  name: string;
  definition: string;
  examples: TaxonomyExample[];
}

export interface TaxonomyCategory {
  key: string;
  letter: string;
  label: string;
  focus: string;
  codes: TaxonomyCode[];
}

export interface TaxonomyTree {
  kind: "taxonomy";
  codes: string[];
  categories: TaxonomyCategory[];
}

export interface Task {
  task_id: string;
  item_id: string;
  annotator_id: string;
  source_text: string;
  simplified_text: string;
}

export interface LabelsPayload {
  no_error: boolean;
  flags: Record<string, boolean>;
}

export interface SubmissionAck {
  accepted: boolean;
  superseding: boolean;
}

export interface AnnotatorProgress {
  annotator_id: string;
  assigned: number;
  submitted: number;
  pending_task_id: string | null;
}

/** Non-2xx response; carries the server's detail payload when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = typeof globalThis.fetch;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = globalThis.fetch,
  ) {}

  private async request<T>(path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: body === undefined ? "GET" : "POST",
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let payload: unknown = null;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = text;
      }
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(response.status, `${path} failed (${response.status})`, detail);
    }
    return payload as T;
  }

  async register(annotatorId: string): Promise<void> {
    await this.request("/api/annotators", { annotator_id: annotatorId });
  }

  async nextTask(annotatorId: string): Promise<Task | null> {
    const payload = await this.request<{ task: Task | null }>(
      `/api/tasks/next?annotator_id=${encodeURIComponent(annotatorId)}`,
    );
    return payload.task;
  }

  submit(taskId: string, annotatorId: string, labels: LabelsPayload): Promise<SubmissionAck> {
    return this.request("/api/submissions", {
      task_id: taskId,
      annotator_id: annotatorId,
      labels,
    });
  }

  taxonomy(): Promise<TaxonomyTree> {
    return this.request("/api/taxonomy");
  }

  progress(annotatorId: string): Promise<AnnotatorProgress> {
    return this.request(`/api/progress?annotator_id=${encodeURIComponent(annotatorId)}`);
  }
}
