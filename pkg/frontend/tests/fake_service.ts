/**
 * Scripted in-memory stand-in for the annotation service, speaking the
 * same wire shapes. Supports fault injection (network failures) so the
 * session's retry behaviour can be tested hermetically.
 */

import { LabelsPayload } from "../src/api.js";

export interface FakeServiceOptions {
  items: number;
  failNextRequests?: number;
}

export interface RecordedSubmission {
  task_id: string;
  annotator_id: string;
  labels: LabelsPayload;
}

export class FakeService {
  submissions: RecordedSubmission[] = [];
  registered: string[] = [];
  private cursor = 0;
  private failBudget: number;

  constructor(private readonly options: FakeServiceOptions) {
    this.failBudget = options.failNextRequests ?? 0;
  }

  failNext(n: number): void {
    this.failBudget = n;
  }

  fetch: typeof globalThis.fetch = async (input, init) => {
    const url = String(input);
    if (this.failBudget > 0) {
      this.failBudget -= 1;
      throw new TypeError("fetch failed (injected)");
    }
    const respond = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    if (url.endsWith("/api/annotators")) {
      const body = JSON.parse(String(init?.body));
      this.registered.push(body.annotator_id);
      return respond(200, { annotator_id: body.annotator_id, created: true });
    }
    if (url.includes("/api/tasks/next")) {
      if (this.cursor >= this.options.items) {
        return respond(200, { task: null });
      }
      const k = this.cursor++;
      return respond(200, {
        task: {
          task_id: `t${k}`,
          item_id: `i${k}`,
          annotator_id: "annA",
          source_text: `Source ${k}.`,
          simplified_text: `Simplified ${k}.`,
        },
      });
    }
    if (url.endsWith("/api/submissions")) {
      const body = JSON.parse(String(init?.body)) as RecordedSubmission;
      const flagged = Object.values(body.labels.flags).some(Boolean);
      if (body.labels.no_error && flagged) {
        return respond(422, {
          detail: { message: "invalid label vector", violations: ["no_error conflict"] },
        });
      }
      this.submissions.push(body);
      return respond(200, { accepted: true, superseding: false });
    }
    throw new Error(`unexpected request: ${url}`);
  };
}
