/**
 * Entry point: ask for the annotator id, connect to the service, mount
 * the workspace. The service URL defaults to the page's own origin and
 * can be overridden with ?service=http://host:port (the service allows
 * cross-origin requests for local setups).
 */

import { ServiceClient } from "./api.js";
import { AnnotationSession } from "./session.js";
import { allCodes, AnnotationView } from "./view.js";

function serviceUrl(): string {
  const override = new URLSearchParams(window.location.search).get("service");
  return (override ?? window.location.origin).replace(/\/$/, "");
}

async function boot(annotatorId: string): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app container");
  }
  const client = new ServiceClient(serviceUrl());
  const taxonomy = await client.taxonomy();
  const session = new AnnotationSession(client, annotatorId, allCodes(taxonomy));
  new AnnotationView(root, taxonomy, session).mount();
  await session.start();
}

function mountLogin(): void {
  const form = document.getElementById("login") as HTMLFormElement | null;
  const field = document.getElementById("annotator-id") as HTMLInputElement | null;
  if (!form || !field) {
    return;
  }
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const annotatorId = field.value.trim();
    if (!annotatorId) {
      return;
    }
    form.hidden = true;
    void boot(annotatorId).catch((error) => {
      form.hidden = false;
      const note = document.getElementById("login-error");
      if (note) {
        note.textContent = `Could not reach the service: ${String(error)}`;
      }
    });
  });
}

mountLogin();
