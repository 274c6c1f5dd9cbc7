/**
 * DOM layer: renders the side-by-side texts, the category-grouped
 * checklist with taxonomy tooltips, progress, and the retry banner.
 *
 * All taxonomy help text is passed through verbatim from the service's
 * taxonomy payload (see `tooltipContent`); this bundle carries no copy
 * of the definitions. The "No error" row is pinned first, followed by
 * the four category sections in fixed A-D order as served.
 */

import { TaxonomyCode, TaxonomyExample, TaxonomyTree } from "./api.js";
import { flagsDisabled, isComplete } from "./labels.js";
import { AnnotationSession, SessionSnapshot } from "./session.js";
import { actionForKey } from "./shortcuts.js";

export interface TooltipContent {
  title: string;
  definition: string;
  examples: TaxonomyExample[];
}

/** Verbatim pass-through of the service payload; no rewording here. */
export function tooltipContent(code: TaxonomyCode): TooltipContent {
  return {
    title: `${code.display}. ${code.name}`,
    definition: code.definition,
    examples: code.examples,
  };
}

export function allCodes(tree: TaxonomyTree): string[] {
  return tree.categories.flatMap((category) => category.codes.map((c) => c.code));
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function buildTooltip(code: TaxonomyCode): HTMLElement {
  const content = tooltipContent(code);
  const tip = el("div", "tooltip");
  tip.appendChild(el("h4", "tooltip-title", content.title));
  tip.appendChild(el("p", "tooltip-definition", content.definition));
  for (const example of content.examples) {
    const block = el("div", "tooltip-example");
    block.appendChild(el("div", "tooltip-source", example.source));
    block.appendChild(el("div", "tooltip-simplification", example.simplification));
    tip.appendChild(block);
  }
  return tip;
}

export class AnnotationView {
  private readonly checkboxes = new Map<string, HTMLInputElement>();
  private noErrorBox!: HTMLInputElement;
  private submitButton!: HTMLButtonElement;
  private retryButton!: HTMLButtonElement;
  private sourcePane!: HTMLElement;
  private simplificationPane!: HTMLElement;
  private statusLine!: HTMLElement;
  private progressLine!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly taxonomy: TaxonomyTree,
    private readonly session: AnnotationSession,
  ) {}

  mount(): void {
    this.root.replaceChildren();

    const texts = el("section", "texts");
    const sourceBlock = el("div", "pane");
    sourceBlock.appendChild(el("h3", undefined, "Source"));
    this.sourcePane = el("div", "pane-body");
    sourceBlock.appendChild(this.sourcePane);
    const simplificationBlock = el("div", "pane");
    simplificationBlock.appendChild(el("h3", undefined, "Simplification"));
    this.simplificationPane = el("div", "pane-body");
    simplificationBlock.appendChild(this.simplificationPane);
    texts.append(sourceBlock, simplificationBlock);

    const checklist = el("section", "checklist");
    checklist.appendChild(this.buildNoErrorRow());
    for (const category of this.taxonomy.categories) {
      const section = el("fieldset", "category");
      const legend = el("legend", undefined, category.label);
      legend.title = category.focus;
      section.appendChild(legend);
      for (const code of category.codes) {
        section.appendChild(this.buildCodeRow(code));
      }
      checklist.appendChild(section);
    }

    const controls = el("section", "controls");
    this.submitButton = el("button", "submit", "Submit (Enter)");
    this.submitButton.addEventListener("click", () => void this.session.submit());
    this.retryButton = el("button", "retry", "Retry");
    this.retryButton.addEventListener("click", () => void this.session.retry());
    this.retryButton.hidden = true;
    this.statusLine = el("div", "status");
    this.progressLine = el("div", "progress");
    controls.append(this.submitButton, this.retryButton, this.statusLine, this.progressLine);

    this.root.append(texts, checklist, controls);

    document.addEventListener("keydown", (event) => this.onKey(event));
    this.session.onChange((snapshot) => this.render(snapshot));
    this.render(this.session.snapshot());
  }

  private buildNoErrorRow(): HTMLElement {
    const row = el("label", "code-row no-error-row");
    this.noErrorBox = el("input");
    this.noErrorBox.type = "checkbox";
    this.noErrorBox.addEventListener("change", () => this.session.toggleNoError());
    row.append(this.noErrorBox, el("span", "code-name", "No error (n)"));
    return row;
  }

  private buildCodeRow(code: TaxonomyCode): HTMLElement {
    const row = el("label", "code-row");
    const box = el("input");
    box.type = "checkbox";
    box.addEventListener("change", () => this.session.toggleFlag(code.code));
    this.checkboxes.set(code.code, box);
    row.append(box, el("span", "code-name", `${code.display}. ${code.name}`));
    row.appendChild(buildTooltip(code));
    return row;
  }

  private onKey(event: KeyboardEvent): void {
    const target = event.target as HTMLElement | null;
    if (target && ["INPUT", "TEXTAREA", "SELECT"].includes(target.tagName)) {
      if (!(target instanceof HTMLInputElement && target.type === "checkbox")) {
        return;
      }
    }
    const action = actionForKey(event.key);
    if (action === null) {
      return;
    }
    event.preventDefault();
    if (action.kind === "submit") {
      void this.session.submit();
    } else if (action.kind === "toggle-no-error") {
      this.session.toggleNoError();
    } else {
      this.session.toggleFlag(action.code);
    }
  }

  private render(snapshot: SessionSnapshot): void {
    const { phase, task, checklist } = snapshot;
    this.sourcePane.textContent = task?.source_text ?? "";
    this.simplificationPane.textContent = task?.simplified_text ?? "";

    this.noErrorBox.checked = checklist.noError;
    const disableFlags = flagsDisabled(checklist) || phase !== "labeling";
    for (const [code, box] of this.checkboxes) {
      box.checked = checklist.flags.has(code);
      box.disabled = disableFlags;
    }
    this.noErrorBox.disabled = phase !== "labeling";
    this.submitButton.disabled = !(phase === "labeling" && isComplete(checklist));
    this.retryButton.hidden = phase !== "error";

    const status: Record<typeof phase, string> = {
      idle: "",
      loading: "Loading next task…",
      labeling: "Tick every error that applies, or No error.",
      submitting: "Submitting…",
      done: "Queue exhausted. Thank you!",
      error: `Service unreachable or rejected the request: ${snapshot.lastError ?? ""}. Your labels are preserved.`,
    };
    this.statusLine.textContent = status[phase];
    this.progressLine.textContent = `Submitted: ${snapshot.submitted}`;
  }
}
