// DOM rendering. The panes redraw from the store snapshot after every
// round-trip; nothing in here invents a number the server did not send.

import { ApiClient } from "./api.js";
import { figureSvg } from "./figure.js";
import { InactivityTimer } from "./inactivity.js";
import { SessionController } from "./state.js";
import {
  buildSubmission,
  buildTaxonomy,
  findGroup,
  findPredicate,
  slotOptions,
  template,
  type TopicGroup,
} from "./taxonomy.js";
import type { PredicateInfo, ProblemSummary } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  html?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (html !== undefined) node.innerHTML = html;
  return node;
}

interface EntryState {
  group: string | null;
  predicate: PredicateInfo | null;
  slots: (string | null)[];
}

export class App {
  private readonly api: ApiClient;
  private readonly controller: SessionController;
  private readonly timer: InactivityTimer;
  private readonly root: HTMLElement;

  private problems: ProblemSummary[] = [];
  private problem: ProblemSummary | null = null;
  private taxonomy: TopicGroup[] = [];
  private entry: EntryState = { group: null, predicate: null, slots: [] };
  private activeTab: "figure" | "outline" = "figure";

  constructor(root: HTMLElement, api: ApiClient, inactivityMs: number) {
    this.root = root;
    this.api = api;
    this.controller = new SessionController(api);
    this.timer = new InactivityTimer(() => {
      void this.controller.requestHint().then(() => this.render());
    }, inactivityMs);
    this.controller.store.subscribe(() => this.render());
  }

  async boot(): Promise<void> {
    try {
      this.problems = await this.api.listProblems();
    } catch {
      this.root.innerHTML =
        '<p class="error">Could not reach the tutor service. Is it running?</p>';
      return;
    }
    this.render();
  }

  private async startSession(problemId: string): Promise<void> {
    this.problem = this.problems.find((p) => p.id === problemId) ?? null;
    if (!this.problem) return;
    this.taxonomy = buildTaxonomy(this.problem.predicates);
    this.entry = { group: null, predicate: null, slots: [] };
    this.activeTab = "figure";
    const ok = await this.controller.start(problemId);
    if (ok) this.timer.start();
    this.render();
  }

  private touch(): void {
    this.timer.touch();
  }

  // -- rendering ---------------------------------------------------------

  render(): void {
    const ui = this.controller.store.snapshot();
    this.root.innerHTML = "";
    this.root.appendChild(this.renderHeader());
    if (!this.problem || !ui.server) return;

    const grid = el("div", "panes");
    grid.appendChild(this.renderProblemPane());
    grid.appendChild(this.renderSentencesPane());
    grid.appendChild(this.renderConversationPane());
    this.root.appendChild(grid);
    this.renderFailureBar();
  }

  private renderHeader(): HTMLElement {
    const header = el("header", "topbar");
    header.appendChild(el("h1", undefined, "Geometry tutor"));

    const picker = el("select", "problem-picker") as HTMLSelectElement;
    picker.appendChild(new Option("choose a problem...", ""));
    for (const p of this.problems) {
      picker.appendChild(new Option(p.id, p.id, false, p.id === this.problem?.id));
    }
    picker.onchange = () => {
      if (picker.value) void this.startSession(picker.value);
    };
    header.appendChild(picker);

    const ui = this.controller.store.snapshot();
    if (ui.server) {
      const b = ui.server.bestProof;
      const gauge = el("div", "gauge");
      gauge.innerHTML =
        `<div class="gauge-bar"><div class="gauge-fill" style="width:${(b.completion * 100).toFixed(0)}%"></div></div>` +
        `<span class="gauge-text">${esc(b.completionExact)} of your closest proof ` +
        `(${b.checkedInProof}/${b.totalInProof} steps, ${ui.server.proofTotal} proofs known)</span>`;
      header.appendChild(gauge);
    }
    return header;
  }

  private renderProblemPane(): HTMLElement {
    const p = this.problem!;
    const ui = this.controller.store.snapshot();
    const pane = el("section", "pane problem-pane");
    pane.appendChild(el("h2", undefined, "Problem"));
    pane.appendChild(el("p", "statement", esc(p.statement)));
    pane.appendChild(
      el(
        "ul",
        "hypotheses",
        p.hypotheses.map((h) => `<li><code>${esc(h)}</code></li>`).join(""),
      ),
    );

    const tabs = el("div", "tabs");
    const figureTab = el("button", this.activeTab === "figure" ? "tab active" : "tab", "Figure");
    figureTab.onclick = () => {
      this.activeTab = "figure";
      this.render();
    };
    const outlineTab = el(
      "button",
      this.activeTab === "outline" ? "tab active" : "tab",
      "Proof outline",
    ) as HTMLButtonElement;
    // Locked until the server says the redaction view is available.
    outlineTab.disabled = !ui.server?.redactionUnlocked;
    outlineTab.title = outlineTab.disabled
      ? "Locked: establish more of the proof first"
      : "";
    outlineTab.onclick = () => {
      this.activeTab = "outline";
      this.render();
    };
    tabs.append(figureTab, outlineTab);
    pane.appendChild(tabs);

    if (this.activeTab === "figure" || !ui.server?.redactionUnlocked) {
      pane.appendChild(el("div", "figure", figureSvg(p)));
    } else {
      const lines = ui.redaction.lines
        .map((ln) =>
          ln.blank
            ? '<li class="blank">?</li>'
            : `<li><code>${esc(ln.text ?? "")}</code></li>`,
        )
        .join("");
      pane.appendChild(el("ol", "outline", lines));
    }
    return pane;
  }

  private renderSentencesPane(): HTMLElement {
    const p = this.problem!;
    const pane = el("section", "pane sentences-pane");
    pane.appendChild(el("h2", undefined, "Sentences"));

    const groupSel = el("select") as HTMLSelectElement;
    groupSel.appendChild(new Option("topic...", ""));
    for (const g of this.taxonomy) {
      groupSel.appendChild(new Option(g.label, g.label, false, g.label === this.entry.group));
    }
    groupSel.onchange = () => {
      this.touch();
      this.entry = { group: groupSel.value || null, predicate: null, slots: [] };
      this.render();
    };
    pane.appendChild(groupSel);

    const group = this.entry.group ? findGroup(this.taxonomy, this.entry.group) : null;
    if (group) {
      const predSel = el("select") as HTMLSelectElement;
      predSel.appendChild(new Option("statement shape...", ""));
      for (const pred of group.predicates) {
        predSel.appendChild(
          new Option(template(pred), pred.name, false, pred.name === this.entry.predicate?.name),
        );
      }
      predSel.onchange = () => {
        this.touch();
        const pred = predSel.value ? findPredicate(group, predSel.value) : null;
        this.entry = {
          group: this.entry.group,
          predicate: pred,
          slots: pred ? pred.argKinds.map(() => null) : [],
        };
        this.render();
      };
      pane.appendChild(predSel);
    }

    const pred = this.entry.predicate;
    if (pred) {
      const slotRow = el("div", "slots");
      pred.argKinds.forEach((kind, i) => {
        const slotSel = el("select") as HTMLSelectElement;
        slotSel.appendChild(new Option(`${kind}...`, ""));
        for (const obj of slotOptions(p, kind)) {
          slotSel.appendChild(new Option(obj.name, obj.name, false, obj.name === this.entry.slots[i]));
        }
        slotSel.onchange = () => {
          this.touch();
          this.entry.slots[i] = slotSel.value || null;
          this.render();
        };
        slotRow.appendChild(slotSel);
      });
      pane.appendChild(slotRow);

      const text = buildSubmission(pred, this.entry.slots);
      pane.appendChild(el("p", "preview", text ? `<code>${esc(text)}</code>` : "&nbsp;"));
      const submit = el("button", "submit", "Submit statement") as HTMLButtonElement;
      submit.disabled = text === null;
      submit.onclick = () => {
        if (text === null) return;
        this.touch();
        void this.controller.submit(text).then(() => this.render());
      };
      pane.appendChild(submit);
    }

    const ui = this.controller.store.snapshot();
    if (ui.statementsEntered.length > 0) {
      const items = ui.statementsEntered
        .map(
          (s) =>
            `<li class="${s.result}"><code>${esc(s.text)}</code>` +
            `<span class="chip ${s.result}">${s.result}</span></li>`,
        )
        .join("");
      pane.appendChild(el("ul", "entered", items));
    }
    return pane;
  }

  private renderConversationPane(): HTMLElement {
    const ui = this.controller.store.snapshot();
    const pane = el("section", "pane conversation-pane");
    pane.appendChild(el("h2", undefined, "Conversation"));

    if (ui.server?.referral) {
      pane.appendChild(
        el("div", "referral-banner", "The tutor suggests going over this proof with your teacher."),
      );
    }

    const log = el("div", "messages");
    for (const entry of ui.conversation) {
      const cls = entry.role === "tutor" ? `msg tutor ${entry.hintKind ?? ""}` : "msg student";
      log.appendChild(el("div", cls.trim(), esc(entry.text)));
    }
    pane.appendChild(log);

    const hintBtn = el("button", "hint", "Ask for a hint");
    hintBtn.onclick = () => {
      this.touch();
      void this.controller.requestHint().then(() => this.render());
    };
    pane.appendChild(hintBtn);
    return pane;
  }

  private renderFailureBar(): void {
    const failure = this.controller.lastFailure;
    if (!failure) return;
    const bar = el("div", "failure-bar");
    bar.appendChild(el("span", undefined, `Request failed: ${esc(failure.label)}.`));
    const retry = el("button", undefined, "Retry");
    retry.onclick = () => {
      void failure.run().then(() => this.render());
    };
    bar.appendChild(retry);
    this.root.appendChild(bar);
  }
}
