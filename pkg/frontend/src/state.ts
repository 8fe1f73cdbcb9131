// Client-side session state. This is a mirror, not a brain: every number
// and flag in here is copied verbatim from the last server response, and
// the only local additions are presentation records (which statements the
// student entered, the running conversation). A failed request leaves the
// mirror exactly as it was.

import { ApiClient, ApiError } from "./api.js";
import type {
  HintKind,
  HintResponse,
  RedactionView,
  SessionState,
  SubmitResponse,
  SubmitVerdict,
} from "./types.js";

export interface EnteredStatement {
  text: string;
  result: SubmitVerdict | "malformed";
  node: number | null;
}

export interface ConversationEntry {
  role: "student" | "tutor";
  text: string;
  hintKind?: HintKind;
}

export interface UiSessionState {
  problemId: string | null;
  server: SessionState | null;
  statementsEntered: EnteredStatement[];
  conversation: ConversationEntry[];
  redaction: RedactionView;
}

const VERDICT_TEXT: Record<SubmitVerdict, string> = {
  matched: "That step checks out. I have marked it in your proof.",
  notOnGraph: "I do not see how that statement fits any proof of the conclusion.",
};

export const HINT_PROMPT = "May I have a hint?";
export const NOTHING_MISSING_TEXT = "Your proof is already complete; there is nothing left to hint at.";

export function emptyUiState(): UiSessionState {
  return {
    problemId: null,
    server: null,
    statementsEntered: [],
    conversation: [],
    redaction: { unlocked: false, lines: [] },
  };
}

type Listener = (state: UiSessionState) => void;

export class SessionStore {
  private state: UiSessionState = emptyUiState();
  private listeners: Listener[] = [];

  snapshot(): UiSessionState {
    return this.state;
  }

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private commit(next: UiSessionState): void {
    this.state = next;
    for (const fn of this.listeners) fn(next);
  }

  applyCreate(server: SessionState): void {
    this.commit({
      ...emptyUiState(),
      problemId: server.problemId,
      server,
    });
  }

  applyState(server: SessionState): void {
    this.commit({ ...this.state, server });
  }

  applySubmit(text: string, resp: SubmitResponse): void {
    this.commit({
      ...this.state,
      server: resp.state,
      statementsEntered: [
        ...this.state.statementsEntered,
        { text, result: resp.result, node: resp.node },
      ],
      conversation: [
        ...this.state.conversation,
        { role: "student", text },
        { role: "tutor", text: VERDICT_TEXT[resp.result] },
      ],
    });
  }

  // A 400 malformedStatement is a server verdict on the input, not a
  // transport failure, so it is recorded rather than retried.
  applyMalformed(text: string, message: string): void {
    this.commit({
      ...this.state,
      statementsEntered: [
        ...this.state.statementsEntered,
        { text, result: "malformed", node: null },
      ],
      conversation: [
        ...this.state.conversation,
        { role: "student", text },
        { role: "tutor", text: message },
      ],
    });
  }

  applyHint(resp: HintResponse): void {
    this.commit({
      ...this.state,
      conversation: [
        ...this.state.conversation,
        { role: "student", text: HINT_PROMPT },
        { role: "tutor", text: resp.message, hintKind: resp.kind },
      ],
    });
  }

  applyNothingMissing(): void {
    this.commit({
      ...this.state,
      conversation: [
        ...this.state.conversation,
        { role: "student", text: HINT_PROMPT },
        { role: "tutor", text: NOTHING_MISSING_TEXT },
      ],
    });
  }

  applyRedaction(view: RedactionView): void {
    this.commit({ ...this.state, redaction: view });
  }
}

export interface PendingRetry {
  label: string;
  run: () => Promise<void>;
}

// Drives the API on behalf of the panes. Every successful call lands in the
// store; a transport or server failure is parked as a retry affordance and
// the store is left untouched.
export class SessionController {
  readonly store: SessionStore;
  private readonly api: ApiClient;
  private sessionId: string | null = null;
  lastFailure: PendingRetry | null = null;

  constructor(api: ApiClient, store: SessionStore = new SessionStore()) {
    this.api = api;
    this.store = store;
  }

  get activeSessionId(): string | null {
    return this.sessionId;
  }

  private async guarded(label: string, action: () => Promise<void>): Promise<boolean> {
    try {
      await action();
      this.lastFailure = null;
      return true;
    } catch {
      this.lastFailure = { label, run: () => this.guarded(label, action).then(() => undefined) };
      return false;
    }
  }

  start(problemId: string): Promise<boolean> {
    return this.guarded(`start session on ${problemId}`, async () => {
      const state = await this.api.createSession(problemId);
      this.sessionId = state.sessionId;
      this.store.applyCreate(state);
    });
  }

  // The follow-up fetches live in their own guarded steps: if one of them
  // dies on the wire, the retry replays only the idempotent GET instead of
  // re-posting the statement or burning another hint.
  async submit(text: string): Promise<boolean> {
    const sid = this.requireSession();
    let unlocked = false;
    const ok = await this.guarded(`submit ${text}`, async () => {
      let resp;
      try {
        resp = await this.api.submitStatement(sid, text);
      } catch (err) {
        if (err instanceof ApiError && err.code === "malformedStatement") {
          this.store.applyMalformed(text, err.message);
          return;
        }
        throw err;
      }
      this.store.applySubmit(text, resp);
      unlocked = resp.state.redactionUnlocked;
    });
    if (!ok || !unlocked) return ok;
    return this.guarded("fetch the proof outline", async () => {
      this.store.applyRedaction(await this.api.getRedaction(sid));
    });
  }

  async requestHint(): Promise<boolean> {
    const sid = this.requireSession();
    let gotHint = false;
    const ok = await this.guarded("request a hint", async () => {
      let hint;
      try {
        hint = await this.api.getHint(sid);
      } catch (err) {
        if (err instanceof ApiError && err.code === "nothingMissing") {
          this.store.applyNothingMissing();
          return;
        }
        throw err;
      }
      this.store.applyHint(hint);
      gotHint = true;
    });
    if (!ok || !gotHint) return ok;
    // Referral is part of the server state, so mirror it after the hint.
    return this.guarded("refresh session state", async () => {
      this.store.applyState(await this.api.getState(sid));
    });
  }

  refresh(): Promise<boolean> {
    const sid = this.requireSession();
    return this.guarded("refresh session state", async () => {
      this.store.applyState(await this.api.getState(sid));
      this.store.applyRedaction(await this.api.getRedaction(sid));
    });
  }

  private requireSession(): string {
    if (this.sessionId === null) throw new Error("no active session");
    return this.sessionId;
  }
}
