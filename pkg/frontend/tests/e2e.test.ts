// End-to-end: the real client stack against the real service, following
// the recorded bisector session step for step. Create a session, submit
// one matched and one off-graph statement, watch the redaction view unlock,
// then ask for hints until the tutor refers to the teacher. Every payload
// must equal the recorded fixture once session ids are pinned.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/state.js";
import type { HintKind, SessionState, SubmitResponse } from "../src/types.js";
import { loadFixture, hintSteps, step } from "./helpers.js";
import { startService, type LiveService } from "./server.js";

const fixture = loadFixture();
let service: LiveService;

beforeAll(async () => {
  service = await startService();
});

afterAll(async () => {
  await service?.stop();
});

function pin<T>(value: T, sid: string): T {
  return JSON.parse(JSON.stringify(value).replaceAll(sid, "SESSION")) as T;
}

describe("scripted session against a live service", () => {
  it("replays the recorded bisector flow", async () => {
    const api = new ApiClient(service.base);
    const controller = new SessionController(api);
    const store = controller.store;

    // The problem catalogue matches the recording.
    const problems = await api.listProblems();
    const problem = problems.find((p) => p.id === "perp_bisector");
    expect(problem).toEqual(fixture.problem);

    // Create a session on the bisector problem.
    expect(await controller.start("perp_bisector")).toBe(true);
    const sid = controller.activeSessionId!;
    expect(pin(store.snapshot().server, sid)).toEqual(step(fixture, "createSession").response);

    // One matched statement.
    const submit1 = step(fixture, "submitMatched");
    expect(await controller.submit(submit1.request!)).toBe(true);
    let ui = store.snapshot();
    expect(ui.statementsEntered[0]?.result).toBe("matched");
    expect(pin(ui.server, sid)).toEqual((submit1.response as SubmitResponse).state);
    expect(ui.server?.redactionUnlocked).toBe(false);

    // One statement that is not on the proof graph.
    const submit2 = step(fixture, "submitNotOnGraph");
    expect(await controller.submit(submit2.request!)).toBe(true);
    ui = store.snapshot();
    expect(ui.statementsEntered[1]?.result).toBe("notOnGraph");
    expect(pin(ui.server, sid)).toEqual((submit2.response as SubmitResponse).state);

    // The redaction view is still locked, and says so.
    expect(await controller.refresh()).toBe(true);
    expect(store.snapshot().redaction).toEqual(step(fixture, "redactionLocked").response);

    // The second matched statement crosses the threshold and the unlocked
    // outline arrives with the recorded lines and blanks.
    const submit3 = step(fixture, "submitSecondMatched");
    expect(await controller.submit(submit3.request!)).toBe(true);
    ui = store.snapshot();
    expect(ui.server?.redactionUnlocked).toBe(true);
    expect(ui.redaction).toEqual(step(fixture, "redactionUnlocked").response);
    const blanks = ui.redaction.lines.filter((ln) => ln.blank);
    expect(ui.redaction.lines.length).toBe(4);
    expect(blanks.length).toBe(2);

    // Hints, with no submissions in between, until the teacher referral.
    const recordedHints = hintSteps(fixture);
    const kinds: HintKind[] = [];
    for (let i = 0; i < recordedHints.length; i++) {
      expect(await controller.requestHint()).toBe(true);
      const convo = store.snapshot().conversation;
      const last = convo[convo.length - 1]!;
      expect(last.role).toBe("tutor");
      expect(last.hintKind).toBeDefined();
      kinds.push(last.hintKind!);
      expect(
        { kind: last.hintKind, message: last.text },
      ).toEqual(
        {
          kind: (recordedHints[i]!.response as { kind: HintKind }).kind,
          message: (recordedHints[i]!.response as { message: string }).message,
        },
      );
    }
    expect(kinds[kinds.length - 1]).toBe("teacherReferral");
    expect(kinds.slice(0, -1).every((k) => k === "nudge" || k === "redirect")).toBe(true);

    // The final mirrored state is the recorded one: referred, still at 1/2.
    const finalState = step(fixture, "finalState").response as SessionState;
    expect(pin(store.snapshot().server, sid)).toEqual(finalState);
    expect(store.snapshot().server?.referral).toBe(true);

    // The server's transcript of the session matches the recording too.
    expect(await api.getLog(sid)).toBe(step(fixture, "log").response);
  });

  it("keeps sessions independent", async () => {
    const api = new ApiClient(service.base);
    const a = await api.createSession("perp_bisector");
    const b = await api.createSession("perp_bisector");
    expect(a.sessionId).not.toBe(b.sessionId);
    // Hypotheses come pre-checked, so "untouched" means the fresh set.
    const freshChecked = (step(fixture, "createSession").response as SessionState).checked;
    const resp = await api.submitStatement(a.sessionId, "onBisector(X, sAB)");
    const aState = await api.getState(a.sessionId);
    const bState = await api.getState(b.sessionId);
    expect(aState.checked).toContain(resp.node);
    expect(bState.checked).not.toContain(resp.node);
    expect(bState.checked).toEqual(freshChecked);
  });
});
