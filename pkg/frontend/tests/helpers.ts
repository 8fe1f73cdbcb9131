// Shared test plumbing: the recorded fixture and a scripted stand-in for
// fetch that serves canned responses in a fixed order.

import { readFileSync } from "node:fs";
import type { ProblemSummary } from "../src/types.js";

export interface FixtureStep {
  name: string;
  request?: string;
  response: unknown;
}

export interface Fixture {
  problem: ProblemSummary;
  steps: FixtureStep[];
}

export function loadFixture(): Fixture {
  const url = new URL("./fixtures/bisector_flow.json", import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as Fixture;
}

export function step(fixture: Fixture, name: string): FixtureStep {
  const found = fixture.steps.find((s) => s.name === name);
  if (!found) throw new Error(`fixture has no step ${name}`);
  return found;
}

export function hintSteps(fixture: Fixture): FixtureStep[] {
  return fixture.steps.filter((s) => s.name.startsWith("hint"));
}

interface ScriptedCall {
  expect: string;
  status?: number;
  body: unknown;
  fail?: boolean;
}

// Serves queued responses and checks each request hits the expected
// method + path. `fail: true` simulates a transport error.
export class ScriptedFetch {
  private readonly queue: ScriptedCall[] = [];
  readonly seen: string[] = [];

  push(expect: string, body: unknown, status = 200): this {
    this.queue.push({ expect, body, status });
    return this;
  }

  pushFailure(expect: string): this {
    this.queue.push({ expect, body: null, fail: true });
    return this;
  }

  fn = (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const key = `${method} ${input}`;
    this.seen.push(key);
    const call = this.queue.shift();
    if (!call) return Promise.reject(new Error(`unexpected request ${key}`));
    if (call.expect !== key) {
      return Promise.reject(new Error(`expected ${call.expect}, got ${key}`));
    }
    if (call.fail) return Promise.reject(new TypeError("fetch failed"));
    return Promise.resolve(
      new Response(JSON.stringify(call.body), {
        status: call.status,
        headers: { "content-type": "application/json" },
      }),
    );
  };

  assertDrained(): void {
    if (this.queue.length > 0) {
      throw new Error(`scripted fetch still has ${this.queue.length} queued calls`);
    }
  }
}
