// The guided statement builder. The student narrows down through topic
// groups to a predicate, then fills one slot per argument. The topic tree
// is derived from the predicate declarations the service reports for the
// problem, so the client never hardcodes vocabulary.

import type { ObjectInfo, PredicateInfo, ProblemSummary } from "./types.js";

export interface TopicGroup {
  label: string;
  predicates: PredicateInfo[];
}

function groupLabel(argKinds: string[]): string {
  const kinds = [...new Set(argKinds)].sort();
  return kinds.join(" & ");
}

// Group predicates by the set of object kinds they talk about, so the
// first narrowing list reads "point", "line & point", "point & segment"...
export function buildTaxonomy(predicates: PredicateInfo[]): TopicGroup[] {
  const groups = new Map<string, PredicateInfo[]>();
  for (const pred of predicates) {
    const label = groupLabel(pred.argKinds);
    const bucket = groups.get(label) ?? [];
    bucket.push(pred);
    groups.set(label, bucket);
  }
  return [...groups.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([label, preds]) => ({
      label,
      predicates: [...preds].sort((x, y) => (x.name < y.name ? -1 : 1)),
    }));
}

export function findGroup(taxonomy: TopicGroup[], label: string): TopicGroup | null {
  return taxonomy.find((g) => g.label === label) ?? null;
}

export function findPredicate(group: TopicGroup, name: string): PredicateInfo | null {
  return group.predicates.find((p) => p.name === name) ?? null;
}

// Display form with one placeholder per slot: "equidistant(point, point, point)".
export function template(pred: PredicateInfo): string {
  return `${pred.name}(${pred.argKinds.join(", ")})`;
}

// Objects the student is allowed to pick for a slot: visible in the student
// figure and of the declared kind. A point never shows up in a line slot.
export function slotOptions(problem: ProblemSummary, kind: string): ObjectInfo[] {
  const visible = new Set(problem.studentFigure);
  return problem.objects.filter((o) => o.kind === kind && visible.has(o.name));
}

// Assemble the submission text, or null while any slot is still empty.
// A null submission must never reach the server.
export function buildSubmission(
  pred: PredicateInfo,
  slots: readonly (string | null)[],
): string | null {
  if (slots.length !== pred.argKinds.length) return null;
  if (slots.some((s) => s === null || s === "")) return null;
  return `${pred.name}(${slots.join(", ")})`;
}
