// Shapes of the JSON payloads the geotutor service returns. The client
// treats every one of these as read-only: the server is the source of
// truth and the UI only ever displays the latest copy it was given.

export interface ObjectInfo {
  name: string;
  kind: string;
}

export interface PredicateInfo {
  name: string;
  argKinds: string[];
}

export interface ProblemSummary {
  id: string;
  statement: string;
  conclusion: string;
  hypotheses: string[];
  superfigure: string[];
  studentFigure: string[];
  objects: ObjectInfo[];
  predicates: PredicateInfo[];
}

export interface BestProof {
  proofIndex: number;
  completion: number;
  completionExact: string;
  checkedInProof: number;
  totalInProof: number;
}

export interface SessionState {
  sessionId: string;
  problemId: string;
  checked: string[];
  rejected: string[];
  bestProof: BestProof;
  redactionUnlocked: boolean;
  proofTotal: number;
  referral: boolean;
}

export type SubmitVerdict = "matched" | "notOnGraph";

export interface SubmitResponse {
  result: SubmitVerdict;
  node: number | null;
  state: SessionState;
}

export interface RedactionLine {
  node: number;
  text: string | null;
  blank: boolean;
}

export interface RedactionView {
  unlocked: boolean;
  lines: RedactionLine[];
}

export type HintKind = "nudge" | "redirect" | "teacherReferral";

export interface HintResponse {
  kind: HintKind;
  message: string;
  targetNode: number | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: unknown;
}
