"""Session replay scripts.

A replay script drives a tutoring session non-interactively, one command
per line. Blank lines and ``#`` comments are skipped.

    SUBMIT <statement>      submit one statement, e.g. SUBMIT perp(lAB, lBC)
    HINT                    request the next hint
    EXPECT <assertion>      assert on the session state, see below

Assertions:

    EXPECT matched                  last submission matched the graph
    EXPECT notOnGraph               last submission was rejected
    EXPECT completion <n>/<d>       best-proof completion, exact fraction
    EXPECT unlocked true|false      redaction gate state
    EXPECT hint nudge|redirect|teacherReferral   kind of the last hint
    EXPECT blanks <int>             redacted line count in the best proof
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedStatement, ReplayFormatError
from .tutor import Session

_EXPECT_KINDS = ("matched", "notOnGraph", "completion", "unlocked", "hint",
                 "blanks")


@dataclass(frozen=True)
class Command:
    op: str                    # submit | hint | expect
    arg: str
    line: int


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    lines: tuple[str, ...]

    def render(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def parse_script(text: str) -> list[Command]:
    commands = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        op, _, rest = line.partition(" ")
        rest = rest.strip()
        if op == "SUBMIT":
            if not rest:
                raise ReplayFormatError(f"line {lineno}: SUBMIT needs a statement")
            commands.append(Command("submit", rest, lineno))
        elif op == "HINT":
            if rest:
                raise ReplayFormatError(f"line {lineno}: HINT takes no argument")
            commands.append(Command("hint", "", lineno))
        elif op == "EXPECT":
            kind = rest.split(" ", 1)[0]
            if kind not in _EXPECT_KINDS:
                raise ReplayFormatError(
                    f"line {lineno}: unknown assertion {kind!r}")
            commands.append(Command("expect", rest, lineno))
        else:
            raise ReplayFormatError(f"line {lineno}: unknown command {op!r}")
    return commands


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ReplayFormatError(f"bad fraction {text!r}") from exc


def _check(session: Session, assertion: str,
           last_submit: str | None, last_hint: str | None) -> tuple[bool, str]:
    kind, _, arg = assertion.partition(" ")
    arg = arg.strip()
    if kind in ("matched", "notOnGraph"):
        if last_submit is None:
            return False, "no submission yet"
        return last_submit == kind, f"last submission was {last_submit}"
    if kind == "completion":
        want = _parse_fraction(arg)
        got = session.best_proof().completion
        return got == want, f"completion is {got}"
    if kind == "unlocked":
        if arg not in ("true", "false"):
            raise ReplayFormatError(f"unlocked expects true|false, got {arg!r}")
        got = session.redaction_view().unlocked
        return got == (arg == "true"), f"unlocked is {'true' if got else 'false'}"
    if kind == "hint":
        if last_hint is None:
            return False, "no hint requested yet"
        return last_hint == arg, f"last hint was {last_hint}"
    if kind == "blanks":
        try:
            want = int(arg)
        except ValueError as exc:
            raise ReplayFormatError(f"blanks expects an integer, got {arg!r}") from exc
        got = sum(1 for ln in session.redaction_view().lines if ln.blank)
        return got == want, f"{got} blank lines"
    raise ReplayFormatError(f"unknown assertion {kind!r}")


def run_script(session: Session, text: str) -> ReplayResult:
    """Execute a script against a session. Assertion failures are reported
    in the result, not raised; malformed scripts raise ReplayFormatError."""
    out: list[str] = []
    ok = True
    last_submit: str | None = None
    last_hint: str | None = None
    for cmd in parse_script(text):
        if cmd.op == "submit":
            try:
                result, node = session.submit_text(cmd.arg)
            except MalformedStatement as exc:
                last_submit = "malformed"
                out.append(f"line {cmd.line}: SUBMIT {cmd.arg} -> malformed ({exc})")
                continue
            last_submit = result
            where = f" as node {node}" if node is not None else ""
            out.append(f"line {cmd.line}: SUBMIT {cmd.arg} -> {result}{where}")
        elif cmd.op == "hint":
            hint = session.next_hint()
            last_hint = hint.kind
            out.append(f"line {cmd.line}: HINT -> {hint.kind}: {hint.message}")
        else:
            passed, detail = _check(session, cmd.arg, last_submit, last_hint)
            if passed:
                out.append(f"line {cmd.line}: EXPECT {cmd.arg} -> ok")
            else:
                ok = False
                out.append(f"line {cmd.line}: EXPECT {cmd.arg} -> FAIL ({detail})")
    return ReplayResult(ok=ok, lines=tuple(out))
