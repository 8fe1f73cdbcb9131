"""Line-oriented text formats for rule packs (``.qr``) and problems (``.qp``).

Rule pack grammar (``#`` starts a comment, whitespace within lines is free)::

    preddecl := "pred" NAME "/" INT "kinds(" kind ("," kind)* ")"
                ["sym(" gen (";" gen)* ")"]
    gen      := "swap" INT INT | "cycle" INT+ | "full"
    rule     := "rule" NAME "{"
                  "level:" INT "isle:" NAME "tier:" ("coarse"|"fine"|"default")
                  "if:" pattern ("," pattern)* "then:" pattern
                  ["hint:" STRING]
                "}"
    pattern  := NAME "(" term ("," term)* ")"
    term     := NAME | "?" NAME

Problem file grammar::

    problem  := "problem" NAME "{"
                  "objects:" objdecl+ "student:" NAME*
                  "hypotheses:" fact+ "superfigure:" fact*
                  "conclusion:" fact
                "}"
    objdecl  := kind NAME
    fact     := NAME "(" NAME ("," NAME)* ")"

Unknown ``{?Var}`` placeholders in hint strings are left verbatim when a
hint is rendered; the parser does not reject them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DslSyntaxError,
    DuplicateDeclaration,
    MissingConclusion,
    UndeclaredObject,
    UndeclaredPredicate,
)
from .model import (
    KINDS,
    Fact,
    ObjectId,
    PredicateDecl,
    SymmetryGen,
    canonicalize,
)
from .rules import Pattern, Problem, Rule, RuleBase, Variable


@dataclass(frozen=True)
class Token:
    kind: str        # NAME | INT | STRING | PUNCT | EOF
    value: str
    line: int
    col: int


_PUNCT = set("(){},:;/?")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        i, n = 0, len(line)
        while i < n:
            ch = line[i]
            if ch in " \t\r":
                i += 1
                continue
            if ch == "#":
                break
            col = i + 1
            if ch in _PUNCT:
                tokens.append(Token("PUNCT", ch, lineno, col))
                i += 1
            elif ch == '"':
                i += 1
                out = []
                while i < n and line[i] != '"':
                    if line[i] == "\\":
                        if i + 1 >= n:
                            raise DslSyntaxError("unterminated escape", lineno, i + 1)
                        esc = line[i + 1]
                        out.append({"n": "\n", "t": "\t"}.get(esc, esc))
                        i += 2
                    else:
                        out.append(line[i])
                        i += 1
                if i >= n:
                    raise DslSyntaxError("unterminated string", lineno, col)
                i += 1
                tokens.append(Token("STRING", "".join(out), lineno, col))
            elif ch.isdigit():
                j = i
                while j < n and line[j].isdigit():
                    j += 1
                tokens.append(Token("INT", line[i:j], lineno, col))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                tokens.append(Token("NAME", line[i:j], lineno, col))
                i = j
            else:
                raise DslSyntaxError(f"unexpected character {ch!r}", lineno, col)
    last = tokens[-1] if tokens else None
    tokens.append(Token("EOF", "", last.line if last else 1, (last.col + len(last.value)) if last else 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None, what: str = "") -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            wanted = what or (value if value is not None else kind)
            raise DslSyntaxError(
                f"expected {wanted}, found {tok.value!r}" if tok.kind != "EOF"
                else f"expected {wanted}, found end of input",
                tok.line, tok.col)
        return self.next()

    def at_name(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "NAME" and tok.value == value

    def expect_keyword_colon(self, word: str) -> None:
        self.expect("NAME", word)
        self.expect("PUNCT", ":")


def _parse_int(cur: _Cursor) -> int:
    return int(cur.expect("INT").value)


def _parse_generator(cur: _Cursor) -> SymmetryGen:
    tok = cur.expect("NAME", what="'swap', 'cycle' or 'full'")
    if tok.value == "full":
        return SymmetryGen("full")
    if tok.value == "swap":
        return SymmetryGen("swap", (_parse_int(cur), _parse_int(cur)))
    if tok.value == "cycle":
        positions = [_parse_int(cur)]
        while cur.peek().kind == "INT":
            positions.append(_parse_int(cur))
        return SymmetryGen("cycle", tuple(positions))
    raise DslSyntaxError(f"unknown symmetry generator {tok.value!r}", tok.line, tok.col)


def _parse_preddecl(cur: _Cursor, preds: dict[str, PredicateDecl]) -> None:
    name_tok = cur.expect("NAME")
    cur.expect("PUNCT", "/")
    arity = _parse_int(cur)
    cur.expect("NAME", "kinds")
    cur.expect("PUNCT", "(")
    kinds = [cur.expect("NAME").value]
    while cur.peek().value == ",":
        cur.next()
        kinds.append(cur.expect("NAME").value)
    cur.expect("PUNCT", ")")
    for k in kinds:
        if k not in KINDS:
            raise DslSyntaxError(f"unknown kind {k!r}", name_tok.line, name_tok.col)
    if len(kinds) != arity:
        raise DslSyntaxError(
            f"predicate {name_tok.value!r} declares arity {arity} "
            f"but lists {len(kinds)} kinds", name_tok.line, name_tok.col)
    gens: list[SymmetryGen] = []
    if cur.at_name("sym"):
        cur.next()
        cur.expect("PUNCT", "(")
        gens.append(_parse_generator(cur))
        while cur.peek().value == ";":
            cur.next()
            gens.append(_parse_generator(cur))
        cur.expect("PUNCT", ")")
    decl = PredicateDecl(name_tok.value, kinds, gens)
    existing = preds.get(decl.name)
    if existing is not None and existing != decl:
        raise DuplicateDeclaration(
            f"predicate {decl.name!r} redeclared with a different shape "
            f"(line {name_tok.line})")
    preds[decl.name] = decl


def _parse_pattern(cur: _Cursor, preds: dict[str, PredicateDecl]) -> Pattern:
    name_tok = cur.expect("NAME", what="a predicate name")
    decl = preds.get(name_tok.value)
    if decl is None:
        raise UndeclaredPredicate(
            f"predicate {name_tok.value!r} used before declaration "
            f"(line {name_tok.line})")
    cur.expect("PUNCT", "(")
    terms: list = [_parse_term(cur)]
    while cur.peek().value == ",":
        cur.next()
        terms.append(_parse_term(cur))
    cur.expect("PUNCT", ")")
    if len(terms) != decl.arity:
        raise DslSyntaxError(
            f"{decl.name} takes {decl.arity} arguments, found {len(terms)}",
            name_tok.line, name_tok.col)
    return Pattern(predicate=decl, terms=tuple(terms))


def _parse_term(cur: _Cursor):
    tok = cur.peek()
    if tok.value == "?":
        cur.next()
        return Variable(cur.expect("NAME").value)
    return cur.expect("NAME", what="an object name or '?'").value


def _parse_rule(cur: _Cursor, preds: dict[str, PredicateDecl]) -> Rule:
    name_tok = cur.expect("NAME")
    cur.expect("PUNCT", "{")
    cur.expect_keyword_colon("level")
    level = _parse_int(cur)
    cur.expect_keyword_colon("isle")
    isle = cur.expect("NAME").value
    cur.expect_keyword_colon("tier")
    tier_tok = cur.expect("NAME", what="'coarse', 'fine' or 'default'")
    cur.expect_keyword_colon("if")
    premises = [_parse_pattern(cur, preds)]
    while cur.peek().value == ",":
        cur.next()
        premises.append(_parse_pattern(cur, preds))
    cur.expect_keyword_colon("then")
    conclusion = _parse_pattern(cur, preds)
    hint = ""
    if cur.at_name("hint"):
        cur.next()
        cur.expect("PUNCT", ":")
        hint = cur.expect("STRING").value
    cur.expect("PUNCT", "}")
    if tier_tok.value not in ("coarse", "fine", "default"):
        raise DslSyntaxError(
            f"unknown tier {tier_tok.value!r}", tier_tok.line, tier_tok.col)
    return Rule(id=name_tok.value, level=level, isle=isle, tier=tier_tok.value,
                premises=tuple(premises), conclusion=conclusion,
                hint_template=hint)


def parse_rules(text: str) -> RuleBase:
    """Parse one ``.qr`` pack. Raises ``DslSyntaxError`` (with position),
    ``UndeclaredPredicate``, ``RangeRestrictionViolation`` or
    ``DuplicateRuleId``."""
    cur = _Cursor(tokenize(text))
    preds: dict[str, PredicateDecl] = {}
    rules: list[Rule] = []
    while True:
        tok = cur.peek()
        if tok.kind == "EOF":
            break
        if tok.kind == "NAME" and tok.value == "pred":
            cur.next()
            _parse_preddecl(cur, preds)
        elif tok.kind == "NAME" and tok.value == "rule":
            cur.next()
            rules.append(_parse_rule(cur, preds))
        else:
            raise DslSyntaxError(
                f"expected 'pred' or 'rule', found {tok.value!r}", tok.line, tok.col)
    return RuleBase(predicates=preds, rules=tuple(rules))


def _parse_raw_fact(cur: _Cursor) -> tuple[Token, list[Token]]:
    name_tok = cur.expect("NAME", what="a predicate name")
    cur.expect("PUNCT", "(")
    args = [cur.expect("NAME")]
    while cur.peek().value == ",":
        cur.next()
        args.append(cur.expect("NAME"))
    cur.expect("PUNCT", ")")
    return name_tok, args


def _build_fact(name_tok: Token, arg_toks: list[Token], base: RuleBase,
                objects: dict[str, ObjectId]) -> Fact:
    decl = base.predicates.get(name_tok.value)
    if decl is None:
        raise UndeclaredPredicate(
            f"predicate {name_tok.value!r} not declared by any loaded pack "
            f"(line {name_tok.line})")
    args = []
    for tok in arg_toks:
        obj = objects.get(tok.value)
        if obj is None:
            raise UndeclaredObject(
                f"object {tok.value!r} not declared (line {tok.line})")
        args.append(obj)
    if len(args) != decl.arity:
        raise DslSyntaxError(
            f"{decl.name} takes {decl.arity} arguments, found {len(args)}",
            name_tok.line, name_tok.col)
    return canonicalize(decl, args)  # may raise KindMismatch


def parse_problem(text: str, base: RuleBase) -> Problem:
    """Parse one ``.qp`` file against the packs' predicate declarations.
    Facts are canonicalized on the way in; nothing is synthesized."""
    cur = _Cursor(tokenize(text))
    cur.expect("NAME", "problem")
    prob_id = cur.expect("NAME").value
    cur.expect("PUNCT", "{")

    cur.expect_keyword_colon("objects")
    objects: dict[str, ObjectId] = {}
    order: list[ObjectId] = []
    while cur.peek().kind == "NAME" and cur.peek().value in KINDS:
        kind = cur.next().value
        name_tok = cur.expect("NAME")
        if name_tok.value in objects:
            raise DslSyntaxError(
                f"object {name_tok.value!r} declared twice", name_tok.line, name_tok.col)
        obj = ObjectId(name_tok.value, kind)
        objects[obj.name] = obj
        order.append(obj)
    if not order:
        tok = cur.peek()
        raise DslSyntaxError("at least one object declaration required", tok.line, tok.col)

    cur.expect_keyword_colon("student")
    student: list[str] = []
    while cur.peek().kind == "NAME" and not cur.at_name("hypotheses"):
        tok = cur.next()
        if tok.value not in objects:
            raise UndeclaredObject(
                f"student figure references undeclared object {tok.value!r} "
                f"(line {tok.line})")
        student.append(tok.value)

    cur.expect_keyword_colon("hypotheses")
    hypotheses: list[Fact] = []
    while cur.peek().kind == "NAME" and not cur.at_name("superfigure"):
        hypotheses.append(_build_fact(*_parse_raw_fact(cur), base, objects))
    if not hypotheses:
        tok = cur.peek()
        raise DslSyntaxError("at least one hypothesis required", tok.line, tok.col)

    cur.expect_keyword_colon("superfigure")
    superfig: list[Fact] = []
    while cur.peek().kind == "NAME" and not cur.at_name("conclusion"):
        superfig.append(_build_fact(*_parse_raw_fact(cur), base, objects))

    if not cur.at_name("conclusion"):
        tok = cur.peek()
        raise MissingConclusion(
            f"problem {prob_id!r} has no conclusion section (line {tok.line})")
    cur.expect_keyword_colon("conclusion")
    conclusion = _build_fact(*_parse_raw_fact(cur), base, objects)
    cur.expect("PUNCT", "}")
    cur.expect("EOF", what="end of file")

    return Problem(id=prob_id, objects=tuple(order), student_figure=tuple(student),
                   hypotheses=tuple(hypotheses), super_figure=tuple(superfig),
                   conclusion=conclusion)


def parse_fact_text(text: str, base: RuleBase,
                    objects: dict[str, ObjectId] | None = None) -> Fact:
    """Parse a single ground statement such as ``perp(lAB,lBC)``.

    With ``objects`` the argument names must resolve to declared objects;
    without it, each argument takes the kind its position declares (used
    when re-hydrating exported graphs).
    """
    cur = _Cursor(tokenize(text))
    name_tok, arg_toks = _parse_raw_fact(cur)
    cur.expect("EOF", what="end of statement")
    decl = base.predicates.get(name_tok.value)
    if decl is None:
        raise UndeclaredPredicate(f"predicate {name_tok.value!r} not declared")
    if len(arg_toks) != decl.arity:
        raise DslSyntaxError(
            f"{decl.name} takes {decl.arity} arguments, found {len(arg_toks)}",
            name_tok.line, name_tok.col)
    args = []
    for pos, tok in enumerate(arg_toks):
        if objects is not None:
            obj = objects.get(tok.value)
            if obj is None:
                raise UndeclaredObject(f"object {tok.value!r} not declared")
            args.append(obj)
        else:
            args.append(ObjectId(tok.value, decl.arg_kinds[pos]))
    return canonicalize(decl, args)


# --- serialization ----------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_rules(base: RuleBase) -> str:
    """Render a rule base back to pack text. ``parse_rules`` of the output
    is structurally equal to the input (comments are not preserved)."""
    out: list[str] = []
    for decl in base.predicates.values():
        line = (f"pred {decl.name}/{decl.arity} "
                f"kinds({','.join(decl.arg_kinds)})")
        if decl.generators:
            line += f" sym({'; '.join(g.render() for g in decl.generators)})"
        out.append(line)
    for rule in base.rules:
        out.append("")
        out.append(f"rule {rule.id} {{")
        out.append(f"  level: {rule.level}")
        out.append(f"  isle: {rule.isle}")
        out.append(f"  tier: {rule.tier}")
        out.append(f"  if: {', '.join(p.render() for p in rule.premises)}")
        out.append(f"  then: {rule.conclusion.render()}")
        if rule.hint_template:
            out.append(f"  hint: {_quote(rule.hint_template)}")
        out.append("}")
    return "\n".join(out) + "\n"


def serialize_problem(problem: Problem) -> str:
    out = [f"problem {problem.id} {{"]
    out.append("  objects:")
    for obj in problem.objects:
        out.append(f"    {obj.kind} {obj.name}")
    out.append("  student: " + " ".join(problem.student_figure))
    out.append("  hypotheses:")
    for fact in problem.hypotheses:
        out.append(f"    {fact.key}")
    out.append("  superfigure:")
    for fact in problem.super_figure:
        out.append(f"    {fact.key}")
    out.append(f"  conclusion: {problem.conclusion.key}")
    out.append("}")
    return "\n".join(out) + "\n"


__all__ = [
    "parse_rules", "parse_problem", "parse_fact_text",
    "serialize_rules", "serialize_problem", "tokenize",
]
