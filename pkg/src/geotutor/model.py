"""Core vocabulary: typed objects, predicate declarations with argument
symmetries, and canonical facts.

Two facts are the same statement iff their canonical keys are equal. The
canonical key of ``pred(args)`` is the lexicographically smallest rendering
(byte-wise, over the UTF-8 text) of the argument tuple under the predicate's
symmetry group, prefixed by the predicate name.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ArityMismatch, InvalidDeclaration, KindMismatch

KINDS = frozenset({
    "point", "line", "segment", "angle", "circle", "polygon", "scalar",
})

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

# A permutation of argument positions, stored so that applying ``perm`` to
# an argument tuple yields tuple(args[i] for i in perm).
Perm = tuple[int, ...]


def _identity(arity: int) -> Perm:
    return tuple(range(arity))


def _compose(p: Perm, q: Perm) -> Perm:
    # apply q first, then p
    return tuple(q[i] for i in p)


def _apply(perm: Perm, args: tuple) -> tuple:
    return tuple(args[i] for i in perm)


def close_group(generators: Iterable[Perm], arity: int) -> tuple[Perm, ...]:
    """Smallest permutation group containing ``generators``, as a sorted
    tuple. Finite order makes closure under composition alone sufficient:
    every element's inverse arises as a power of itself."""
    group = {_identity(arity)}
    frontier = [g for g in generators]
    for g in frontier:
        if len(g) != arity or sorted(g) != list(range(arity)):
            raise InvalidDeclaration(f"generator {g} is not a permutation of {arity} positions")
    group.update(frontier)
    while frontier:
        nxt = []
        for g in frontier:
            for h in list(group):
                for composed in (_compose(g, h), _compose(h, g)):
                    if composed not in group:
                        group.add(composed)
                        nxt.append(composed)
        frontier = nxt
    return tuple(sorted(group))


@dataclass(frozen=True)
class SymmetryGen:
    """One symmetry generator as written in the DSL: ``swap i j``,
    ``cycle i j k ...`` or ``full`` (1-based positions)."""

    op: str                      # "swap" | "cycle" | "full"
    positions: tuple[int, ...] = ()

    def to_perm(self, arity: int) -> list[Perm]:
        if self.op == "full":
            return [tuple(p) for p in itertools.permutations(range(arity))]
        for pos in self.positions:
            if not 1 <= pos <= arity:
                raise InvalidDeclaration(
                    f"symmetry position {pos} out of range for arity {arity}")
        if self.op == "swap":
            i, j = (p - 1 for p in self.positions)
            if i == j:
                raise InvalidDeclaration("swap positions must differ")
            perm = list(range(arity))
            perm[i], perm[j] = perm[j], perm[i]
            return [tuple(perm)]
        if self.op == "cycle":
            cyc = [p - 1 for p in self.positions]
            if len(set(cyc)) != len(cyc):
                raise InvalidDeclaration("cycle positions must be distinct")
            perm = list(range(arity))
            for src, dst in zip(cyc, cyc[1:] + cyc[:1]):
                perm[dst] = src
            return [tuple(perm)]
        raise InvalidDeclaration(f"unknown symmetry op {self.op!r}")

    def render(self) -> str:
        if self.op == "full":
            return "full"
        return f"{self.op} " + " ".join(str(p) for p in self.positions)


@dataclass(frozen=True)
class ObjectId:
    """A named geometric object of a given kind."""

    name: str
    kind: str

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise InvalidDeclaration(f"invalid object name {self.name!r}")
        if self.kind not in KINDS:
            raise InvalidDeclaration(f"unknown kind {self.kind!r} for object {self.name!r}")


class PredicateDecl:
    """A relation symbol with fixed arity, per-position kinds, and an
    argument symmetry group (closed once, here, at declaration time)."""

    def __init__(self, name: str, arg_kinds: Sequence[str],
                 generators: Sequence[SymmetryGen] = ()):
        if not _NAME_RE.match(name):
            raise InvalidDeclaration(f"invalid predicate name {name!r}")
        if not arg_kinds:
            raise InvalidDeclaration(f"predicate {name!r} must have arity >= 1")
        for k in arg_kinds:
            if k not in KINDS:
                raise InvalidDeclaration(f"unknown kind {k!r} in predicate {name!r}")
        self.name = name
        self.arg_kinds: tuple[str, ...] = tuple(arg_kinds)
        self.generators: tuple[SymmetryGen, ...] = tuple(generators)
        perms: list[Perm] = []
        for gen in self.generators:
            perms.extend(gen.to_perm(self.arity))
        self.group: tuple[Perm, ...] = close_group(perms, self.arity)
        # Symmetric positions must share a kind, otherwise images of a
        # well-kinded fact would be ill-kinded.
        for perm in self.group:
            for i, src in enumerate(perm):
                if self.arg_kinds[i] != self.arg_kinds[src]:
                    raise InvalidDeclaration(
                        f"symmetry of {name!r} mixes kinds "
                        f"{self.arg_kinds[i]!r} and {self.arg_kinds[src]!r}")

    @property
    def arity(self) -> int:
        return len(self.arg_kinds)

    def images(self, args: tuple) -> list[tuple]:
        return [_apply(p, args) for p in self.group]

    def __eq__(self, other) -> bool:
        return (isinstance(other, PredicateDecl)
                and self.name == other.name
                and self.arg_kinds == other.arg_kinds
                and frozenset(self.group) == frozenset(other.group))

    def __hash__(self) -> int:
        return hash((self.name, self.arg_kinds, frozenset(self.group)))

    def __repr__(self) -> str:
        return f"PredicateDecl({self.name}/{self.arity})"


@dataclass(frozen=True)
class Fact:
    """A canonical ground statement. Identity is the canonical key."""

    predicate: PredicateDecl = field(compare=False)
    args: tuple[ObjectId, ...] = field(compare=False)
    key: str = field(compare=True)

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return self.key


def render_fact(name: str, arg_names: Iterable[str]) -> str:
    return f"{name}({','.join(arg_names)})"


def canonicalize(predicate: PredicateDecl, args: Sequence[ObjectId]) -> Fact:
    """Validate ``args`` against the declaration and build the canonical
    ``Fact``. Canonicalizing an already-canonical argument tuple is a
    no-op: the minimum of an orbit is a fixed point of the operation."""
    if len(args) != predicate.arity:
        raise ArityMismatch(
            f"{predicate.name} expects {predicate.arity} arguments, got {len(args)}")
    for obj, kind in zip(args, predicate.arg_kinds):
        if obj.kind != kind:
            raise KindMismatch(
                f"{predicate.name}: argument {obj.name!r} has kind {obj.kind!r}, "
                f"expected {kind!r}")
    best = min(predicate.images(tuple(args)),
               key=lambda image: ",".join(o.name for o in image))
    key = render_fact(predicate.name, (o.name for o in best))
    return Fact(predicate=predicate, args=best, key=key)


def facts_equal(a: Fact, b: Fact) -> bool:
    """Statement-level equality: same canonical key."""
    return a.key == b.key
