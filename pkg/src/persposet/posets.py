"""Finite posets and order-preserving maps.

Single time-slice building blocks: validated strict partial orders,
down-sets and up-sets, deterministic linear extensions, and the poset
mapping cylinder of a monotone map.  All values are immutable after
construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .errors import (
    CycleError,
    DuplicateElement,
    NonMonotoneStructureMap,
    PartialStructureMap,
    UnknownElement,
)

Direction = Literal["below", "above"]

CYLINDER_SOURCE_TAG = "X:"
CYLINDER_TARGET_TAG = "Y:"


def transitive_closure(elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    """Close a strict relation transitively; raise CycleError if x < x appears."""
    elems = sorted(elements)
    index = {e: i for i, e in enumerate(elems)}
    succ: dict[str, set[str]] = {e: set() for e in elems}
    for a, b in pairs:
        if a not in index or b not in index:
            raise UnknownElement(f"pair ({a!r}, {b!r}) references an unknown element")
        succ[a].add(b)
    # Warshall pass over a fixed element order.
    for k in elems:
        reach_k = succ[k]
        for a in elems:
            if k in succ[a]:
                succ[a] |= reach_k
    closed = set()
    for a in elems:
        if a in succ[a]:
            raise CycleError(f"element {a!r} is below itself after closure")
        for b in succ[a]:
            closed.add((a, b))
    return frozenset(closed)


@dataclass(frozen=True)
class FinitePoset:
    """A finite set with a strict partial order, stored transitively closed."""

    elements: tuple[str, ...]
    relation: frozenset[tuple[str, str]]

    def __contains__(self, x: str) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def less(self, a: str, b: str) -> bool:
        return (a, b) in self.relation

    def leq(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.relation

    def comparable(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.relation or (b, a) in self.relation

    def strictly_above(self, x: str) -> list[str]:
        return [b for b in self.elements if (x, b) in self.relation]

    def strictly_below(self, x: str) -> list[str]:
        return [a for a in self.elements if (a, x) in self.relation]

    def is_empty(self) -> bool:
        return not self.elements

    def restrict(self, subset: Iterable[str]) -> "FinitePoset":
        """Induced subposet on a subset of the elements."""
        keep = set(subset)
        unknown = keep - set(self.elements)
        if unknown:
            raise UnknownElement(f"elements {sorted(unknown)!r} not in poset")
        pairs = [(a, b) for (a, b) in self.relation if a in keep and b in keep]
        return new_poset(sorted(keep), pairs)


def new_poset(elements: Iterable[str], strict_pairs: Iterable[tuple[str, str]]) -> FinitePoset:
    """Build a validated poset from elements and generating strict pairs."""
    elems = list(elements)
    if len(elems) != len(set(elems)):
        seen, dupes = set(), set()
        for e in elems:
            if e in seen:
                dupes.add(e)
            seen.add(e)
        raise DuplicateElement(f"duplicate identifiers: {sorted(dupes)!r}")
    relation = transitive_closure(elems, strict_pairs)
    return FinitePoset(elements=tuple(sorted(elems)), relation=relation)


def downset(P: FinitePoset, x: str, strict: bool = True, direction: Direction = "below") -> FinitePoset:
    """Induced subposet of everything below (or above) x, strictly or weakly."""
    if x not in P:
        raise UnknownElement(f"{x!r} not in poset")
    if direction == "below":
        keep = [a for a in P.elements if P.less(a, x)]
    elif direction == "above":
        keep = [b for b in P.elements if P.less(x, b)]
    else:
        raise ValueError(f"direction must be 'below' or 'above', got {direction!r}")
    if not strict:
        keep.append(x)
    return P.restrict(keep)


def linear_extension(P: FinitePoset) -> list[str]:
    """Deterministic topological sort: always pop the lexicographically
    smallest currently-minimal element."""
    remaining = set(P.elements)
    preds: dict[str, set[str]] = {e: set() for e in P.elements}
    for a, b in P.relation:
        preds[b].add(a)
    out: list[str] = []
    while remaining:
        ready = sorted(e for e in remaining if not (preds[e] & remaining))
        # P is a validated poset, so some element is always minimal.
        nxt = ready[0]
        out.append(nxt)
        remaining.remove(nxt)
    return out


@dataclass(eq=False)
class MonotoneMap:
    """A candidate order-preserving map; validity is checked by is_monotone."""

    source: FinitePoset
    target: FinitePoset
    assignment: dict[str, str]

    def __call__(self, x: str) -> str:
        try:
            return self.assignment[x]
        except KeyError:
            raise UnknownElement(f"{x!r} has no assigned image") from None


def identity_map(P: FinitePoset) -> MonotoneMap:
    return MonotoneMap(P, P, {e: e for e in P.elements})


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    if f.target != g.source:
        raise PartialStructureMap("composition mismatch: f.target != g.source")
    return MonotoneMap(f.source, g.target, {x: g.assignment[f.assignment[x]] for x in f.source.elements})


def is_monotone(f: MonotoneMap) -> bool:
    """True iff f is total, lands in its target, and preserves strict order."""
    for x in f.source.elements:
        y = f.assignment.get(x)
        if y is None or y not in f.target:
            return False
    for a, b in f.source.relation:
        if not f.target.leq(f.assignment[a], f.assignment[b]):
            return False
    return True


def check_map(f: MonotoneMap) -> None:
    """Raise the specific failure for an invalid map."""
    for x in f.source.elements:
        y = f.assignment.get(x)
        if y is None:
            raise PartialStructureMap(f"no image assigned to {x!r}")
        if y not in f.target:
            raise PartialStructureMap(f"image {y!r} of {x!r} is not a target element")
    for a, b in f.source.relation:
        if not f.target.leq(f.assignment[a], f.assignment[b]):
            raise NonMonotoneStructureMap(
                f"{a!r} < {b!r} but images {f.assignment[a]!r}, {f.assignment[b]!r} are not ordered"
            )


def mapping_cylinder(f: MonotoneMap) -> tuple[FinitePoset, MonotoneMap, MonotoneMap]:
    """Poset on the tagged disjoint union of source and target.

    The order keeps both original orders and adds x < y exactly when
    f(x) <= y in the target.  Returns the cylinder together with the two
    canonical inclusions.
    """
    check_map(f)
    X, Y = f.source, f.target
    elems = [CYLINDER_SOURCE_TAG + x for x in X.elements] + [CYLINDER_TARGET_TAG + y for y in Y.elements]
    pairs: list[tuple[str, str]] = []
    pairs += [(CYLINDER_SOURCE_TAG + a, CYLINDER_SOURCE_TAG + b) for (a, b) in X.relation]
    pairs += [(CYLINDER_TARGET_TAG + a, CYLINDER_TARGET_TAG + b) for (a, b) in Y.relation]
    for x in X.elements:
        fx = f.assignment[x]
        for y in Y.elements:
            if Y.leq(fx, y):
                pairs.append((CYLINDER_SOURCE_TAG + x, CYLINDER_TARGET_TAG + y))
    M = new_poset(elems, pairs)
    i_x = MonotoneMap(X, M, {x: CYLINDER_SOURCE_TAG + x for x in X.elements})
    i_y = MonotoneMap(Y, M, {y: CYLINDER_TARGET_TAG + y for y in Y.elements})
    return M, i_x, i_y


def longest_chain(P: FinitePoset) -> int:
    """Number of elements in a longest chain (0 for the empty poset)."""
    order = linear_extension(P)
    best: dict[str, int] = {}
    top = 0
    for e in order:
        below = [best[a] for a in P.strictly_below(e)]
        best[e] = 1 + (max(below) if below else 0)
        top = max(top, best[e])
    return top
