"""Order complexes of posets and towers of simplicial complexes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .errors import DuplicateElement, UnknownVertex
from .posets import FinitePoset, MonotoneMap, check_map
from .pposets import PersistencePoset


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of nonempty vertex subsets."""

    vertices: tuple[str, ...]
    simplices: frozenset[frozenset[str]]

    @staticmethod
    def from_simplices(
        simplices: Iterable[Iterable[str]], vertices: Iterable[str] = ()
    ) -> "SimplicialComplex":
        """Close the given simplices downward; extra isolated vertices allowed."""
        closed: set[frozenset[str]] = set()
        verts: set[str] = set(vertices)
        for s in simplices:
            fs = frozenset(s)
            if not fs:
                continue
            verts |= fs
            for k in range(1, len(fs) + 1):
                for face in combinations(sorted(fs), k):
                    closed.add(frozenset(face))
        for v in verts:
            closed.add(frozenset([v]))
        return SimplicialComplex(vertices=tuple(sorted(verts)), simplices=frozenset(closed))

    def k_simplices(self, k: int) -> list[tuple[str, ...]]:
        """All k-dimensional simplices as sorted tuples, in lexicographic order."""
        return sorted(tuple(sorted(s)) for s in self.simplices if len(s) == k + 1)

    def top_degree(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def is_empty(self) -> bool:
        return not self.simplices

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)


@dataclass(eq=False)
class SimplicialMap:
    """Vertex map whose simplex images (with collapses) are simplices."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: dict[str, str]

    def __post_init__(self) -> None:
        for v in self.source.vertices:
            w = self.vertex_map.get(v)
            if w is None or w not in set(self.target.vertices):
                raise UnknownVertex(f"vertex {v!r} has no valid image")
        for s in self.source.simplices:
            if self.apply_simplex(s) not in self.target.simplices:
                raise UnknownVertex(f"image of simplex {sorted(s)!r} is not a target simplex")

    def apply_simplex(self, s: Iterable[str]) -> frozenset[str]:
        return frozenset(self.vertex_map[v] for v in s)


@lru_cache(maxsize=None)
def order_complex(P: FinitePoset) -> SimplicialComplex:
    """Simplices are exactly the nonempty chains of the poset."""
    above = {e: sorted(P.strictly_above(e)) for e in P.elements}
    chains: list[tuple[str, ...]] = []

    def grow(chain: list[str]) -> None:
        chains.append(tuple(chain))
        for nxt in above[chain[-1]]:
            chain.append(nxt)
            grow(chain)
            chain.pop()

    for e in P.elements:
        grow([e])
    return SimplicialComplex(
        vertices=P.elements, simplices=frozenset(frozenset(c) for c in chains)
    )


def induced_map(
    f: MonotoneMap,
    source_complex: SimplicialComplex | None = None,
    target_complex: SimplicialComplex | None = None,
) -> SimplicialMap:
    """Simplicial map of order complexes induced by a monotone map."""
    check_map(f)
    K = source_complex if source_complex is not None else order_complex(f.source)
    L = target_complex if target_complex is not None else order_complex(f.target)
    return SimplicialMap(K, L, dict(f.assignment))


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """All unions of a simplex of K (or nothing) with a simplex of L (or nothing)."""
    overlap = set(K.vertices) & set(L.vertices)
    if overlap:
        raise DuplicateElement(f"join requires disjoint vertex sets, shared: {sorted(overlap)!r}")
    simplices = set(K.simplices) | set(L.simplices)
    for s in K.simplices:
        for t in L.simplices:
            simplices.add(s | t)
    return SimplicialComplex(
        vertices=tuple(sorted(K.vertices + L.vertices)), simplices=frozenset(simplices)
    )


def star(K: SimplicialComplex, v: str) -> SimplicialComplex:
    """Minimal subcomplex containing every simplex through v."""
    if v not in set(K.vertices):
        raise UnknownVertex(f"{v!r} is not a vertex")
    tops = [s for s in K.simplices if v in s]
    return SimplicialComplex.from_simplices(tops)


def link(K: SimplicialComplex, v: str) -> SimplicialComplex:
    """Faces of the star that avoid v."""
    st = star(K, v)
    kept = frozenset(s for s in st.simplices if v not in s)
    verts = sorted({w for s in kept for w in s})
    return SimplicialComplex(vertices=tuple(verts), simplices=kept)


@dataclass(eq=False)
class ComplexTower:
    """Complexes indexed by {0..T} with slice-to-slice simplicial maps."""

    complexes: tuple[SimplicialComplex, ...]
    maps: tuple[SimplicialMap, ...]

    def __post_init__(self) -> None:
        self.complexes = tuple(self.complexes)
        self.maps = tuple(self.maps)
        assert len(self.maps) == len(self.complexes) - 1
        for i, m in enumerate(self.maps):
            assert m.source == self.complexes[i] and m.target == self.complexes[i + 1]

    @property
    def T(self) -> int:
        return len(self.complexes) - 1

    def top_degree(self) -> int:
        return max((K.top_degree() for K in self.complexes), default=-1)


def order_complex_tower(pp: PersistencePoset) -> ComplexTower:
    complexes = tuple(order_complex(c) for c in pp.components)
    maps = tuple(
        induced_map(pp.maps[i], complexes[i], complexes[i + 1]) for i in range(pp.T)
    )
    return ComplexTower(complexes, maps)


def join_tower(A: ComplexTower, B: ComplexTower) -> ComplexTower:
    """Slicewise join with the joined vertex maps; vertex sets must be disjoint."""
    assert A.T == B.T, "towers must have the same length"
    complexes = tuple(join(A.complexes[i], B.complexes[i]) for i in range(A.T + 1))
    maps = []
    for i in range(A.T):
        vm = dict(A.maps[i].vertex_map)
        vm.update(B.maps[i].vertex_map)
        maps.append(SimplicialMap(complexes[i], complexes[i + 1], vm))
    return ComplexTower(complexes, tuple(maps))
