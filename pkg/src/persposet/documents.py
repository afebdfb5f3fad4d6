"""Instance documents, cover ingestion, and seeded random generation.

Documents are UTF-8 JSON in one canonical schema: poset components as
sorted element lists plus sorted strict-pair lists (the full transitive
closure), maps as name-to-name tables.  Canonical serialization sorts
every list so a round trip is bit-exact.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Any

from .errors import NotNested, PersistenceError, SchemaError, ValidationError
from .posets import FinitePoset, MonotoneMap, new_poset
from .pposets import PersistenceMap, PersistencePoset

INSTANCE_SCHEMA = "instance/1"
PPOSET_SCHEMA = "pposet/1"
COVER_SCHEMA = "cover/1"
CERTIFICATE_SCHEMA = "certificate/1"


@dataclass(frozen=True)
class Scale:
    """Affine index-to-timestamp reporting scale: t = origin + step * i."""

    origin: float
    step: float

    def __post_init__(self) -> None:
        if not self.step > 0:
            raise ValidationError(f"scale step must be positive, got {self.step}")


@dataclass(eq=False)
class InstanceDocument:
    """A parsed instance: persistence posets X, Y, the slicewise map, a scale."""

    map: PersistenceMap
    scale: Scale | None = None

    @property
    def x(self) -> PersistencePoset:
        return self.map.source

    @property
    def y(self) -> PersistencePoset:
        return self.map.target


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- poset blocks ---------------------------------------------------------------


def _poset_block(pp: PersistencePoset) -> dict:
    return {
        "components": [
            {
                "elements": sorted(c.elements),
                "pairs": sorted([list(p) for p in c.relation]),
            }
            for c in pp.components
        ],
        "maps": [dict(sorted(m.assignment.items())) for m in pp.maps],
    }


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SchemaError(message)


def _parse_poset_block(obj: Any, where: str, T: int) -> PersistencePoset:
    _require(isinstance(obj, dict), f"{where}: expected an object")
    comps_raw = obj.get("components")
    maps_raw = obj.get("maps")
    _require(isinstance(comps_raw, list) and len(comps_raw) == T + 1, f"{where}: need {T + 1} components")
    _require(isinstance(maps_raw, list) and len(maps_raw) == T, f"{where}: need {T} maps")
    comps = []
    for i, c in enumerate(comps_raw):
        _require(isinstance(c, dict), f"{where}.components[{i}]: expected an object")
        elements = c.get("elements")
        pairs = c.get("pairs", [])
        _require(
            isinstance(elements, list) and all(isinstance(e, str) for e in elements),
            f"{where}.components[{i}]: elements must be strings",
        )
        _require(
            isinstance(pairs, list)
            and all(isinstance(p, list) and len(p) == 2 and all(isinstance(e, str) for e in p) for p in pairs),
            f"{where}.components[{i}]: pairs must be [a, b] string lists",
        )
        try:
            comps.append(new_poset(elements, [tuple(p) for p in pairs]))
        except PersistenceError as exc:
            raise ValidationError(f"{where}.components[{i}]: {exc}") from exc
    maps = []
    for i, m in enumerate(maps_raw):
        _require(
            isinstance(m, dict) and all(isinstance(k, str) and isinstance(v, str) for k, v in m.items()),
            f"{where}.maps[{i}]: expected a name-to-name table",
        )
        maps.append(MonotoneMap(comps[i], comps[i + 1], dict(m)))
    try:
        return PersistencePoset(tuple(comps), tuple(maps))
    except PersistenceError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def pposet_to_doc(pp: PersistencePoset) -> dict:
    doc = {"schema": PPOSET_SCHEMA, "T": pp.T}
    doc.update(_poset_block(pp))
    return doc


def pposet_from_doc(obj: Any) -> PersistencePoset:
    _require(isinstance(obj, dict), "expected a JSON object")
    _require(obj.get("schema") == PPOSET_SCHEMA, f"schema must be {PPOSET_SCHEMA!r}")
    T = obj.get("T")
    _require(isinstance(T, int) and T >= 0, "T must be a non-negative integer")
    return _parse_poset_block(obj, "poset", T)


# -- instances --------------------------------------------------------------------


def serialize_instance(inst: InstanceDocument) -> dict:
    f = inst.map
    doc = {
        "schema": INSTANCE_SCHEMA,
        "T": f.T,
        "x": _poset_block(f.source),
        "y": _poset_block(f.target),
        "map": [dict(sorted(s.assignment.items())) for s in f.slices],
    }
    if inst.scale is not None:
        doc["scale"] = {"origin": inst.scale.origin, "step": inst.scale.step}
    return doc


def parse_instance(document: Any) -> InstanceDocument:
    """Validate a document into an instance; errors carry locations."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    _require(isinstance(document, dict), "expected a JSON object")
    _require(document.get("schema") == INSTANCE_SCHEMA, f"schema must be {INSTANCE_SCHEMA!r}")
    T = document.get("T")
    _require(isinstance(T, int) and T >= 0, "T must be a non-negative integer")
    x = _parse_poset_block(document.get("x"), "x", T)
    y = _parse_poset_block(document.get("y"), "y", T)
    map_raw = document.get("map")
    _require(isinstance(map_raw, list) and len(map_raw) == T + 1, f"map: need {T + 1} slice tables")
    slices = []
    for i, m in enumerate(map_raw):
        _require(
            isinstance(m, dict) and all(isinstance(k, str) and isinstance(v, str) for k, v in m.items()),
            f"map[{i}]: expected a name-to-name table",
        )
        slices.append(MonotoneMap(x.components[i], y.components[i], dict(m)))
    try:
        pm = PersistenceMap(x, y, tuple(slices))
    except PersistenceError as exc:
        raise ValidationError(f"map: {exc}") from exc
    scale = None
    if "scale" in document:
        s = document["scale"]
        _require(
            isinstance(s, dict) and isinstance(s.get("origin"), (int, float)) and isinstance(s.get("step"), (int, float)),
            "scale: expected {origin, step}",
        )
        scale = Scale(float(s["origin"]), float(s["step"]))
    return InstanceDocument(map=pm, scale=scale)


# -- covers -----------------------------------------------------------------------


@dataclass(eq=False)
class CoverTower:
    """Named cover sets, each a nested sequence of point-id sets."""

    T: int
    sets: dict[str, tuple[frozenset[str], ...]]

    def __post_init__(self) -> None:
        for name, seq in self.sets.items():
            if not name:
                raise SchemaError("cover set names must be nonempty")
            if len(seq) != self.T + 1:
                raise SchemaError(f"cover set {name!r}: need {self.T + 1} stages")
            for i in range(self.T):
                if not seq[i] <= seq[i + 1]:
                    raise NotNested(f"cover set {name!r} shrinks between {i} and {i + 1}")


def cover_from_doc(obj: Any) -> CoverTower:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    _require(isinstance(obj, dict), "expected a JSON object")
    _require(obj.get("schema") == COVER_SCHEMA, f"schema must be {COVER_SCHEMA!r}")
    T = obj.get("T")
    _require(isinstance(T, int) and T >= 0, "T must be a non-negative integer")
    sets_raw = obj.get("sets")
    _require(isinstance(sets_raw, dict) and sets_raw, "sets: expected a nonempty object")
    sets = {}
    for name, seq in sets_raw.items():
        _require(
            isinstance(seq, list) and all(isinstance(stage, list) for stage in seq),
            f"sets[{name}]: expected a list of point-id lists",
        )
        sets[name] = tuple(frozenset(stage) for stage in seq)
    return CoverTower(T=T, sets=sets)


def cover_to_doc(cover: CoverTower) -> dict:
    return {
        "schema": COVER_SCHEMA,
        "T": cover.T,
        "sets": {name: [sorted(stage) for stage in seq] for name, seq in sorted(cover.sets.items())},
    }


def cover_to_pposet(cover: CoverTower, max_arity: int | None = None) -> PersistencePoset:
    """Intersection poset of a nested cover, one component per index.

    Elements at index i are the label subsets (up to max_arity) whose
    intersection is nonempty at i, ordered by reverse inclusion of label
    sets; structure maps are the identity on labels, which nestedness
    makes total.
    """
    names = sorted(cover.sets)
    arity = len(names) if max_arity is None else max(1, min(max_arity, len(names)))
    subsets = [
        tuple(combo) for k in range(1, arity + 1) for combo in combinations(names, k)
    ]

    def label(combo: tuple[str, ...]) -> str:
        return "&".join(combo)

    comps = []
    for i in range(cover.T + 1):
        present = []
        for combo in subsets:
            inter = set(cover.sets[combo[0]][i])
            for name in combo[1:]:
                inter &= cover.sets[name][i]
            if inter:
                present.append(combo)
        pairs = [
            (label(a), label(b))
            for a in present
            for b in present
            if a != b and set(a) > set(b)
        ]
        comps.append(new_poset([label(c) for c in present], pairs))
    maps = [
        MonotoneMap(comps[i], comps[i + 1], {e: e for e in comps[i].elements})
        for i in range(cover.T)
    ]
    return PersistencePoset(tuple(comps), tuple(maps))


# -- random generation ---------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorLimits:
    t_max: int = 4
    max_slice: int = 6
    max_y_tracks: int = 4
    pair_prob: float = 0.4
    merge_attempts: int = 2
    max_fresh: int = 2


def _random_linear_order(rng: random.Random, P: FinitePoset) -> list[str]:
    """A random-but-seeded topological order of P."""
    remaining = set(P.elements)
    preds = {e: set(P.strictly_below(e)) for e in P.elements}
    out = []
    while remaining:
        ready = sorted(e for e in remaining if not (preds[e] & remaining))
        pick = rng.choice(ready)
        out.append(pick)
        remaining.remove(pick)
    return out


def _random_poset(rng: random.Random, elements: list[str], pair_prob: float,
                  compatible=None) -> FinitePoset:
    order = list(elements)
    rng.shuffle(order)
    pairs = []
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            a, b = order[i], order[j]
            if rng.random() < pair_prob and (compatible is None or compatible(a, b)):
                pairs.append((a, b))
    return new_poset(elements, pairs)


def _enrich_poset(rng: random.Random, base: FinitePoset, pair_prob: float, compatible=None) -> FinitePoset:
    """Add random forward pairs along a random topological order of base."""
    order = _random_linear_order(rng, base)
    pairs = set(base.relation)
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            a, b = order[i], order[j]
            if rng.random() < pair_prob and (compatible is None or compatible(a, b)):
                pairs.add((a, b))
    return new_poset(base.elements, pairs)


def _try_merges(rng: random.Random, P: FinitePoset, attempts: int,
                mergeable=None) -> dict[str, str]:
    """Pick a representative map collapsing a few classes, keeping the quotient acyclic."""
    rep = {e: e for e in P.elements}

    def find(e: str) -> str:
        while rep[e] != e:
            e = rep[e]
        return e

    for _ in range(attempts):
        reps = sorted({find(e) for e in P.elements})
        if len(reps) < 2:
            break
        a, b = rng.sample(reps, 2)
        if mergeable is not None and not mergeable(a, b):
            continue
        root = min(a, b)
        other = max(a, b)
        old = rep[other]
        rep[other] = root
        # reject the merge if the quotient order now has a cycle
        classes = sorted({find(e) for e in P.elements})
        quotient_pairs = {
            (find(u), find(v)) for (u, v) in P.relation if find(u) != find(v)
        }
        try:
            new_poset(classes, quotient_pairs)
        except PersistenceError:
            rep[other] = old
    return {e: find(e) for e in P.elements}


def random_pposet(
    rng: random.Random,
    T: int,
    max_slice: int,
    track_budget: int,
    limits: GeneratorLimits = GeneratorLimits(),
    name_prefix: str = "v",
) -> PersistencePoset:
    """Seeded persistence poset with births, merges, and growing orders."""
    counter = 0

    def fresh_names(n: int) -> list[str]:
        nonlocal counter
        names = [f"{name_prefix}{counter + k}" for k in range(n)]
        counter += n
        return names

    size0 = rng.randint(1, max(1, min(max_slice, track_budget)))
    budget = track_budget - size0
    comps = [_random_poset(rng, fresh_names(size0), limits.pair_prob)]
    maps = []
    for _ in range(T):
        prev = comps[-1]
        rep = _try_merges(rng, prev, limits.merge_attempts if len(prev) > 1 else 0)
        classes = sorted(set(rep.values()))
        room = max(0, max_slice - len(classes))
        fresh_count = rng.randint(0, min(limits.max_fresh, room, budget)) if budget > 0 else 0
        budget -= fresh_count
        fresh = fresh_names(fresh_count)
        quotient_pairs = {(rep[u], rep[v]) for (u, v) in prev.relation if rep[u] != rep[v]}
        base = new_poset(classes + fresh, quotient_pairs)
        comp = _enrich_poset(rng, base, limits.pair_prob)
        comps.append(comp)
        maps.append(MonotoneMap(prev, comp, {e: rep[e] for e in prev.elements}))
    return PersistencePoset(tuple(comps), tuple(maps))


def random_instance(seed: int, limits: GeneratorLimits = GeneratorLimits()) -> dict:
    """Deterministic random instance document: Y first, then X over it.

    Every X element carries a label in the matching Y component; merges
    in X are restricted to elements whose labels merge, and every order
    relation generated for X is compatible with the labels, so the slice
    maps are monotone and natural by construction.
    """
    rng = random.Random(seed)
    T = rng.randint(0, limits.t_max)
    y = random_pposet(rng, T, max_slice=limits.max_y_tracks, track_budget=limits.max_y_tracks,
                      limits=limits, name_prefix="y")

    counter = 0

    def fresh_names(n: int) -> list[str]:
        nonlocal counter
        names = [f"x{counter + k}" for k in range(n)]
        counter += n
        return names

    size0 = rng.randint(1, limits.max_slice)
    names0 = fresh_names(size0)
    y0 = y.components[0]
    labels: list[dict[str, str]] = [{e: rng.choice(sorted(y0.elements)) for e in names0}]
    comp0 = _random_poset(
        rng, names0, limits.pair_prob,
        compatible=lambda a, b: y0.leq(labels[0][a], labels[0][b]),
    )
    comps = [comp0]
    maps = []
    for i in range(T):
        prev = comps[-1]
        lab = labels[i]
        psi = y.maps[i].assignment
        y_next = y.components[i + 1]
        rep = _try_merges(
            rng, prev, limits.merge_attempts if len(prev) > 1 else 0,
            mergeable=lambda a, b: psi[lab[a]] == psi[lab[b]],
        )
        classes = sorted(set(rep.values()))
        room = max(0, limits.max_slice - len(classes))
        fresh_count = rng.randint(0, min(limits.max_fresh, room))
        fresh = fresh_names(fresh_count)
        next_lab = {c: psi[lab[c]] for c in classes}
        for e in fresh:
            next_lab[e] = rng.choice(sorted(y_next.elements))
        quotient_pairs = {(rep[u], rep[v]) for (u, v) in prev.relation if rep[u] != rep[v]}
        base = new_poset(classes + fresh, quotient_pairs)
        comp = _enrich_poset(
            rng, base, limits.pair_prob,
            compatible=lambda a, b: y_next.leq(next_lab[a], next_lab[b]),
        )
        comps.append(comp)
        maps.append(MonotoneMap(prev, comp, {e: rep[e] for e in prev.elements}))
        labels.append(next_lab)

    x = PersistencePoset(tuple(comps), tuple(maps))
    slices = tuple(
        MonotoneMap(x.components[i], y.components[i], dict(labels[i])) for i in range(T + 1)
    )
    inst = InstanceDocument(map=PersistenceMap(x, y, slices))
    return serialize_instance(inst)
