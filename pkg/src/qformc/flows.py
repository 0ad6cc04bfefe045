"""Geometries and their flow structures.

A measurement order is represented by a layer function: outputs sit in
layer 0 and ``u`` precedes ``v`` (``u`` is measured first) exactly when
``layers[u] > layers[v]``.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from qformc.angles import Angle
from qformc.errors import FractionalEdgeError
from qformc.gf2 import _row_reduce

Vertex = Hashable


def edge_key(u: Vertex, v: Vertex) -> frozenset:
    return frozenset((u, v))


@dataclass(frozen=True)
class Geometry:
    """Weighted graph with designated inputs and outputs.

    ``edges`` maps unordered pairs to weights in (-1, 1]; weight 1 is a unit
    edge, anything else is fractional.  ``vertex_angles`` carries the square
    terms of the quadratic form the geometry came from, if any.
    """

    vertices: tuple
    inputs: tuple
    outputs: tuple
    edges: Mapping[frozenset, Fraction] = field(default_factory=dict)
    vertex_angles: Mapping[Vertex, Angle] = field(default_factory=dict)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        for group, name in ((self.inputs, "input"), (self.outputs, "output")):
            missing = set(group) - vs
            if missing:
                raise ValueError(f"{name} vertices not in geometry: {sorted(map(str, missing))}")
        for e, w in self.edges.items():
            if len(e) != 2:
                raise ValueError(f"self-loop or malformed edge {set(e)}")
            if not e <= vs:
                raise ValueError(f"edge {set(e)} uses unknown vertices")
            if w == 0 or not -1 < w <= 1:
                raise ValueError(f"edge weight {w} outside (-1, 1] or zero")
        object.__setattr__(self, "edges", {e: Fraction(w) for e, w in self.edges.items()})
        object.__setattr__(self, "_adj", self._adjacency())
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[Vertex],
        inputs: Iterable[Vertex],
        outputs: Iterable[Vertex],
        edges: Iterable[tuple] = (),
        vertex_angles: Mapping[Vertex, Angle] | None = None,
    ) -> Geometry:
        """Build from ``(u, v)`` or ``(u, v, weight)`` tuples; weight defaults to 1."""
        emap: dict[frozenset, Fraction] = {}
        for e in edges:
            u, v, *w = e
            emap[edge_key(u, v)] = Fraction(w[0]) if w else Fraction(1)
        return cls(tuple(vertices), tuple(inputs), tuple(outputs), emap, dict(vertex_angles or {}))

    def _adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(n) for v, n in adj.items()}

    def neighbors(self, v: Vertex) -> frozenset:
        return self._adj[v]

    def weight(self, u: Vertex, v: Vertex) -> Fraction:
        return self.edges.get(edge_key(u, v), Fraction(0))

    def index(self, v: Vertex) -> int:
        return self._index[v]

    @property
    def non_inputs(self) -> tuple:
        ins = set(self.inputs)
        return tuple(v for v in self.vertices if v not in ins)

    @property
    def non_outputs(self) -> tuple:
        outs = set(self.outputs)
        return tuple(v for v in self.vertices if v not in outs)

    def is_unit_weight(self) -> bool:
        return all(w == 1 for w in self.edges.values())

    def fractional_edges(self) -> list[frozenset]:
        return [e for e, w in self.edges.items() if w != 1]


@dataclass(frozen=True)
class GFlow:
    g: Mapping[Vertex, frozenset]
    layers: Mapping[Vertex, int]


@dataclass(frozen=True)
class Flow:
    f: Mapping[Vertex, Vertex]
    layers: Mapping[Vertex, int]

    def as_gflow(self) -> GFlow:
        return GFlow({u: frozenset((v,)) for u, v in self.f.items()}, self.layers)


def measurement_order(geom: Geometry, layers: Mapping[Vertex, int]) -> list:
    """Non-outputs in a linear extension of the layer order.

    Deeper layers come first; ties are broken by declared vertex order.
    """
    return sorted(geom.non_outputs, key=lambda v: (-layers[v], geom.index(v)))


def odd_neighborhood(geom: Geometry, s: Iterable[Vertex]) -> frozenset:
    """Vertices adjacent to an odd number of members of ``s`` (weights ignored)."""
    odd: set = set()
    for v in s:
        if v not in geom._adj:
            raise KeyError(f"unknown vertex {v!r}")
        odd ^= geom._adj[v]
    return frozenset(odd)


def check_gflow(geom: Geometry, cand: GFlow) -> list[str]:
    """Describe every violated gflow condition; empty means valid."""
    problems: list[str] = []
    inputs = set(geom.inputs)
    layers = cand.layers

    def before(u, v) -> bool:
        return layers[u] > layers[v]

    missing = [v for v in geom.vertices if v not in layers]
    if missing:
        return [f"no layer for vertex {v!r}" for v in missing]
    for u in geom.non_outputs:
        if u not in cand.g:
            problems.append(f"g undefined on non-output {u!r}")
            continue
        gu = cand.g[u]
        for v in gu:
            if v not in geom._adj:
                problems.append(f"g({u!r}) contains unknown vertex {v!r}")
            elif v in inputs:
                problems.append(f"g({u!r}) contains input {v!r}")
            elif not before(u, v):
                problems.append(f"{v!r} in g({u!r}) but {u!r} is not measured before it")
        if any(v not in geom._adj for v in gu):
            continue
        odd = odd_neighborhood(geom, gu)
        if u not in odd:
            problems.append(f"{u!r} not in Odd(g({u!r})) = {sorted(map(str, odd))}")
        for v in odd:
            if v != u and not before(u, v):
                problems.append(f"{v!r} in Odd(g({u!r})) but {u!r} is not measured before it")
    for u in cand.g:
        if u in set(geom.outputs):
            problems.append(f"g defined on output {u!r}")
    return problems


def find_gflow(geom: Geometry) -> GFlow | None:
    """Maximally delayed gflow for a unit-weight geometry, or ``None``.

    Works backwards from the outputs: at each stage every unprocessed vertex
    ``u`` looks for a set ``S`` of already-processed non-inputs whose odd
    neighborhood meets the unprocessed vertices exactly in ``{u}``.
    """
    if not geom.is_unit_weight():
        raise FractionalEdgeError("gflow search needs a unit-weight geometry")
    inputs = set(geom.inputs)
    layers = {v: 0 for v in geom.outputs}
    g: dict = {}
    processed = set(geom.outputs)
    unprocessed = [v for v in geom.vertices if v not in processed]
    k = 0
    while unprocessed:
        k += 1
        cols = [v for v in geom.vertices if v in processed and v not in inputs]
        rows = unprocessed
        ncols = len(cols)
        # Augment [A | I] so one elimination serves every right-hand side e_u.
        data = []
        for i, r in enumerate(rows):
            nb = geom._adj[r]
            bits = 0
            for j, c in enumerate(cols):
                if c in nb:
                    bits |= 1 << j
            data.append(bits | (1 << (ncols + i)))
        reduced, pivots = _row_reduce(data, ncols)
        rank = len(pivots)
        found = []
        for i, u in enumerate(rows):
            tcol = [(row >> (ncols + i)) & 1 for row in reduced]
            if any(tcol[rank:]):
                continue
            s = frozenset(cols[c] for row_i, c in enumerate(pivots) if tcol[row_i])
            found.append((u, s))
        if not found:
            return None
        for u, s in found:
            g[u] = s
            layers[u] = k
            processed.add(u)
        unprocessed = [v for v in unprocessed if v not in processed]
    return GFlow(g, layers)


def _find_flow(geom: Geometry, unit_only: bool) -> Flow | None:
    inputs = set(geom.inputs)
    processed = set(geom.outputs)
    layers = {v: 0 for v in geom.outputs}
    f: dict = {}
    correctors = [v for v in geom.outputs if v not in inputs]
    k = 0
    while len(processed) < len(geom.vertices):
        k += 1
        assigned: dict = {}
        for v in correctors:
            pending = [u for u in geom._adj[v] if u not in processed]
            if len(pending) != 1:
                continue
            u = pending[0]
            if u in assigned:
                continue
            if unit_only and geom.weight(u, v) != 1:
                continue
            assigned[u] = v
        if not assigned:
            return None
        for u, v in assigned.items():
            f[u] = v
            layers[u] = k
            processed.add(u)
        used = set(assigned.values())
        correctors = [v for v in correctors if v not in used]
        correctors += [u for u in geom.vertices if u in assigned and u not in inputs]
    return Flow(f, layers)


def find_flow(geom: Geometry) -> Flow | None:
    """Maximally delayed flow (weights ignored), or ``None``."""
    return _find_flow(geom, unit_only=False)


def find_fractional_edge_flow(geom: Geometry) -> Flow | None:
    """A flow whose flow edges all have unit weight, or ``None``."""
    return _find_flow(geom, unit_only=True)


def is_fractional_edge_flow(geom: Geometry, fl: Flow) -> bool:
    if check_gflow(geom, fl.as_gflow()):
        return False
    return all(geom.weight(u, v) == 1 and v in geom.neighbors(u) for u, v in fl.f.items())

