"""Quadratic form expansions.

A QFE over vertex set ``V`` with inputs ``I`` and outputs ``O`` denotes the
matrix ``(1/C) * sum_x exp(i Q(x)) |x_O><x_I|`` where ``x`` ranges over all
bit assignments to ``V``.  Basis states of ``I`` and ``O`` are indexed
big-endian in the declared order of ``inputs`` / ``outputs``.
"""

from __future__ import annotations

import math
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from qformc.angles import Angle
from qformc.errors import CompositionError, SizeLimitError
from qformc.flows import Geometry
from qformc.pattern import Correct, Measure, MeasurementPattern

Vertex = Hashable

DEFAULT_MAX_VERTICES = 22
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Normalization:
    """``C = 2**(sqrt2_power / 2) * exp(i * phase)``."""

    sqrt2_power: int = 0
    phase: Angle = field(default_factory=Angle)

    @property
    def value(self) -> complex:
        return 2 ** (self.sqrt2_power / 2) * complex(math.cos(self.phase.radians), math.sin(self.phase.radians))

    def __mul__(self, other: Normalization) -> Normalization:
        return Normalization(self.sqrt2_power + other.sqrt2_power, self.phase + other.phase)


def _term_key(u: Vertex, v: Vertex) -> frozenset:
    return frozenset((u, v))


@dataclass(frozen=True)
class QFE:
    vertices: tuple
    inputs: tuple
    outputs: tuple
    terms: Mapping[frozenset, Angle] = field(default_factory=dict)
    norm: Normalization = field(default_factory=Normalization)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        if len(set(self.inputs)) != len(self.inputs) or len(set(self.outputs)) != len(self.outputs):
            raise ValueError("duplicate input or output vertex")
        if not set(self.inputs) <= vs or not set(self.outputs) <= vs:
            raise ValueError("inputs and outputs must be vertices")
        clean = {}
        for key, angle in self.terms.items():
            if not 1 <= len(key) <= 2 or not key <= vs:
                raise ValueError(f"term {set(key)} uses unknown vertices")
            if not angle.is_zero():
                clean[key] = angle
        object.__setattr__(self, "terms", clean)

    @classmethod
    def build(
        cls,
        vertices: Iterable[Vertex],
        inputs: Iterable[Vertex],
        outputs: Iterable[Vertex],
        terms: Iterable[tuple] = (),
        norm: Normalization | None = None,
    ) -> QFE:
        """Accumulate ``(u, v, angle)`` triples (``u == v`` for square terms)."""
        acc: dict[frozenset, Angle] = {}
        for u, v, a in terms:
            key = _term_key(u, v)
            acc[key] = acc.get(key, Angle()) + Angle(a)
        return cls(tuple(vertices), tuple(inputs), tuple(outputs), acc, norm or Normalization())

    def angle(self, u: Vertex, v: Vertex | None = None) -> Angle:
        return self.terms.get(_term_key(u, u if v is None else v), Angle())

    def square_terms(self) -> dict:
        return {next(iter(k)): a for k, a in self.terms.items() if len(k) == 1}

    def cross_terms(self) -> dict:
        return {k: a for k, a in self.terms.items() if len(k) == 2}

    def phase(self, x: Mapping[Vertex, int]) -> Fraction:
        """``Q(x) / pi`` (not reduced)."""
        total = Fraction(0)
        for k, a in self.terms.items():
            if all(x[v] for v in k):
                total += a.coeff
        return total

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> QFE:
        m = lambda v: mapping.get(v, v)  # noqa: E731
        return QFE(
            tuple(m(v) for v in self.vertices),
            tuple(m(v) for v in self.inputs),
            tuple(m(v) for v in self.outputs),
            {frozenset(m(v) for v in k): a for k, a in self.terms.items()},
            self.norm,
        )


def evaluate_dense(q: QFE, max_vertices: int = DEFAULT_MAX_VERTICES) -> np.ndarray:
    """The ``2**|O| x 2**|I|`` matrix denoted by ``q``.

    Phases are summed as exact integers modulo ``2 * D`` (``D`` the common
    denominator of all coefficients), so only the final accumulation is
    floating point.  The summation order per entry is fixed.
    """
    n = len(q.vertices)
    if n > max_vertices:
        raise SizeLimitError(f"{n} vertices exceeds the dense evaluation cap of {max_vertices}")
    index = {v: i for i, v in enumerate(q.vertices)}
    den = 1
    for a in q.terms.values():
        den = den * a.den // math.gcd(den, a.den)
    modulus = 2 * den
    squares = [(index[next(iter(k))], a.num * (den // a.den)) for k, a in q.terms.items() if len(k) == 1]
    crosses = []
    for k, a in q.terms.items():
        if len(k) == 2:
            u, v = tuple(k)
            crosses.append((index[u], index[v], a.num * (den // a.den)))
    roots = np.exp(1j * np.pi * np.arange(modulus) / den)
    n_in, n_out = len(q.inputs), len(q.outputs)
    in_pos = [index[v] for v in q.inputs]
    out_pos = [index[v] for v in q.outputs]
    size = (1 << n_out) * (1 << n_in)
    acc = np.zeros(size, dtype=complex)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = [(idx >> (n - 1 - i)) & 1 for i in range(n)]
        ph = np.zeros(idx.shape, dtype=np.int64)
        for i, c in squares:
            ph += c * bits[i]
        for i, j, c in crosses:
            ph += c * (bits[i] & bits[j])
        ph %= modulus
        row = np.zeros(idx.shape, dtype=np.int64)
        for p in out_pos:
            row = (row << 1) | bits[p]
        col = np.zeros(idx.shape, dtype=np.int64)
        for p in in_pos:
            col = (col << 1) | bits[p]
        flat = row * (1 << n_in) + col
        vals = roots[ph]
        acc += np.bincount(flat, weights=vals.real, minlength=size) + 1j * np.bincount(
            flat, weights=vals.imag, minlength=size
        )
    return acc.reshape(1 << n_out, 1 << n_in) / q.norm.value


def induced_geometry(q: QFE) -> Geometry:
    """Weighted graph of the cross terms; square terms become vertex angles."""
    edges = {k: a.coeff for k, a in q.terms.items() if len(k) == 2}
    return Geometry(q.vertices, q.inputs, q.outputs, edges, q.square_terms())


def compose_sequential(first: QFE, second: QFE) -> QFE:
    """QFE for ``second @ first``; requires shared vertices == first.outputs == second.inputs.

    The outputs of ``first`` and inputs of ``second`` must be listed in the
    same order so that the matrix identity holds index by index.
    """
    shared = set(first.vertices) & set(second.vertices)
    if not (shared == set(first.outputs) == set(second.inputs)):
        raise CompositionError("shared vertices must equal first.outputs and second.inputs")
    if tuple(first.outputs) != tuple(second.inputs):
        raise CompositionError("first.outputs and second.inputs must be listed in the same order")
    vertices = tuple(first.vertices) + tuple(v for v in second.vertices if v not in shared)
    terms = dict(first.terms)
    for k, a in second.terms.items():
        terms[k] = terms.get(k, Angle()) + a
    return QFE(vertices, first.inputs, second.outputs, terms, first.norm * second.norm)


def compose_tensor(a: QFE, b: QFE) -> QFE:
    """QFE for ``kron(a, b)``."""
    if set(a.vertices) & set(b.vertices):
        raise CompositionError("tensor factors must have disjoint vertex sets")
    terms = dict(a.terms)
    terms.update(b.terms)
    return QFE(a.vertices + b.vertices, a.inputs + b.inputs, a.outputs + b.outputs, terms, a.norm * b.norm)


@dataclass(frozen=True)
class PhaseMapParts:
    """Preparation, diagonal entangler, equatorial projections, output rotations.

    Unnormalized, the composite ``rotations . projections . entangler . prep``
    reproduces ``C * evaluate_dense(q)`` exactly: prepared qubits start in
    ``|0> + |1>`` and vertex ``v`` is projected with ``<0| + e^{i theta_vv} <1|``,
    i.e. onto ``|0> + e^{-i theta_vv} |1>``.
    """

    prep: tuple
    entangler: tuple
    output_rotations: Mapping[Vertex, Angle]
    projections: Mapping[Vertex, Angle]


def phase_map_parts(q: QFE) -> PhaseMapParts:
    ins, outs = set(q.inputs), set(q.outputs)
    squares = q.square_terms()
    index = {v: i for i, v in enumerate(q.vertices)}
    entangler = []
    for k, a in q.cross_terms().items():
        u, v = sorted(k, key=index.__getitem__)
        entangler.append((u, v, a))
    entangler.sort(key=lambda t: (index[t[0]], index[t[1]]))
    return PhaseMapParts(
        prep=tuple(v for v in q.vertices if v not in ins),
        entangler=tuple(entangler),
        output_rotations={v: squares[v] for v in q.outputs if v in squares},
        projections={v: squares.get(v, Angle()) for v in q.vertices if v not in outs},
    )


def pattern_to_qfe(p: MeasurementPattern) -> QFE:
    """QFE of a pattern's positive branch.

    ``Q = sum_{uv in E} pi x_u x_v - sum_{v measured} alpha_v x_v^2
    + sum_{w in O} rho_w x_w^2``.  The normalization ``2**(|V \\ I| / 2)``
    makes the result the implemented map when all branches are equiprobable.
    """
    for cmd in p.commands:
        if isinstance(cmd, Measure):
            if cmd.s_domain.constant or cmd.t_domain.constant:
                raise ValueError("positive branch must not depend on constant feed-forward")
        elif isinstance(cmd, Correct) and cmd.domain.constant:
            raise ValueError("positive branch must not apply corrections")
    terms = [(u, v, Angle(1)) for u, v in p.entangle]
    terms += [(m.vertex, m.vertex, -m.angle) for m in p.measurements]
    terms += [(w, w, a) for w, a in p.output_rotations.items()]
    n_prep = len(set(p.qubits) - set(p.inputs))
    return QFE.build(p.qubits, p.inputs, p.outputs, terms, Normalization(n_prep))
