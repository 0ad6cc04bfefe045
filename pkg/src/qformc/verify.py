"""Brute-force dense oracles.

Everything here is exponential in the number of qubits and meant for
desk-scale cross-checking of the symbolic pipeline.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from qformc.circuit import Circuit
from qformc.clifford import LeuvenTableau, pauli_matrix
from qformc.errors import DimensionError, SizeLimitError
from qformc.pattern import Correct, Measure, MeasurementPattern

DEFAULT_TOL = 1e-9
MAX_CIRCUIT_WIRES = 10
MAX_PATTERN_QUBITS = 12
MAX_PATTERN_MEASURED = 10

_SQRT_HALF = 1 / math.sqrt(2)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF


def _apply_1q(state: np.ndarray, axis: int, u: np.ndarray) -> np.ndarray:
    return np.moveaxis(np.tensordot(u, state, axes=([1], [axis])), 0, axis)


def _phase_on_one(state: np.ndarray, axes: Sequence[int], phase: complex) -> np.ndarray:
    """Multiply the amplitudes where every listed axis is 1."""
    idx = [slice(None)] * state.ndim
    for a in axes:
        idx[a] = 1
    state = state.copy()
    state[tuple(idx)] *= phase
    return state


def _eipi(t) -> complex:
    return complex(math.cos(math.pi * float(t)), math.sin(math.pi * float(t)))


def _initial_state(n_inputs: int) -> np.ndarray:
    dim = 1 << n_inputs
    return np.eye(dim, dtype=complex).reshape((2,) * n_inputs + (dim,))


def _add_plus(state: np.ndarray, position: int) -> np.ndarray:
    return np.stack([state, state], axis=position) * _SQRT_HALF


def _to_matrix(state: np.ndarray, order: Sequence[int]) -> np.ndarray:
    batch = state.shape[-1]
    perm = list(order) + [state.ndim - 1]
    return np.transpose(state, perm).reshape(1 << len(order), batch)


def simulate_circuit_dense(
    c: Circuit,
    *,
    output_labels: Sequence[Hashable] | None = None,
    max_wires: int = MAX_CIRCUIT_WIRES,
) -> np.ndarray:
    """Matrix of ``c``: rows over all wires, columns over the non-``|+>`` wires.

    Both are big-endian in ascending wire order unless ``output_labels`` is
    given, in which case rows follow those labels via ``c.final_labels``.
    """
    if c.wires > max_wires:
        raise SizeLimitError(f"{c.wires} wires exceeds the simulation cap of {max_wires}")
    ins = c.input_wires
    state = _initial_state(len(ins))
    # axis k of the state holds wire `order[k]` until the final transpose
    order = list(ins)
    for w in sorted(c.plus_wires):
        state = _add_plus(state, len(order))
        order.append(w)
    pos = {w: k for k, w in enumerate(order)}
    for g in c.gates:
        a = [pos[w] for w in g.wires]
        if g.kind == "H":
            state = _apply_1q(state, a[0], _H)
        elif g.kind == "J":
            state = _phase_on_one(state, a, _eipi(g.t))
            state = _apply_1q(state, a[0], _H)
        else:
            state = _phase_on_one(state, a, _eipi(g.t))
    if output_labels is None:
        rows = [pos[w] for w in range(c.wires)]
    else:
        if c.final_labels is None:
            raise ValueError("circuit has no final labels")
        where = {lab: w for w, lab in enumerate(c.final_labels)}
        if sorted(map(str, output_labels)) != sorted(map(str, c.final_labels)):
            raise ValueError("output labels must be a permutation of the final labels")
        rows = [pos[where[lab]] for lab in output_labels]
    return _to_matrix(state, rows)


@dataclass(frozen=True)
class BranchReport:
    branch: dict
    map: np.ndarray
    probability_weight: float


def _measure_bra(angle: float, outcome: int) -> np.ndarray:
    sign = -1 if outcome else 1
    return np.array([1, sign * complex(math.cos(angle), -math.sin(angle))]) * _SQRT_HALF


def _run_pattern(
    p: MeasurementPattern,
    chooser,
) -> Iterable[tuple[dict, np.ndarray]]:
    """Depth-first execution; ``chooser(vertex, outcomes)`` lists outcomes to explore."""
    state = _initial_state(len(p.inputs))
    live = list(p.inputs)
    for v in p.qubits:
        if v not in set(p.inputs):
            state = _add_plus(state, len(live))
            live.append(v)
    for u, v in p.entangle:
        state = _phase_on_one(state, [live.index(u), live.index(v)], -1)

    def finish(state, live, outcomes):
        for w, a in p.output_rotations.items():
            state = _phase_on_one(state, [live.index(w)], _eipi(a.coeff))
        return dict(outcomes), _to_matrix(state, [live.index(w) for w in p.outputs])

    def step(k, state, live, outcomes):
        while k < len(p.commands):
            cmd = p.commands[k]
            if isinstance(cmd, Correct):
                if cmd.domain.evaluate(outcomes):
                    ax = live.index(cmd.vertex)
                    if cmd.kind == "X":
                        state = np.flip(state, axis=ax)
                    else:
                        state = _phase_on_one(state, [ax], -1)
                k += 1
                continue
            assert isinstance(cmd, Measure)
            s = cmd.s_domain.evaluate(outcomes)
            t = cmd.t_domain.evaluate(outcomes)
            angle = (-1) ** s * cmd.angle.radians + t * math.pi
            ax = live.index(cmd.vertex)
            rest = live[:ax] + live[ax + 1 :]
            for bit in chooser(cmd.vertex, outcomes):
                sub = np.tensordot(_measure_bra(angle, bit), state, axes=([0], [ax]))
                outcomes[cmd.vertex] = bit
                yield from step(k + 1, sub, rest, outcomes)
                del outcomes[cmd.vertex]
            return
        yield finish(state, live, outcomes)

    yield from step(0, state, live, {})


def _check_pattern_size(p: MeasurementPattern, max_qubits: int, max_measured: int) -> None:
    if len(p.qubits) > max_qubits:
        raise SizeLimitError(f"{len(p.qubits)} qubits exceeds the simulation cap of {max_qubits}")
    if len(p.measured) > max_measured:
        raise SizeLimitError(f"{len(p.measured)} measurements exceeds the cap of {max_measured}")


def _report(p: MeasurementPattern, branch: dict, m: np.ndarray) -> BranchReport:
    weight = float(np.vdot(m, m).real) / m.shape[1]
    return BranchReport(branch, m, weight)


def simulate_pattern_branches(
    p: MeasurementPattern,
    *,
    max_qubits: int = MAX_PATTERN_QUBITS,
    max_measured: int = MAX_PATTERN_MEASURED,
) -> list[BranchReport]:
    """Unnormalized linear map of every outcome branch, in lexicographic branch order."""
    _check_pattern_size(p, max_qubits, max_measured)
    return [_report(p, b, m) for b, m in _run_pattern(p, lambda v, o: (0, 1))]


def simulate_pattern_branch(
    p: MeasurementPattern,
    outcomes: Mapping[Hashable, int],
    *,
    max_qubits: int = MAX_PATTERN_QUBITS,
) -> BranchReport:
    """A single branch, with outcomes given per measured qubit (missing = 0)."""
    _check_pattern_size(p, max_qubits, len(p.qubits))
    ((b, m),) = list(_run_pattern(p, lambda v, o: (outcomes.get(v, 0),)))
    return _report(p, b, m)


def positive_branch(p: MeasurementPattern, **kw) -> np.ndarray:
    return simulate_pattern_branch(p, {}, **kw).map


def proportional_up_to_scalar(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> complex | None:
    """Scalar ``c`` with ``a == c * b`` entrywise within ``tol``, else ``None``.

    The largest-magnitude entry of ``b`` fixes ``c``.
    """
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    flat = np.abs(b).ravel()
    pivot = int(np.argmax(flat)) if flat.size else 0
    if flat.size == 0 or flat[pivot] == 0:
        raise ValueError("reference matrix is identically zero")
    c = a.ravel()[pivot] / b.ravel()[pivot]
    if np.max(np.abs(a - c * b)) <= tol:
        return complex(c)
    return None


def max_deviation(a: np.ndarray, b: np.ndarray, scalar: complex) -> float:
    return float(np.max(np.abs(np.asarray(a) - scalar * np.asarray(b))))


def check_pauli_conjugation(u: np.ndarray, tab: LeuvenTableau, tol: float = DEFAULT_TOL) -> list[int]:
    """Generators ``t`` (1-based, as ``P_1..P_2n``) where ``U P_t U^dag`` misses its tableau image."""
    n = tab.n
    u = np.asarray(u, dtype=complex)
    dim = 1 << n
    if u.shape != (dim, dim):
        raise DimensionError(f"expected a {dim}x{dim} matrix, got {u.shape}")
    if np.max(np.abs(u @ u.conj().T - np.eye(dim))) > tol:
        raise ValueError("matrix is not unitary within tolerance")
    failing = []
    for t in range(2 * n):
        x = [1 if q == t else 0 for q in range(n)]
        z = [1 if q + n == t else 0 for q in range(n)]
        p_t = pauli_matrix(x, z)
        image = tab.image(t)
        if np.max(np.abs(u @ p_t @ u.conj().T - image.matrix())) > tol:
            failing.append(t + 1)
    return failing


def branches_agree(
    reports: Sequence[BranchReport], tol: float = DEFAULT_TOL
) -> tuple[bool, float, list[dict]]:
    """Whether every branch map equals the positive branch up to a unit-modulus phase.

    Branch maps are unnormalized, so equal-weight branches compare both
    direction and magnitude.  Returns ``(ok, worst deviation, failing branches)``.
    """
    ref = next(r for r in reports if not any(r.branch.values()))
    worst, failing = 0.0, []
    for r in reports:
        c = proportional_up_to_scalar(r.map, ref.map, tol)
        if c is None or abs(abs(c) - 1) > tol:
            pivot = np.unravel_index(np.argmax(np.abs(ref.map)), ref.map.shape)
            c0 = r.map[pivot] / ref.map[pivot]
            c0 = c0 / abs(c0) if abs(c0) else 1.0
            worst = max(worst, max_deviation(r.map, ref.map, c0))
            failing.append(r.branch)
        else:
            worst = max(worst, max_deviation(r.map, ref.map, c / abs(c)))
    return not failing, worst, failing


def verification_report(
    scalar: complex | None, max_abs_error: float, failing_branches: Iterable = ()
) -> dict:
    failing_branches = [
        {str(k): int(v) for k, v in b.items()} if isinstance(b, Mapping) else b for b in failing_branches
    ]
    ok = scalar is not None and not failing_branches
    return {
        "status": "ok" if ok else "fail",
        "scalar": [scalar.real, scalar.imag] if scalar is not None else None,
        "max_abs_error": max_abs_error,
        "failing_branches": failing_branches,
    }


def all_branch_assignments(vertices: Sequence[Hashable]) -> Iterable[dict]:
    for bits in itertools.product((0, 1), repeat=len(vertices)):
        yield dict(zip(vertices, bits))


def reorder_qubits(m: np.ndarray, labels_from: Sequence, labels_to: Sequence, axis: int) -> np.ndarray:
    """Permute the tensor factors along one axis of a big-endian matrix.

    ``labels_from`` names the qubits of ``m`` along ``axis`` (most
    significant first); the result is indexed by ``labels_to`` instead.
    """
    labels_from, labels_to = list(labels_from), list(labels_to)
    if sorted(map(str, labels_from)) != sorted(map(str, labels_to)):
        raise ValueError("qubit labels differ, cannot reorder")
    k = len(labels_from)
    other = m.shape[1 - axis]
    t = np.moveaxis(np.asarray(m), axis, 0).reshape((2,) * k + (other,))
    where = {str(lab): i for i, lab in enumerate(labels_from)}
    perm = [where[str(lab)] for lab in labels_to] + [k]
    return np.moveaxis(np.transpose(t, perm).reshape(1 << k, other), 0, axis)


@dataclass(frozen=True)
class DenseView:
    """Dense matrix of an artifact plus the qubit labels of its rows and columns."""

    matrix: np.ndarray
    row_labels: tuple | None
    col_labels: tuple | None


def align(a: DenseView, b: DenseView) -> np.ndarray:
    """``b``'s matrix with rows and columns permuted into ``a``'s label order.

    Axes whose labels are missing on either side, or name different qubit
    sets, are left in place.
    """
    m = b.matrix
    for axis, (la, lb) in enumerate(((a.row_labels, b.row_labels), (a.col_labels, b.col_labels))):
        if la is not None and lb is not None and sorted(map(str, la)) == sorted(map(str, lb)):
            m = reorder_qubits(m, lb, la, axis)
    return m
