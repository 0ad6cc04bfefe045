"""Turning quadratic form expansions into patterns and circuits, and back.

Sign convention: a vertex ``u`` with square term ``theta_uu`` is measured at
pattern angle ``alpha_u = -theta_uu``.  Outcome 0 of that measurement
projects with ``<0| + e^{i theta_uu} <1|``, which is exactly the factor the
quadratic form contributes.
"""

from __future__ import annotations

from collections.abc import Hashable
from dataclasses import dataclass
from fractions import Fraction

from qformc.angles import Angle
from qformc.circuit import Circuit, Gate
from qformc.errors import (
    FractionalEdgeError,
    InvalidFlowError,
    ScheduleError,
    UnsupportedGateError,
)
from qformc.flows import (
    Flow,
    GFlow,
    check_gflow,
    is_fractional_edge_flow,
    measurement_order,
    odd_neighborhood,
)
from qformc.pattern import (
    ZERO,
    Correct,
    Measure,
    MeasurementPattern,
    SignalForm,
    standard_commands,
)
from qformc.qfe import QFE, Normalization, induced_geometry

Vertex = Hashable


def _sorted_edges(q: QFE) -> list[tuple]:
    index = {v: i for i, v in enumerate(q.vertices)}
    pairs = [tuple(sorted(k, key=index.__getitem__)) for k in q.cross_terms()]
    return sorted(pairs, key=lambda e: (index[e[0]], index[e[1]]))


def pattern_from_gflow(q: QFE, gf: GFlow) -> MeasurementPattern:
    """Measurement pattern driven by a gflow.

    Each non-output ``u`` is measured at ``-theta_uu`` and immediately
    followed by ``X`` on ``g(u)`` and ``Z`` on ``Odd(g(u)) - {u}``, both
    conditioned on ``s_u``.  Output square terms become output rotations.

    Raises
    ------
    FractionalEdgeError
        If some cross term is not ``pi``.
    InvalidFlowError
        If ``gf`` is not a gflow of the induced geometry.
    """
    geom = induced_geometry(q)
    if not geom.is_unit_weight():
        raise FractionalEdgeError("pattern synthesis needs unit-weight cross terms")
    problems = check_gflow(geom, gf)
    if problems:
        raise InvalidFlowError("invalid gflow: " + "; ".join(problems))
    squares = q.square_terms()
    cmds: list = []
    for u in measurement_order(geom, gf.layers):
        cmds.append(Measure(u, -squares.get(u, Angle())))
        s = SignalForm.of(u)
        gu = sorted(gf.g[u], key=geom.index)
        for v in gu:
            cmds.append(Correct("X", v, s))
        for v in sorted(odd_neighborhood(geom, gu) - {u}, key=geom.index):
            cmds.append(Correct("Z", v, s))
    rotations = {w: squares[w] for w in q.outputs if w in squares}
    return MeasurementPattern(q.vertices, q.inputs, q.outputs, tuple(_sorted_edges(q)), tuple(cmds), rotations)


def standardize_pattern(p: MeasurementPattern) -> MeasurementPattern:
    """Move every correction into later measurement domains or onto the outputs.

    ``X^s`` in front of a measurement flips the sign of its angle, so ``s``
    joins the ``s``-domain; ``Z^s`` shifts the angle by ``pi`` and joins the
    ``t``-domain.  Each branch map is preserved up to a unit-modulus phase
    (``X`` and a rotated projector commute only up to ``e^{i alpha}``).
    """
    pending: dict = {}
    measurements = []
    for cmd in p.commands:
        if isinstance(cmd, Correct):
            x, z = pending.get(cmd.vertex, (ZERO, ZERO))
            pending[cmd.vertex] = (x + cmd.domain, z) if cmd.kind == "X" else (x, z + cmd.domain)
        else:
            x, z = pending.pop(cmd.vertex, (ZERO, ZERO))
            measurements.append(Measure(cmd.vertex, cmd.angle, cmd.s_domain + x, cmd.t_domain + z))
    cmds = standard_commands(measurements, pending, p.outputs)
    return MeasurementPattern(p.qubits, p.inputs, p.outputs, p.entangle, cmds, dict(p.output_rotations))


@dataclass(frozen=True)
class _Schedule:
    """Canonical circuit schedule of a flow.

    ``events`` holds ``("cz", u, v, t)`` and ``("j", u, t)`` in emission
    order; ``live_at`` maps each cz event index to the live segment set at
    that moment.
    """

    chains: tuple  # per wire: vertices along the flow line
    events: tuple
    live_at: dict


def _schedule(q: QFE, fl: Flow) -> _Schedule:
    geom = induced_geometry(q)
    if not is_fractional_edge_flow(geom, fl):
        raise InvalidFlowError("not a fractional-edge flow of the induced geometry")
    pred = {v: u for u, v in fl.f.items()}
    starts = list(q.inputs) + [v for v in q.vertices if v not in set(q.inputs) and v not in pred]
    chains = []
    for s in starts:
        chain = [s]
        while chain[-1] in fl.f:
            chain.append(fl.f[chain[-1]])
        chains.append(tuple(chain))
    wire = {v: w for w, ch in enumerate(chains) for v in ch}
    squares = q.square_terms()
    flow_edges = {frozenset((u, v)) for u, v in fl.f.items()}
    pending = {k: a for k, a in q.cross_terms().items() if k not in flow_edges}
    live = {ch[0] for ch in chains}
    dead: set = set()
    events: list = []
    live_at: dict = {}

    def emit_for(newborn):
        for k in sorted(pending, key=lambda k: sorted(geom.index(x) for x in k)):
            if not k & newborn:
                continue
            if not k <= live:
                if k & dead:
                    raise ScheduleError(f"edge {sorted(map(str, k))} crosses a consumed segment")
                continue
            u, v = sorted(k, key=geom.index)
            live_at[len(events)] = frozenset(live)
            events.append(("cz", u, v, pending.pop(k).coeff))

    emit_for(set(live))
    for u in measurement_order(geom, fl.layers):
        events.append(("j", u, squares.get(u, Angle()).coeff))
        live.discard(u)
        dead.add(u)
        nxt = fl.f[u]
        live.add(nxt)
        emit_for({nxt})
    if pending:
        raise ScheduleError("some edges were never scheduled")
    for w in q.outputs:
        if w in squares:
            events.append(("z", w, squares[w].coeff))
    assert len(wire) == len(q.vertices)
    return _Schedule(tuple(chains), tuple(events), live_at)


def circuit_from_flow(q: QFE, fl: Flow) -> Circuit:
    """Circuit with one wire per flow line.

    Wires carrying inputs come first (in ``q.inputs`` order), then wires
    starting in ``|+>``.  Each flow edge ``u -> f(u)`` becomes ``J(theta_uu)``,
    each other edge ``uv`` of weight ``w`` becomes ``CZ^w``, and output
    square terms become trailing ``Z`` rotations.  Final wire labels are
    the output vertices, so ``simulate_circuit_dense(c, output_labels=q.outputs)``
    is proportional to ``evaluate_dense(q)``.
    """
    sched = _schedule(q, fl)
    wire = {v: w for w, ch in enumerate(sched.chains) for v in ch}
    gates = []
    for ev in sched.events:
        if ev[0] == "cz":
            gates.append(Gate.cz(wire[ev[1]], wire[ev[2]], ev[3]))
        elif ev[0] == "j":
            gates.append(Gate.j(wire[ev[1]], ev[2]))
        else:
            gates.append(Gate.z(wire[ev[1]], ev[2]))
    n_in = len(q.inputs)
    return Circuit(
        len(sched.chains),
        tuple(gates),
        frozenset(range(n_in, len(sched.chains))),
        tuple(ch[0] for ch in sched.chains),
        tuple(ch[-1] for ch in sched.chains),
    )


def decompose_about_edge(q: QFE, fl: Flow, edge: tuple) -> tuple[QFE, QFE, QFE]:
    """Split ``q`` into ``q3 . q2 . q1`` around a fractional edge ``ab``.

    ``V2`` is the set of segments live in the canonical flow schedule at the
    moment ``CZ^w(ab)`` is emitted; it contains ``a`` and ``b`` and has one
    vertex per wire.  ``q1`` runs from the inputs to ``V2``, ``q2`` holds the
    cross terms inside ``V2`` and ``q3`` runs from ``V2`` to the outputs.
    The three quadratic forms add up to ``Q`` and the normalizations
    multiply to ``q.norm``, so the dense matrices compose exactly.

    Raises
    ------
    FractionalEdgeError
        If ``edge`` is not a fractional-weight cross term of ``q``.
    """
    a, b = edge
    key = frozenset((a, b))
    angle = q.cross_terms().get(key)
    if angle is None or angle == Angle(1):
        raise FractionalEdgeError(f"({a!r}, {b!r}) is not a fractional edge")
    sched = _schedule(q, fl)
    idx = next(i for i, ev in enumerate(sched.events) if ev[0] == "cz" and frozenset(ev[1:3]) == key)
    v2_set = sched.live_at[idx]
    order = {v: i for i, v in enumerate(q.vertices)}
    v2 = tuple(sorted(v2_set, key=order.__getitem__))
    consumed = {ev[1] for ev in sched.events[:idx] if ev[0] == "j"}
    v1_set = consumed | v2_set
    v1 = tuple(v for v in q.vertices if v in v1_set)
    v3 = tuple(v for v in q.vertices if v not in consumed)
    t1, t2, t3 = {}, {}, {}
    for k, ang in q.terms.items():
        if len(k) == 2 and k <= v2_set:
            t2[k] = ang
        elif k <= v1_set and not (len(k) == 1 and k <= v2_set):
            t1[k] = ang
        else:
            t3[k] = ang
    p1 = len(v1) - len(q.inputs)
    q1 = QFE(v1, q.inputs, v2, t1, Normalization(p1))
    q2 = QFE(v2, v2, v2, t2, Normalization(0))
    q3 = QFE(v3, v2, q.outputs, t3, Normalization(q.norm.sqrt2_power - p1, q.norm.phase))
    return q1, q2, q3


def circuit_to_qfe(c: Circuit) -> QFE:
    """Sum-over-paths expansion of a circuit over ``H``, ``Z^t`` and ``CZ^t``.

    Path variables are named ``x1, x2, ...`` in creation order: one per
    wire at the start, then one per ``H``.  Inputs are the initial variables
    of the non-``|+>`` wires and outputs the final variable of every wire,
    both in ascending wire order, matching ``simulate_circuit_dense``.
    Wires prepared in ``|+>`` contribute a factor ``1/sqrt2`` each, on top of
    one per ``H``.

    Raises
    ------
    UnsupportedGateError
        On ``J`` gates; expand them first with ``expand_j_gates``.
    """
    names: list[str] = []

    def fresh() -> str:
        names.append(f"x{len(names) + 1}")
        return names[-1]

    current = [fresh() for _ in range(c.wires)]
    inputs = tuple(current[w] for w in c.input_wires)
    terms: list[tuple] = []
    n_h = 0
    for g in c.gates:
        if g.kind == "H":
            w = g.wires[0]
            new = fresh()
            terms.append((current[w], new, Angle(1)))
            current[w] = new
            n_h += 1
        elif g.kind == "Z":
            v = current[g.wires[0]]
            terms.append((v, v, Angle(g.t)))
        elif g.kind == "CZ":
            terms.append((current[g.wires[0]], current[g.wires[1]], Angle(g.t)))
        else:
            raise UnsupportedGateError(f"{g.kind} gates must be expanded before translation")
    return QFE.build(names, inputs, tuple(current), terms, Normalization(n_h + len(c.plus_wires)))


def qft_qfe(n: int) -> QFE:
    """Quadratic form of the ``2**n``-point discrete Fourier transform.

    ``Q = sum_{h + j <= n - 1} pi 2**(h + j) / 2**(n - 1) x_h y_j`` with
    ``C = sqrt(2**n)``.  Inputs are listed ``x_{n-1}, ..., x_0`` and outputs
    ``y_{n-1}, ..., y_0`` so that ``evaluate_dense(qft_qfe(n))[j, k]`` is
    ``exp(2 pi i j k / 2**n) / sqrt(2**n)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    xs = [f"x{h}" for h in range(n)]
    ys = [f"y{j}" for j in range(n)]
    terms = [
        (xs[h], ys[j], Angle(Fraction(2 ** (h + j), 2 ** (n - 1))))
        for h in range(n)
        for j in range(n - h)
    ]
    return QFE.build(xs + ys, xs[::-1], ys[::-1], terms, Normalization(n))
