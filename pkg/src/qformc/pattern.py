"""Measurement patterns: preparation, entangling, adaptive measurement, correction.

Execution semantics, used by every consumer in the package:

1. qubits outside ``inputs`` are prepared in ``|+>``;
2. a controlled-Z is applied on every pair in ``entangle``;
3. ``commands`` run in order.  ``Measure(v, alpha, s, t)`` measures ``v``
   in the XY-plane at angle ``(-1)**s(outcomes) * alpha + t(outcomes) * pi``;
   outcome 0 projects onto ``|0> + e^{i angle} |1>``.  ``Correct`` applies
   a Pauli X or Z when its domain evaluates to 1;
4. finally each output ``w`` in ``output_rotations`` gets
   ``diag(1, e^{i theta_w})``.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Union

from qformc.angles import Angle

Vertex = Hashable


@dataclass(frozen=True)
class SignalForm:
    """Affine GF(2) combination ``constant + sum(s_v for v in signals)``."""

    constant: int = 0
    signals: frozenset = frozenset()

    @classmethod
    def of(cls, *signals: Vertex) -> SignalForm:
        out = cls()
        for s in signals:
            out = out + cls(0, frozenset((s,)))
        return out

    def __add__(self, other: SignalForm) -> SignalForm:
        return SignalForm((self.constant + other.constant) % 2, self.signals ^ other.signals)

    def evaluate(self, outcomes: Mapping[Vertex, int]) -> int:
        return (self.constant + sum(outcomes[s] for s in self.signals)) % 2

    def is_zero(self) -> bool:
        return not self.constant and not self.signals

    def __repr__(self) -> str:
        parts = [f"s[{s}]" for s in sorted(self.signals, key=str)]
        if self.constant or not parts:
            parts.insert(0, str(self.constant))
        return " + ".join(parts)


ZERO = SignalForm()


@dataclass(frozen=True)
class Measure:
    vertex: Vertex
    angle: Angle
    s_domain: SignalForm = ZERO
    t_domain: SignalForm = ZERO


@dataclass(frozen=True)
class Correct:
    kind: str  # "X" or "Z"
    vertex: Vertex
    domain: SignalForm

    def __post_init__(self):
        if self.kind not in ("X", "Z"):
            raise ValueError(f"correction kind must be X or Z, got {self.kind!r}")


Command = Union[Measure, Correct]


@dataclass(frozen=True)
class MeasurementPattern:
    qubits: tuple
    inputs: tuple
    outputs: tuple
    entangle: tuple = ()
    commands: tuple = ()
    output_rotations: Mapping[Vertex, Angle] = field(default_factory=dict)

    def __post_init__(self):
        qs = set(self.qubits)
        if len(qs) != len(self.qubits):
            raise ValueError("duplicate qubit")
        if not set(self.inputs) <= qs or not set(self.outputs) <= qs:
            raise ValueError("inputs and outputs must be qubits of the pattern")
        for u, v in self.entangle:
            if u == v or u not in qs or v not in qs:
                raise ValueError(f"bad entangling pair ({u!r}, {v!r})")
        outs = set(self.outputs)
        measured: set = set()
        for cmd in self.commands:
            if cmd.vertex not in qs:
                raise ValueError(f"command on unknown qubit {cmd.vertex!r}")
            if cmd.vertex in measured:
                raise ValueError(f"qubit {cmd.vertex!r} used after its measurement")
            domains = (cmd.s_domain, cmd.t_domain) if isinstance(cmd, Measure) else (cmd.domain,)
            for d in domains:
                if not d.signals <= measured:
                    raise ValueError(f"signal for {cmd.vertex!r} refers to an unmeasured qubit")
            if isinstance(cmd, Measure):
                if cmd.vertex in outs:
                    raise ValueError(f"output {cmd.vertex!r} is measured")
                measured.add(cmd.vertex)
        if measured != qs - outs:
            raise ValueError("every non-output qubit must be measured exactly once")
        if not set(self.output_rotations) <= outs:
            raise ValueError("output rotations must act on outputs")

    @property
    def measurements(self) -> list[Measure]:
        return [c for c in self.commands if isinstance(c, Measure)]

    @property
    def measured(self) -> list:
        return [c.vertex for c in self.commands if isinstance(c, Measure)]

    def is_standard(self) -> bool:
        """Corrections only after all measurements and only on outputs."""
        seen_correction = False
        outs = set(self.outputs)
        for c in self.commands:
            if isinstance(c, Correct):
                seen_correction = True
                if c.vertex not in outs:
                    return False
            elif seen_correction:
                return False
        return True

    @property
    def final_corrections(self) -> dict:
        """Per-output ``(x_form, z_form)`` of a standard pattern."""
        if not self.is_standard():
            raise ValueError("final corrections are only defined for standard patterns")
        out = {w: (ZERO, ZERO) for w in self.outputs}
        for c in self.commands:
            if isinstance(c, Correct):
                x, z = out[c.vertex]
                out[c.vertex] = (x + c.domain, z) if c.kind == "X" else (x, z + c.domain)
        return out

    def needs_adaptation(self) -> bool:
        return any(not (m.s_domain.is_zero() and m.t_domain.is_zero()) for m in self.measurements)


def standard_commands(
    measurements: Iterable[Measure],
    final: Mapping[Vertex, tuple[SignalForm, SignalForm]],
    outputs: Iterable[Vertex],
) -> tuple:
    """Command tuple for a standard pattern: measurements, then X and Z per output."""
    cmds: list = list(measurements)
    for w in outputs:
        x, z = final.get(w, (ZERO, ZERO))
        if not x.is_zero():
            cmds.append(Correct("X", w, x))
        if not z.is_zero():
            cmds.append(Correct("Z", w, z))
    return tuple(cmds)
