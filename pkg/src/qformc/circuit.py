"""Gate circuits over ``H``, ``J(alpha)``, ``Z^t`` and ``CZ^t``.

Angles are stored as coefficients of pi:

* ``J`` with ``t`` is ``J(t*pi) = (1/sqrt2) [[1, e^{i t pi}], [1, -e^{i t pi}]]``
  (``J(0) = H``);
* ``Z`` with ``t`` is ``diag(1, e^{i t pi})``;
* ``CZ`` with ``t`` is ``diag(1, 1, 1, e^{i t pi})``.

Wires listed in ``plus_wires`` start in ``|+>``; the rest carry the input,
in ascending wire order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from qformc.angles import Angle

GATE_ARITY = {"H": 1, "J": 1, "Z": 1, "CZ": 2}


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]
    t: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.wires) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {GATE_ARITY[self.kind]} wire(s)")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("gate wires must be distinct")
        object.__setattr__(self, "wires", tuple(self.wires))
        object.__setattr__(self, "t", Angle(Fraction(self.t)).coeff)

    @classmethod
    def h(cls, w: int) -> Gate:
        return cls("H", (w,))

    @classmethod
    def j(cls, w: int, t) -> Gate:
        return cls("J", (w,), Fraction(t))

    @classmethod
    def z(cls, w: int, t) -> Gate:
        return cls("Z", (w,), Fraction(t))

    @classmethod
    def cz(cls, a: int, b: int, t=1) -> Gate:
        return cls("CZ", (a, b), Fraction(t))


@dataclass(frozen=True)
class Circuit:
    wires: int
    gates: tuple = ()
    plus_wires: frozenset = frozenset()
    initial_labels: tuple | None = None
    final_labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "plus_wires", frozenset(self.plus_wires))
        for g in self.gates:
            if any(not 0 <= w < self.wires for w in g.wires):
                raise ValueError(f"gate {g} addresses a wire outside 0..{self.wires - 1}")
        if any(not 0 <= w < self.wires for w in self.plus_wires):
            raise ValueError("plus wire index out of range")
        for labels in (self.initial_labels, self.final_labels):
            if labels is not None and len(labels) != self.wires:
                raise ValueError("need exactly one label per wire")

    @property
    def input_wires(self) -> list[int]:
        return [w for w in range(self.wires) if w not in self.plus_wires]

    def count(self, *kinds: str) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)


def expand_j_gates(c: Circuit) -> Circuit:
    """Rewrite each ``J(alpha)`` as ``Z^alpha`` followed by ``H``."""
    gates = []
    for g in c.gates:
        if g.kind == "J":
            if g.t != 0:
                gates.append(Gate.z(g.wires[0], g.t))
            gates.append(Gate.h(g.wires[0]))
        else:
            gates.append(g)
    return Circuit(c.wires, tuple(gates), c.plus_wires, c.initial_labels, c.final_labels)
