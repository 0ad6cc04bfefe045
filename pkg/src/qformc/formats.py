"""Strict JSON file formats for every artifact the pipeline exchanges.

Vertex labels are JSON strings; angles are stored as ``num/den``
coefficients of pi.  Basis indexing over inputs and outputs is big-endian
in the declared order, so the first listed vertex is the most significant
bit of a row or column index.

QFE::

    {"vertices": [str...], "inputs": [str...], "outputs": [str...],
     "terms": [{"u": str, "v": str, "num": int, "den": int}...],
     "norm": {"sqrt2_power": int, "phase_num": int, "phase_den": int}}

A square term has ``u == v``.

Geometry::

    {"vertices": [...], "inputs": [...], "outputs": [...],
     "edges": [{"u", "v", "num", "den"}...],
     "vertex_angles": [{"v", "num", "den"}...]}

Circuit::

    {"wires": int, "plus_wires": [int...],
     "gates": [{"kind": "H"|"J"|"Z"|"CZ", "wires": [int...], "num": int, "den": int}...],
     "input_labels": [str...], "output_labels": [str...]}

The two label lists are optional; they name the wires at the start and end
of the circuit so a circuit can be lined up against a QFE.

Pattern::

    {"qubits": [...], "inputs": [...], "outputs": [...],
     "entangle": [[u, v]...],
     "commands": [{"op": "M", "vertex": v, "num", "den", "s": [...], "t": [...]}
                  | {"op": "X"|"Z", "vertex": v, "domain": [...]}...],
     "output_rotations": [{"v", "num", "den"}...]}

Signal lists name measured qubits; an optional ``s_constant``,
``t_constant`` or ``constant`` (0 or 1) adds a fixed flip.

Tableau::

    {"n": int, "c": [[bit...]...], "h": [bit...]}

``c`` has 2n rows and 2n columns.  Column ``t`` (0-based) is the image of
the ``t``-th generator ``X_1..X_n, Z_1..Z_n``: rows ``0..n-1`` hold its X
part and rows ``n..2n-1`` its Z part, qubit 0 first.  ``h[t]`` is the sign
bit of that image.

Flow and gflow::

    {"kind": "flow", "f": {u: v}, "layers": {v: int}}
    {"kind": "gflow", "g": {u: [v...]}, "layers": {v: int}}

Unknown fields are rejected everywhere with :class:`FormatError`.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path

from qformc.angles import Angle
from qformc.circuit import GATE_ARITY, Circuit, Gate
from qformc.clifford import LeuvenTableau
from qformc.errors import FormatError
from qformc.flows import Flow, Geometry, GFlow
from qformc.pattern import Correct, Measure, MeasurementPattern, SignalForm
from qformc.qfe import QFE, Normalization


def _fields(obj, required: set, optional: set = frozenset(), where: str = "object") -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object")
    keys = set(obj)
    unknown = keys - required - optional
    if unknown:
        raise FormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - keys
    if missing:
        raise FormatError(f"{where}: missing field(s) {sorted(missing)}")


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{where}: expected an integer, got {x!r}")
    return x


def _bit(x, where: str) -> int:
    if _int(x, where) not in (0, 1):
        raise FormatError(f"{where}: expected 0 or 1, got {x!r}")
    return x


def _label(x, where: str) -> str:
    if not isinstance(x, str):
        raise FormatError(f"{where}: vertex labels must be strings, got {x!r}")
    return x


def _labels(xs, where: str) -> tuple:
    if not isinstance(xs, list):
        raise FormatError(f"{where}: expected a list of labels")
    return tuple(_label(x, where) for x in xs)


def _fraction(obj: dict, where: str) -> Fraction:
    num, den = _int(obj["num"], where), _int(obj["den"], where)
    if den <= 0:
        raise FormatError(f"{where}: denominator must be positive")
    return Fraction(num, den)


def _angle_fields(a: Angle) -> dict:
    return {"num": a.num, "den": a.den}


def _wrap(where: str, fn):
    """Turn constructor ``ValueError``s into :class:`FormatError`."""
    try:
        return fn()
    except FormatError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise FormatError(f"{where}: {exc}") from exc


# -- QFE -------------------------------------------------------------------


def qfe_to_json(q: QFE) -> dict:
    index = {v: i for i, v in enumerate(q.vertices)}
    terms = []
    for key, a in q.terms.items():
        u, v = sorted(key, key=index.__getitem__) if len(key) == 2 else (next(iter(key)),) * 2
        terms.append((index[u], index[v], {"u": str(u), "v": str(v), **_angle_fields(a)}))
    terms.sort(key=lambda t: t[:2])
    return {
        "vertices": [str(v) for v in q.vertices],
        "inputs": [str(v) for v in q.inputs],
        "outputs": [str(v) for v in q.outputs],
        "terms": [t[2] for t in terms],
        "norm": {
            "sqrt2_power": q.norm.sqrt2_power,
            "phase_num": q.norm.phase.num,
            "phase_den": q.norm.phase.den,
        },
    }


def qfe_from_json(obj) -> QFE:
    _fields(obj, {"vertices", "inputs", "outputs", "terms", "norm"}, where="qfe")
    vertices = _labels(obj["vertices"], "qfe.vertices")
    inputs = _labels(obj["inputs"], "qfe.inputs")
    outputs = _labels(obj["outputs"], "qfe.outputs")
    if not isinstance(obj["terms"], list):
        raise FormatError("qfe.terms: expected a list")
    terms = []
    for k, t in enumerate(obj["terms"]):
        where = f"qfe.terms[{k}]"
        _fields(t, {"u", "v", "num", "den"}, where=where)
        terms.append((_label(t["u"], where), _label(t["v"], where), _fraction(t, where)))
    norm = obj["norm"]
    _fields(norm, {"sqrt2_power", "phase_num", "phase_den"}, where="qfe.norm")
    den = _int(norm["phase_den"], "qfe.norm")
    if den <= 0:
        raise FormatError("qfe.norm: denominator must be positive")
    normalization = Normalization(
        _int(norm["sqrt2_power"], "qfe.norm"), Angle(Fraction(_int(norm["phase_num"], "qfe.norm"), den))
    )
    return _wrap("qfe", lambda: QFE.build(vertices, inputs, outputs, terms, normalization))


# -- geometry --------------------------------------------------------------


def geometry_to_json(g: Geometry) -> dict:
    index = {v: i for i, v in enumerate(g.vertices)}
    edges = []
    for e, w in g.edges.items():
        u, v = sorted(e, key=index.__getitem__)
        edges.append((index[u], index[v], {"u": str(u), "v": str(v), **_angle_fields(Angle(w))}))
    edges.sort(key=lambda t: t[:2])
    angles = [
        {"v": str(v), **_angle_fields(g.vertex_angles[v])} for v in g.vertices if v in g.vertex_angles
    ]
    return {
        "vertices": [str(v) for v in g.vertices],
        "inputs": [str(v) for v in g.inputs],
        "outputs": [str(v) for v in g.outputs],
        "edges": [e[2] for e in edges],
        "vertex_angles": angles,
    }


def geometry_from_json(obj) -> Geometry:
    _fields(obj, {"vertices", "inputs", "outputs", "edges"}, {"vertex_angles"}, where="geometry")
    vertices = _labels(obj["vertices"], "geometry.vertices")
    inputs = _labels(obj["inputs"], "geometry.inputs")
    outputs = _labels(obj["outputs"], "geometry.outputs")
    edges = []
    for k, e in enumerate(obj["edges"]):
        where = f"geometry.edges[{k}]"
        _fields(e, {"u", "v", "num", "den"}, where=where)
        edges.append((_label(e["u"], where), _label(e["v"], where), _fraction(e, where)))
    angles = {}
    for k, a in enumerate(obj.get("vertex_angles", [])):
        where = f"geometry.vertex_angles[{k}]"
        _fields(a, {"v", "num", "den"}, where=where)
        angles[_label(a["v"], where)] = Angle(_fraction(a, where))
    return _wrap("geometry", lambda: Geometry.from_edges(vertices, inputs, outputs, edges, angles))


# -- circuit ---------------------------------------------------------------


def circuit_to_json(c: Circuit) -> dict:
    out = {
        "wires": c.wires,
        "plus_wires": sorted(c.plus_wires),
        "gates": [
            {"kind": g.kind, "wires": list(g.wires), **_angle_fields(Angle(g.t))} for g in c.gates
        ],
    }
    if c.initial_labels is not None:
        out["input_labels"] = [str(v) for v in c.initial_labels]
    if c.final_labels is not None:
        out["output_labels"] = [str(v) for v in c.final_labels]
    return out


def circuit_from_json(obj) -> Circuit:
    _fields(obj, {"wires", "plus_wires", "gates"}, {"input_labels", "output_labels"}, where="circuit")
    wires = _int(obj["wires"], "circuit.wires")
    if wires < 0:
        raise FormatError("circuit.wires: must be nonnegative")
    if not isinstance(obj["plus_wires"], list):
        raise FormatError("circuit.plus_wires: expected a list")
    plus = [_int(w, "circuit.plus_wires") for w in obj["plus_wires"]]
    gates = []
    for k, g in enumerate(obj["gates"]):
        where = f"circuit.gates[{k}]"
        _fields(g, {"kind", "wires"}, {"num", "den"}, where=where)
        if g["kind"] not in GATE_ARITY:
            raise FormatError(f"{where}: unknown gate kind {g['kind']!r}")
        ws = tuple(_int(w, where) for w in g["wires"])
        if ("num" in g) != ("den" in g):
            raise FormatError(f"{where}: num and den go together")
        if "num" in g:
            t = _fraction(g, where)
        else:
            t = Fraction(1) if g["kind"] == "CZ" else Fraction(0)
        gates.append(_wrap(where, lambda g=g, ws=ws, t=t: Gate(g["kind"], ws, t)))
    labels = {
        key: _labels(obj[key], f"circuit.{key}") if key in obj else None
        for key in ("input_labels", "output_labels")
    }
    return _wrap(
        "circuit",
        lambda: Circuit(wires, tuple(gates), frozenset(plus), labels["input_labels"], labels["output_labels"]),
    )


# -- pattern ---------------------------------------------------------------


def _signal_out(form: SignalForm, order: Mapping) -> list[str]:
    return [str(s) for s in sorted(form.signals, key=lambda s: order.get(s, len(order)))]


def pattern_to_json(p: MeasurementPattern) -> dict:
    order = {v: i for i, v in enumerate(p.qubits)}
    cmds = []
    for c in p.commands:
        if isinstance(c, Measure):
            d = {"op": "M", "vertex": str(c.vertex), **_angle_fields(c.angle)}
            d["s"] = _signal_out(c.s_domain, order)
            d["t"] = _signal_out(c.t_domain, order)
            if c.s_domain.constant:
                d["s_constant"] = 1
            if c.t_domain.constant:
                d["t_constant"] = 1
        else:
            d = {"op": c.kind, "vertex": str(c.vertex), "domain": _signal_out(c.domain, order)}
            if c.domain.constant:
                d["constant"] = 1
        cmds.append(d)
    return {
        "qubits": [str(v) for v in p.qubits],
        "inputs": [str(v) for v in p.inputs],
        "outputs": [str(v) for v in p.outputs],
        "entangle": [[str(u), str(v)] for u, v in p.entangle],
        "commands": cmds,
        "output_rotations": [
            {"v": str(w), **_angle_fields(a)} for w, a in p.output_rotations.items()
        ],
    }


def _signal_in(obj: dict, key: str, const_key: str, where: str) -> SignalForm:
    signals = _labels(obj[key], where)
    const = _bit(obj.get(const_key, 0), where)
    form = SignalForm.of(*signals)
    return form + SignalForm(const) if const else form


def pattern_from_json(obj) -> MeasurementPattern:
    _fields(
        obj, {"qubits", "inputs", "outputs", "entangle", "commands"}, {"output_rotations"}, where="pattern"
    )
    qubits = _labels(obj["qubits"], "pattern.qubits")
    inputs = _labels(obj["inputs"], "pattern.inputs")
    outputs = _labels(obj["outputs"], "pattern.outputs")
    entangle = []
    for k, pair in enumerate(obj["entangle"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"pattern.entangle[{k}]: expected a [u, v] pair")
        entangle.append(_labels(pair, f"pattern.entangle[{k}]"))
    cmds = []
    for k, c in enumerate(obj["commands"]):
        where = f"pattern.commands[{k}]"
        if not isinstance(c, dict) or c.get("op") not in ("M", "X", "Z"):
            raise FormatError(f"{where}: op must be one of M, X, Z")
        if c["op"] == "M":
            _fields(c, {"op", "vertex", "num", "den", "s", "t"}, {"s_constant", "t_constant"}, where=where)
            cmds.append(
                Measure(
                    _label(c["vertex"], where),
                    Angle(_fraction(c, where)),
                    _signal_in(c, "s", "s_constant", where),
                    _signal_in(c, "t", "t_constant", where),
                )
            )
        else:
            _fields(c, {"op", "vertex", "domain"}, {"constant"}, where=where)
            cmds.append(Correct(c["op"], _label(c["vertex"], where), _signal_in(c, "domain", "constant", where)))
    rotations = {}
    for k, r in enumerate(obj.get("output_rotations", [])):
        where = f"pattern.output_rotations[{k}]"
        _fields(r, {"v", "num", "den"}, where=where)
        rotations[_label(r["v"], where)] = Angle(_fraction(r, where))
    return _wrap(
        "pattern",
        lambda: MeasurementPattern(qubits, inputs, outputs, tuple(entangle), tuple(cmds), rotations),
    )


# -- tableau ---------------------------------------------------------------


def tableau_to_json(tab: LeuvenTableau) -> dict:
    return {"n": tab.n, "c": tab.c.tolist(), "h": tab.h.tolist()}


def tableau_from_json(obj) -> LeuvenTableau:
    _fields(obj, {"n", "c", "h"}, where="tableau")
    n = _int(obj["n"], "tableau.n")
    if n < 1:
        raise FormatError("tableau.n: must be positive")
    c, h = obj["c"], obj["h"]
    if not isinstance(c, list) or len(c) != 2 * n:
        raise FormatError(f"tableau.c: expected {2 * n} rows")
    for k, row in enumerate(c):
        if not isinstance(row, list) or len(row) != 2 * n:
            raise FormatError(f"tableau.c[{k}]: expected {2 * n} bits")
        for b in row:
            _bit(b, f"tableau.c[{k}]")
    if not isinstance(h, list) or len(h) != 2 * n:
        raise FormatError(f"tableau.h: expected {2 * n} bits")
    for b in h:
        _bit(b, "tableau.h")
    return _wrap("tableau", lambda: LeuvenTableau.from_lists(c, h))


# -- flows -----------------------------------------------------------------


def flow_to_json(fl: Flow | GFlow) -> dict:
    layers = {str(v): k for v, k in fl.layers.items()}
    if isinstance(fl, Flow):
        return {"kind": "flow", "f": {str(u): str(v) for u, v in fl.f.items()}, "layers": layers}
    g = {str(u): sorted(map(str, s)) for u, s in fl.g.items()}
    return {"kind": "gflow", "g": g, "layers": layers}


def flow_from_json(obj) -> Flow | GFlow:
    if not isinstance(obj, dict) or obj.get("kind") not in ("flow", "gflow"):
        raise FormatError("flow: kind must be 'flow' or 'gflow'")
    key = "f" if obj["kind"] == "flow" else "g"
    _fields(obj, {"kind", key, "layers"}, where="flow")
    layers = {_label(v, "flow.layers"): _int(k, "flow.layers") for v, k in obj["layers"].items()}
    if key == "f":
        return Flow({_label(u, "flow.f"): _label(v, "flow.f") for u, v in obj["f"].items()}, layers)
    g = {_label(u, "flow.g"): frozenset(_labels(s, "flow.g")) for u, s in obj["g"].items()}
    return GFlow(g, layers)


# -- generic ---------------------------------------------------------------

KINDS = ("qfe", "geometry", "circuit", "pattern", "tableau", "flow")

_LOADERS = {
    "qfe": qfe_from_json,
    "geometry": geometry_from_json,
    "circuit": circuit_from_json,
    "pattern": pattern_from_json,
    "tableau": tableau_from_json,
    "flow": flow_from_json,
}

_DUMPERS = {
    QFE: qfe_to_json,
    Geometry: geometry_to_json,
    Circuit: circuit_to_json,
    MeasurementPattern: pattern_to_json,
    LeuvenTableau: tableau_to_json,
    Flow: flow_to_json,
    GFlow: flow_to_json,
}


def detect_kind(obj) -> str:
    """Guess the artifact kind of a parsed JSON document from its fields."""
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object at top level")
    if "terms" in obj:
        return "qfe"
    if "edges" in obj:
        return "geometry"
    if "gates" in obj:
        return "circuit"
    if "commands" in obj:
        return "pattern"
    if "c" in obj and "h" in obj:
        return "tableau"
    if "kind" in obj:
        return "flow"
    raise FormatError("cannot tell which artifact this file holds")


def from_json(obj, kind: str | None = None):
    kind = kind or detect_kind(obj)
    if kind not in _LOADERS:
        raise FormatError(f"unknown artifact kind {kind!r}")
    return _LOADERS[kind](obj)


def to_json(artifact) -> dict:
    for cls, dump in _DUMPERS.items():
        if isinstance(artifact, cls):
            return dump(artifact)
    raise TypeError(f"no file format for {type(artifact).__name__}")


def loads(text: str, kind: str | None = None):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_json(obj, kind)


def dumps(artifact) -> str:
    return json.dumps(to_json(artifact), indent=2)


def load(path: str | Path, kind: str | None = None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return loads(text, kind)


def dump(artifact, path: str | Path) -> None:
    Path(path).write_text(dumps(artifact) + "\n")
