from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from _support import (
    H,
    dft,
    j_matrix,
    j_qfe,
    naive_circuit_matrix,
    random_flow_circuit,
    random_unit_qfe,
)
from qformc.angles import Angle
from qformc.circuit import Circuit, Gate, expand_j_gates
from qformc.errors import FractionalEdgeError, InvalidFlowError, UnsupportedGateError
from qformc.flows import GFlow, find_fractional_edge_flow, find_gflow
from qformc.pattern import ZERO, Correct, Measure, MeasurementPattern, SignalForm
from qformc.qfe import QFE, Normalization, evaluate_dense, induced_geometry
from qformc.synthesis import (
    circuit_from_flow,
    circuit_to_qfe,
    decompose_about_edge,
    pattern_from_gflow,
    qft_qfe,
    standardize_pattern,
)
from qformc.verify import (
    DenseView,
    align,
    branches_agree,
    proportional_up_to_scalar,
    simulate_circuit_dense,
    simulate_pattern_branches,
)

TOL = 1e-9


def path_qfe(theta1=0, theta2=0) -> QFE:
    terms = [("1", "2", 1), ("2", "3", 1), ("1", "1", theta1), ("2", "2", theta2)]
    return QFE.build(["1", "2", "3"], ["1"], ["3"], terms, Normalization(2))


def fflow_qfe_from_circuit(rng: random.Random) -> QFE:
    return circuit_to_qfe(expand_j_gates(random_flow_circuit(rng)))


class TestPatternFromGflow:
    def test_j_gate(self):
        alpha = Fraction(1, 4)
        q = j_qfe(alpha)
        p = pattern_from_gflow(q, GFlow({"u": frozenset({"v"})}, {"u": 1, "v": 0}))
        assert p.entangle == (("u", "v"),)
        assert p.commands == (Measure("u", Angle(-alpha)), Correct("X", "v", SignalForm.of("u")))
        ok, worst, _ = branches_agree(simulate_pattern_branches(p))
        assert ok
        for r in simulate_pattern_branches(p):
            c = proportional_up_to_scalar(r.map, j_matrix(math.pi / 4))
            assert c is not None

    def test_identity_qfe(self):
        q = QFE.build(["a"], ["a"], ["a"])
        p = pattern_from_gflow(q, find_gflow(induced_geometry(q)))
        assert p.commands == () and p.entangle == ()

    def test_path_all_branches_identity(self):
        q = path_qfe()
        p = pattern_from_gflow(q, find_gflow(induced_geometry(q)))
        reports = simulate_pattern_branches(p)
        assert len(reports) == 4
        for r in reports:
            c = proportional_up_to_scalar(r.map, np.eye(2))
            assert c is not None and abs(abs(c) - 0.5) < TOL

    def test_rejects_fractional(self):
        q = qft_qfe(2)
        with pytest.raises(FractionalEdgeError):
            pattern_from_gflow(q, GFlow({}, {}))

    def test_rejects_invalid_gflow(self):
        q = path_qfe()
        bad = GFlow({"1": frozenset({"3"}), "2": frozenset({"3"})}, {"1": 2, "2": 1, "3": 0})
        with pytest.raises(InvalidFlowError):
            pattern_from_gflow(q, bad)

    def test_random_unitarity(self):
        rng = random.Random(21)
        done = 0
        while done < 30:
            q = random_unit_qfe(rng, rng.randint(2, 7))
            gf = find_gflow(induced_geometry(q))
            if gf is None:
                continue
            p = pattern_from_gflow(q, gf)
            reports = simulate_pattern_branches(p)
            ok, worst, failing = branches_agree(reports)
            assert ok, failing
            weights = {round(r.probability_weight, 9) for r in reports}
            assert len(weights) == 1
            assert proportional_up_to_scalar(reports[0].map, evaluate_dense(q)) is not None
            done += 1


class TestStandardize:
    def test_already_standard(self):
        q = j_qfe(Fraction(1, 3))
        p = pattern_from_gflow(q, find_gflow(induced_geometry(q)))
        assert p.is_standard()
        assert standardize_pattern(p) == p

    def test_path_example(self):
        q = path_qfe()
        p = standardize_pattern(pattern_from_gflow(q, find_gflow(induced_geometry(q))))
        assert p.is_standard()
        m2 = next(m for m in p.measurements if m.vertex == "2")
        # X_2^{s1} ahead of M_2 flips its angle sign, so s1 lands in the s-domain
        assert m2.s_domain == SignalForm.of("1") and m2.t_domain == ZERO
        x3, z3 = p.final_corrections["3"]
        assert x3 == SignalForm.of("2") and z3 == SignalForm.of("1")

    def test_single_measurement(self):
        cmds = (Measure("u", Angle(1, 2)), Correct("X", "v", SignalForm.of("u")))
        p = MeasurementPattern(("u", "v"), ("u",), ("v",), (("u", "v"),), cmds)
        assert standardize_pattern(p).commands == cmds

    def test_branch_maps_preserved_up_to_phase(self):
        rng = random.Random(22)
        done = 0
        while done < 30:
            q = random_unit_qfe(rng, rng.randint(2, 6))
            gf = find_gflow(induced_geometry(q))
            if gf is None:
                continue
            p = pattern_from_gflow(q, gf)
            s = standardize_pattern(p)
            assert s.is_standard()
            for a, b in zip(simulate_pattern_branches(p), simulate_pattern_branches(s)):
                assert a.branch == b.branch
                c = proportional_up_to_scalar(b.map, a.map)
                assert c is not None and abs(abs(c) - 1) < TOL
            done += 1


class TestCircuitFromFlow:
    def test_j_gate(self):
        q = j_qfe(Fraction(1, 4))
        c = circuit_from_flow(q, find_fractional_edge_flow(induced_geometry(q)))
        assert c.wires == 1 and c.gates == (Gate.j(0, Fraction(1, 4)),)

    def test_qft5_shape(self):
        q = qft_qfe(5)
        c = circuit_from_flow(q, find_fractional_edge_flow(induced_geometry(q)))
        assert c.count("J") == 5 and c.count("CZ") == 10 and c.count("Z", "H") == 0
        assert all(g.t == 0 for g in c.gates if g.kind == "J")

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_qft_dense(self, n):
        q = qft_qfe(n)
        c = circuit_from_flow(q, find_fractional_edge_flow(induced_geometry(q)))
        u = simulate_circuit_dense(c, output_labels=q.outputs)
        assert proportional_up_to_scalar(u, dft(n)) is not None

    def test_rejects_invalid_flow(self):
        from qformc.flows import Flow

        q = qft_qfe(2)
        bad = Flow({"x0": "y0", "x1": "y1"}, {"x0": 1, "x1": 1, "y0": 0, "y1": 0})
        with pytest.raises(InvalidFlowError):
            circuit_from_flow(q, bad)

    def test_random_flow_qfes(self):
        rng = random.Random(23)
        for _ in range(60):
            q = fflow_qfe_from_circuit(rng)
            fl = find_fractional_edge_flow(induced_geometry(q))
            assert fl is not None
            c = circuit_from_flow(q, fl)
            assert c.count("J") <= len(q.vertices) - len(q.outputs)
            u = simulate_circuit_dense(c, output_labels=q.outputs)
            assert proportional_up_to_scalar(u, evaluate_dense(q)) is not None

    def test_roundtrip_through_circuit_to_qfe(self):
        rng = random.Random(24)
        for _ in range(40):
            q = fflow_qfe_from_circuit(rng)
            c = circuit_from_flow(q, find_fractional_edge_flow(induced_geometry(q)))
            back = circuit_to_qfe(expand_j_gates(c))
            a = DenseView(evaluate_dense(q), q.outputs, q.inputs)
            b = DenseView(evaluate_dense(back), c.final_labels, tuple(c.initial_labels[w] for w in c.input_wires))
            assert proportional_up_to_scalar(a.matrix, align(a, b)) is not None


class TestDecompose:
    def check(self, q, edge):
        fl = find_fractional_edge_flow(induced_geometry(q))
        q1, q2, q3 = decompose_about_edge(q, fl, edge)
        # term-by-term additivity, exact
        total: dict = {}
        for part in (q1, q2, q3):
            for k, a in part.terms.items():
                total[k] = total.get(k, Angle()) + a
        assert {k: a for k, a in total.items() if a} == q.terms
        assert q1.norm * q2.norm * q3.norm == q.norm
        recomposed = evaluate_dense(q3) @ evaluate_dense(q2) @ evaluate_dense(q1)
        assert np.max(np.abs(recomposed - evaluate_dense(q))) < TOL
        n_frac = len(induced_geometry(q).fractional_edges())
        assert len(induced_geometry(q1).fractional_edges()) < n_frac
        assert len(induced_geometry(q3).fractional_edges()) < n_frac
        assert set(edge) <= set(q2.vertices)
        return q1, q2, q3

    def test_qft2_fractional_edge(self):
        q1, q2, q3 = self.check(qft_qfe(2), ("x0", "y0"))
        assert q2.terms == {frozenset({"x0", "y0"}): Angle(1, 2)}

    @pytest.mark.parametrize("n", [3, 4])
    def test_qft_every_fractional_edge(self, n):
        q = qft_qfe(n)
        for e in induced_geometry(q).fractional_edges():
            self.check(q, tuple(sorted(e)))

    def test_fractional_edge_between_outputs(self):
        # H on each wire, then CZ^{1/4} between the final segments
        q = QFE.build(
            ["a", "b", "c", "d"],
            ["a", "b"],
            ["c", "d"],
            [("a", "c", 1), ("b", "d", 1), ("c", "d", Fraction(1, 4))],
            Normalization(2),
        )
        q1, q2, q3 = self.check(q, ("c", "d"))
        assert set(q2.terms) == {frozenset({"c", "d"})}
        assert induced_geometry(q1).is_unit_weight() and induced_geometry(q3).is_unit_weight()

    def test_random(self):
        rng = random.Random(25)
        done = 0
        while done < 30:
            q = fflow_qfe_from_circuit(rng)
            frac = induced_geometry(q).fractional_edges()
            if not frac:
                continue
            self.check(q, tuple(sorted(rng.choice(frac))))
            done += 1

    def test_rejects_unit_edge(self):
        q = qft_qfe(2)
        fl = find_fractional_edge_flow(induced_geometry(q))
        with pytest.raises(FractionalEdgeError):
            decompose_about_edge(q, fl, ("x0", "y1"))


class TestCircuitToQfe:
    def test_single_h(self):
        q = circuit_to_qfe(Circuit(1, (Gate.h(0),)))
        assert q.vertices == ("x1", "x2")
        assert q.terms == {frozenset({"x1", "x2"}): Angle(1)}
        assert q.norm.sqrt2_power == 1
        assert np.allclose(evaluate_dense(q), H)

    def test_s_gate(self):
        q = circuit_to_qfe(Circuit(1, (Gate.z(0, Fraction(1, 2)),)))
        assert q.vertices == ("x1",) and q.angle("x1") == Angle(1, 2)
        assert np.allclose(evaluate_dense(q), np.diag([1, 1j]))

    def test_h_z_h(self):
        t = Fraction(1, 4)
        q = circuit_to_qfe(Circuit(1, (Gate.h(0), Gate.z(0, t), Gate.h(0))))
        assert len(q.vertices) == 3
        expected = H @ np.diag([1, np.exp(1j * math.pi / 4)]) @ H
        assert np.allclose(evaluate_dense(q), expected)

    def test_rejects_j(self):
        with pytest.raises(UnsupportedGateError):
            circuit_to_qfe(Circuit(1, (Gate.j(0, 0),)))

    def test_plus_wires(self):
        c = Circuit(2, (Gate.cz(0, 1), Gate.h(1)), frozenset({1}))
        q = circuit_to_qfe(c)
        assert q.norm.sqrt2_power == 2
        assert np.max(np.abs(evaluate_dense(q) - naive_circuit_matrix(c))) < 1e-12


class TestQft:
    def test_n1(self):
        q = qft_qfe(1)
        assert q.terms == {frozenset({"x0", "y0"}): Angle(1)}
        assert np.allclose(evaluate_dense(q), H)

    def test_n2_terms(self):
        q = qft_qfe(2)
        assert q.terms == {
            frozenset({"x0", "y0"}): Angle(1, 2),
            frozenset({"x0", "y1"}): Angle(1),
            frozenset({"x1", "y0"}): Angle(1),
        }

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_dense_is_dft(self, n):
        assert np.max(np.abs(evaluate_dense(qft_qfe(n)) - dft(n))) < TOL

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            qft_qfe(0)
