"""Clifford operations: tableaux, their quadratic form expansions and patterns.

Tableau convention
------------------
A tableau ``(C, h)`` for an ``n``-qubit Clifford ``U`` has one column per
generator ``P_t`` (``P_t = X_t`` for ``t < n``, ``P_{n+t} = Z_t``).  Column
``t`` lists the X part of ``U P_t U^dag`` in rows ``0..n-1`` and the Z part in
rows ``n..2n-1``::

    U P_t U^dag = i^{d_t} (-1)^{h_t} prod_j Z_j^{C[n+j, t]} X_j^{C[j, t]}

with ``d_t`` the parity of ``sum_j C[j, t] C[n+j, t]``.  Qubit 0 is the most
significant bit of a basis index.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from qformc.angles import Angle
from qformc.circuit import Circuit, Gate
from qformc.errors import InvalidTableauError, SingularMatrixError, UnsupportedGateError
from qformc.gf2 import (
    BitMatrix,
    BitVector,
    d_vec,
    diag_vec,
    invert,
    lower_strict,
    rank_normal_decompose,
)
from qformc.pattern import SignalForm, ZERO, Measure, MeasurementPattern, standard_commands
from qformc.qfe import QFE, Normalization

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def pauli_matrix(x: Sequence[int], z: Sequence[int]) -> np.ndarray:
    """Dense ``prod_j Z_j^{z_j} X_j^{x_j}`` (no phase), qubit 0 most significant."""
    out = np.ones((1, 1), dtype=complex)
    for xj, zj in zip(x, z):
        f = (_Z if zj else _I2) @ (_X if xj else _I2)
        out = np.kron(out, f)
    return out


@dataclass(frozen=True)
class PauliOperator:
    """``i**phase_quarter * prod_j Z_j^{z_j} X_j^{x_j}``."""

    phase_quarter: int
    x_bits: BitVector
    z_bits: BitVector

    def __post_init__(self):
        if len(self.x_bits) != len(self.z_bits):
            raise ValueError("x and z parts must have equal length")
        object.__setattr__(self, "phase_quarter", self.phase_quarter % 4)

    @property
    def n(self) -> int:
        return len(self.x_bits)

    def matrix(self) -> np.ndarray:
        return (1j) ** self.phase_quarter * pauli_matrix(self.x_bits.tolist(), self.z_bits.tolist())


@dataclass(frozen=True)
class LeuvenTableau:
    c: BitMatrix
    h: BitVector

    def __post_init__(self):
        if not self.c.is_square() or self.c.rows % 2:
            raise InvalidTableauError(f"tableau matrix must be 2n x 2n, got {self.c.shape}")
        if len(self.h) != self.c.rows:
            raise InvalidTableauError("phase vector length must equal 2n")

    @property
    def n(self) -> int:
        return self.c.rows // 2

    @classmethod
    def identity(cls, n: int) -> LeuvenTableau:
        return cls(BitMatrix.identity(2 * n), BitVector.zeros(2 * n))

    @classmethod
    def from_lists(cls, c: Sequence[Sequence[int]], h: Sequence[int]) -> LeuvenTableau:
        return cls(BitMatrix.from_rows(c, cols=len(c)), BitVector.from_list(h))

    def image(self, t: int) -> PauliOperator:
        """Image of ``P_t`` (0-based) under conjugation."""
        n = self.n
        col = self.c.column(t)
        x, z = col.slice(0, n), col.slice(n, 2 * n)
        d = x.dot(z)
        return PauliOperator(d + 2 * self.h[t], x, z)


def _symplectic_form(n: int) -> BitMatrix:
    zero, ident = BitMatrix.zeros(n), BitMatrix.identity(n)
    return BitMatrix.block([[zero, ident], [ident, zero]])


def validate_tableau(tab: LeuvenTableau) -> list[str]:
    """Violations of invertibility and symplecticity; empty means valid."""
    problems = []
    n = tab.n
    if tab.c.rank() < 2 * n:
        problems.append("tableau matrix is singular")
    lam = _symplectic_form(n)
    if tab.c.T @ lam @ tab.c != lam:
        problems.append("tableau not symplectic")
    return problems


def _require_valid(tab: LeuvenTableau) -> None:
    problems = validate_tableau(tab)
    if problems:
        raise InvalidTableauError("; ".join(problems))


# -- tableaux from circuits ---------------------------------------------------


def tableau_from_clifford_circuit(c: Circuit) -> LeuvenTableau:
    """Tableau of a circuit over ``H``, ``S = Z^{1/2}`` (any ``Z^{k/2}``) and ``CZ``.

    Each column is conjugated gate by gate.  Phases are tracked as a power
    ``k`` of ``i`` in front of ``Z^z X^x``, then split as ``k = d + 2h``.

    Raises
    ------
    UnsupportedGateError
        For gates outside the Clifford subset, or ``|+>``-initialized wires.
    """
    if c.plus_wires:
        raise UnsupportedGateError("Clifford circuits must not have |+> wires")
    n = c.wires
    full = (1 << (2 * n)) - 1
    rows = list(BitMatrix.identity(2 * n).data)
    # bit-planes of the phase exponent k (mod 4), one bit per column
    k_lo, k_hi = 0, 0

    def add_k(mask: int, amount: int) -> None:
        nonlocal k_lo, k_hi
        for _ in range(amount % 4):
            carry = k_lo & mask
            k_lo ^= mask
            k_hi ^= carry

    for g in c.gates:
        if g.kind == "H":
            (j,) = g.wires
            add_k(rows[j] & rows[n + j], 2)
            rows[j], rows[n + j] = rows[n + j], rows[j]
        elif g.kind == "Z":
            if g.t.denominator > 2:
                raise UnsupportedGateError(f"Z^{g.t} is not Clifford")
            (j,) = g.wires
            for _ in range(int(g.t * 2) % 4):
                rows[n + j] ^= rows[j]
                add_k(rows[j], 3)
        elif g.kind == "CZ":
            if g.t != 1:
                raise UnsupportedGateError(f"CZ^{g.t} is not Clifford")
            a, b = g.wires
            add_k(rows[a] & rows[b], 2)
            rows[n + a] ^= rows[b]
            rows[n + b] ^= rows[a]
        else:
            raise UnsupportedGateError(f"{g.kind} is not in the Clifford gate subset")
    cmat = BitMatrix(2 * n, 2 * n, rows)
    d = d_vec(cmat).bits
    # Hermitian images have k = d (mod 2), so h = (k - d) / 2 = k_hi (mod 2)
    if (k_lo ^ d) & full:
        raise AssertionError("non-Hermitian image while tracking tableau phases")
    return LeuvenTableau(cmat, BitVector(2 * n, k_hi))


def random_clifford_circuit(n: int, seed: int, length: int | None = None) -> Circuit:
    """Random word over ``{H, S, CZ}`` of length ``4 n**2 + 4`` by default."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    length = 4 * n * n + 4 if length is None else length
    gates = []
    for _ in range(length):
        kind = rng.choice(("H", "S", "CZ") if n > 1 else ("H", "S"))
        if kind == "H":
            gates.append(Gate.h(rng.randrange(n)))
        elif kind == "S":
            gates.append(Gate.z(rng.randrange(n), "1/2"))
        else:
            a, b = rng.sample(range(n), 2)
            gates.append(Gate.cz(a, b))
    return Circuit(n, tuple(gates))


def random_tableau(n: int, seed: int) -> LeuvenTableau:
    """Tableau of a seeded random Clifford word; deterministic in ``seed``."""
    return tableau_from_clifford_circuit(random_clifford_circuit(n, seed))




# -- tableau composition --------------------------------------------------------


def _columns(tab: LeuvenTableau) -> list[tuple[int, int, int]]:
    """Per generator: ``(k, x, z)`` with image ``i^k Z^z X^x``; ``x``, ``z`` packed."""
    n = tab.n
    mask = (1 << n) - 1
    out = []
    for t, col in enumerate(tab.c.T.data):
        x, z = col & mask, col >> n
        out.append(((bin(x & z).count("1") & 1) + 2 * tab.h[t], x, z))
    return out


def _from_columns(n: int, cols: Sequence[tuple[int, int, int]]) -> LeuvenTableau:
    h = 0
    for t, (k, x, z) in enumerate(cols):
        d = bin(x & z).count("1") & 1
        if (k - d) % 2:
            raise AssertionError("non-Hermitian Pauli image")
        h |= (((k - d) % 4) // 2) << t
    c = BitMatrix(2 * n, 2 * n, [x | (z << n) for _, x, z in cols]).T
    return LeuvenTableau(c, BitVector(2 * n, h))


def compose_tableaux(second: LeuvenTableau, first: LeuvenTableau) -> LeuvenTableau:
    """Tableau of ``U_second @ U_first``.

    Each image ``i^k Z^z X^x`` of ``first`` is pushed through ``second`` one
    single-qubit factor at a time, using
    ``(i^a Z^z X^x)(i^b Z^w X^v) = i^(a + b + 2 x.w) Z^(z+w) X^(x+v)``.
    """
    n = first.n
    if second.n != n:
        raise ValueError("tableaux act on different qubit counts")
    img = _columns(second)
    cols = []
    for k, x, z in _columns(first):
        # the scalar i^k passes through conjugation; map Z^z X^x factor by factor
        factors = [img[n + j] for j in range(n) if (z >> j) & 1]
        factors += [img[j] for j in range(n) if (x >> j) & 1]
        ak, ax, az = k, 0, 0
        for bk, bx, bz in factors:
            ak += bk + 2 * (bin(ax & bz).count("1") & 1)
            ax ^= bx
            az ^= bz
        cols.append((ak % 4, ax, az))
    return _from_columns(n, cols)


def _permutation_tableau(m: BitMatrix) -> LeuvenTableau:
    """Tableau of ``|y> -> |m y>``: ``X^a -> X^{m a}``, ``Z^b -> Z^{m^-T b}``."""
    n = m.rows
    return LeuvenTableau(_blockdiag(m, invert(m).T), BitVector.zeros(2 * n))


def _diagonal_tableau(m: BitMatrix) -> LeuvenTableau:
    """Tableau of ``sum_x i^(-x^T m x) |x><x|`` for symmetric ``m``: ``X_j -> i^{m_jj} Z^{m e_j} X_j``."""
    n = m.rows
    ident = BitMatrix.identity(n)
    return LeuvenTableau(BitMatrix.block([[ident, BitMatrix.zeros(n)], [m, ident]]), BitVector.zeros(2 * n))


def _hadamard_tableau(n: int, wires: range) -> LeuvenTableau:
    rows = list(BitMatrix.identity(2 * n).data)
    for j in wires:
        rows[j], rows[n + j] = rows[n + j], rows[j]
    return LeuvenTableau(BitMatrix(2 * n, 2 * n, rows), BitVector.zeros(2 * n))


# -- the matrix formula ---------------------------------------------------------


@dataclass(frozen=True)
class CliffordData:
    """Intermediate quantities of the Clifford matrix formula.

    The formula reads the tableau with the Z half first, so the reduction is
    applied to ``c_zx = Lam C Lam`` (X and Z halves of rows and columns
    exchanged).  ``c_reduced`` is ``c_zx`` after the basis changes ``R1`` and
    ``R2``.  ``t`` and ``h_bc`` are the exact phase vectors; ``t_closed_form``
    and ``h_bc_closed_form`` are the printed closed-form expressions, kept for
    comparison (the first always agrees with ``t``, the second does not).
    """

    n: int
    r: int
    r1: BitMatrix
    r2: BitMatrix
    c_reduced: BitMatrix
    m_br: BitMatrix
    m_bc: BitMatrix
    d_br: BitVector
    d_bc: BitVector
    l_br: BitMatrix
    l_bc: BitMatrix
    t: BitVector
    h_bc: BitVector
    t_closed_form: BitVector
    h_bc_closed_form: BitVector


def _blockdiag(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix.block([[a, BitMatrix.zeros(a.rows, b.cols)], [BitMatrix.zeros(b.rows, a.cols), b]])


def _l_and_d(m: BitMatrix) -> tuple[BitVector, BitMatrix]:
    d = diag_vec(m)
    return d, lower_strict(m + BitMatrix.outer(d, d))


def _swap_halves(m: BitMatrix) -> BitMatrix:
    n = m.rows // 2
    lam = _symplectic_form(n)
    return lam @ m @ lam


def clifford_data(tab: LeuvenTableau) -> CliffordData:
    """Reduce the tableau and derive every quantity the phase polynomial needs.

    Raises
    ------
    InvalidTableauError
        If the tableau is singular or not symplectic.
    """
    _require_valid(tab)
    n = tab.n
    c = _swap_halves(tab.c)
    e, g = c.submatrix(0, n, 0, n), c.submatrix(n, 2 * n, 0, n)
    r1t, r2t, r = rank_normal_decompose(g)
    k = n - r
    et = r1t.T @ e @ r2t
    try:
        e11_inv = invert(et.submatrix(0, k, 0, k))
    except SingularMatrixError as exc:  # excluded by symplecticity
        raise InvalidTableauError("reduced E block is singular") from exc
    r1 = r1t
    r2 = _blockdiag(e11_inv, BitMatrix.identity(r)).T @ r2t.T
    r1_inv, r2_inv = invert(r1), invert(r2)
    ct = _blockdiag(r1.T, r1_inv) @ c @ _blockdiag(r2.T, r2_inv)

    e12, e22 = ct.submatrix(0, k, k, n), ct.submatrix(k, n, k, n)
    f11 = ct.submatrix(0, k, n, n + k)
    h21, h22 = ct.submatrix(n + k, 2 * n, n, n + k), ct.submatrix(n + k, 2 * n, n + k, 2 * n)
    m_br = BitMatrix.block([[f11 + e12 @ h21, e12], [e12.T, e22]])
    m_bc = BitMatrix.block([[BitMatrix.zeros(k), h21.T], [h21, h22]])
    d_br, l_br = _l_and_d(m_br)
    d_bc, l_bc = _l_and_d(m_bc)

    # Phase vector of the operator with t = 0 and h_bc = 0, by composing the
    # tableaux of its factors: R2 basis change, diagonal phase, Hadamards on
    # the last r qubits, diagonal phase, R1 basis change.
    base = _permutation_tableau(r2)
    for factor in (
        _diagonal_tableau(m_bc),
        _hadamard_tableau(n, range(k, n)),
        _diagonal_tableau(m_br),
        _permutation_tableau(r1),
    ):
        base = compose_tableaux(factor, base)
    if base.c != tab.c:
        raise AssertionError("reduced form does not reproduce the tableau matrix")
    # Right-multiplying by X^t Z^b flips the signs of the generators that
    # anticommute with it; t and b are read off the required flips.
    flips = tab.h + base.h
    t = flips.slice(n, 2 * n)
    h_bc = r2_inv.T @ flips.slice(0, n)

    pi_r = BitMatrix.diagonal(BitVector(n, ((1 << r) - 1) << k))
    pi_perp = BitMatrix.identity(n) + pi_r
    a = r2_inv @ pi_r
    h_zx = tab.h.slice(n, 2 * n).concat(tab.h.slice(0, n))
    t_cf = h_zx.slice(0, n) + diag_vec(a @ l_br @ a.T)
    inner = l_bc + pi_r @ m_bc + (pi_perp + pi_r @ m_bc) @ l_br @ (pi_perp + m_bc @ pi_r)
    h_bc_cf = r2_inv.T @ h_zx.slice(n, 2 * n) + r2_inv.T @ diag_vec(r2.T @ inner @ r2)
    return CliffordData(n, r, r1, r2, ct, m_br, m_bc, d_br, d_bc, l_br, l_bc, t, h_bc, t_cf, h_bc_cf)


def _index(bits: BitVector) -> int:
    out = 0
    for b in bits.tolist():
        out = (out << 1) | b
    return out


def clifford_matrix_formula(data: CliffordData, max_qubits: int = 10) -> np.ndarray:
    """Dense ``U`` by direct summation of the matrix formula over ``x_b, x_c, x_r``.

    The phase is ``(-1)^(x_br L_br x_br + x_r.x_c + x_bc L_bc x_bc + h_bc.x_bc)
    * (-i)^(d_br.x_br + d_bc.x_bc)`` with the exponent of ``-i`` taken mod 2.
    Independent of the quadratic form construction; used as its cross-check.
    """
    n, r = data.n, data.r
    if n > max_qubits:
        raise ValueError(f"{n} qubits exceeds the direct evaluation cap of {max_qubits}")
    k = n - r
    r2_inv = invert(data.r2)
    u = np.zeros((1 << n, 1 << n), dtype=complex)
    for xb, xc, xr in itertools.product(range(1 << k), range(1 << r), range(1 << r)):
        x_br = BitVector(n, xb | (xr << k))
        x_bc = BitVector(n, xb | (xc << k))
        sign = x_br.dot(data.l_br @ x_br) + BitVector(r, xr).dot(BitVector(r, xc))
        sign += x_bc.dot(data.l_bc @ x_bc) + data.h_bc.dot(x_bc)
        quarter = 2 * sign - data.d_br.dot(x_br) - data.d_bc.dot(x_bc)
        row = _index(data.r1 @ x_br)
        col = _index(r2_inv @ x_bc + data.t)
        u[row, col] += (1j) ** (quarter % 4)
    return u / 2 ** (r / 2)


class _Z4Form:
    """Phase polynomial ``const + sum lin_i x_i + 2 sum_{i<j} q_ij x_i x_j`` (mod 4).

    Affine GF(2) functions of the variables are passed as ``(A, c)`` with a
    ``BitMatrix`` ``A`` (one row per function) and a ``BitVector`` ``c``.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.const = 0
        self.lin = [0] * nvars
        self.quad = BitMatrix.zeros(nvars)

    def add_bilinear_pi(self, left: tuple, k: BitMatrix, right: tuple) -> None:
        """Add ``2 (A_l X + c_l)^T K (A_r X + c_r)`` (a ``pi`` coefficient)."""
        (al, cl), (ar, cr) = left, right
        self.quad = self.quad + al.T @ k @ ar
        lin = al.T @ (k @ cr) + ar.T @ (k.T @ cl)
        self.add_linear_pi((BitMatrix(1, self.nvars, [lin.bits]), BitVector(1, cl.dot(k @ cr))))

    def add_linear_pi(self, f: tuple) -> None:
        """Add ``2 f`` for a single affine function ``f``."""
        a, c = f
        bits = a.data[0]
        for i in range(self.nvars):
            if (bits >> i) & 1:
                self.lin[i] += 2
        self.const += 2 * c[0]

    def add_parity(self, coeff: int, f: tuple) -> None:
        """Add ``coeff * (c + sum_{i in S} x_i mod 2)`` with the parity read as 0/1.

        Uses ``parity = sum x_i - 2 sum_{i<j} x_i x_j (mod 4)``.
        """
        a, c = f
        bits, c0 = a.data[0], c[0]
        scale = coeff * (1 - 2 * c0)
        self.const += coeff * c0
        members = [i for i in range(self.nvars) if (bits >> i) & 1]
        for i in members:
            self.lin[i] += scale
        if scale % 2:
            rows = list(self.quad.data)
            for p, i in enumerate(members):
                for j in members[p + 1 :]:
                    rows[i] ^= 1 << j
            self.quad = BitMatrix(self.nvars, self.nvars, rows)

    def finish(self) -> tuple[int, list[int], dict]:
        """``(const, square coefficients, {(i, j): 1 for i < j})`` with diagonals folded in."""
        lin = list(self.lin)
        q = self.quad
        cross = {}
        for i in range(self.nvars):
            if q[i, i]:
                lin[i] += 2
            for j in range(i + 1, self.nvars):
                if q[i, j] ^ q[j, i]:
                    cross[(i, j)] = 1
        return self.const % 4, [v % 4 for v in lin], cross


@dataclass(frozen=True)
class CliffordExpansion:
    """Quadratic form expansion of a Clifford operation.

    Vertices are ``b*`` and ``c*`` (inputs, qubit order), ``a*`` (auxiliary),
    then ``bp*`` and ``r*`` (outputs, qubit order).
    """

    qfe: QFE
    r: int
    r1: BitMatrix
    r2: BitMatrix
    t: BitVector
    data: CliffordData = field(repr=False, compare=False, default=None)

    @property
    def auxiliary(self) -> tuple:
        return tuple(v for v in self.qfe.vertices if v not in set(self.qfe.inputs) | set(self.qfe.outputs))


def clifford_to_qfe(tab: LeuvenTableau) -> CliffordExpansion:
    """Quadratic form expansion with disjoint inputs and outputs for a Clifford.

    The ``n - r`` shared ``b`` indices of the matrix formula are split into
    input copies, output copies ``bp`` and auxiliary vertices ``a`` that
    enforce equality, then the variables are changed to
    ``y_I = R2 (x_I + t)`` and ``y_O = R1^-1 x_O``.  The result satisfies
    ``evaluate_dense(exp.qfe) == U`` with ``C = 2^n / sqrt(2^r)`` up to the
    constant phase folded into the normalization.

    Raises
    ------
    InvalidTableauError
        If the tableau is singular or not symplectic.
    """
    data = clifford_data(tab)
    n, r = data.n, data.r
    k = n - r
    names = (
        [f"b{j}" for j in range(k)]
        + [f"c{j}" for j in range(r)]
        + [f"a{j}" for j in range(k)]
        + [f"bp{j}" for j in range(k)]
        + [f"r{j}" for j in range(r)]
    )
    nv = len(names)

    def rows_of(block: BitMatrix, offset: int) -> BitMatrix:
        return BitMatrix(block.rows, nv, [row << offset for row in block.data])

    y_in = (rows_of(data.r2, 0), data.r2 @ data.t)
    y_out = (rows_of(invert(data.r1), n + k), BitVector.zeros(n))
    x_aux = (BitMatrix(n, nv, [(1 << (n + j)) if j < k else 0 for j in range(n)]), BitVector.zeros(n))
    pi_r = BitMatrix.diagonal(BitVector(n, ((1 << r) - 1) << k))
    pi_k = BitMatrix.diagonal(BitVector(n, (1 << k) - 1))

    form = _Z4Form(nv)
    form.add_bilinear_pi(y_out, data.l_br, y_out)
    form.add_bilinear_pi(y_out, pi_r, y_in)
    form.add_bilinear_pi(y_in, data.l_bc, y_in)
    h_row = BitMatrix(1, n, [data.h_bc.bits])
    form.add_linear_pi((h_row @ y_in[0], BitVector(1, data.h_bc.dot(y_in[1]))))
    form.add_bilinear_pi(y_in, pi_k, x_aux)
    form.add_bilinear_pi(y_out, pi_k, x_aux)
    for d, (a, c) in ((data.d_br, y_out), (data.d_bc, y_in)):
        d_row = BitMatrix(1, n, [d.bits])
        form.add_parity(3, (d_row @ a, BitVector(1, d.dot(c))))
    const, lin, cross = form.finish()

    terms = [(names[i], names[i], Angle(q, 2)) for i, q in enumerate(lin) if q]
    terms += [(names[i], names[j], Angle(1)) for (i, j) in cross]
    norm = Normalization(2 * n - r, Angle(-const, 2))
    q = QFE.build(names, names[:n], names[n + k :], terms, norm)
    return CliffordExpansion(q, r, data.r1, data.r2, data.t, data)


# -- correction interpolation -----------------------------------------------------


def interpolate_corrections(exp: CliffordExpansion) -> MeasurementPattern:
    """Complete measurement pattern for a Clifford expansion, without adaptation.

    Simulates the stabilizer code ``K(v) = X_v prod_{w ~ v} Z_w`` (``v`` not an
    input) through the measurements, auxiliary vertices first, then the
    ``b`` and ``c`` inputs.  For each measured ``v`` a generator anticommuting
    with the measured observable gives the correction ``sigma_v``; the
    pending corrections on ``v`` decide ``delta_v``.  The outcome-dependent
    Paulis accumulate into final ``X^beta Z^gamma`` on the outputs.

    Raises
    ------
    ValueError
        If a measurement angle is not a multiple of ``pi/2``.
    """
    q = exp.qfe
    index = {v: i for i, v in enumerate(q.vertices)}
    inputs, outputs = set(q.inputs), set(q.outputs)
    adj: dict = {v: 0 for v in q.vertices}
    for key in q.cross_terms():
        u, v = tuple(key)
        adj[u] |= 1 << index[v]
        adj[v] |= 1 << index[u]
    # generators as (x mask, z mask)
    gens = [(1 << index[v], adj[v]) for v in q.vertices if v not in inputs]
    beta: dict = {v: ZERO for v in q.vertices}
    gamma: dict = {v: ZERO for v in q.vertices}
    squares = q.square_terms()
    order = [v for v in q.vertices if v not in inputs | outputs] + list(q.inputs)
    measurements = []
    unmeasured = (1 << len(q.vertices)) - 1
    for v in order:
        theta = squares.get(v, Angle())
        if not theta.is_multiple_of(Fraction(1, 2)):
            raise ValueError(f"measurement angle of {v!r} is not a multiple of pi/2")
        alpha = -theta
        is_y = alpha.den == 2
        bit = 1 << index[v]
        obs = (bit, bit if is_y else 0)
        delta = gamma[v] + beta[v] if is_y else gamma[v]

        def anticommutes(g):
            return bool(((g[0] & obs[1]) ^ (g[1] & obs[0])) & bit)

        hits = [i for i, g in enumerate(gens) if anticommutes(g)]
        if not hits:
            raise AssertionError(f"no stabilizer generator anticommutes with the measurement of {v!r}")
        p = gens[hits[0]]
        for i in hits[1:]:
            gens[i] = (gens[i][0] ^ p[0], gens[i][1] ^ p[1])
        gens[hits[0]] = obs
        unmeasured &= ~bit
        flip = SignalForm.of(v) + delta
        for w in q.vertices:
            wb = 1 << index[w]
            if not unmeasured & wb:
                continue
            if p[0] & wb:
                beta[w] = beta[w] + flip
            if p[1] & wb:
                gamma[w] = gamma[w] + flip
        measurements.append(Measure(v, alpha))
    final = {w: (beta[w], gamma[w]) for w in q.outputs}
    rotations = {w: squares[w] for w in q.outputs if w in squares}
    entangle = sorted(
        (tuple(sorted(k, key=index.__getitem__)) for k in q.cross_terms()),
        key=lambda e: (index[e[0]], index[e[1]]),
    )
    cmds = standard_commands(measurements, final, q.outputs)
    return MeasurementPattern(q.vertices, q.inputs, q.outputs, tuple(entangle), cmds, rotations)


def clifford_pattern(tab: LeuvenTableau) -> MeasurementPattern:
    """Measurement pattern with ``3n - r`` qubits implementing the tableau's Clifford."""
    return interpolate_corrections(clifford_to_qfe(tab))
