"""Dense linear algebra over GF(2).

Matrices are stored as tuples of row bitmasks: bit ``j`` of row ``i`` holds
entry ``(i, j)``.  Python integers act as arbitrarily wide machine words, so
row operations are single XORs regardless of the column count.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from qformc.errors import DimensionError, SingularMatrixError


def _mask(width: int) -> int:
    return (1 << width) - 1


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


class BitVector:
    """Fixed-length vector over GF(2), packed into one integer."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 0:
            raise ValueError("length must be non-negative")
        self.length = length
        self.bits = bits & _mask(length)

    @classmethod
    def from_list(cls, values: Iterable[int]) -> BitVector:
        values = list(values)
        bits = 0
        for j, v in enumerate(values):
            if v not in (0, 1, True, False):
                raise ValueError(f"entry {v!r} is not a bit")
            if v:
                bits |= 1 << j
        return cls(len(values), bits)

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> BitVector:
        return cls(length, 1 << index)

    def tolist(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        return iter(self.tolist())

    def __add__(self, other: BitVector) -> BitVector:
        if self.length != other.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    __xor__ = __add__

    def dot(self, other: BitVector) -> int:
        if self.length != other.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")
        return _parity(self.bits & other.bits)

    def slice(self, start: int, stop: int) -> BitVector:
        return BitVector(stop - start, self.bits >> start)

    def concat(self, other: BitVector) -> BitVector:
        return BitVector(self.length + other.length, self.bits | (other.bits << self.length))

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.length, self.bits))

    def __repr__(self) -> str:
        return f"BitVector({self.tolist()})"


class BitMatrix:
    """Immutable ``rows x cols`` matrix over GF(2) with packed rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = (0,) * rows
        if len(data) != rows:
            raise DimensionError(f"expected {rows} rows, got {len(data)}")
        m = _mask(cols)
        self.data = tuple(r & m for r in data)

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> BitMatrix:
        return cls(rows, rows if cols is None else cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged row list")
            data.append(BitVector.from_list(r).bits)
        return cls(len(rows), cols, data)

    @classmethod
    def from_numpy(cls, arr) -> BitMatrix:
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return cls.from_rows((arr % 2).astype(int).tolist(), arr.shape[1])

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector]) -> BitMatrix:
        nrows = columns[0].length if columns else 0
        data = [0] * nrows
        for j, col in enumerate(columns):
            b = col.bits
            while b:
                low = b & -b
                data[low.bit_length() - 1] |= 1 << j
                b ^= low
        return cls(nrows, len(columns), data)

    @classmethod
    def outer(cls, u: BitVector, v: BitVector) -> BitMatrix:
        return cls(u.length, v.length, [v.bits if u[i] else 0 for i in range(u.length)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence[BitMatrix]]) -> BitMatrix:
        """Assemble a matrix from a 2-d grid of blocks."""
        data: list[int] = []
        total_cols = None
        for brow in blocks:
            height = brow[0].rows
            widths = [b.cols for b in brow]
            if any(b.rows != height for b in brow):
                raise DimensionError("blocks in a row must share a height")
            width = sum(widths)
            if total_cols is None:
                total_cols = width
            elif total_cols != width:
                raise DimensionError("block rows have different widths")
            for i in range(height):
                acc, shift = 0, 0
                for b in brow:
                    acc |= b.data[i] << shift
                    shift += b.cols
                data.append(acc)
        return cls(len(data), total_cols or 0, data)

    @classmethod
    def diagonal(cls, v: BitVector) -> BitMatrix:
        return cls(v.length, v.length, [v.bits & (1 << i) for i in range(v.length)])

    # -- access ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return (self.data[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def column(self, j: int) -> BitVector:
        bits = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def tolist(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.tolist(), dtype=np.uint8).reshape(self.rows, self.cols)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> BitMatrix:
        return BitMatrix(r1 - r0, c1 - c0, [r >> c0 for r in self.data[r0:r1]])

    # -- algebra --------------------------------------------------------
    @property
    def T(self) -> BitMatrix:
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            bit = 1 << i
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= bit
                r ^= low
        return BitMatrix(self.cols, self.rows, out)

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if self.cols != other.length:
                raise DimensionError(f"cannot apply {self.shape} matrix to length-{other.length} vector")
            bits = 0
            for i, r in enumerate(self.data):
                if _parity(r & other.bits):
                    bits |= 1 << i
            return BitVector(self.rows, bits)
        if isinstance(other, BitMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, [a ^ b for a, b in zip(self.data, other.data)])

    __xor__ = __add__

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.data)

    def rank(self) -> int:
        _, pivots = _row_reduce(list(self.data), self.cols)
        return len(pivots)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"BitMatrix({self.tolist()})"


def _row_reduce(data: list[int], pivot_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form, searching pivots among the low ``pivot_cols`` bits.

    Bits above ``pivot_cols`` ride along (augmented columns).  Returns the
    reduced rows and the pivot column of each leading row.
    """
    rows = list(data)
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        bit = 1 << c
        for k in range(r, len(rows)):
            if rows[k] & bit:
                break
        else:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        pr = rows[r]
        for k in range(len(rows)):
            if k != r and rows[k] & bit:
                rows[k] ^= pr
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product ``a @ b`` over GF(2)."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bd = b.data
    out = []
    for r in a.data:
        acc = 0
        while r:
            low = r & -r
            acc ^= bd[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return BitMatrix(a.rows, b.cols, out)


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse over GF(2); raises :class:`SingularMatrixError` if rank-deficient."""
    if not m.is_square():
        raise DimensionError(f"cannot invert non-square {m.shape} matrix")
    n = m.rows
    aug = [r | (1 << (n + i)) for i, r in enumerate(m.data)]
    rows, pivots = _row_reduce(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return BitMatrix(n, n, [r >> n for r in rows])


def _row_transform(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Invertible ``P`` with ``P @ m`` in reduced row echelon form, plus pivots."""
    n = m.rows
    aug = [r | (1 << (m.cols + i)) for i, r in enumerate(m.data)]
    rows, pivots = _row_reduce(aug, m.cols)
    return BitMatrix(n, n, [r >> m.cols for r in rows]), pivots


def rank_normal_decompose(g: BitMatrix) -> tuple[BitMatrix, BitMatrix, int]:
    """Find invertible ``r1t, r2t`` with ``inv(r1t) @ g @ r2t`` equal to
    ``[[0, 0], [0, I_r]]`` (identity block in the lower-right corner).

    Returns ``(r1t, r2t, r)`` where ``r`` is the rank of ``g``.
    """
    if not g.is_square():
        raise DimensionError(f"expected a square matrix, got {g.shape}")
    n = g.rows
    p1, pivots = _row_transform(g)
    r = len(pivots)
    reduced = p1 @ g
    # The first r rows of the RREF are independent and the rest vanish, so
    # row-reducing the transpose yields [[I_r, 0], [0, 0]].
    p2, _ = _row_transform(reduced.T)
    # Cyclic shift by n - r moves the leading identity block to the corner.
    shift = BitMatrix(n, n, [1 << ((i - (n - r)) % n) for i in range(n)])
    r1t_inv = shift @ p1
    r2t = p2.T @ shift.T
    return invert(r1t_inv), r2t, r


def diag_vec(m: BitMatrix) -> BitVector:
    if not m.is_square():
        raise DimensionError(f"diagonal of non-square {m.shape} matrix")
    bits = 0
    for i, r in enumerate(m.data):
        if (r >> i) & 1:
            bits |= 1 << i
    return BitVector(m.rows, bits)


def d_vec(m: BitMatrix) -> BitVector:
    """``diag(m.T @ [[0, I], [0, 0]] @ m)`` for a ``2n x 2n`` matrix.

    Entry ``t`` is the parity of the number of ``j`` with both ``m[j, t]``
    and ``m[n + j, t]`` set.
    """
    if not m.is_square() or m.rows % 2:
        raise DimensionError(f"expected an even square matrix, got {m.shape}")
    n = m.rows // 2
    bits = 0
    for j in range(n):
        bits ^= m.data[j] & m.data[n + j]
    return BitVector(m.cols, bits)


def lower_strict(m: BitMatrix) -> BitMatrix:
    if not m.is_square():
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    return BitMatrix(m.rows, m.cols, [r & _mask(i) for i, r in enumerate(m.data)])


def solve_affine(a: BitMatrix, b: BitVector) -> BitVector | None:
    """Some ``x`` with ``a @ x == b``, or ``None`` if the system is inconsistent."""
    return solve_many(a, [b])[0]


def solve_many(a: BitMatrix, bs: Sequence[BitVector]) -> list[BitVector | None]:
    """Solve ``a @ x == b`` for several right-hand sides with one elimination."""
    if any(b.length != a.rows for b in bs):
        raise DimensionError("right-hand side length must equal the row count")
    t, pivots = _row_transform(a)
    rank = len(pivots)
    out: list[BitVector | None] = []
    for b in bs:
        tb = t @ b
        if tb.bits >> rank:
            out.append(None)
            continue
        x = 0
        for i, c in enumerate(pivots):
            if (tb.bits >> i) & 1:
                x |= 1 << c
        out.append(BitVector(a.cols, x))
    return out
