"""Dense GF(2) linear algebra on bit-packed matrices.

Rows are packed little-endian into uint64 words, so a row operation is a
word-wide XOR.  Everything here is plain Gaussian elimination vectorised
per pivot column; multiplication uses an eight-bit lookup table (method of
four Russians) so test oracles stay cheap up to a few thousand rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

_WORD = 64


def _nwords(cols: int) -> int:
    return (cols + _WORD - 1) >> 6


def _tail_mask(cols: int) -> int:
    rem = cols & 63
    return (1 << rem) - 1 if rem else (1 << 64) - 1


class F2Matrix:
    """Immutable dense matrix over GF(2).

    Attributes:
        rows: Number of rows (>= 1).
        cols: Number of columns (>= 1).
        words: uint64 array of shape (rows, ceil(cols/64)); bit j of row i
            is ``(words[i, j >> 6] >> (j & 63)) & 1``.  Padding bits past
            ``cols`` are kept zero.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        if rows < 1 or cols < 1:
            raise DimensionMismatch(f"bad shape {rows}x{cols}")
        if words.shape != (rows, _nwords(cols)) or words.dtype != np.uint64:
            raise DimensionMismatch("packed storage does not match shape")
        self.rows = rows
        self.cols = cols
        self.words = words
        words.setflags(write=False)

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        w = np.zeros((n, _nwords(n)), dtype=np.uint64)
        i = np.arange(n)
        w[i, i >> 6] = np.uint64(1) << (i & 63).astype(np.uint64)
        return cls(n, n, w)

    @classmethod
    def from_dense(cls, arr) -> "F2Matrix":
        """Pack a 2-D 0/1 array."""
        a = np.asarray(arr, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-D array")
        rows, cols = a.shape
        nb = _nwords(cols) * 8
        packed = np.packbits(a, axis=1, bitorder="little")
        if packed.shape[1] < nb:
            packed = np.pad(packed, ((0, 0), (0, nb - packed.shape[1])))
        return cls(rows, cols, np.ascontiguousarray(packed).view(np.uint64).copy())

    @classmethod
    def from_rows(cls, rows_bits, cols: int) -> "F2Matrix":
        """Build from an iterable of per-row integer bitmasks."""
        out = np.zeros((len(rows_bits), _nwords(cols)), dtype=np.uint64)
        for i, bits in enumerate(rows_bits):
            w = 0
            while bits:
                out[i, w] = np.uint64(bits & 0xFFFFFFFFFFFFFFFF)
                bits >>= 64
                w += 1
        return cls(len(rows_bits), cols, out)

    def to_dense(self) -> np.ndarray:
        """Unpack to a uint8 array of shape (rows, cols)."""
        b = np.unpackbits(self.words.view(np.uint8), axis=1, bitorder="little")
        return b[:, : self.cols]

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.rows, self.cols, self.words.copy())

    # ------------------------------------------------------------------
    # element access and comparison
    # ------------------------------------------------------------------

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return int(self.words[i, j >> 6] >> np.uint64(j & 63)) & 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self):  # pragma: no cover - mutables share identity semantics
        return NotImplemented

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols})"

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == F2Matrix.identity(self.rows)

    # ------------------------------------------------------------------
    # structure helpers
    # ------------------------------------------------------------------

    def transpose(self) -> "F2Matrix":
        return F2Matrix.from_dense(self.to_dense().T)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "F2Matrix":
        if not (0 <= r0 < r1 <= self.rows and 0 <= c0 < c1 <= self.cols):
            raise DimensionMismatch("block out of range")
        return F2Matrix(r1 - r0, c1 - c0, _extract_cols(self.words[r0:r1], c0, c1))

    def row_weights(self) -> np.ndarray:
        return _popcount_rows(self.words)

    def col_weights(self) -> np.ndarray:
        return self.transpose().row_weights()

    def is_unit_lower_triangular(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self.to_dense()
        return bool(np.all(np.diag(d) == 1) and not np.triu(d, 1).any())

    def is_unit_upper_triangular(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self.to_dense()
        return bool(np.all(np.diag(d) == 1) and not np.tril(d, -1).any())


def _popcount_rows(words: np.ndarray) -> np.ndarray:
    b = words.view(np.uint8)
    return np.unpackbits(b, axis=1).sum(axis=1)


def _extract_cols(words: np.ndarray, c0: int, c1: int) -> np.ndarray:
    """Packed column slice [c0, c1) of packed rows, vectorised bit shifting."""
    ncols = c1 - c0
    nw_out = _nwords(ncols)
    w0, sh = c0 >> 6, c0 & 63
    src = words[:, w0 : w0 + nw_out + 1]
    if src.shape[1] < nw_out + 1:
        src = np.pad(src, ((0, 0), (0, nw_out + 1 - src.shape[1])))
    if sh == 0:
        out = src[:, :nw_out].copy()
    else:
        lo = src[:, :nw_out] >> np.uint64(sh)
        hi = src[:, 1 : nw_out + 1] << np.uint64(64 - sh)
        out = lo | hi
    out[:, -1] &= np.uint64(_tail_mask(ncols))
    return out


# ----------------------------------------------------------------------
# arithmetic
# ----------------------------------------------------------------------


def mat_mul(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    """Product over GF(2).

    Uses an 8-bit combination table over groups of rows of ``b`` so the
    cost is roughly rows*cols/8 row XORs.
    """
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.cols} != {b.rows}")
    abytes = a.words.view(np.uint8)[:, : (a.cols + 7) >> 3]
    acc = np.zeros((a.rows, b.words.shape[1]), dtype=np.uint64)
    table = np.zeros((256, b.words.shape[1]), dtype=np.uint64)
    for g in range((a.cols + 7) >> 3):
        table[0] = 0
        nbits = min(8, a.cols - g * 8)
        for bit in range(nbits):
            table[1 << bit : 2 << bit] = table[: 1 << bit] ^ b.words[g * 8 + bit]
        if nbits < 8:
            for bit in range(nbits, 8):
                table[1 << bit : 2 << bit] = table[: 1 << bit]
        acc ^= table[abytes[:, g]]
    return F2Matrix(a.rows, b.cols, acc)


def rank(m: F2Matrix) -> int:
    """GF(2) rank via packed elimination."""
    w = m.words.copy()
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        wi, b = c >> 6, np.uint64(c & 63)
        col = (w[r:, wi] >> b) & np.uint64(1)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            w[[r, p]] = w[[p, r]]
        # rows still holding the bit after the swap are exactly nz[1:]
        idx = r + nz[1:]
        if idx.size:
            w[idx] ^= w[r]
        r += 1
    return r


def invert(m: F2Matrix) -> F2Matrix:
    """Inverse over GF(2); raises SingularMatrix."""
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    return solve_left(m, F2Matrix.identity(m.rows))


def solve_left(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    """Return a^-1 * b by Gauss-Jordan on the augmented system.

    Unit upper triangular systems skip pivot search and sweep columns
    high-to-low against the rows above the diagonal only.
    """
    if a.rows != a.cols or a.rows != b.rows:
        raise DimensionMismatch("solve_left shape mismatch")
    n = a.rows
    if a.is_unit_upper_triangular():
        return _solve_unit_upper(a, b)
    nwa = a.words.shape[1]
    aug = np.concatenate([a.words, b.words], axis=1)
    for c in range(n):
        wi, sh = c >> 6, np.uint64(c & 63)
        col = (aug[:, wi] >> sh) & np.uint64(1)
        nz = np.nonzero(col[c:])[0]
        if nz.size == 0:
            raise SingularMatrix(f"no pivot in column {c}")
        p = c + int(nz[0])
        if p != c:
            aug[[c, p]] = aug[[p, c]]
            col[p] = col[c]  # row p inherits the old row c bit
        col[c] = 0
        idx = np.nonzero(col)[0]
        if idx.size:
            aug[idx] ^= aug[c]
    return F2Matrix(n, b.cols, aug[:, nwa:].copy())


def _solve_unit_upper(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    """Back-substitution a^-1 * b for unit upper triangular ``a`` (the
    caller vouches for the shape)."""
    n = a.rows
    aw = a.words
    x = b.words.copy()
    for c in range(n - 1, 0, -1):
        wi, sh = c >> 6, np.uint64(c & 63)
        col = (aw[:c, wi] >> sh) & np.uint64(1)
        idx = np.nonzero(col)[0]
        if idx.size:
            x[idx] ^= x[c]
    return F2Matrix(n, b.cols, x)


@dataclass(frozen=True)
class PluFactors:
    """PM = LU bookkeeping: ``m[perm[i], :] == (lower @ upper)[i, :]``."""

    perm: tuple
    lower: F2Matrix
    upper: F2Matrix


def plu_decompose(m: F2Matrix) -> PluFactors:
    """Factor an invertible matrix as a row permutation times L times U.

    Returns:
        PluFactors with unit lower/upper triangular factors such that
        scattering row i of ``lower @ upper`` to row ``perm[i]`` rebuilds
        the input.

    Raises:
        SingularMatrix: if some column has no pivot.
    """
    if m.rows != m.cols:
        raise DimensionMismatch("PLU of a non-square matrix")
    n = m.rows
    u = m.words.copy()
    lw = np.zeros_like(u)
    perm = np.arange(n)
    for c in range(n):
        wi, sh = c >> 6, np.uint64(c & 63)
        col = (u[c:, wi] >> sh) & np.uint64(1)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            raise SingularMatrix(f"no pivot in column {c}")
        p = c + int(nz[0])
        if p != c:
            u[[c, p]] = u[[p, c]]
            lw[[c, p]] = lw[[p, c]]
            perm[[c, p]] = perm[[p, c]]
        idx = c + nz[1:]  # rows below the pivot still holding the bit
        if idx.size:
            u[idx] ^= u[c]
            lw[idx, wi] |= np.uint64(1) << sh
    i = np.arange(n)
    lw[i, i >> 6] |= np.uint64(1) << (i & 63).astype(np.uint64)
    return PluFactors(tuple(int(x) for x in perm), F2Matrix(n, n, lw), F2Matrix(n, n, u))


def permutation_matrix(perm) -> F2Matrix:
    """Matrix P with P[perm[i], i] = 1 (value at index i moves to perm[i])."""
    n = len(perm)
    d = np.zeros((n, n), dtype=np.uint8)
    d[np.asarray(perm), np.arange(n)] = 1
    return F2Matrix.from_dense(d)


def random_gl(n: int, seed: int) -> F2Matrix:
    """Seeded uniform sample from GL(n, 2) by rejection.

    The acceptance probability exceeds 0.28 for every n, so the expected
    number of draws is below four.
    """
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    rng = np.random.default_rng(seed)
    while True:
        m = F2Matrix.from_dense(rng.integers(0, 2, size=(n, n), dtype=np.uint8))
        if rank(m) == n:
            return m


# ----------------------------------------------------------------------
# text format: "<rows> <cols>" then one 0/1 string per row
# ----------------------------------------------------------------------


def format_matrix(m: F2Matrix) -> str:
    d = m.to_dense()
    lines = [f"{m.rows} {m.cols}"]
    lines.extend("".join("1" if x else "0" for x in row) for row in d)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> F2Matrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header: {lines[0]!r}")
    rows, cols = int(head[0]), int(head[1])
    if len(lines) != rows + 1:
        raise ValueError(f"expected {rows} rows, found {len(lines) - 1}")
    d = np.zeros((rows, cols), dtype=np.uint8)
    for i, ln in enumerate(lines[1:]):
        if len(ln) != cols or set(ln) - {"0", "1"}:
            raise ValueError(f"bad row {i}: {ln!r}")
        d[i] = np.frombuffer(ln.encode(), dtype=np.uint8) - ord("0")
    return F2Matrix.from_dense(d)
