"""Bilinear programs: decompositions as matrix-multiplication algorithms.

A rank-r decomposition of the <m,n,p> matrix-multiplication tensor is the
same thing as an algorithm computing the product entries with r
multiplications between linear forms of the two input matrices.  This
module makes the correspondence executable in both directions and runs
decompositions as recursive fast-multiplication algorithms with exact
operation accounting.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .decomp import ProductDecomposition, Term, verify_decomposition
from .errors import InputError, StateError
from .scalars import MINUS_ONE, ONE, ZERO, scalar_from_json, scalar_to_json
from .tensors import LocalOperatorTriple, Tensor3, make_tensor


def matmul_tensor(m: int, n: int, p: int) -> Tensor3:
    """The <m,n,p> matrix multiplication tensor.

    dims are (m*n, n*p, m*p); the entry is 1 exactly where the a-index
    (i,k), b-index (k,j) and c-index (i,j) agree on k, matching the
    bilinear forms of the product entries under row-major vectorization.
    """
    if min(m, n, p) < 1:
        raise InputError("matrix dimensions must be positive")
    entries = {}
    for i in range(m):
        for k in range(n):
            for j in range(p):
                entries[(i * n + k, k * p + j, i * p + j)] = 1
    return make_tensor((m * n, n * p, m * p), entries)


def naive_matmul_decomposition(m: int, n: int, p: int) -> ProductDecomposition:
    """The schoolbook m*n*p-term decomposition of the <m,n,p> tensor: one
    term per elementary product a_{ik} b_{kj}."""
    if min(m, n, p) < 1:
        raise InputError("matrix dimensions must be positive")

    def unit(size, idx):
        return tuple(ONE if t == idx else ZERO for t in range(size))

    terms = tuple(
        Term(unit(m * n, i * n + k), unit(n * p, k * p + j), unit(m * p, i * p + j))
        for i in range(m) for k in range(n) for j in range(p)
    )
    return ProductDecomposition((m * n, n * p, m * p), terms)


def matmul_power_relabeling(m: int, n: int, p: int, copies: int) -> LocalOperatorTriple:
    """Permutation triple taking the `copies`-fold Kronecker power of
    <m,n,p> onto <m^copies, n^copies, p^copies>.

    The power tensor indexes each leg by per-copy digit pairs; viewing a
    big matrix as nested blocks regroups those digits (all row digits
    before all column digits), and this triple performs exactly that
    regrouping.  Transporting the power of a base scheme through it yields
    a runnable program for the big product, e.g. the 49-term square of the
    7-multiplication scheme as a 4x4 algorithm.
    """
    if min(m, n, p, copies) < 1:
        raise InputError("dimensions and copies must be positive")

    def perm(rows_dim: int, cols_dim: int) -> tuple:
        pair_dim = rows_dim * cols_dim
        size = pair_dim ** copies
        targets = []
        for source in range(size):
            digits = []
            rest = source
            for _ in range(copies):
                rest, digit = divmod(rest, pair_dim)
                digits.append(digit)
            digits.reverse()
            row = col = 0
            for digit in digits:
                row = row * rows_dim + digit // cols_dim
                col = col * cols_dim + digit % cols_dim
            targets.append(row * cols_dim ** copies + col)
        return tuple(
            tuple(ONE if targets[s] == t else ZERO for s in range(size))
            for t in range(size)
        )

    return LocalOperatorTriple(perm(m, n), perm(n, p), perm(m, p))


def phi3_matmul_witness() -> LocalOperatorTriple:
    """The fixed invertible relabeling taking <2,2,2> to the PHI3 state.

    The B and C legs are identities and A swaps the two middle basis
    vectors (transposing the row/column roles of Alice's index pair).
    Computed once by matching the two index patterns and locked by the
    exact equality test apply_local_operators(L, MATMUL(2,2,2)) == PHI3.
    """
    swap = (
        (ONE, ZERO, ZERO, ZERO),
        (ZERO, ZERO, ONE, ZERO),
        (ZERO, ONE, ZERO, ZERO),
        (ZERO, ZERO, ZERO, ONE),
    )
    return LocalOperatorTriple(swap, linalg.identity(4), linalg.identity(4))


# ---------------------------------------------------------------------------
# Operation accounting
# ---------------------------------------------------------------------------


@dataclass
class MulCount:
    """Instrumented operation tally.

    `nonscalar_mults` counts only products of an a-side quantity with a
    b-side quantity; multiplications by fixed constants are tallied under
    `additions` together with the actual additions/subtractions.  Counters
    are incremented as the operations execute, never from closed forms,
    and merge associatively.
    """

    nonscalar_mults: int = 0
    additions: int = 0

    def __add__(self, other):
        return MulCount(
            self.nonscalar_mults + other.nonscalar_mults,
            self.additions + other.additions,
        )


def _eval_form(coeffs, values, count: MulCount):
    """Evaluate sum_i coeffs[i]*values[i] with instrumented accounting."""
    acc = None
    for coeff, value in zip(coeffs, values):
        if not coeff:
            continue
        if coeff == ONE:
            contrib = value
        elif coeff == MINUS_ONE:
            contrib = -value
        else:
            contrib = coeff * value
            count.additions += 1  # scalar-by-constant counts as an addition
        if acc is None:
            acc = contrib
        else:
            acc = acc + contrib
            count.additions += 1
    return ZERO if acc is None else acc


# ---------------------------------------------------------------------------
# Bilinear programs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BilinearProgram:
    """r non-scalar products M_k = (u[k].a)(v[k].b) plus the output
    recombination f_l = sum_k w[l][k] M_k.

    u is r x dA, v is r x dB, w is dC x r; the program reproduces the
    originating tensor's bilinear forms exactly and r equals the term
    count of the decomposition it came from.
    """

    u: tuple
    v: tuple
    w: tuple
    verified_matmul: tuple | None = None

    @property
    def r(self) -> int:
        return len(self.u)

    def dims(self) -> tuple:
        da = len(self.u[0]) if self.u else 0
        db = len(self.v[0]) if self.v else 0
        dc = len(self.w)
        return (da, db, dc)


def to_bilinear(d: ProductDecomposition) -> BilinearProgram:
    """Decomposition -> program: u rows are the a-vectors, v rows the
    b-vectors, w columns the c-vectors."""
    u = tuple(term.a for term in d.terms)
    v = tuple(term.b for term in d.terms)
    dc = d.dims[2]
    w = tuple(
        tuple(term.c[l] for term in d.terms) for l in range(dc)
    )
    return BilinearProgram(u, v, w)


def from_bilinear(p: BilinearProgram) -> ProductDecomposition:
    """Program -> decomposition; exact inverse of to_bilinear."""
    dc = len(p.w)
    terms = tuple(
        Term(p.u[k], p.v[k], tuple(p.w[l][k] for l in range(dc)))
        for k in range(p.r)
    )
    da = len(p.u[0]) if p.u else 0
    db = len(p.v[0]) if p.v else 0
    return ProductDecomposition((da, db, dc), terms)


def evaluate_bilinear(p: BilinearProgram, avec, bvec,
                      count: MulCount | None = None) -> tuple:
    """Run the program on concrete vectors, counting as it goes."""
    count = count if count is not None else MulCount()
    products = []
    for k in range(p.r):
        fa = _eval_form(p.u[k], avec, count)
        fb = _eval_form(p.v[k], bvec, count)
        products.append(fa * fb)
        count.nonscalar_mults += 1
    return tuple(_eval_form(row, products, count) for row in p.w)


def verify_for_matmul(p: BilinearProgram, m: int, n: int, k: int) -> BilinearProgram:
    """Certify a program against the <m,n,k> tensor; returns a copy marked
    as verified, which run_bilinear_matmul requires."""
    target = matmul_tensor(m, n, k)
    result = verify_decomposition(target, from_bilinear(p))
    if not result.ok:
        raise InputError(
            f"program does not compute <{m},{n},{k}>: first mismatch at {result.first_mismatch}"
        )
    return replace(p, verified_matmul=(m, n, k))


def run_bilinear_matmul(p: BilinearProgram, x, y) -> tuple:
    """Execute a verified <m,n,p> program on exact matrices X (m x n) and
    Y (n x p); returns (X.Y, MulCount) with nonscalar_mults == r."""
    m = len(x)
    n = len(x[0]) if m else 0
    if any(len(row) != n for row in x):
        raise InputError("ragged left matrix")
    if len(y) != n:
        raise InputError(f"inner dimensions differ: {n} vs {len(y)}")
    k = len(y[0]) if y else 0
    if any(len(row) != k for row in y):
        raise InputError("ragged right matrix")
    if p.verified_matmul != (m, n, k):
        raise StateError(
            f"program not verified for <{m},{n},{k}> "
            f"(verified: {p.verified_matmul}); call verify_for_matmul first"
        )
    avec = tuple(x[i][t] for i in range(m) for t in range(n))
    bvec = tuple(y[t][j] for t in range(n) for j in range(k))
    count = MulCount()
    flat = evaluate_bilinear(p, avec, bvec, count)
    z = tuple(tuple(flat[i * k + j] for j in range(k)) for i in range(m))
    return z, count


# ---------------------------------------------------------------------------
# Recursive fast multiplication
# ---------------------------------------------------------------------------


def _mat_add(a, b, count: MulCount, sign: int = 1):
    count.additions += len(a) * len(a[0])
    if sign > 0:
        return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def naive_multiply(x, y, count: MulCount | None = None) -> tuple:
    """Schoolbook product with instrumented counts (n^3 non-scalar mults)."""
    count = count if count is not None else MulCount()
    n_inner = len(y)
    if any(len(row) != n_inner for row in x):
        raise InputError("inner dimensions differ")
    cols = list(zip(*y))
    out = []
    for row in x:
        out_row = []
        for col in cols:
            acc = None
            for xv, yv in zip(row, col):
                prod = xv * yv
                count.nonscalar_mults += 1
                if acc is None:
                    acc = prod
                else:
                    acc = acc + prod
                    count.additions += 1
            out_row.append(acc if acc is not None else ZERO)
        out.append(tuple(out_row))
    return tuple(out), count


def _block(m, r, c, h):
    return [row[c * h:(c + 1) * h] for row in m[r * h:(r + 1) * h]]


def _strassen_rec(x, y, size, cutoff, count: MulCount):
    if size <= cutoff:
        z, _ = naive_multiply(x, y, count)
        return [list(row) for row in z]
    h = size // 2
    x11, x12, x21, x22 = (_block(x, 0, 0, h), _block(x, 0, 1, h),
                          _block(x, 1, 0, h), _block(x, 1, 1, h))
    y11, y12, y21, y22 = (_block(y, 0, 0, h), _block(y, 0, 1, h),
                          _block(y, 1, 0, h), _block(y, 1, 1, h))
    m1 = _strassen_rec(_mat_add(x11, x22, count), _mat_add(y11, y22, count), h, cutoff, count)
    m2 = _strassen_rec(_mat_add(x21, x22, count), y11, h, cutoff, count)
    m3 = _strassen_rec(x11, _mat_add(y12, y22, count, -1), h, cutoff, count)
    m4 = _strassen_rec(x22, _mat_add(y21, y11, count, -1), h, cutoff, count)
    m5 = _strassen_rec(_mat_add(x11, x12, count), y22, h, cutoff, count)
    m6 = _strassen_rec(_mat_add(x21, x11, count, -1), _mat_add(y11, y12, count), h, cutoff, count)
    m7 = _strassen_rec(_mat_add(x12, x22, count, -1), _mat_add(y21, y22, count), h, cutoff, count)
    z11 = _mat_add(_mat_add(_mat_add(m1, m4, count), m5, count, -1), m7, count)
    z12 = _mat_add(m3, m5, count)
    z21 = _mat_add(m2, m4, count)
    z22 = _mat_add(_mat_add(_mat_add(m1, m2, count, -1), m3, count), m6, count)
    out = [[None] * size for _ in range(size)]
    for i in range(h):
        for j in range(h):
            out[i][j] = z11[i][j]
            out[i][j + h] = z12[i][j]
            out[i + h][j] = z21[i][j]
            out[i + h][j + h] = z22[i][j]
    return out


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def strassen_multiply(x, y, cutoff: int = 1, pad: bool = False) -> tuple:
    """Recursive 7-multiplication product of square exact matrices.

    Blocks of size <= cutoff multiply naively, so cutoff 1 performs
    exactly 7^(log2 N) non-scalar multiplications.  Inputs must be square
    with power-of-two size unless pad=True, which zero-pads to the next
    power of two and slices the result back.
    """
    if cutoff < 1:
        raise InputError("cutoff must be positive")
    size = len(x)
    if any(len(row) != size for row in x) or len(y) != size \
            or any(len(row) != size for row in y):
        raise InputError("strassen_multiply needs square matrices of equal size")
    if not _is_power_of_two(size):
        if not pad:
            raise InputError(
                f"size {size} is not a power of two; pass pad=True to zero-pad"
            )
        target = 1 << (size - 1).bit_length()
        x = [list(row) + [ZERO] * (target - size) for row in x] + \
            [[ZERO] * target for _ in range(target - size)]
        y = [list(row) + [ZERO] * (target - size) for row in y] + \
            [[ZERO] * target for _ in range(target - size)]
        count = MulCount()
        z = _strassen_rec(x, y, target, cutoff, count)
        return tuple(tuple(row[:size]) for row in z[:size]), count
    count = MulCount()
    z = _strassen_rec([list(row) for row in x], [list(row) for row in y],
                      size, cutoff, count)
    return tuple(tuple(row) for row in z), count


def strassen_multiply_float(x: np.ndarray, y: np.ndarray, cutoff: int = 1) -> tuple:
    """Benchmark-only float path over numpy blocks; excluded from
    correctness acceptance.  Counters tally the scalar operations the
    block primitives execute."""
    if cutoff < 1:
        raise InputError("cutoff must be positive")
    size = x.shape[0]
    if x.shape != (size, size) or y.shape != (size, size):
        raise InputError("strassen_multiply_float needs square matrices of equal size")
    if not _is_power_of_two(size):
        raise InputError(f"size {size} is not a power of two")
    count = MulCount()

    def rec(a, b):
        n = a.shape[0]
        if n <= cutoff:
            count.nonscalar_mults += n * n * n
            count.additions += n * n * (n - 1)
            return a @ b
        h = n // 2
        a11, a12, a21, a22 = a[:h, :h], a[:h, h:], a[h:, :h], a[h:, h:]
        b11, b12, b21, b22 = b[:h, :h], b[:h, h:], b[h:, :h], b[h:, h:]
        count.additions += 18 * h * h
        m1 = rec(a11 + a22, b11 + b22)
        m2 = rec(a21 + a22, b11)
        m3 = rec(a11, b12 - b22)
        m4 = rec(a22, b21 - b11)
        m5 = rec(a11 + a12, b22)
        m6 = rec(a21 - a11, b11 + b12)
        m7 = rec(a12 - a22, b21 + b22)
        out = np.empty((n, n), dtype=a.dtype)
        out[:h, :h] = m1 + m4 - m5 + m7
        out[:h, h:] = m3 + m5
        out[h:, :h] = m2 + m4
        out[h:, h:] = m1 - m2 + m3 + m6
        return out

    return rec(x, y), count


# ---------------------------------------------------------------------------
# Matrix JSON format
# ---------------------------------------------------------------------------
#
# {"rows": R, "cols": C, "data": [["p/q", ...], ...]}; complex entries use
# the {"re","im"} object form.


def matrix_to_json(m) -> dict:
    rows, cols = linalg.shape(m)
    return {
        "rows": rows,
        "cols": cols,
        "data": [[scalar_to_json(x) for x in row] for row in m],
    }


def matrix_from_json(obj: dict) -> tuple:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    if len(data) != rows or any(len(row) != cols for row in data):
        raise InputError("matrix data does not match declared shape")
    return tuple(tuple(scalar_from_json(x) for x in row) for row in data)
