"""Rank decompositions: verification, builtin witnesses, tensor powers,
numeric search and small exact certificates.

A ProductDecomposition asserts T = sum_k a_k (x) b_k (x) c_k and is the
package's currency for tensor-rank upper bounds: an ExactMatch from
`verify_decomposition` certifies rank(T) <= r.  Lower bounds come from
flattening ranks and from the RankFacts registry of known exact ranks.
"""

from __future__ import annotations

import enum
import os
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import NamedTuple

import numpy as np

from . import linalg, sampling
from .als import AlsConfig, AlsResult, als_decompose
from .errors import InputError, ResourceError
from .scalars import ONE, ZERO, Scalar, scalar_from_json, scalar_to_json
from .tensors import (
    ENTRY_CAP,
    LocalOperatorTriple,
    Tensor3,
    contract,
    flattening_rank,
    make_tensor,
    max_flattening_rank,
    slice_c,
    tensor_product,
)

#: decomposition_power refuses to build more terms than this
#: (override with the TENRANK_TERM_CAP environment variable)
DEFAULT_TERM_CAP = 1 << 20

#: above this term count, verification switches from dense reconstruction
#: to the randomized contraction identity
DENSE_VERIFY_LIMIT = 100_000

#: decomposition_power materializes its term list only while
#: r^n * (dA + dB + dC) stays below this scalar budget
_MATERIALIZE_SCALARS = 1 << 18


class Term(NamedTuple):
    a: tuple
    b: tuple
    c: tuple


@dataclass(frozen=True)
class ProductDecomposition:
    """r product terms (a_k, b_k, c_k) over exact scalars.

    `terms` is any immutable sequence; large tensor powers use a lazy
    sequence that generates Kronecker terms on demand (see
    KroneckerPowerTerms) so the term count can exceed what fits in memory
    as explicit vectors.
    """

    dims: tuple
    terms: Sequence

    @property
    def rank(self) -> int:
        return len(self.terms)


def make_decomposition(dims, terms) -> ProductDecomposition:
    """Validated constructor: vector lengths must match dims and no term
    may contain an all-zero vector."""
    da, db, dc = dims
    built = []
    for k, term in enumerate(terms):
        a, b, c = (linalg.vector(v) for v in term)
        if (len(a), len(b), len(c)) != (da, db, dc):
            raise InputError(f"term {k} has vector lengths "
                             f"{(len(a), len(b), len(c))}, expected {tuple(dims)}")
        if not (any(a) and any(b) and any(c)):
            raise InputError(f"term {k} contains an all-zero vector")
        built.append(Term(a, b, c))
    return ProductDecomposition((da, db, dc), tuple(built))


class KroneckerPowerTerms(Sequence):
    """Lazy term list of the n-th Kronecker power of a base decomposition.

    Term j corresponds to the base-r digits of j (first copy = most
    significant digit) and is built on access as the leg-wise Kronecker
    product of the chosen base terms.  Only the base terms are stored.
    """

    def __init__(self, base_terms, copies: int):
        self.base_terms = tuple(base_terms)
        self.copies = copies
        self._len = len(self.base_terms) ** copies

    def __len__(self):
        return self._len

    def __getitem__(self, j):
        if isinstance(j, slice):
            return [self[i] for i in range(*j.indices(self._len))]
        if j < 0:
            j += self._len
        if not 0 <= j < self._len:
            raise IndexError(j)
        r = len(self.base_terms)
        digits = []
        for _ in range(self.copies):
            j, d = divmod(j, r)
            digits.append(d)
        digits.reverse()
        chosen = [self.base_terms[d] for d in digits]
        return Term(
            reduce(linalg.kron_vec, (t.a for t in chosen)),
            reduce(linalg.kron_vec, (t.b for t in chosen)),
            reduce(linalg.kron_vec, (t.c for t in chosen)),
        )


# ---------------------------------------------------------------------------
# Reconstruction and verification
# ---------------------------------------------------------------------------


def reconstruct(d: ProductDecomposition) -> Tensor3:
    """Densely rebuild sum_k a_k (x) b_k (x) c_k (subject to the entry cap)."""
    da, db, dc = d.dims
    if da * db * dc > ENTRY_CAP:
        raise ResourceError(f"reconstruction of dims {d.dims} exceeds the dense cap")
    acc = [ZERO] * (da * db * dc)
    for term in d.terms:
        for i, ai in enumerate(term.a):
            if not ai:
                continue
            for j, bj in enumerate(term.b):
                if not bj:
                    continue
                ab = ai * bj
                base = (i * db + j) * dc
                for k, ck in enumerate(term.c):
                    if ck:
                        acc[base + k] = acc[base + k] + ab * ck
    return Tensor3(d.dims, acc)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    first_mismatch: tuple | None = None
    randomized: bool = False

    def __bool__(self):
        return self.ok


def verify_decomposition(t: Tensor3, d: ProductDecomposition) -> VerifyResult:
    """Check T = sum of d's terms, exactly.

    Up to DENSE_VERIFY_LIMIT terms the sum is reconstructed densely and
    compared entrywise (first differing index reported in row-major
    order); an exact match certifies rank(T) <= r.  Beyond the limit the
    check falls back to the randomized contraction identity against dense
    rational probes, which is one-sided: a reported match holds with
    probability 1 up to the vanishing chance that every probe hits a root
    of the nonzero difference polynomial.
    """
    if t.dims != d.dims:
        raise InputError(f"dims mismatch: tensor {t.dims} vs decomposition {d.dims}")
    if len(d.terms) > DENSE_VERIFY_LIMIT:
        rng = random.Random(20)
        for _ in range(20):
            x = sampling.vector(rng, t.dims[0])
            y = sampling.vector(rng, t.dims[1])
            z = sampling.vector(rng, t.dims[2])
            if contract(t, x, y, z) != decomposition_contract(d, x, y, z):
                return VerifyResult(False, None, randomized=True)
        return VerifyResult(True, randomized=True)
    rebuilt = reconstruct(d)
    if rebuilt.entries == t.entries:
        if t.dims[0] * t.dims[1] * t.dims[2] <= 4096:
            # cheap internal invariant: witnessed rank dominates flattenings
            assert len(d.terms) >= max_flattening_rank(t)
        return VerifyResult(True)
    for flat, (lhs, rhs) in enumerate(zip(t.entries, rebuilt.entries)):
        if lhs != rhs:
            _, db, dc = t.dims
            a, rest = divmod(flat, db * dc)
            b, c = divmod(rest, dc)
            return VerifyResult(False, (a, b, c))
    raise AssertionError("unreachable")


def decomposition_contract(d: ProductDecomposition, x, y, z) -> Scalar:
    """Exact contraction sum_k (a_k . x)(b_k . y)(c_k . z)."""
    acc = ZERO
    for term in d.terms:
        pa = linalg.dot(term.a, x)
        if not pa:
            continue
        pb = linalg.dot(term.b, y)
        if not pb:
            continue
        pc = linalg.dot(term.c, z)
        if pc:
            acc = acc + pa * pb * pc
    return acc


def transport(ops: LocalOperatorTriple, d: ProductDecomposition) -> ProductDecomposition:
    """Push a decomposition through local operators, term by term.

    If T = sum a_k (x) b_k (x) c_k then (A (x) B (x) C) T = sum (A a_k) (x)
    (B b_k) (x) (C c_k) with the same term count: witnessed rank bounds
    never increase under local operators.
    """
    if ops.input_dims() != d.dims:
        raise InputError(
            f"operator input dims {ops.input_dims()} do not match decomposition dims {d.dims}"
        )
    if len(d.terms) > DENSE_VERIFY_LIMIT:
        raise ResourceError(
            "refusing to transport a decomposition with more than "
            f"{DENSE_VERIFY_LIMIT} terms; transport the base and take the power instead"
        )
    new_terms = tuple(
        Term(
            linalg.mat_vec(ops.A, term.a),
            linalg.mat_vec(ops.B, term.b),
            linalg.mat_vec(ops.C, term.c),
        )
        for term in d.terms
    )
    return ProductDecomposition(ops.output_dims(), new_terms)


# ---------------------------------------------------------------------------
# Builtin states and decompositions
# ---------------------------------------------------------------------------


def builtin_state(name: str, *params: int) -> Tensor3:
    """Construct a named reference state, unnormalized.

    GHZ(N)        sum_i e_i (x) e_i (x) e_i at level count N
    W             |001> + |010> + |100>
    EPR           |00> + |11> as a bipartite tensor (dC = 1)
    PHI3          three EPR pairs shared pairwise: equals the 2x2 matrix
                  multiplication tensor up to a fixed relabeling of leg A
    W2            W (x) W
    MATMUL(m,n,p) the <m,n,p> matrix multiplication tensor
    """
    key = name.upper()
    if key == "GHZ":
        n = params[0] if params else 2
        if n < 1:
            raise InputError("GHZ level count must be positive")
        return make_tensor((n, n, n), {(i, i, i): 1 for i in range(n)})
    if key == "W":
        return make_tensor((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})
    if key == "EPR":
        return make_tensor((2, 2, 1), {(0, 0, 0): 1, (1, 1, 0): 1})
    if key == "PHI3":
        pairs = [
            (0, 0, 0), (2, 2, 0),
            (0, 1, 1), (2, 3, 1),
            (1, 0, 2), (3, 2, 2),
            (1, 1, 3), (3, 3, 3),
        ]
        return make_tensor((4, 4, 4), {p: 1 for p in pairs})
    if key == "W2":
        w = builtin_state("W")
        return tensor_product(w, w)
    if key == "MATMUL":
        from .bilinear import matmul_tensor

        m, n, p = params
        return matmul_tensor(m, n, p)
    raise InputError(f"unknown builtin state {name!r}")


def _terms_from_ints(dims, rows):
    return make_decomposition(
        dims, [(tuple(a), tuple(b), tuple(c)) for a, b, c in rows]
    )


def strassen7_decomposition() -> ProductDecomposition:
    """The classic 7-multiplication scheme for 2x2 matrix products, as a
    7-term decomposition of the <2,2,2> tensor.

    a-coefficients index the left matrix entries (row-major), b the right
    matrix, c the outputs; all coefficients are in {-1, 0, 1}.
    """
    rows = [
        # (a11+a22)(b11+b22) -> c11 + c22
        ((1, 0, 0, 1), (1, 0, 0, 1), (1, 0, 0, 1)),
        # (a21+a22) b11      -> c21 - c22
        ((0, 0, 1, 1), (1, 0, 0, 0), (0, 0, 1, -1)),
        # a11 (b12-b22)      -> c12 + c22
        ((1, 0, 0, 0), (0, 1, 0, -1), (0, 1, 0, 1)),
        # a22 (b21-b11)      -> c11 + c21
        ((0, 0, 0, 1), (-1, 0, 1, 0), (1, 0, 1, 0)),
        # (a11+a12) b22      -> c12 - c11
        ((1, 1, 0, 0), (0, 0, 0, 1), (-1, 1, 0, 0)),
        # (a21-a11)(b11+b12) -> c22
        ((-1, 0, 1, 0), (1, 1, 0, 0), (0, 0, 0, 1)),
        # (a12-a22)(b21+b22) -> c11
        ((0, 1, 0, -1), (0, 0, 1, 1), (1, 0, 0, 0)),
    ]
    return _terms_from_ints((4, 4, 4), rows)


def fiduccia8_w2_decomposition() -> ProductDecomposition:
    """Fiduccia's 8-multiplication scheme for the W (x) W bilinear forms.

    The coefficient matrix of the four outputs splits into four rank-one
    blocks (one product each) plus one diagonal block (four products);
    the b-side forms and the output recombination are reconstructed from
    that split and locked by the exact verification test against W (x) W.
    """
    rows = [
        # rank-one blocks
        ((0, 0, 1, 0), (1, 1, 0, 0), (1, 1, 0, 0)),
        ((0, 1, 0, 0), (1, 0, 1, 0), (1, 0, 1, 0)),
        ((1, 0, 0, 0), (1, 0, 0, 1), (1, 0, 0, 1)),
        ((1, 0, 0, 0), (0, 1, 1, 0), (0, 1, 1, 0)),
        # diagonal correction block
        ((-1, -1, -1, 1), (1, 0, 0, 0), (1, 0, 0, 0)),
        ((-1, 0, -1, 0), (0, 1, 0, 0), (0, 1, 0, 0)),
        ((-1, -1, 0, 0), (0, 0, 1, 0), (0, 0, 1, 0)),
        ((-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 1)),
    ]
    return _terms_from_ints((4, 4, 4), rows)


def ghz_decomposition(n: int) -> ProductDecomposition:
    if n < 1:
        raise InputError("GHZ level count must be positive")
    e = linalg.identity(n)
    return ProductDecomposition((n, n, n), tuple(Term(e[i], e[i], e[i]) for i in range(n)))


def w_rank3_decomposition() -> ProductDecomposition:
    """An exact 3-term witness for the W state:
    W = 1/2 (e0+e1)^(x3) - 1/2 (e0-e1)^(x3) - e1^(x3)."""
    half = Fraction(1, 2)
    rows = [
        ((half, half), (1, 1), (1, 1)),
        ((-half, half), (1, -1), (1, -1)),
        ((0, -1), (0, 1), (0, 1)),
    ]
    return _terms_from_ints((2, 2, 2), rows)


def builtin_decomposition(name: str, *params: int) -> ProductDecomposition:
    key = name.upper()
    if key == "GHZ":
        return ghz_decomposition(params[0] if params else 2)
    if key == "STRASSEN7":
        return strassen7_decomposition()
    if key == "FIDUCCIA8_W2":
        return fiduccia8_w2_decomposition()
    raise InputError(f"unknown builtin decomposition {name!r}")


# ---------------------------------------------------------------------------
# Tensor powers of decompositions
# ---------------------------------------------------------------------------


def term_cap() -> int:
    value = os.environ.get("TENRANK_TERM_CAP")
    if value is None:
        return DEFAULT_TERM_CAP
    try:
        return int(value)
    except ValueError as exc:
        raise InputError(f"invalid TENRANK_TERM_CAP {value!r}") from exc


def decomposition_power(d: ProductDecomposition, n: int,
                        cap: int | None = None) -> ProductDecomposition:
    """The n-fold Kronecker power: r^n terms, each a leg-wise Kronecker
    product of one base term per copy; reconstructs the n-fold tensor
    product of d's target.

    The term list is materialized while small and generated lazily
    otherwise, so powers like 7^6 terms stay addressable without holding
    every vector in memory.
    """
    if n < 1:
        raise InputError("power must be a positive integer")
    if isinstance(d.terms, KroneckerPowerTerms):
        raise InputError("cannot take the power of an already-lazy power; "
                         "raise the base decomposition instead")
    r = len(d.terms)
    total = r ** n
    limit = cap if cap is not None else term_cap()
    if total > limit:
        raise ResourceError(f"{r}^{n} = {total} terms exceeds the term cap {limit}")
    dims = tuple(dim ** n for dim in d.dims)
    lazy = KroneckerPowerTerms(d.terms, n)
    if total * sum(dims) <= _MATERIALIZE_SCALARS:
        return ProductDecomposition(dims, tuple(lazy))
    return ProductDecomposition(dims, lazy)


def verify_power_randomized(base_target: Tensor3, power: ProductDecomposition,
                            probes: int = 20, seed: int = 0) -> VerifyResult:
    """Randomized contraction check of a Kronecker-power decomposition
    against the matching tensor power of `base_target`, without
    materializing either side.

    Each probe draws fresh random rational vectors per copy and per leg
    and compares the exact contraction of both sides:

      product_j sum_k (a_k . x_j)(b_k . y_j)(c_k . z_j)
        ==  product_j <base_target, x_j, y_j, z_j>

    The left side equals the full contraction of all r^n terms against the
    Kronecker probe (distributivity), and product vectors span the whole
    probe space, so the identity holding for all probes characterizes
    equality.  The check is one-sided Schwartz-Zippel style: a true
    mismatch is a nonzero polynomial in the probe entries and survives
    undetected only if every probe lands on a root, which has vanishing
    probability over fresh random rationals.
    """
    if not isinstance(power.terms, KroneckerPowerTerms):
        raise InputError("verify_power_randomized needs a lazy Kronecker power")
    lazy = power.terms
    n = lazy.copies
    if tuple(dim ** n for dim in base_target.dims) != power.dims:
        raise InputError(
            f"power dims {power.dims} are not the {n}-th power of base dims {base_target.dims}"
        )
    rng = random.Random(seed)
    da, db, dc = base_target.dims
    for _ in range(probes):
        lhs = ONE
        rhs = ONE
        for _ in range(n):
            x = sampling.vector(rng, da)
            y = sampling.vector(rng, db)
            z = sampling.vector(rng, dc)
            factor = ZERO
            for term in lazy.base_terms:
                pa = linalg.dot(term.a, x)
                if not pa:
                    continue
                pb = linalg.dot(term.b, y)
                if not pb:
                    continue
                pc = linalg.dot(term.c, z)
                if pc:
                    factor = factor + pa * pb * pc
            lhs = lhs * factor
            rhs = rhs * contract(base_target, x, y, z)
        if lhs != rhs:
            return VerifyResult(False, None, randomized=True)
    return VerifyResult(True, randomized=True)


# ---------------------------------------------------------------------------
# Exact rank certificate for 2x2x2 tensors
# ---------------------------------------------------------------------------


class Rank222(enum.Enum):
    RANK_LEQ2 = "rank_leq2"
    RANK_GEQ3 = "rank_geq3"
    DEGENERATE = "degenerate"


def rank_leq2_test_2x2x2(t: Tensor3) -> Rank222:
    """Exact slice-pencil rank test for 2x2x2 tensors.

    DEGENERATE when some flattening rank is below 2 (the tensor rank then
    equals the maximum flattening rank).  Otherwise, with an invertible
    member S of the two-slice pencil, the tensor has rank <= 2 exactly
    when S' S^-1 is diagonalizable over the complex numbers, decided
    through the discriminant of its characteristic polynomial plus the
    scalar-matrix degenerate case.  No eigenvalues are ever computed, so
    the test stays exact over the rationals.
    """
    if t.dims != (2, 2, 2):
        raise InputError(f"rank test needs dims (2, 2, 2), got {t.dims}")
    if min(flattening_rank(t, leg) for leg in ("A", "B", "C")) < 2:
        return Rank222.DEGENERATE
    s0, s1 = slice_c(t, 0), slice_c(t, 1)

    def combine(alpha, beta):
        return tuple(
            tuple(alpha * x + beta * y for x, y in zip(r0, r1))
            for r0, r1 in zip(s0, s1)
        )

    pencil = None
    for alpha, beta in ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2)):
        candidate = combine(Scalar(alpha), Scalar(beta))
        if linalg.det(candidate):
            pencil = (candidate, (alpha, beta))
            break
    # both slices independent and not all-singular once every flattening
    # rank is 2, so an invertible member always exists among the candidates
    assert pencil is not None
    s, (alpha, beta) = pencil
    other = s1 if (alpha, beta) != (0, 1) else s0
    m = linalg.mat_mul(other, linalg.inverse(s))
    trace = m[0][0] + m[1][1]
    discriminant = trace * trace - Scalar(4) * linalg.det(m)
    if discriminant:
        return Rank222.RANK_LEQ2
    is_scalar_matrix = (not m[0][1]) and (not m[1][0]) and m[0][0] == m[1][1]
    return Rank222.RANK_LEQ2 if is_scalar_matrix else Rank222.RANK_GEQ3


# ---------------------------------------------------------------------------
# Known exact ranks
# ---------------------------------------------------------------------------


class RankFact(NamedTuple):
    rank: int
    note: str


class RankFacts:
    """Registry of states with known exact tensor rank.

    Lower bounds beyond flattenings are not computable here in general, so
    convertibility decisions lean on these registered facts.  Every entry
    carries a provenance note.
    """

    def __init__(self):
        self._named = {
            "PHI3": RankFact(7, "7-term multiplication scheme (Strassen); "
                                "optimality (Winograd) consumed as a registered fact"),
            "W": RankFact(3, "three-qubit W class: border rank 2, exact rank 3"),
        }

    def lookup_named(self, name: str) -> RankFact | None:
        key = name.upper()
        if key.startswith("GHZ"):
            return None  # parameterized; use lookup() on the tensor
        return self._named.get(key)

    def lookup(self, t: Tensor3) -> tuple[str, RankFact] | None:
        """Exact-match a tensor against the registered states."""
        da, db, dc = t.dims
        if da == db == dc:
            ghz = builtin_state("GHZ", da)
            if t == ghz:
                return (f"GHZ({da})", RankFact(da, "diagonal state: rank equals level count"))
        if t.dims == (2, 2, 2) and t == builtin_state("W"):
            return ("W", self._named["W"])
        if t.dims == (4, 4, 4) and t == builtin_state("PHI3"):
            return ("PHI3", self._named["PHI3"])
        return None


DEFAULT_RANK_FACTS = RankFacts()


# ---------------------------------------------------------------------------
# Numeric search and rationalization
# ---------------------------------------------------------------------------


def als_search(t: Tensor3, r: int, cfg: AlsConfig | None = None) -> AlsResult:
    """Float rank-r search on an exact tensor (see tenrank.als)."""
    return als_decompose(t.to_numpy(), r, cfg)


def rationalize_factors(dims, factors, max_denominator: int = 64):
    """Round float CP factors to small rationals, or None if any entry is
    not close to a fraction with the allowed denominator.

    Gauge is fixed first (peak entry of each a- and b-column scaled to 1,
    c absorbing the scale) so that arbitrary per-term complex phases from
    the numeric search do not block rounding.  The caller re-verifies the
    result exactly; this function only proposes a candidate.
    """
    a, b, c = (np.array(f, dtype=np.complex128, copy=True) for f in factors)
    r = a.shape[1]
    for k in range(r):
        for f, absorb in ((a, True), (b, True)):
            col = f[:, k]
            peak = col[np.argmax(np.abs(col))]
            if peak == 0:
                return None
            f[:, k] = col / peak
            c[:, k] = c[:, k] * peak

    def round_entry(z):
        re = Fraction(float(z.real)).limit_denominator(max_denominator)
        im = Fraction(float(z.imag)).limit_denominator(max_denominator)
        if abs(complex(re) + 1j * complex(im) - z) > 1e-6:
            return None
        return Scalar(re, im)

    terms = []
    for k in range(r):
        vecs = []
        for f in (a, b, c):
            v = tuple(round_entry(z) for z in f[:, k])
            if any(x is None for x in v):
                return None
            vecs.append(v)
        if not all(any(v) for v in vecs):
            return None
        terms.append(tuple(vecs))
    return make_decomposition(dims, terms)


def rationalize_result(t: Tensor3, result: AlsResult,
                       max_denominator: int = 64) -> ProductDecomposition | None:
    """Promote a numeric find to an exact witness when possible."""
    candidate = rationalize_factors(t.dims, result.factors, max_denominator)
    if candidate is None:
        return None
    return candidate if verify_decomposition(t, candidate).ok else None


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------
#
# {"dims": [dA, dB, dC],
#  "terms": [{"a": ["p/q", ...], "b": [...], "c": [...]}, ...]}
#
# Exact values use "p/q" strings (complex ones the {"re","im"} object form);
# float decompositions use {"re": x, "im": y} numbers and carry "exact": false.


def decomposition_to_json(d: ProductDecomposition) -> dict:
    return {
        "dims": list(d.dims),
        "terms": [
            {
                "a": [scalar_to_json(x) for x in term.a],
                "b": [scalar_to_json(x) for x in term.b],
                "c": [scalar_to_json(x) for x in term.c],
            }
            for term in d.terms
        ],
    }


def decomposition_from_json(obj: dict) -> ProductDecomposition:
    if obj.get("exact", True) is False:
        raise InputError("float decomposition cannot be loaded as an exact witness")
    try:
        dims = tuple(int(x) for x in obj["dims"])
        raw_terms = obj["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed decomposition JSON: {exc}") from exc
    terms = []
    for item in raw_terms:
        terms.append(tuple(
            tuple(scalar_from_json(v) for v in item[leg]) for leg in ("a", "b", "c")
        ))
    return make_decomposition(dims, terms)


def float_decomposition_to_json(dims, factors) -> dict:
    a, b, c = factors
    terms = []
    for k in range(a.shape[1]):
        terms.append({
            "a": [{"re": float(z.real), "im": float(z.imag)} for z in a[:, k]],
            "b": [{"re": float(z.real), "im": float(z.imag)} for z in b[:, k]],
            "c": [{"re": float(z.real), "im": float(z.imag)} for z in c[:, k]],
        })
    return {"dims": list(dims), "exact": False, "terms": terms}
