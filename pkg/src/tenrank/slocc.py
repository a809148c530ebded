"""Stochastic local transformation logic.

Converting a level-N GHZ state into a target by local filtering succeeds
with nonzero probability exactly when the target admits a decomposition
with at most N terms.  From any such witness this module assembles the
one-operator-per-party protocol (each operator completed to a valid
measurement by scaling its largest singular value to one), simulates it,
decides convertibility where the bounds are decisive, and classifies
three-qubit states into their six local-equivalence classes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .als import AlsConfig
from .bilinear import phi3_matmul_witness
from .decomp import (
    DEFAULT_RANK_FACTS,
    ProductDecomposition,
    RankFacts,
    als_search,
    ghz_decomposition,
    rationalize_result,
    reconstruct,
    strassen7_decomposition,
    transport,
    verify_decomposition,
    w_rank3_decomposition,
)
from .errors import InputError, ResourceError
from .scalars import ZERO
from .tensors import (
    LocalOperatorTriple,
    Tensor3,
    flattening_rank,
    max_flattening_rank,
)

#: dense protocol operators are only assembled up to this GHZ level
PROTOCOL_DIM_CAP = 1 << 14


# ---------------------------------------------------------------------------
# Protocol construction and simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SloccProtocol:
    """One local filtering operator per party, scaled to measurement form.

    `ops` are complex float matrices with largest singular value 1, so
    each party can complete its operator M to the two-outcome measurement
    {M, sqrt(I - M^dag M)}.  `exact_ops` keeps the unscaled exact
    operators: applying those to the level-N GHZ state reproduces the
    target exactly, which is what certifies the success probability is
    nonzero before any floats enter.
    """

    ops: tuple            # three complex128 ndarrays, scaled
    exact_ops: LocalOperatorTriple
    scales: tuple         # the three largest singular values divided out
    source_dim: int
    success_probability: float
    target: Tensor3

    def input_dims(self) -> tuple:
        return (self.source_dim,) * 3


def _operator_from_vectors(vectors, dim_out: int, n: int) -> tuple:
    cols = list(vectors) + [(ZERO,) * dim_out] * (n - len(vectors))
    return tuple(tuple(col[i] for col in cols) for i in range(dim_out))


def build_protocol(d: ProductDecomposition, n: int,
                   target: Tensor3 | None = None) -> SloccProtocol:
    """Assemble the GHZ(n) -> target protocol from an r-term witness.

    The exact operator for leg A sends GHZ basis vector i to the witness's
    i-th a-vector for i < r and to zero for r <= i < n (likewise B and C),
    so the unscaled triple maps GHZ(n) to the target exactly.  Operators
    are then scaled by their largest singular values for the measurement
    form; the reported success probability refers to the all-parties-
    succeed branch on the GHZ(n) source.
    """
    r = len(d.terms)
    if n < r:
        raise InputError(f"GHZ level count {n} is below the witness term count {r}")
    if n > PROTOCOL_DIM_CAP:
        raise ResourceError(f"GHZ level count {n} exceeds the dense protocol cap "
                            f"{PROTOCOL_DIM_CAP}")
    if target is None:
        target = reconstruct(d)
    else:
        result = verify_decomposition(target, d)
        if not result.ok:
            raise InputError(f"witness does not reconstruct the target "
                             f"(first mismatch at {result.first_mismatch})")
    if target.is_zero():
        raise InputError("witness reconstructs the zero tensor; no protocol exists")

    da, db, dc = d.dims
    exact_ops = LocalOperatorTriple(
        _operator_from_vectors([t.a for t in d.terms], da, n),
        _operator_from_vectors([t.b for t in d.terms], db, n),
        _operator_from_vectors([t.c for t in d.terms], dc, n),
    )
    float_ops = []
    scales = []
    for m in (exact_ops.A, exact_ops.B, exact_ops.C):
        arr = np.array([[complex(x) for x in row] for row in m], dtype=np.complex128)
        sigma = float(np.linalg.svd(arr, compute_uv=False)[0])
        float_ops.append(arr / sigma)
        scales.append(sigma)
    # (A x B x C) GHZ(n) equals the target exactly, so after scaling the
    # outcome is target / (sA sB sC) and the probability follows directly.
    norm_sq_target = float(target.norm_sq())
    scale_sq = (scales[0] * scales[1] * scales[2]) ** 2
    probability = norm_sq_target / scale_sq / n
    return SloccProtocol(
        ops=tuple(float_ops),
        exact_ops=exact_ops,
        scales=tuple(scales),
        source_dim=n,
        success_probability=probability,
        target=target,
    )


def apply_float_ops(ops, source: np.ndarray) -> np.ndarray:
    a, b, c = ops
    out = np.tensordot(a, source, axes=(1, 0))
    out = np.moveaxis(np.tensordot(b, out, axes=(1, 1)), 1, 0)
    out = np.moveaxis(np.tensordot(c, out, axes=(1, 2)), 0, 2)
    return out


def simulate(p: SloccProtocol, source: Tensor3) -> tuple:
    """Apply the scaled protocol operators to a source state.

    Returns (outcome, probability) where outcome is the float tensor after
    all three parties succeed and probability = |outcome|^2 / |source|^2.
    For source = GHZ(source_dim) the outcome direction matches the
    protocol's target within float accuracy.
    """
    if source.dims != p.input_dims():
        raise InputError(f"source dims {source.dims} do not match protocol input "
                         f"{p.input_dims()}")
    src = source.to_numpy()
    outcome = apply_float_ops(p.ops, src)
    norm_src = float(np.linalg.norm(src))
    if norm_src == 0.0:
        raise InputError("source tensor is zero")
    probability = float(np.linalg.norm(outcome) ** 2 / norm_src ** 2)
    return outcome, probability


def direction_deviation(x: np.ndarray, y: np.ndarray) -> float:
    """Phase-insensitive relative deviation between the directions of two
    nonzero arrays: || x/|x| - e^{i t} y/|y| || minimized over the phase."""
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise InputError("direction of a zero array is undefined")
    xn, yn = x / nx, y / ny
    overlap = np.vdot(yn, xn)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(xn - phase * yn))


# ---------------------------------------------------------------------------
# Convertibility decisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvertVerdict:
    """Outcome of a GHZ(N) -> target decision.

    yes      carries an exact witness with at most N terms
    no       carries a lower-bound certificate exceeding N
    unknown  reports the best bounds established either way
    """

    kind: str  # "yes" | "no" | "unknown"
    witness: ProductDecomposition | None = None
    reason: str | None = None
    lower_bound: int | None = None
    upper_bound: int | None = None


def _builtin_witness(target: Tensor3, name: str) -> ProductDecomposition | None:
    if name.startswith("GHZ"):
        return ghz_decomposition(target.dims[0])
    if name == "W":
        return w_rank3_decomposition()
    if name == "PHI3":
        return transport(phi3_matmul_witness(), strassen7_decomposition())
    return None


def decide_ghz_conversion(target: Tensor3, n: int,
                          witness: ProductDecomposition | None = None,
                          rank_facts: RankFacts = DEFAULT_RANK_FACTS,
                          search: bool = True,
                          als_cfg: AlsConfig | None = None) -> ConvertVerdict:
    """Decide GHZ(n) -> target convertibility where decidable.

    Yes requires an exact witness with at most n terms (caller-provided,
    builtin, or found numerically and rationalized); No requires a lower
    bound above n from flattening ranks or the registered exact ranks.
    Anything else is Unknown with both bounds reported.
    """
    if n < 1:
        raise InputError("GHZ level count must be positive")
    upper = None
    if witness is not None:
        result = verify_decomposition(target, witness)
        if not result.ok:
            raise InputError(f"witness does not reconstruct the target "
                             f"(first mismatch at {result.first_mismatch})")
        upper = len(witness.terms)
        if upper <= n:
            return ConvertVerdict("yes", witness=witness, upper_bound=upper,
                                  lower_bound=None)

    lower = max_flattening_rank(target)
    if lower > n:
        return ConvertVerdict(
            "no",
            reason=f"flattening rank {lower} > {n}",
            lower_bound=lower,
            upper_bound=upper,
        )
    fact_hit = rank_facts.lookup(target)
    if fact_hit is not None:
        name, fact = fact_hit
        lower = max(lower, fact.rank)
        if fact.rank > n:
            return ConvertVerdict(
                "no",
                reason=f"registered exact rank of {name} is {fact.rank} > {n} ({fact.note})",
                lower_bound=fact.rank,
                upper_bound=upper,
            )
        builtin = _builtin_witness(target, name)
        if builtin is not None and len(builtin.terms) <= n:
            assert verify_decomposition(target, builtin).ok
            return ConvertVerdict("yes", witness=builtin,
                                  upper_bound=len(builtin.terms), lower_bound=fact.rank)

    if search:
        found = als_search(target, n, als_cfg)
        if found.found:
            exact = rationalize_result(target, found)
            if exact is not None and len(exact.terms) <= n:
                return ConvertVerdict("yes", witness=exact,
                                      upper_bound=len(exact.terms), lower_bound=lower)
    return ConvertVerdict("unknown", lower_bound=lower, upper_bound=upper)


def bipartite_convertible(source: Tensor3, target: Tensor3) -> bool:
    """Single-copy stochastic convertibility for bipartite states (encoded
    as tensors with dC = 1): possible exactly when the source's local rank
    is at least the target's."""
    if source.dims[2] != 1 or target.dims[2] != 1:
        raise InputError("bipartite states must have dC = 1")
    return flattening_rank(source, "A") >= flattening_rank(target, "A")


# ---------------------------------------------------------------------------
# Three-qubit classification
# ---------------------------------------------------------------------------


class ThreeQubitClass(enum.Enum):
    ZERO = "zero"
    PRODUCT = "product"
    BISEP_A_BC = "bisep_a_bc"
    BISEP_B_AC = "bisep_b_ac"
    BISEP_C_AB = "bisep_c_ab"
    W = "w"
    GHZ = "ghz"


def hyperdeterminant_2x2x2(t: Tensor3):
    """Cayley's degree-4 invariant of a 2x2x2 tensor, evaluated exactly.

    Nonzero exactly on the GHZ class; vanishes on W and on all degenerate
    classes.  Invariant (up to determinant factors) under invertible local
    operators, which makes the GHZ/W split a local-equivalence invariant.
    """
    if t.dims != (2, 2, 2):
        raise InputError(f"hyperdeterminant needs dims (2, 2, 2), got {t.dims}")

    def e(a, b, c):
        return t[(a, b, c)]

    t000, t001, t010, t011 = e(0, 0, 0), e(0, 0, 1), e(0, 1, 0), e(0, 1, 1)
    t100, t101, t110, t111 = e(1, 0, 0), e(1, 0, 1), e(1, 1, 0), e(1, 1, 1)
    squares = (t000 * t000 * t111 * t111 + t001 * t001 * t110 * t110
               + t010 * t010 * t101 * t101 + t100 * t100 * t011 * t011)
    pairs = (t000 * t001 * t110 * t111 + t000 * t010 * t101 * t111
             + t000 * t011 * t100 * t111 + t001 * t010 * t101 * t110
             + t001 * t011 * t100 * t110 + t010 * t011 * t100 * t101)
    quads = t000 * t011 * t101 * t110 + t001 * t010 * t100 * t111
    return squares - 2 * pairs + 4 * quads


def classify_three_qubit(t: Tensor3) -> ThreeQubitClass:
    """Exact classification of an (unnormalized) three-qubit state into
    the six local-equivalence classes, with Zero as a degenerate label.

    Flattening ranks separate the degenerate classes; the genuinely
    tripartite states split into GHZ (hyperdeterminant nonzero) and W
    (hyperdeterminant zero), all decided over exact arithmetic.
    """
    if t.dims != (2, 2, 2):
        raise InputError(f"classification needs dims (2, 2, 2), got {t.dims}")
    if t.is_zero():
        return ThreeQubitClass.ZERO
    ranks = {leg: flattening_rank(t, leg) for leg in ("A", "B", "C")}
    low = [leg for leg, r in ranks.items() if r == 1]
    if len(low) == 3:
        return ThreeQubitClass.PRODUCT
    if len(low) == 1:
        return {
            "A": ThreeQubitClass.BISEP_A_BC,
            "B": ThreeQubitClass.BISEP_B_AC,
            "C": ThreeQubitClass.BISEP_C_AB,
        }[low[0]]
    # two legs of rank 1 force the third to 1 as well
    assert not low
    return ThreeQubitClass.GHZ if hyperdeterminant_2x2x2(t) else ThreeQubitClass.W


# ---------------------------------------------------------------------------
# Rank-based entanglement bounds
# ---------------------------------------------------------------------------


def schmidt_measure_bounds(t: Tensor3,
                           witness: ProductDecomposition | None = None,
                           rank_facts: RankFacts = DEFAULT_RANK_FACTS) -> tuple:
    """(lower, upper) bounds on log2 of the tensor rank.

    The lower bound uses the best of the flattening ranks and any
    registered exact rank; the upper bound is log2 of the witness term
    count when a witness is given (None otherwise).
    """
    lower_rank = max_flattening_rank(t)
    fact_hit = rank_facts.lookup(t)
    if fact_hit is not None:
        lower_rank = max(lower_rank, fact_hit[1].rank)
    upper = None
    if witness is not None:
        result = verify_decomposition(t, witness)
        if not result.ok:
            raise InputError(f"witness does not reconstruct the target "
                             f"(first mismatch at {result.first_mismatch})")
        upper = math.log2(len(witness.terms))
    lower = math.log2(lower_rank) if lower_rank > 0 else 0.0
    return (lower, upper)


# ---------------------------------------------------------------------------
# JSON formats
# ---------------------------------------------------------------------------


def _float_matrix_json(arr: np.ndarray) -> dict:
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "data": [
            [{"re": float(z.real), "im": float(z.imag)} for z in row]
            for row in arr
        ],
    }


def protocol_to_json(p: SloccProtocol) -> dict:
    return {
        "operators": {
            "A": _float_matrix_json(p.ops[0]),
            "B": _float_matrix_json(p.ops[1]),
            "C": _float_matrix_json(p.ops[2]),
        },
        "exact": False,
        "source_dim": p.source_dim,
        "success_probability": p.success_probability,
    }


def verdict_to_json(v: ConvertVerdict) -> dict:
    from .decomp import decomposition_to_json

    witness = None
    if v.witness is not None and len(v.witness.terms) <= 4096:
        witness = decomposition_to_json(v.witness)
    return {
        "verdict": v.kind,
        "witness": witness,
        "reason": v.reason,
        "lower_bound": v.lower_bound,
        "upper_bound": v.upper_bound,
    }
