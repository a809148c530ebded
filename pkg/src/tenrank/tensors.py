"""Dense order-3 tensors over exact scalars.

A Tensor3 stores an unnormalized tripartite state as a flat tuple in
row-major order: the A index is slowest, the C index fastest.  Kronecker
products put the first factor in the high-order digit.  Both conventions
are load-bearing for every builtin state and decomposition, so they are
fixed here and locked by golden tests.

Tensors are immutable values and all operations are pure functions; they
are safe to share freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import InputError, ResourceError
from .scalars import Scalar, ZERO, as_scalar, scalar_from_json, scalar_to_json

#: Hard cap on dense storage; anything larger is handled symbolically
#: through decompositions and never materialized.
ENTRY_CAP = 1 << 21

LEGS = ("A", "B", "C")


class Tensor3:
    """Immutable dense order-3 tensor of exact scalars."""

    __slots__ = ("dims", "entries")

    def __init__(self, dims, entries):
        da, db, dc = dims
        if min(da, db, dc) < 1:
            raise InputError(f"dimensions must be positive, got {dims}")
        total = da * db * dc
        if total > ENTRY_CAP:
            raise ResourceError(
                f"tensor with {total} entries exceeds the dense cap {ENTRY_CAP}"
            )
        entries = tuple(entries)
        if len(entries) != total:
            raise InputError(
                f"entry count {len(entries)} does not match dims {dims}"
            )
        object.__setattr__(self, "dims", (da, db, dc))
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Tensor3 is immutable")

    def _offset(self, a: int, b: int, c: int) -> int:
        _, db, dc = self.dims
        return (a * db + b) * dc + c

    def __getitem__(self, index) -> Scalar:
        a, b, c = index
        da, db, dc = self.dims
        if not (0 <= a < da and 0 <= b < db and 0 <= c < dc):
            raise InputError(f"index {index} out of range for dims {self.dims}")
        return self.entries[self._offset(a, b, c)]

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and self.entries == other.entries

    def __hash__(self):
        return hash((self.dims, self.entries))

    def __add__(self, other):
        if self.dims != other.dims:
            raise InputError(f"dims mismatch: {self.dims} vs {other.dims}")
        return Tensor3(self.dims, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if self.dims != other.dims:
            raise InputError(f"dims mismatch: {self.dims} vs {other.dims}")
        return Tensor3(self.dims, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def scale(self, factor) -> "Tensor3":
        factor = as_scalar(factor)
        return Tensor3(self.dims, tuple(factor * x for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def nonzeros(self):
        """Yield ((a, b, c), value) for every nonzero entry, row-major."""
        da, db, dc = self.dims
        for flat, value in enumerate(self.entries):
            if value:
                a, rest = divmod(flat, db * dc)
                b, c = divmod(rest, dc)
                yield (a, b, c), value

    def nnz(self) -> int:
        return sum(1 for x in self.entries if x)

    def to_numpy(self) -> np.ndarray:
        arr = np.array([complex(x) for x in self.entries], dtype=np.complex128)
        return arr.reshape(self.dims)

    def norm_sq(self) -> Fraction:
        """Exact squared Frobenius norm."""
        total = Fraction(0)
        for x in self.entries:
            if x:
                total += x.abs2()
        return total

    def __repr__(self):
        return f"Tensor3(dims={self.dims}, nnz={self.nnz()})"


def make_tensor(dims, entries) -> Tensor3:
    """Build a dense Tensor3 from a sparse entry list.

    `entries` is a mapping {(a, b, c): value} or an iterable of
    ((a, b, c), value) pairs; values may be Scalars, ints, Fractions or
    "p/q" strings.  Unlisted entries are zero.  Out-of-range or duplicate
    indices raise InputError.
    """
    da, db, dc = dims
    if min(da, db, dc) < 1:
        raise InputError(f"dimensions must be positive, got {dims}")
    total = da * db * dc
    if total > ENTRY_CAP:
        raise ResourceError(
            f"tensor with {total} entries exceeds the dense cap {ENTRY_CAP}"
        )
    flat = [ZERO] * total
    seen = set()
    items = entries.items() if hasattr(entries, "items") else entries
    for index, value in items:
        a, b, c = index
        if not (0 <= a < da and 0 <= b < db and 0 <= c < dc):
            raise InputError(f"index {tuple(index)} out of range for dims {tuple(dims)}")
        if (a, b, c) in seen:
            raise InputError(f"duplicate index {(a, b, c)}")
        seen.add((a, b, c))
        flat[(a * db + b) * dc + c] = as_scalar(value)
    return Tensor3((da, db, dc), flat)


def zero_tensor(dims) -> Tensor3:
    return make_tensor(dims, {})


def tensor_product(t1: Tensor3, t2: Tensor3) -> Tensor3:
    """Leg-wise Kronecker product: dims multiply per leg and
    (x⊗y⊗z)·(u⊗v⊗w) = (x⊗u)⊗(y⊗v)⊗(z⊗w)."""
    da1, db1, dc1 = t1.dims
    da2, db2, dc2 = t2.dims
    dims = (da1 * da2, db1 * db2, dc1 * dc2)
    if dims[0] * dims[1] * dims[2] > ENTRY_CAP:
        raise ResourceError(
            f"product tensor {dims} exceeds the dense cap {ENTRY_CAP}"
        )
    new = {}
    for (a1, b1, c1), v1 in t1.nonzeros():
        for (a2, b2, c2), v2 in t2.nonzeros():
            new[(a1 * da2 + a2, b1 * db2 + b2, c1 * dc2 + c2)] = v1 * v2
    return make_tensor(dims, new)


def tensor_power(t: Tensor3, n: int) -> Tensor3:
    if n < 1:
        raise InputError("tensor_power needs n >= 1")
    out = t
    for _ in range(n - 1):
        out = tensor_product(out, t)
    return out


def flattening(t: Tensor3, leg: str) -> tuple:
    """Matrix obtained by grouping the two legs other than `leg`.

    Row index is the chosen leg; the remaining legs keep their relative
    order in the column index.
    """
    da, db, dc = t.dims
    e = t.entries
    if leg == "A":
        return tuple(
            tuple(e[(a * db + b) * dc + c] for b in range(db) for c in range(dc))
            for a in range(da)
        )
    if leg == "B":
        return tuple(
            tuple(e[(a * db + b) * dc + c] for a in range(da) for c in range(dc))
            for b in range(db)
        )
    if leg == "C":
        return tuple(
            tuple(e[(a * db + b) * dc + c] for a in range(da) for b in range(db))
            for c in range(dc)
        )
    raise InputError(f"unknown leg {leg!r}, expected one of {LEGS}")


def flattening_rank(t: Tensor3, leg: str) -> int:
    """Exact rank of the flattening along `leg`.

    Equals the rank of that subsystem's reduced density operator and is a
    lower bound for tensor rank.  The zero tensor has rank 0.
    """
    return linalg.rank(flattening(t, leg))


def max_flattening_rank(t: Tensor3) -> int:
    return max(flattening_rank(t, leg) for leg in LEGS)


def slice_c(t: Tensor3, c: int) -> tuple:
    """The dA x dB matrix T[:, :, c]."""
    da, db, dc = t.dims
    e = t.entries
    return tuple(
        tuple(e[(a * db + b) * dc + c] for b in range(db)) for a in range(da)
    )


def support_basis(t: Tensor3) -> list:
    """A basis of the span of the c-slices of T, as dA x dB matrices.

    Computed by exact elimination on the vectorized slices; the result has
    exactly flattening_rank(T, "C") elements and spans the same space as
    the support of the two-party reduced state on legs A and B.
    """
    da, db, dc = t.dims
    rows = flattening(t, "C")
    reduced, _ = linalg.rref(rows)
    return [
        tuple(tuple(row[a * db + b] for b in range(db)) for a in range(da))
        for row in reduced
    ]


@dataclass(frozen=True)
class LocalOperatorTriple:
    """One exact matrix per leg; may be non-square (dim-changing)."""

    A: tuple
    B: tuple
    C: tuple

    def input_dims(self) -> tuple[int, int, int]:
        return (
            linalg.shape(self.A)[1],
            linalg.shape(self.B)[1],
            linalg.shape(self.C)[1],
        )

    def output_dims(self) -> tuple[int, int, int]:
        return (
            linalg.shape(self.A)[0],
            linalg.shape(self.B)[0],
            linalg.shape(self.C)[0],
        )

    def is_invertible(self) -> bool:
        for m in (self.A, self.B, self.C):
            r, c = linalg.shape(m)
            if r != c or not linalg.det(m):
                return False
        return True


def identity_triple(dims) -> LocalOperatorTriple:
    da, db, dc = dims
    return LocalOperatorTriple(
        linalg.identity(da), linalg.identity(db), linalg.identity(dc)
    )


def apply_local_operators(ops: LocalOperatorTriple, t: Tensor3) -> Tensor3:
    """Contract (A ⊗ B ⊗ C) against all three legs of T, exactly.

    Iterates the nonzero entries of T against precomputed nonzero operator
    columns, so sparse states transform cheaply even under dense operators.
    """
    if ops.input_dims() != t.dims:
        raise InputError(
            f"operator input dims {ops.input_dims()} do not match tensor dims {t.dims}"
        )
    out_dims = ops.output_dims()
    if out_dims[0] * out_dims[1] * out_dims[2] > ENTRY_CAP:
        raise ResourceError(
            f"output tensor {out_dims} exceeds the dense cap {ENTRY_CAP}"
        )

    def columns(m):
        rows, cols = linalg.shape(m)
        return [
            [(i, m[i][j]) for i in range(rows) if m[i][j]] for j in range(cols)
        ]

    cols_a, cols_b, cols_c = columns(ops.A), columns(ops.B), columns(ops.C)
    _, db_out, dc_out = out_dims
    acc = [ZERO] * (out_dims[0] * db_out * dc_out)
    for (a, b, c), value in t.nonzeros():
        for i, ai in cols_a[a]:
            vai = value * ai
            for j, bj in cols_b[b]:
                vab = vai * bj
                for k, ck in cols_c[c]:
                    idx = (i * db_out + j) * dc_out + k
                    acc[idx] = acc[idx] + vab * ck
    return Tensor3(out_dims, acc)


def contract(t: Tensor3, x, y, z) -> Scalar:
    """Exact full contraction sum_{abc} T[a,b,c] x[a] y[b] z[c]."""
    da, db, dc = t.dims
    if (len(x), len(y), len(z)) != (da, db, dc):
        raise InputError("probe vector lengths do not match tensor dims")
    acc = ZERO
    for (a, b, c), value in t.nonzeros():
        if x[a] and y[b] and z[c]:
            acc = acc + value * x[a] * y[b] * z[c]
    return acc


# -- JSON format --------------------------------------------------------------
#
# {"dims": [dA, dB, dC],
#  "entries": [{"i": [a, b, c], "re": "p/q", "im": "p/q"}, ...]}
#
# Omitted entries are zero; "im" may be omitted when zero; duplicate indices
# are an error.


def tensor_to_json(t: Tensor3) -> dict:
    entries = []
    for (a, b, c), value in t.nonzeros():
        item = {"i": [a, b, c], "re": str(value.re)}
        if value.im:
            item["im"] = str(value.im)
        entries.append(item)
    return {"dims": list(t.dims), "entries": entries}


def tensor_from_json(obj: dict) -> Tensor3:
    try:
        dims = tuple(int(d) for d in obj["dims"])
        raw = obj.get("entries", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed tensor JSON: {exc}") from exc
    if len(dims) != 3:
        raise InputError(f"tensor JSON needs 3 dims, got {obj.get('dims')}")
    entries = []
    for item in raw:
        index = tuple(int(i) for i in item["i"])
        value = scalar_from_json({"re": item.get("re", "0"), "im": item.get("im", "0")})
        entries.append((index, value))
    return make_tensor(dims, entries)


def scalar_json(value: Scalar):
    """Re-export of the scalar encoding used inside vector/matrix payloads."""
    return scalar_to_json(value)
