import json
import random
from fractions import Fraction

import pytest

from conftest import oracle_outer_sum, oracle_rank

from tenrank import linalg, sampling
from tenrank.decomp import builtin_state
from tenrank.errors import InputError, ResourceError
from tenrank.scalars import Scalar
from tenrank.tensors import (
    LocalOperatorTriple,
    apply_local_operators,
    contract,
    flattening,
    flattening_rank,
    identity_triple,
    make_tensor,
    support_basis,
    tensor_from_json,
    tensor_product,
    tensor_to_json,
    zero_tensor,
)


def ghz():
    return make_tensor((2, 2, 2), {(0, 0, 0): 1, (1, 1, 1): 1})


def w_state():
    return make_tensor((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})


# -- construction -------------------------------------------------------------


def test_make_tensor_ghz_and_w_unnormalized():
    g = ghz()
    assert g[(0, 0, 0)] == 1 and g[(1, 1, 1)] == 1 and g.nnz() == 2
    w = w_state()
    assert {idx for idx, _ in w.nonzeros()} == {(0, 0, 1), (0, 1, 0), (1, 0, 0)}
    assert all(v == 1 for _, v in w.nonzeros())


def test_make_tensor_zero_and_errors():
    assert zero_tensor((2, 2, 2)).is_zero()
    with pytest.raises(InputError):
        make_tensor((2, 2, 2), {(0, 0, 2): 1})
    with pytest.raises(InputError):
        make_tensor((2, 2, 2), [((0, 0, 0), 1), ((0, 0, 0), 2)])
    with pytest.raises(InputError):
        make_tensor((0, 2, 2), {})


def test_entry_cap():
    with pytest.raises(ResourceError):
        zero_tensor((129, 129, 129))  # 129^3 > 2^21


# -- tensor product -----------------------------------------------------------


def test_product_ghz_ghz_is_diagonal():
    p = tensor_product(ghz(), ghz())
    assert p.dims == (4, 4, 4)
    assert {idx for idx, _ in p.nonzeros()} == {(i, i, i) for i in range(4)}
    assert all(v == 1 for _, v in p.nonzeros())


def test_product_w_w_slice_structure():
    p = tensor_product(w_state(), w_state())
    # first c-slice carries the four unit entries at AB pairs
    # (3,0), (2,1), (1,2), (0,3); the last slice a single entry at (0,0)
    by_slice = {}
    for (a, b, c), v in p.nonzeros():
        assert v == 1
        by_slice.setdefault(c, set()).add((a, b))
    assert by_slice[0] == {(3, 0), (2, 1), (1, 2), (0, 3)}
    assert by_slice[1] == {(2, 0), (0, 2)}
    assert by_slice[2] == {(1, 0), (0, 1)}
    assert by_slice[3] == {(0, 0)}
    assert p.nnz() == 9


def test_product_with_unit_tensor_is_identity():
    unit = make_tensor((1, 1, 1), {(0, 0, 0): 1})
    w = w_state()
    assert tensor_product(w, unit) == w
    assert tensor_product(unit, w) == w


def test_product_kron_index_convention():
    # first factor is the high-order digit on every leg
    t1 = make_tensor((2, 1, 1), {(1, 0, 0): 1})
    t2 = make_tensor((3, 1, 1), {(2, 0, 0): 1})
    p = tensor_product(t1, t2)
    assert [idx for idx, _ in p.nonzeros()] == [(1 * 3 + 2, 0, 0)]


# -- flattenings --------------------------------------------------------------


def test_flattening_rank_examples():
    assert all(flattening_rank(ghz(), leg) == 2 for leg in "ABC")
    single = make_tensor((2, 2, 2), {(0, 0, 0): 1})
    assert all(flattening_rank(single, leg) == 1 for leg in "ABC")
    assert all(flattening_rank(zero_tensor((2, 2, 2)), leg) == 0 for leg in "ABC")


def test_phi3_flattening_rank_4_against_oracle():
    phi3 = builtin_state("PHI3")
    for leg in "ABC":
        flat = flattening(phi3, leg)
        assert oracle_rank(flat) == 4
        assert flattening_rank(phi3, leg) == 4


def test_flattening_rank_bounds_and_invariance():
    rng = random.Random(17)
    for _ in range(25):
        dims = (rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3))
        t = make_tensor(dims, {})
        entries = {}
        for _ in range(rng.randint(0, 8)):
            idx = tuple(rng.randrange(d) for d in dims)
            entries[idx] = sampling.scalar(rng, max_num=3, max_den=2)
        t = make_tensor(dims, entries)
        da, db, dc = dims
        bounds = {"A": min(da, db * dc), "B": min(db, da * dc), "C": min(dc, da * db)}
        ranks = {leg: flattening_rank(t, leg) for leg in "ABC"}
        for leg in "ABC":
            assert ranks[leg] <= bounds[leg]
            assert ranks[leg] == oracle_rank(flattening(t, leg))
        ops = LocalOperatorTriple(
            sampling.invertible_matrix(rng, da, max_num=3, max_den=2),
            sampling.invertible_matrix(rng, db, max_num=3, max_den=2),
            sampling.invertible_matrix(rng, dc, max_num=3, max_den=2),
        )
        transformed = apply_local_operators(ops, t)
        assert {leg: flattening_rank(transformed, leg) for leg in "ABC"} == ranks


def test_flattening_rank_multiplicative_under_products():
    rng = random.Random(23)
    for _ in range(10):
        def rand_tensor():
            dims = (rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2))
            entries = {
                tuple(rng.randrange(d) for d in dims): sampling.scalar(rng, max_num=2)
                for _ in range(rng.randint(1, 5))
            }
            return make_tensor(dims, entries)

        t1, t2 = rand_tensor(), rand_tensor()
        p = tensor_product(t1, t2)
        for leg in "ABC":
            expected = flattening_rank(t1, leg) * flattening_rank(t2, leg)
            assert flattening_rank(p, leg) == expected
            assert oracle_rank(flattening(p, leg)) == expected


# -- local operators ----------------------------------------------------------


def test_apply_identity_and_projector():
    w = w_state()
    assert apply_local_operators(identity_triple(w.dims), w) == w
    proj = linalg.matrix([[1, 0], [0, 0]])
    ops = LocalOperatorTriple(proj, proj, proj)
    assert apply_local_operators(ops, ghz()) == make_tensor((2, 2, 2), {(0, 0, 0): 1})


def test_apply_random_triple_to_ghz_matches_expansion_oracle():
    # (A x B x C) GHZ = a0 x b0 x c0 + a1 x b1 x c1 with operator columns
    rng = random.Random(31)
    for _ in range(10):
        a = sampling.matrix(rng, 2, 2, complex_parts=True, max_num=3, max_den=2)
        b = sampling.matrix(rng, 2, 2, complex_parts=True, max_num=3, max_den=2)
        c = sampling.matrix(rng, 2, 2, complex_parts=True, max_num=3, max_den=2)
        got = apply_local_operators(LocalOperatorTriple(a, b, c), ghz())
        cols = lambda m, j: tuple(m[i][j] for i in range(len(m)))  # noqa: E731
        expected = oracle_outer_sum(
            (2, 2, 2),
            [(cols(a, i), cols(b, i), cols(c, i)) for i in range(2)],
        )
        assert dict(got.nonzeros()) == expected


def test_apply_is_linear_in_the_tensor():
    rng = random.Random(37)
    dims = (2, 2, 2)
    ops = LocalOperatorTriple(
        sampling.matrix(rng, 3, 2), sampling.matrix(rng, 2, 2), sampling.matrix(rng, 2, 2)
    )
    t1 = make_tensor(dims, {(0, 1, 0): Scalar(Fraction(1, 3)), (1, 1, 1): 2})
    t2 = make_tensor(dims, {(0, 0, 0): 5, (1, 1, 1): Scalar(0, 1)})
    lhs = apply_local_operators(ops, t1 + t2)
    rhs = apply_local_operators(ops, t1) + apply_local_operators(ops, t2)
    assert lhs == rhs


def test_apply_non_square_changes_dims():
    embed = linalg.matrix([[1, 0], [0, 1], [0, 0]])
    ops = LocalOperatorTriple(embed, linalg.identity(2), linalg.identity(2))
    out = apply_local_operators(ops, ghz())
    assert out.dims == (3, 2, 2)
    assert out[(1, 1, 1)] == 1 and out[(2, 1, 1)] == 0


def test_apply_dimension_mismatch():
    with pytest.raises(InputError):
        apply_local_operators(identity_triple((3, 2, 2)), ghz())


# -- support basis ------------------------------------------------------------


def span_equal(basis1, basis2):
    rows1 = [tuple(x for row in m for x in row) for m in basis1]
    rows2 = [tuple(x for row in m for x in row) for m in basis2]
    if len(rows1) != len(rows2):
        return False
    return all(linalg.in_span(rows1, r) for r in rows2) and all(
        linalg.in_span(rows2, r) for r in rows1
    )


def test_support_basis_examples():
    g_basis = support_basis(ghz())
    assert span_equal(g_basis, [linalg.matrix([[1, 0], [0, 0]]),
                                linalg.matrix([[0, 0], [0, 1]])])
    w_basis = support_basis(w_state())
    assert len(w_basis) == 2
    assert span_equal(w_basis, [linalg.matrix([[0, 1], [1, 0]]),
                                linalg.matrix([[1, 0], [0, 0]])])
    assert support_basis(zero_tensor((2, 2, 2))) == []


def test_support_basis_size_and_membership_property():
    rng = random.Random(41)
    for _ in range(20):
        dims = (rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 4))
        entries = {
            tuple(rng.randrange(d) for d in dims): sampling.scalar(rng, max_num=3)
            for _ in range(rng.randint(0, 9))
        }
        t = make_tensor(dims, entries)
        basis = support_basis(t)
        assert len(basis) == flattening_rank(t, "C")
        rows = [tuple(x for row in m for x in row) for m in basis]
        from tenrank.tensors import slice_c

        for c in range(dims[2]):
            vec = tuple(x for row in slice_c(t, c) for x in row)
            if any(vec):
                assert linalg.in_span(rows, vec)


# -- contraction --------------------------------------------------------------


def test_contract_matches_direct_sum():
    rng = random.Random(43)
    t = make_tensor((2, 3, 2), {(0, 1, 0): 2, (1, 2, 1): Scalar(1, 1)})
    x = sampling.vector(rng, 2)
    y = sampling.vector(rng, 3)
    z = sampling.vector(rng, 2)
    expected = Scalar(2) * x[0] * y[1] * z[0] + Scalar(1, 1) * x[1] * y[2] * z[1]
    assert contract(t, x, y, z) == expected
    with pytest.raises(InputError):
        contract(t, x, x, z)


# -- JSON ---------------------------------------------------------------------


def test_tensor_json_round_trip():
    t = make_tensor((2, 2, 2), {(0, 0, 1): Scalar(Fraction(1, 2), Fraction(-2, 3)),
                                (1, 1, 1): 3})
    payload = tensor_to_json(t)
    assert payload["dims"] == [2, 2, 2]
    again = tensor_from_json(json.loads(json.dumps(payload)))
    assert again == t


def test_tensor_json_omits_zero_im_and_rejects_duplicates():
    t = make_tensor((2, 2, 2), {(0, 0, 0): 1})
    payload = tensor_to_json(t)
    assert payload["entries"] == [{"i": [0, 0, 0], "re": "1"}]
    bad = {"dims": [2, 2, 2], "entries": [
        {"i": [0, 0, 0], "re": "1"}, {"i": [0, 0, 0], "re": "2"}]}
    with pytest.raises(InputError):
        tensor_from_json(bad)
    with pytest.raises(InputError):
        tensor_from_json({"dims": [2, 2], "entries": []})
