"""Exact fusion, dimension, Smith form and resolution checks."""

import random

import pytest
from hypothesis import given, strategies as st

from suq2kit.kring import (FusionElement, ZtPoly, dim_classical, dim_quantum,
                           fuse, fusion_closed_form, int_det, koszul_matrix,
                           koszul_verify, ktheory_fo, smith_normal_form, _matmul)


# ---------------------------------------------------------------------------
# fusion
# ---------------------------------------------------------------------------

def test_fuse_with_trivial_and_generator():
    for k in range(8):
        assert fuse(k, 0) == FusionElement.irreducible(k)
        expected = {k + 1: 1} if k == 0 else {k - 1: 1, k + 1: 1}
        assert fuse(k, 1).as_dict() == expected


def test_fuse_two_two():
    assert fuse(2, 2).as_dict() == {0: 1, 2: 1, 4: 1}


def test_fuse_matches_closed_form_brute():
    for k in range(9):
        for m in range(9):
            assert fuse(k, m) == fusion_closed_form(k, m)
            assert fuse(k, m).is_actual_representation()


def test_fusion_commutative_and_associative():
    def prod(x: FusionElement, y: FusionElement) -> FusionElement:
        out = {}
        for k, vk in x.coefficients:
            for m, vm in y.coefficients:
                for j, vj in fuse(k, m).coefficients:
                    out[j] = out.get(j, 0) + vk * vm * vj
        return FusionElement.from_dict(out)

    for a in range(6):
        for b in range(6):
            assert fuse(a, b) == fuse(b, a)
            for c in range(6):
                ia, ib, ic = map(FusionElement.irreducible, (a, b, c))
                assert prod(prod(ia, ib), ic) == prod(ia, prod(ib, ic))


def test_fusion_element_validation():
    with pytest.raises(ValueError):
        FusionElement.from_dict({-1: 1})
    with pytest.raises(ValueError):
        fuse(-1, 2)


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------

def test_classical_dimensions_n3():
    assert [dim_classical(3, k) for k in range(4)] == [1, 3, 8, 21]


def test_classical_dimension_exactness_at_large_label():
    # growth like n^k; must stay exact far beyond 64-bit range
    value = dim_classical(10, 60)
    assert value > 10**55
    assert dim_classical(10, 61) == 10 * value - dim_classical(10, 59)


@pytest.mark.parametrize("n", (3, 4, 5))
def test_dimension_is_ring_homomorphism(n):
    for k in range(11):
        for m in range(11):
            lhs = dim_classical(n, k) * dim_classical(n, m)
            rhs = sum(v * dim_classical(n, j) for j, v in fuse(k, m).coefficients)
            assert lhs == rhs


def test_quantum_dimension_values_and_multiplicativity():
    assert dim_quantum(0.5, 0) == 1.0
    assert dim_quantum(0.5, 1) == pytest.approx(2.5, abs=1e-14)
    q = -0.7
    assert abs(dim_quantum(q, 1) ** 2 - (dim_quantum(q, 0) + dim_quantum(q, 2))) < 1e-12
    for k in range(9):
        for m in range(9):
            lhs = dim_quantum(q, k) * dim_quantum(q, m)
            rhs = sum(v * dim_quantum(q, j) for j, v in fuse(k, m).coefficients)
            assert lhs == pytest.approx(rhs, abs=1e-10)


# ---------------------------------------------------------------------------
# Z[t] polynomials
# ---------------------------------------------------------------------------

def test_ztpoly_arithmetic():
    p = ZtPoly.of((3, -1))       # 3 - t
    t = ZtPoly.t()
    assert (p * t).coeffs == (0, 3, -1)
    assert p(3) == 0
    assert (p + t).coeffs == (3,)
    assert p.degree == 1


@given(st.lists(st.integers(-50, 50), max_size=5),
       st.lists(st.integers(-50, 50), max_size=5),
       st.integers(-20, 20))
def test_ztpoly_multiplication_evaluates(a, b, x):
    pa, pb = ZtPoly.of(a), ZtPoly.of(b)
    assert (pa * pb)(x) == pa(x) * pb(x)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def test_snf_identity():
    _, d, _ = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert d == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_snf_hand_cases():
    _, d, _ = smith_normal_form([[2, 4], [6, 8]])
    assert [d[0][0], d[1][1]] == [2, 4]
    _, d, _ = smith_normal_form([[2], [-1]])
    assert d[0][0] == 1


def test_snf_random_certificates():
    rng = random.Random(7)
    for _ in range(200):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        a = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        u, d, v = smith_normal_form(a)
        assert _matmul(_matmul(u, a), v) == d
        assert abs(int_det(u)) == 1
        assert abs(int_det(v)) == 1
        diag = [d[i][i] for i in range(min(rows, cols))]
        for x, y in zip(diag, diag[1:]):
            if x == 0:
                assert y == 0
            else:
                assert y % x == 0
        assert all(x >= 0 for x in diag)
        for i in range(rows):
            for j in range(cols):
                if i != j:
                    assert d[i][j] == 0


def test_int_det_known_values():
    assert int_det([[2, 0], [0, 3]]) == 6
    assert int_det([[0, 1], [1, 0]]) == -1
    assert int_det([[1, 2], [2, 4]]) == 0


# ---------------------------------------------------------------------------
# the resolution and K-groups
# ---------------------------------------------------------------------------

def test_koszul_matrix_shape():
    m = koszul_matrix(3, 4)
    assert len(m) == 5 and len(m[0]) == 4
    assert m[0][0] == 3 and m[1][0] == -1 and m[2][0] == 0


def test_koszul_hand_case_n2_degree1():
    rep = koszul_verify(2, 1)
    assert rep["pass"]
    assert rep["kernel_rank"] == 0
    assert rep["cokernel_free_rank"] == 1
    assert rep["cokernel_torsion"] == []


@pytest.mark.parametrize("n", (2, 3, 7, 10))
def test_koszul_passes_several_truncations(n):
    for d in (1, 3, 10, 25):
        assert koszul_verify(n, d)["pass"]


def test_koszul_rejects_bad_input():
    with pytest.raises(ValueError):
        koszul_verify(1, 5)
    with pytest.raises(ValueError):
        koszul_verify(3, 0)


def test_ktheory_groups_and_generators():
    for n in (3, 5):
        groups = ktheory_fo(n)
        d = groups.as_dict()
        assert d["K0"] == {"rank": 1, "torsion": [], "generator": "[1]"}
        assert d["K1"] == {"rank": 1, "torsion": [], "generator": "[u]"}
        assert groups.certificate["pass"]


def test_induced_endomorphism_vanishes_for_every_n():
    for n in range(2, 12):
        assert ZtPoly.of((n, -1))(n) == 0
