from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bqsos.fields import (
    BadCongruence,
    BiquadraticField,
    Element,
    EqualGenerators,
    ForeignRadical,
    NotSquarefree,
    OutOfRange,
    FieldMismatch,
    QuadraticField,
    QuadraticOrderDescriptor,
    SquareN,
    classify_field,
    is_squarefree,
    quad_sign,
    squarefree_part,
)


def det4(cols):
    rows = [[Fraction(cols[j][i]) for j in range(4)] for i in range(4)]
    det = Fraction(1)
    for k in range(4):
        piv = next((r for r in range(k, 4) if rows[r][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        det *= rows[k][k]
        for r in range(k + 1, 4):
            factor = rows[r][k] / rows[k][k]
            for c in range(k, 4):
                rows[r][c] -= factor * rows[k][c]
    return det


class TestSquarefree:
    def test_is_squarefree(self):
        assert is_squarefree(1)
        assert is_squarefree(30)
        assert not is_squarefree(4)
        assert not is_squarefree(18)

    def test_squarefree_part(self):
        assert squarefree_part(8) == (2, 2)
        assert squarefree_part(9) == (3, 1)
        assert squarefree_part(6) == (1, 6)

    @given(st.integers(1, 10_000))
    def test_squarefree_part_reconstructs(self, k):
        f, k0 = squarefree_part(k)
        assert f * f * k0 == k
        assert is_squarefree(k0)


class TestClassify:
    def test_b1(self):
        f = classify_field(2, 3)
        assert (f.m, f.s, f.t) == (2, 3, 6)
        assert f.basis_type == "B1"
        assert f.roles == (2, 3, 6)

    def test_b2(self):
        f = classify_field(10, 17)
        assert f.basis_type == "B2"
        assert f.roles == (10, 17, 170)

    def test_b3(self):
        f = classify_field(17, 19)
        assert f.basis_type == "B3"
        assert f.roles == (19, 17, 323)

    def test_b4(self):
        f = classify_field(5, 13)
        assert f.basis_type == "B4a"
        assert (f.m0, f.s0, f.t0) == (13, 5, 1)
        g = classify_field(17, 21)
        assert g.basis_type in ("B4a", "B4b")

    def test_shared_factor(self):
        f = classify_field(6, 15)
        assert (f.m, f.s, f.t) == (6, 10, 15)

    def test_generator_order_irrelevant(self):
        a, b = classify_field(3, 2), classify_field(2, 3)
        assert a.radicands == b.radicands and a.basis_type == b.basis_type

    def test_gcd_identities(self):
        for p, q in [(2, 3), (6, 15), (17, 21), (10, 13), (30, 42)]:
            f = classify_field(p, q)
            assert f.m == f.s0 * f.t0
            assert f.s == f.m0 * f.t0
            assert f.t == f.m0 * f.s0

    def test_errors(self):
        with pytest.raises(NotSquarefree):
            classify_field(4, 5)
        with pytest.raises(EqualGenerators):
            classify_field(7, 7)
        with pytest.raises(OutOfRange):
            classify_field(1, 5)

    def test_basis_matrix_determinant(self):
        # index of Z[sqrt(m), sqrt(s)] in the maximal order per basis type
        expected = {"B1": Fraction(1, 2), "B2": Fraction(1, 4),
                    "B3": Fraction(1, 4), "B4a": Fraction(1, 16),
                    "B4b": Fraction(1, 16)}
        for p, q in [(2, 3), (10, 17), (17, 19), (5, 13), (17, 21), (3, 7)]:
            f = classify_field(p, q)
            assert abs(det4(f.basis_matrix())) == expected[f.basis_type]


class TestSigns:
    @given(st.integers(-50, 50), st.integers(-50, 50),
           st.sampled_from([2, 3, 5, 7, 11, 13]))
    def test_quad_sign_matches_float(self, a, b, n):
        value = a + b * n ** 0.5
        if abs(value) > 1e-6:
            assert quad_sign(a, b, n) == (1 if value > 0 else -1)

    def test_embedding_signs_of_square(self):
        f = classify_field(2, 3)
        x = f.element((1, 3, -2, 1), 2)
        sq = x * x
        for i in range(4):
            assert sq.sign_at_embedding(i) >= 0


class TestElement:
    def test_known_square(self):
        f = classify_field(2, 3)
        x = (f.sqrt_of(2) + f.sqrt_of(6)) / 2
        assert x * x == 2 + f.sqrt_of(3)

    def test_normalization(self):
        f = classify_field(2, 3)
        assert Element.make(f, (2, 4, 0, 0), 2) == Element.make(f, (1, 2, 0, 0), 1)

    def test_sqrt_reduction(self):
        f = classify_field(2, 3)
        assert f.sqrt_of(8) == 2 * f.sqrt_of(2)
        assert f.sqrt_of(9) == f.from_rational(3)
        assert f.sqrt_of(24) == 2 * f.sqrt_of(6)
        with pytest.raises(ForeignRadical):
            f.sqrt_of(5)

    def test_mixed_fields_rejected(self):
        with pytest.raises(FieldMismatch):
            classify_field(2, 3).one() + classify_field(2, 5).one()

    def test_abs_trace(self):
        f = classify_field(2, 3)
        x = f.element((7, 3, 0, 1), 2)
        assert x.abs_trace() == Fraction(7, 2)
        assert sum(c.coords()[0] for c in x.conjugates()) == 4 * x.abs_trace()

    @given(st.tuples(*[st.integers(-9, 9)] * 4), st.integers(1, 4))
    def test_abs_trace_of_square(self, num, den):
        f = classify_field(5, 13)
        x = Element.make(f, num, den)
        assert x.abs_trace_of_square() == (x * x).abs_trace()

    def test_total_positivity(self):
        f = classify_field(2, 3)
        assert (3 + f.sqrt_of(2)).is_totally_positive()
        assert not (1 + f.sqrt_of(2)).is_totally_nonnegative()
        assert f.zero().is_totally_nonnegative()
        assert not f.zero().is_totally_positive()

    def test_dominates(self):
        f = classify_field(2, 3)
        alpha = 6 + f.sqrt_of(2) + f.sqrt_of(6)
        assert alpha.dominates(f.one())
        assert not f.one().dominates(alpha)

    def test_str_forms(self):
        f = classify_field(2, 3)
        assert str(f.element((7, 3, 0, 0), 4)) == "7/4 + 3/4*sqrt(2)"
        assert str(f.zero()) == "0"
        assert str(-f.sqrt_of(6)) == "-sqrt(6)"

    def test_quadratic_field(self):
        q = QuadraticField(13)
        w = (1 + q.sqrt_of(13)) / 2
        assert 3 + w * w + (1 + w) ** 2 == 12 + 2 * q.sqrt_of(13)
        with pytest.raises(NotSquarefree):
            QuadraticField(12)

    def test_order_descriptor(self):
        d = QuadraticOrderDescriptor(N=8, half=False)
        assert (d.f, d.n) == (2, 2)
        with pytest.raises(BadCongruence):
            QuadraticOrderDescriptor(N=8, half=True)
        with pytest.raises(SquareN):
            QuadraticOrderDescriptor(N=9, half=False)


class TestRingAxioms:
    coords = st.tuples(*[st.integers(-20, 20)] * 4)
    dens = st.integers(1, 6)

    @given(coords, coords, coords, dens)
    def test_biquadratic(self, a, b, c, d):
        f = classify_field(10, 13)
        x, y, z = (Element.make(f, v, d) for v in (a, b, c))
        assert (x + y) + z == x + (y + z)
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + f.zero() == x
        assert x * f.one() == x
        assert x - x == f.zero()

    @given(coords, coords)
    def test_conjugation_is_multiplicative(self, a, b):
        f = classify_field(2, 3)
        x, y = Element.make(f, a), Element.make(f, b)
        for i in range(4):
            assert (x * y).conjugate(i) == x.conjugate(i) * y.conjugate(i)

    @given(coords)
    def test_norm_is_rational(self, a):
        f = classify_field(3, 7)
        x = Element.make(f, a)
        norm = x.conjugate(0)
        for i in range(1, 4):
            norm = norm * x.conjugate(i)
        assert norm.is_rational()
