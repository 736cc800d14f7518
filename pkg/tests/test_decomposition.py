from fractions import Fraction

import pytest

from bqsos.fields import classify_field
from bqsos.orders import (
    maximal_order,
    quadratic_maximal_order,
    quadratic_order,
    quadratic_order_half,
)
from bqsos.decomposition import (
    CapTooSmall,
    EXACT,
    NOT_SUM_OF_SQUARES,
    NotTotallyNonnegative,
    UNDETERMINED,
    enumerate_squares_dominated,
    enumerate_squares_traced,
    is_sum_of_n_squares,
    length,
    length_profile,
    load_level_cache,
    pythagoras_lower_bound,
    scaled_coords,
)


BQ23 = maximal_order(classify_field(2, 3))
F23 = BQ23.field


def replay(alpha, witness):
    total = alpha.field.zero()
    for w in witness:
        total = total + w * w
    return total == alpha


class TestSquareEnumeration:
    def test_small_cap(self):
        squares = enumerate_squares_traced(BQ23, 2)
        values = {sq for _, sq in squares.squares}
        r3 = F23.sqrt_of(3)
        assert values == {F23.one(), F23.from_rational(2), 2 + r3, 2 - r3}
        for root, sq in squares.squares:
            assert root * root == sq
            assert BQ23.contains(root)

    def test_monotone_in_cap(self):
        small = {sq for _, sq in enumerate_squares_traced(BQ23, 3).squares}
        large = {sq for _, sq in enumerate_squares_traced(BQ23, 5).squares}
        assert small <= large

    def test_cap_soundness(self):
        for _, sq in enumerate_squares_traced(BQ23, 5).squares:
            assert sq.abs_trace() <= 5

    def test_roots_are_sign_canonical(self):
        for root, _ in enumerate_squares_traced(BQ23, 4).squares:
            lead = next(c for c in root.coords() if c != 0)
            assert lead > 0

    def test_dominated(self):
        alpha = 6 + F23.sqrt_of(2) + F23.sqrt_of(6)
        squares = enumerate_squares_dominated(BQ23, alpha)
        for _, sq in squares.squares:
            assert (alpha - sq).is_totally_nonnegative()
        with pytest.raises(NotTotallyNonnegative):
            enumerate_squares_dominated(BQ23, 1 + F23.sqrt_of(2))

    def test_dominated_outside_order(self):
        # alpha need not lie in the order for domination queries
        alpha = F23.from_rational(Fraction(9, 4))
        squares = enumerate_squares_dominated(BQ23, alpha)
        assert {sq for _, sq in squares.squares} == {
            F23.one(), F23.from_rational(2)
        }

    def test_scaled_coords(self):
        x = (F23.sqrt_of(2) + F23.sqrt_of(6)) / 2
        assert scaled_coords(BQ23, x) == (0, 1, 0, 1)
        assert scaled_coords(BQ23, F23.sqrt_of(2) / 2) is None


class TestLength:
    def test_zero_and_units(self):
        assert length(BQ23, F23.zero()).k == 0
        assert length(BQ23, F23.one()).k == 1
        assert length(BQ23, F23.from_rational(4)).k == 1

    def test_known_biquadratic(self):
        alpha = 6 + F23.sqrt_of(2) + F23.sqrt_of(6)
        result = length(BQ23, alpha)
        assert result.status == EXACT and result.k == 3
        assert replay(alpha, result.witness)

    def test_known_quadratic(self):
        o = quadratic_maximal_order(3)
        f = o.field
        result = length(o, 2 + (2 + f.sqrt_of(3)) ** 2)
        assert result.k == 3
        o13 = quadratic_order_half(13)
        f13 = o13.field
        result = length(o13, 12 + 2 * f13.sqrt_of(13))
        assert result.k == 5

    def test_conductor_matters(self):
        f = quadratic_order(5).field
        alpha = 3 + (1 + f.sqrt_of(5)) ** 2
        assert length(quadratic_order(5), alpha).k == 4
        # in the maximal order the same element needs only 2 squares
        assert length(quadratic_maximal_order(5), alpha).k == 2

    def test_not_sum_of_squares(self):
        result = length(BQ23, 1 + F23.sqrt_of(2))
        assert result.status == NOT_SUM_OF_SQUARES
        # totally positive but trace too small for its nonzero part
        result = length(BQ23, F23.from_rational(Fraction(1, 2)))
        assert result.status == NOT_SUM_OF_SQUARES

    def test_outside_order(self):
        assert length(BQ23, F23.sqrt_of(2) / 2).status == NOT_SUM_OF_SQUARES

    def test_undetermined(self):
        alpha = 6 + F23.sqrt_of(2) + F23.sqrt_of(6)
        result = length(BQ23, alpha, max_n=2)
        assert result.status == UNDETERMINED

    def test_methods_agree(self):
        samples = [
            6 + F23.sqrt_of(2) + F23.sqrt_of(6),
            F23.from_rational(7),
            2 + F23.sqrt_of(3),
            4 + 2 * F23.sqrt_of(2),
        ]
        for alpha in samples:
            a = length(BQ23, alpha, method="dfs")
            b = length(BQ23, alpha, method="mitm")
            assert (a.status, a.k) == (b.status, b.k)
            if a.is_exact:
                assert replay(alpha, a.witness) and replay(alpha, b.witness)

    def test_bad_method(self):
        with pytest.raises(ValueError):
            length(BQ23, F23.one(), method="bogus")


class TestIsSumOfNSquares:
    def test_at_most_semantics(self):
        alpha = F23.from_rational(4)
        ok, witness = is_sum_of_n_squares(BQ23, alpha, 3)
        assert ok and len(witness) <= 3
        assert replay(alpha, witness)

    def test_threshold(self):
        alpha = 6 + F23.sqrt_of(2) + F23.sqrt_of(6)
        assert not is_sum_of_n_squares(BQ23, alpha, 2)[0]
        ok, witness = is_sum_of_n_squares(BQ23, alpha, 3)
        assert ok and replay(alpha, witness)

    def test_zero_and_negatives(self):
        assert is_sum_of_n_squares(BQ23, F23.zero(), 0) == (True, ())
        assert is_sum_of_n_squares(BQ23, 1 + F23.sqrt_of(2), 4)[0] is False
        with pytest.raises(ValueError):
            is_sum_of_n_squares(BQ23, F23.one(), -1)


class TestLowerBound:
    def test_biquadratic(self):
        n, witnesses = pythagoras_lower_bound(BQ23, 8)
        assert n == 3
        elements = {alpha for alpha, _ in witnesses}
        assert 6 + F23.sqrt_of(2) + F23.sqrt_of(6) in elements
        for alpha, roots in witnesses:
            assert replay(alpha, roots)
            assert length(BQ23, alpha).k == n

    def test_quadratic(self):
        o = quadratic_maximal_order(3)
        f = o.field
        n, witnesses = pythagoras_lower_bound(o, 10)
        assert n == 3
        assert 9 + 4 * f.sqrt_of(3) in {alpha for alpha, _ in witnesses}

    def test_cap_too_small(self):
        with pytest.raises(CapTooSmall):
            pythagoras_lower_bound(BQ23, Fraction(1, 2))


class TestProfile:
    def test_levels_are_lengths(self):
        rows = length_profile(BQ23, 6)
        by_element = {row.element: row for row in rows}
        alpha = 2 + F23.sqrt_of(3)
        assert by_element[alpha].length == 1
        for row in rows:
            assert replay(row.element, row.witness)
            assert len(row.witness) == row.length
        # spot check against the search on a sample
        for row in rows[::17]:
            assert length(BQ23, row.element).k == row.length

    def test_profile_respects_cap(self):
        for row in length_profile(BQ23, 5):
            assert row.element.abs_trace() <= 5


class TestCache:
    def test_round_trip(self, tmp_path):
        cache = str(tmp_path)
        first = pythagoras_lower_bound(BQ23, 6, cache_dir=cache)
        assert load_level_cache(cache, BQ23, 6) is not None
        second = pythagoras_lower_bound(BQ23, 6, cache_dir=cache)
        assert first == second

    def test_cap_mismatch_misses(self, tmp_path):
        cache = str(tmp_path)
        pythagoras_lower_bound(BQ23, 6, cache_dir=cache)
        assert load_level_cache(cache, BQ23, 7) is None

    def test_order_mismatch_misses(self, tmp_path):
        cache = str(tmp_path)
        pythagoras_lower_bound(BQ23, 6, cache_dir=cache)
        other = maximal_order(classify_field(2, 5))
        assert load_level_cache(cache, other, 6) is None

    def test_version_check(self, tmp_path):
        import json
        from bqsos.decomposition import _cache_path

        cache = str(tmp_path)
        pythagoras_lower_bound(BQ23, 6, cache_dir=cache)
        path = _cache_path(cache, BQ23, 6)
        with open(path) as fh:
            payload = json.load(fh)
        payload["version"] = -1
        with open(path, "w") as fh:
            json.dump(payload, fh)
        assert load_level_cache(cache, BQ23, 6) is None
