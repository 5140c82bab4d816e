"""Characteristic polynomial extraction and exact root finding."""

from fractions import Fraction

import pytest

from lpdo.expr import RatExpr, tower
from lpdo.operator import LPDO, FirstOrderFactor, SWAP_XY
from lpdo.charpoly import CharPoly, char_poly, find_roots, root_transform

from conftest import rand_operator

R = RatExpr
X, Y = R.X, R.Y
ONE = R.ONE


def hyperbolic_family(zero_term) -> LPDO:
    q = (Y * Y - X * X) * R.from_fraction(Fraction(1, 4))
    return LPDO({(2, 0): ONE, (0, 2): -ONE, (1, 0): Y, (0, 1): X,
                 (0, 0): q + zero_term})


class TestCharPoly:
    def test_read_off_hyperbolic(self):
        p = char_poly(hyperbolic_family(ONE))
        assert [str(c) for c in p.coeffs] == ["1", "0", "-1"]

    def test_read_off_mixed_lead(self):
        op = LPDO({(1, 1): ONE, (1, 0): X, (0, 0): Y})
        p = char_poly(op)
        assert [str(c) for c in p.coeffs] == ["0", "1", "0"]

    def test_parabolic_double_root(self):
        a20, a11 = R.from_int(1), R.from_int(2)
        a02 = a11 * a11 / (R.from_int(4) * a20)
        op = LPDO({(2, 0): a20, (1, 1): a11, (0, 2): a02, (0, 0): ONE})
        search = find_roots(char_poly(op))
        (root,) = search.roots
        assert root.multiplicity == 2
        assert root.value == -(a11 / (a20 + a20))

    def test_requires_positive_order(self):
        with pytest.raises(ValueError):
            char_poly(LPDO.function(ONE))


class TestFindRoots:
    def test_two_simple_roots(self):
        p = CharPoly((ONE, R.ZERO, -ONE), 2)
        search = find_roots(p)
        assert [str(r.value) for r in search.roots] == ["-1", "1"]
        assert all(r.multiplicity == 1 for r in search.roots)
        assert not search.unresolved

    def test_complex_pair_extends_tower(self):
        p = CharPoly((ONE, R.ZERO, ONE), 2)
        search = find_roots(p)
        values = {str(r.value) for r in search.roots}
        assert values == {"i", "-i"}
        assert all(-1 in r.extensions for r in search.roots)
        assert -1 in tower().radicals

    def test_degree_drop_is_root_at_infinity(self):
        p = CharPoly((R.ZERO, ONE, R.ZERO), 2)
        search = find_roots(p)
        assert [str(r) for r in search.roots] == \
            ["0 (multiplicity 1)", "infinity (multiplicity 1)"]

    def test_rational_function_root(self):
        # (w - x)(w + 1/x) = w^2 + (1/x - x) w - 1
        p = CharPoly((ONE, ONE / X - X, -ONE), 2)
        search = find_roots(p)
        values = {str(r.value) for r in search.roots}
        assert values == {"x", "-1/x"}

    def test_constant_cubic_splits(self):
        # w^3 - w
        p = CharPoly((ONE, R.ZERO, -ONE, R.ZERO), 3)
        search = find_roots(p)
        assert {str(r.value) for r in search.roots} == {"-1", "0", "1"}

    def test_unresolved_reported(self):
        # w^2 - x has no square root in the supported field
        p = CharPoly((ONE, R.ZERO, -X), 2)
        search = find_roots(p)
        assert not search.roots
        assert search.unresolved
        assert search.total_multiplicity() == 0

    def test_multiplicity_certified_by_derivatives(self):
        # (w - 1)^2 (w + 2)
        coeffs = (ONE, R.ZERO, -R.from_int(3), R.from_int(2))
        search = find_roots(CharPoly(coeffs, 3))
        by_value = {str(r.value): r.multiplicity for r in search.roots}
        assert by_value == {"1": 2, "-2": 1}

    def test_multiplicity_sum_bounded(self, rng):
        for _ in range(15):
            op = rand_operator(rng, rng.randint(2, 3))
            search = find_roots(char_poly(op))
            assert search.total_multiplicity() <= op.order


class TestSymbolMultiplicativity:
    def test_factor_times_cofactor(self, rng):
        for _ in range(20):
            w0 = R.from_int(rng.randint(-3, 3))
            b = rand_operator(rng, rng.randint(1, 2))
            f = FirstOrderFactor.from_root(w0, R.ZERO)
            prod = f.as_operator().compose(b)
            if prod.order != b.order + 1:
                continue
            pc = char_poly(prod).coeffs
            qc = char_poly(b).coeffs
            # (t - w0) * Q(t), coefficientwise
            want = [qc[0]]
            for i in range(1, len(qc)):
                want.append(qc[i] - w0 * qc[i - 1])
            want.append(-w0 * qc[-1])
            assert list(pc) == want


class TestRootTransform:
    def test_swap_inverts_roots(self):
        root = find_roots(CharPoly((ONE, R.ZERO, -R.from_int(4)), 2)).roots
        images = {str(root_transform(r, SWAP_XY).value) for r in root}
        assert images == {"1/2", "-1/2"}

    def test_swap_duality_with_infinity(self):
        op = LPDO({(1, 1): ONE})
        search = find_roots(char_poly(op))
        swapped = find_roots(char_poly(op.change_vars(SWAP_XY)))
        images = sorted(str(root_transform(r, SWAP_XY)) for r in search.roots)
        direct = sorted(str(r) for r in swapped.roots)
        assert images == direct

    def test_shear_is_moebius(self):
        p = CharPoly((ONE, R.ZERO, -ONE), 2)
        m = ((1, 2), (0, 1))
        for r in find_roots(p).roots:
            image = root_transform(r, m)
            # w' = w / (1 - 2w)
            w = r.value
            assert image.value == w / (ONE - R.from_int(2) * w)
