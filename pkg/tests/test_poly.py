import math

import numpy as np
import pytest

import delaymargin as dm
from delaymargin import boundary
from delaymargin.errors import ZeroPolynomial
from delaymargin.poly import RealPolynomial


class TestEval:
    def test_root_of_quadratic(self):
        p = RealPolynomial([1, 0, 1])
        assert dm.eval_at_complex(p, 1j) == 0

    def test_zero_polynomial(self):
        assert dm.eval_at_complex(RealPolynomial([]), 3 + 2j) == 0

    def test_matches_direct_summation(self):
        # oracle: plain term-by-term sum
        coeffs = [4.0, 3.0, 2.0, 1.0]
        s = -0.1
        expected = sum(c * s**k for k, c in enumerate(coeffs))
        assert dm.eval_at_complex(RealPolynomial(coeffs), s) == pytest.approx(expected, rel=1e-15)

    def test_trailing_zeros_stripped_exactly(self):
        assert RealPolynomial([1.0, 2.0, 0.0]).coeffs == (1.0, 2.0)
        assert RealPolynomial([0.0, 0.0]).is_zero()


class TestDerivative:
    def test_cubic(self):
        assert dm.derivative(RealPolynomial([0, 0, 0, 1])).coeffs == (0.0, 0.0, 3.0)

    def test_constant(self):
        assert dm.derivative(RealPolynomial([5])).is_zero()

    def test_against_finite_differences(self):
        rng = np.random.default_rng(3)
        p = RealPolynomial(rng.normal(size=7))
        dp = dm.derivative(p)
        for x in rng.uniform(-2, 2, 10):
            h = 1e-6
            fd = (p(x + h) - p(x - h)) / (2 * h)
            assert dp(x) == pytest.approx(fd, rel=1e-8, abs=1e-10)


class TestNonnegativeRealRoots:
    def test_negative_root_excluded(self):
        assert dm.nonnegative_real_roots(RealPolynomial([-1, 0, 1])) == pytest.approx([1.0])

    def test_multiplicity_collapsed(self):
        # (w - 2)^2 (w + 3) = w^3 - w^2 - 8w + 12
        roots = dm.nonnegative_real_roots(RealPolynomial([12, -8, -1, 1]))
        assert roots == pytest.approx([2.0], abs=1e-7)

    def test_zero_polynomial_raises(self):
        with pytest.raises(ZeroPolynomial):
            dm.nonnegative_real_roots(RealPolynomial([]))

    def test_hprime_numerator_roots_match_sign_scan(self, example_bf):
        # oracle: dense sign-change scan of H' at step 1e-4
        numer = boundary.h_prime_numerator(example_bf)
        roots = dm.nonnegative_real_roots(numer)
        grid = np.arange(1e-4, 5.0, 1e-4)
        vals = example_bf.H_prime(grid)
        changes = grid[np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]]
        interior = [r for r in roots if 1e-4 < r < 5.0]
        assert len(interior) == len(changes)
        for r, c in zip(sorted(interior), sorted(changes)):
            assert abs(r - c) < 1e-3

    def test_huge_coefficient_range(self):
        # roots {1e-3, 1e3}: coefficients span twelve decades
        p = RealPolynomial([1.0, -(1e-3 + 1e3), 1.0]) * RealPolynomial([1e-3 * 1e3, 0])
        p = RealPolynomial(np.convolve([-1e-3, 1], [-1e3, 1]))
        roots = dm.nonnegative_real_roots(p)
        assert roots == pytest.approx([1e-3, 1e3], rel=1e-6)


class TestAllComplexRoots:
    def test_unit_circle_pair(self):
        roots = dm.all_complex_roots(RealPolynomial([1, 0, 1]))
        assert sorted(r.imag for r in roots) == pytest.approx([-1.0, 1.0], abs=1e-12)

    def test_mixed_real_complex(self):
        # (w - 2)(w^2 + 1)
        p = RealPolynomial(np.convolve([-2, 1], [1, 0, 1]))
        roots = sorted(dm.all_complex_roots(p), key=lambda r: r.real)
        assert roots[0] == pytest.approx(-1j, abs=1e-10)
        assert roots[1] == pytest.approx(1j, abs=1e-10)
        assert roots[2] == pytest.approx(2.0, abs=1e-10)

    def test_cubic_residuals(self):
        p = RealPolynomial([4, 3, 2, 1])
        roots = dm.all_complex_roots(p)
        assert len(roots) == 3
        for r in roots:
            assert abs(p(r)) < 1e-10
        # cross-check the real root against sign changes of the cubic
        reals = [r for r in roots if abs(r.imag) < 1e-9]
        assert len(reals) == 1
        a, b = math.floor(reals[0].real), math.ceil(reals[0].real)
        assert p(float(a)) * p(float(b)) <= 0

    def test_zero_polynomial_raises(self):
        with pytest.raises(ZeroPolynomial):
            dm.all_complex_roots(RealPolynomial([]))

    def test_constant_has_no_roots(self):
        assert dm.all_complex_roots(RealPolynomial([3.0])) == []


class TestInvariants:
    def test_factored_form_recovery(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            wanted = sorted(set(np.round(rng.uniform(0, 4, 3), 3)))
            coeffs = np.array([1.0])
            for r in wanted:
                coeffs = np.convolve(coeffs, [-r, 1.0])
            coeffs = np.convolve(coeffs, [rng.uniform(1, 3), 1.0])  # one negative root
            roots = dm.nonnegative_real_roots(RealPolynomial(coeffs))
            assert roots == pytest.approx(wanted, abs=1e-9)

    def test_product_roundtrip_degree_30(self):
        rng = np.random.default_rng(5)
        coeffs = rng.normal(size=31)
        coeffs[-1] = 1.0
        p = RealPolynomial(coeffs)
        roots = dm.all_complex_roots(p)
        rebuilt = np.array([1.0 + 0j])
        for r in roots:
            rebuilt = np.convolve(rebuilt, [-r, 1.0])
        rebuilt = rebuilt.real * p.coeffs[-1]
        err = np.max(np.abs(rebuilt - np.array(p.coeffs))) / np.max(np.abs(coeffs))
        assert err < 1e-8

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            p = RealPolynomial(rng.normal(size=13))
            roots = dm.all_complex_roots(p)
            for r in roots:
                if r.imag != 0:
                    assert any(abs(other - r.conjugate()) < 1e-9 for other in roots)
