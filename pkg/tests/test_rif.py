import numpy as np
import pytest

from shiftlab.bivar import BivarPoly, UnivarPoly, shift_adjoint, slice_poly
from shiftlab.rif import (
    AtoralityError,
    ExceptionalPointError,
    NotContractiveError,
    SingularPointError,
    StabilityError,
    eval_rif,
    exceptional_set,
    make_rif,
    slice_blaschke,
    theta_from_symbol,
)

RNG = np.random.default_rng(414213)

P_EX1 = BivarPoly([[2, -1], [-1, 0]])       # 2 - z1 - z2
P_FIXTURE = BivarPoly([[1, 0], [0, 0], [0, -0.5]])  # 1 - z1^2 z2 / 2


@pytest.fixture(scope="module")
def theta_ex1():
    return make_rif(P_EX1, 1, 1, 1.0)


@pytest.fixture(scope="module")
def theta_fixture():
    return make_rif(P_FIXTURE, 2, 1, 1.0)


@pytest.fixture(scope="module")
def theta_z1z2():
    return make_rif(BivarPoly.constant(1.0), 1, 1, 1.0)


class TestMakeRif:
    def test_boundary_singular_is_valid(self, theta_ex1):
        assert theta_ex1.degree == (1, 1)

    def test_fixture_is_valid(self, theta_fixture):
        assert theta_fixture.degree == (2, 1)

    def test_interior_zero_rejected(self):
        with pytest.raises(StabilityError):
            make_rif(BivarPoly([[-0.5], [1.0]]), 1, 0, 1.0)  # z1 - 1/2

    def test_nonunimodular_lambda_rejected(self):
        with pytest.raises(ValueError):
            make_rif(P_EX1, 1, 1, 1.1)

    def test_degree_bound_rejected(self):
        with pytest.raises(ValueError):
            make_rif(P_EX1, 0, 1, 1.0)

    def test_toral_polynomial_rejected(self):
        # 1 - z2 vanishes along a whole face of the torus
        with pytest.raises((AtoralityError, StabilityError)):
            make_rif(BivarPoly([[1, -1]]), 1, 1, 1.0)


class TestEval:
    def test_vanishing_numerator_at_origin(self, theta_ex1):
        assert eval_rif(theta_ex1, 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_unimodular_on_torus(self, theta_ex1):
        ang = RNG.uniform(0.05, 2 * np.pi - 0.05, size=(200, 2))
        vals = eval_rif(theta_ex1, np.exp(1j * ang[:, 0]), np.exp(1j * ang[:, 1]))
        np.testing.assert_allclose(np.abs(vals), 1.0, atol=1e-10)

    def test_monomial(self, theta_z1z2):
        assert eval_rif(theta_z1z2, 0.5, 0.5) == pytest.approx(0.25)

    def test_singular_point_error(self, theta_ex1):
        with pytest.raises(SingularPointError):
            eval_rif(theta_ex1, 1.0, 1.0)

    def test_contractive_inside(self, theta_fixture):
        r = np.sqrt(RNG.uniform(0, 1, 400))
        ph = RNG.uniform(0, 2 * np.pi, (2, 400))
        z1 = r * np.exp(1j * ph[0])
        z2 = RNG.uniform(0, 1, 400) * np.exp(1j * ph[1])
        vals = eval_rif(theta_fixture, z1, z2)
        assert np.max(np.abs(vals)) <= 1.0 + 1e-10


class TestSliceBlaschke:
    def test_fixture_zeros(self, theta_fixture):
        b = slice_blaschke(theta_fixture, 1.0)
        zs = np.sort_complex(b.zeros)
        np.testing.assert_allclose(zs, [-1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-10)

    def test_coordinate_function(self):
        theta = make_rif(BivarPoly.constant(1.0), 1, 0, 1.0)  # theta = z1
        b = slice_blaschke(theta, np.exp(0.3j))
        np.testing.assert_allclose(b.zeros, [0.0], atol=1e-14)

    def test_slice_matches_direct_evaluation(self, theta_fixture):
        for tau in np.exp(1j * RNG.uniform(0, 2 * np.pi, 5)):
            b = slice_blaschke(theta_fixture, tau)
            pts = 0.9 * np.sqrt(RNG.uniform(0, 1, 20)) * np.exp(1j * RNG.uniform(0, 2 * np.pi, 20))
            np.testing.assert_allclose(b(pts), eval_rif(theta_fixture, pts, tau),
                                       atol=1e-9)

    def test_exceptional_point_rejected(self, theta_ex1):
        with pytest.raises(ExceptionalPointError):
            slice_blaschke(theta_ex1, 1.0)

    def test_zero_count_matches_degree(self, theta_ex1, theta_fixture):
        for theta in (theta_ex1, theta_fixture):
            for tau in np.exp(1j * RNG.uniform(0.2, 2 * np.pi - 0.2, 10)):
                assert slice_blaschke(theta, tau).degree == theta.m


class TestExceptionalSet:
    def test_corner_singularity(self, theta_ex1):
        es = exceptional_set(theta_ex1, grid=512, tol=1e-8)
        assert len(es) == 1
        np.testing.assert_allclose(es.points, [1.0 + 0.0j], atol=1e-7)

    def test_fixture_empty(self, theta_fixture):
        assert len(exceptional_set(theta_fixture, grid=512, tol=1e-8)) == 0

    def test_monomial_empty(self, theta_z1z2):
        assert len(exceptional_set(theta_z1z2, grid=256, tol=1e-8)) == 0


class TestThetaFromSymbol:
    def test_linear_example(self):
        theta = theta_from_symbol(UnivarPoly([1.0]), UnivarPoly([2.0, -1.0]))
        np.testing.assert_allclose(theta.p.coeffs, P_EX1.coeffs, atol=1e-14)

    def test_zero_symbol_gives_coordinate(self):
        theta = theta_from_symbol(UnivarPoly([0.0]), UnivarPoly([1.0]))
        assert theta.degree == (1, 0)
        assert eval_rif(theta, 0.3 + 0.1j, -0.2) == pytest.approx(0.3 + 0.1j)

    def test_disk_symbol(self):
        # f(w) = conj(c) + r w  <->  symbol c + r u; p = 1 - conj(c) z1 - r z1 z2
        c, r = 0.2 + 0.1j, 0.3
        theta = theta_from_symbol(UnivarPoly([np.conj(c), r]), UnivarPoly([1.0]))
        expected = BivarPoly([[1, 0], [-np.conj(c), -r]])
        scale = theta.p.coeffs[0, 0] / expected.coeffs[0, 0]
        np.testing.assert_allclose(theta.p.coeffs, scale * expected.coeffs, atol=1e-12)

    def test_not_contractive(self):
        with pytest.raises(NotContractiveError):
            theta_from_symbol(UnivarPoly([1.2]), UnivarPoly([1.0]))

    def test_blaschke_rejected(self):
        a = 0.4 - 0.3j
        with pytest.raises(AtoralityError):
            theta_from_symbol(UnivarPoly([-a, 1.0]), UnivarPoly([1.0, -np.conj(a)]))

    def test_round_trip_against_symbol_formula(self):
        for _ in range(10):
            # random contractive rational: small numerator over a denominator
            # whose roots are planted outside the closed disk
            w = (1.3 + RNG.uniform(0, 1, 2)) * np.exp(1j * RNG.uniform(0, 2 * np.pi, 2))
            den = UnivarPoly(np.convolve([1.0, -1.0 / w[0]], [1.0, -1.0 / w[1]]))
            num = UnivarPoly(0.1 * (RNG.standard_normal(3) + 1j * RNG.standard_normal(3)))
            try:
                theta = theta_from_symbol(num, den)
            except NotContractiveError:
                continue
            neg_sp = slice_poly(-shift_adjoint(theta.p, 1), 1, 0.0)
            p0 = slice_poly(theta.p, 1, 0.0)
            w = 0.8 * np.exp(2j * np.pi * np.arange(50) / 50)
            np.testing.assert_allclose(neg_sp(w) / p0(w), num(w) / den(w), atol=1e-9)
