import numpy as np
import pytest

from shiftlab.agler import (
    BRANCH_PLUS_MINUS,
    blaschke_factors,
    decompose_deg10,
    decompose_deg11,
    degree21_fixture,
    diagonal_blaschke_factors,
)
from shiftlab.bivar import BivarPoly
from shiftlab.rif import BlaschkeProduct, make_rif, slice_blaschke
from shiftlab.symbol import (
    MatrixSymbol,
    RationalScalar,
    assemble_product_symbol,
    constant_symbol,
    eval_symbol,
    swap_variables,
    symbol_eigenvalues,
    symbol_from_basis,
    takenaka_matrix,
)

RNG = np.random.default_rng(977)


def coordinate_factor():
    """The factor (RIF, decomposition) for theta = z1."""
    return make_rif(BivarPoly.constant(1.0), 1, 0, 1.0), decompose_deg10(0.0)


def ex1_factor():
    rif = make_rif(BivarPoly([[2, -1], [-1, 0]]), 1, 1, 1.0)
    _, dec = decompose_deg11(2.0, -1.0, -1.0, 0.0)
    return rif, dec


def fixture_symbol():
    rif, _, qs = degree21_fixture()
    sym, resid = symbol_from_basis(rif, qs)
    assert resid < 1e-10
    return rif, sym


def multiset_distance(a, b):
    a, b = list(a), list(b)
    assert len(a) == len(b)
    total = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        total = max(total, abs(x - b.pop(j)))
    return total


class TestTakenaka:
    def test_single_zero(self):
        m = takenaka_matrix(BlaschkeProduct(zeros=[0.3 - 0.2j], lam=1.0))
        np.testing.assert_allclose(m, [[0.3 - 0.2j]])

    def test_double_zero(self):
        t = 0.6
        m = takenaka_matrix(BlaschkeProduct(zeros=[t, t], lam=1.0))
        np.testing.assert_allclose(m, [[t, 1 - t * t], [0, t]], atol=1e-14)

    def test_eigenvalues_are_zeros(self):
        zs = np.array([0.1, -0.4 + 0.2j, 0.3j])
        m = takenaka_matrix(BlaschkeProduct(zeros=zs, lam=-1.0))
        np.testing.assert_allclose(np.sort_complex(np.linalg.eigvals(m)),
                                   np.sort_complex(zs), atol=1e-12)


class TestEvalSymbol:
    def test_fixture_at_one(self):
        _, sym = fixture_symbol()
        np.testing.assert_allclose(eval_symbol(sym, 1.0),
                                   [[0, 0.5], [1, 0]], atol=1e-13)

    def test_constant(self):
        sym = constant_symbol([[0.2, 0.0], [1.0, -0.1j]])
        for tau in np.exp(1j * RNG.uniform(0, 2 * np.pi, 4)):
            np.testing.assert_allclose(eval_symbol(sym, tau),
                                       [[0.2, 0.0], [1.0, -0.1j]])

    def test_against_direct_horner(self):
        _, sym = fixture_symbol()
        for tau in np.exp(1j * RNG.uniform(0, 2 * np.pi, 8)):
            got = eval_symbol(sym, tau)
            u = np.conj(tau)
            # independent evaluation from raw coefficient arrays
            want = np.empty((2, 2), dtype=complex)
            for i in range(2):
                for j in range(2):
                    e = sym.entry(i, j)
                    nv = sum(c * u**k for k, c in enumerate(e.num.coeffs))
                    dv = sum(c * u**k for k, c in enumerate(e.den.coeffs))
                    want[i, j] = nv / dv
            np.testing.assert_allclose(got, want, atol=1e-13)

    def test_nonunimodular_rejected(self):
        _, sym = fixture_symbol()
        with pytest.raises(ValueError):
            eval_symbol(sym, 0.5)


class TestSymbolFromBasis:
    def test_fixture_exact_entries(self):
        _, sym = fixture_symbol()
        num01, den01 = sym.entry(0, 1).canonical()
        np.testing.assert_allclose(num01, [0.0, 0.5], atol=1e-12)
        np.testing.assert_allclose(den01, [1.0], atol=1e-12)
        num10, den10 = sym.entry(1, 0).canonical()
        np.testing.assert_allclose(num10, [1.0], atol=1e-12)
        assert sym.entry(0, 0).is_zero()
        assert sym.entry(1, 1).is_zero()

    def test_scalar_case_agrees_with_formula(self):
        from shiftlab.agler import scalar_symbol
        rif = make_rif(BivarPoly([[2, -1], [-1, 0]]), 1, 1, 1.0)
        _, dec = decompose_deg11(2.0, -1.0, -1.0, 0.0)
        sym, resid = symbol_from_basis(rif, [dec.basis2[0].numerator])
        assert resid < 1e-10
        a = sym.entry(0, 0).canonical()
        b = scalar_symbol(rif).canonical()
        np.testing.assert_allclose(a[0], b[0], atol=1e-12)
        np.testing.assert_allclose(a[1], b[1], atol=1e-12)


class TestAssemble:
    def test_example_two_by_two(self):
        # z1 times the singular linear-fraction factor
        sym = assemble_product_symbol([coordinate_factor(), ex1_factor()], which=1)
        assert sym.m == 2
        assert sym.entry(0, 0).is_zero()
        assert sym.entry(0, 1).is_zero()
        assert sym.entry(1, 1).canonical()[0] == pytest.approx([0.5])
        num, den = sym.entry(1, 0).canonical()
        np.testing.assert_allclose(num, [np.sqrt(2) / 2, -np.sqrt(2) / 2], atol=1e-13)
        np.testing.assert_allclose(den, [1.0, -0.5], atol=1e-13)

    def test_reversed_order(self):
        sym = assemble_product_symbol([ex1_factor(), coordinate_factor()], which=1)
        num, den = sym.entry(1, 0).canonical()
        np.testing.assert_allclose(num, [-np.sqrt(2) / 2, np.sqrt(2) / 2], atol=1e-13)
        np.testing.assert_allclose(den, [1.0, -0.5], atol=1e-13)
        assert sym.entry(1, 1).is_zero()

    def test_diagonal_blaschke_is_scaled_takenaka_transpose(self):
        zeros = [0.45, -0.2 + 0.3j, 0.5j]
        bp = BlaschkeProduct(zeros=zeros, lam=1.0)
        sym = assemble_product_symbol(diagonal_blaschke_factors(bp), which=1)
        mb_t = takenaka_matrix(bp).T
        for i in range(3):
            for j in range(3):
                e = sym.entry(i, j)
                if abs(mb_t[i, j]) < 1e-15:
                    assert e.is_zero()
                else:
                    num, den = e.canonical()
                    np.testing.assert_allclose(num, [0.0, mb_t[i, j]], atol=1e-12)
                    np.testing.assert_allclose(den, [1.0], atol=1e-12)

    def test_monomial_product(self):
        z1z2 = (make_rif(BivarPoly.constant(1.0), 1, 1, 1.0),
                decompose_deg11(1.0, 0, 0, 0, branch=BRANCH_PLUS_MINUS)[1])
        sym = assemble_product_symbol([coordinate_factor(), z1z2], which=1)
        assert sym.entry(0, 0).is_zero()
        assert sym.entry(0, 1).is_zero()
        assert sym.entry(1, 1).is_zero()
        num, den = sym.entry(1, 0).canonical()
        np.testing.assert_allclose(num, [0.0, 1.0], atol=1e-14)
        np.testing.assert_allclose(den, [1.0], atol=1e-14)

    def test_blaschke_chain_transpose_of_takenaka(self):
        zeros = [0.45, -0.2 + 0.3j, 0.5j]
        bp = BlaschkeProduct(zeros=zeros, lam=1.0)
        sym = assemble_product_symbol(blaschke_factors(bp), which=1)
        got = eval_symbol(sym, np.exp(0.7j))
        np.testing.assert_allclose(got, takenaka_matrix(bp).T, atol=1e-13)

    def test_block_triangular_exact_zeros(self):
        factors = [ex1_factor(), coordinate_factor(), ex1_factor()]
        sym = assemble_product_symbol(factors, which=1)
        for i in range(sym.m):
            for j in range(i + 1, sym.m):
                assert sym.entry(i, j).is_zero()


class TestEigenvalueSliceAgreement:
    def test_fixture(self):
        rif, sym = fixture_symbol()
        for tau in np.exp(1j * RNG.uniform(0, 2 * np.pi, 20)):
            ev = symbol_eigenvalues(sym, tau)
            zs = slice_blaschke(rif, tau).zeros
            assert multiset_distance(ev, zs) < 1e-8

    def test_random_products(self):
        for _ in range(3):
            zeros = 0.7 * np.sqrt(RNG.uniform(0.05, 1, 2)) * \
                np.exp(2j * np.pi * RNG.uniform(0, 1, 2))
            bp = BlaschkeProduct(zeros=zeros, lam=1.0)
            factors = diagonal_blaschke_factors(bp)
            sym = assemble_product_symbol(factors, which=1)
            # product RIF = B(z1 z2)
            prod_p = BivarPoly.constant(1.0)
            for rif_t, _ in factors:
                prod_p = prod_p * rif_t.p
            big = make_rif(prod_p, 2, 2, 1.0)
            for tau in np.exp(1j * RNG.uniform(0, 2 * np.pi, 25)):
                ev = symbol_eigenvalues(sym, tau)
                zs = slice_blaschke(big, tau).zeros
                assert multiset_distance(ev, zs) < 1e-8

    def test_scaled_takenaka_eigenvalues(self):
        zeros = np.array([0.2, 0.4 - 0.1j])
        bp = BlaschkeProduct(zeros=zeros, lam=1.0)
        sym = assemble_product_symbol(diagonal_blaschke_factors(bp), which=1)
        tau = np.exp(1.1j)
        ev = symbol_eigenvalues(sym, tau)
        assert multiset_distance(ev, np.conj(tau) * zeros) < 1e-12


class TestSwapAndContractivity:
    def test_symmetric_functions_fixed(self):
        rif = make_rif(BivarPoly([[2, -1], [-1, 0]]), 1, 1, 1.0)
        sw = swap_variables(rif)
        np.testing.assert_allclose(sw.p.coeffs, rif.p.coeffs)
        rifm = make_rif(BivarPoly.constant(1.0), 1, 1, 1.0)
        swm = swap_variables(rifm)
        assert swm.degree == (1, 1)

    def test_second_symbol_of_diagonal_square(self):
        t = 0.5
        bp = BlaschkeProduct(zeros=[t, t], lam=1.0)
        factors = diagonal_blaschke_factors(bp)
        m1 = assemble_product_symbol(factors, which=1)
        m2 = assemble_product_symbol(factors, which=2)
        assert m1.variable_tag == "z2bar"
        assert m2.variable_tag == "z1bar"
        tau = np.exp(0.4j)
        np.testing.assert_allclose(eval_symbol(m1, tau), eval_symbol(m2, tau),
                                   atol=1e-13)
        np.testing.assert_allclose(eval_symbol(m1, tau),
                                   np.conj(tau) * np.array([[t, 0], [1 - t * t, t]]),
                                   atol=1e-13)

    def test_contractive_on_circle_and_inside(self):
        _, sym = fixture_symbol()
        for tau in np.exp(1j * RNG.uniform(0, 2 * np.pi, 30)):
            s = np.linalg.svd(eval_symbol(sym, tau), compute_uv=False)
            assert s[0] <= 1.0 + 1e-9
        for r in (0.2, 0.6, 0.9):
            vals = sym.eval_u(r * np.exp(2j * np.pi * np.arange(16) / 16))
            s = np.linalg.svd(vals, compute_uv=False)
            assert np.max(s) <= 1.0 + 1e-9

    def test_spectral_radius_bound_on_circle(self):
        sym = assemble_product_symbol([ex1_factor(), ex1_factor()], which=1)
        for tau in np.exp(1j * RNG.uniform(0.05, 2 * np.pi - 0.05, 30)):
            assert np.max(np.abs(symbol_eigenvalues(sym, tau))) <= 1.0 + 1e-9
