"""Closed-form decomposition data for low-degree rational inner functions.

For degree (1,0) and degree (1,1) factors the orthogonal splittings of the
model space are known explicitly, together with the shift-adjoint expansion
coefficients needed to assemble product symbols.  Degree (1,1) admits exactly
two splittings (one when the function is singular on the torus); the branch
names record which of the two polynomial pairs is used:

    minusplus: basis1 from r-, basis2 from q+   (the default)
    plusminus: basis1 from r+, basis2 from q-
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bivar import BivarPoly, UnivarPoly, shift_adjoint, slice_poly
from .rif import RIF, BlaschkeProduct, make_rif
from .symbol import (
    MatrixSymbol,
    RationalScalar,
    VARIABLE_TAG_Z1BAR,
    VARIABLE_TAG_Z2BAR,
    constant_symbol,
)

__all__ = [
    "BRANCH_MINUS_PLUS",
    "BRANCH_PLUS_MINUS",
    "Deg11Data",
    "BasisElement",
    "FactorDecomposition",
    "decompose_deg10",
    "decompose_deg11",
    "scalar_symbol",
    "product_basis",
    "blaschke_factors",
    "diagonal_blaschke_factors",
    "degree21_fixture",
    "agler_residual",
    "slice_gram",
    "gram_matrix",
]

BRANCH_MINUS_PLUS = "minusplus"
BRANCH_PLUS_MINUS = "plusminus"


@dataclass(frozen=True)
class BasisElement:
    """Rational basis vector ``numerator / denominator`` with provenance."""

    numerator: BivarPoly
    denominator: BivarPoly
    label: str = ""

    def __call__(self, z1, z2):
        return self.numerator(z1, z2) / self.denominator(z1, z2)


@dataclass(frozen=True)
class FactorDecomposition:
    """Orthogonal-splitting data of a single factor.

    ``g2``/``g1`` are the expansion coefficients of the shift adjoints of the
    factor in ``basis2``/``basis1``; they are analytic rational functions of
    the second/first variable respectively.
    """

    basis2: tuple
    basis1: tuple
    g2: tuple
    g1: tuple
    symbol1: MatrixSymbol | None
    symbol2: MatrixSymbol | None


@dataclass(frozen=True)
class Deg11Data:
    """Invariants of the bilinear denominator ``b + c z1 + d z2 + e z1 z2``."""

    a1: float
    a2: float
    gamma1: complex
    gamma2: complex
    zeta1: complex
    zeta2: complex
    b: float
    q_plus: BivarPoly
    q_minus: BivarPoly
    r_plus: BivarPoly
    r_minus: BivarPoly


def _clamped_sqrt(x: float, clamp: float = 1e-12) -> float:
    if x < -clamp:
        raise ArithmeticError(f"radicand {x} is negative beyond tolerance")
    return float(np.sqrt(max(x, 0.0)))


def decompose_deg10(a: complex, lam: complex = 1.0) -> FactorDecomposition:
    """Splitting data for ``lam (z1 - a)/(1 - conj(a) z1)``."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError("zero must lie strictly inside the disk")
    rad = np.sqrt(1.0 - abs(a) ** 2)
    den = BivarPoly([[1.0], [-np.conj(a)]])
    basis2 = (BasisElement(BivarPoly.constant(rad), den, label=f"bp({a:.3g})"),)
    g2 = (RationalScalar.constant(lam * rad),)
    return FactorDecomposition(
        basis2=basis2,
        basis1=(),
        g2=g2,
        g1=(),
        symbol1=constant_symbol([[a]], VARIABLE_TAG_Z2BAR, (basis2[0].label,)),
        symbol2=None,
    )


def decompose_deg11(b: complex, c: complex, d: complex, e: complex,
                    lam: complex = 1.0, branch: str = BRANCH_MINUS_PLUS,
                    ) -> tuple[Deg11Data, FactorDecomposition]:
    """Splitting data for the degree-(1,1) RIF with denominator
    ``b + c z1 + d z2 + e z1 z2``."""
    if branch not in (BRANCH_MINUS_PLUS, BRANCH_PLUS_MINUS):
        raise ValueError(f"unknown branch {branch!r}")
    p = BivarPoly([[b, d], [c, e]])
    rif = make_rif(p, 1, 1, lam)

    b, c, d, e = map(complex, (b, c, d, e))
    a1 = (abs(b) ** 2 - abs(e) ** 2) + (abs(c) ** 2 - abs(d) ** 2)
    a2 = (abs(b) ** 2 - abs(e) ** 2) - (abs(c) ** 2 - abs(d) ** 2)
    gamma1 = np.conj(b) * c - np.conj(d) * e
    gamma2 = np.conj(b) * d - np.conj(c) * e
    zeta1 = gamma1 / abs(gamma1) if abs(gamma1) > 0 else 1.0 + 0.0j
    zeta2 = gamma2 / abs(gamma2) if abs(gamma2) > 0 else 1.0 + 0.0j
    bsq_1 = a1**2 - 4.0 * abs(gamma1) ** 2
    bsq_2 = a2**2 - 4.0 * abs(gamma2) ** 2
    scale = max(1.0, a1**2, a2**2)
    if abs(bsq_1 - bsq_2) > 1e-10 * scale:
        raise ArithmeticError("the two discriminants disagree; input is not a "
                              "valid bilinear denominator")
    big_b = _clamped_sqrt(0.5 * (bsq_1 + bsq_2))

    r_plus = BivarPoly([[_clamped_sqrt((a1 + big_b) / 2)],
                        [zeta1 * _clamped_sqrt((a1 - big_b) / 2)]])
    r_minus = BivarPoly([[_clamped_sqrt((a1 - big_b) / 2)],
                         [zeta1 * _clamped_sqrt((a1 + big_b) / 2)]])
    q_plus = BivarPoly([[_clamped_sqrt((a2 + big_b) / 2),
                         zeta2 * _clamped_sqrt((a2 - big_b) / 2)]])
    q_minus = BivarPoly([[_clamped_sqrt((a2 - big_b) / 2),
                          zeta2 * _clamped_sqrt((a2 + big_b) / 2)]])
    data = Deg11Data(a1=a1, a2=a2, gamma1=gamma1, gamma2=gamma2, zeta1=zeta1,
                     zeta2=zeta2, b=big_b, q_plus=q_plus, q_minus=q_minus,
                     r_plus=r_plus, r_minus=r_minus)

    if branch == BRANCH_MINUS_PLUS:
        q_basis, q_other = q_plus, q_minus
        r_basis, r_other = r_minus, r_plus
    else:
        q_basis, q_other = q_minus, q_plus
        r_basis, r_other = r_plus, r_minus

    p0_z2 = slice_poly(p, 1, 0.0)   # p(0, z2)
    p0_z1 = slice_poly(p, 2, 0.0)   # p(z1, 0)
    basis2 = (BasisElement(q_basis, p, label=f"q{branch}"),)
    basis1 = (BasisElement(r_basis, p, label=f"r{branch}"),)
    g2 = (RationalScalar(lam * np.conj(zeta2) * UnivarPoly(q_other.coeffs[0, :]),
                         p0_z2),)
    g1 = (RationalScalar(lam * np.conj(zeta1) * UnivarPoly(r_other.coeffs[:, 0]),
                         p0_z1),)
    symbol1 = MatrixSymbol(
        ((RationalScalar(UnivarPoly([-np.conj(c), -np.conj(e)]),
                         UnivarPoly([np.conj(b), np.conj(d)])),),),
        VARIABLE_TAG_Z2BAR, (basis2[0].label,))
    symbol2 = MatrixSymbol(
        ((RationalScalar(UnivarPoly([-np.conj(d), -np.conj(e)]),
                         UnivarPoly([np.conj(b), np.conj(c)])),),),
        VARIABLE_TAG_Z1BAR, (basis1[0].label,))
    dec = FactorDecomposition(basis2=basis2, basis1=basis1, g2=g2, g1=g1,
                              symbol1=symbol1, symbol2=symbol2)
    return data, dec


def scalar_symbol(theta: RIF) -> RationalScalar:
    """The 1x1 symbol of a degree-(1,n) RIF, as a rational in ``u``.

    The conjugate of the symbol is ``(-S* p)(z2) / p(0, z2)``; conjugating
    coefficients moves it into the boundary variable.
    """
    if theta.m != 1:
        raise ValueError("scalar symbol requires z1-degree one")
    f_num = slice_poly(-shift_adjoint(theta.p, 1), 1, 0.0)
    f_den = slice_poly(theta.p, 1, 0.0)
    return RationalScalar(f_num, f_den).conj_coeffs()


def product_basis(factors, which: int = 2) -> list[BasisElement]:
    """Ordered basis of a product of factors.

    ``which=2`` assembles the second-variable-invariant side (used by the
    first-shift symbol), ``which=1`` the other one.  Element ``i`` of factor
    ``t`` is the running product of the earlier factors times that factor's
    own basis vector.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    prefix_num = BivarPoly.constant(1.0)
    prefix_den = BivarPoly.constant(1.0)
    out: list[BasisElement] = []
    for t, (rif_t, dec) in enumerate(factors):
        basis = dec.basis2 if which == 2 else dec.basis1
        if len(basis) == 0:
            raise ValueError(f"factor {t} contributes no basis vector on "
                             f"side {which}")
        for f in basis:
            label = f.label if t == 0 else f"prod[:{t}]*{f.label}"
            out.append(BasisElement((prefix_num * f.numerator).normalize(),
                                    (prefix_den * f.denominator).normalize(),
                                    label=label))
        prefix_num = (prefix_num * (rif_t.lam * rif_t.p_reflect)).normalize()
        prefix_den = (prefix_den * rif_t.p).normalize()
    return out


def blaschke_factors(b: BlaschkeProduct) -> list[tuple[RIF, FactorDecomposition]]:
    """Degree-(1,0) factor chain of a one-variable Blaschke product in z1.

    The unimodular constant is carried by the last factor.
    """
    out = []
    for t, a in enumerate(b.zeros):
        lam = b.lam if t == b.degree - 1 else 1.0
        dec = decompose_deg10(a, lam)
        rif = make_rif(BivarPoly([[1.0], [-np.conj(a)]]), 1, 0, lam)
        out.append((rif, dec))
    return out


def diagonal_blaschke_factors(b: BlaschkeProduct, branch: str = BRANCH_MINUS_PLUS,
                              ) -> list[tuple[RIF, FactorDecomposition]]:
    """Degree-(1,1) factor chain of ``B(z1 z2)`` for a Blaschke product B."""
    out = []
    for t, a in enumerate(b.zeros):
        lam = b.lam if t == b.degree - 1 else 1.0
        _, dec = decompose_deg11(1.0, 0.0, 0.0, -np.conj(a), lam, branch)
        rif = make_rif(BivarPoly([[1.0, 0.0], [0.0, -np.conj(a)]]), 1, 1, lam)
        out.append((rif, dec))
    return out


def degree21_fixture():
    """The worked degree-(2,1) decomposition shipped as data.

    Returns ``(rif, basis1_nums, basis2_nums)`` for the denominator
    ``1 - z1^2 z2 / 2``; no general construction exists for irreducible
    higher-degree functions, so the polynomial triple is fixed.
    """
    p = BivarPoly([[1.0, 0.0], [0.0, 0.0], [0.0, -0.5]])
    rif = make_rif(p, 2, 1, 1.0)
    s3 = np.sqrt(3.0) / 2.0
    r1 = BivarPoly([[0.0], [0.0], [s3]])
    q1 = BivarPoly.constant(s3)
    q2 = BivarPoly([[0.0], [s3]])
    return rif, [r1], [q1, q2]


def agler_residual(theta: RIF, basis2_nums, basis1_nums, *,
                   samples: int = 1000, seed: int = 3) -> float:
    """Max defect of the squared-modulus identity on random closed-bidisk points.

    Checks ``|p|^2 - |reflect p|^2 = (1-|z1|^2) sum |q_j|^2
    + (1-|z2|^2) sum |r_i|^2`` with all polynomials over the common
    denominator cleared.
    """
    rng = np.random.default_rng(seed)
    z1 = np.sqrt(rng.uniform(0, 1, samples)) * np.exp(2j * np.pi * rng.uniform(0, 1, samples))
    z2 = np.sqrt(rng.uniform(0, 1, samples)) * np.exp(2j * np.pi * rng.uniform(0, 1, samples))
    lhs = np.abs(theta.p(z1, z2)) ** 2 - np.abs(theta.p_reflect(z1, z2)) ** 2
    rhs = np.zeros_like(lhs)
    for q in basis2_nums:
        rhs += (1.0 - np.abs(z1) ** 2) * np.abs(q(z1, z2)) ** 2
    for r in basis1_nums:
        rhs += (1.0 - np.abs(z2) ** 2) * np.abs(r(z1, z2)) ** 2
    return float(np.max(np.abs(lhs - rhs)))


def _taylor_coeffs(num: UnivarPoly, den: UnivarPoly, order: int) -> np.ndarray:
    """First ``order`` Maclaurin coefficients of ``num/den``."""
    from scipy.signal import lfilter

    impulse = np.zeros(order, dtype=complex)
    impulse[0] = 1.0
    return lfilter(num.coeffs.astype(complex), den.coeffs.astype(complex), impulse)


def _slice_rational(element: BasisElement, tau: complex):
    num = slice_poly(element.numerator, 2, tau).normalize()
    den = slice_poly(element.denominator, 2, tau).normalize()
    return num, den


def slice_gram(elements, tau: complex, *, max_order: int = 40000) -> np.ndarray:
    """Gram matrix of the z1-slices at fixed unimodular ``tau``.

    Slices of valid basis vectors are rational with poles strictly outside
    the closed disk, so their Taylor coefficients decay geometrically; the
    truncation order adapts to the slowest pole.
    """
    pairs = [_slice_rational(e, tau) for e in elements]
    order = 64
    from .bivar import roots as _roots

    for num, den in pairs:
        if den.degree == 0:
            order = max(order, num.degree + 1)
            continue
        rho = float(np.min(np.abs(_roots(den))))
        if rho <= 1.0:
            raise ValueError(f"slice at tau={tau} has a pole on the closed disk")
        need = int(np.ceil(-41.0 / np.log10(1.0 / rho))) + num.degree + 1
        order = max(order, min(need, max_order))
    coeffs = np.zeros((len(pairs), order), dtype=complex)
    for k, (num, den) in enumerate(pairs):
        if den.degree == 0:
            coeffs[k, : num.degree + 1] = num.coeffs / den.coeffs[0]
        else:
            coeffs[k] = _taylor_coeffs(num, den, order)
    return coeffs @ np.conj(coeffs.T)


def gram_matrix(elements, *, taus: int = 64) -> np.ndarray:
    """Hardy-space Gram matrix of two-variable basis vectors.

    Uses the slice identity: the full-space inner product is the circle
    average of the per-slice Gram matrices.  The quadrature grid is offset so
    it cannot land on an exceptional point.
    """
    grid = np.exp(2j * np.pi * (np.arange(taus) + 0.5) / taus)
    acc = np.zeros((len(elements), len(elements)), dtype=complex)
    for tau in grid:
        acc += slice_gram(elements, tau)
    return acc / taus
