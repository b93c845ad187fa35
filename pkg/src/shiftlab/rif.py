"""Rational inner functions on the bidisk and their slice structure.

An RIF is ``theta = lambda * reflect(p) / p`` for a stable, atoral
denominator ``p``.  Construction validates stability (no zeros inside the
closed bidisk except finitely many torus points) and atorality (``p`` and its
reflection share no factor).  Slices at unimodular ``tau`` are finite
Blaschke products away from a finite exceptional set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bivar import (
    BivarPoly,
    UnivarPoly,
    cancel_shared_roots,
    common_factor_test,
    reflect,
    roots,
    shift_adjoint,
    slice_poly,
)

__all__ = [
    "ValidationError",
    "StabilityError",
    "AtoralityError",
    "NotContractiveError",
    "ExceptionalPointError",
    "SingularPointError",
    "RIF",
    "BlaschkeProduct",
    "ExceptionalSet",
    "make_rif",
    "eval_rif",
    "slice_blaschke",
    "exceptional_set",
    "theta_from_symbol",
]


class ValidationError(Exception):
    """An input failed one of the structural checks."""


class StabilityError(ValidationError):
    """Denominator polynomial vanishes inside the bidisk or on a face."""


class AtoralityError(ValidationError):
    """Denominator shares a factor with its reflection."""


class NotContractiveError(ValidationError):
    """A would-be symbol exceeds modulus one inside the disk."""


class ExceptionalPointError(Exception):
    """Slice operation requested too close to the exceptional set."""


class SingularPointError(Exception):
    """Evaluation requested at (or too close to) a zero of the denominator."""


DEFAULT_STABILITY_RADII = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
INTERIOR_ROOT_TOL = 1e-9


@dataclass(frozen=True)
class RIF:
    """Validated rational inner function ``lam * p_reflect / p``."""

    p: BivarPoly
    m: int
    n: int
    lam: complex
    p_reflect: BivarPoly = field(repr=False)

    @property
    def degree(self) -> tuple[int, int]:
        return (self.m, self.n)

    def __call__(self, z1, z2):
        return eval_rif(self, z1, z2)


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product ``lam * prod (z - a_j) / (1 - conj(a_j) z)``."""

    zeros: np.ndarray
    lam: complex

    def __post_init__(self):
        zs = np.atleast_1d(np.asarray(self.zeros, dtype=complex))
        object.__setattr__(self, "zeros", zs)
        if zs.size and np.max(np.abs(zs)) >= 1.0:
            raise ValueError("Blaschke zeros must lie strictly inside the disk")
        if abs(abs(self.lam) - 1.0) > 1e-6:
            raise ValueError("Blaschke constant must be unimodular")

    @property
    def degree(self) -> int:
        return int(self.zeros.size)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.lam, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        if out.shape == ():
            return complex(out)
        return out


@dataclass(frozen=True)
class ExceptionalSet:
    """Unimodular points where the denominator vanishes somewhere on T x T."""

    points: np.ndarray
    tolerance: float

    def distance(self, tau: complex) -> float:
        if self.points.size == 0:
            return np.inf
        return float(np.min(np.abs(self.points - tau)))

    def __len__(self) -> int:
        return int(self.points.size)


def _z1_roots_batch(p: BivarPoly, z2_values: np.ndarray) -> list[np.ndarray]:
    """Roots in z1 of every slice ``p(., w)``, w running over ``z2_values``."""
    rows = np.vstack([np.polyval(p.coeffs[i, ::-1], z2_values)
                      for i in range(p.deg1 + 1)])
    out = []
    scale = np.max(np.abs(rows), axis=0)
    scale[scale == 0.0] = 1.0
    for k in range(z2_values.size):
        c = rows[:, k]
        nz = np.nonzero(np.abs(c) > 1e-12 * scale[k])[0]
        if nz.size == 0 or nz[-1] == 0:
            out.append(np.zeros(0, dtype=complex))
            continue
        out.append(np.roots(c[: nz[-1] + 1][::-1]))
    return out


def _check_stability(p: BivarPoly, radii, angles: int) -> None:
    if p.deg1 == 0 and p.deg2 == 0:
        if abs(p.coeffs[0, 0]) == 0.0:
            raise StabilityError("zero polynomial")
        return
    if p.deg1 == 0:
        rs = roots(slice_poly(p, 1, 0.0))
        if rs.size and np.min(np.abs(rs)) < 1.0 - INTERIOR_ROOT_TOL:
            raise StabilityError("zero of p inside the closed bidisk")
        return
    ang = np.exp(2j * np.pi * np.arange(angles) / angles)
    for r in radii:
        samples = np.array([0.0 + 0.0j]) if r == 0.0 else r * ang
        for rts in _z1_roots_batch(p, samples):
            if rts.size and np.min(np.abs(rts)) < 1.0 - INTERIOR_ROOT_TOL:
                where = "on a face" if r >= 1.0 else "inside the bidisk"
                raise StabilityError(f"zero of p {where}")


def make_rif(p: BivarPoly, m: int, n: int, lam: complex = 1.0, *,
             stability_radii=DEFAULT_STABILITY_RADII, stability_angles: int = 256,
             atorality_tol: float = 1e-8) -> RIF:
    """Validate and build the RIF ``lam * reflect(p, m, n) / p``.

    Raises ``StabilityError`` when ``p`` vanishes inside the bidisk or on a
    face, ``AtoralityError`` when ``p`` shares a factor with its reflection,
    and ``ValueError`` for bad degrees or a non-unimodular ``lam``.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise ValueError("lam must be unimodular")
    pn = p.normalize()
    if pn.is_zero():
        raise StabilityError("zero polynomial")
    if m < pn.deg1 or n < pn.deg2:
        raise ValueError(f"degrees ({m},{n}) below the degree of p "
                         f"({pn.deg1},{pn.deg2})")
    _check_stability(pn, stability_radii, stability_angles)
    pt = reflect(pn, m, n)
    if common_factor_test(pn, pt, tol=atorality_tol):
        raise AtoralityError("p and its reflection share a factor")
    return RIF(p=pn, m=m, n=n, lam=lam, p_reflect=pt)


def eval_rif(theta: RIF, z1, z2):
    """Evaluate ``theta``; raises ``SingularPointError`` on vanishing p."""
    den = theta.p(z1, z2)
    if np.min(np.abs(den)) < 1e-14:
        raise SingularPointError("denominator vanishes at the requested point")
    return theta.lam * theta.p_reflect(z1, z2) / den


def _slice_is_exceptional(theta: RIF, tau: complex, tol: float) -> bool:
    s = slice_poly(theta.p, 2, tau).normalize()
    if s.degree == 0:
        return abs(s.coeffs[0]) < tol
    rs = roots(s)
    return bool(np.min(np.abs(np.abs(rs) - 1.0)) < tol)


def slice_blaschke(theta: RIF, tau: complex, *, e_tol: float = 1e-8) -> BlaschkeProduct:
    """One-variable Blaschke product ``theta(., tau)`` for unimodular ``tau``."""
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > 1e-10:
        raise ValueError("tau must be unimodular")
    if _slice_is_exceptional(theta, tau, e_tol):
        raise ExceptionalPointError(f"tau={tau} is within {e_tol} of the "
                                    "exceptional set")
    num = slice_poly(theta.p_reflect, 2, tau).normalize()
    zs = roots(num) if num.degree > 0 else np.zeros(0, dtype=complex)
    zs = zs[np.abs(zs) < 1.0]
    if zs.size != theta.m:
        raise ExceptionalPointError("slice zero count disagrees with the "
                                    "z1-degree; tau is too close to the "
                                    "exceptional set")
    # pick an evaluation point away from the zeros to fix the unimodular factor
    candidates = np.concatenate([[0.0], 0.6 * np.exp(2j * np.pi * np.arange(8) / 8),
                                 [0.5]]).astype(complex)
    sep = [np.min(np.abs(c - zs)) if zs.size else 1.0 for c in candidates]
    zstar = candidates[int(np.argmax(sep))]
    base = np.prod((zstar - zs) / (1.0 - np.conj(zs) * zstar)) if zs.size else 1.0
    lam = eval_rif(theta, zstar, tau) / base
    lam /= abs(lam)
    return BlaschkeProduct(zeros=zs, lam=complex(lam))


def _golden_min(f, a: float, b: float, iters: int = 80):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def exceptional_set(theta: RIF, grid: int = 1024, tol: float = 1e-8) -> ExceptionalSet:
    """Locate the unimodular ``tau`` where ``p(., tau)`` has a circle zero.

    Sweeps a grid of the circle, refines every local minimum of the
    root-to-circle distance by golden-section search, and keeps refined points
    whose denominator really does get small somewhere on the torus.
    """
    p = theta.p

    if p.deg1 == 0:
        if p.deg2 == 0:
            return ExceptionalSet(np.zeros(0, dtype=complex), tol)
        rs = roots(slice_poly(p, 1, 0.0))
        pts = rs[np.abs(np.abs(rs) - 1.0) < tol]
        pts = pts / np.abs(pts) if pts.size else pts
        return ExceptionalSet(np.asarray(pts, dtype=complex), tol)

    def gap(phi: float) -> float:
        s = slice_poly(p, 2, np.exp(1j * phi)).normalize()
        if s.degree == 0:
            return np.inf
        return float(np.min(np.abs(np.abs(roots(s)) - 1.0)))

    phis = 2.0 * np.pi * np.arange(grid) / grid
    gaps = np.array([gap(ph) for ph in phis])
    step = 2.0 * np.pi / grid
    coarse = max(0.05, 10.0 * step)

    found = []
    for i in range(grid):
        left, right = gaps[i - 1], gaps[(i + 1) % grid]
        if gaps[i] <= left and gaps[i] <= right and gaps[i] < coarse:
            phi_star, g_star = _golden_min(gap, phis[i] - step, phis[i] + step)
            if g_star > np.sqrt(tol):
                continue
            tau = np.exp(1j * phi_star)
            s = slice_poly(p, 2, tau).normalize()
            rs = roots(s)
            near = rs[np.abs(np.abs(rs) - 1.0) < 10.0 * np.sqrt(tol)]
            if near.size == 0:
                continue
            vals = np.abs(p(near / np.abs(near), tau))
            if np.min(vals) < tol:
                found.append(tau)

    # cluster refined points
    clustered: list[complex] = []
    for tau in found:
        if all(abs(tau - c) > 1e-6 for c in clustered):
            clustered.append(complex(tau))
    return ExceptionalSet(np.asarray(clustered, dtype=complex), tol)


def theta_from_symbol(f_num: UnivarPoly, f_den: UnivarPoly, *,
                      blaschke_tol: float = 1e-6) -> RIF:
    """Synthesize the degree-(1,n) RIF whose scalar symbol conjugate is ``f``.

    ``f = f_num / f_den`` is the analytic representative (a rational function
    of the second variable); the denominator of the result is
    ``f_den - z1 * f_num``.  ``f`` must be strictly contractive on the open
    disk and must not be a finite Blaschke product.
    """
    num, den, _ = cancel_shared_roots(f_num.normalize(), f_den.normalize())
    if den.is_zero():
        raise ValueError("denominator is identically zero")
    if num.is_zero():
        return make_rif(BivarPoly.constant(1.0), 1, 0, 1.0)
    dr = roots(den) if den.degree > 0 else np.zeros(0, dtype=complex)
    if dr.size and np.min(np.abs(dr)) < 1.0 + 1e-9:
        raise ValueError("denominator of the symbol vanishes on the closed disk")

    def fvals(points):
        return num(points) / den(points)

    # interior contractivity on concentric rings
    for r in np.linspace(0.0, 0.99, 12):
        ring = r * np.exp(2j * np.pi * np.arange(256) / 256)
        if np.max(np.abs(fvals(ring))) >= 1.0:
            raise NotContractiveError("|f| reaches 1 inside the disk")
    boundary = np.exp(2j * np.pi * np.arange(1024) / 1024)
    bmod = np.abs(fvals(boundary))
    if np.max(bmod) > 1.0 + 1e-9:
        raise NotContractiveError("|f| exceeds 1 on the circle")
    if np.min(bmod) > 1.0 - blaschke_tol:
        raise AtoralityError("f has constant unit modulus on the circle, "
                             "i.e. it is a finite Blaschke product")

    p = BivarPoly.from_univar(den, 2) - BivarPoly([[0], [1]]) * BivarPoly.from_univar(num, 2)
    pn = p.normalize()
    theta = make_rif(pn, 1, pn.deg2, 1.0)

    # round trip: -(S* p)/p(0, .) must reproduce f
    neg_sp = slice_poly(-shift_adjoint(theta.p, 1), 1, 0.0)
    p0 = slice_poly(theta.p, 1, 0.0)
    probe = 0.7 * np.exp(2j * np.pi * np.arange(16) / 16)
    resid = np.max(np.abs(neg_sp(probe) / p0(probe) - fvals(probe)))
    if resid > 1e-9:
        raise NotContractiveError(f"round-trip symbol residual {resid:.2e}")
    return theta
