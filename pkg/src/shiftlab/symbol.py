"""Matrix-valued Toeplitz symbols of two-variable compressed shifts.

A symbol is a square grid of one-variable rational functions.  Entries are
stored in the conjugated boundary variable ``u`` (``u = conj(z2)`` for the
first-shift symbols, ``u = conj(z1)`` for the second), so evaluation at a
unimodular ``tau`` plugs in ``u = conj(tau)``.  The same rational-function
container also serves for analytic data (the expansion coefficients ``g`` of
factor decompositions and the denominators that feed the block formulas);
which variable is meant is recorded where the object lives, not in the type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bivar import (
    BivarPoly,
    UnivarPoly,
    cancel_shared_roots,
    reflect,
    roots,
    shift_adjoint,
    slice_poly,
)
from .rif import RIF, BlaschkeProduct

__all__ = [
    "RationalScalar",
    "MatrixSymbol",
    "takenaka_matrix",
    "constant_symbol",
    "eval_symbol",
    "symbol_eigenvalues",
    "assemble_product_symbol",
    "swap_variables",
    "symbol_from_basis",
    "VARIABLE_TAG_Z2BAR",
    "VARIABLE_TAG_Z1BAR",
]

VARIABLE_TAG_Z2BAR = "z2bar"
VARIABLE_TAG_Z1BAR = "z1bar"


class RationalScalar:
    """Reduced quotient of two one-variable polynomials.

    Construction cancels numerator/denominator roots that agree within
    ``reduce_tol``; when nothing cancels the original coefficients are kept,
    so exact inputs stay exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce_tol: float = 1e-9):
        if not isinstance(num, UnivarPoly):
            num = UnivarPoly(num)
        if den is None:
            den = UnivarPoly([1.0])
        elif not isinstance(den, UnivarPoly):
            den = UnivarPoly(den)
        den = den.normalize()
        if den.is_zero():
            raise ZeroDivisionError("rational scalar with zero denominator")
        num = num.normalize()
        if not num.is_zero():
            num, den, _ = cancel_shared_roots(num, den, reduce_tol)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, value) -> "RationalScalar":
        return cls(UnivarPoly([complex(value)]))

    @classmethod
    def zero(cls) -> "RationalScalar":
        return cls(UnivarPoly([0.0]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self, tol: float = 0.0) -> bool:
        return self.num.normalize().degree == 0 and self.den.normalize().degree == 0

    def __call__(self, u):
        return self.num(u) / self.den(u)

    def __mul__(self, other):
        if isinstance(other, RationalScalar):
            return RationalScalar(self.num * other.num, self.den * other.den)
        return RationalScalar(self.num * other, self.den)

    def __rmul__(self, other):
        return self * other

    def __add__(self, other: "RationalScalar") -> "RationalScalar":
        return RationalScalar(self.num * other.den + other.num * self.den,
                              self.den * other.den)

    def __sub__(self, other: "RationalScalar") -> "RationalScalar":
        return self + (-1.0) * other

    def __truediv__(self, other: "RationalScalar") -> "RationalScalar":
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational")
        return RationalScalar(self.num * other.den, self.den * other.num)

    def conj_coeffs(self) -> "RationalScalar":
        """Conjugate all coefficients, keeping the variable."""
        return RationalScalar(self.num.conj_coeffs(), self.den.conj_coeffs())

    def den_regular_on_disk(self, tol: float = 1e-9) -> bool:
        """True when the denominator has no roots on the closed unit disk."""
        den = self.den.normalize()
        if den.degree == 0:
            return True
        return bool(np.min(np.abs(roots(den))) > 1.0 + tol)

    def canonical(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficient arrays scaled so the first significant denominator
        coefficient equals one; for comparing against printed forms."""
        num, den = self.num.normalize(), self.den.normalize()
        scale = np.max(np.abs(den.coeffs))
        idx = np.nonzero(np.abs(den.coeffs) > 1e-12 * scale)[0][0]
        pivot = den.coeffs[idx]
        return num.coeffs / pivot, den.coeffs / pivot

    def __repr__(self) -> str:
        return (f"RationalScalar({self.num.coeffs.tolist()!r} / "
                f"{self.den.coeffs.tolist()!r})")


@dataclass(frozen=True)
class MatrixSymbol:
    """Square grid of rational entries in the conjugated boundary variable."""

    entries: tuple
    variable_tag: str
    basis_labels: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        m = len(rows)
        if any(len(row) != m for row in rows):
            raise ValueError("symbol must be square")
        for row in rows:
            for e in row:
                if not e.den_regular_on_disk():
                    raise ValueError("symbol entry denominator vanishes on the "
                                     "closed unit disk")

    @property
    def m(self) -> int:
        return len(self.entries)

    def eval_u(self, u) -> np.ndarray:
        """Entrywise evaluation at a value (or array) of the variable u."""
        u = np.asarray(u, dtype=complex)
        out = np.empty(u.shape + (self.m, self.m), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                out[..., i, j] = e(u)
        return out

    def entry(self, i: int, j: int) -> RationalScalar:
        return self.entries[i][j]


def constant_symbol(mat, variable_tag: str = VARIABLE_TAG_Z2BAR,
                    basis_labels=()) -> MatrixSymbol:
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    rows = tuple(tuple(RationalScalar.constant(v) for v in row) for row in mat)
    return MatrixSymbol(rows, variable_tag, tuple(basis_labels))


def takenaka_matrix(b: BlaschkeProduct) -> np.ndarray:
    """Upper-triangular one-variable compressed-shift matrix from the zeros."""
    zs = b.zeros
    n = zs.size
    if n < 1:
        raise ValueError("need at least one zero")
    radicals = np.sqrt(1.0 - np.abs(zs) ** 2)
    mat = np.zeros((n, n), dtype=complex)
    for i in range(n):
        mat[i, i] = zs[i]
        for j in range(i + 1, n):
            mat[i, j] = np.prod(-np.conj(zs[i + 1 : j])) * radicals[i] * radicals[j]
    return mat


def eval_symbol(mat: MatrixSymbol, tau: complex) -> np.ndarray:
    """Evaluate at a unimodular point: entries at ``u = conj(tau)``."""
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > 1e-10:
        raise ValueError("tau must be unimodular")
    return mat.eval_u(np.conj(tau))


def symbol_eigenvalues(mat: MatrixSymbol, tau: complex) -> np.ndarray:
    return np.linalg.eigvals(eval_symbol(mat, tau))


def swap_variables(theta: RIF) -> RIF:
    """The RIF with the two variables exchanged.

    Validation carries over verbatim (the checks are symmetric in the two
    variables), so the swapped function is built directly.
    """
    pt = theta.p.transpose()
    return RIF(p=pt, m=theta.n, n=theta.m, lam=theta.lam,
               p_reflect=reflect(pt, theta.n, theta.m))


def _analytic_theta_at_axis(rif: RIF, which: int) -> RationalScalar:
    """theta(0, .) for which=1, theta(., 0) for which=2, as a rational."""
    axis = 1 if which == 1 else 2
    num = slice_poly(rif.p_reflect, axis, 0.0)
    den = slice_poly(rif.p, axis, 0.0)
    return RationalScalar(rif.lam * num, den)


def assemble_product_symbol(factors, which: int = 1) -> MatrixSymbol:
    """Block lower-triangular symbol of a product of validated factors.

    ``factors`` is a sequence of ``(RIF, FactorDecomposition)`` pairs, in the
    product order.  Blocks above the diagonal are exactly zero, the diagonal
    carries each factor's own symbol, and the block in position (s, t) for
    s > t couples factor s's basis restricted to the axis with factor t's
    shift-adjoint expansion coefficients, conjugated into the boundary
    variable.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    slice_axis = 1 if which == 1 else 2

    sizes, f_axis, gs, theta_axis, diags, labels = [], [], [], [], [], []
    for rif_t, dec in factors:
        basis = dec.basis2 if which == 1 else dec.basis1
        g = dec.g2 if which == 1 else dec.g1
        diag = dec.symbol1 if which == 1 else dec.symbol2
        if len(basis) == 0 or diag is None:
            raise ValueError("factor contributes no basis in this direction")
        if len(g) != len(basis):
            raise ValueError("expansion coefficient count must match the basis")
        sizes.append(len(basis))
        f_axis.append([RationalScalar(slice_poly(f.numerator, slice_axis, 0.0),
                                      slice_poly(f.denominator, slice_axis, 0.0))
                       for f in basis])
        gs.append(list(g))
        theta_axis.append(_analytic_theta_at_axis(rif_t, which))
        diags.append(diag)
        labels.extend(f.label for f in basis)

    m = sum(sizes)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    zero = RationalScalar.zero()
    grid = [[zero] * m for _ in range(m)]

    for s in range(len(sizes)):
        for i in range(sizes[s]):
            for j in range(sizes[s]):
                grid[offsets[s] + i][offsets[s] + j] = diags[s].entry(i, j)
        for t in range(s):
            prefix = RationalScalar.constant(1.0)
            for ell in range(t + 1, s):
                prefix = prefix * theta_axis[ell]
            for i in range(sizes[s]):
                for j in range(sizes[t]):
                    val = prefix * f_axis[s][i] * gs[t][j]
                    grid[offsets[s] + i][offsets[t] + j] = val.conj_coeffs()

    tag = VARIABLE_TAG_Z2BAR if which == 1 else VARIABLE_TAG_Z1BAR
    return MatrixSymbol(tuple(tuple(row) for row in grid), tag, tuple(labels))


def _poly_det(mat: list[list[UnivarPoly]]) -> UnivarPoly:
    m = len(mat)
    if m == 1:
        return mat[0][0]
    total = UnivarPoly([0.0])
    for j in range(m):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _poly_det(minor)
        total = total - term if j % 2 else total + term
    return total


def _z1_coeff_rows(q: BivarPoly, m: int) -> list[UnivarPoly]:
    rows = []
    for k in range(m):
        if k <= q.deg1:
            rows.append(UnivarPoly(q.coeffs[k, :]))
        else:
            rows.append(UnivarPoly([0.0]))
    return rows


def symbol_from_basis(theta: RIF, basis_numerators, *,
                      residual_samples: int = 30,
                      seed: int = 7) -> tuple[MatrixSymbol, float]:
    """Reconstruct the first-shift symbol from a user-supplied basis.

    The basis is given through the polynomial numerators ``q_1..q_m`` over
    the common denominator ``p``.  The shift-adjoint expansion is solved
    exactly by Cramer's rule on the z1-coefficient matrix of the basis, and
    the returned residual reports how well the expansion identity holds at
    sampled interior points.
    """
    m = theta.m
    qs = [q.normalize() for q in basis_numerators]
    if len(qs) != m:
        raise ValueError(f"expected {m} basis numerators, got {len(qs)}")
    if any(q.deg1 > m - 1 for q in qs):
        raise ValueError("basis numerator exceeds the z1-degree bound")

    p = theta.p
    p0 = slice_poly(p, 1, 0.0)  # p(0, z2)
    a_cols = [_z1_coeff_rows(q, m) for q in qs]  # a_cols[j][k]
    a_mat = [[a_cols[j][k] for j in range(m)] for k in range(m)]
    det_a = _poly_det(a_mat).normalize()
    if det_a.is_zero(1e-12 * max(1.0, np.max(np.abs(det_a.coeffs)))):
        raise ValueError("basis z1-coefficient matrix is singular")

    entries = [[None] * m for _ in range(m)]
    for i in range(m):
        q_i0 = BivarPoly.from_univar(slice_poly(qs[i], 1, 0.0), 2)
        n_i = qs[i] * BivarPoly.from_univar(p0, 2) - q_i0 * p
        g_i = _z1_coeff_rows(shift_adjoint(n_i, 1), m)
        for j in range(m):
            replaced = [[g_i[k] if col == j else a_mat[k][col] for col in range(m)]
                        for k in range(m)]
            h_ij = RationalScalar(_poly_det(replaced), det_a * p0)
            entries[i][j] = h_ij.conj_coeffs()

    sym = MatrixSymbol(tuple(tuple(row) for row in entries), VARIABLE_TAG_Z2BAR,
                       tuple(f"q{i + 1}/p" for i in range(m)))

    rng = np.random.default_rng(seed)
    z1 = 0.7 * np.sqrt(rng.uniform(0, 1, residual_samples)) * \
        np.exp(2j * np.pi * rng.uniform(0, 1, residual_samples))
    z2 = 0.7 * np.sqrt(rng.uniform(0, 1, residual_samples)) * \
        np.exp(2j * np.pi * rng.uniform(0, 1, residual_samples))
    resid = 0.0
    for a, b in zip(z1, z2):
        pv = p(a, b)
        p0v = p(0.0, b)
        for i in range(m):
            lhs = (qs[i](a, b) / pv - qs[i](0.0, b) / p0v) / a
            rhs = sum(qs[j](a, b) / pv * entries[i][j].conj_coeffs()(b)
                      for j in range(m))
            resid = max(resid, abs(lhs - rhs))
    return sym, float(resid)
