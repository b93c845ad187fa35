"""Complex bivariate and univariate polynomial arithmetic.

Polynomials in two variables are stored as dense coefficient grids,
``coeffs[i][j]`` multiplying ``z1**i * z2**j``.  Everything here is a pure
function of immutable values; grids are never mutated after construction.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "BivarPoly",
    "UnivarPoly",
    "reflect",
    "slice_poly",
    "shift_adjoint",
    "roots",
    "common_factor_test",
    "sylvester_resultant_at",
    "cancel_shared_roots",
    "poly_from_roots",
]

# Relative threshold below which trailing rows/columns count as zero.
STRIP_REL_TOL = 1e-13


class UnivarPoly:
    """Polynomial in one complex variable; ``coeffs[k]`` multiplies ``x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if c.ndim != 1:
            raise ValueError("coefficient array must be one-dimensional")
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        self.coeffs = c

    @property
    def degree(self) -> int:
        """Degree of the declared grid (may overstate the effective degree)."""
        return self.coeffs.size - 1

    def normalize(self, rel_tol: float = STRIP_REL_TOL) -> "UnivarPoly":
        """Strip trailing coefficients that are negligible relative to the max."""
        scale = np.max(np.abs(self.coeffs))
        if scale == 0.0:
            return UnivarPoly([0.0])
        keep = np.nonzero(np.abs(self.coeffs) > rel_tol * scale)[0]
        if keep.size == 0:
            return UnivarPoly([0.0])
        return UnivarPoly(self.coeffs[: keep[-1] + 1])

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def __call__(self, x):
        return np.polyval(self.coeffs[::-1], x)

    def __add__(self, other: "UnivarPoly") -> "UnivarPoly":
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=complex)
        out[: a.size] += a
        out[: b.size] += b
        return UnivarPoly(out)

    def __sub__(self, other: "UnivarPoly") -> "UnivarPoly":
        return self + (-other)

    def __neg__(self) -> "UnivarPoly":
        return UnivarPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, UnivarPoly):
            return UnivarPoly(np.convolve(self.coeffs, other.coeffs))
        return UnivarPoly(self.coeffs * complex(other))

    def __rmul__(self, other):
        return self * other

    def conj_coeffs(self) -> "UnivarPoly":
        """Coefficient-wise conjugate (the variable is left alone)."""
        return UnivarPoly(np.conj(self.coeffs))

    def derivative(self) -> "UnivarPoly":
        if self.coeffs.size == 1:
            return UnivarPoly([0.0])
        k = np.arange(1, self.coeffs.size)
        return UnivarPoly(self.coeffs[1:] * k)

    def __repr__(self) -> str:
        return f"UnivarPoly({self.coeffs.tolist()!r})"


class BivarPoly:
    """Polynomial in ``z1, z2``; ``coeffs[i][j]`` multiplies ``z1**i * z2**j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if c.ndim != 2:
            raise ValueError("coefficient grid must be two-dimensional")
        self.coeffs = c

    @classmethod
    def constant(cls, value) -> "BivarPoly":
        return cls([[complex(value)]])

    @classmethod
    def from_univar(cls, p: UnivarPoly, axis: int) -> "BivarPoly":
        """Embed a one-variable polynomial as a polynomial in ``z1`` or ``z2``."""
        if axis == 1:
            return cls(p.coeffs.reshape(-1, 1))
        if axis == 2:
            return cls(p.coeffs.reshape(1, -1))
        raise ValueError("axis must be 1 or 2")

    @property
    def deg1(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg2(self) -> int:
        return self.coeffs.shape[1] - 1

    def normalize(self, rel_tol: float = STRIP_REL_TOL) -> "BivarPoly":
        """Strip trailing all-zero rows and columns so degrees are effective."""
        c = self.coeffs
        scale = np.max(np.abs(c))
        if scale == 0.0:
            return BivarPoly([[0.0]])
        mask = np.abs(c) > rel_tol * scale
        rows = np.nonzero(mask.any(axis=1))[0]
        cols = np.nonzero(mask.any(axis=0))[0]
        return BivarPoly(c[: rows[-1] + 1, : cols[-1] + 1])

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def __call__(self, z1, z2):
        """Bilinear Horner evaluation; broadcasts over array arguments."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        acc = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for row in self.coeffs[::-1]:
            acc = acc * z1 + np.polyval(row[::-1], z2)
        if acc.shape == ():
            return complex(acc)
        return acc

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        a, b = self.coeffs, other.coeffs
        n1 = max(a.shape[0], b.shape[0])
        n2 = max(a.shape[1], b.shape[1])
        out = np.zeros((n1, n2), dtype=complex)
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] += b
        return BivarPoly(out)

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def __neg__(self) -> "BivarPoly":
        return BivarPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, BivarPoly):
            # 2-D coefficient convolution via a pair of 1-D passes.
            a, b = self.coeffs, other.coeffs
            out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                           dtype=complex)
            for i in range(a.shape[0]):
                for k in range(b.shape[0]):
                    out[i + k, :] += np.convolve(a[i], b[k])
            return BivarPoly(out)
        return BivarPoly(self.coeffs * complex(other))

    def __rmul__(self, other):
        return self * other

    def transpose(self) -> "BivarPoly":
        """Swap the roles of ``z1`` and ``z2``."""
        return BivarPoly(self.coeffs.T)

    def __repr__(self) -> str:
        return f"BivarPoly({self.coeffs.tolist()!r})"


def reflect(p: BivarPoly, m: int, n: int) -> BivarPoly:
    """Reflection ``z1^m z2^n conj(p(1/conj(z1), 1/conj(z2)))``.

    Coefficient-wise this reverses the grid on an ``(m+1) x (n+1)`` frame and
    conjugates, so ``out[i][j] = conj(p[m-i][n-j])``.
    """
    if m < p.deg1 or n < p.deg2:
        raise ValueError(f"reflection degrees ({m},{n}) below grid degrees "
                         f"({p.deg1},{p.deg2})")
    frame = np.zeros((m + 1, n + 1), dtype=complex)
    frame[: p.deg1 + 1, : p.deg2 + 1] = p.coeffs
    return BivarPoly(np.conj(frame[::-1, ::-1]))


def slice_poly(p: BivarPoly, axis: int, value: complex) -> UnivarPoly:
    """Fix one variable; returns the polynomial in the remaining variable."""
    if axis == 2:
        # result in z1: sum_j coeffs[:, j] * value**j
        powers = np.asarray(value, dtype=complex) ** np.arange(p.deg2 + 1)
        return UnivarPoly(p.coeffs @ powers)
    if axis == 1:
        powers = np.asarray(value, dtype=complex) ** np.arange(p.deg1 + 1)
        return UnivarPoly(powers @ p.coeffs)
    raise ValueError("axis must be 1 or 2")


def shift_adjoint(p: BivarPoly, axis: int = 1) -> BivarPoly:
    """Backward-shift coefficient action ``(p - p|_{z_axis=0}) / z_axis``."""
    if axis == 1:
        if p.deg1 == 0:
            return BivarPoly([[0.0]])
        return BivarPoly(p.coeffs[1:, :])
    if axis == 2:
        if p.deg2 == 0:
            return BivarPoly([[0.0]])
        return BivarPoly(p.coeffs[:, 1:])
    raise ValueError("axis must be 1 or 2")


def roots(q: UnivarPoly) -> np.ndarray:
    """All roots with multiplicity via the balanced companion eigenproblem.

    A guarded Newton polish is applied to each root; the polish is skipped
    where the derivative is too small (multiple roots) to do any good.
    """
    qn = q.normalize()
    if qn.is_zero():
        raise ValueError("root finding needs a nonzero polynomial")
    if qn.degree == 0:
        return np.zeros(0, dtype=complex)
    rs = np.asarray(np.roots(qn.coeffs[::-1]), dtype=complex)
    dq = qn.derivative()
    scale = np.max(np.abs(qn.coeffs))
    for _ in range(2):
        vals = qn(rs)
        dvals = dq(rs)
        ok = np.abs(dvals) > 1e-8 * scale
        step = np.zeros_like(rs)
        step[ok] = vals[ok] / dvals[ok]
        small = np.abs(step) < 0.05 * (1.0 + np.abs(rs))
        rs = rs - np.where(ok & small, step, 0.0)
    return rs


def poly_from_roots(rs, lead: complex = 1.0) -> UnivarPoly:
    """Expand ``lead * prod (x - r)`` back into coefficient form."""
    coeffs = np.array([complex(lead)])
    for r in rs:
        coeffs = np.convolve(coeffs, [-r, 1.0])
    return UnivarPoly(coeffs)


def cancel_shared_roots(num: UnivarPoly, den: UnivarPoly, tol: float = 1e-9):
    """Cancel root pairs of ``num`` and ``den`` that agree within ``tol``.

    Returns ``(num, den, cancelled)``.  When nothing cancels the inputs are
    returned untouched, so exact coefficient data survives the common case.
    """
    num_n, den_n = num.normalize(), den.normalize()
    if num_n.is_zero() or den_n.degree == 0 or num_n.degree == 0:
        return num_n, den_n, 0
    nroots = list(roots(num_n))
    droots = list(roots(den_n))
    keep_n, cancelled = [], 0
    for r in nroots:
        hit = None
        for k, s in enumerate(droots):
            if abs(r - s) < tol * (1.0 + abs(s)):
                hit = k
                break
        if hit is None:
            keep_n.append(r)
        else:
            droots.pop(hit)
            cancelled += 1
    if cancelled == 0:
        return num_n, den_n, 0
    lead_n = num_n.coeffs[-1]
    lead_d = den_n.coeffs[-1]
    return (poly_from_roots(keep_n, lead_n), poly_from_roots(droots, lead_d),
            cancelled)


def _sylvester(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two univariate coefficient arrays (ascending)."""
    da, db = a.size - 1, b.size - 1
    n = da + db
    s = np.zeros((n, n), dtype=complex)
    for k in range(db):
        s[k, k : k + da + 1] = a[::-1]
    for k in range(da):
        s[db + k, k : k + db + 1] = b[::-1]
    return s


def sylvester_resultant_at(p: BivarPoly, q: BivarPoly, axis: int, value: complex,
                           normalized: bool = True) -> complex:
    """Resultant of ``p`` and ``q`` in the eliminated variable, at one point.

    ``axis`` names the variable that is *eliminated*; ``value`` is plugged in
    for the other variable.  With ``normalized`` the Sylvester rows are scaled
    to unit norm first, which makes the magnitude comparable across points.
    """
    other = 2 if axis == 1 else 1
    a = slice_poly(p, other, value).coeffs
    b = slice_poly(q, other, value).coeffs
    if a.size - 1 == 0 and b.size - 1 == 0:
        return 1.0 + 0.0j
    s = _sylvester(a, b)
    if normalized:
        norms = np.linalg.norm(s, axis=1)
        norms[norms == 0.0] = 1.0
        s = s / norms[:, None]
    return complex(np.linalg.det(s))


def _resultant_vanishes(p: BivarPoly, q: BivarPoly, axis: int, tol: float) -> bool:
    dp = p.deg1 if axis == 1 else p.deg2
    dq = q.deg1 if axis == 1 else q.deg2
    if dp == 0 and dq == 0:
        return False
    # Degree bound of the resultant in the surviving variable, plus margin.
    op, oq = (p.deg2, q.deg2) if axis == 1 else (p.deg1, q.deg1)
    nodes = max(dp + dq + 1, op * dq + oq * dp + 2)
    xs = np.cos(np.pi * (2 * np.arange(nodes) + 1) / (2 * nodes))
    points = np.exp(1j * np.pi * xs)
    vals = [abs(sylvester_resultant_at(p, q, axis, w)) for w in points]
    return max(vals) < tol


def common_factor_test(p: BivarPoly, q: BivarPoly, tol: float = 1e-8) -> bool:
    """Detect a nontrivial common polynomial factor of ``p`` and ``q``.

    The resultant with respect to ``z1`` (a polynomial in ``z2``, sampled via
    row-normalized Sylvester determinants at Chebyshev nodes mapped to the
    circle) vanishes identically when the factor involves ``z1``; the
    symmetric ``z2`` resultant covers factors in ``z2`` alone.
    """
    pn, qn = p.normalize(), q.normalize()
    if pn.is_zero() or qn.is_zero():
        raise ValueError("common factor test needs nonzero polynomials")
    if (pn.deg1 == 0 and pn.deg2 == 0) or (qn.deg1 == 0 and qn.deg2 == 0):
        return False
    return _resultant_vanishes(pn, qn, 1, tol) or _resultant_vanishes(pn, qn, 2, tol)
