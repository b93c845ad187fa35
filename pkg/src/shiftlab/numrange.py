"""Numerical ranges of matrices, matrix symbols, and their Toeplitz sections.

Boundary points of the numerical range of a constant matrix come from the
classical rotated-Hermitian sweep: for each angle the top eigenvector of
``Re(e^{i a} A)`` contributes the quadratic form value.  Symbol ranges are
swept over the circle and merged by convex hull.  The finite-section oracle
compresses the block Toeplitz operator of a symbol and produces points that
are guaranteed (up to quadrature error) to lie inside the operator range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.spatial import ConvexHull, QhullError

from .symbol import MatrixSymbol, eval_symbol

__all__ = [
    "ConvexRegion",
    "OpennessVerdict",
    "EllipticalRange",
    "ScalarRange",
    "SectionCloud",
    "convex_region",
    "matrix_numrange",
    "elliptical_range",
    "sweep_closure",
    "scalar_range",
    "block_toeplitz_section",
    "finite_section_oracle",
    "openness_test",
    "hausdorff_distance",
    "witness_violation",
]

_DEDUPE_TOL = 1e-10


@dataclass(frozen=True)
class ConvexRegion:
    """Convex polygon given by counterclockwise vertices ``(k, 2)``.

    Degenerate regions (a point or a segment) keep one or two vertices.
    ``is_closure`` marks regions that approximate the closure of an open set.
    """

    vertices: np.ndarray
    is_closure: bool = False

    @property
    def size(self) -> int:
        return self.vertices.shape[0]

    def as_complex(self) -> np.ndarray:
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def radius(self) -> float:
        return float(np.max(np.hypot(self.vertices[:, 0], self.vertices[:, 1])))

    def support(self, angles: np.ndarray) -> np.ndarray:
        """Support function values in the directions ``(cos a, sin a)``."""
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
        out = np.empty(dirs.shape[0])
        chunk = max(1, int(3e7) // max(1, self.size))
        for lo in range(0, dirs.shape[0], chunk):
            out[lo : lo + chunk] = (dirs[lo : lo + chunk] @ self.vertices.T).max(axis=1)
        return out

    def distance_outside(self, points: np.ndarray) -> np.ndarray:
        """Euclidean distance from each complex point to the region (0 inside)."""
        pts = np.column_stack([np.real(points), np.imag(points)])
        v = self.vertices
        if self.size == 1:
            return np.hypot(pts[:, 0] - v[0, 0], pts[:, 1] - v[0, 1])
        seg_a = v
        seg_b = np.roll(v, -1, axis=0) if self.size > 2 else v[::-1]
        d = np.full(pts.shape[0], np.inf)
        inside = np.ones(pts.shape[0], dtype=bool) if self.size > 2 else \
            np.zeros(pts.shape[0], dtype=bool)
        for a, b in zip(seg_a, seg_b):
            ab = b - a
            denom = float(ab @ ab)
            ap = pts - a
            if denom > 0:
                t = np.clip(ap @ ab / denom, 0.0, 1.0)
                proj = a + t[:, None] * ab
            else:
                proj = np.broadcast_to(a, pts.shape)
            d = np.minimum(d, np.hypot(pts[:, 0] - proj[:, 0], pts[:, 1] - proj[:, 1]))
            if self.size > 2:
                cross = ab[0] * ap[:, 1] - ab[1] * ap[:, 0]
                inside &= cross >= -_DEDUPE_TOL
        return np.where(inside, 0.0, d)

    def contains(self, points, tol: float = 0.0) -> bool:
        return bool(np.all(self.distance_outside(np.asarray(points, dtype=complex))
                           <= tol))


def _prefilter(pts: np.ndarray, nbins: int) -> np.ndarray:
    """Keep the farthest point per angular bin around an interior point.

    Cheap reduction before hulling huge near-circular clouds; the inner error
    is bounded by the chord defect of one bin.
    """
    center = pts.mean()
    rel = pts - center
    r = np.abs(rel)
    ang = np.angle(rel)
    bins = np.minimum(((ang + np.pi) / (2 * np.pi) * nbins).astype(np.int64),
                      nbins - 1)
    order = np.lexsort((r, bins))
    last = np.ones(order.size, dtype=bool)
    last[:-1] = bins[order][1:] != bins[order][:-1]
    return pts[order[last]]


def convex_region(points, is_closure: bool = False, *,
                  prefilter_bins: int | None = None) -> ConvexRegion:
    """Convex hull of a complex point cloud as a ``ConvexRegion``.

    Falls back to a projection when the cloud is (nearly) collinear, which
    qhull refuses.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    pts = pts[np.isfinite(pts)]
    if pts.size == 0:
        raise ValueError("no points to hull")
    if prefilter_bins is not None and pts.size > prefilter_bins:
        pts = _prefilter(pts, prefilter_bins)
    xy = np.column_stack([pts.real, pts.imag])
    xy = np.unique(xy, axis=0)
    if xy.shape[0] == 1:
        return ConvexRegion(xy, is_closure)
    centered = xy - xy.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[-1] <= 1e-12 * (1.0 + svals[0]):
        # collinear: take the extreme points along the principal direction
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        t = centered @ vt[0]
        ends = xy[[int(np.argmin(t)), int(np.argmax(t))]]
        if np.allclose(ends[0], ends[1], atol=_DEDUPE_TOL):
            return ConvexRegion(ends[:1], is_closure)
        return ConvexRegion(ends, is_closure)
    try:
        hull = ConvexHull(xy)
    except QhullError:
        hull = ConvexHull(xy, qhull_options="QJ")
    verts = xy[hull.vertices]  # counterclockwise for 2-D input
    keep = np.ones(verts.shape[0], dtype=bool)
    for k in range(verts.shape[0]):
        if np.allclose(verts[k], verts[(k + 1) % verts.shape[0]], atol=_DEDUPE_TOL):
            keep[k] = False
    return ConvexRegion(verts[keep], is_closure)


def _boundary_points(mats: np.ndarray, angles: int) -> np.ndarray:
    """Numerical-range boundary points of a stack of matrices.

    For each rotation angle, the top eigenvector of the Hermitian part of the
    rotated matrix gives one boundary point per matrix.  Returns an array of
    shape ``(len(mats), angles)``.
    """
    mats = np.asarray(mats, dtype=complex)
    single = mats.ndim == 2
    if single:
        mats = mats[None]
    alphas = 2.0 * np.pi * np.arange(angles) / angles
    phases = np.exp(1j * alphas)
    out = np.empty((mats.shape[0], angles), dtype=complex)
    # batch over angles; chunk so the work array stays modest
    chunk = max(1, int(2e6) // (mats.shape[0] * mats.shape[1] ** 2))
    for lo in range(0, angles, chunk):
        ph = phases[lo : lo + chunk]
        rot = ph[None, :, None, None] * mats[:, None, :, :]
        herm = 0.5 * (rot + np.conj(np.swapaxes(rot, -1, -2)))
        _, vecs = np.linalg.eigh(herm)
        top = vecs[..., :, -1]
        av = np.einsum("nij,ncj->nci", mats, top)
        out[:, lo : lo + chunk] = np.einsum("nci,nci->nc", np.conj(top), av)
    return out[0] if single else out


def matrix_numrange(a, angles: int = 1024) -> ConvexRegion:
    """Numerical range of a constant square matrix."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if angles < 8:
        raise ValueError("need at least 8 sweep angles")
    return convex_region(_boundary_points(a, angles))


@dataclass(frozen=True)
class EllipticalRange:
    """Exact elliptical disk: the numerical range of a 2x2 matrix."""

    center: complex
    focus1: complex
    focus2: complex
    semi_minor: float

    @property
    def focal_half_distance(self) -> float:
        return float(abs(self.focus1 - self.focus2) / 2.0)

    @property
    def semi_major(self) -> float:
        return float(np.hypot(self.semi_minor, self.focal_half_distance))

    @property
    def major_direction(self) -> complex:
        d = self.focus2 - self.focus1
        if abs(d) < 1e-15:
            return 1.0 + 0.0j
        return d / abs(d)

    def boundary(self, n: int = 512) -> np.ndarray:
        th = 2.0 * np.pi * np.arange(n) / n
        e1 = self.major_direction
        e2 = 1j * e1
        return (self.center + self.semi_major * np.cos(th) * e1
                + self.semi_minor * np.sin(th) * e2)

    def support_polygon(self, angles: int = 1024) -> ConvexRegion:
        """Support points in the rotated-sweep directions; matches the points
        the boundary sweep of the same matrix produces."""
        th = 2.0 * np.pi * np.arange(angles) / angles
        e1 = self.major_direction
        rot = np.conj(e1) * np.exp(1j * th)  # directions in the ellipse frame
        dx, dy = rot.real, rot.imag
        a, b = self.semi_major, self.semi_minor
        norm = np.hypot(a * dx, b * dy)
        if np.min(norm) < 1e-15:  # degenerate segment
            pts = self.boundary(angles)
        else:
            px = a * a * dx / norm
            py = b * b * dy / norm
            pts = self.center + (px + 1j * py) * e1
        return convex_region(pts)

    def max_modulus(self, n: int = 4096) -> float:
        return float(np.max(np.abs(self.boundary(n))))


def elliptical_range(a) -> EllipticalRange:
    """Elliptical range data of a 2x2 matrix: foci at the eigenvalues, minor
    axis from the trace defect."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError("elliptical range needs a 2x2 matrix")
    ev = np.linalg.eigvals(a)
    rad = float(np.trace(np.conj(a.T) @ a).real - abs(ev[0]) ** 2 - abs(ev[1]) ** 2)
    if rad < -1e-12:
        raise ArithmeticError(f"negative minor-axis radicand {rad}")
    minor_full = np.sqrt(max(rad, 0.0))
    return EllipticalRange(center=complex(ev.mean()), focus1=complex(ev[0]),
                           focus2=complex(ev[1]), semi_minor=float(minor_full / 2.0))


def sweep_closure(mat: MatrixSymbol, tau_grid: int = 2048, angles: int = 1024, *,
                  exclude=(), exclude_tol: float = 1e-6) -> ConvexRegion:
    """Convex hull of the union of per-tau numerical ranges of a symbol.

    Approximates the closure of the numerical range of the symbol's Toeplitz
    operator.  Circle points within ``exclude_tol`` of ``exclude`` are
    skipped (continuity fills the gap).
    """
    if tau_grid < 64 or angles < 64:
        raise ValueError("grids of at least 64 are required")
    taus = np.exp(2j * np.pi * np.arange(tau_grid) / tau_grid)
    if len(exclude):
        ex = np.asarray(exclude, dtype=complex)
        keep = np.min(np.abs(taus[:, None] - ex[None, :]), axis=1) > exclude_tol
        taus = taus[keep]
    mats = mat.eval_u(np.conj(taus))
    pts = _boundary_points(mats, angles).ravel()
    return convex_region(pts, is_closure=True, prefilter_bins=max(8192, 4 * angles))


@dataclass(frozen=True)
class ScalarRange:
    """Image data of a scalar symbol over the closed disk."""

    samples: np.ndarray
    region: ConvexRegion
    radius: float


def scalar_range(f, disk_grid: int = 2048) -> ScalarRange:
    """Sample a scalar rational symbol over the closed unit disk.

    Returns the sample cloud (an approximation of the spectrum of the
    associated compressed shift), its convex hull (the numerical range), and
    the maximal modulus (the numerical radius).
    """
    radii = np.concatenate([np.linspace(0.0, 0.95, 39), [0.98, 0.995, 1.0]])
    ang = np.exp(2j * np.pi * np.arange(disk_grid) / disk_grid)
    grid = (radii[:, None] * ang[None, :]).ravel()
    vals = np.asarray(f(grid), dtype=complex)
    region = convex_region(vals, is_closure=True, prefilter_bins=4 * disk_grid)
    return ScalarRange(samples=vals, region=region,
                       radius=float(np.max(np.abs(vals))))


def block_toeplitz_section(mat: MatrixSymbol, n: int, *, quad: int = 4096,
                           sparse: bool = False):
    """Leading ``n``-block section of the block Toeplitz operator of a symbol.

    Fourier coefficients of the entries are computed by trapezoid quadrature
    on ``quad`` circle points (exact up to the geometric tail aliasing).
    Block ``(r, c)`` of the section is coefficient ``r - c``.
    """
    if quad < 2 * n:
        raise ValueError("quadrature grid must resolve the section size")
    m = mat.m
    taus = np.exp(2j * np.pi * np.arange(quad) / quad)
    vals = mat.eval_u(np.conj(taus))  # (quad, m, m)
    coeffs = np.fft.fft(vals, axis=0) / quad  # index k: coefficient of tau^k
    scale = np.max(np.abs(coeffs))
    blocks = {}
    for k in range(-(n - 1), n):
        blk = coeffs[k % quad]
        if np.max(np.abs(blk)) > 1e-15 * max(scale, 1.0):
            blocks[k] = blk
    if sparse:
        total = sp.csr_matrix((n * m, n * m), dtype=complex)
        for k, blk in blocks.items():
            total = total + sp.kron(sp.eye(n, n, k=-k, format="csr"),
                                    sp.csr_matrix(blk), format="csr")
        return total
    out = np.zeros((n * m, n * m), dtype=complex)
    for k, blk in blocks.items():
        for c in range(n):
            r = c + k
            if 0 <= r < n:
                out[r * m : (r + 1) * m, c * m : (c + 1) * m] = blk
    return out


@dataclass(frozen=True)
class SectionCloud:
    """Points guaranteed to lie in the numerical range of the full operator."""

    points: np.ndarray
    radius: float
    n: int


def finite_section_oracle(mat: MatrixSymbol, n: int, samples: int = 200,
                          seed: int = 0, *, angles: int = 192,
                          quad: int = 4096) -> SectionCloud:
    """Inner approximation of the operator numerical range by sections.

    Boundary points of the section's numerical range are quadratic forms of
    the full operator at compressed unit vectors, so every returned point
    lies in the operator range up to quadrature error.  Random seeded unit
    vectors are thrown in as well.
    """
    if n < 16:
        raise ValueError("sections smaller than 16 are not informative")
    dim = n * mat.m
    use_sparse = dim > 600
    t = block_toeplitz_section(mat, n, quad=quad, sparse=use_sparse)
    alphas = 2.0 * np.pi * np.arange(angles) / angles
    pts = np.empty(angles, dtype=complex)
    if use_sparse:
        th = t.conj().T.tocsr()
        v0 = None
        for k, a in enumerate(alphas):
            h = 0.5 * (np.exp(1j * a) * t + np.exp(-1j * a) * th)
            _, vec = spla.eigsh(h, k=1, which="LA", v0=v0, tol=1e-11)
            v = vec[:, 0]
            v0 = v
            pts[k] = np.vdot(v, t @ v)
    else:
        pts[:] = _boundary_points(np.asarray(t), angles)
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((samples, dim)) + 1j * rng.standard_normal((samples, dim))
    xs /= np.linalg.norm(xs, axis=1)[:, None]
    forms = np.einsum("si,si->s", np.conj(xs), np.asarray((t @ xs.T).T))
    cloud = np.concatenate([pts, forms])
    return SectionCloud(points=cloud, radius=float(np.max(np.abs(cloud))), n=n)


@dataclass(frozen=True)
class OpennessVerdict:
    """Outcome of the common-transversal screen.

    ``open`` certifies that no straight line meets every per-tau numerical
    range, which forces the operator range to be open.  Otherwise a feasible
    line is reported as a witness; nothing is claimed about closedness.
    """

    status: str  # "open" or "inconclusive"
    witness: tuple[float, float] | None
    margin: float


def _imag_part_bounds(mat: MatrixSymbol, alphas: np.ndarray,
                      taus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalue bounds of Im(e^{i alpha} M(tau)) on an (alpha, tau) grid."""
    vals = mat.eval_u(np.conj(taus))  # (T, m, m)
    lmin = np.empty((alphas.size, taus.size))
    lmax = np.empty((alphas.size, taus.size))
    chunk = max(1, int(2e6) // (taus.size * mat.m**2))
    for lo in range(0, alphas.size, chunk):
        ph = np.exp(1j * alphas[lo : lo + chunk])
        rot = ph[:, None, None, None] * vals[None, :, :, :]
        im = (rot - np.conj(np.swapaxes(rot, -1, -2))) / 2j
        w = np.linalg.eigvalsh(im)
        lmin[lo : lo + chunk] = w[..., 0]
        lmax[lo : lo + chunk] = w[..., -1]
    return lmin, lmax


def openness_test(mat: MatrixSymbol, alpha_grid: int = 1024,
                  tau_grid: int = 2048, *, margin: float = 1e-7) -> OpennessVerdict:
    """Search for a straight line meeting every per-tau numerical range.

    For each line angle the per-tau ranges project to intervals; a line
    exists at that angle exactly when the intervals share a point.  If every
    angle fails by more than ``margin`` the range is certifiably open; the
    test never reports "closed".
    """
    if alpha_grid < 128 or tau_grid < 128:
        raise ValueError("grids of at least 128 are required")
    alphas = np.pi * np.arange(alpha_grid) / alpha_grid
    taus = np.exp(2j * np.pi * np.arange(tau_grid) / tau_grid)
    lmin, lmax = _imag_part_bounds(mat, alphas, taus)
    lo = lmin.max(axis=1)  # greatest lower interval end per angle
    hi = lmax.min(axis=1)  # least upper interval end per angle
    gaps = lo - hi  # positive = infeasible at this angle
    worst = int(np.argmin(gaps))
    if gaps[worst] > margin:
        return OpennessVerdict(status="open", witness=None,
                               margin=float(gaps[worst]))
    beta = 0.5 * (lo[worst] + hi[worst])
    return OpennessVerdict(status="inconclusive",
                           witness=(float(alphas[worst]), float(beta)),
                           margin=float(gaps[worst]))


def witness_violation(mat: MatrixSymbol, witness: tuple[float, float],
                      tau_grid: int = 2048) -> float:
    """Worst failure of a witness line to meet the per-tau ranges (<= 0 means
    the line really does cross every range)."""
    alpha, beta = witness
    taus = np.exp(2j * np.pi * np.arange(tau_grid) / tau_grid)
    lmin, lmax = _imag_part_bounds(mat, np.array([alpha]), taus)
    return float(np.max(np.maximum(lmin[0] - beta, beta - lmax[0])))


def hausdorff_distance(a: ConvexRegion, b: ConvexRegion,
                       ndirs: int = 1 << 16) -> float:
    """Hausdorff distance between convex regions via support sampling.

    For convex compact sets the Hausdorff distance equals the sup norm of the
    support-function difference; the sup is sampled on a uniform direction
    grid, which is exact to the grid resolution times the boundary curvature.
    """
    th = 2.0 * np.pi * np.arange(ndirs) / ndirs
    return float(np.max(np.abs(a.support(th) - b.support(th))))
