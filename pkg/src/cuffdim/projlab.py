"""Projection experiments on products of limit-set covers.

The limit set lives on the circle; mapped to the unit interval by angle
over 2*pi, the product of two covers is a family of axis-aligned boxes in
the unit square.  A cylinder arc that crosses angle zero maps to two unit
intervals, so the corresponding word pairs contribute up to four boxes;
pair counts and box counts are tracked separately.  This module projects
such covers onto lines, averages projected lengths over directions
(Favard length), certifies transversality of map families numerically,
samples points on complete geodesics inside the octagon, and estimates
box-counting dimensions of large point clouds.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .hyperbolic import GeometryError, chord_point, clip_chord, lift_light
from .pants import PantsGeometry
from .symbolic import cylinder_cover
from .thermo import CylinderMeasure, GibbsChain, gibbs_chain

POINT_CLOUD_MAGIC = b"CSPTS001"


# ---------------------------------------------------------------------------
# Box covers


@dataclass(frozen=True, eq=False)
class BoxCover:
    """Non-overlapping axis-aligned boxes in the unit square."""

    label: str
    depth: int
    x0: np.ndarray
    x1: np.ndarray
    y0: np.ndarray
    y1: np.ndarray
    masses: np.ndarray | None = None
    tags: tuple[np.ndarray, np.ndarray] | None = None  # (xi index, eta index)
    n_pairs: int | None = None  # word pairs behind the boxes, when applicable

    @property
    def n_boxes(self) -> int:
        return self.x0.shape[0]

    @property
    def total_area(self) -> float:
        return float(np.sum((self.x1 - self.x0) * (self.y1 - self.y0)))

    @property
    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        return 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)


def _unit_pieces(cov) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cylinder arcs as unit-interval pieces (parent index, lo, hi).

    The arc containing angle zero splits into a piece at each end of the
    interval; every other arc contributes a single piece.
    """
    lo = (cov.lo % (2.0 * math.pi)) / (2.0 * math.pi)
    hi = lo + cov.lengths / (2.0 * math.pi)
    wrap = hi > 1.0
    plain = ~wrap
    parent = np.concatenate(
        [np.flatnonzero(plain), np.flatnonzero(wrap), np.flatnonzero(wrap)]
    )
    p_lo = np.concatenate([lo[plain], lo[wrap], np.zeros(int(wrap.sum()))])
    p_hi = np.concatenate([hi[plain], np.ones(int(wrap.sum())), hi[wrap] - 1.0])
    return parent, p_lo, p_hi


def product_cover(
    p: PantsGeometry,
    n: int,
    restrict: bool = True,
    measure: CylinderMeasure | None = None,
) -> BoxCover:
    """Product of two depth-n cylinder covers as boxes in the unit square.

    Each word pair contributes the product of its unit-interval pieces;
    with ``restrict`` set, only pairs whose words start with different
    symbols are kept (the domain of the geodesic correspondence).  An
    optional cylinder measure attaches product masses, apportioned over
    split pieces by length fraction.
    """
    if not 1 <= n <= 9:
        raise GeometryError(f"product cover depth {n} outside [1, 9]")
    cov = cylinder_cover(p, n)
    parent, p_lo, p_hi = _unit_pieces(cov)

    m = len(parent)
    i = np.repeat(np.arange(m), m)
    j = np.tile(np.arange(m), m)
    wi, wj = parent[i], parent[j]
    if restrict:
        keep = cov.words[wi, 0] != cov.words[wj, 0]
        i, j, wi, wj = i[keep], j[keep], wi[keep], wj[keep]
        n_pairs = int(cov.n_words**2 - sum(
            int(np.sum(cov.words[:, 0] == s)) ** 2 for s in range(4)
        ))
    else:
        n_pairs = int(cov.n_words**2)
    masses = None
    if measure is not None:
        if measure.depth != n:
            raise GeometryError("measure depth does not match cover depth")
        frac = (p_hi - p_lo) / (cov.lengths[parent] / (2.0 * math.pi))
        masses = (measure.weights[wi] * frac[i]) * (measure.weights[wj] * frac[j])
        masses = masses / masses.sum()
    return BoxCover(
        label=f"omega-product-{n}",
        depth=n,
        x0=p_lo[i],
        x1=p_hi[i],
        y0=p_lo[j],
        y1=p_hi[j],
        masses=masses,
        tags=(wi, wj),
        n_pairs=n_pairs,
    )


def four_corner_cover(n: int) -> BoxCover:
    """Depth-n cover of the quarter-corner Cantor square: 4^n boxes of side 4^-n.

    The set is C x C where C keeps the first and last quarter of each
    interval; its projections average to zero length in the limit while
    single directions can stay fat (the direction of slope 1/2 projects
    onto a full interval at every depth).
    """
    if not 1 <= n <= 10:
        raise GeometryError(f"four-corner depth {n} outside [1, 10]")
    digits = np.array([0.0, 0.75])
    vals = np.zeros(1)
    for k in range(n):
        vals = (vals[:, None] + digits[None, :] * 4.0 ** -k).ravel()
    side = 4.0 ** -n
    x = np.repeat(vals, len(vals))
    y = np.tile(vals, len(vals))
    return BoxCover(
        label=f"four-corner-{n}",
        depth=n,
        x0=x,
        x1=x + side,
        y0=y,
        y1=y + side,
    )


def segment_cover(n: int) -> BoxCover:
    """Rectifiable control: 2^n boxes of side 2^-n along the main diagonal."""
    k = np.arange(2**n) / 2.0**n
    side = 2.0 ** -n
    return BoxCover(
        label=f"segment-{n}", depth=n, x0=k, x1=k + side, y0=k, y1=k + side
    )


def unit_square_cover() -> BoxCover:
    one = np.array([1.0])
    zero = np.array([0.0])
    return BoxCover(label="unit-square", depth=0, x0=zero, x1=one, y0=zero, y1=one)


# ---------------------------------------------------------------------------
# Projections and Favard averages


def project_cover_length(cover: BoxCover, lam: float) -> float:
    """Length of the projection of the box union onto the direction ``lam``.

    Boxes project to intervals; intervals are merged exactly (gap
    tolerance zero) and the total length of the union is returned.
    """
    if cover.n_boxes == 0:
        return 0.0
    c, s = math.cos(lam), math.sin(lam)
    cx, cy = cover.centers
    mid = cx * c + cy * s
    hw = 0.5 * (cover.x1 - cover.x0) * abs(c) + 0.5 * (cover.y1 - cover.y0) * abs(s)
    lo, hi = mid - hw, mid + hw
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    runmax = np.maximum.accumulate(hi)
    prev = np.concatenate(([-np.inf], runmax[:-1]))
    return float(np.sum(np.maximum(0.0, hi - np.maximum(lo, prev))))


def lambda_grid(grid: int) -> np.ndarray:
    return np.arange(grid) * math.pi / grid


def project_lengths(cover: BoxCover, lams) -> np.ndarray:
    return np.array([project_cover_length(cover, float(l)) for l in lams])


def favard_estimate(cover: BoxCover, grid: int = 256) -> float:
    """Average projected length over the uniform direction grid on [0, pi).

    The integrand is pi-periodic, so the trapezoid rule with periodic
    closure equals the plain grid mean.
    """
    if grid < 16:
        raise GeometryError(f"direction grid {grid} below 16")
    return float(np.mean(project_lengths(cover, lambda_grid(grid))))


@dataclass(frozen=True)
class ProjectionProfile:
    """Per-direction projected lengths of a cover family across depths."""

    label: str
    lambdas: np.ndarray
    depths: tuple[int, ...]
    lengths: dict[int, np.ndarray]

    def favard(self, depth: int) -> float:
        return float(np.mean(self.lengths[depth]))

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("depth,lambda,length\n")
        for d in self.depths:
            for lam, ln in zip(self.lambdas, self.lengths[d]):
                out.write(f"{d},{lam:.17g},{ln:.17g}\n")
        return out.getvalue()


def projection_profile(covers: dict[int, BoxCover], grid: int = 256, label: str = "") -> ProjectionProfile:
    depths = tuple(sorted(covers))
    lams = lambda_grid(grid)
    lengths = {d: project_lengths(covers[d], lams) for d in depths}
    if not label and depths:
        label = covers[depths[0]].label
    return ProjectionProfile(label=label, lambdas=lams, depths=depths, lengths=lengths)


# ---------------------------------------------------------------------------
# Cone densities


def cone_density(cover: BoxCover, a, lam: float, s: float, r: float) -> float:
    """Normalized mass of cover boxes inside the cone X(a, r, lam, s).

    The cone collects points x with |proj_lam(x - a)| < s |x - a| within
    the ball of radius r; box membership is decided at centers, box mass
    defaults to the x-side length (a length-scale proxy for 1-dimensional
    mass), and the result is scaled by 1/(r s).
    """
    if not (0.0 < s < 1.0) or r <= 0.0:
        raise GeometryError("cone parameters need 0 < s < 1 and r > 0")
    ax, ay = (a.real, a.imag) if isinstance(a, complex) else (float(a[0]), float(a[1]))
    inside = (cover.x0 <= ax) & (ax <= cover.x1) & (cover.y0 <= ay) & (ay <= cover.y1)
    if not bool(np.any(inside)):
        raise GeometryError("cone apex is not inside any cover box")
    cx, cy = cover.centers
    dx, dy = cx - ax, cy - ay
    dist = np.hypot(dx, dy)
    proj = dx * math.cos(lam) + dy * math.sin(lam)
    mask = (np.abs(proj) < s * dist) & (dist <= r) & (dist > 0.0)
    mass = cover.masses if cover.masses is not None else (cover.x1 - cover.x0)
    return float(np.sum(mass[mask])) / (r * s)


# ---------------------------------------------------------------------------
# Transversal families


@dataclass(frozen=True, eq=False)
class TransversalFamilySpec:
    """Parametrized family of maps R^n -> R^m over an open parameter box.

    Evaluators are vectorized over points: for a parameter vector lam of
    shape (l,) and points of shape (N, n), ``P`` returns (N, m), ``DP``
    returns (N, m, l) and ``D2P`` returns (N, m, l, l).
    """

    name: str
    n_params: int  # l
    n_range: int  # m
    n_space: int  # n
    domain_lo: np.ndarray
    domain_hi: np.ndarray
    P: callable = field(repr=False, default=None)
    DP: callable = field(repr=False, default=None)
    D2P: callable = field(repr=False, default=None)

    def __post_init__(self):
        if not (self.n_range <= self.n_params and self.n_range < self.n_space):
            raise GeometryError("transversal family needs m <= l and m < n")

    def T(self, lam: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(x - y, axis=-1)
        return (self.P(lam, x) - self.P(lam, y)) / d[:, None]

    def DT(self, lam: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(x - y, axis=-1)
        return (self.DP(lam, x) - self.DP(lam, y)) / d[:, None, None]

    def D2T(self, lam: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(x - y, axis=-1)
        return (self.D2P(lam, x) - self.D2P(lam, y)) / d[:, None, None, None]

    def evaluator_consistency(self, points: np.ndarray, n_lambda: int = 5, h: float = 1e-6) -> float:
        """Max deviation of finite-difference DP from the analytic DP."""
        worst = 0.0
        for lam in _lambda_probe(self, n_lambda):
            analytic = self.DP(lam, points)
            for k in range(self.n_params):
                e = np.zeros(self.n_params)
                e[k] = h
                fd = (self.P(lam + e, points) - self.P(lam - e, points)) / (2.0 * h)
                worst = max(worst, float(np.max(np.abs(fd - analytic[:, :, k]))))
        return worst


def _lambda_probe(fam: TransversalFamilySpec, count: int) -> list[np.ndarray]:
    ts = (np.arange(count) + 0.5) / count
    return [fam.domain_lo + t * (fam.domain_hi - fam.domain_lo) for t in ts]


def direction_family() -> TransversalFamilySpec:
    """Projections of the plane onto the rotating direction (cos t, sin t)."""

    def pval(lam, x):
        return (x[:, 0] * math.cos(lam[0]) + x[:, 1] * math.sin(lam[0]))[:, None]

    def dp(lam, x):
        return (-x[:, 0] * math.sin(lam[0]) + x[:, 1] * math.cos(lam[0]))[:, None, None]

    def d2p(lam, x):
        return -pval(lam, x)[:, :, None, None]

    return TransversalFamilySpec(
        name="directions",
        n_params=1,
        n_range=1,
        n_space=2,
        domain_lo=np.array([0.0]),
        domain_hi=np.array([math.pi]),
        P=pval,
        DP=dp,
        D2P=d2p,
    )


def constant_family() -> TransversalFamilySpec:
    """Degenerate control: the first coordinate, independent of the parameter."""

    def pval(lam, x):
        return x[:, 0:1]

    def dp(lam, x):
        return np.zeros((x.shape[0], 1, 1))

    def d2p(lam, x):
        return np.zeros((x.shape[0], 1, 1, 1))

    return TransversalFamilySpec(
        name="constant",
        n_params=1,
        n_range=1,
        n_space=2,
        domain_lo=np.array([0.0]),
        domain_hi=np.array([math.pi]),
        P=pval,
        DP=dp,
        D2P=d2p,
    )


FAMILIES = {"directions": direction_family, "constant": constant_family}


@dataclass(frozen=True)
class TransversalityReport:
    family: str
    certified: bool
    c_t: float | None
    c1: float
    c2: float
    c_l: float
    margin: float | None
    candidates: tuple[float, ...]
    n_points: int
    n_pairs: int
    excluded_pairs: int
    lam_grid: int
    separation: float
    consistency_residual: float
    det_reduction: str

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "certified": self.certified,
            "C_T": self.c_t,
            "C_1": self.c1,
            "C_2": self.c2,
            "C_L": self.c_l,
            "margin": self.margin,
            "candidates": list(self.candidates),
            "n_points": self.n_points,
            "n_pairs": self.n_pairs,
            "excluded_pairs": self.excluded_pairs,
            "lambda_grid": self.lam_grid,
            "separation": self.separation,
            "evaluator_consistency": self.consistency_residual,
            "det_reduction": self.det_reduction,
        }


def default_point_sample(n_space: int, per_axis: int = 8) -> np.ndarray:
    """Regular grid in the unit cube, offset from the faces."""
    axes = [np.linspace(0.06, 0.94, per_axis)] * n_space
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def transversality_certify(
    fam: TransversalFamilySpec,
    points: np.ndarray | None = None,
    lam_grid: int = 256,
    sep: float | None = None,
    candidates=(0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1),
    report_tol: float = 1e-9,
) -> TransversalityReport:
    """Grid certification of the derivative bounds and the determinant gap.

    Estimates the derivative bounds as grid maxima and certifies the
    largest candidate C_T for which every sampled (lambda, x, y) with
    |T| <= C_T has det(D T D T^t) >= C_T^2 - report_tol.  For m = 1 the
    determinant reduces to the squared norm of the parameter gradient of
    T, which is what the report records.
    """
    if lam_grid < 32:
        raise GeometryError(f"lambda grid {lam_grid} below 32")
    if points is None:
        points = default_point_sample(fam.n_space)
    points = np.asarray(points, dtype=float)

    consistency = fam.evaluator_consistency(points[:: max(1, len(points) // 16)])
    if consistency > 1e-6:
        raise GeometryError(
            f"family evaluators are inconsistent: finite-difference vs analytic "
            f"derivative mismatch {consistency:.2e}"
        )

    n_pts = points.shape[0]
    ii, jj = np.triu_indices(n_pts, k=1)
    d = np.linalg.norm(points[ii] - points[jj], axis=-1)
    diam = float(d.max())
    if sep is None:
        sep = diam * 2.0**-10
    keep = d >= sep
    excluded = int(np.sum(~keep))
    ii, jj = ii[keep], jj[keep]

    lams = _lambda_probe(fam, lam_grid)
    c1 = c2 = c_l = 0.0
    t_norms = []
    dets = []
    d2t_norms = []
    for lam in lams:
        pv = fam.P(lam, points)
        dpv = fam.DP(lam, points)
        d2pv = fam.D2P(lam, points)
        c1 = max(c1, float(np.max(np.linalg.norm(dpv, axis=(1, 2)))))
        c2 = max(c2, float(np.max(np.linalg.norm(d2pv.reshape(n_pts, -1), axis=1))))
        dist = np.linalg.norm(points[ii] - points[jj], axis=-1)
        tval = (pv[ii] - pv[jj]) / dist[:, None]
        dtv = (dpv[ii] - dpv[jj]) / dist[:, None, None]
        d2tv = (d2pv[ii] - d2pv[jj]) / dist[:, None, None, None]
        gram = np.einsum("pml,pnl->pmn", dtv, dtv)
        dets.append(np.linalg.det(gram))
        t_norms.append(np.linalg.norm(tval, axis=1))
        d2t_norms.append(np.linalg.norm(d2tv.reshape(len(ii), -1), axis=1))
    t_norms = np.concatenate(t_norms)
    dets = np.concatenate(dets)
    c_l = float(np.max(np.concatenate(d2t_norms)))

    certified_ct = None
    margin = None
    for ct in candidates:
        triggered = t_norms <= ct
        if not np.any(triggered):
            certified_ct, margin = ct, math.inf
            break
        worst = float(np.min(dets[triggered]) - ct * ct)
        if worst >= -report_tol:
            certified_ct, margin = ct, worst
            break
    return TransversalityReport(
        family=fam.name,
        certified=certified_ct is not None,
        c_t=certified_ct,
        c1=c1,
        c2=c2,
        c_l=c_l,
        margin=margin,
        candidates=tuple(float(c) for c in candidates),
        n_points=n_pts,
        n_pairs=int(len(ii)),
        excluded_pairs=excluded,
        lam_grid=lam_grid,
        separation=float(sep),
        consistency_residual=consistency,
        det_reduction="det(DT DT^t); for m=1 this is |grad_lambda T|^2",
    )


# ---------------------------------------------------------------------------
# Sampling points on complete geodesics


@dataclass(frozen=True, eq=False)
class GeodesicPointSample:
    points: np.ndarray  # complex disk coordinates
    lengths: np.ndarray  # chord length inside the octagon per sample
    time_fractions: np.ndarray  # u / length, for the uniformity diagnostic
    resampled: int
    attempts: int


def _extend_words(chain: GibbsChain, idx: np.ndarray, rng, total_len: int) -> np.ndarray:
    """Word symbols for chain states extended to total_len by chain steps."""
    n = chain.depth
    words = chain.skeleton.cover.words[idx].astype(np.uint8)
    if total_len <= n:
        return words[:, :total_len]
    cur = idx.copy()
    cols = chain.skeleton.cols
    out = np.empty((len(idx), total_len), dtype=np.uint8)
    out[:, :n] = words
    cum = np.cumsum(chain.transition_probs, axis=1)
    for k in range(n, total_len):
        r = rng.random(len(idx))
        j = (r[:, None] > cum[cur]).sum(axis=1)
        last = out[:, k - 1].astype(np.int64)
        out[:, k] = j + (j >= (last ^ 1))
        cur = cols[cur, j]
    return out


def _realize_word_endpoints(p: PantsGeometry, words: np.ndarray) -> np.ndarray:
    """Cylinder-arc midpoints of word rows, as unit complex numbers."""
    mids = np.exp(1j * (p._arc_lo + 0.5 * p._arc_len))
    z = mids[words[:, -1].astype(np.int64)]
    gu = np.asarray([g.inverse().u for g in p.gens])
    gv = np.asarray([g.inverse().v for g in p.gens])
    for k in range(words.shape[1] - 2, -1, -1):
        s = words[:, k].astype(np.int64)
        u, v = gu[s], gv[s]
        z = (u * z + v) / (np.conj(v) * z + np.conj(u))
        z /= np.abs(z)
    return z


def sample_complete_geodesic_points(
    p: PantsGeometry,
    mu: CylinderMeasure | GibbsChain,
    count: int,
    seed: int,
    word_len: int = 14,
    max_attempt_factor: int = 10,
) -> GeodesicPointSample:
    """Points of complete geodesics inside the octagon, flow-time uniform.

    Draws independent forward/backward words from the stationary Gibbs
    chain (backward word conditioned to start with a different symbol),
    realizes the geodesic from cylinder midpoints, clips it against the
    octagon and emits the point at a uniform arclength along the chord.
    Non-crossing realizations are resampled and counted.  Deterministic
    for a fixed seed.
    """
    if count > 10**7:
        raise GeometryError(f"sample count {count} above 1e7")
    if isinstance(mu, CylinderMeasure):
        chain = gibbs_chain(p, mu.s, mu.depth)
    else:
        chain = mu
    if chain.depth < 4:
        raise GeometryError("sampling needs a chain of depth >= 4")
    word_len = max(word_len, chain.depth)
    rng = np.random.Generator(np.random.Philox(key=seed))
    pi_cum = np.cumsum(chain.stationary)
    pi_cum[-1] = 1.0
    normals = p.interior_normals

    pts = np.empty(count, dtype=complex)
    lens = np.empty(count)
    fracs = np.empty(count)
    need = np.arange(count)
    resampled = 0
    attempts = 0
    while len(need):
        m = len(need)
        attempts += m
        if attempts > max_attempt_factor * count:
            raise GeometryError(
                f"geodesic sampler exceeded {max_attempt_factor}x attempt budget"
            )
        xi_idx = np.searchsorted(pi_cum, rng.random(m))
        eta_idx = np.searchsorted(pi_cum, rng.random(m))
        first = chain.skeleton.cover.words[:, 0]
        clash = first[xi_idx] == first[eta_idx]
        while np.any(clash):
            eta_idx[clash] = np.searchsorted(pi_cum, rng.random(int(clash.sum())))
            clash = first[xi_idx] == first[eta_idx]
        xi_words = _extend_words(chain, xi_idx, rng, word_len)
        eta_words = _extend_words(chain, eta_idx, rng, word_len)
        z_fwd = _realize_word_endpoints(p, xi_words)
        z_back = _realize_word_endpoints(p, eta_words)
        l_fwd = lift_light(z_fwd)
        l_back = lift_light(z_back)
        t_in, t_out, _, _ = clip_chord(l_back, l_fwd, normals)
        good = np.isfinite(t_in) & np.isfinite(t_out) & (t_in < t_out)
        u = rng.random(m)
        rows = need[good]
        ell = (t_out - t_in)[good]
        pts[rows] = chord_point(l_back[good], l_fwd[good], t_in[good] + u[good] * ell)
        lens[rows] = ell
        fracs[rows] = u[good]
        resampled += int(np.sum(~good))
        need = need[~good]
    return GeodesicPointSample(
        points=pts,
        lengths=lens,
        time_fractions=fracs,
        resampled=resampled,
        attempts=attempts,
    )


def ks_uniform_statistic(values: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of samples in [0, 1) from uniform."""
    from scipy.stats import kstest

    return float(kstest(values, "uniform").statistic)


# ---------------------------------------------------------------------------
# Box dimension of point clouds


@dataclass(frozen=True)
class BoxDimensionFit:
    estimate: float
    scales: np.ndarray
    counts: np.ndarray
    used_scales: np.ndarray
    fit_residual: float


def box_dimension(points: np.ndarray, scales=None, min_points: int = 100_000) -> BoxDimensionFit:
    """Box-counting dimension of a planar point cloud.

    Counts occupied boxes of each dyadic scale and fits the log-log slope,
    dropping the coarsest and finest scale from the fit.
    """
    pts = np.asarray(points)
    if np.iscomplexobj(pts):
        xy = np.stack([pts.real, pts.imag], axis=-1)
    else:
        xy = pts.astype(float)
    if xy.shape[0] < min_points:
        raise GeometryError(f"box dimension needs at least {min_points} points")
    if scales is None:
        scales = 2.0 ** -np.arange(3, 9)
    scales = np.sort(np.asarray(scales, dtype=float))[::-1]
    if len(scales) < 4:
        raise GeometryError("box dimension needs at least 4 scales")
    origin = xy.min(axis=0)
    counts = []
    for s in scales:
        ij = np.floor((xy - origin) / s).astype(np.int64)
        key = ij[:, 0] * (2**31) + ij[:, 1]
        counts.append(len(np.unique(key)))
    counts = np.asarray(counts)
    x = np.log(1.0 / scales)[1:-1]
    y = np.log(counts)[1:-1]
    if len(x) < 3:
        raise GeometryError("fewer than 3 usable scales after dropping the ends")
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return BoxDimensionFit(
        estimate=float(slope),
        scales=scales,
        counts=counts,
        used_scales=scales[1:-1],
        fit_residual=resid,
    )


# ---------------------------------------------------------------------------
# Point-cloud files


def write_point_cloud(path: str, points: np.ndarray) -> None:
    """Binary little-endian float64 (x, y) pairs behind an 8-byte magic."""
    pts = np.asarray(points)
    if np.iscomplexobj(pts):
        xy = np.stack([pts.real, pts.imag], axis=-1)
    else:
        xy = pts.astype(float)
    with open(path, "wb") as fh:
        fh.write(POINT_CLOUD_MAGIC)
        fh.write(xy.astype("<f8").tobytes())


def read_point_cloud(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != POINT_CLOUD_MAGIC:
            raise GeometryError(f"bad point cloud magic {magic!r}")
        raw = fh.read()
    xy = np.frombuffer(raw, dtype="<f8").reshape(-1, 2)
    return xy[:, 0] + 1j * xy[:, 1]
