"""Transfer operators, pressure, limit-set dimension and Gibbs weights.

The boundary map on the four Schottky arcs is an expanding Markov map
whose invariant Cantor set has Hausdorff dimension delta, the unique root
of the pressure function s -> P(-s log|phi'|).  The pressure is realized
as the log spectral radius of a weighted transition matrix on depth-n
reduced words: the transition w -> w' (drop the first symbol, append one)
carries the contracting inverse-branch derivative of w's first symbol,
evaluated at the midpoint of the target cylinder arc and raised to the
power s.  Refining the word depth refines the discretization; the root is
tracked across depths until it stabilizes.

All derivative bookkeeping is done on log scale: cuff lengths up to 20
produce branch derivatives spanning hundreds of orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq

from .config import DEFAULT, Tolerances
from .hyperbolic import GeometryError
from .pants import PantsGeometry, build_pants
from .symbolic import CylinderCover, cylinder_cover

LOG3 = math.log(3.0)


# ---------------------------------------------------------------------------
# Transition skeleton (shared by every s at a given depth)


@dataclass(frozen=True, eq=False)
class TransitionSkeleton:
    depth: int
    cover: CylinderCover
    cols: np.ndarray  # (N, 3) successor indices in lex order
    log_deriv: np.ndarray  # (N, 3) log of the inverse-branch derivative


def transition_skeleton(p: PantsGeometry, n: int) -> TransitionSkeleton:
    if not 1 <= n <= 10:
        raise GeometryError(f"transfer depth {n} outside [1, 10]")
    cached = p._cache.get(("skeleton", n))
    if cached is not None:
        return cached

    cover = cylinder_cover(p, n)
    w = cover.words.astype(np.int64)
    nwords = w.shape[0]
    j = np.arange(3, dtype=np.int64)
    last_bar = (w[:, -1] ^ 1)[:, None]
    if n == 1:
        cols = j[None, :] + (j[None, :] >= last_bar)
    else:
        rem = np.arange(nwords, dtype=np.int64) - w[:, 0] * 3 ** (n - 1)
        base = (w[:, 1] * 3 ** (n - 1) + (rem % 3 ** (n - 2)) * 3)[:, None]
        cols = base + j[None, :]

    mids = cover.midpoints
    u = np.asarray([g.u for g in p.gens])[w[:, 0]][:, None]
    v = np.asarray([g.v for g in p.gens])[w[:, 0]][:, None]
    log_deriv = -2.0 * np.log(np.abs(u - np.conj(v) * mids[cols]))

    skel = TransitionSkeleton(depth=n, cover=cover, cols=cols, log_deriv=log_deriv)
    p._cache[("skeleton", n)] = skel
    return skel


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    depth: int
    s: float
    matrix: sp.csr_matrix
    skeleton: TransitionSkeleton


def transfer_matrix(p: PantsGeometry, s: float, n: int) -> TransferMatrix:
    """Weighted depth-n transition matrix at exponent s."""
    if not 0.0 <= s <= 1.5:
        raise GeometryError(f"exponent s={s} outside [0, 1.5]")
    skel = transition_skeleton(p, n)
    nwords = skel.cols.shape[0]
    data = np.exp(s * skel.log_deriv).ravel()
    indptr = np.arange(0, 3 * nwords + 1, 3)
    mat = sp.csr_matrix(
        (data, skel.cols.ravel(), indptr), shape=(nwords, nwords)
    )
    return TransferMatrix(depth=n, s=s, matrix=mat, skeleton=skel)


# ---------------------------------------------------------------------------
# Perron data and pressure


def _perron(mat: sp.csr_matrix, tol: Tolerances = DEFAULT) -> tuple[float, np.ndarray]:
    """Perron eigenvalue and positive right eigenvector by power iteration."""
    n = mat.shape[0]
    x = np.full(n, 1.0 / n)
    lam = 1.0
    for _ in range(tol.power_maxiter):
        y = mat @ x
        lam = y.sum()
        res = np.abs(y - lam * x).sum()
        x = y / lam
        if res <= tol.power_rtol * lam:
            return lam, x
    raise GeometryError(
        f"power iteration did not reach residual {tol.power_rtol} "
        f"in {tol.power_maxiter} steps"
    )


def pressure(p: PantsGeometry, s: float, n: int, tol: Tolerances = DEFAULT) -> float:
    """Depth-n pressure of -s log|phi'|: log of the Perron eigenvalue."""
    lam, _ = _perron(transfer_matrix(p, s, n).matrix, tol)
    return math.log(lam)


def pressure_curve(p: PantsGeometry, s_values, n: int) -> list[tuple[float, float]]:
    return [(float(s), pressure(p, float(s), n)) for s in s_values]


# ---------------------------------------------------------------------------
# Dimension as the pressure root


@dataclass(frozen=True)
class DeltaResult:
    delta: float
    depth_used: int
    roots: tuple[tuple[int, float], ...]
    converged: bool
    last_gap: float
    pressure_residual: float

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "depth_used": self.depth_used,
            "roots": {str(d): r for d, r in self.roots},
            "converged": self.converged,
            "last_gap": self.last_gap,
            "pressure_residual": self.pressure_residual,
        }


def pressure_root(p: PantsGeometry, n: int, bracket=(0.001, 0.999)) -> float:
    """Root of the depth-n pressure in s."""
    lo, hi = bracket
    f_lo, f_hi = pressure(p, lo, n), pressure(p, hi, n)
    if f_lo <= 0.0 or f_hi >= 0.0:
        raise GeometryError(
            f"pressure has no sign change on [{lo}, {hi}] at depth {n}: "
            f"P({lo})={f_lo:.4f}, P({hi})={f_hi:.4f}"
        )
    return brentq(lambda s: pressure(p, s, n), lo, hi, xtol=1e-12, rtol=8.9e-16)


def hausdorff_delta(
    p: PantsGeometry, tol: float = 1e-4, depths: tuple[int, ...] = (4, 6, 8, 10)
) -> DeltaResult:
    """Limit-set dimension: pressure roots refined over the depth ladder.

    Stops as soon as successive roots differ by less than ``tol``; the
    result carries the per-depth roots so the refinement tail is visible.
    """
    if tol < 1e-6:
        raise GeometryError(f"tolerance {tol} below the supported 1e-6")
    roots: list[tuple[int, float]] = []
    gap = math.inf
    for n in depths:
        r = pressure_root(p, n)
        roots.append((n, r))
        if len(roots) >= 2:
            gap = abs(roots[-1][1] - roots[-2][1])
            if gap < tol:
                break
    n_used, delta = roots[-1]
    residual = abs(pressure(p, delta, n_used))
    return DeltaResult(
        delta=delta,
        depth_used=n_used,
        roots=tuple(roots),
        converged=gap < tol,
        last_gap=gap,
        pressure_residual=residual,
    )


def moran_cover_counts(p: PantsGeometry, eps_ladder) -> tuple[np.ndarray, np.ndarray]:
    """Minimal cylinder-cover counts of the limit set at each scale.

    A cylinder is minimal for scale eps when its arc is shorter than eps
    but its parent's is not; the count of minimal cylinders is a covering
    number N(eps) whose log-log slope against 1/eps estimates the
    dimension.  Cylinders are refined breadth-first, each node carrying
    the composed inverse-branch map so arc lengths come out of one exact
    chordal contraction formula per node.
    """
    eps = np.sort(np.asarray(eps_ladder, dtype=float))
    diff = np.zeros(len(eps) + 1, dtype=np.int64)
    arc_p = np.exp(1j * p._arc_lo)
    arc_q = np.exp(1j * (p._arc_lo + p._arc_len))
    arc_chord = np.abs(arc_q - arc_p)
    giu = np.asarray([g.inverse().u for g in p.gens])
    giv = np.asarray([g.inverse().v for g in p.gens])

    u = np.ones(4, complex)
    v = np.zeros(4, complex)
    last = np.arange(4)
    parent_len = np.full(4, 2.0 * math.pi)
    while len(u):
        x, y = arc_p[last], arc_q[last]
        den_x = np.abs(np.conj(v) * x + np.conj(u))
        den_y = np.abs(np.conj(v) * y + np.conj(u))
        chord = arc_chord[last] / (den_x * den_y)
        length = 2.0 * np.arcsin(np.minimum(0.5 * chord, 1.0))
        i_lo = np.searchsorted(eps, length, side="right")
        i_hi = np.searchsorted(eps, parent_len, side="right")
        np.add.at(diff, i_lo, 1)
        np.add.at(diff, i_hi, -1)
        active = length >= eps[0]
        u, v, last, length = u[active], v[active], last[active], length[active]
        if not len(u):
            break
        nu = u * giu[last] + v * np.conj(giv[last])
        nv = u * giv[last] + v * np.conj(giu[last])
        parts = []
        for tau in range(4):
            m = (last ^ 1) != tau
            parts.append((nu[m], nv[m], np.full(int(m.sum()), tau), length[m]))
        u = np.concatenate([t[0] for t in parts])
        v = np.concatenate([t[1] for t in parts])
        last = np.concatenate([t[2] for t in parts])
        parent_len = np.concatenate([t[3] for t in parts])
    return eps, np.cumsum(diff)[:-1]


def cover_scaling_delta(p: PantsGeometry, max_leaves: int = 250_000):
    """Dimension estimate from cover scaling, independent of the operator.

    Least-squares slope of log N(eps) against log(1/eps) over a dyadic
    ladder of scales, where N(eps) counts minimal covering cylinders.  The
    scale floor is chosen from a cheap low-depth root so the leaf count
    stays near ``max_leaves``.
    """
    rough = pressure_root(p, 5)
    k_max = max(10, int(math.log2(max_leaves) / rough))
    eps = 2.0 ** -np.arange(4, k_max + 1)
    eps, counts = moran_cover_counts(p, eps)
    good = counts > 0
    x = np.log(1.0 / eps[good])[2:]  # drop the coarsest transient scales
    y = np.log(counts[good])[2:]
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), {
        "eps": eps[good].tolist(),
        "counts": counts[good].tolist(),
        "intercept": float(intercept),
        "rough_root": rough,
    }


# ---------------------------------------------------------------------------
# Gibbs weights and the stationary chain


@dataclass(frozen=True, eq=False)
class CylinderMeasure:
    """Probability weights on depth-n cylinders, aligned with the cover."""

    depth: int
    weights: np.ndarray
    cover: CylinderCover
    s: float

    def weight_of(self, word) -> float:
        return float(self.weights[self.cover.index_of(word)])

    def symbol_marginals(self) -> np.ndarray:
        out = np.zeros(4)
        np.add.at(out, self.cover.words[:, 0], self.weights)
        return out


@dataclass(frozen=True, eq=False)
class GibbsChain:
    """Stationary Markov chain on depth-n words induced by the transfer matrix."""

    depth: int
    s: float
    skeleton: TransitionSkeleton
    transition_probs: np.ndarray  # (N, 3)
    stationary: np.ndarray  # (N,)
    eigenvalue: float


def gibbs_chain(p: PantsGeometry, s: float, n: int, tol: Tolerances = DEFAULT) -> GibbsChain:
    tm = transfer_matrix(p, s, n)
    lam, right = _perron(tm.matrix, tol)
    _, left = _perron(tm.matrix.T.tocsr(), tol)
    skel = tm.skeleton
    weights = np.exp(s * skel.log_deriv)  # (N, 3) branch weights
    probs = weights * right[skel.cols] / (lam * right[:, None])
    probs = probs / probs.sum(axis=1, keepdims=True)  # exact row normalization
    pi = left * right
    pi = pi / pi.sum()
    return GibbsChain(
        depth=n,
        s=s,
        skeleton=skel,
        transition_probs=probs,
        stationary=pi,
        eigenvalue=lam,
    )


def gibbs_measure(p: PantsGeometry, s: float, n: int, tol: Tolerances = DEFAULT) -> CylinderMeasure:
    """Cylinder weights of the equilibrium state at exponent s.

    Meaningful near the pressure root, where the measure is the invariant
    Gibbs measure of the boundary map; weights are products of left and
    right Perron vector entries, normalized.
    """
    chain = gibbs_chain(p, s, n, tol)
    return CylinderMeasure(
        depth=n, weights=chain.stationary, cover=chain.skeleton.cover, s=s
    )


def entropy_identity_check(p: PantsGeometry, delta: float, n: int) -> float:
    """Relative residual of h - delta * chi for the depth-n Gibbs chain.

    h is the chain entropy rate and chi the Lyapunov integral of the
    boundary map; both are exact functionals of the stationary chain.
    """
    chain = gibbs_chain(p, delta, n)
    pi, probs = chain.stationary, chain.transition_probs
    h = -float(np.sum(pi[:, None] * probs * np.log(probs)))
    chi = -float(np.sum(pi[:, None] * probs * chain.skeleton.log_deriv))
    if chi <= 0:
        raise GeometryError("nonpositive Lyapunov integral: map is not expanding")
    return abs(h - delta * chi) / chi


# ---------------------------------------------------------------------------
# The dimension locus


def _delta_at(cuffs, depths, tol) -> float:
    return hausdorff_delta(build_pants(cuffs), tol=tol, depths=depths).delta


def _bracketed_solve(g, xs, target: float, tol: float, what: str) -> float:
    """Coarse scan for a sign change of g, then hybrid root refinement.

    Scan points where the dimension itself is not computable (degenerate
    geometry, eigen-solver failure) are skipped but reported when no
    bracket exists.
    """
    vals = []
    for x in xs:
        try:
            vals.append(g(x))
        except GeometryError:
            vals.append(None)
    for x0, x1, v0, v1 in zip(xs, xs[1:], vals, vals[1:]):
        if v0 is None or v1 is None:
            continue
        if v0 == 0.0:
            return float(x0)
        if v0 * v1 < 0:
            root = brentq(g, x0, x1, xtol=1e-10, rtol=8.9e-16)
            if abs(g(root)) > tol:
                raise GeometryError(
                    f"{what} converged but |delta-target|={abs(g(root)):.2e} > {tol}"
                )
            return float(root)
    scanned = ", ".join(
        f"{x:.3f}: " + ("failed" if v is None else f"delta={v + target:.4f}")
        for x, v in zip(xs, vals)
    )
    raise GeometryError(f"no delta={target} bracket for {what}; scan: {scanned}")


def solve_locus(
    a: float,
    b: float,
    target: float,
    tol: float = 1e-3,
    depths: tuple[int, ...] = (6, 8),
    c_range: tuple[float, float] = (0.05, 20.0),
    scan_points: int = 8,
) -> float:
    """Third cuff length c with delta(a, b, c) = target.

    Monotonicity of delta in c is not assumed: a coarse geometric scan
    brackets a sign change first, then hybrid root-finding refines it.
    """
    if not 0.05 < target < 0.95:
        raise GeometryError(f"target {target} outside (0.05, 0.95)")

    def g(c: float) -> float:
        return _delta_at((a, b, c), depths, tol=1e-5) - target

    cs = np.geomspace(c_range[0], c_range[1], scan_points)
    return _bracketed_solve(g, cs, target, tol, f"locus in c over {c_range}")


def solve_locus_symmetric(
    target: float,
    tol: float = 1e-3,
    depths: tuple[int, ...] = (6, 8),
    a_range: tuple[float, float] = (0.2, 12.0),
    scan_points: int = 8,
) -> float:
    """Cuff length a with delta(a, a, a) = target (one-parameter locus slice)."""
    if not 0.05 < target < 0.95:
        raise GeometryError(f"target {target} outside (0.05, 0.95)")

    def g(av: float) -> float:
        return _delta_at((av, av, av), depths, tol=1e-5) - target

    xs = np.geomspace(a_range[0], a_range[1], scan_points)
    return _bracketed_solve(g, xs, target, tol, f"symmetric locus over {a_range}")
