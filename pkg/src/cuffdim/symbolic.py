"""Reduced words, boundary expansions, cylinder arcs and cutting sequences.

Words are tuples over the symbols ALPHA=0, ABAR=1, BETA=2, BBAR=3; a word
is reduced when no symbol is followed by its bar.  The cylinder of a word
w is the set of circle points whose boundary expansion starts with w; its
arc is obtained by pushing the arc of the last symbol through the
contracting inverse branches of the preceding symbols.  Arc lengths are
tracked multiplicatively through the exact chordal contraction factor of
each Moebius branch, so they stay accurate at depths where the naive
endpoint difference would lose all precision.

Geodesics are realized from symbolic endpoint data and traced through the
octagon by repeated clipping: after each crossing the geodesic is pulled
back into the fundamental octagon, which keeps coordinates bounded no
matter how long the traced word is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hyperbolic import (
    TWO_PI,
    BoundaryPoint,
    Geodesic,
    GeometryError,
    MoebiusTransform,
    apply_many,
    classify_isometry,
    clip_chord,
    lift_light,
)
from .pants import (
    ALPHA,
    ABAR,
    BETA,
    BBAR,
    CUFF_SIDE_INDICES,
    SEAM_SIDE_SYMBOL,
    SYMBOL_CHARS,
    Arc,
    PantsGeometry,
    bar,
    expansion_map_step,
)

Word = tuple[int, ...]

MAX_TRACE_LEN = 200


# ---------------------------------------------------------------------------
# Word utilities


def is_reduced(word) -> bool:
    return all(word[i + 1] != bar(word[i]) for i in range(len(word) - 1))


def check_reduced(word) -> Word:
    word = tuple(int(s) for s in word)
    if any(s not in (0, 1, 2, 3) for s in word):
        raise GeometryError(f"invalid symbols in word {word}")
    if not is_reduced(word):
        raise GeometryError(f"word {word} is not reduced")
    return word


def word_from_string(s: str) -> Word:
    try:
        return tuple(SYMBOL_CHARS.index(ch) for ch in s)
    except ValueError:
        raise GeometryError(f"word string {s!r} has letters outside {SYMBOL_CHARS!r}")


def word_to_string(word) -> str:
    return "".join(SYMBOL_CHARS[s] for s in word)


def bar_reverse(word) -> Word:
    """Reverse the word and bar every symbol (the time-reversal involution)."""
    return tuple(bar(s) for s in reversed(word))


# ---------------------------------------------------------------------------
# Boundary expansion


def boundary_expansion(p: PantsGeometry, t, max_n: int) -> Word:
    """Itinerary of a circle point under the boundary map, up to max_n symbols."""
    theta = t.theta if isinstance(t, BoundaryPoint) else float(t) % TWO_PI
    out = []
    for _ in range(max_n):
        sym, image, _ = expansion_map_step(p, theta)
        if sym is None:
            break
        out.append(sym)
        theta = image.theta
    return tuple(out)


# ---------------------------------------------------------------------------
# Cylinder covers


@dataclass(frozen=True, eq=False)
class CylinderCover:
    """All depth-n cylinder arcs, in lexicographic word order.

    ``p``/``q`` hold the lo/hi arc endpoints as unit complex numbers and
    ``log_chord`` the logarithm of the chordal endpoint distance,
    accumulated multiplicatively along the inverse branches.
    """

    depth: int
    words: np.ndarray  # (N, depth) uint8
    p: np.ndarray  # (N,) complex lo endpoints
    q: np.ndarray  # (N,) complex hi endpoints
    log_chord: np.ndarray  # (N,)

    @property
    def n_words(self) -> int:
        return self.words.shape[0]

    @property
    def lo(self) -> np.ndarray:
        return np.angle(self.p) % TWO_PI

    @property
    def lengths(self) -> np.ndarray:
        """Angular arc lengths, exact via the chord."""
        return 2.0 * np.arcsin(np.minimum(0.5 * np.exp(self.log_chord), 1.0))

    @property
    def hi(self) -> np.ndarray:
        return (self.lo + self.lengths) % TWO_PI

    @property
    def midpoints(self) -> np.ndarray:
        """Unit complex arc midpoints."""
        m = self.p + self.q
        return m / np.abs(m)

    def word(self, i: int) -> Word:
        return tuple(int(s) for s in self.words[i])

    def word_string(self, i: int) -> str:
        return word_to_string(self.words[i])

    def arc(self, i: int) -> Arc:
        lo = float(self.lo[i])
        return Arc(lo, lo + float(self.lengths[i]))

    def index_of(self, word) -> int:
        word = check_reduced(word)
        if len(word) != self.depth:
            raise GeometryError(f"word length {len(word)} != cover depth {self.depth}")
        return int(lex_rank(np.array([word], dtype=np.int64))[0])

    def entries(self):
        for i in range(self.n_words):
            yield self.word_string(i), self.arc(i)


def lex_rank(words: np.ndarray) -> np.ndarray:
    """Lexicographic rank of reduced words among all of the same length."""
    w = words.astype(np.int64)
    n = w.shape[1]
    if n == 1:
        return w[:, 0]
    rel = w[:, 1:] - (w[:, 1:] > (w[:, :-1] ^ 1))
    weights = 3 ** np.arange(n - 2, -1, -1, dtype=np.int64)
    return w[:, 0] * 3 ** (n - 1) + rel @ weights


def cylinder_cover(p: PantsGeometry, n: int) -> CylinderCover:
    """Arcs of all 4*3^(n-1) depth-n cylinders."""
    if not 1 <= n <= 14:
        raise GeometryError(f"cover depth {n} outside [1, 14]")
    cached = p._cache.get(("cover", n))
    if cached is not None:
        return cached

    words = np.arange(4, dtype=np.uint8).reshape(4, 1)
    zp = np.exp(1j * p._arc_lo)
    zq = np.exp(1j * (p._arc_lo + p._arc_len))
    log_chord = np.log(np.abs(zq - zp))

    for _ in range(n - 1):
        parts_w, parts_p, parts_q, parts_c = [], [], [], []
        first = words[:, 0]
        for tau in range(4):
            mask = first != bar(tau)
            inv = p.gens[tau].inverse()
            u, v = inv.u, inv.v
            sel_p, sel_q = zp[mask], zq[mask]
            den_p = np.abs(np.conj(v) * sel_p + np.conj(u))
            den_q = np.abs(np.conj(v) * sel_q + np.conj(u))
            parts_p.append(apply_many(u, v, sel_p))
            parts_q.append(apply_many(u, v, sel_q))
            parts_c.append(log_chord[mask] - np.log(den_p) - np.log(den_q))
            w_mask = words[mask]
            parts_w.append(
                np.hstack([np.full((w_mask.shape[0], 1), tau, dtype=np.uint8), w_mask])
            )
        words = np.vstack(parts_w)
        zp = np.concatenate(parts_p)
        zq = np.concatenate(parts_q)
        log_chord = np.concatenate(parts_c)

    # keep endpoints exactly on the circle; drift is multiplicative otherwise
    zp = zp / np.abs(zp)
    zq = zq / np.abs(zq)
    cover = CylinderCover(depth=n, words=words, p=zp, q=zq, log_chord=log_chord)
    p._cache[("cover", n)] = cover
    return cover


# ---------------------------------------------------------------------------
# Words as group elements


def word_to_element(p: PantsGeometry, word) -> MoebiusTransform:
    """Composition of the generators named by the word, read left to right."""
    word = check_reduced(word)
    out = MoebiusTransform.identity()
    for s in word:
        out = out @ p.gens[s]
    return out


# ---------------------------------------------------------------------------
# Symbolic rays and geodesic realization


@dataclass(frozen=True)
class Ray:
    """Endpoint data: a reduced prefix, optionally followed by a repeating block."""

    prefix: Word = ()
    period: Word | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", check_reduced(self.prefix))
        if self.period is not None:
            per = check_reduced(self.period)
            if not per:
                raise GeometryError("empty period")
            if per[0] == bar(per[-1]):
                raise GeometryError(f"period {per} is not cyclically reduced")
            if self.prefix and per[0] == bar(self.prefix[-1]):
                raise GeometryError("prefix/period junction is not reduced")
            object.__setattr__(self, "period", per)
        if not self.prefix and self.period is None:
            raise GeometryError("ray needs a prefix or a period")

    @classmethod
    def from_string(cls, prefix: str, period: str | None = None) -> "Ray":
        return cls(
            word_from_string(prefix),
            word_from_string(period) if period else None,
        )

    @property
    def first(self) -> int:
        return self.prefix[0] if self.prefix else self.period[0]

    def head(self, n: int) -> Word:
        """First n symbols of the (possibly infinite) word."""
        out = list(self.prefix[:n])
        if self.period:
            while len(out) < n:
                out.extend(self.period)
        return tuple(out[:n])


@dataclass(frozen=True)
class GeodesicPair:
    """Forward/backward symbolic endpoints with distinct first symbols."""

    xi: Ray
    eta: Ray

    def __post_init__(self):
        if self.xi.first == self.eta.first:
            raise GeometryError("xi and eta start with the same symbol")

    @classmethod
    def periodic(cls, word) -> "GeodesicPair":
        """The pair of the bi-infinite periodic word (w)^infinity."""
        word = check_reduced(word)
        if word[0] == bar(word[-1]):
            raise GeometryError(f"word {word} is not cyclically reduced")
        return cls(Ray((), word), Ray((), bar_reverse(word)))


def realize_ray(p: PantsGeometry, ray: Ray, depth: int = 12) -> BoundaryPoint:
    """Boundary point whose expansion starts with the ray's word.

    Rays with a period are realized exactly as the repelling fixed point of
    the return composition, pushed through the inverse branches of the
    prefix.  Prefix-only rays use the midpoint of the prefix cylinder
    (truncated to ``depth`` symbols if longer).
    """
    if ray.period is not None:
        ret = word_to_element(p, tuple(reversed(ray.period)))
        info = classify_isometry(ret)
        if info.kind != "hyperbolic":
            raise GeometryError(f"period {ray.period} gives a non-hyperbolic element")
        z = info.fixed_points[1]  # repelling: the expanding branch fixes it
        for s in reversed(ray.prefix):
            z = p.gens[s].inverse()(z)
            z = z / abs(z)
        return BoundaryPoint.from_complex(z)

    word = ray.prefix[: max(1, depth)]
    arc = p.arcs[word[-1]]
    zp, zq = np.exp(1j * arc.lo), np.exp(1j * arc.hi)
    for s in reversed(word[:-1]):
        inv = p.gens[s].inverse()
        zp, zq = inv(zp), inv(zq)
    m = zp / abs(zp) + zq / abs(zq)
    return BoundaryPoint.from_complex(m / abs(m))


def geodesic_from_pair(p: PantsGeometry, pair: GeodesicPair, depth: int = 12) -> Geodesic:
    """Geodesic with forward endpoint from xi and backward endpoint from eta.

    The returned geodesic stores the xi endpoint first.
    """
    xi = realize_ray(p, pair.xi, depth)
    eta = realize_ray(p, pair.eta, depth)
    return Geodesic(xi, eta)


# ---------------------------------------------------------------------------
# Extended-precision endpoint realization.
#
# A boundary point carries about 16 decimal digits as a double, and one
# expansion symbol consumes log10 |phi'| ~ 1 of them, so any fixed-precision
# trace of an individual geodesic is limited to roughly 15-18 symbols at
# moderate cuff lengths.  Deep traces therefore run on mpmath complex
# numbers; the octagon, its side normals and the generator coefficients
# remain the double-precision objects that define the group, cast exactly.


def _mp():
    import mpmath

    return mpmath


def _realize_ray_mp(p: PantsGeometry, ray: Ray, depth: int, mp):
    if ray.period is not None:
        u, v = mp.mpc(1), mp.mpc(0)
        for s in reversed(ray.period):
            gu, gv = mp.mpc(p.gens[s].u), mp.mpc(p.gens[s].v)
            u, v = u * gu + v * mp.conj(gv), u * gv + v * mp.conj(gu)
        # boundary fixed points: conj(v) z^2 + (conj(u) - u) z - v = 0
        disc = mp.sqrt((mp.conj(u) - u) ** 2 + 4 * mp.conj(v) * v)
        roots = [
            ((u - mp.conj(u)) + disc) / (2 * mp.conj(v)),
            ((u - mp.conj(u)) - disc) / (2 * mp.conj(v)),
        ]
        # the expanding return map fixes the point where |m'| > 1
        z = min(roots, key=lambda r: abs(mp.conj(v) * r + mp.conj(u)))
        z = z / abs(z)
        tail = ray.prefix
    else:
        word = ray.prefix[: max(1, depth)]
        arc = p.arcs[word[-1]]
        lo = mp.mpf(arc.lo)
        ln = mp.mpf(arc.length)
        zp, zq = mp.expjpi(lo / mp.pi), mp.expjpi((lo + ln) / mp.pi)
        m = zp + zq
        z = m / abs(m)
        tail = word[:-1]
    for s in reversed(tail):
        inv = p.gens[s].inverse()
        u, v = mp.mpc(inv.u), mp.mpc(inv.v)
        z = (u * z + v) / (mp.conj(v) * z + mp.conj(u))
        z = z / abs(z)
    return z


# ---------------------------------------------------------------------------
# Clipping, tracing, suspension


def _clip_once(p: PantsGeometry, z_fwd: complex, z_back: complex):
    l_back = lift_light(np.array([z_back]))
    l_fwd = lift_light(np.array([z_fwd]))
    t_in, t_out, s_in, s_out = clip_chord(l_back[0], l_fwd[0], p.interior_normals)
    return float(t_in), float(t_out), int(s_in), int(s_out)


def octagon_crossing(p: PantsGeometry, g: Geodesic):
    """Entry/exit parameters and side indices of a geodesic through the octagon.

    The geodesic is parametrized by arclength running from g.q (backward)
    to g.p (forward).  Returns None when it misses the octagon.
    """
    t_in, t_out, s_in, s_out = _clip_once(p, g.p.point, g.q.point)
    if not (t_in < t_out) or not math.isfinite(t_in) or not math.isfinite(t_out):
        return None
    return t_in, t_out, s_in, s_out


def cutting_sequence_trace(
    p: PantsGeometry,
    g: Geodesic | GeodesicPair,
    n: int,
    prec: int | None = None,
    depth: int | None = None,
) -> Word:
    """Forward crossing itinerary of a geodesic through the octagon tiling.

    Records the interior label of each seam side crossed, pulling the
    geodesic back into the fundamental octagon after every crossing; the
    output over n crossings equals the boundary expansion of the forward
    endpoint.  Output shorter than n signals escape through a cuff side.

    Accepts either a realized Geodesic (double-precision trace, reliable
    to roughly 15 symbols) or a GeodesicPair together with ``prec``
    (decimal digits), in which case the endpoints are realized and traced
    in extended precision; ``depth`` controls the realization depth and
    defaults to n plus a safety margin.
    """
    if n > MAX_TRACE_LEN:
        raise GeometryError(f"trace length {n} exceeds {MAX_TRACE_LEN}")
    if isinstance(g, GeodesicPair):
        if depth is None:
            depth = n + 18
        if prec is None:
            g = geodesic_from_pair(p, g, depth)
        else:
            return _trace_mp(p, g, n, prec, depth)
    z_fwd, z_back = g.p.point, g.q.point
    first = _clip_once(p, z_fwd, z_back)
    if not (first[0] < first[1]):
        raise GeometryError("geodesic misses the octagon")
    out = []
    for _ in range(n):
        t_in, t_out, _, s_out = _clip_once(p, z_fwd, z_back)
        if not (t_in < t_out):
            break
        if s_out in CUFF_SIDE_INDICES:
            break
        sym = SEAM_SIDE_SYMBOL[s_out]
        out.append(sym)
        gmap = p.gens[sym]
        z_fwd = gmap(z_fwd)
        z_back = gmap(z_back)
        z_fwd /= abs(z_fwd)
        z_back /= abs(z_back)
    return tuple(out)


def _trace_mp(p: PantsGeometry, pair: GeodesicPair, n: int, prec: int, depth: int) -> Word:
    mp = _mp()
    with mp.workdps(prec):
        z_fwd = _realize_ray_mp(p, pair.xi, depth, mp)
        z_back = _realize_ray_mp(p, pair.eta, depth, mp)
        normals = [tuple(mp.mpf(x) for x in row) for row in p.interior_normals]
        gens = [(mp.mpc(g.u), mp.mpc(g.v)) for g in p.gens]
        out = []
        for step in range(n):
            exit_side, exit_x = None, None
            missed = False
            for i, (nx, ny, nt) in enumerate(normals):
                a = nx * z_back.real + ny * z_back.imag - nt
                b = nx * z_fwd.real + ny * z_fwd.imag - nt
                if a < 0 and b < 0:
                    missed = True
                    break
                if a > 0 and b < 0:
                    x = -a / b  # exp(2 t_cross); smallest x exits first
                    if exit_x is None or x < exit_x:
                        exit_x, exit_side = x, i
            if missed or exit_side is None:
                if step == 0:
                    raise GeometryError("geodesic misses the octagon")
                break
            if exit_side in CUFF_SIDE_INDICES:
                break
            sym = SEAM_SIDE_SYMBOL[exit_side]
            out.append(sym)
            u, v = gens[sym]
            z_fwd = (u * z_fwd + v) / (mp.conj(v) * z_fwd + mp.conj(u))
            z_back = (u * z_back + v) / (mp.conj(v) * z_back + mp.conj(u))
            z_fwd = z_fwd / abs(z_fwd)
            z_back = z_back / abs(z_back)
    return tuple(out)


def suspension_time(p: PantsGeometry, pair: GeodesicPair, depth: int = 12) -> float:
    """Length of the intersection of the realized geodesic with the octagon."""
    g = geodesic_from_pair(p, pair, depth)
    hit = octagon_crossing(p, g)
    if hit is None:
        raise GeometryError("realized geodesic does not cross the octagon")
    t_in, t_out, _, _ = hit
    return t_out - t_in


def periodic_suspension_sum(p: PantsGeometry, word, depth: int = 12) -> float:
    """Sum of suspension times over one period of the bi-infinite word."""
    word = check_reduced(word)
    total = 0.0
    k = len(word)
    for i in range(k):
        rotated = word[i:] + word[:i]
        total += suspension_time(p, GeodesicPair.periodic(rotated), depth)
    return total


# ---------------------------------------------------------------------------
# Export


def cover_to_csv(cover: CylinderCover) -> str:
    """Cover rows as CSV text: word, lo_angle, hi_angle (17 significant digits)."""
    lines = ["word,lo_angle,hi_angle"]
    lo, hi = cover.lo, cover.hi
    for i in range(cover.n_words):
        lines.append(f"{cover.word_string(i)},{lo[i]:.17g},{hi[i]:.17g}")
    return "\n".join(lines) + "\n"
