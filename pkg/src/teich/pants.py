"""Hyperbolic pairs of pants: seams from right-angled hexagons and canonical holonomy triples.

A pants is built in its own half-plane chart. The first cuff of positive length
sits on the imaginary axis with generator ``translation(l)``; the pants lies to
its right. Every cuff of positive length carries a *cuff frame* ``E``: a Moebius
map sending the imaginary axis to the cuff geodesic, ``i`` to the foot of the
seam towards the cyclically next cuff, and the right half-plane to the side of
the pants. In that frame the cuff generator is ``translation(l)``. Frames are
what the gluing code in :mod:`teich.surface` composes with twists.

Generators satisfy ``g0 @ g1 @ g2 == I`` in PSL(2,R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from teich.moebius import MoebiusMatrix, rotation, translation

_QUARTER = -0.5 * math.pi


def hexagon_seam(l1: float, l2: float, l3: float) -> float:
    """Length of the seam joining cuffs of lengths ``l1`` and ``l2`` in a pants whose third cuff has length ``l3``."""
    if not (l1 > 0 and l2 > 0):
        raise ValueError("seam endpoints must be geodesic cuffs (positive lengths)")
    if l3 < 0:
        raise ValueError("cuff lengths must be non-negative")
    h1, h2, h3 = 0.5 * l1, 0.5 * l2, 0.5 * l3
    num = math.cosh(h3) + math.cosh(h1) * math.cosh(h2)
    den = math.sinh(h1) * math.sinh(h2)
    return math.acosh(num / den)


def _seam_step(seam: float) -> MoebiusMatrix:
    # leave the current cuff along the seam to the right, land on the next cuff
    return rotation(_QUARTER) @ translation(seam) @ rotation(_QUARTER)


def conjugated_translation(frame: MoebiusMatrix, length: float) -> MoebiusMatrix:
    """``frame @ translation(length) @ frame**-1`` evaluated as ``I + frame (T - I) frame**-1``."""
    a, b, c, d = frame.entries
    p, q = math.expm1(0.5 * length), math.expm1(-0.5 * length)
    # frame**-1 = [[d, -b], [-c, a]]
    return MoebiusMatrix(
        1.0 + a * p * d - b * q * c,
        -a * p * b + b * q * a,
        c * p * d - d * q * c,
        1.0 - c * p * b + d * q * a,
    )


def _parabolic_at_one(l0: float, l_other: float) -> MoebiusMatrix:
    # g1 = I + t N with N(1) = 0; t fixes |tr(g0 g1)| = 2 cosh(l_other / 2)
    t = -(math.cosh(0.5 * l0) + math.cosh(0.5 * l_other)) / math.sinh(0.5 * l0)
    return MoebiusMatrix(1.0 + t, -t, t, 1.0 - t)


def _build_rooted(l0: float, l1: float, l2: float):
    """Generators and frames with cuff 0 (length > 0) on the imaginary axis."""
    g0 = translation(l0)
    frames: list[MoebiusMatrix | None] = [MoebiusMatrix.identity(), None, None]
    if l1 > 0:
        e1 = _seam_step(hexagon_seam(l0, l1, l2))
        g1 = conjugated_translation(e1, l1)
        # half a turn moves the base point to the foot of the seam towards cuff 2
        frames[1] = e1 @ translation(0.5 * l1)
    else:
        g1 = _parabolic_at_one(l0, l2)
    g2 = (g0 @ g1).inverse()
    if l2 > 0:
        frames[2] = translation(0.5 * l0) @ _seam_step(hexagon_seam(l0, l2, l1))
    return [g0, g1, g2], frames


@dataclass(frozen=True)
class PantsGeometry:
    boundary_lengths: tuple[float, float, float]
    seam_lengths: tuple[float, float, float]
    holonomy: tuple[MoebiusMatrix, MoebiusMatrix, MoebiusMatrix]
    frames: tuple[MoebiusMatrix | None, MoebiusMatrix | None, MoebiusMatrix | None]

    def generator(self, slot: int) -> MoebiusMatrix:
        return self.holonomy[slot]

    def frame(self, slot: int) -> MoebiusMatrix:
        f = self.frames[slot]
        if f is None:
            raise ValueError(f"cuff {slot} is a cusp and has no frame")
        return f


def build_pants(l1: float, l2: float, l3: float) -> PantsGeometry:
    """Canonical pants with cuff lengths ``(l1, l2, l3)``; zero lengths are cusps."""
    lengths = (float(l1), float(l2), float(l3))
    for x in lengths:
        if not math.isfinite(x) or x < 0:
            raise ValueError(f"cuff lengths must be finite and non-negative, got {lengths}")
    positive = [j for j in range(3) if lengths[j] > 0]
    if not positive:
        g0 = MoebiusMatrix(1.0, 2.0, 0.0, 1.0)
        g1 = MoebiusMatrix(1.0, 0.0, -2.0, 1.0)
        gens = [g0, g1, (g0 @ g1).inverse()]
        frames = [None, None, None]
    else:
        # root the chart at the longest cuff; short cuffs then sit far away with
        # moderate generators instead of blowing up everything else
        r = max(positive, key=lambda j: (lengths[j], -j))
        rot = [lengths[(r + k) % 3] for k in range(3)]
        rgens, rframes = _build_rooted(*rot)
        gens = [rgens[(j - r) % 3] for j in range(3)]
        frames = [rframes[(j - r) % 3] for j in range(3)]
    seams = tuple(_seam_length(lengths, i, (i + 1) % 3) for i in range(3))
    return PantsGeometry(lengths, seams, tuple(gens), tuple(frames))


def fixed_points(m: MoebiusMatrix) -> tuple[float, float]:
    """(repelling, attracting) fixed points on the real line; a parabolic has them equal.

    Infinity is returned as ``math.inf``.
    """
    a, b, c, d = m.entries
    if abs(c) < 1e-300:
        # upper triangular: one fixed point is infinity
        if a == d:
            return (math.inf, math.inf)
        x = b / (d - a)
        return (x, math.inf) if abs(a) > abs(d) else (math.inf, x)
    disc = (a + d) ** 2 - 4.0
    disc = max(disc, 0.0)
    s = math.sqrt(disc)
    p = (a - d + s) / (2 * c)
    q = (a - d - s) / (2 * c)
    # attracting fixed point x has |c x + d| < 1
    if abs(c * p + d) < abs(c * q + d):
        return (q, p)
    return (p, q)


def _to_infinity(x: float) -> MoebiusMatrix:
    if math.isinf(x):
        return MoebiusMatrix.identity()
    return MoebiusMatrix(0.0, 1.0, -1.0, x)  # z -> 1 / (x - z)


def _apply_real(m: MoebiusMatrix, x: float) -> float:
    a, b, c, d = m.entries
    if math.isinf(x):
        return a / c if c != 0 else math.inf
    den = c * x + d
    return (a * x + b) / den if den != 0 else math.inf


def geodesic_distance(u1: float, u2: float, v1: float, v2: float) -> float:
    """Distance between disjoint geodesics with real endpoints (u1, u2) and (v1, v2)."""
    c = _to_infinity(u2)
    if math.isinf(u2):
        c = MoebiusMatrix.identity()
    x0 = _apply_real(c, u1)
    shift = MoebiusMatrix(1.0, -x0, 0.0, 1.0)
    m = shift @ c
    a, b = _apply_real(m, v1), _apply_real(m, v2)
    lo, hi = sorted((abs(a), abs(b)))
    if a * b <= 0:
        raise ValueError("geodesics intersect")
    return math.acosh((hi + lo) / (hi - lo))


def axis_distance(g: MoebiusMatrix, h: MoebiusMatrix) -> float:
    """Distance between the axes of two hyperbolic elements."""
    return geodesic_distance(*fixed_points(g), *fixed_points(h))


def _seam_length(lengths, i, j) -> float:
    """Seam between cuffs ``i`` and ``j``; at a cusp it ends on the horocycle of length 1.

    The cusp forms are the limits of the hexagon formula with the collar depth
    ``log(2 / l)`` of the length-one hypercycle removed.
    """
    li, lj = lengths[i], lengths[j]
    lk = lengths[3 - i - j]
    if li > 0 and lj > 0:
        return hexagon_seam(li, lj, lk)
    if li == 0 and lj == 0:
        return math.log(2.0 * (math.cosh(0.5 * lk) + 1.0))
    geo = lj if li == 0 else li
    return math.log(2.0 * (math.cosh(0.5 * lk) + math.cosh(0.5 * geo)) / math.sinh(0.5 * geo))


def reflect(m: MoebiusMatrix) -> MoebiusMatrix:
    """Conjugate by the reflection z -> -conj(z)."""
    return MoebiusMatrix(m.a, -m.b, -m.c, m.d)
