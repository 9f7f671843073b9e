"""Simple closed curves on the one-holed torus and the four-holed sphere as primitive slopes.

Both surfaces share the slope model: an unoriented simple closed curve is a
primitive integer pair ``(p, q)`` up to sign. On the torus ``(1, 0)`` is the
curve ``A`` crossing the decomposition curve ``B = (0, 1)`` once. On the
four-holed sphere ``(0, 1)`` is the decomposition curve ``gamma = d1 d2`` and
``(1, 0)`` is ``alpha = d2 d4``; intersection numbers are doubled.

Twists act linearly. The full twist along ``a`` sends ``v`` to
``v + w(v, a) a`` on the torus, with ``w`` the determinant form; on the sphere
it is the square of the half twist ``v -> v + w(v, a) a``. These match the
marking of :mod:`teich.surface`: raising the twist at the decomposition curve by
1 changes every length ``l(v)`` into ``l(T(v))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from teich.surface import Word, invert_word, reduce_word


class SurfaceKind(enum.Enum):
    ONE_HOLED_TORUS = "OneHoledTorus"
    SHIRT = "Shirt"

    @classmethod
    def parse(cls, value) -> "SurfaceKind":
        if isinstance(value, cls):
            return value
        aliases = {"s11": cls.ONE_HOLED_TORUS, "torus": cls.ONE_HOLED_TORUS, "s04": cls.SHIRT, "shirt": cls.SHIRT}
        key = str(value).lower()
        for k in cls:
            if k.value.lower() == key:
                return k
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown surface kind {value!r}")

    @property
    def graph_kind(self) -> str:
        return "S11" if self is SurfaceKind.ONE_HOLED_TORUS else "S04"


class MulticurveError(ValueError):
    """A twist image that is several parallel copies of a curve where one curve is required."""


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if math.gcd(p, q) != 1:
            raise ValueError(f"slope ({p}, {q}) is not primitive")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __iter__(self):
        return iter((self.p, self.q))

    def __getitem__(self, k):
        return (self.p, self.q)[k]

    def __repr__(self):
        return f"Slope({self.p}, {self.q})"


@dataclass(frozen=True)
class Multicurve:
    """``count`` parallel copies of ``slope``."""

    slope: Slope
    count: int


ALPHA = Slope(1, 0)
GAMMA = Slope(0, 1)


def omega(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _as_pair(x) -> tuple[int, int, int]:
    """(p, q, multiplicity) for a slope or a multicurve."""
    if isinstance(x, Multicurve):
        return x.slope.p, x.slope.q, x.count
    return x[0], x[1], 1


def intersection(kind, s, t) -> int:
    """Geometric intersection number; linear in the multiplicity of multicurves."""
    kind = SurfaceKind.parse(kind)
    p1, q1, m1 = _as_pair(s)
    p2, q2, m2 = _as_pair(t)
    n = abs(p1 * q2 - q1 * p2) * m1 * m2
    return n if kind is SurfaceKind.ONE_HOLED_TORUS else 2 * n


def _from_vector(p: int, q: int):
    g = math.gcd(p, q)
    if g == 0:
        raise ValueError("zero vector is not a curve")
    s = Slope(p // g, q // g)
    return s if g == 1 else Multicurve(s, g)


def fractional_twist(kind, axis: Slope, j: int, target: Slope):
    """``T_axis^j(target)``; ``j`` counts fractions of a full twist, one per crossing with ``axis``."""
    kind = SurfaceKind.parse(kind)
    p, q, m = _as_pair(target)
    if j == 0:
        return target
    # multicurves act through their homology vector, which keeps composition additive
    p, q = p * m, q * m
    w = omega((p, q), axis)
    if w == 0:
        # disjoint curves are fixed by every twist
        return target
    sign = 1 if w > 0 else -1
    image = _from_vector(p + j * sign * axis.p, q + j * sign * axis.q)
    if isinstance(image, Multicurve) and kind is SurfaceKind.SHIRT:
        raise MulticurveError(
            f"T^{j} along {axis} sends {target} to {image.count} parallel copies of {image.slope}"
        )
    return image


def full_twist(kind, axis: Slope, target: Slope):
    """The Dehn twist, i.e. ``fractional_twist`` with ``j`` equal to the intersection number."""
    return fractional_twist(kind, axis, intersection(kind, axis, target), target)


def twist_neighbours(kind, axis: Slope, target: Slope) -> tuple:
    """``(T^-1(target), T^1(target))`` along ``axis``."""
    return fractional_twist(kind, axis, -1, target), fractional_twist(kind, axis, 1, target)


# ---------------------------------------------------------------------------
# words


@lru_cache(maxsize=None)
def _torus_word(p: int, q: int) -> Word:
    # Stern-Brocot descent from (1,0) = A and (0,1) = B; the mediant word is the concatenation
    lo, hi = ((1, 0), (("A", 1),)), ((0, 1), (("B", 1),))
    while True:
        m = (lo[0][0] + hi[0][0], lo[0][1] + hi[0][1])
        if (p, q) == lo[0]:
            return lo[1]
        if (p, q) == hi[0]:
            return hi[1]
        word = lo[1] + hi[1]
        if m == (p, q):
            return word
        # compare p/q with the mediant slope
        if p * m[1] > q * m[0]:
            hi = (m, word)
        else:
            lo = (m, word)


def _substitute(word: Word, images: dict[str, Word]) -> Word:
    out: list = []
    for name, e in word:
        w = images.get(name, ((name, 1),))
        out.extend(w if e == 1 else invert_word(w))
    return reduce_word(out)


# half twists of the sphere on the boundary generators d1 d2 d4 d3 = 1
_H_GAMMA = {"d1": (("d1", 1), ("d2", 1), ("d1", -1)), "d2": (("d1", 1),)}
_H_GAMMA_INV = {"d1": (("d2", 1),), "d2": (("d2", -1), ("d1", 1), ("d2", 1))}
_H_ALPHA = {"d2": (("d2", 1), ("d4", 1), ("d2", -1)), "d4": (("d2", 1),)}
_H_ALPHA_INV = {"d4": (("d4", -1), ("d2", 1), ("d4", 1)), "d2": (("d4", 1),)}


@lru_cache(maxsize=None)
def _shirt_word(p: int, q: int) -> Word:
    if (p, q) in ((1, 0), (-1, 0)):
        return (("d2", 1), ("d4", 1))
    if (p, q) in ((0, 1), (0, -1)):
        return (("d1", 1), ("d2", 1))
    if abs(q) >= abs(p):
        # gamma half twist acts as (p, q) -> (p, q + p)
        if p * q > 0:
            return _substitute(_shirt_word(p, q - p), _H_GAMMA)
        return _substitute(_shirt_word(p, q + p), _H_GAMMA_INV)
    # alpha half twist acts as (p, q) -> (p - q, q)
    if p * q > 0:
        return _substitute(_shirt_word(p - q, q), _H_ALPHA_INV)
    return _substitute(_shirt_word(p + q, q), _H_ALPHA)


def slope_to_word(kind, s: Slope) -> Word:
    """Word in the standard letters (``A``, ``B`` or ``d1`` .. ``d4``) representing the curve ``s``."""
    kind = SurfaceKind.parse(kind)
    s = Slope(s[0], s[1])
    if kind is SurfaceKind.ONE_HOLED_TORUS:
        w = _torus_word(abs(s.p), s.q)
        if s.p < 0:
            w = tuple((n, -e) if n == "A" else (n, e) for n, e in w)
        return w
    return _shirt_word(s.p, s.q)


def boundary_partition(s: Slope) -> tuple[frozenset[int], frozenset[int]]:
    """How a sphere curve splits the boundary labels 1..4; it depends on the slope mod 2."""
    p, q = s.p % 2, s.q % 2
    if (p, q) == (0, 1):
        return frozenset({1, 2}), frozenset({3, 4})
    if (p, q) == (1, 0):
        return frozenset({1, 3}), frozenset({2, 4})
    return frozenset({2, 3}), frozenset({1, 4})
