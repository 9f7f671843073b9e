"""Orientation-preserving isometries of the upper half-plane as unit-determinant matrices."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

EPS_CLASS = 1e-9


class IsometryClass(enum.Enum):
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"
    IDENTITY = "Identity"


class EllipticError(ValueError):
    """Raised when a length is requested for an elliptic element."""


def stable_arccosh(y: float) -> float:
    """arccosh(y) for y >= 1, accurate when y is close to 1."""
    if y < 1.0:
        if y > 1.0 - 1e-15:
            return 0.0
        raise ValueError(f"arccosh undefined for {y!r}")
    if y > 2.0:
        return math.acosh(y)
    u = y - 1.0
    return math.log1p(u + math.sqrt(u * (y + 1.0)))


@dataclass(frozen=True)
class MoebiusMatrix:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        entries = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(x) for x in entries):
            raise ValueError(f"non-finite matrix entries {entries}")
        det = self.a * self.d - self.b * self.c
        norm2 = self.a**2 + self.b**2 + self.c**2 + self.d**2
        # products of unit matrices keep det 1 up to rounding of size eps * |m|^2;
        # rescaling by such a det would only inject that rounding into the entries
        if abs(det - 1.0) <= 64 * 2.2e-16 * max(1.0, norm2):
            s = 1.0
        elif det > 0:
            s = 1.0 / math.sqrt(det)
        else:
            raise ValueError(f"determinant must be positive, got {det}")
        a, b, c, d = self.a * s, self.b * s, self.c * s, self.d * s
        tr = a + d
        # trace-nonnegative representative; trace 0 tie broken by positive b
        if tr < 0 or (tr == 0 and (b < 0 or (b == 0 and c > 0))):
            a, b, c, d = -a, -b, -c, -d
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MoebiusMatrix":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diag(cls, lam: float) -> "MoebiusMatrix":
        return cls(lam, 0.0, 0.0, 1.0 / lam)

    def __matmul__(self, other: "MoebiusMatrix") -> "MoebiusMatrix":
        return compose(self, other)

    def inverse(self) -> "MoebiusMatrix":
        return MoebiusMatrix(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, z: complex) -> complex:
        den = self.c * z + self.d
        if den == 0:
            return complex("inf")
        return (self.a * z + self.b) / den

    def classify(self, eps: float = EPS_CLASS) -> IsometryClass:
        return classify(self, eps)

    def translation_length(self) -> float:
        return translation_length(self)

    def distance_to(self, other: "MoebiusMatrix") -> float:
        """Max-entry distance in PSL(2,R), i.e. up to overall sign."""
        p = max(abs(x - y) for x, y in zip(self.entries, other.entries))
        m = max(abs(x + y) for x, y in zip(self.entries, other.entries))
        return min(p, m)


def compose(m: MoebiusMatrix, n: MoebiusMatrix) -> MoebiusMatrix:
    return MoebiusMatrix(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def classify(m: MoebiusMatrix, eps: float = EPS_CLASS) -> IsometryClass:
    t = abs(m.trace)
    if t > 2.0 + eps:
        return IsometryClass.HYPERBOLIC
    if t < 2.0 - eps:
        return IsometryClass.ELLIPTIC
    if max(abs(m.a - 1.0), abs(m.b), abs(m.c), abs(m.d - 1.0)) <= eps:
        return IsometryClass.IDENTITY
    return IsometryClass.PARABOLIC


def length_from_trace(t: float, eps: float = EPS_CLASS) -> float:
    """Translation length 2 arccosh(|t|/2); 0 within ``eps`` of the parabolic boundary."""
    t = abs(t)
    if t < 2.0 - eps:
        raise EllipticError(f"|trace| = {t} < 2: elliptic element has no closed geodesic")
    if t <= 2.0:
        return 0.0
    return 2.0 * stable_arccosh(0.5 * t)


def translation_length(m: MoebiusMatrix) -> float:
    cls = classify(m)
    if cls is IsometryClass.ELLIPTIC:
        raise EllipticError(f"elliptic element {m} has no translation length")
    if cls is not IsometryClass.HYPERBOLIC:
        return 0.0
    return length_from_trace(m.trace)


def translation(displacement: float) -> MoebiusMatrix:
    """Hyperbolic translation by ``displacement`` along the imaginary axis (towards infinity if positive)."""
    h = 0.5 * displacement
    return MoebiusMatrix(math.exp(h), 0.0, 0.0, math.exp(-h))


def axis_translate(length: float, displacement: float) -> MoebiusMatrix:
    """Twist element of a gluing along a curve of the given length, in the normalized cuff frame."""
    if not length > 0:
        raise ValueError(f"curve length must be positive, got {length}")
    return translation(displacement)


def rotation(theta: float) -> MoebiusMatrix:
    """Elliptic rotation about i by angle theta (counterclockwise)."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return MoebiusMatrix(c, s, -s, c)


def conjugate(g: MoebiusMatrix, m: MoebiusMatrix) -> MoebiusMatrix:
    return g @ m @ g.inverse()


def commutator(x: MoebiusMatrix, y: MoebiusMatrix) -> MoebiusMatrix:
    return x @ y @ x.inverse() @ y.inverse()
