"""Recover one-holed tori and four-holed spheres from unmarked simple length spectra.

The search takes the systole as ``gamma`` and looks for three further lengths
``a, t+, t-`` that satisfy the spine identity

    X(a) X(gamma) = X(t+) + X(t-) + K

in trace magnitudes ``X = 2 cosh(l/2)`` (``K = 0`` on the torus, the boundary
term on the sphere). The identity fixes the length of ``gamma`` and of the
boundary; the twist solves the monotone equation

    X(T_gamma(alpha))(tau) - X(T_gamma^-1(alpha))(tau) = X(t+) - X(t-)

by bracketing and Brent's method. Every candidate is rebuilt and re-enumerated;
only candidates whose spectrum matches the input are accepted.

The twist of the recovered class is reported in canonical form: the
mapping-class orbit of a twist ``tau`` at fixed lengths is ``{+-tau + n}``, so
``tau`` is folded into ``[0, 1/2]``. Four-holed spheres fold further, see
:func:`canonical_unlabelled`. :func:`canonical_class` computes the same normal
form from a surface in any marking.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from scipy.optimize import brentq

from teich.curves import Slope, SurfaceKind, slope_to_word
from teich.moebius import length_from_trace
from teich.spectrum import (
    Spectrum,
    compare,
    enumerate_spectrum,
    multiplicity_report,
    without_boundary,
)
from teich.surface import (
    FNPoint,
    MarkedSurface,
    build_surface,
    four_holed_sphere,
    four_holed_sphere_graph,
    one_holed_torus,
    one_holed_torus_graph,
)

DISPLACEMENT_TOL = 1e-9
MATCH_TOL = 1e-7


class ReconstructionError(ValueError):
    pass


class SpectraVerdict(enum.Enum):
    SPECTRA_EQUAL = "SpectraEqual"
    SPECTRA_DIFFER = "SpectraDiffer"


@dataclass(frozen=True)
class ReconstructionResult:
    kind: SurfaceKind
    fn_point: FNPoint
    marked_point: FNPoint
    witness: dict
    certificate: dict
    alternatives: tuple[FNPoint, ...] = ()

    def surface(self) -> MarkedSurface:
        graph = one_holed_torus_graph() if self.kind is SurfaceKind.ONE_HOLED_TORUS else four_holed_sphere_graph()
        return build_surface(graph, self.marked_point)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "fn_point": self.fn_point.to_dict(),
            "marked_point": self.marked_point.to_dict(),
            "witness": self.witness,
            "certificate": self.certificate,
            "alternatives": [p.to_dict() for p in self.alternatives],
        }


def _x(length: float) -> float:
    return 2.0 * math.cosh(0.5 * length)


def canonical_twist(tau: float) -> float:
    t = tau % 1.0
    return 1.0 - t if t > 0.5 else t


def canonical_form(point: FNPoint) -> FNPoint:
    """Representative of the mapping-class orbit of a single-gluing point with twist in ``[0, 1/2]``."""
    if len(point.twists) != 1:
        raise ReconstructionError("canonical forms are defined for one interior curve")
    return FNPoint(point.lengths, (canonical_twist(point.twists[0]),), point.boundary)


_SIDE_SYMMETRIES = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))


def canonical_unlabelled(point: FNPoint) -> FNPoint:
    """Canonical form of a four-holed sphere when the boundary labels are free.

    A half twist along the decomposition curve exchanges ``d1`` and ``d2`` and
    shifts the twist by 1/2, so the twist folds into ``[0, 1/4]``.
    """
    b = tuple(point.boundary)
    t = point.twists[0] % 1.0
    if t >= 0.5:
        t -= 0.5
        b = (b[1], b[0], b[2], b[3])
    if t > 0.25:
        t = 0.5 - t
        b = (b[1], b[0], b[2], b[3])
    b = min(tuple(b[i] for i in perm) for perm in _SIDE_SYMMETRIES)
    return FNPoint(point.lengths, (t,), b)


# ---------------------------------------------------------------------------
# twist solving


def solve_twist(
    build: Callable[[float], MarkedSurface],
    word_plus,
    word_minus,
    target: float,
    start: float = -0.5,
    max_width: float = 64.0,
) -> float:
    """Twist at which ``X(word_plus) - X(word_minus)`` equals ``target``; the difference increases with the twist."""

    def h(tau):
        s = build(tau)
        return s.trace(word_plus) - s.trace(word_minus) - target

    lo = hi = start
    h_lo = h_hi = h(start)
    if h_lo == 0:
        return start
    width = 0.5
    while h_lo > 0 or h_hi < 0:
        if width > max_width:
            raise ReconstructionError(
                f"twist equation has no sign change on [{lo}, {hi}] (target difference {target})"
            )
        if h_lo > 0:
            lo = start - width
            h_lo = h(lo)
        if h_hi < 0:
            hi = start + width
            h_hi = h(hi)
        width *= 2.0
    if h_lo == 0:
        return lo
    if h_hi == 0:
        return hi
    return brentq(h, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)


def _fricke_boundary(x: float, y: float, z: float, tol: float = 1e-9) -> float:
    kappa = x * x + y * y + z * z - x * y * z - 2.0
    c = -0.5 * kappa
    if c < 1.0 - tol * max(1.0, abs(kappa)):
        raise ReconstructionError(f"traces ({x}, {y}, {z}) do not describe a one-holed torus (kappa = {kappa})")
    return 0.0 if c <= 1.0 else length_from_trace(2.0 * c)


def torus_from_traces(x: float, y: float, z: float) -> FNPoint:
    """FN point whose generators ``A, B, AB`` have trace magnitudes ``x, y, z``."""
    if min(x, y, z) <= 2.0:
        raise ReconstructionError("traces of interior curves must exceed 2")
    length = length_from_trace(y)
    boundary = _fricke_boundary(x, y, z)
    tau = solve_twist(lambda t: one_holed_torus(length, t, boundary), "A B", "A^-1 B", 2.0 * z - x * y)
    return FNPoint((length,), (tau,), (boundary,))


# ---------------------------------------------------------------------------
# search


def _interior_curves(spec: Spectrum, tol: float, require_simple: bool = True) -> list[float]:
    if require_simple and multiplicity_report(spec, tol):
        raise ReconstructionError("spectrum is not numerically simple; reconstruction refuses")
    return [e.length for e in without_boundary(spec).entries for _ in e.slopes]


def _quadruples(lengths: list[float], k: float, tol: float):
    """``(i_c, i_a, i_plus, i_minus)`` with ``c`` the systole and the identity holding within ``tol``."""
    xs = [_x(l) for l in lengths]
    c = 0
    out = []
    for a in range(1, len(xs)):
        total = xs[a] * xs[c] - k
        for p in range(1, len(xs)):
            if p == a:
                continue
            want = total - xs[p]
            if want < xs[p]:
                # t- is the smaller of the pair; larger candidates are reached from the other end
                continue
            m = bisect.bisect_left(xs, want * (1 - tol))
            while m < len(xs) and xs[m] <= want * (1 + tol):
                if m not in (a, c, p) and abs(xs[m] - want) <= tol * xs[a] * xs[c]:
                    out.append((c, a, m, p))
                m += 1
    return out


def _validate(spec: Spectrum, s: MarkedSurface, match_tol: float):
    rebuilt = enumerate_spectrum(s, spec.cutoff, include_boundary=spec.include_boundary)
    diff = compare(spec, rebuilt, match_tol)
    return diff


def _distinct(points: list[FNPoint], graph, cutoff: float, match_tol: float, tol: float = 1e-6) -> list[FNPoint]:
    """Candidates up to isometry; points with different canonical forms are compared on a longer spectrum."""
    out: list[FNPoint] = []
    for p in points:
        same = False
        for q in out:
            gap = max(abs(a - b) for a, b in zip(p.lengths + p.twists + p.boundary, q.lengths + q.twists + q.boundary))
            if gap <= tol:
                same = True
            else:
                longer = cutoff + 2.0
                diff = compare(
                    enumerate_spectrum(build_surface(graph, p), longer),
                    enumerate_spectrum(build_surface(graph, q), longer),
                    match_tol,
                )
                same = diff.all_matched
            if same:
                break
        if not same:
            out.append(p)
    return out


def reconstruct_torus(spec: Spectrum, tol: float = 1e-9, *, match_tol: float = MATCH_TOL,
                      both_markings: bool = False, max_candidates: int = 8,
                      require_simple: bool = True) -> ReconstructionResult:
    """Recover a one-holed torus, up to isometry, from its simple length spectrum.

    Spectra with coincident lengths are refused unless ``require_simple`` is
    False; symmetric surfaces such as the modular torus then still reconstruct,
    since every candidate is validated against the whole spectrum.
    """
    if spec.kind is not SurfaceKind.ONE_HOLED_TORUS:
        raise ReconstructionError(f"expected a one-holed torus spectrum, got {spec.kind.value}")
    lengths = _interior_curves(spec, tol, require_simple)
    quads = _quadruples(lengths, 0.0, max(tol, 1e-12))
    if not quads:
        raise ReconstructionError("insufficient cutoff: no spine quadruple among the spectrum entries")
    accepted = []
    tried = 0
    for c, a, plus, minus in quads:
        if tried >= max_candidates:
            break
        tried += 1
        x, y, z = _x(lengths[a]), _x(lengths[c]), _x(lengths[plus])
        try:
            point = torus_from_traces(x, y, z)
        except ReconstructionError:
            continue
        diff = _validate(spec, build_surface(one_holed_torus_graph(), point), match_tol)
        if diff.all_matched:
            accepted.append((point, (c, a, plus, minus), diff))
    if not accepted:
        raise ReconstructionError(f"none of {tried} spine candidates reproduces the spectrum")
    distinct = _distinct([canonical_form(p) for p, _, _ in accepted], one_holed_torus_graph(), spec.cutoff, match_tol)
    if len(distinct) > 1:
        listing = "; ".join(f"l={p.lengths[0]:.12g} tau={canonical_twist(p.twists[0]):.12g} b={p.boundary[0]:.12g}"
                            for p in distinct)
        raise ReconstructionError(f"ambiguous reconstruction: {listing}")
    point, (c, a, plus, minus), diff = accepted[0]
    xs = [_x(lengths[i]) for i in (c, a, plus, minus)]
    witness = {"gamma": lengths[c], "alpha": lengths[a], "t_plus": lengths[plus], "t_minus": lengths[minus]}
    certificate = {
        "identity_residual": (xs[1] * xs[0] - xs[2] - xs[3]) / (xs[1] * xs[0]),
        "fricke_kappa": xs[1] ** 2 + xs[0] ** 2 + xs[2] ** 2 - xs[0] * xs[1] * xs[2] - 2.0,
        "spectrum_max_deviation": diff.max_deviation,
        "matched": diff.matched,
    }
    alternatives = ()
    if both_markings:
        mirror = torus_from_traces(xs[1], xs[0], xs[3])
        alternatives = (mirror,)
    return ReconstructionResult(SurfaceKind.ONE_HOLED_TORUS, canonical_form(point), point, witness, certificate,
                                alternatives)


_SHIRT_PLUS = slope_to_word(SurfaceKind.SHIRT, Slope(1, 1))
_SHIRT_MINUS = slope_to_word(SurfaceKind.SHIRT, Slope(-1, 1))


def _shirt_k(d: Sequence[float]) -> float:
    x = [_x(b) for b in d]
    return x[1] * x[2] + x[0] * x[3]


def shirt_from_lengths(gamma: float, t_plus: float, t_minus: float, boundary: Sequence[float]) -> FNPoint:
    """FN point of the sphere with decomposition length ``gamma`` and ``T_gamma^+-1(alpha)`` lengths ``t_plus, t_minus``."""
    target = _x(t_plus) - _x(t_minus)
    tau = solve_twist(lambda t: four_holed_sphere(gamma, t, boundary), _SHIRT_PLUS, _SHIRT_MINUS, target)
    return FNPoint((gamma,), (tau,), tuple(boundary))


def _labelings(boundary: Sequence[float]):
    # one representative per coset of the symmetries that swap the sides of alpha and gamma
    b = list(boundary)
    for perm in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 2, 1), (0, 1, 3, 2), (0, 2, 3, 1), (0, 3, 1, 2)):
        yield tuple(b[i] for i in perm)


def reconstruct_shirt(spec: Spectrum, boundary_lengths: Sequence[float], tol: float = 1e-9, *,
                      match_tol: float = MATCH_TOL, search_labels: bool = False,
                      max_candidates: int = 8) -> ReconstructionResult:
    """Recover a four-holed sphere from its spectrum and its boundary lengths.

    ``boundary_lengths`` are ``d1 .. d4`` with the systole separating ``{d1, d2}``
    from ``{d3, d4}``. With ``search_labels`` every labelling is tried instead.
    """
    if spec.kind is not SurfaceKind.SHIRT:
        raise ReconstructionError(f"expected a four-holed sphere spectrum, got {spec.kind.value}")
    if len(boundary_lengths) != 4 or any(not (math.isfinite(b) and b >= 0) for b in boundary_lengths):
        raise ReconstructionError("need four finite non-negative boundary lengths")
    lengths = _interior_curves(spec, tol)
    labelings = list(_labelings(boundary_lengths)) if search_labels else [tuple(boundary_lengths)]
    accepted = []
    tried = 0
    found_any = False
    for labels in labelings:
        quads = _quadruples(lengths, _shirt_k(labels), max(tol, 1e-12))
        found_any = found_any or bool(quads)
        for c, a, plus, minus in quads[:max_candidates]:
            tried += 1
            try:
                point = shirt_from_lengths(lengths[c], lengths[plus], lengths[minus], labels)
            except ReconstructionError:
                continue
            s = build_surface(four_holed_sphere_graph(), point)
            if abs(s.trace(slope_to_word(SurfaceKind.SHIRT, Slope(1, 0))) - _x(lengths[a])) > 1e-7 * _x(lengths[a]):
                continue
            diff = _validate(spec, s, match_tol)
            if diff.all_matched:
                accepted.append((point, (c, a, plus, minus), diff, labels))
        if accepted:
            break
    if not found_any:
        raise ReconstructionError("insufficient cutoff: no spine octuple among the spectrum entries")
    if not accepted:
        raise ReconstructionError(
            f"none of {tried} spine candidates reproduces the spectrum with boundary lengths {tuple(boundary_lengths)}"
        )
    fold = canonical_unlabelled if search_labels else canonical_form
    distinct = _distinct([fold(p) for p, *_ in accepted], four_holed_sphere_graph(), spec.cutoff, match_tol)
    if len(distinct) > 1:
        listing = "; ".join(f"l={p.lengths[0]:.12g} tau={canonical_twist(p.twists[0]):.12g}" for p in distinct)
        raise ReconstructionError(f"ambiguous reconstruction: {listing}")
    point, (c, a, plus, minus), diff, labels = accepted[0]
    xs = [_x(lengths[i]) for i in (c, a, plus, minus)]
    k = _shirt_k(labels)
    witness = {"gamma": lengths[c], "alpha": lengths[a], "t_plus": lengths[plus], "t_minus": lengths[minus],
               "delta": list(labels)}
    certificate = {
        "identity_residual": (xs[1] * xs[0] - xs[2] - xs[3] - k) / (xs[1] * xs[0]),
        "spectrum_max_deviation": diff.max_deviation,
        "matched": diff.matched,
    }
    return ReconstructionResult(SurfaceKind.SHIRT, canonical_unlabelled(point), point, witness, certificate)


def _crossing_partner(g: Slope) -> Slope:
    """A slope ``a`` with ``omega(a, g) = 1``."""
    # extended Euclid on (q, -p): a.p * g.q - a.q * g.p = 1
    def egcd(x, y):
        if y == 0:
            return (x, 1, 0)
        d, u, v = egcd(y, x % y)
        return (d, v, u - (x // y) * v)

    d, u, v = egcd(g.q, -g.p)
    if d < 0:
        d, u, v = -d, -u, -v
    return Slope(u, v) if (u * g.q - v * g.p) == 1 else Slope(-u, -v)


def canonical_class(s: MarkedSurface, cutoff: float = 10.0) -> FNPoint:
    """Canonical FN point of the isometry class of ``s``, marked by its systole.

    Reconstruction marks the recovered surface by the shortest interior curve;
    this computes the same normal form from any marking, so round trips can be
    compared in FN coordinates.
    """
    from teich.identities import _shirt_labels
    from teich.surface import shirt_boundary_lengths

    kind = SurfaceKind.ONE_HOLED_TORUS if s.kind == "S11" else SurfaceKind.SHIRT
    spec = without_boundary(enumerate_spectrum(s, cutoff, include_boundary=False))
    if not spec.entries:
        raise ReconstructionError(f"no interior curve shorter than {cutoff}")
    g = spec.entries[0].slopes[0]
    a = _crossing_partner(g)

    def trace(v):
        return s.trace(slope_to_word(kind, Slope(v[0], v[1])))

    plus = (a.p + g.p, a.q + g.q)
    if kind is SurfaceKind.ONE_HOLED_TORUS:
        return canonical_form(torus_from_traces(trace(a), trace(g), trace(plus)))
    minus = (a.p - g.p, a.q - g.q)
    labels = _shirt_labels(a, g)
    bd = shirt_boundary_lengths(s)
    delta = tuple(bd[labels[k] - 1] for k in range(1, 5))
    point = shirt_from_lengths(length_from_trace(trace(g)), length_from_trace(trace(plus)),
                               length_from_trace(trace(minus)), delta)
    return canonical_unlabelled(point)


# ---------------------------------------------------------------------------
# larger surfaces


def displacement_consistent(D: float, d1: float, d2: float, l: float, tol: float = DISPLACEMENT_TOL) -> bool:
    """True iff ``2D`` or ``2(d1 + d2)`` is an integer multiple of ``l`` within ``tol``.

    True means the unsigned displacements cannot reveal an orientation mismatch;
    False certifies that they do.
    """
    if not l > 0:
        raise ValueError(f"curve length must be positive, got {l}")

    def multiple(v):
        n = round(v / l)
        return abs(v - n * l) <= tol

    return multiple(2.0 * D) or multiple(2.0 * (d1 + d2))


def isometry_verdict(x: MarkedSurface, y: MarkedSurface, cutoff: float, tol: float = MATCH_TOL,
                     include_boundary: bool = True) -> SpectraVerdict:
    if x.kind != y.kind or x.kind not in ("S11", "S04"):
        raise ReconstructionError("spectra are compared for two one-holed tori or two four-holed spheres")
    a = enumerate_spectrum(x, cutoff, include_boundary=include_boundary)
    b = enumerate_spectrum(y, cutoff, include_boundary=include_boundary)
    diff = compare(a, b, tol)
    return SpectraVerdict.SPECTRA_EQUAL if diff.all_matched else SpectraVerdict.SPECTRA_DIFFER


def reconstruct(spec: Spectrum, tol: float = 1e-9, boundary_lengths: Sequence[float] | None = None,
                **kw) -> ReconstructionResult:
    if spec.kind is SurfaceKind.ONE_HOLED_TORUS:
        return reconstruct_torus(spec, tol, **kw)
    if boundary_lengths is None:
        boundary_lengths = spec.boundary_lengths
        kw.setdefault("search_labels", True)
    return reconstruct_shirt(spec, boundary_lengths, tol, **kw)
