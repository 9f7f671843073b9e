"""Length identities built from twist orbits of a spine ``alpha u gamma``.

With ``f(a, b) = 2 cosh(a/2) cosh(b/2)`` and ``g(a, b) = cosh(a/2) + cosh(b/2)``:

* on a one-holed torus (``i(alpha, gamma) = 1``) every tuple of the four
  families below satisfies ``f(h1, h2) = g(h3, h4)``;
* on a four-holed sphere (``i(alpha, gamma) = 2``) every tuple of the six
  families satisfies ``f(h1, h2) = g(h3, h4) + f(h5, h6) + f(h7, h8)`` where the
  last four entries are boundary curves.

Orbits: ``alpha_i = T_gamma^i(alpha)``, ``gamma_i = T_alpha^i(gamma)``;
``beta_i`` is the one of ``T_{alpha_i}^{+-1}(alpha_{i-1})`` other than ``gamma``,
and ``epsilon_i`` the one of ``T_{gamma_i}^{+-1}(gamma_{i-1})`` other than ``alpha``.

Residuals are compared against ``tol * max(1, |lhs|)``. Above length 60 both
sides are evaluated in a common exponential scale so nothing overflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from teich.curves import Slope, SurfaceKind, boundary_partition, fractional_twist, intersection, omega, slope_to_word
from teich.surface import (
    FNPoint,
    MarkedSurface,
    build_surface,
    curve_length,
    four_holed_sphere_graph,
    one_holed_torus_graph,
    sample_fn,
    shirt_boundary_lengths,
)

IDENTITY_TOL = 1e-8
LOG_DOMAIN_LENGTH = 60.0


class IdentityError(ValueError):
    pass


class Verdict(enum.Enum):
    IDENTITY = "Identity"
    NONZERO = "Nonzero"


class ConfigVerdict(enum.Enum):
    TORUS_SPINE = "TorusSpine"
    SHIRT_SPINE = "ShirtSpine"
    NO_CONFIG = "NoConfig"


def f_val(x1: float, x2: float) -> float:
    try:
        return 2.0 * math.cosh(0.5 * x1) * math.cosh(0.5 * x2)
    except OverflowError:
        return math.inf


def g_val(x1: float, x2: float) -> float:
    try:
        return math.cosh(0.5 * x1) + math.cosh(0.5 * x2)
    except OverflowError:
        return math.inf


def _log_cosh(t: float) -> float:
    t = abs(t)
    return t + math.log1p(math.exp(-2.0 * t)) - math.log(2.0)


@dataclass(frozen=True)
class ResidualReport:
    family: str
    index: int
    lhs: float
    rhs: float
    residual: float
    verdict: Verdict
    scale_log: float = 0.0  # true values are lhs * e^scale_log, rhs * e^scale_log
    curves: tuple = ()
    surface_point: FNPoint | None = field(default=None, compare=False)

    @property
    def relative(self) -> float:
        return abs(self.residual) / max(math.exp(-self.scale_log), abs(self.lhs))


def residual_terms(f_pairs: Sequence[tuple[float, float]], g_pairs: Sequence[tuple[float, float]],
                   rhs_f_pairs: Sequence[tuple[float, float]] = ()) -> tuple[float, float, float]:
    """``(lhs, rhs, scale_log)`` with lhs = sum f(f_pairs), rhs = sum g(g_pairs) + sum f(rhs_f_pairs), both times e^-scale."""
    lengths = [x for pair in (*f_pairs, *g_pairs, *rhs_f_pairs) for x in pair]
    if max(lengths) <= LOG_DOMAIN_LENGTH:
        lhs = sum(f_val(a, b) for a, b in f_pairs)
        rhs = sum(g_val(a, b) for a, b in g_pairs) + sum(f_val(a, b) for a, b in rhs_f_pairs)
        return lhs, rhs, 0.0
    logs = [math.log(2.0) + _log_cosh(0.5 * a) + _log_cosh(0.5 * b) for a, b in (*f_pairs, *rhs_f_pairs)]
    logs += [_log_cosh(0.5 * x) for pair in g_pairs for x in pair]
    scale = max(logs)
    lhs = sum(2.0 * math.exp(_log_cosh(0.5 * a) + _log_cosh(0.5 * b) - scale) for a, b in f_pairs)
    rhs = sum(math.exp(_log_cosh(0.5 * x) - scale) for pair in g_pairs for x in pair)
    rhs += sum(2.0 * math.exp(_log_cosh(0.5 * a) + _log_cosh(0.5 * b) - scale) for a, b in rhs_f_pairs)
    return lhs, rhs, scale


def _report(family, index, f_pair, g_pair, extra, tol, curves=(), point=None) -> ResidualReport:
    lhs, rhs, scale = residual_terms([f_pair], [g_pair], extra)
    res = lhs - rhs
    ok = abs(res) <= tol * max(math.exp(-scale), abs(lhs))
    return ResidualReport(family, index, lhs, rhs, res, Verdict.IDENTITY if ok else Verdict.NONZERO, scale, curves, point)


# ---------------------------------------------------------------------------
# curve orbits


def _other(kind, axis, target, exclude):
    lo, hi = fractional_twist(kind, axis, -1, target), fractional_twist(kind, axis, 1, target)
    return hi if lo == exclude else lo


@dataclass(frozen=True)
class SpineOrbits:
    """Slopes of the twist orbits of a spine; entries are keyed by index."""

    kind: SurfaceKind
    alpha: Mapping[int, Slope]
    gamma: Mapping[int, Slope]
    beta: Mapping[int, Slope]
    epsilon: Mapping[int, Slope]


def spine_orbits(kind, alpha: Slope, gamma: Slope, lo: int, hi: int) -> SpineOrbits:
    kind = SurfaceKind.parse(kind)
    a = {i: fractional_twist(kind, gamma, i, alpha) for i in range(lo, hi + 1)}
    c = {i: fractional_twist(kind, alpha, i, gamma) for i in range(lo, hi + 1)}
    b = {i: _other(kind, a[i], a[i - 1], gamma) for i in range(lo + 1, hi + 1)}
    e = {i: _other(kind, c[i], c[i - 1], alpha) for i in range(lo + 1, hi + 1)}
    return SpineOrbits(kind, a, c, b, e)


def _set1_tuples(o: SpineOrbits, rng: int):
    a, c, b, e = o.alpha, o.gamma, o.beta, o.epsilon
    out = []
    for i in range(-rng, rng + 1):
        out.append(("alpha", i, (a[i], c[0]), (a[i - 1], a[i + 1])))
        out.append(("alpha-beta", i, (a[i - 1], a[i]), (c[0], b[i])))
        out.append(("gamma", i, (c[i], a[0]), (c[i - 1], c[i + 1])))
        out.append(("gamma-epsilon", i, (c[i - 1], c[i]), (a[0], e[i])))
    return out


def _set2_tuples(o: SpineOrbits, rng: int):
    a, c, b, e = o.alpha, o.gamma, o.beta, o.epsilon
    d23_14, d13_24, d12_34 = ((2, 3), (1, 4)), ((1, 3), (2, 4)), ((1, 2), (3, 4))
    out = []
    for i in range(-rng, rng + 1):
        out.append(("alpha-even", i, (a[2 * i], c[0]), (a[2 * i - 1], a[2 * i + 1]), d23_14))
        out.append(("alpha-odd", i, (a[2 * i + 1], c[0]), (a[2 * i], a[2 * i + 2]), d13_24))
        out.append(("gamma-even", i, (c[2 * i], a[0]), (c[2 * i - 1], c[2 * i + 1]), d23_14))
        out.append(("gamma-odd", i, (c[2 * i + 1], a[0]), (c[2 * i], c[2 * i + 2]), d12_34))
        out.append(("alpha-beta", i, (a[i - 1], a[i]), (c[0], b[i]), d12_34))
        out.append(("gamma-epsilon", i, (c[i - 1], c[i]), (a[0], e[i]), d13_24))
    return out


class _Lengths:
    def __init__(self, s: MarkedSurface, kind: SurfaceKind):
        self.s, self.kind, self.cache = s, kind, {}

    def __call__(self, slope: Slope) -> float:
        if slope not in self.cache:
            self.cache[slope] = curve_length(self.s, slope_to_word(self.kind, slope))
        return self.cache[slope]


def _shirt_labels(alpha: Slope, gamma: Slope) -> dict[int, int]:
    """Spine labels 1..4 in terms of the fixed boundary labels of the surface.

    The spine convention: gamma separates {1, 2} from {3, 4} and alpha separates {1, 3} from {2, 4}.
    """
    g_side = next(side for side in boundary_partition(gamma) if 1 in side)
    a_side = next(side for side in boundary_partition(alpha) if 1 in side)
    two = next(iter(g_side - {1}))
    three = next(iter(a_side - {1}))
    four = ({1, 2, 3, 4} - {1, two, three}).pop()
    return {1: 1, 2: two, 3: three, 4: four}


def verify_set1(s: MarkedSurface, alpha: Slope, gamma: Slope, range_: int, tol: float = IDENTITY_TOL) -> list[ResidualReport]:
    """Residuals of the torus families for ``|i| <= range_``; ``range_ = 0`` is the base identity alone."""
    kind = SurfaceKind.ONE_HOLED_TORUS
    if s.kind != "S11":
        raise IdentityError("the first identity set lives on a one-holed torus")
    if intersection(kind, alpha, gamma) != 1:
        raise IdentityError(f"i({alpha}, {gamma}) = {intersection(kind, alpha, gamma)}, need 1")
    if range_ < 0:
        raise IdentityError("range must be non-negative")
    length = _Lengths(s, kind)
    if range_ == 0:
        lo, hi = fractional_twist(kind, gamma, -1, alpha), fractional_twist(kind, gamma, 1, alpha)
        return [_report("base", 0, (length(alpha), length(gamma)), (length(lo), length(hi)), (), tol,
                        (alpha, gamma, lo, hi), s.point)]
    o = spine_orbits(kind, alpha, gamma, -range_ - 1, range_ + 1)
    out = []
    for fam, i, fp, gp in _set1_tuples(o, range_):
        out.append(_report(fam, i, (length(fp[0]), length(fp[1])), (length(gp[0]), length(gp[1])), (), tol,
                           fp + gp, s.point))
    return out


def verify_set2(s: MarkedSurface, alpha: Slope, gamma: Slope, range_: int, tol: float = IDENTITY_TOL) -> list[ResidualReport]:
    """Residuals of the six sphere families for ``|i| <= range_``."""
    kind = SurfaceKind.SHIRT
    if s.kind != "S04":
        raise IdentityError("the second identity set lives on a four-holed sphere")
    if intersection(kind, alpha, gamma) != 2:
        raise IdentityError(f"i({alpha}, {gamma}) = {intersection(kind, alpha, gamma)}, need 2")
    if range_ < 0:
        raise IdentityError("range must be non-negative")
    length = _Lengths(s, kind)
    labels = _shirt_labels(alpha, gamma)
    bd = shirt_boundary_lengths(s)
    delta = {k: bd[labels[k] - 1] for k in range(1, 5)}
    o = spine_orbits(kind, alpha, gamma, -2 * range_ - 2, 2 * range_ + 2)
    out = []
    for fam, i, fp, gp, (p1, p2) in _set2_tuples(o, range_):
        extra = ((delta[p1[0]], delta[p1[1]]), (delta[p2[0]], delta[p2[1]]))
        out.append(_report(fam, i, (length(fp[0]), length(fp[1])), (length(gp[0]), length(gp[1])), extra, tol,
                           fp + gp + (p1, p2), s.point))
    return out


def max_relative_residual(reports: Sequence[ResidualReport]) -> float:
    return max((r.relative for r in reports), default=0.0)


# ---------------------------------------------------------------------------
# configuration detection


@dataclass(frozen=True)
class LengthWindow:
    """Lengths of a candidate spine configuration, indexed like the orbits they claim to be.

    ``delta`` holds the four boundary lengths in spine labelling (1..4) or is empty.
    """

    alpha: Mapping[int, float]
    gamma: Mapping[int, float]
    beta: Mapping[int, float] = field(default_factory=dict)
    epsilon: Mapping[int, float] = field(default_factory=dict)
    delta: Sequence[float] = ()

    def __post_init__(self):
        for name in ("alpha", "gamma", "beta", "epsilon"):
            for i, x in getattr(self, name).items():
                if not (isinstance(i, int) and math.isfinite(x) and x >= 0):
                    raise IdentityError(f"malformed window entry {name}[{i}] = {x}")
        if 0 not in self.alpha or 0 not in self.gamma:
            raise IdentityError("window must contain alpha_0 and gamma_0")
        if self.delta and len(self.delta) != 4:
            raise IdentityError("delta must list four boundary lengths")

    def perturbed(self, name: str, index: int, by: float) -> "LengthWindow":
        d = dict(getattr(self, name))
        d[index] = d[index] + by
        return LengthWindow(**{**self.__dict__, name: d})


def orbit_window(s: MarkedSurface, alpha: Slope, gamma: Slope, k: int) -> LengthWindow:
    """The window of genuine orbit lengths on ``s`` (indices ``-k-1 .. k+1``; doubled on the sphere)."""
    kind = SurfaceKind.ONE_HOLED_TORUS if s.kind == "S11" else SurfaceKind.SHIRT
    reach = k + 1 if kind is SurfaceKind.ONE_HOLED_TORUS else 2 * k + 2
    o = spine_orbits(kind, alpha, gamma, -reach, reach)
    length = _Lengths(s, kind)
    delta: tuple = ()
    if kind is SurfaceKind.SHIRT:
        labels = _shirt_labels(alpha, gamma)
        bd = shirt_boundary_lengths(s)
        delta = tuple(bd[labels[j] - 1] for j in range(1, 5))
    return LengthWindow(
        {i: length(x) for i, x in o.alpha.items()},
        {i: length(x) for i, x in o.gamma.items()},
        {i: length(x) for i, x in o.beta.items()},
        {i: length(x) for i, x in o.epsilon.items()},
        delta,
    )


def _window_reports(w: LengthWindow, shirt: bool, tol: float) -> list[ResidualReport]:
    a, c, b, e = w.alpha, w.gamma, w.beta, w.epsilon
    out = []
    idx = sorted(set(a) & set(c))
    if not shirt:
        for i in idx:
            need = {"alpha": [(a, i), (a, i - 1), (a, i + 1)], "alpha-beta": [(a, i - 1), (a, i), (b, i)],
                    "gamma": [(c, i), (c, i - 1), (c, i + 1)], "gamma-epsilon": [(c, i - 1), (c, i), (e, i)]}
            pairs = {
                "alpha": lambda: ((a[i], c[0]), (a[i - 1], a[i + 1])),
                "alpha-beta": lambda: ((a[i - 1], a[i]), (c[0], b[i])),
                "gamma": lambda: ((c[i], a[0]), (c[i - 1], c[i + 1])),
                "gamma-epsilon": lambda: ((c[i - 1], c[i]), (a[0], e[i])),
            }
            for fam, req in need.items():
                if all(j in m for m, j in req):
                    fp, gp = pairs[fam]()
                    out.append(_report(fam, i, fp, gp, (), tol))
        return out
    d = dict(zip(range(1, 5), w.delta))
    pf = lambda p: ((d[p[0][0]], d[p[0][1]]), (d[p[1][0]], d[p[1][1]]))
    d23_14, d13_24, d12_34 = ((2, 3), (1, 4)), ((1, 3), (2, 4)), ((1, 2), (3, 4))
    for i in idx:
        cands = [
            ("alpha-even", [(a, 2 * i), (a, 2 * i - 1), (a, 2 * i + 1)], lambda: ((a[2 * i], c[0]), (a[2 * i - 1], a[2 * i + 1])), d23_14),
            ("alpha-odd", [(a, 2 * i + 1), (a, 2 * i), (a, 2 * i + 2)], lambda: ((a[2 * i + 1], c[0]), (a[2 * i], a[2 * i + 2])), d13_24),
            ("gamma-even", [(c, 2 * i), (c, 2 * i - 1), (c, 2 * i + 1)], lambda: ((c[2 * i], a[0]), (c[2 * i - 1], c[2 * i + 1])), d23_14),
            ("gamma-odd", [(c, 2 * i + 1), (c, 2 * i), (c, 2 * i + 2)], lambda: ((c[2 * i + 1], a[0]), (c[2 * i], c[2 * i + 2])), d12_34),
            ("alpha-beta", [(a, i - 1), (a, i), (b, i)], lambda: ((a[i - 1], a[i]), (c[0], b[i])), d12_34),
            ("gamma-epsilon", [(c, i - 1), (c, i), (e, i)], lambda: ((c[i - 1], c[i]), (a[0], e[i])), d13_24),
        ]
        for fam, req, pairs, dp in cands:
            if all(j in m for m, j in req):
                fp, gp = pairs()
                out.append(_report(fam, i, fp, gp, pf(dp), tol))
    return out


def detect_config(window: LengthWindow, tol: float = 1e-6) -> ConfigVerdict:
    """Which spine the window's lengths are consistent with, judged from the identities alone."""
    torus = _window_reports(window, False, tol)
    if not torus:
        raise IdentityError("window is too small to evaluate any identity")
    if all(r.verdict is Verdict.IDENTITY for r in torus):
        return ConfigVerdict.TORUS_SPINE
    if window.delta:
        shirt = _window_reports(window, True, tol)
        if shirt and all(r.verdict is Verdict.IDENTITY for r in shirt):
            return ConfigVerdict.SHIRT_SPINE
    return ConfigVerdict.NO_CONFIG


# ---------------------------------------------------------------------------
# sampling


def sample_surface(kind, seed: int, *, length_range=(0.1, 5.0), twist_range=(-1.0, 1.0),
                   boundary_range=(0.1, 5.0), cusp_fraction: float = 0.0) -> MarkedSurface:
    kind = SurfaceKind.parse(kind)
    graph = one_holed_torus_graph() if kind is SurfaceKind.ONE_HOLED_TORUS else four_holed_sphere_graph()
    point = sample_fn(graph, length_range, twist_range, seed, boundary_range=boundary_range, cusp_fraction=cusp_fraction)
    return build_surface(graph, point)


def tuple_residual(s: MarkedSurface, config: Sequence, tol: float = IDENTITY_TOL) -> ResidualReport:
    """Residual of one hand-picked tuple.

    Four slopes ``(h1, h2, h3, h4)`` give ``f(h1, h2) - g(h3, h4)``. On a sphere
    two further label pairs add the boundary terms.
    """
    kind = SurfaceKind.ONE_HOLED_TORUS if s.kind == "S11" else SurfaceKind.SHIRT
    length = _Lengths(s, kind)
    slopes = [Slope(*x) for x in config[:4]]
    extra = ()
    if len(config) == 6:
        bd = shirt_boundary_lengths(s)
        extra = tuple((bd[p[0] - 1], bd[p[1] - 1]) for p in config[4:])
    elif len(config) != 4:
        raise IdentityError("a tuple has four slopes, optionally followed by two boundary label pairs")
    return _report("custom", 0, (length(slopes[0]), length(slopes[1])), (length(slopes[2]), length(slopes[3])),
                   extra, tol, tuple(slopes), s.point)


def nonvanishing_sample(family: str, wrong_config: Sequence, n: int, seed: int, threshold: float = 1e-6,
                        **sample_kw) -> float:
    """Fraction of ``n`` seeded random surfaces on which the tuple's relative residual exceeds ``threshold``."""
    if n <= 0:
        raise IdentityError("need at least one sample")
    kind = {"set1": SurfaceKind.ONE_HOLED_TORUS, "set2": SurfaceKind.SHIRT}.get(family)
    if kind is None:
        raise IdentityError(f"unknown family {family!r}")
    seeds = np.random.SeedSequence(seed).generate_state(n)
    hits = 0
    for k in seeds:
        s = sample_surface(kind, int(k), **sample_kw)
        if tuple_residual(s, wrong_config).relative > threshold:
            hits += 1
    return hits / n


def campaign(family: str, samples: int, seed: int, range_: int, tol: float = IDENTITY_TOL,
             cusp_fraction: float | None = None) -> dict:
    """Verify a family over seeded random surfaces; returns the JSON-ready summary."""
    kind = {"set1": SurfaceKind.ONE_HOLED_TORUS, "set2": SurfaceKind.SHIRT}.get(family)
    if kind is None:
        raise IdentityError(f"unknown family {family!r}")
    if cusp_fraction is None:
        cusp_fraction = 0.0 if kind is SurfaceKind.ONE_HOLED_TORUS else 0.25
    verify: Callable = verify_set1 if kind is SurfaceKind.ONE_HOLED_TORUS else verify_set2
    seeds = np.random.SeedSequence(seed).generate_state(samples)
    per_family: dict[str, float] = {}
    failures = 0
    count = 0
    for k in seeds:
        s = sample_surface(kind, int(k), cusp_fraction=cusp_fraction)
        for r in verify(s, Slope(1, 0), Slope(0, 1), range_, tol):
            per_family[r.family] = max(per_family.get(r.family, 0.0), r.relative)
            failures += r.verdict is not Verdict.IDENTITY
            count += 1
    return {
        "family": family,
        "samples": samples,
        "seed": seed,
        "range": range_,
        "tolerance": tol,
        "reports": count,
        "failures": failures,
        "max_residual": max(per_family.values(), default=0.0),
        "max_residual_by_family": dict(sorted(per_family.items())),
        "verdict": "Identity" if failures == 0 else "Nonzero",
    }
