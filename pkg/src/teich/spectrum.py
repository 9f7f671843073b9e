"""Simple length spectra of one-holed tori and four-holed spheres.

Simple closed curves are the vertices of the Farey tessellation. Starting from
the triangle ``(1,0), (0,1), (1,1)``, every step across an edge ``(u, n)`` with
opposite vertex ``v`` reaches the new vertex ``m = u +- n`` whose trace
magnitude is

    X(m) = X(u) X(n) - X(v) - K(m)

with ``K = 0`` on the torus and, on the sphere, ``K(m)`` the sum of the products
of boundary traces on either side of ``m``. A subtree is cut only once its root
trace exceeds the cutoff and the local inequalities below guarantee that every
trace further down is at least as large.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from teich.curves import Slope, SurfaceKind, boundary_partition, slope_to_word
from teich.moebius import length_from_trace
from teich.surface import MarkedSurface, shirt_boundary_lengths, slot_lengths

BUCKET_TOL = 1e-9


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumEntry:
    length: float
    slopes: tuple[Slope, ...] = ()
    boundaries: tuple[int, ...] = ()

    @property
    def multiplicity(self) -> int:
        return len(self.slopes) + len(self.boundaries)


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[SpectrumEntry, ...]
    cutoff: float
    kind: SurfaceKind
    boundary_lengths: tuple[float, ...]
    traces: tuple[float, float, float]
    include_boundary: bool = True

    def lengths(self) -> list[float]:
        """The unmarked multiset, each length repeated by its multiplicity."""
        return [e.length for e in self.entries for _ in range(e.multiplicity)]

    def curves(self) -> list[tuple[float, object]]:
        """``(length, curve)`` pairs where a curve is a :class:`Slope` or a boundary index."""
        out = []
        for e in self.entries:
            out.extend((e.length, s) for s in e.slopes)
            out.extend((e.length, b) for b in e.boundaries)
        return out

    def length_of(self, slope: Slope) -> float | None:
        for e in self.entries:
            if slope in e.slopes:
                return e.length
        return None

    def truncate(self, cutoff: float) -> "Spectrum":
        if cutoff > self.cutoff:
            raise SpectrumError(f"cannot extend a spectrum from {self.cutoff} to {cutoff}")
        kept = tuple(e for e in self.entries if e.length <= cutoff)
        return Spectrum(kept, cutoff, self.kind, self.boundary_lengths, self.traces, self.include_boundary)


@dataclass(frozen=True)
class SpectrumDiff:
    only_left: tuple[float, ...]
    only_right: tuple[float, ...]
    matched: int
    max_deviation: float = 0.0
    near_cutoff: int = 0

    @property
    def all_matched(self) -> bool:
        return not self.only_left and not self.only_right


@dataclass(frozen=True)
class Cluster:
    lengths: tuple[float, ...]
    curves: tuple[object, ...]

    @property
    def size(self) -> int:
        return len(self.curves)


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class TraceModel:
    """Seed traces and the class term ``K`` of the Farey recursion."""

    kind: SurfaceKind
    x: float  # (1, 0)
    y: float  # (0, 1)
    z: float  # (1, 1)
    boundary_traces: tuple[float, ...] = ()
    _k: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.kind is SurfaceKind.SHIRT:
            if len(self.boundary_traces) != 4:
                raise SpectrumError("a four-holed sphere needs four boundary traces")
            d = dict(enumerate(self.boundary_traces, start=1))
            for s in (Slope(1, 0), Slope(0, 1), Slope(1, 1)):
                a, b = (sorted(side) for side in boundary_partition(s))
                self._k[(s.p % 2, s.q % 2)] = d[a[0]] * d[a[1]] + d[b[0]] * d[b[1]]

    def k(self, p: int, q: int) -> float:
        if self.kind is SurfaceKind.ONE_HOLED_TORUS:
            return 0.0
        return self._k[(p % 2, q % 2)]

    @property
    def k_max(self) -> float:
        return max(self._k.values()) if self._k else 0.0


def trace_model(s: MarkedSurface) -> TraceModel:
    kind = s.kind
    if kind == "S11":
        return TraceModel(SurfaceKind.ONE_HOLED_TORUS, s.trace("A"), s.trace("B"), s.trace("A B"))
    if kind == "S04":
        bt = tuple(2.0 * math.cosh(0.5 * x) for x in shirt_boundary_lengths(s))
        x, y, z = (s.trace(slope_to_word(SurfaceKind.SHIRT, v)) for v in (Slope(1, 0), Slope(0, 1), Slope(1, 1)))
        return TraceModel(SurfaceKind.SHIRT, x, y, z, bt)
    raise SpectrumError(f"spectra are only computed for one-holed tori and four-holed spheres, got {kind}")


def boundary_lengths_of(s: MarkedSurface) -> tuple[float, ...]:
    if s.kind == "S04":
        return shirt_boundary_lengths(s)
    lens = slot_lengths(s.graph, s.point)
    return tuple(lens[n][k] for n, k in s.graph.boundaries)


# ---------------------------------------------------------------------------
# enumeration


def _prunable(xm: float, xu: float, xn: float, k: float) -> bool:
    # with X(m) >= X(u), X(n) these bounds make every trace below m at least X(m)
    if xm < xu or xm < xn:
        return False
    if xm * (xm - 2.0) < k or (xm - 1.0) ** 2 < 1.0 + k:
        return False
    for xw in (xu, xn):
        if xm * (xw - 2.0) < k or (xw - 1.0) * (xm - 1.0) < 1.0 + k:
            return False
    return True


def enumerate_traces(
    model: TraceModel,
    cutoff: float,
    *,
    prune: bool = True,
    max_height: int | None = None,
) -> list[tuple[float, tuple[int, int]]]:
    """All ``(trace, (p, q))`` with length <= cutoff.

    ``prune=False`` walks the whole tree down to slopes with ``|p| + |q| <= max_height``.
    """
    if not cutoff > 0:
        raise SpectrumError(f"cutoff must be positive, got {cutoff}")
    if not prune and max_height is None:
        raise SpectrumError("an unpruned walk needs max_height")
    limit = 2.0 * math.cosh(0.5 * cutoff) if cutoff < 1400 else math.inf
    kmax = model.k_max
    out: list[tuple[float, tuple[int, int]]] = []
    seeds = [((1, 0), model.x), ((0, 1), model.y), ((1, 1), model.z)]
    for v, xv in seeds:
        if xv <= limit:
            out.append((xv, v))

    # edge (u, n) with opposite vertex v
    stack = [
        (seeds[0], seeds[1], seeds[2]),
        (seeds[1], seeds[2], seeds[0]),
        (seeds[2], seeds[0], seeds[1]),
    ]
    while stack:
        (u, xu), (n, xn), (v, xv) = stack.pop()
        m = (u[0] + n[0], u[1] + n[1])
        if m == v or m == (-v[0], -v[1]):
            m = (u[0] - n[0], u[1] - n[1])
        if max_height is not None and abs(m[0]) + abs(m[1]) > max_height:
            continue
        xm = xu * xn - xv - model.k(*m)
        if xm <= limit:
            out.append((xm, m))
        elif prune and _prunable(xm, xu, xn, kmax):
            continue
        stack.append(((u, xu), (m, xm), (n, xn)))
        stack.append(((m, xm), (n, xn), (u, xu)))
    return out


def _bucket(curves: list[tuple[float, object]], tol: float) -> tuple[SpectrumEntry, ...]:
    def key(c):
        length, curve = c
        return (length, 1, curve.p, curve.q) if isinstance(curve, Slope) else (length, 0, curve, 0)

    curves = sorted(curves, key=key)
    entries = []
    i = 0
    while i < len(curves):
        start = curves[i][0]
        j = i
        while j < len(curves) and curves[j][0] - start <= tol:
            j += 1
        group = curves[i:j]
        slopes = tuple(sorted(c for _, c in group if isinstance(c, Slope)))
        bds = tuple(sorted(c for _, c in group if not isinstance(c, Slope)))
        entries.append(SpectrumEntry(start, slopes, bds))
        i = j
    return tuple(entries)


def spectrum_from_model(
    model: TraceModel,
    cutoff: float,
    boundary_lengths: Sequence[float] = (),
    *,
    include_boundary: bool = True,
    bucket_tol: float = BUCKET_TOL,
    prune: bool = True,
    max_height: int | None = None,
) -> Spectrum:
    curves: list[tuple[float, object]] = []
    for x, (p, q) in enumerate_traces(model, cutoff, prune=prune, max_height=max_height):
        length = length_from_trace(x)
        if length <= cutoff:
            curves.append((length, Slope(p, q)))
    if include_boundary:
        curves.extend((b, k) for k, b in enumerate(boundary_lengths) if 0 < b <= cutoff)
    return Spectrum(
        _bucket(curves, bucket_tol),
        float(cutoff),
        model.kind,
        tuple(float(b) for b in boundary_lengths),
        (model.x, model.y, model.z),
        include_boundary,
    )


def enumerate_spectrum(
    s: MarkedSurface,
    cutoff: float,
    *,
    include_boundary: bool = True,
    bucket_tol: float = BUCKET_TOL,
    prune: bool = True,
    max_height: int | None = None,
) -> Spectrum:
    """Simple length spectrum of ``s`` up to ``cutoff``, one entry per bucket of equal lengths."""
    return spectrum_from_model(
        trace_model(s),
        cutoff,
        boundary_lengths_of(s),
        include_boundary=include_boundary,
        bucket_tol=bucket_tol,
        prune=prune,
        max_height=max_height,
    )


def brute_force_lengths(s: MarkedSurface, bound: int, cutoff: float) -> list[tuple[float, Slope]]:
    """Lengths of all slopes with ``|p|, |q| <= bound`` computed from holonomy matrices.

    On the torus the matrices of the Stern-Brocot tree are built by one product
    per node (the mediant word is the concatenation of its parents' words).
    """
    if s.kind == "S11":
        a = s.evaluate("A").entries
        b = s.evaluate("B").entries
        ai = (a[3], -a[1], -a[2], a[0])
        out = []
        for first in (a, ai):
            sign = 1 if first is a else -1
            out.extend(_stern_brocot(first, b, bound, cutoff, sign))
        return sorted(set(out), key=lambda t: (t[0], t[1].p, t[1].q))
    if s.kind == "S04":
        out = []
        for p in range(-bound, bound + 1):
            for q in range(0, bound + 1):
                if math.gcd(p, q) != 1 or (q == 0 and p != 1):
                    continue
                x = s.trace(slope_to_word(SurfaceKind.SHIRT, Slope(p, q)))
                if math.isfinite(x):
                    length = length_from_trace(x)
                    if length <= cutoff:
                        out.append((length, Slope(p, q)))
        return sorted(out, key=lambda t: (t[0], t[1].p, t[1].q))
    raise SpectrumError("brute force needs a one-holed torus or a four-holed sphere")


def _mul(m, n):
    return (
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    )


def _stern_brocot(a, b, bound, cutoff, sign):
    out = []

    def record(p, q, m):
        t = abs(m[0] + m[3])
        if math.isfinite(t):
            length = length_from_trace(t)
            if length <= cutoff:
                out.append((length, Slope(sign * p, q)))

    record(1, 0, a)
    record(0, 1, b)
    stack = [((1, 0), a, (0, 1), b)]
    while stack:
        lo, mlo, hi, mhi = stack.pop()
        p, q = lo[0] + hi[0], lo[1] + hi[1]
        if p > bound or q > bound:
            continue
        m = _mul(mlo, mhi)
        if not all(math.isfinite(x) for x in m):
            continue
        record(p, q, m)
        stack.append((lo, mlo, (p, q), m))
        stack.append(((p, q), m, hi, mhi))
    return out


# ---------------------------------------------------------------------------
# comparison


def compare(a: Spectrum, b: Spectrum, tol: float) -> SpectrumDiff:
    """Greedy matching of the two sorted multisets.

    Unmatched lengths within ``tol`` of the common cutoff are not reported:
    roundoff can put the same curve on either side of the cutoff.
    """
    if a.cutoff != b.cutoff:
        raise SpectrumError(f"spectra have different cutoffs {a.cutoff} and {b.cutoff}")
    la, lb = a.lengths(), b.lengths()
    i = j = matched = near = 0
    left, right = [], []
    dev = 0.0
    while i < len(la) and j < len(lb):
        d = la[i] - lb[j]
        if abs(d) <= tol:
            dev = max(dev, abs(d))
            matched += 1
            i += 1
            j += 1
        elif d < 0:
            left.append(la[i])
            i += 1
        else:
            right.append(lb[j])
            j += 1
    left.extend(la[i:])
    right.extend(lb[j:])
    edge = a.cutoff - tol
    near = sum(1 for x in left + right if x >= edge)
    left = [x for x in left if x < edge]
    right = [x for x in right if x < edge]
    return SpectrumDiff(tuple(left), tuple(right), matched, dev, near)


def multiplicity_report(s: Spectrum, window: float) -> list[Cluster]:
    """Groups of two or more curves whose consecutive lengths lie within ``window``."""
    if not window > 0:
        raise SpectrumError(f"window must be positive, got {window}")
    curves = s.curves()
    clusters = []
    i = 0
    while i < len(curves):
        j = i + 1
        while j < len(curves) and curves[j][0] - curves[j - 1][0] <= window:
            j += 1
        if j - i >= 2:
            group = curves[i:j]
            clusters.append(Cluster(tuple(x for x, _ in group), tuple(c for _, c in group)))
        i = j
    return clusters


# ---------------------------------------------------------------------------
# files


def _header(s: Spectrum) -> dict:
    return {
        "kind": s.kind.value,
        "cutoff": s.cutoff,
        "boundary_lengths": list(s.boundary_lengths),
        "traces": list(s.traces),
        "include_boundary": s.include_boundary,
    }


def dumps(s: Spectrum) -> str:
    lines = [json.dumps(_header(s), sort_keys=True)]
    for e in s.entries:
        rec: dict = {"length": e.length, "slopes": [[x.p, x.q] for x in e.slopes]}
        if e.boundaries:
            rec["boundaries"] = list(e.boundaries)
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Spectrum:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SpectrumError("empty spectrum file")
    try:
        head = json.loads(lines[0])
        kind = SurfaceKind.parse(head["kind"])
        cutoff = float(head["cutoff"])
        bl = tuple(float(x) for x in head.get("boundary_lengths", []))
        traces = tuple(float(x) for x in head.get("traces", (math.nan,) * 3))
        include = bool(head.get("include_boundary", True))
        entries = []
        for ln in lines[1:]:
            rec = json.loads(ln)
            entries.append(
                SpectrumEntry(
                    float(rec["length"]),
                    tuple(Slope(p, q) for p, q in rec.get("slopes", [])),
                    tuple(int(b) for b in rec.get("boundaries", [])),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpectrumError(f"malformed spectrum file: {exc}") from exc
    return Spectrum(tuple(entries), cutoff, kind, bl, traces, include)


def atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_spectrum(s: Spectrum, path) -> None:
    atomic_write(path, dumps(s))


def read_spectrum(path) -> Spectrum:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def without_boundary(s: Spectrum) -> Spectrum:
    """The same spectrum with the boundary curves removed."""
    entries = tuple(
        SpectrumEntry(e.length, e.slopes, ()) for e in s.entries if e.slopes
    )
    return Spectrum(entries, s.cutoff, s.kind, s.boundary_lengths, s.traces, False)


def unmarked(s: Spectrum) -> Iterable[float]:
    return iter(s.lengths())
