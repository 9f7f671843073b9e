"""Marked hyperbolic surfaces assembled from pants and Fenchel-Nielsen coordinates.

A :class:`PantsGraph` lists pants nodes (three slots each), gluings between slots
and boundary slots. An :class:`FNPoint` assigns a length and a twist to every
gluing and a length (0 for a puncture) to every boundary slot. Twists are
normalized: a full turn is 1, so the displacement along the curve is
``twist * length``. Twist zero lines up the reference seam feet of the two pants
as fixed by :mod:`teich.pants`.

Holonomy is built on a spanning tree of the pants graph rooted at node 0. The
generators of the fundamental group are

* ``p{node}s{slot}``: the cuff loop of every slot, conjugated into the global chart;
* ``t{edge}``: a stable letter for every gluing outside the tree (self-gluings included).

Words are tuples of ``(name, exponent)`` pairs with exponent ``+1`` or ``-1``.
Strings such as ``"A B^-1 A"`` are accepted wherever a word is expected.
"""

from __future__ import annotations

import json
import math
import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from teich.moebius import MoebiusMatrix, translation, translation_length
from teich.pants import PantsGeometry, build_pants, conjugated_translation

RELATOR_TOL = 1e-9

_FLIP = MoebiusMatrix(0.0, 1.0, -1.0, 0.0)  # z -> -1/z: reverses the axis and swaps its sides

Letter = tuple[str, int]
Word = tuple[Letter, ...]
WordLike = Union[str, Sequence[Union[str, Letter]]]


class SurfaceError(ValueError):
    """Invalid pants graph, coordinates or surface."""


class ConfigError(SurfaceError):
    """A surface configuration that does not parse; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ExhaustionError(SurfaceError):
    """No growth order exists; ``edge`` is the gluing that closes a cycle of attachment units."""

    def __init__(self, message: str, edge: int, units: tuple[int, int]):
        super().__init__(message)
        self.edge = edge
        self.units = units


# ---------------------------------------------------------------------------
# words


def parse_word(word: WordLike) -> Word:
    if isinstance(word, str):
        tokens: Iterable = word.split()
    else:
        tokens = word
    out = []
    for tok in tokens:
        if isinstance(tok, tuple):
            name, e = tok
            if e not in (1, -1):
                raise ValueError(f"letter exponent must be +1 or -1, got {e}")
            out.append((str(name), int(e)))
            continue
        tok = str(tok)
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        elif tok.endswith("^1"):
            out.append((tok[:-2], 1))
        else:
            out.append((tok, 1))
    return tuple(out)


def invert_word(word: WordLike) -> Word:
    return tuple((n, -e) for n, e in reversed(parse_word(word)))


def reduce_word(word: WordLike) -> Word:
    """Free reduction."""
    stack: list[Letter] = []
    for letter in parse_word(word):
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def format_word(word: WordLike) -> str:
    return " ".join(n if e == 1 else f"{n}^-1" for n, e in parse_word(word))


# ---------------------------------------------------------------------------
# combinatorics


@dataclass(frozen=True)
class PantsGraph:
    n_pants: int
    gluings: tuple[tuple[int, int, int, int], ...]
    boundaries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "gluings", tuple(tuple(int(x) for x in g) for g in self.gluings))
        object.__setattr__(self, "boundaries", tuple(tuple(int(x) for x in b) for b in self.boundaries))
        if self.n_pants < 1:
            raise SurfaceError("a pants graph needs at least one pants")
        seen: dict[tuple[int, int], str] = {}

        def claim(node, slot, owner):
            if not (0 <= node < self.n_pants and 0 <= slot < 3):
                raise SurfaceError(f"{owner}: slot ({node}, {slot}) does not exist")
            if (node, slot) in seen:
                raise SurfaceError(f"{owner}: slot ({node}, {slot}) already used by {seen[(node, slot)]}")
            seen[(node, slot)] = owner

        for e, (a, sa, b, sb) in enumerate(self.gluings):
            claim(a, sa, f"gluing {e}")
            claim(b, sb, f"gluing {e}")
        for k, (n, s) in enumerate(self.boundaries):
            claim(n, s, f"boundary {k}")
        missing = [(n, s) for n in range(self.n_pants) for s in range(3) if (n, s) not in seen]
        if missing:
            raise SurfaceError(f"slots {missing} are neither glued nor marked as boundary")

    @property
    def seams(self) -> tuple[tuple[int, int, int], ...]:
        """Seam arcs ``(node, slot, next slot)``: each pants carries one seam per pair of cuffs."""
        return tuple((n, s, (s + 1) % 3) for n in range(self.n_pants) for s in range(3))

    @property
    def euler_characteristic(self) -> int:
        return -self.n_pants

    def components(self) -> list[list[int]]:
        parent = list(range(self.n_pants))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, _, b, _ in self.gluings:
            parent[find(a)] = find(b)
        groups: dict[int, list[int]] = {}
        for n in range(self.n_pants):
            groups.setdefault(find(n), []).append(n)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def kind(self) -> str | None:
        """``"S11"`` for a one-holed torus, ``"S04"`` for a four-holed sphere, else ``None``."""
        if self.n_pants == 1 and len(self.gluings) == 1:
            return "S11"
        if self.n_pants == 2 and len(self.gluings) == 1 and self.is_connected():
            return "S04"
        return None

    def boundary_index(self, node: int, slot: int) -> int:
        return self.boundaries.index((node, slot))


@dataclass(frozen=True)
class FNPoint:
    """Fenchel-Nielsen coordinates: one length and normalized twist per gluing, one length per boundary."""

    lengths: tuple[float, ...]
    twists: tuple[float, ...]
    boundary: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        object.__setattr__(self, "twists", tuple(float(x) for x in self.twists))
        object.__setattr__(self, "boundary", tuple(float(x) for x in self.boundary))
        if len(self.lengths) != len(self.twists):
            raise SurfaceError("every interior curve needs exactly one length and one twist")
        for e, x in enumerate(self.lengths):
            if not (math.isfinite(x) and x > 0):
                raise SurfaceError(f"length of interior curve {e} must be finite and positive, got {x}")
        for e, x in enumerate(self.twists):
            if not math.isfinite(x):
                raise SurfaceError(f"twist of interior curve {e} must be finite, got {x}")
        for k, x in enumerate(self.boundary):
            if not (math.isfinite(x) and x >= 0):
                raise SurfaceError(f"boundary {k} length must be finite and non-negative, got {x}")

    def with_length(self, edge: int, value: float) -> "FNPoint":
        lengths = list(self.lengths)
        lengths[edge] = value
        return replace(self, lengths=tuple(lengths))

    def with_twist(self, edge: int, value: float) -> "FNPoint":
        twists = list(self.twists)
        twists[edge] = value
        return replace(self, twists=tuple(twists))

    def to_dict(self) -> dict:
        return {"lengths": list(self.lengths), "twists": list(self.twists), "boundary": list(self.boundary)}

    @classmethod
    def from_dict(cls, data: dict) -> "FNPoint":
        return cls(tuple(data["lengths"]), tuple(data["twists"]), tuple(data["boundary"]))


def _check_shape(graph: PantsGraph, point: FNPoint):
    if len(point.lengths) != len(graph.gluings):
        raise SurfaceError(f"{len(graph.gluings)} gluings but {len(point.lengths)} lengths")
    if len(point.boundary) != len(graph.boundaries):
        raise SurfaceError(f"{len(graph.boundaries)} boundary slots but {len(point.boundary)} lengths")


def slot_lengths(graph: PantsGraph, point: FNPoint) -> list[list[float]]:
    out = [[0.0] * 3 for _ in range(graph.n_pants)]
    for e, (a, sa, b, sb) in enumerate(graph.gluings):
        out[a][sa] = out[b][sb] = point.lengths[e]
    for k, (n, s) in enumerate(graph.boundaries):
        out[n][s] = point.boundary[k]
    return out


# ---------------------------------------------------------------------------
# holonomy


@dataclass(frozen=True)
class MarkedSurface:
    graph: PantsGraph
    point: FNPoint
    pants: tuple[PantsGeometry, ...]
    positions: tuple[MoebiusMatrix, ...]
    holonomy: Mapping[str, MoebiusMatrix]
    tree_edges: frozenset[int]
    relators: tuple[Word, ...]
    aliases: Mapping[str, Word] = field(default_factory=dict)

    @property
    def kind(self) -> str | None:
        return self.graph.kind()

    def generator_names(self) -> list[str]:
        return list(self.holonomy)

    def curve_word(self, edge: int) -> Word:
        """Word of the interior decomposition curve ``edge``, seen from its first slot."""
        a, sa, _, _ = self.graph.gluings[edge]
        return ((f"p{a}s{sa}", 1),)

    def boundary_word(self, k: int) -> Word:
        n, s = self.graph.boundaries[k]
        return ((f"p{n}s{s}", 1),)

    def expand(self, word: WordLike) -> Word:
        out: list[Letter] = []
        for name, e in parse_word(word):
            if name in self.aliases:
                sub = self.aliases[name]
                out.extend(sub if e == 1 else invert_word(sub))
            elif name in self.holonomy:
                out.append((name, e))
            else:
                raise KeyError(f"unknown generator {name!r}")
        return tuple(out)

    def evaluate(self, word: WordLike) -> MoebiusMatrix:
        return MoebiusMatrix(*self._product(word))

    def _product(self, word: WordLike) -> tuple[float, float, float, float]:
        # plain floating product; long words near a pinch lose the determinant to cancellation
        a, b, c, d = 1.0, 0.0, 0.0, 1.0
        for name, e in self.expand(word):
            p, q, r, s = self.holonomy[name].entries
            if e == -1:
                p, q, r, s = s, -q, -r, p
            a, b, c, d = a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s
        return a, b, c, d

    def trace(self, word: WordLike) -> float:
        a, _, _, d = self._product(word)
        return abs(a + d)

    def relator_residuals(self) -> list[float]:
        """Distance of every relator image from the identity, relative to the size of its letters."""
        out = []
        for w in self.relators:
            scale = max(1.0, max(_norm2(self.holonomy[n]) for n, _ in w))
            m = self._product(w)
            gap = min(max(abs(x - y) for x, y in zip(m, (1.0, 0.0, 0.0, 1.0))),
                      max(abs(x + y) for x, y in zip(m, (1.0, 0.0, 0.0, 1.0))))
            out.append(gap / scale)
        return out


def _norm2(m: MoebiusMatrix) -> float:
    return m.a**2 + m.b**2 + m.c**2 + m.d**2


def _transition(pa: PantsGeometry, sa: int, pb: PantsGeometry, sb: int, displacement: float) -> MoebiusMatrix:
    # maps the chart of pants b into the chart of pants a across the glued cuff;
    # orientation reverses along the cuff so M g_b M^-1 = g_a^-1
    return pa.frame(sa) @ translation(displacement) @ _FLIP @ pb.frame(sb).inverse()


def _standard_aliases(graph: PantsGraph, stable: dict[int, str]) -> dict[str, Word]:
    kind = graph.kind()
    if kind == "S11":
        a, sa, _, _ = graph.gluings[0]
        return {"A": ((stable[0], 1),), "B": ((f"p{a}s{sa}", 1),)}
    if kind == "S04":
        p, sp, q, sq = graph.gluings[0]
        return {
            "d1": ((f"p{p}s{(sp + 1) % 3}", 1),),
            "d2": ((f"p{p}s{(sp + 2) % 3}", 1),),
            "d3": ((f"p{q}s{(sq + 2) % 3}", 1),),
            "d4": ((f"p{q}s{(sq + 1) % 3}", 1),),
        }
    return {}


def build_surface(graph: PantsGraph, point: FNPoint, tol: float = RELATOR_TOL) -> MarkedSurface:
    """Glue canonical pants along the graph with the given lengths and twists."""
    _check_shape(graph, point)
    comps = graph.components()
    if len(comps) > 1:
        raise SurfaceError(f"pants graph is disconnected: components {comps}")
    lens = slot_lengths(graph, point)
    pants = tuple(build_pants(*lens[n]) for n in range(graph.n_pants))

    positions: list[MoebiusMatrix | None] = [None] * graph.n_pants
    positions[0] = MoebiusMatrix.identity()
    tree: set[int] = set()
    incident: dict[int, list[int]] = {n: [] for n in range(graph.n_pants)}
    for e, (a, _, b, _) in enumerate(graph.gluings):
        if a != b:
            incident[a].append(e)
            incident[b].append(e)
    queue = deque([0])
    while queue:
        n = queue.popleft()
        for e in incident[n]:
            a, sa, b, sb = graph.gluings[e]
            if a == n:
                other, s_here, s_there = b, sa, sb
            else:
                other, s_here, s_there = a, sb, sa
            if positions[other] is not None:
                continue
            d = point.twists[e] * point.lengths[e]
            positions[other] = positions[n] @ _transition(pants[n], s_here, pants[other], s_there, d)
            tree.add(e)
            queue.append(other)

    holonomy: dict[str, MoebiusMatrix] = {}
    for n in range(graph.n_pants):
        g = positions[n]
        for s in range(3):
            if lens[n][s] > 0:
                holonomy[f"p{n}s{s}"] = conjugated_translation(g @ pants[n].frame(s), lens[n][s])
            else:
                holonomy[f"p{n}s{s}"] = g @ pants[n].generator(s) @ g.inverse()
    stable: dict[int, str] = {}
    relators: list[Word] = [tuple((f"p{n}s{s}", 1) for s in range(3)) for n in range(graph.n_pants)]
    for e, (a, sa, b, sb) in enumerate(graph.gluings):
        if e in tree:
            relators.append(((f"p{a}s{sa}", 1), (f"p{b}s{sb}", 1)))
            continue
        d = point.twists[e] * point.lengths[e]
        name = f"t{e}"
        stable[e] = name
        holonomy[name] = positions[a] @ _transition(pants[a], sa, pants[b], sb, d) @ positions[b].inverse()
        relators.append(((name, 1), (f"p{b}s{sb}", 1), (name, -1), (f"p{a}s{sa}", 1)))

    surface = MarkedSurface(
        graph=graph,
        point=point,
        pants=pants,
        positions=tuple(positions),
        holonomy=holonomy,
        tree_edges=frozenset(tree),
        relators=tuple(relators),
        aliases=_standard_aliases(graph, stable),
    )
    worst = max(surface.relator_residuals())
    if not worst <= tol:
        raise SurfaceError(f"holonomy violates a gluing relation: residual {worst:.3e} > {tol:.1e}")
    return surface


def curve_length(s: MarkedSurface, word: WordLike) -> float:
    """Length of the closed geodesic freely homotopic to ``word``; 0 for a cusp."""
    w = parse_word(word)
    if not w:
        raise ValueError("curve word must be nonempty")
    letters = reduce_word(s.expand(w))
    if len(letters) == 1:
        # a cuff loop: its length is a coordinate, exact even when the trace is 2 to working precision
        name = letters[0][0]
        m = re.fullmatch(r"p(\d+)s(\d)", name)
        if m:
            return s.pants[int(m.group(1))].boundary_lengths[int(m.group(2))]
    return translation_length(s.evaluate(w))


# ---------------------------------------------------------------------------
# standard shapes


def one_holed_torus_graph() -> PantsGraph:
    return PantsGraph(1, ((0, 0, 0, 1),), ((0, 2),))


def four_holed_sphere_graph() -> PantsGraph:
    # boundaries are listed as delta_1 .. delta_4
    return PantsGraph(2, ((0, 0, 1, 0),), ((0, 1), (0, 2), (1, 2), (1, 1)))


def one_holed_torus(length: float, twist: float, boundary: float = 0.0) -> MarkedSurface:
    return build_surface(one_holed_torus_graph(), FNPoint((length,), (twist,), (boundary,)))


def four_holed_sphere(length: float, twist: float, boundary: Sequence[float] = (0.0, 0.0, 0.0, 0.0)) -> MarkedSurface:
    return build_surface(four_holed_sphere_graph(), FNPoint((length,), (twist,), tuple(boundary)))


def shirt_boundary_lengths(s: MarkedSurface) -> tuple[float, float, float, float]:
    """Lengths of ``d1 .. d4`` on a four-holed sphere."""
    lens = slot_lengths(s.graph, s.point)
    out = []
    for name in ("d1", "d2", "d3", "d4"):
        (letter, _), = s.aliases[name]
        n, slot = letter[1:].split("s")
        out.append(lens[int(n)][int(slot)])
    return tuple(out)


# ---------------------------------------------------------------------------
# coordinates


def fn_distance(p: FNPoint, q: FNPoint) -> float:
    if len(p.lengths) != len(q.lengths) or len(p.boundary) != len(q.boundary):
        raise SurfaceError("FN points live on different pants graphs")
    worst = 0.0
    for lp, lq, tp, tq in zip(p.lengths, q.lengths, p.twists, q.twists):
        worst = max(worst, abs(math.log(lp / lq)), abs(lp * tp - lq * tq))
    for bp, bq in zip(p.boundary, q.boundary):
        if bp == 0 and bq == 0:
            continue
        if bp == 0 or bq == 0:
            return math.inf
        worst = max(worst, abs(math.log(bp / bq)))
    return worst


def pinch_path(s: MarkedSurface, curve: int, r: float) -> MarkedSurface:
    """The surface with interior curve ``curve`` set to length ``r``; all other coordinates fixed."""
    if not 0 <= curve < len(s.graph.gluings):
        raise SurfaceError(f"curve {curve} is not an interior decomposition curve")
    if not (math.isfinite(r) and r > 0):
        raise SurfaceError(f"pinch length must be positive, got {r}")
    if r == s.point.lengths[curve]:
        return s
    return build_surface(s.graph, s.point.with_length(curve, r))


def sample_fn(
    graph: PantsGraph,
    length_range: tuple[float, float],
    twist_range: tuple[float, float],
    seed: int,
    *,
    distribution: str = "log-uniform",
    boundary_range: tuple[float, float] | None = None,
    cusp_fraction: float = 0.0,
) -> FNPoint:
    """Random FN point.

    ``"log-uniform"`` draws log-lengths uniformly. ``"wp-like"`` gives log-length
    ``x`` the density proportional to ``e^x``, i.e. lengths uniform. Boundary
    slots use ``boundary_range`` (default ``length_range``) and become cusps
    with probability ``cusp_fraction``.
    """
    lo, hi = (float(x) for x in length_range)
    tlo, thi = (float(x) for x in twist_range)
    if not (0 < lo <= hi and math.isfinite(hi)):
        raise SurfaceError(f"length range must satisfy 0 < lo <= hi, got {length_range}")
    if not (tlo <= thi and math.isfinite(tlo) and math.isfinite(thi)):
        raise SurfaceError(f"invalid twist range {twist_range}")
    if not 0.0 <= cusp_fraction <= 1.0:
        raise SurfaceError(f"cusp fraction must lie in [0, 1], got {cusp_fraction}")
    blo, bhi = (float(x) for x in (boundary_range or length_range))
    if not (0 < blo <= bhi and math.isfinite(bhi)):
        raise SurfaceError(f"boundary range must satisfy 0 < lo <= hi, got {boundary_range}")
    if distribution not in ("log-uniform", "wp-like"):
        raise SurfaceError(f"unknown length distribution {distribution!r}")
    rng = np.random.default_rng(seed)

    def draw(a, b, n):
        u = rng.random(n)
        if distribution == "wp-like":
            return a + (b - a) * u
        return np.exp(math.log(a) + (math.log(b) - math.log(a)) * u)

    n_int, n_bd = len(graph.gluings), len(graph.boundaries)
    lengths = draw(lo, hi, n_int)
    twists = tlo + (thi - tlo) * rng.random(n_int)
    boundary = draw(blo, bhi, n_bd)
    cusps = rng.random(n_bd) < cusp_fraction
    boundary = np.where(cusps, 0.0, boundary)
    return FNPoint(tuple(lengths.tolist()), tuple(twists.tolist()), tuple(boundary.tolist()))


# ---------------------------------------------------------------------------
# exhaustion


@dataclass(frozen=True)
class ExhaustionStep:
    nodes: tuple[int, ...]
    graph: PantsGraph
    unit: tuple[int, ...]
    unit_kind: str  # "pants" or "torus"
    attached_along: int | None


def _units(graph: PantsGraph) -> list[tuple[int, ...]]:
    # a pants glued to itself is a one-holed torus and is attached in one piece
    return [(n,) for n in range(graph.n_pants)]


def subgraph(graph: PantsGraph, nodes: Sequence[int]) -> PantsGraph:
    index = {n: k for k, n in enumerate(nodes)}
    gluings, boundaries = [], []
    for a, sa, b, sb in graph.gluings:
        if a in index and b in index:
            gluings.append((index[a], sa, index[b], sb))
        elif a in index:
            boundaries.append((index[a], sa))
        elif b in index:
            boundaries.append((index[b], sb))
    for n, s in graph.boundaries:
        if n in index:
            boundaries.append((index[n], s))
    return PantsGraph(len(nodes), tuple(gluings), tuple(sorted(boundaries)))


def exhaustion(graph: PantsGraph) -> list[ExhaustionStep]:
    """Growth order where every step attaches one pants or one one-holed torus along one curve."""
    if not graph.is_connected():
        raise SurfaceError(f"pants graph is disconnected: components {graph.components()}")
    units = _units(graph)
    self_glued = {a for a, _, b, _ in graph.gluings if a == b}
    unit_of = {n: k for k, u in enumerate(units) for n in u}
    adjacency: dict[int, list[tuple[int, int]]] = {k: [] for k in range(len(units))}
    for e, (a, _, b, _) in enumerate(graph.gluings):
        ua, ub = unit_of[a], unit_of[b]
        if ua != ub:
            adjacency[ua].append((e, ub))
            adjacency[ub].append((e, ua))

    order: list[tuple[int, int | None]] = [(0, None)]
    placed = {0}
    used_edges: set[int] = set()
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for e, v in sorted(adjacency[u]):
            if e in used_edges:
                continue
            used_edges.add(e)
            if v in placed:
                raise ExhaustionError(
                    f"gluing {e} joins units {u} and {v} that are already connected: "
                    "attaching along it would glue along more than one curve",
                    edge=e,
                    units=(u, v),
                )
            placed.add(v)
            order.append((v, e))
            queue.append(v)

    steps = []
    nodes: list[int] = []
    for u, e in order:
        nodes.extend(units[u])
        kind = "torus" if any(n in self_glued for n in units[u]) else "pants"
        steps.append(ExhaustionStep(tuple(nodes), subgraph(graph, nodes), units[u], kind, e))
    return steps


# ---------------------------------------------------------------------------
# configuration files


def _field(obj, key, path):
    if not isinstance(obj, dict) or key not in obj:
        raise ConfigError(path, f"missing field {key!r}")
    return obj[key]


def _int(x, path):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(path, f"expected an integer, got {x!r}")
    return x


def _real(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ConfigError(path, f"expected a finite number, got {x!r}")
    return float(x)


def _keyed(obj, path, n):
    if isinstance(obj, list):
        if len(obj) != n:
            raise ConfigError(path, f"expected {n} entries, got {len(obj)}")
        return [_real(x, f"{path}[{k}]") for k, x in enumerate(obj)]
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object keyed by gluing index")
    keys = {str(k) for k in range(n)}
    if set(obj) != keys:
        raise ConfigError(path, f"expected keys {sorted(keys, key=int)}, got {sorted(obj)}")
    return [_real(obj[str(k)], f"{path}.{k}") for k in range(n)]


def load_config(data: dict) -> tuple[PantsGraph, FNPoint]:
    """Parse a surface description; structural problems raise :class:`ConfigError` naming the field."""
    n = _int(_field(data, "pants", "$"), "pants")
    gl = _field(data, "gluings", "$")
    if not isinstance(gl, list):
        raise ConfigError("gluings", "expected a list")
    gluings = []
    for e, g in enumerate(gl):
        if not isinstance(g, list) or len(g) != 4:
            raise ConfigError(f"gluings[{e}]", "expected [nodeA, slotA, nodeB, slotB]")
        gluings.append(tuple(_int(x, f"gluings[{e}][{k}]") for k, x in enumerate(g)))
    bd = data.get("boundaries", [])
    if not isinstance(bd, list):
        raise ConfigError("boundaries", "expected a list")
    boundaries, blens = [], []
    for k, b in enumerate(bd):
        if not isinstance(b, list) or len(b) != 3:
            raise ConfigError(f"boundaries[{k}]", "expected [node, slot, length]")
        boundaries.append((_int(b[0], f"boundaries[{k}][0]"), _int(b[1], f"boundaries[{k}][1]")))
        x = _real(b[2], f"boundaries[{k}][2]")
        if x < 0:
            raise ConfigError(f"boundaries[{k}][2]", f"boundary length must be >= 0, got {x}")
        blens.append(x)
    lengths = _keyed(data.get("lengths", {}), "lengths", len(gluings))
    for e, x in enumerate(lengths):
        if x <= 0:
            raise ConfigError(f"lengths.{e}", f"interior length must be > 0, got {x}")
    twists = _keyed(data.get("twists", {str(e): 0.0 for e in range(len(gluings))}), "twists", len(gluings))
    try:
        graph = PantsGraph(n, tuple(gluings), tuple(boundaries))
    except SurfaceError as exc:
        raise ConfigError("gluings", str(exc)) from exc
    return graph, FNPoint(tuple(lengths), tuple(twists), tuple(blens))


def dump_config(graph: PantsGraph, point: FNPoint) -> dict:
    return {
        "pants": graph.n_pants,
        "gluings": [list(g) for g in graph.gluings],
        "boundaries": [[n, s, point.boundary[k]] for k, (n, s) in enumerate(graph.boundaries)],
        "lengths": {str(e): x for e, x in enumerate(point.lengths)},
        "twists": {str(e): x for e, x in enumerate(point.twists)},
    }


def read_config(path) -> tuple[PantsGraph, FNPoint]:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return load_config(data)
