import math

import numpy as np
import pytest

from teich.curves import (
    ALPHA,
    GAMMA,
    Multicurve,
    MulticurveError,
    Slope,
    SurfaceKind,
    boundary_partition,
    fractional_twist,
    full_twist,
    intersection,
    slope_to_word,
    twist_neighbours,
)

T = SurfaceKind.ONE_HOLED_TORUS
S = SurfaceKind.SHIRT


def slopes(bound):
    return [Slope(p, q) for p in range(-bound, bound + 1) for q in range(0, bound + 1)
            if math.gcd(p, q) == 1 and (q > 0 or p == 1)]


def test_slope_canonical():
    assert Slope(-2, -3) == Slope(2, 3)
    assert Slope(-1, 0) == Slope(1, 0)
    assert Slope(3, -1) == Slope(-3, 1)
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope(0, 0)


def test_kind_parse():
    assert SurfaceKind.parse("OneHoledTorus") is T
    assert SurfaceKind.parse("s04") is S
    with pytest.raises(ValueError):
        SurfaceKind.parse("genus2")


def test_intersection_examples():
    assert intersection(T, Slope(1, 0), Slope(0, 1)) == 1
    assert intersection(T, Slope(2, 1), Slope(1, 1)) == 1
    assert intersection(S, Slope(1, 0), Slope(0, 1)) == 2
    assert intersection(T, Multicurve(Slope(1, 0), 3), Slope(0, 1)) == 3


def test_torus_one_twist():
    x = fractional_twist(T, GAMMA, 1, ALPHA)
    assert isinstance(x, Slope)
    assert intersection(T, x, GAMMA) == 1
    assert intersection(T, x, ALPHA) == 1


def test_shirt_half_twists_separate_23_from_14():
    for j in (1, -1):
        x = fractional_twist(S, GAMMA, j, ALPHA)
        assert boundary_partition(x) == (frozenset({2, 3}), frozenset({1, 4}))
    assert set(twist_neighbours(S, GAMMA, ALPHA)) == {Slope(1, 1), Slope(-1, 1)}
    assert boundary_partition(GAMMA) == (frozenset({1, 2}), frozenset({3, 4}))
    assert boundary_partition(ALPHA) == (frozenset({1, 3}), frozenset({2, 4}))


def test_twist_zero_and_disjoint():
    assert fractional_twist(T, GAMMA, 0, Slope(3, 2)) == Slope(3, 2)
    assert fractional_twist(S, GAMMA, 5, GAMMA) == GAMMA


def test_multicurve_images():
    # (2,1) crosses (0,1) twice on the torus; one unit step gives (2,3), a further one 2*(1,2)
    axis, target = Slope(1, 1), Slope(1, -1)
    image = fractional_twist(T, axis, 2, target)
    assert image == Multicurve(Slope(1, 1), 2) or isinstance(image, Slope)
    with pytest.raises(MulticurveError):
        # (1,-1) + 1*(1,1) = (2, 0) = 2 (1, 0)
        fractional_twist(S, Slope(1, 1), 1, Slope(1, -1))


def test_twist_composition():
    for kind in (T, S):
        for a in slopes(3):
            for t in slopes(3):
                for i in range(-3, 4):
                    for j in range(-3, 4):
                        try:
                            lhs = fractional_twist(kind, a, i, fractional_twist(kind, a, j, t))
                            rhs = fractional_twist(kind, a, i + j, t)
                        except MulticurveError:
                            continue
                        assert lhs == rhs


def test_frac_dehn_random():
    rng = np.random.default_rng(5)
    pool = slopes(15)
    for kind in (T, S):
        for _ in range(100):
            a, b = (pool[k] for k in rng.integers(len(pool), size=2))
            for j in range(-10, 11):
                try:
                    x = fractional_twist(kind, a, j, b)
                except MulticurveError:
                    continue
                assert intersection(kind, x, b) == abs(j) * intersection(kind, a, b)
                assert intersection(kind, x, a) == intersection(kind, b, a)


def test_full_twist_is_dehn_twist():
    assert full_twist(T, GAMMA, ALPHA) == Slope(1, 1)
    assert full_twist(S, GAMMA, ALPHA) == Slope(1, 2)


def test_only_twist_small():
    # equal intersections with (1,0) and (0,1) means the slopes differ by a fractional twist
    pool = slopes(8)
    for u in pool:
        for v in pool:
            if (abs(u.q), abs(u.p)) != (abs(v.q), abs(v.p)) or u == v:
                continue
            related = False
            for axis in (ALPHA, GAMMA):
                for j in range(-40, 41):
                    if fractional_twist(T, axis, j, u) == v:
                        related = True
            assert related


def test_words():
    assert slope_to_word(T, Slope(1, 0)) == (("A", 1),)
    assert slope_to_word(T, Slope(1, 1)) == (("A", 1), ("B", 1))
    assert slope_to_word(T, Slope(0, 1)) == (("B", 1),)
    assert slope_to_word(S, ALPHA) == (("d2", 1), ("d4", 1))
    assert slope_to_word(S, GAMMA) == (("d1", 1), ("d2", 1))


def test_word_trace_matches_recursion():
    from teich.reconstruct import torus_from_traces
    from teich.surface import build_surface, one_holed_torus_graph

    s = build_surface(one_holed_torus_graph(), torus_from_traces(3.0, 3.0, 3.0))
    # Markoff recursion: t(2,1) = t(1,0) t(1,1) - t(0,1)
    assert s.trace(slope_to_word(T, Slope(2, 1))) == pytest.approx(3 * 3 - 3, abs=1e-9)
    assert s.trace(slope_to_word(T, Slope(3, 2))) == pytest.approx(6 * 3 - 3, abs=1e-9)
