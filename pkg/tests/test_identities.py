import math

import numpy as np
import pytest

from teich.curves import Slope
from teich.identities import (
    ConfigVerdict,
    IdentityError,
    LengthWindow,
    Verdict,
    campaign,
    detect_config,
    f_val,
    g_val,
    max_relative_residual,
    nonvanishing_sample,
    orbit_window,
    sample_surface,
    tuple_residual,
    verify_set1,
    verify_set2,
)
from teich.reconstruct import torus_from_traces
from teich.surface import build_surface, four_holed_sphere, one_holed_torus, one_holed_torus_graph

A, C = Slope(1, 0), Slope(0, 1)
TWO_ACOSH_1_5 = 1.9248473002384137899910356537


def test_f_g_basics():
    assert f_val(0, 0) == 2.0 and g_val(0, 0) == 2.0
    assert f_val(0.4, 1.7) == f_val(1.7, 0.4)
    assert f_val(TWO_ACOSH_1_5, TWO_ACOSH_1_5) == pytest.approx(4.5, abs=1e-12)


def test_f_g_monotone_and_ordered():
    rng = np.random.default_rng(7)
    for _ in range(500):
        a, b, h = rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(1e-3, 1)
        assert f_val(a + h, b) > f_val(a, b) and g_val(a + h, b) > g_val(a, b)
        assert f_val(a, b) > g_val(a, b)


def test_modular_torus_set1():
    s = build_surface(one_holed_torus_graph(), torus_from_traces(3.0, 3.0, 3.0))
    reports = verify_set1(s, A, C, 3)
    assert max_relative_residual(reports) < 1e-9
    base = verify_set1(s, A, C, 0)
    assert len(base) == 1
    # 2 (3/2)(3/2) = (3 + 6) / 2: the twist neighbours of (1,0) have traces 3 and 6
    assert base[0].lhs == pytest.approx(4.5, abs=1e-9)
    assert base[0].rhs == pytest.approx(4.5, abs=1e-9)


def test_range_errors():
    s = one_holed_torus(1.0, 0.2, 0.0)
    with pytest.raises(IdentityError):
        verify_set1(s, A, C, -1)
    with pytest.raises(IdentityError):
        verify_set1(s, A, Slope(1, 2), 1)  # crosses twice
    with pytest.raises(IdentityError):
        verify_set2(s, A, C, 1)


def test_random_tori_set1():
    worst = 0.0
    for k in range(100):
        s = sample_surface("S11", k)
        reports = verify_set1(s, A, C, 5)
        assert all(r.verdict is Verdict.IDENTITY for r in reports)
        worst = max(worst, max_relative_residual(reports))
    assert worst < 1e-8


def test_four_cusped_shirt():
    s = four_holed_sphere(1.3, 0.21, (0.0, 0.0, 0.0, 0.0))
    reports = verify_set2(s, A, C, 1)
    assert max_relative_residual(reports) < 1e-9
    for r in reports:
        # the two boundary terms are f(0, 0) = 2 each
        assert r.curves[-2:] and len(r.curves) == 6


def test_shirt_boundary_terms_add_four():
    from teich.identities import residual_terms

    lhs, rhs, _ = residual_terms([(1.0, 2.0)], [(0.5, 0.7)], [(0.0, 0.0), (0.0, 0.0)])
    assert rhs - g_val(0.5, 0.7) == pytest.approx(4.0, abs=1e-12)


def test_shirt_symmetric_relabelling():
    bd = (0.3, 0.8, 1.1, 0.5)
    base = verify_set2(four_holed_sphere(1.1, 0.37, bd), A, C, 2)
    for perm in ((1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)):
        other = verify_set2(four_holed_sphere(1.1, 0.37, tuple(bd[i] for i in perm)), A, C, 2)
        assert max_relative_residual(other) < 1e-9
        assert [r.verdict for r in other] == [r.verdict for r in base]


def test_random_shirts_set2():
    worst = 0.0
    for k in range(100):
        s = sample_surface("S04", k, cusp_fraction=0.3)
        worst = max(worst, max_relative_residual(verify_set2(s, A, C, 3)))
    assert worst < 1e-8


def test_long_lengths_log_domain():
    s = one_holed_torus(0.05, 0.3, 0.0)  # crossing curves are very long
    reports = verify_set1(s, A, C, 5)
    assert any(r.scale_log > 0 for r in reports)
    assert max_relative_residual(reports) < 1e-8


def test_detect_config():
    torus = orbit_window(one_holed_torus(1.2, 0.3, 0.4), A, C, 1)
    shirt = orbit_window(four_holed_sphere(1.0, 0.2, (0.3, 0.4, 0.5, 0.6)), A, C, 1)
    assert detect_config(torus) is ConfigVerdict.TORUS_SPINE
    assert detect_config(shirt) is ConfigVerdict.SHIRT_SPINE
    assert detect_config(torus.perturbed("alpha", 1, 1e-3)) is ConfigVerdict.NO_CONFIG
    assert detect_config(shirt.perturbed("gamma", 0, 1e-3)) is ConfigVerdict.NO_CONFIG


def test_detect_config_exclusive():
    rng = np.random.default_rng(8)
    for k in range(50):
        s = sample_surface("S11" if k % 2 else "S04", int(rng.integers(1 << 30)), cusp_fraction=0.5)
        w = orbit_window(s, A, C, 1)
        v = detect_config(w)
        assert v is (ConfigVerdict.TORUS_SPINE if k % 2 else ConfigVerdict.SHIRT_SPINE)


def test_window_validation():
    with pytest.raises(IdentityError):
        LengthWindow({1: 1.0}, {0: 1.0})
    with pytest.raises(IdentityError):
        LengthWindow({0: -1.0}, {0: 1.0})


def test_nonvanishing():
    wrong = [(1, 0), (1, 0), (1, 1), (-1, 1)]  # i(alpha, gamma) = 0: gamma is alpha itself
    assert nonvanishing_sample("set1", wrong, 1000, 9) == 1.0
    right = [(1, 0), (0, 1), (1, 1), (-1, 1)]
    assert nonvanishing_sample("set1", right, 200, 9) == 0.0
    with pytest.raises(IdentityError):
        nonvanishing_sample("set1", right, 0, 9)


def test_tuple_residual_shirt():
    s = four_holed_sphere(1.0, 0.1, (0.2, 0.3, 0.4, 0.5))
    r = tuple_residual(s, [(1, 0), (0, 1), (1, 1), (-1, 1), (2, 3), (1, 4)])
    assert r.verdict is Verdict.IDENTITY


def test_campaign_report():
    rep = campaign("set1", 20, 3, 2)
    assert rep["verdict"] == "Identity" and rep["samples"] == 20 and rep["failures"] == 0
    assert campaign("set1", 20, 3, 2) == rep
    strict = campaign("set1", 20, 3, 2, tol=1e-15)
    assert strict["failures"] > 0 and strict["verdict"] == "Nonzero"
    with pytest.raises(IdentityError):
        campaign("set3", 1, 0, 1)
