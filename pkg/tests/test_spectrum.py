import math

import numpy as np
import pytest

from teich.curves import Slope, slope_to_word
from teich.reconstruct import torus_from_traces
from teich.spectrum import (
    SpectrumError,
    brute_force_lengths,
    compare,
    dumps,
    enumerate_spectrum,
    loads,
    multiplicity_report,
    read_spectrum,
    without_boundary,
    write_spectrum,
)
from teich.surface import (
    build_surface,
    curve_length,
    four_holed_sphere,
    one_holed_torus,
    one_holed_torus_graph,
)

TWO_ACOSH_1_5 = 1.9248473002384137899910356537  # mpmath


@pytest.fixture(scope="module")
def modular():
    return build_surface(one_holed_torus_graph(), torus_from_traces(3.0, 3.0, 3.0))


def multiset_close(a, b, tol):
    a, b = sorted(a), sorted(b)
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def test_modular_torus_systole(modular):
    spec = enumerate_spectrum(modular, TWO_ACOSH_1_5 + 1e-6)
    assert len(spec.entries) == 1
    e = spec.entries[0]
    assert e.multiplicity == 3
    assert e.length == pytest.approx(TWO_ACOSH_1_5, abs=1e-12)
    # brute force over |p|, |q| <= 50 through holonomy words
    brute = [l for l, _ in brute_force_lengths(modular, 50, TWO_ACOSH_1_5 + 1e-6)]
    assert multiset_close(brute, spec.lengths(), 1e-9)


def test_below_systole_is_empty(modular):
    spec = enumerate_spectrum(modular, 0.1)
    assert spec.entries == ()
    assert loads(dumps(spec)).cutoff == 0.1


def test_prefix_monotone():
    s = four_holed_sphere(1.2, 0.31, (0.4, 0.0, 0.9, 0.2))
    small, big = enumerate_spectrum(s, 6), enumerate_spectrum(s, 9)
    assert small.lengths() == [x for x in big.lengths() if x <= 6]
    assert big.truncate(6) == small


def test_entries_sorted_and_tagged():
    s = one_holed_torus(0.8, 0.17, 1.1)
    spec = enumerate_spectrum(s, 9)
    ls = [e.length for e in spec.entries]
    assert ls == sorted(ls) and ls[-1] <= 9
    for e in spec.entries:
        for v in e.slopes:
            assert curve_length(s, slope_to_word("torus", v)) == pytest.approx(e.length, abs=1e-9)
    assert spec.length_of(Slope(0, 1)) == pytest.approx(0.8, abs=1e-12)
    assert any(e.boundaries == (0,) for e in spec.entries)
    assert not any(e.boundaries for e in without_boundary(spec).entries)


def test_shirt_against_brute_force():
    s = four_holed_sphere(0.9, -0.23, (0.3, 0.6, 0.0, 1.0))
    spec = enumerate_spectrum(s, 7, include_boundary=False)
    brute = [l for l, _ in brute_force_lengths(s, 12, 7)]
    assert multiset_close(brute, spec.lengths(), 1e-9)


def test_compare_self_and_retwist():
    s0, s1 = one_holed_torus(1.1, 0.42, 0.3), one_holed_torus(1.1, 1.42, 0.3)
    a, b = enumerate_spectrum(s0, 8), enumerate_spectrum(s1, 8)
    assert compare(a, a, 1e-12).all_matched
    d = compare(a, b, 1e-9)
    assert d.all_matched and d.matched == len(a.lengths())


def test_compare_independent_samples_differ():
    rng = np.random.default_rng(6)
    differ = 0
    for _ in range(20):
        x = one_holed_torus(rng.uniform(0.5, 2), rng.uniform(0, 1), rng.uniform(0, 1))
        y = one_holed_torus(rng.uniform(0.5, 2), rng.uniform(0, 1), rng.uniform(0, 1))
        d = compare(enumerate_spectrum(x, 8), enumerate_spectrum(y, 8), 1e-7)
        differ += not d.all_matched
    assert differ == 20


def test_compare_cutoff_mismatch():
    s = one_holed_torus(1.0, 0.1, 0.0)
    with pytest.raises(SpectrumError):
        compare(enumerate_spectrum(s, 5), enumerate_spectrum(s, 6), 1e-9)


def test_multiplicity_modular(modular):
    spec = enumerate_spectrum(modular, 2.0)
    clusters = multiplicity_report(spec, 1e-9)
    assert len(clusters) == 1 and clusters[0].size == 3


def test_multiplicity_window_infinite():
    spec = enumerate_spectrum(one_holed_torus(1.0, 0.33, 0.5), 7)
    clusters = multiplicity_report(spec, math.inf)
    assert len(clusters) == 1 and clusters[0].size == len(spec.curves())


def test_random_sample_simple():
    s = one_holed_torus(1.234, 0.377, 0.61)
    assert multiplicity_report(enumerate_spectrum(s, 8), 1e-9) == []


def test_pruning_sound():
    for s in (one_holed_torus(0.7, 0.2, 0.0), four_holed_sphere(1.3, 0.4, (2.0, 1.5, 0.0, 1.8))):
        pruned = enumerate_spectrum(s, 7)
        full = enumerate_spectrum(s, 7, prune=False, max_height=60)
        assert pruned.lengths() == full.lengths()


def test_serialization_bit_exact(tmp_path):
    spec = enumerate_spectrum(four_holed_sphere(1.05, 0.123, (0.25, 0.0, 0.5, 1.0)), 8)
    path = tmp_path / "s.jsonl"
    write_spectrum(spec, path)
    back = read_spectrum(path)
    assert back == spec
    assert [x.hex() for x in back.lengths()] == [x.hex() for x in spec.lengths()]
    assert dumps(back) == path.read_text()


def test_malformed_file():
    with pytest.raises(SpectrumError):
        loads("")
    with pytest.raises(SpectrumError):
        loads('{"kind": "Nope", "cutoff": 1}\n')
