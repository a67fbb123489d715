"""Towers: windows, stage certificates, checker behaviour on corrupted input."""

from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from torsionlab.complexes import (
    Complex,
    cone,
    compose,
    fib,
    homology_dims,
    identity_map,
    is_quasi_iso,
    random_chain_map,
    random_complex,
    shift,
    zero_complex,
    zero_map,
)
from torsionlab.linalg import PrimeField
from torsionlab.postnikov import (
    BoundWindow,
    Tower,
    TowerStage,
    boundedness_window,
    postnikov_tower,
    verify_tower,
)
from torsionlab.quiver import Quiver, QuiverRep, RepMap
from torsionlab.tstruct import TStructure, heart_contains

F2 = PrimeField(2)
F3 = PrimeField(3)
PT = Quiver.point()
A2 = Quiver.a2()


def _sphere(deg=0, field=F2):
    s = QuiverRep(PT, field, (1,), ())
    return Complex(PT, field, deg, (s,), ())


def _split_complex(degrees, field=F2):
    """Zero-differential complex with a 1-dim term in each listed degree."""
    lo, hi = min(degrees), max(degrees)
    s = QuiverRep(PT, field, (1,), ())
    z = QuiverRep.zero(PT, field)
    terms = tuple(s if n in degrees else z for n in range(lo, hi + 1))
    diffs = tuple(
        RepMap.zero(terms[n - lo], terms[n - 1 - lo]) for n in range(lo + 1, hi + 1)
    )
    return Complex(PT, field, lo, terms, diffs)


def _rand_map(seed, quiver=A2, field=F2, **kw):
    rng = np.random.default_rng(seed)
    x = random_complex(quiver, field, rng, **kw)
    y = random_complex(quiver, field, rng, **kw)
    return random_chain_map(x, y, rng)


# -- windows ----------------------------------------------------------------------


def test_window_of_quasi_iso_is_absent():
    x = _rand_map(0).source
    assert boundedness_window(identity_map(x)) is None
    acyclic = cone(identity_map(x)).complex
    assert boundedness_window(zero_map(acyclic, zero_complex(A2, F2))) is None


def test_window_of_sphere_arrows():
    s = _sphere()
    zc = zero_complex(PT, F2)
    w = boundedness_window(zero_map(zc, s))
    assert w == BoundWindow(-1, 0)
    x = _split_complex({0, 2})
    w = boundedness_window(zero_map(x, zc))
    assert w == BoundWindow(0, 3)
    assert w.width == 3


def test_window_rejects_empty():
    try:
        BoundWindow(2, 2)
    except ValueError:
        return
    raise AssertionError("empty window accepted")


# -- towers -----------------------------------------------------------------------


def test_single_stage_tower_is_the_map_itself():
    s = _sphere()
    zc = zero_complex(PT, F2)
    f = zero_map(zc, s)
    tw = postnikov_tower(f)
    assert tw.window == BoundWindow(-1, 0)
    assert len(tw.stages) == 1
    assert tw.stages[0].map == f
    assert tw.stages[0].degree == -1
    assert tw.stages[0].fiber_in_heart
    assert verify_tower(f, tw)


def test_quasi_iso_gets_the_degenerate_tower():
    x = _rand_map(1).source
    f = identity_map(x)
    tw = postnikov_tower(f)
    assert tw.window is None
    assert len(tw.stages) == 1 and tw.stages[0].degree is None
    assert verify_tower(f, tw)


def test_split_complex_two_stage_tower():
    x = _split_complex({0, 1})
    f = zero_map(x, zero_complex(PT, F2))
    tw = postnikov_tower(f)
    assert tw.window == BoundWindow(0, 2)
    assert len(tw.stages) == 2
    assert [st.degree for st in tw.stages] == [1, 0]
    for st in tw.stages:
        fb = fib(st.map).complex
        assert heart_contains(shift(fb, -st.degree), TStructure(0))
    assert verify_tower(f, tw)


def test_tower_composite_is_strict():
    f = _rand_map(17, max_dim=3)
    tw = postnikov_tower(f)
    assert not tw.witness.comps
    composite = tw.stages[0].map
    for st in tw.stages[1:]:
        composite = compose(st.map, composite)
    assert composite == f


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
@settings(max_examples=30)
def test_random_towers_verify(seed, p):
    f = _rand_map(seed, field=PrimeField(p), max_dim=2)
    tw = postnikov_tower(f)
    assert verify_tower(f, tw)
    w = boundedness_window(f)
    if w is not None:
        assert len(tw.stages) == w.width
        assert sorted(st.degree for st in tw.stages) == list(range(w.lo, w.hi))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20)
def test_stage_fibers_reproduce_the_fiber_homology(seed):
    f = _rand_map(seed, max_dim=2)
    w = boundedness_window(f)
    if w is None:
        return
    tw = postnikov_tower(f)
    total = homology_dims(fib(f).complex)
    zero = tuple(0 for _ in f.source.quiver.vertices)
    for st_ in tw.stages:
        fb = fib(st_.map).complex
        got = homology_dims(fb).get(st_.degree, zero)
        assert got == total.get(st_.degree, zero)


def test_wide_window_tower():
    x = _split_complex({-1, 0, 1, 2}, field=F3)
    f = zero_map(x, zero_complex(PT, F3))
    tw = postnikov_tower(f)
    assert tw.window == BoundWindow(-1, 3)
    assert len(tw.stages) == 4
    assert sorted(st.degree for st in tw.stages) == [-1, 0, 1, 2]
    assert verify_tower(f, tw)


def test_interior_gap_keeps_length():
    # homology in degrees 0 and 2 only: the degree-1 stage has acyclic fiber
    x = _split_complex({0, 2})
    f = zero_map(x, zero_complex(PT, F2))
    tw = postnikov_tower(f)
    assert len(tw.stages) == 3
    assert sorted(st.degree for st in tw.stages) == [0, 1, 2]
    mid = [st for st in tw.stages if st.degree == 1][0]
    assert is_quasi_iso(mid.map)
    assert verify_tower(f, tw)


# -- checker rejects corrupted towers ------------------------------------------------


def test_checker_rejects_zeroed_stage():
    x = _split_complex({0, 1})
    f = zero_map(x, zero_complex(PT, F2))
    tw = postnikov_tower(f)
    bad_stage = TowerStage(
        zero_map(tw.stages[0].map.source, tw.stages[0].map.target),
        tw.stages[0].degree,
        tw.stages[0].fiber_in_heart,
    )
    bad = Tower((tw.objects), (bad_stage,) + tw.stages[1:], tw.witness, tw.window)
    assert not verify_tower(f, bad)


def test_checker_rejects_wrong_degree():
    s = _sphere()
    f = zero_map(zero_complex(PT, F2), s)
    tw = postnikov_tower(f)
    bad = Tower(
        tw.objects,
        (TowerStage(tw.stages[0].map, 5, True),),
        tw.witness,
        BoundWindow(5, 6),
    )
    assert not verify_tower(f, bad)


def test_checker_rejects_window_mismatch():
    x = _split_complex({0, 1})
    f = zero_map(x, zero_complex(PT, F2))
    tw = postnikov_tower(f)
    bad = Tower(tw.objects, tw.stages, tw.witness, BoundWindow(0, 3))
    assert not verify_tower(f, bad)
