"""Events, intervals, causal classification and lattice construction."""

import math

import pytest
from hypothesis import given, strategies as st

from udwtomo import spacetime
from udwtomo.spacetime import Event, LatticeSpec, Separation

coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
events = st.builds(Event, coord, coord, coord, coord)


def test_interval_examples():
    o = Event(0.0, 0.0, 0.0, 0.0)
    itv = spacetime.interval(o, o)
    assert (itv.dt, itv.dr, itv.sigma) == (0.0, 0.0, 0.0)

    itv = spacetime.interval(Event(1.0, 0.0, 0.0, 0.0), o)
    assert (itv.dt, itv.dr, itv.sigma) == (1.0, 0.0, -0.5)

    itv = spacetime.interval(Event(0.0, 3.0, 4.0, 0.0), o)
    assert (itv.dt, itv.dr, itv.sigma) == (0.0, 5.0, 12.5)


def test_classify_examples():
    o = Event(0.0, 0.0, 0.0, 0.0)
    assert spacetime.classify(Event(0.0, 1.0, 0.0, 0.0), o) is Separation.SPACELIKE
    assert spacetime.classify(Event(2.0, 1.0, 0.0, 0.0), o) is Separation.TIMELIKE_FUTURE
    assert spacetime.classify(Event(-2.0, 1.0, 0.0, 0.0), o) is Separation.TIMELIKE_PAST
    assert spacetime.classify(Event(1.0, 1.0, 0.0, 0.0), o, 1e-12) is Separation.LIGHTLIKE


def test_classify_tol_validation():
    with pytest.raises(ValueError):
        spacetime.classify(Event(0, 1, 0, 0), Event(0, 0, 0, 0), -1.0)


def test_event_requires_finite():
    with pytest.raises(ValueError):
        Event(math.inf, 0.0, 0.0, 0.0)


@given(events, events)
def test_interval_antisymmetry(a, b):
    ab = spacetime.interval(a, b)
    ba = spacetime.interval(b, a)
    assert ab.dt == -ba.dt
    assert ab.dr == ba.dr
    assert ab.sigma == ba.sigma


@given(events, events)
def test_classify_exchange(a, b):
    ab = spacetime.classify(a, b)
    ba = spacetime.classify(b, a)
    if ab is Separation.SPACELIKE:
        assert ba is Separation.SPACELIKE
    elif ab is Separation.TIMELIKE_FUTURE:
        assert ba is Separation.TIMELIKE_PAST
    elif ab is Separation.TIMELIKE_PAST:
        assert ba is Separation.TIMELIKE_FUTURE
    else:
        assert ba is Separation.LIGHTLIKE


class TestLattice:
    def test_single(self):
        spec = LatticeSpec(1, 1, 1.0, 1.0)
        assert spacetime.build_lattice(spec) == [Event(0.0, 0.0, 0.0, 0.0)]

    def test_time_column(self):
        spec = LatticeSpec(1, 3, 1.0, 2.0)
        ev = spacetime.build_lattice(spec)
        assert [e.t for e in ev] == [0.0, 2.0, 4.0]
        assert all((e.x, e.y, e.z) == (0.0, 0.0, 0.0) for e in ev)

    def test_unit_cube(self):
        spec = LatticeSpec(2, 1, 1.0, 1.0)
        ev = spacetime.build_lattice(spec)
        assert len(ev) == 8
        assert {(e.x, e.y, e.z) for e in ev} == {
            (x, y, z) for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)}

    def test_count_and_uniqueness(self):
        spec = LatticeSpec(3, 2, 0.5, 0.25, origin=Event(1.0, -1.0, 2.0, 0.0))
        ev = spacetime.build_lattice(spec)
        assert len(ev) == spec.n_events == 54
        assert len(set(ev)) == 54

    def test_time_outermost_ordering(self):
        # for each spatial site, the earlier coupling must come first in index order
        spec = LatticeSpec(2, 3, 1.0, 1.0)
        ev = spacetime.build_lattice(spec)
        by_site = {}
        for idx, e in enumerate(ev):
            by_site.setdefault((e.x, e.y, e.z), []).append((idx, e.t))
        for entries in by_site.values():
            ts = [t for _, t in sorted(entries)]
            assert ts == sorted(ts)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            LatticeSpec(0, 1, 1.0, 1.0)
        with pytest.raises(ValueError):
            LatticeSpec(1, 1, -1.0, 1.0)
