"""Smoke tests for the bblpy bindings."""

import math

import pytest

import bblpy


def test_version():
    assert bblpy.__version__


def test_circle_table_geometry():
    t = bblpy.circle_table(4)
    assert t.block_count == 4
    assert t.length == pytest.approx(2.0 * math.pi, abs=1e-12)
    x, y = t.point(0.0)
    x2, y2 = t.point(t.length / 2.0)
    # Antipodal points of a unit circle sit distance 2 apart.
    assert math.hypot(x - x2, y - y2) == pytest.approx(2.0, abs=1e-9)
    assert t.kappa(1.0) == pytest.approx(1.0, abs=1e-12)


def test_circle_invariants():
    t = bblpy.circle_table(4)
    ell0, ell1, ell2 = bblpy.mm_invariants(t)
    assert ell0 == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert ell1 == pytest.approx(-4.0 * math.pi, abs=1e-11)
    assert ell2 == pytest.approx(math.pi / 60.0, abs=1e-12)


def test_circle_ngon():
    t = bblpy.circle_table(4)
    orbit = bblpy.max_perimeter_ngon(t, 3)
    assert orbit["perimeter"] == pytest.approx(3.0 * math.sqrt(3.0), abs=1e-9)
    assert orbit["closed"]


def test_table_round_trip():
    t = bblpy.circle_table(5)
    text = bblpy.serialize_table(t)
    t2 = bblpy.parse_table(text)
    assert bblpy.serialize_table(t2) == text
    assert bblpy.congruence_distance(t, t2) == pytest.approx(0.0, abs=1e-12)


def test_parse_error_is_typed():
    with pytest.raises(bblpy.BblError):
        bblpy.parse_table("not a table file\n")
