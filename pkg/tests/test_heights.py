"""Unit tests for canonical (Néron-Tate) heights on y^2 = x^3 + d."""

import math
from fractions import Fraction

import pytest

from ceresa.elliptic import CurvePoint, WeierstrassCurveQ, mul, on_curve
from ceresa.heights import (
    HeightValue,
    canonical_height,
    naive_height,
    northcott_scan,
)

# Battery of reference values, frozen from an independent evaluation of the
# local-height definition (naive-height limit telescoped through repeated
# doubling, all local pieces recomputed from scratch).  The cases cover the
# additive-reduction fibers at small primes, a point reducing to the cusp,
# and a curve given with non-integral d.
_BATTERY = [
    (Fraction(-100), (Fraction(5), Fraction(5)), 0.5261242364),
    (Fraction(-15000), (Fraction(25), Fraction(25)), 0.8080048404),
    (Fraction(9), (Fraction(3), Fraction(6)), 0.4073477203),
    (Fraction(17, 64), (Fraction(-1, 4), Fraction(1, 2)), 0.7125521577),
    (Fraction(36), (Fraction(-3), Fraction(-3)), 0.4998946622),
]


@pytest.mark.parametrize("d,pt,expected", _BATTERY)
def test_frozen_battery(d, pt, expected):
    E = WeierstrassCurveQ(d)
    P = CurvePoint(*pt)
    assert on_curve(E, P)
    h = canonical_height(E, P)
    assert h.error_bound <= 1e-9
    assert abs(h.value - expected) <= 5e-10 + h.error_bound


def test_torsion_heights_are_exactly_zero():
    cases = [
        (Fraction(1), CurvePoint(Fraction(2), Fraction(3))),   # order 6
        (Fraction(1), CurvePoint(Fraction(0), Fraction(1))),   # order 3
        (Fraction(1), CurvePoint(Fraction(-1), Fraction(0))),  # order 2
        (Fraction(4), CurvePoint(Fraction(0), Fraction(2))),   # order 3
        (Fraction(-432), CurvePoint(Fraction(12), Fraction(36))),
    ]
    for d, P in cases:
        h = canonical_height(WeierstrassCurveQ(d), P)
        assert h == HeightValue(0.0, 0.0)
    assert canonical_height(WeierstrassCurveQ(Fraction(5)),
                            CurvePoint.infinity()) == HeightValue(0.0, 0.0)


@pytest.mark.parametrize("n", [2, 3, 5, 6])
def test_quadraticity(n):
    """h(nP) = n^2 h(P), exercising non-integral multiples whose
    denominators pick up new primes of good reduction."""
    E = WeierstrassCurveQ(Fraction(36))
    P = CurvePoint(Fraction(-3), Fraction(-3))
    hP = canonical_height(E, P)
    hnP = canonical_height(E, mul(E, n, P))
    assert abs(hnP.value - n * n * hP.value) <= n * n * 1e-9


def test_quadraticity_rational_model():
    E = WeierstrassCurveQ(Fraction(17, 64))
    P = CurvePoint(Fraction(-1, 4), Fraction(1, 2))
    hP = canonical_height(E, P)
    h2P = canonical_height(E, mul(E, 2, P))
    assert abs(h2P.value - 4 * hP.value) <= 4e-9


def test_height_positive_for_infinite_order():
    E = WeierstrassCurveQ(Fraction(36))
    P = CurvePoint(Fraction(-3), Fraction(-3))
    assert canonical_height(E, P).value > 0.1


def test_naive_height():
    assert naive_height(Fraction(0)) == 0.0
    assert naive_height(Fraction(3, 2)) == math.log(3)
    assert naive_height(Fraction(-1, 5)) == math.log(5)
    assert naive_height(Fraction(7)) == math.log(7)


def test_naive_height_converges_to_canonical():
    """h(x(2^k P)) / (2 * 4^k) approaches the canonical height (the
    x-coordinate map has degree 2)."""
    E = WeierstrassCurveQ(Fraction(36))
    P = CurvePoint(Fraction(-3), Fraction(-3))
    target = canonical_height(E, P).value
    Q = P
    for _ in range(5):
        Q = mul(E, 2, Q)
    est = naive_height(Fraction(Q.x)) / (2 * 4**5)
    assert abs(est - target) < 0.01


def test_northcott_scan_small():
    rows = northcott_scan(4)
    ts = [row.t for row in rows]
    assert ts == sorted(ts)
    assert Fraction(1) not in ts and Fraction(-1) not in ts
    expect = sorted(
        Fraction(m, n)
        for n in range(1, 5)
        for m in range(-4, 5)
        if math.gcd(abs(m), n) == 1 and abs(Fraction(m, n)) != 1
    )
    assert ts == expect
    for row in rows:
        assert (row.verdict.status == "torsion") == (row.height.value == 0.0)
        assert row.height.value >= 0.0


def test_northcott_scan_bound_zero():
    rows = northcott_scan(4, bound=0)
    assert sorted(row.t for row in rows) == [Fraction(-3), Fraction(0), Fraction(3)]
    orders = {row.t: row.verdict.q_order for row in rows}
    assert orders == {Fraction(-3): 6, Fraction(0): 2, Fraction(3): 6}


def test_northcott_scan_validates():
    with pytest.raises(ValueError):
        northcott_scan(0)


def test_height_invariant_under_sextic_rescaling():
    """(x, y) -> (u^2 x, u^3 y) onto y^2 = x^3 + u^6 d preserves the height."""
    E1 = WeierstrassCurveQ(Fraction(36))
    P1 = CurvePoint(Fraction(-3), Fraction(-3))
    E2 = WeierstrassCurveQ(Fraction(36 * 2**6))
    P2 = CurvePoint(Fraction(-3 * 4), Fraction(-3 * 8))
    assert on_curve(E2, P2)
    h1, h2 = canonical_height(E1, P1), canonical_height(E2, P2)
    assert abs(h1.value - h2.value) <= 2e-9
