"""Néron-Tate canonical heights on y^2 = x^3 + d and the Northcott scan.

The canonical height is computed as a sum of local heights in the
normalization lam(2P) = 4*lam(P) - log|2y(P)|_v at every place, on a
globally fixed 6th-power-free integral model.  Summed over all places this
telescopes to the standard Néron-Tate height: h(nP) = n^2 h(P), zero
exactly on torsion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .arith import factorize
from .elliptic import CurvePoint, WeierstrassCurveQ, sixth_power_free, torsion_points

_ARCH_TERMS = 40
_ERROR_BOUND = 1e-9  # dominated by the 4^-40 series tail at 80-bit precision


@dataclass(frozen=True)
class HeightValue:
    """A canonical height: natural-log normalization.  Torsion points get
    value 0.0 exactly (decided by the torsion classification, never by a
    threshold)."""

    value: float
    error_bound: float


def naive_height(x: Fraction) -> float:
    """Weil height of a rational: h(m/n) = log max(|m|, n); h(0) = 0."""
    x = Fraction(x)
    return math.log(max(abs(x.numerator), x.denominator))


def _log_plus(t):
    a = abs(t)
    return mp.log(a) if a > 1 else mp.mpf(0)


def _lam_arch(x0: Fraction, d: int):
    """Archimedean local height via the telescoped doubling series

        lam = 1/2 log+|x| + sum_n 4^-(n+1) c(x_n),
        c(x) = 1/2 (log+|x(2P)| - 4 log+|x| + log|4x^3 + 4d|),

    where x_{n+1} = x(2P_n).  The summand c is bounded (the log|4x^3+4d|
    term cancels the blowup near 2-torsion), so the tail is O(4^-N)."""
    x = mp.mpf(x0.numerator) / x0.denominator
    dd = mp.mpf(d)
    total = _log_plus(x) / 2
    for n in range(_ARCH_TERMS):
        den = 4 * x**3 + 4 * dd
        assert den != 0  # exact 2-torsion is short-circuited before this
        x2 = (x**4 - 8 * dd * x) / den
        c = (_log_plus(x2) - 4 * _log_plus(x) + mp.log(abs(den))) / 2
        total += c / mp.mpf(4) ** (n + 1)
        x = x2
    return total


def _val(r: Fraction, p: int) -> int | None:
    """p-adic valuation of a rational; None encodes +infinity (r = 0)."""
    if r == 0:
        return None
    v = 0
    n = r.numerator
    while n % p == 0:
        n //= p
        v += 1
    n = r.denominator
    while n % p == 0:
        n //= p
        v -= 1
    return v


def _vge(v: int | None, k: int) -> bool:
    return v is None or v >= k


def _reduces_to_cusp(x: Fraction, y: Fraction, p: int) -> bool:
    # singular point of the reduced curve y^2 = x^3 + d mod p is (0,0);
    # P hits it iff both partials 3x^2 and 2y vanish mod p
    return _vge(_val(3 * x * x, p), 1) and _vge(_val(2 * y, p), 1)


class _PrecisionLoss(Exception):
    """Truncated p-adic doubling chain cannot certify a valuation."""


def _lam_p_chain_mod(x: Fraction, y: Fraction, p: int) -> tuple[Fraction, list[int]]:
    """The cusp-escape doubling chain of `_lam_p_coeff`, run in integer
    Jacobian coordinates modulo p^M instead of exact rationals.

    Doubling (X:Y:Z) -> (X3:Y3:Z3) uses only ring operations, so reducing
    mod p^M keeps every p-adic valuation below M - margin exact; whenever a
    valuation gets too close to M the chain raises _PrecisionLoss and the
    caller falls back to the exact chain.  This keeps the coordinate sizes
    bounded (exact doubling quadruples the bit length per step)."""
    M = 160
    margin = 8
    q = p**M
    budget = M  # absolute p-adic precision of the current X, Y, Z

    def vq(n: int) -> int:
        n %= q
        if n == 0:
            raise _PrecisionLoss
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        if v > budget - margin:
            raise _PrecisionLoss
        return v

    den = math.lcm(x.denominator, y.denominator)
    X = int(x * den * den) % q
    Y = int(y * den * den * den) % q
    Z = den % q
    v2 = 1 if p == 2 else 0
    v3 = 1 if p == 3 else 0
    chain: list[int] = []
    for _ in range(8):
        chain.append(v2 + vq(Y) - 3 * vq(Z))
        XX = X * X % q
        YY = Y * Y % q
        A = 3 * XX % q
        X3 = (A * A - 8 * X * YY) % q
        Y3 = (A * (4 * X * YY - X3) - 8 * YY * YY) % q
        Z3 = 2 * Y * Z % q
        vx3, vy3, vz3 = vq(X3), vq(Y3), vq(Z3)
        # projective rescaling by p^-e keeps the valuations (and hence the
        # precision spent on exact p-power division) bounded along the chain
        e = min(vx3 // 2, vy3 // 3, vz3)
        if e:
            X3 //= p ** (2 * e)
            Y3 //= p ** (3 * e)
            Z3 //= p**e
            budget -= 3 * e
            if budget <= margin:
                raise _PrecisionLoss
            vx3, vy3, vz3 = vx3 - 2 * e, vy3 - 3 * e, vz3 - e
        X, Y, Z = X3, Y3, Z3
        vx = vx3 - 2 * vz3
        if vx < 0:
            assert vx % 2 == 0  # integral model forces even poles
            return Fraction(-vx, 2), chain
        # cusp test: v(3x^2) >= 1 and v(2y) >= 1
        if not (v3 + 2 * vx >= 1 and v2 + vy3 - 3 * vz3 >= 1):
            return Fraction(0), chain
    assert len(set(chain)) == 1
    return Fraction(-chain[-1], 3), []


def _lam_p_coeff(x: Fraction, y: Fraction, d: int, p: int) -> Fraction:
    """Local height at p as an exact multiple of log p.

    Smooth reduction: lam_p = 1/2 max(0, -v_p(x)) log p.  Reduction to the
    cusp: unwind lam(P) = (lam(2P) - v_p(psi_2(P)) log p)/4 along doublings
    until 2^k P reduces to a smooth point; if the chain never escapes (the
    component group is Z/3), the unwinding has the exact fixed point
    -v_p(psi_2(P)) log p / 3."""
    vx = _val(x, p)
    if vx is not None and vx < 0:
        assert vx % 2 == 0  # integral model forces even poles
        return Fraction(-vx, 2)
    if not _reduces_to_cusp(x, y, p):
        return Fraction(0)
    try:
        base, chain = _lam_p_chain_mod(x, y, p)
    except _PrecisionLoss:
        base, chain = _lam_p_chain_exact(x, y, d, p)
    acc = base
    for vtwo in reversed(chain):
        acc = (acc - vtwo) / 4
    return acc


def _lam_p_chain_exact(x: Fraction, y: Fraction, d: int, p: int) -> tuple[Fraction, list[int]]:
    """Exact-rational version of the doubling chain (slow: coordinate
    sizes quadruple per step); reached only when the truncated chain
    cannot certify a valuation."""
    chain: list[int] = []
    cx, cy = x, y
    for _ in range(8):
        vtwo = _val(2 * cy, p)
        assert vtwo is not None  # y = 0 is 2-torsion, short-circuited
        chain.append(vtwo)
        # double (cx, cy) on y^2 = x^3 + d
        lam = 3 * cx * cx / (2 * cy)
        nx = lam * lam - 2 * cx
        ny = lam * (cx - nx) - cy
        cx, cy = nx, ny
        vx = _val(cx, p)
        if vx is not None and vx < 0:
            assert vx % 2 == 0
            return Fraction(-vx, 2), chain
        if not _reduces_to_cusp(cx, cy, p):
            return Fraction(0), chain
    # never escapes the cusp: Z/3 component group, constant correction
    assert len(set(chain)) == 1
    return Fraction(-chain[-1], 3), []


def canonical_height(E: WeierstrassCurveQ, P: CurvePoint) -> HeightValue:
    """Néron-Tate height of a rational point of y^2 = x^3 + d.

    Exact 0 for torsion (including O); otherwise archimedean series plus
    exact non-archimedean corrections at the primes dividing 6d, computed
    on the 6th-power-free integral model."""
    if P.inf or P in torsion_points(E.d):
        return HeightValue(0.0, 0.0)
    d0, u = sixth_power_free(Fraction(E.d))
    x = Fraction(P.x) / u**2
    y = Fraction(P.y) / u**3
    assert y * y == x**3 + d0
    # non-archimedean contributions live at the primes of bad reduction and
    # at the (good) primes where P reduces to O, i.e. those dividing den(x);
    # on an integral model den(x) is an exact square
    root = math.isqrt(x.denominator)
    assert root * root == x.denominator
    places = set(factorize(6 * d0)) | set(factorize(root))
    with mp.workprec(80):
        total = _lam_arch(x, d0)
        for p in sorted(places):
            coeff = _lam_p_coeff(x, y, d0, p)
            if coeff:
                total += mp.mpf(coeff.numerator) / coeff.denominator * mp.log(p)
        value = float(total)
    return HeightValue(value, _ERROR_BOUND)


@dataclass(frozen=True)
class NorthcottRow:
    """One parameter t with its torsion verdict and the height of the
    marked point on the sextic twist."""

    t: Fraction
    verdict: object  # CeresaVerdict
    height: HeightValue


def northcott_scan(B: int, bound: float = math.inf) -> list[NorthcottRow]:
    """Every t = m/n in lowest terms with max(|m|, n) <= B and t != ±1:
    the torsion verdict for the curve with (a, b) = (2t, 1) and the
    canonical height of its marked point.  Rows with height <= bound, in
    increasing t order."""
    from .picard import PicardCurve, associated_curves, decide_ceresa_t

    if B < 1:
        raise ValueError("B must be >= 1")
    ts = sorted(
        Fraction(m, n)
        for n in range(1, B + 1)
        for m in range(-B, B + 1)
        if math.gcd(abs(m), n) == 1 and abs(Fraction(m, n)) != 1
    )
    rows = []
    for t in ts:
        verdict = decide_ceresa_t(t)
        assoc = associated_curves(PicardCurve(2 * t, Fraction(1)))
        h = canonical_height(assoc.EDelta, assoc.Q)
        assert (verdict.status == "torsion") == (h.value == 0.0)
        if h.value <= bound:
            rows.append(NorthcottRow(t, verdict, h))
    return rows
