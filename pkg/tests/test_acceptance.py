"""Acceptance suite: one test per headline guarantee, each printing a
single ACCEPTANCE PASS line and enforcing its runtime budget.

Run with ``pytest tests/test_acceptance.py -rA`` to see the lines.
"""

import random
import time
from fractions import Fraction

from jacobian_oracle import two_d_matches_sigma

from ceresa.arith import IntPolynomial
from ceresa.elliptic import (
    CurvePoint,
    Genus1Point,
    WeierstrassCurveFp,
    WeierstrassCurveQ,
    add,
    divide_point,
    division_poly,
    group_order_fp,
    mul,
    neg,
    torsion_j0_Q,
)
from ceresa.ffcert import (
    count_curve,
    frobenius_det,
    lift_sum,
    lpoly,
    certify_infinite,
    serialize_certificate,
    validate_certificate,
)
from ceresa.heights import canonical_height, northcott_scan
from ceresa.picard import (
    PicardCurve,
    decide_ceresa,
    decide_ceresa_t,
    enumerate_torsion_locus,
)


def test_01_lift_sum_reproduces_sigma_37_15_of_order_7():
    start = time.monotonic()
    r = lift_sum(1, 1, 41)
    assert r.sigma == Genus1Point(37, 15)
    assert r.sigma_order == 7
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    print(f"ACCEPTANCE PASS 1/8 lift_sum(1,1,41): sigma=(37,15) of order 7 "
          f"[{elapsed:.2f}s]")


def test_02_frobenius_determinant_at_11_exact_and_unit_mod_7():
    start = time.monotonic()
    r = frobenius_det(1, 1, 11, 7)
    assert abs(r.det_untwisted) == 29049104246323668435011663307177984
    assert r.unit_mod_ell is True
    # the twisted determinant on V itself carries a denominator (a power of
    # q from the weight normalization); its integrality is realized by the
    # untwisted product det(M - 1)·det(Λ³M - 1), and the unit test passes
    # either way.  Recorded as the suite's one open question.
    assert r.det_value == Fraction(886754046541824, 379749833583241)
    assert r.det_value.denominator == 11 ** 14
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    print(f"ACCEPTANCE PASS 2/8 |det(Frob_11 - 1)| = "
          f"29049104246323668435011663307177984, unit mod 7 "
          f"(open question: twisted value is 886754046541824/379749833583241, "
          f"denominator 11^14) [{elapsed:.2f}s]")


def test_03_torsion_infinite_split_on_the_t_line():
    start = time.monotonic()
    for t in (Fraction(0), Fraction(3), Fraction(-3)):
        assert decide_ceresa_t(t).status == "torsion", t
    for t in (Fraction(2), Fraction(-2), Fraction(4), Fraction(5),
              Fraction(1, 2), Fraction(7, 3)):
        assert decide_ceresa_t(t).status == "infinite", t
    v = decide_ceresa(PicardCurve(6, -3))
    assert v.status == "torsion" and v.q_order == 3
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    print(f"ACCEPTANCE PASS 3/8 torsion for t in {{0,3,-3}}, infinite for "
          f"t in {{2,-2,4,5,1/2,7/3}}; (a,b)=(6,-3) torsion of order 3 "
          f"[{elapsed:.2f}s]")


def test_04_scan_and_small_torsion_locus_are_exactly_the_known_ones():
    start = time.monotonic()
    rows = northcott_scan(20, bound=0)
    assert {row.t for row in rows} == {Fraction(0), Fraction(3), Fraction(-3)}
    assert all(row.verdict.status == "torsion" for row in rows)

    entries = {e.order: e.t_minimal_polynomials
               for e in enumerate_torsion_locus(6)}
    assert entries[2] == (IntPolynomial((0, 1)),)              # t
    assert entries[3] == (IntPolynomial((3, 0, 1)),)           # t^2 + 3
    linear = [p for p in entries[6] if p.degree == 1]
    assert set(linear) == {IntPolynomial((-3, 1)), IntPolynomial((3, 1))}
    rest = [p for p in entries[6] if p.degree > 1]
    assert rest == [IntPolynomial((243, 0, -405, 0, 225, 0, 1))]
    elapsed = time.monotonic() - start
    assert elapsed < 120.0
    print(f"ACCEPTANCE PASS 4/8 northcott_scan(20, bound=0) = {{0, 3, -3}}; "
          f"locus orders 2,3,6 give t; t^2+3; t-3, t+3 (plus one sextic "
          f"with no rational root) [{elapsed:.2f}s]")


def test_05_torsion_locus_nonempty_for_every_order_up_to_12():
    start = time.monotonic()
    entries = enumerate_torsion_locus(12)  # two-prime certification inside
    assert [e.order for e in entries] == list(range(2, 13))
    for e in entries:
        assert len(e.t_minimal_polynomials) >= 1, e.order
        assert all(p.degree >= 1 for p in e.t_minimal_polynomials)
    elapsed = time.monotonic() - start
    assert elapsed < 300.0
    print(f"ACCEPTANCE PASS 5/8 enumerate_torsion_locus(12): nonempty, "
          f"two-prime-certified entry for every order 2..12 [{elapsed:.2f}s]")


def test_06_marked_point_on_d_36_is_primitive_and_of_positive_height():
    start = time.monotonic()
    E = WeierstrassCurveQ(36)
    Q = CurvePoint(Fraction(-3), Fraction(-3))
    tors = torsion_j0_Q(Fraction(36))
    assert tors.structure == "Z/3"
    torsion_points = {CurvePoint.infinity()}
    for g in tors.generators:
        P = g
        while P not in torsion_points:
            torsion_points.add(P)
            P = add(E, P, g)
    assert Q not in torsion_points
    for n in (2, 3, 5):
        assert divide_point(E, n, Q) == []
    h = canonical_height(E, Q)
    assert h.value > 0.1
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    print(f"ACCEPTANCE PASS 6/8 y^2=x^3+36, Q=(-3,-3): not torsion, not an "
          f"n-th multiple for n in {{2,3,5}}, height {h.value:.6f} > 0.1 "
          f"[{elapsed:.2f}s]")


def test_07_l_polynomial_factorization_on_random_good_curves():
    start = time.monotonic()
    rng = random.Random("acceptance-lpoly")
    primes = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
    checked = 0
    while checked < 10:
        a = rng.randrange(0, 12)
        b = rng.randrange(1, 12)
        p = rng.choice(primes)
        if (16 * b * (a * a - 4 * b)) % p == 0:
            continue
        r = lpoly(a, b, p)
        prod = [0] * 7
        for i, u in enumerate(r.L_E.coefficients):
            for j, w in enumerate(r.L_P.coefficients):
                prod[i + j] += u * w
        assert prod == list(r.L_C.coefficients), (a, b, p)
        jac_order = sum(r.L_C.coefficients)  # L_C(1)
        assert jac_order > 0, (a, b, p)
        # independent check of the elliptic factor: direct point count
        d = (16 * (a * a - 4 * b)) % p
        naive = 1 + sum(
            1 for x in range(p) for y in range(p)
            if (y * y - x * x * x - d) % p == 0)
        assert sum(r.L_E.coefficients) == naive, (a, b, p)
        checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 120.0
    print(f"ACCEPTANCE PASS 7/8 L_C = L_E * L_P exactly with #J(F_p) = "
          f"L_C(1) > 0 on 10 random good (a,b,p), p <= 41 [{elapsed:.2f}s]")


def test_08_property_suites():
    start = time.monotonic()

    # --- group law: 200 random triples over prime fields -------------------
    rng = random.Random("acceptance-group-law")
    triples = 0
    while triples < 200:
        p = rng.choice((11, 13, 17, 19, 23))
        d = rng.randrange(1, p)
        E = WeierstrassCurveFp(d, p)
        pts = [CurvePoint.infinity()] + [
            CurvePoint(x, y) for x in range(p) for y in range(p)
            if (y * y - x * x * x - d) % p == 0]
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert add(E, add(E, P, Q), R) == add(E, P, add(E, Q, R))
        assert add(E, P, Q) == add(E, Q, P)
        assert add(E, P, CurvePoint.infinity()) == P
        assert add(E, P, neg(E, P)) == CurvePoint.infinity()
        triples += 1

    # --- canonical height is quadratic: h(nP) = n^2 h(P) -------------------
    E = WeierstrassCurveQ(36)
    P = CurvePoint(Fraction(-3), Fraction(-3))
    h1 = canonical_height(E, P)
    for n in (2, 3, 5):
        hn = canonical_height(E, mul(E, n, P))
        assert abs(hn.value - n * n * h1.value) < n * n * 1e-6, n

    # --- Weil/Hasse bounds on every point count ----------------------------
    for (a, b, p) in ((1, 1, 11), (2, 3, 13), (0, 5, 7), (4, 1, 29)):
        for i in (1, 2, 3):
            n_i = count_curve(a, b, p, i).curve_count
            q = p ** i
            assert abs(n_i - (q + 1)) <= 6 * int(q ** 0.5 + 1), (a, b, p, i)
        d = (16 * (a * a - 4 * b)) % p
        ecount = group_order_fp(WeierstrassCurveFp(d, p))
        assert abs(ecount - (p + 1)) <= 2 * int(p ** 0.5 + 1), (a, b, p)

    # --- division polynomials against actual torsion -----------------------
    for d in (1, 8, 36, -432):
        E = WeierstrassCurveQ(d)
        tors = torsion_j0_Q(Fraction(d))
        for g in tors.generators:
            n = {"Z/2": 2, "Z/3": 3, "Z/6": 6}[tors.structure]
            assert mul(E, n, g) == CurvePoint.infinity()
        for n in (2, 3):
            psi = division_poly(E, n)
            for x in {g.x for g in tors.generators
                      if not g.inf and mul(E, n, g) == CurvePoint.infinity()}:
                acc = sum(c * x ** k for k, c in enumerate(psi.coefficients))
                assert acc == 0, (d, n, x)

    # --- brute-force Jacobian oracle agrees with lift_sum for p <= 13 ------
    oracle_cases = 0
    for v in (5, 7, 11, 13):
        for a in range(0, 3):
            for b in range(1, 3):
                if (16 * b * (a * a - 4 * b)) % v == 0:
                    continue
                r = lift_sum(a, b, v)
                assert two_d_matches_sigma(a, b, v, r.sigma), (a, b, v)
                oracle_cases += 1
    assert oracle_cases >= 15
    # and it rejects every wrong candidate on the genus-1 quotient
    r = lift_sum(1, 1, 5)
    rejected = 0
    for u in range(5):
        for y in range(5):
            if (y**3 - u * u - u - 1) % 5 != 0:
                continue
            cand = Genus1Point(u, y)
            if cand == r.sigma:
                assert two_d_matches_sigma(1, 1, 5, cand)
            else:
                assert not two_d_matches_sigma(1, 1, 5, cand), cand
                rejected += 1
    assert rejected >= 1

    # --- certificate tamper-detection ---------------------------------------
    cert = certify_infinite(4, 1)
    text = serialize_certificate(cert)
    ok, reason = validate_certificate(text)
    assert ok and reason == "certificate verified"
    for old, new in (
        ("sigma_order = 10", "sigma_order = 5"),
        ("q = 7", "q = 13"),
        ("sigma = (4, 9)", "sigma = (4, 20)"),
        ("det_value = 44281396224/1977326743",
         "det_value = 44281396225/1977326743"),
        ("ell = 5", "ell = 11"),
    ):
        assert old in text, old
        ok, reason = validate_certificate(text.replace(old, new))
        assert not ok, (old, new, reason)

    elapsed = time.monotonic() - start
    assert elapsed < 480.0
    print(f"ACCEPTANCE PASS 8/8 property suites: group law (200 triples), "
          f"height quadraticity, Weil/Hasse bounds, division polynomials vs "
          f"torsion, Jacobian oracle vs lift_sum (p <= 13, {oracle_cases} "
          f"cases), certificate tamper-detection [{elapsed:.2f}s]")
