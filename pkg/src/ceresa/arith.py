"""Exact scalar arithmetic and exact linear algebra.

Rationals, prime fields F_p (p > 3), modular square and cube roots,
integer polynomials, rational root extraction, fraction-free determinants
and characteristic polynomials.  Every operation in this module is exact;
no floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

# ---------------------------------------------------------------------------
# primes and factoring

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24 with these bases)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, by sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, fl in enumerate(sieve) if fl]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ValueError("cannot factor 0")
    from sympy import factorint

    return {int(p): int(e) for p, e in factorint(abs(n)).items()}


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    """All positive divisors, unsorted."""
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


# ---------------------------------------------------------------------------
# prime fields

@dataclass(frozen=True)
class PrimeFieldElement:
    """An element of F_p with p a prime > 3; value stored reduced in [0, p)."""

    value: int
    p: int

    def __post_init__(self):
        if self.p <= 3 or not is_prime(self.p):
            raise ValueError(f"modulus must be a prime > 3, got {self.p}")
        object.__setattr__(self, "value", self.value % self.p)


def inv_mod(a: int, p: int) -> int:
    return pow(a, -1, p)


def _sqrt_int(z: int, p: int) -> int | None:
    """One square root of z mod p, or None (Tonelli-Shanks)."""
    z %= p
    if z == 0:
        return 0
    if pow(z, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(z, (p + 1) // 4, p)
    # write p-1 = 2^s * q with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    c = pow(c, q, p)
    r = pow(z, (q + 1) // 2, p)
    t = pow(z, q, p)
    m = s
    while t != 1:
        # find least i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def _cube_roots_int(z: int, p: int) -> list[int]:
    """All cube roots of z mod p, sorted.

    p = 2 mod 3: cubing is a bijection, the unique root is z^((2p-1)/3).
    p = 1 mod 3: Adleman-Manders-Miller descent in the 3-Sylow subgroup;
    0 or 3 roots.
    """
    z %= p
    if z == 0:
        return [0]
    if p % 3 == 2:
        r = pow(z, (2 * p - 1) // 3, p)
        assert pow(r, 3, p) == z
        return [r]
    if pow(z, (p - 1) // 3, p) != 1:
        return []
    # p-1 = 3^s * t with 3 not dividing t
    s, t = 0, p - 1
    while t % 3 == 0:
        s += 1
        t //= 3
    # cubic non-residue c; b generates the 3-Sylow subgroup
    c = 2
    while pow(c, (p - 1) // 3, p) == 1:
        c += 1
    b = pow(c, t, p)
    omega = pow(b, 3 ** (s - 1), p)  # primitive cube root of unity
    # initial guess x with x^3 = z * err, err in the Sylow subgroup
    l = 1 if (t + 1) % 3 == 0 else 2
    x = pow(z, (l * t + 1) // 3, p)
    err = pow(x, 3, p) * inv_mod(z, p) % p
    # peel the discrete log of err base b, one base-3 digit at a time
    m, basepow = 0, 1
    for i in range(s):
        e = pow(err * inv_mod(pow(b, m, p), p) % p, 3 ** (s - 1 - i), p)
        if e == 1:
            digit = 0
        elif e == omega:
            digit = 1
        else:
            digit = 2
        m += digit * basepow
        basepow *= 3
    assert m % 3 == 0  # err is a cube in the Sylow subgroup since z is one
    x = x * inv_mod(pow(b, m // 3, p), p) % p
    assert pow(x, 3, p) == z
    return sorted([x, x * omega % p, x * omega * omega % p])


def cube_roots(z: PrimeFieldElement) -> list[PrimeFieldElement]:
    """All y in F_p with y^3 = z.  One root when p = 2 mod 3 or z = 0;
    zero or three roots when p = 1 mod 3."""
    return [PrimeFieldElement(r, z.p) for r in _cube_roots_int(z.value, z.p)]


def sqrt_mod(z: PrimeFieldElement) -> list[PrimeFieldElement] | None:
    """{r, -r} with r^2 = z, or None for a non-residue; z = 0 gives {0}."""
    r = _sqrt_int(z.value, z.p)
    if r is None:
        return None
    if r == 0:
        return [PrimeFieldElement(0, z.p)]
    return [PrimeFieldElement(v, z.p) for v in sorted({r, z.p - r})]


# ---------------------------------------------------------------------------
# polynomials (coefficient lists, lowest degree first)

def poly_trim(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(f: list, g: list) -> list:
    n = max(len(f), len(g))
    return poly_trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def poly_sub(f: list, g: list) -> list:
    n = max(len(f), len(g))
    return poly_trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)])


def poly_mul(f: list, g: list) -> list:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return poly_trim(out)


def poly_scale(f: list, c) -> list:
    return poly_trim([a * c for a in f])


def poly_eval(f: list, x):
    acc = 0
    for a in reversed(f):
        acc = acc * x + a
    return acc


def poly_divmod(f: list, g: list) -> tuple[list, list]:
    """Quotient and remainder in Q[x] (coefficients become Fractions)."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = [Fraction(a) for a in f]
    q = [Fraction(0)] * max(0, len(f) - len(g) + 1)
    lead = Fraction(g[-1])
    while len(f) >= len(g) and poly_trim(f):
        f = poly_trim(f)
        if len(f) < len(g):
            break
        k = len(f) - len(g)
        coef = f[-1] / lead
        q[k] = coef
        for i, b in enumerate(g):
            f[k + i] -= coef * b
        f.pop()
    return poly_trim(q), poly_trim(f)


def poly_div_exact(f: list, g: list) -> list:
    q, r = poly_divmod(f, g)
    if r:
        raise ValueError("polynomial division is not exact")
    return q


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients lowest degree first, trailing zeros
    stripped (so the leading coefficient is nonzero unless zero poly)."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(a) for a in poly_trim(list(self.coefficients)))
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x):
        return poly_eval(list(self.coefficients), x)

    def to_str(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            a = self.coefficients[i]
            if a == 0:
                continue
            if i == 0:
                parts.append(f"{a}")
            else:
                term = var if i == 1 else f"{var}^{i}"
                if a == 1:
                    parts.append(term)
                elif a == -1:
                    parts.append(f"-{term}")
                else:
                    parts.append(f"{a}*{term}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.to_str()


def primitive_int_poly(f: list) -> IntPolynomial:
    """Clear denominators and content from a rational coefficient list;
    normalize the leading coefficient to be positive."""
    f = poly_trim([Fraction(a) for a in f])
    if not f:
        return IntPolynomial(())
    den = math.lcm(*[a.denominator for a in f])
    ints = [int(a * den) for a in f]
    g = math.gcd(*ints)
    ints = [a // g for a in ints]
    if ints[-1] < 0:
        ints = [-a for a in ints]
    return IntPolynomial(tuple(ints))


def rational_roots(f: IntPolynomial) -> list[Fraction]:
    """All rational roots of f (multiplicity ignored), sorted.

    Divisor search over the leading and constant coefficients (rational
    root theorem); the divisors come from exact factorization so large
    coefficients are handled.  If the candidate set would be enormous the
    search falls back to factoring f over Q.
    """
    if f.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    coeffs = list(f.coefficients)
    roots: set[Fraction] = set()
    # strip powers of x
    k = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        k += 1
    if k:
        roots.add(Fraction(0))
    if len(coeffs) == 1:
        return sorted(roots)
    a0, an = abs(coeffs[0]), abs(coeffs[-1])
    p_divs = divisors_from_factorization(factorize(a0))
    q_divs = divisors_from_factorization(factorize(an))
    if len(p_divs) * len(q_divs) > 100_000:
        from sympy import Poly, Symbol, factor_list

        x = Symbol("x")
        _, factors = factor_list(Poly(list(reversed(coeffs)), x).as_expr())
        for fac, _mult in factors:
            pol = Poly(fac, x)
            if pol.degree() == 1:
                b, a = pol.all_coeffs()  # b*x + a
                roots.add(Fraction(-int(a), int(b)))
        return sorted(roots)
    for num in p_divs:
        for den in q_divs:
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and poly_eval(coeffs, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


# ---------------------------------------------------------------------------
# exact linear algebra

@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of Rationals, row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count must equal rows*cols")
        object.__setattr__(self, "entries", tuple(Fraction(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: list[list]) -> "RationalMatrix":
        r = len(rows)
        c = len(rows[0]) if rows else 0
        return cls(r, c, tuple(Fraction(v) for row in rows for v in row))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]


def mat_mul(a: list[list], b: list[list]) -> list[list]:
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            att = ai[t]
            if att:
                bt = b[t]
                for j in range(m):
                    oi[j] += att * bt[j]
    return out


def det_bareiss(rows: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_rational(rows: list[list]) -> Fraction:
    """Exact determinant over Q: scale each row integral, then Bareiss."""
    scale = Fraction(1)
    int_rows = []
    for row in rows:
        frs = [Fraction(v) for v in row]
        den = math.lcm(*[f.denominator for f in frs]) if frs else 1
        scale /= den
        int_rows.append([int(f * den) for f in frs])
    return scale * det_bareiss(int_rows)


def char_poly(M: RationalMatrix) -> tuple[Fraction, ...]:
    """Characteristic polynomial det(T*I - M), exact, by Faddeev-LeVerrier.

    Returned as coefficients lowest degree first; monic of degree n.
    """
    if M.rows != M.cols:
        raise ValueError("matrix must be square")
    n = M.rows
    a = M.to_rows()
    coeffs = [Fraction(0)] * n + [Fraction(1)]  # c_n = 1
    N = [row[:] for row in a]
    for k in range(1, n + 1):
        c = -sum(N[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        if k < n:
            for i in range(n):
                N[i][i] += c
            N = mat_mul(a, N)
    return tuple(coeffs)
