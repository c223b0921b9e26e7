"""Exact rational and modular arithmetic underpinning the other modules.

All integers are arbitrary precision and all rationals are
``fractions.Fraction`` (always stored reduced, positive denominator).
Values of linking pairings live in Q/Z and are represented by their
canonical representative in [0, 1).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidDataError


def as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise InvalidDataError(f"expected an integer or Fraction, got {q!r}")


def padic_val(q, p: int) -> int:
    """p-adic valuation of a nonzero rational (negative values allowed).

    >>> padic_val(18, 3)
    2
    >>> padic_val(Fraction(-1, 9), 3)
    -2
    """
    q = as_fraction(q)
    if q == 0:
        raise InvalidDataError("padic_val is undefined at 0")
    v = 0
    n = abs(q.numerator)
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(q, p: int) -> Fraction:
    """q / p^v with v = padic_val(q, p); numerator and denominator coprime to p."""
    q = as_fraction(q)
    return q / Fraction(p) ** padic_val(q, p)


def is_p_unit(q, p: int) -> bool:
    q = as_fraction(q)
    return q != 0 and padic_val(q, p) == 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol of a mod an odd prime p (+1 square, -1 nonsquare)."""
    a %= p
    if a == 0:
        raise InvalidDataError(f"{a} is not a unit mod {p}")
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def square_class(u, p: int):
    """Square class of a p-adic unit.

    For odd p returns +1 or -1 (the class of the unit in F_p^x modulo
    squares).  For p = 2 returns the residue of the odd unit mod 8, which
    indexes the square classes of the 2-adic units.
    """
    u = as_fraction(u)
    if not is_p_unit(u, p):
        raise InvalidDataError(f"{u} is not a unit at p={p}")
    if p == 2:
        return (u.numerator * pow(u.denominator, -1, 8)) % 8
    return legendre(u.numerator * u.denominator, p)


def square_class_name(cls: int) -> str:
    return "square" if cls == 1 else "nonsquare"


def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue mod an odd prime."""
    u = 2
    while legendre(u, p) == 1:
        u += 1
    return u


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd with a deterministic Bezout pair.

    Returns (g, m, n) with g = gcd(a, b) > 0 and m*a + n*b = g.  Among all
    valid pairs the one with minimal |n| is chosen, ties broken by n > 0.

    >>> ext_gcd(9, 7)
    (1, -3, 4)
    >>> ext_gcd(2, 1)
    (1, 0, 1)
    """
    if a == 0 and b == 0:
        raise InvalidDataError("ext_gcd(0, 0) is undefined")
    if a == 0:
        return (abs(b), 0, 1 if b > 0 else -1)
    if b == 0:
        return (abs(a), 1 if a > 0 else -1, 0)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    g, n = old_r, old_t
    if g < 0:
        g, n = -g, -n
    # all solutions differ by multiples of a/g in n; pick the canonical one
    step = abs(a) // g
    n0 = n % step
    n = min((n0, n0 - step), key=lambda x: (abs(x), -x))
    m = (g - n * b) // a
    assert m * a + n * b == g
    return g, m, n


def inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; adequate for cone point orders."""
    n = abs(n)
    if n == 0:
        raise InvalidDataError("cannot factorize 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def qmodz(x) -> Fraction:
    """Canonical representative of x in Q/Z, i.e. x mod 1 in [0, 1)."""
    return as_fraction(x) % 1


def p_part(x, p: int) -> Fraction:
    """Component of x in the p-primary summand of Q/Z, reduced to [0, 1).

    Q/Z splits as the direct sum over primes of the subgroups of elements
    with p-power order; this extracts the p-power-denominator part.

    >>> p_part(Fraction(1, 6), 2)
    Fraction(1, 2)
    >>> p_part(Fraction(1, 6), 3)
    Fraction(2, 3)
    """
    x = qmodz(x)
    den = x.denominator
    e = 0
    d = den
    while d % p == 0:
        d //= p
        e += 1
    if e == 0:
        return Fraction(0)
    pe = p**e
    m = den // pe
    return Fraction((x.numerator * pow(m, -1, pe)) % pe, pe)


def fmt_rational(q) -> str:
    """Serialize a rational as "num/den", omitting "/den" when den = 1."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidDataError(f"bad rational {s!r}") from exc
