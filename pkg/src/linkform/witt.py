"""Witt group of Q/Z-valued linking pairings.

Modulo metabolic pairings (those with a subgroup P = P-perp), linking
pairings form a group under orthogonal sum which splits as the direct sum
over primes of the Witt groups of F_p:

    p = 2:          Z/2
    p = 3 mod 4:    Z/4   (generated by <1>; <nonsquare> is its inverse)
    p = 1 mod 4:    Z/2 x Z/2   (coordinates over the basis <1>, <u>)

Here u is the least positive nonresidue mod p.  The class of a cyclic
pairing a -> [a^2 b / p^k] vanishes for even k and equals the class of
<b mod p> for odd k; E0 and E1 are metabolic.  For a Seifert manifold the
class of the full pairing has a closed form in the Seifert invariants,
which witt_seifert evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import as_fraction, factorize, legendre
from .errors import InvalidDataError, SearchBoundExceeded
from .linking import GramPairing, elements, eval_pair
from .pairing import Cyc, StandardForm
from .seifert import SeifertData, euler_invariant, require_valid


def _zero_local(p: int):
    return (0, 0) if p % 4 == 1 else 0


def _local_add(p: int, a, b):
    if p == 2:
        return (a + b) % 2
    if p % 4 == 3:
        return (a + b) % 4
    return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)


def _local_neg(p: int, a):
    if p == 2:
        return a % 2
    if p % 4 == 3:
        return (-a) % 4
    return a


def _local_str(p: int, a) -> str:
    if p % 4 == 1:
        return f"({a[0]},{a[1]})"
    return str(a)


def _local_parse(p: int, s: str):
    if p % 4 == 1:
        body = s.strip().strip("()")
        x, y = (int(t) for t in body.split(","))
        return (x % 2, y % 2)
    return int(s) % (2 if p == 2 else 4)


@dataclass(frozen=True)
class WittElement:
    """Element of the direct sum over primes of W(F_p); zero locals omitted."""

    entries: tuple[tuple[int, object], ...]

    @classmethod
    def zero(cls) -> "WittElement":
        return cls(())

    @classmethod
    def of(cls, locals_: dict) -> "WittElement":
        cleaned = tuple(
            sorted((p, v) for p, v in locals_.items() if v != _zero_local(p))
        )
        return cls(cleaned)

    def local(self, p: int):
        for q, v in self.entries:
            if q == p:
                return v
        return _zero_local(p)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "WittElement") -> "WittElement":
        primes = {p for p, _ in self.entries} | {p for p, _ in other.entries}
        return WittElement.of(
            {p: _local_add(p, self.local(p), other.local(p)) for p in primes}
        )

    def __neg__(self) -> "WittElement":
        return WittElement.of({p: _local_neg(p, v) for p, v in self.entries})

    def __sub__(self, other: "WittElement") -> "WittElement":
        return self + (-other)

    def to_json(self) -> dict:
        return {str(p): _local_str(p, v) for p, v in self.entries}

    @classmethod
    def from_json(cls, obj) -> "WittElement":
        try:
            return cls.of({int(p): _local_parse(int(p), v) for p, v in obj.items()})
        except (TypeError, ValueError) as exc:
            raise InvalidDataError(f"bad Witt element: {obj!r}") from exc


def unit_class_witt(p: int, b: int) -> WittElement:
    """Witt class of the rank-1 pairing <b> over F_p."""
    if b % p == 0:
        raise InvalidDataError(f"{b} is not a unit mod {p}")
    if p == 2:
        return WittElement.of({2: 1})
    if p % 4 == 3:
        return WittElement.of({p: 1 if legendre(b, p) == 1 else 3})
    if legendre(b, p) == 1:
        return WittElement.of({p: (1, 0)})
    return WittElement.of({p: (0, 1)})


def witt_cyclic(p: int, k: int, b: int) -> WittElement:
    """Witt class of the cyclic pairing <b / p^k> on Z/p^k.

    Even k gives zero (p^{k/2} Z/p^k is a metabolizer); odd k reduces to
    the class of <b> over F_p.
    """
    if k < 1 or b % p == 0:
        raise InvalidDataError(f"bad cyclic pairing ({p},{k},{b})")
    if k % 2 == 0:
        return WittElement.zero()
    return unit_class_witt(p, b)


def witt_rational(w) -> WittElement:
    """Witt class of the pairing (n, n') -> [n n' w] on Z/denominator(w).

    The pairing splits over the primes dividing the denominator; the
    p-component is cyclic of order p^{v_p} with unit b * (a / p^{v_p}).
    """
    w = as_fraction(w)
    if w == 0:
        raise InvalidDataError("witt_rational needs a nonzero rational")
    a = w.denominator
    b = w.numerator
    total = WittElement.zero()
    for p, v in factorize(a).items():
        cof = a // p**v
        total = total + witt_cyclic(p, v, (b * cof) % p**v)
    return total


def witt_pairing(sf: StandardForm) -> WittElement:
    """Witt class of a standard form (E0 and E1 are metabolic, hence zero)."""
    total = WittElement.zero()
    for atom in sf.atoms:
        if isinstance(atom, Cyc):
            total = total + witt_cyclic(atom.p, atom.k, atom.a)
    return total


def witt_negate(w: WittElement) -> WittElement:
    """Class of the orientation-reversed pairing."""
    return -w


def witt_seifert(S: SeifertData) -> WittElement:
    """Witt class of the linking pairing of M(g;S) from the Seifert data.

    For eps = 0 the class is -sum w(beta_i/alpha_i); for eps = P/Q in
    lowest terms an extra -w(1/(P*Q)) appears.
    """
    require_valid(S)
    eps = euler_invariant(S)
    total = WittElement.zero()
    if eps != 0:
        total = total + witt_rational(Fraction(1, eps.numerator * eps.denominator))
    for a, b in S.pairs:
        total = total + witt_rational(Fraction(b, a))
    return -total


def metabolic_oracle(G: GramPairing, *, bound: int = 2**16):
    """Search for a metabolizer P = P-perp; ground truth for Witt classes.

    Returns (found, generators) where the generators (coefficient tuples)
    generate a subgroup P with |P|^2 = |N| and the pairing vanishing on P.
    Groups of non-square order are immediately non-metabolic.  Refuses
    groups larger than ``bound``.
    """
    size = G.group_order()
    root = isqrt(size)
    if root * root != size:
        return False, None
    if size > bound:
        raise SearchBoundExceeded(f"group order {size} exceeds {bound}")
    if size == 1:
        return True, []
    pool = [x for x in elements(G.orders) if any(x)]

    def closure(gens):
        seen = {tuple([0] * G.rank)}
        for g in gens:
            for base in list(seen):
                x = base
                while True:
                    x = tuple((a + b) % n for a, b, n in zip(x, g, G.orders))
                    if x in seen:
                        break
                    seen.add(x)
        return seen

    def extend(gens, sub, start):
        if len(sub) == root:
            return list(gens)
        if len(sub) > root:
            return None
        for idx in range(start, len(pool)):
            x = pool[idx]
            if x in sub:
                continue
            if eval_pair(G, x, x) != 0:
                continue
            if any(eval_pair(G, x, g) != 0 for g in gens):
                continue
            new_sub = closure(gens + [x])
            if root % len(new_sub) == 0 or len(new_sub) == root:
                found = extend(gens + [x], new_sub, idx + 1)
                if found is not None:
                    return found
        return None

    found = extend([], {tuple([0] * G.rank)}, 0)
    if found is None:
        return False, None
    return True, [list(g) for g in found]
