"""Seifert data for orientable Seifert fibred 3-manifolds M(g; S).

S is an ordered list of coprime pairs (alpha_i, beta_i) with alpha_i >= 2
describing the exceptional fibres; g is the genus of the orientable base.
The generalized Euler number eps = -sum(beta_i/alpha_i) is kept exact;
beta_i are deliberately not normalized mod alpha_i since eps depends on
the actual integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import factorize, padic_val
from .errors import InvalidDataError


@dataclass(frozen=True)
class SeifertData:
    genus: int
    pairs: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        body = ",".join(f"({a},{b})" for a, b in self.pairs)
        return f"M({self.genus};{body})"

    @property
    def r(self) -> int:
        return len(self.pairs)

    def to_json(self) -> dict:
        return {"genus": self.genus, "pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, obj) -> "SeifertData":
        try:
            genus = int(obj.get("genus", 0))
            pairs = tuple((int(a), int(b)) for a, b in obj["pairs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDataError(f"bad Seifert data: {obj!r}") from exc
        return cls(genus, pairs)


def seifert(*pairs: tuple[int, int], genus: int = 0) -> SeifertData:
    """Convenience constructor: seifert((2,1),(2,1),(2,1),(2,-1))."""
    return SeifertData(genus, tuple((int(a), int(b)) for a, b in pairs))


def validate(S: SeifertData) -> list[str]:
    """Return a list of violated invariants (empty means valid)."""
    problems = []
    if S.genus < 0:
        problems.append(f"genus {S.genus} < 0")
    if S.r < 1:
        problems.append("empty pair list (need r >= 1)")
    for i, (a, b) in enumerate(S.pairs, start=1):
        if a < 2:
            problems.append(f"pair {i}: alpha={a} < 2")
        elif gcd(a, b) != 1:
            problems.append(f"pair {i}: gcd({a},{b}) = {gcd(a, b)} != 1")
    return problems


def require_valid(S: SeifertData) -> None:
    problems = validate(S)
    if problems:
        raise InvalidDataError("; ".join(problems))


def euler_invariant(S: SeifertData) -> Fraction:
    """Generalized Euler number -sum(beta_i/alpha_i); independent of genus."""
    require_valid(S)
    return -sum(Fraction(b, a) for a, b in S.pairs)


def reorder_at_prime(S: SeifertData, p: int) -> tuple[SeifertData, tuple[int, ...]]:
    """Stable sort of the pairs by descending p-adic valuation of alpha.

    After reordering, alpha_{i+1} divides alpha_i in the localization at p.
    The permutation maps new positions to original 0-based indices.
    """
    require_valid(S)
    perm = tuple(sorted(range(S.r), key=lambda i: -padic_val(S.pairs[i][0], p)))
    return SeifertData(S.genus, tuple(S.pairs[i] for i in perm)), perm


def fibre_sum(S: SeifertData, T: SeifertData) -> SeifertData:
    """Concatenate Seifert data (fibre sum of the manifolds); genera add."""
    require_valid(S)
    require_valid(T)
    return SeifertData(S.genus + T.genus, S.pairs + T.pairs)


def r_p(S: SeifertData, p: int) -> int:
    """Number of cone point orders divisible by p."""
    require_valid(S)
    return sum(1 for a, _ in S.pairs if a % p == 0)


def relevant_primes(S: SeifertData) -> tuple[int, ...]:
    """Primes at which the torsion of H_1(M(g;S)) can be nontrivial.

    These are the primes dividing some cone point order together with the
    primes dividing the numerator of the Euler number.
    """
    require_valid(S)
    primes: set[int] = set()
    for a, _ in S.pairs:
        primes.update(factorize(a))
    eps = euler_invariant(S)
    if eps != 0:
        primes.update(factorize(eps.numerator))
    return tuple(sorted(primes))
