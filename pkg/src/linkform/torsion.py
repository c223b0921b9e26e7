"""Torsion of H_1 of a Seifert manifold: presentations, localized cyclic
decompositions, and an exact Smith-normal-form oracle cross-checking them.

H_1(M(g;S)) = Z^{2g} + coker(P) where P is the (r+1) x (r+1) relation
matrix over generators q_1..q_r, h with rows (sum q_i = 0) and
(alpha_i q_i + beta_i h = 0).  Localizing at a prime p (after reordering
so the p-valuations of the alpha_i descend) and eliminating q_1, q_2
leaves the diagonal presentation

    alpha_1*alpha_2*eps * s = 0,    alpha_i * q_i' = 0  (3 <= i <= r),

so the p-primary part is a direct sum of explicit cyclic groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import padic_val
from .errors import UnsupportedError
from .seifert import (
    SeifertData,
    euler_invariant,
    relevant_primes,
    reorder_at_prime,
    require_valid,
)


@dataclass(frozen=True)
class Presentation:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LocalDecomposition:
    prime: int
    orders: tuple[tuple[str, int], ...]  # (generator label, p-power order > 1)
    free_rank: int  # contribution on top of the 2g from the base surface

    def order_multiset(self) -> tuple[int, ...]:
        return tuple(sorted((n for _, n in self.orders), reverse=True))


def presentation_matrix(S: SeifertData) -> Presentation:
    """Relation matrix of H = H_1 / Z^{2g} over q_1..q_r, h."""
    require_valid(S)
    r = S.r
    labels = tuple(f"q{i}" for i in range(1, r + 1)) + ("h",)
    rows = [tuple([1] * r + [0])]
    for i, (a, b) in enumerate(S.pairs):
        row = [0] * (r + 1)
        row[i] = a
        row[r] = b
        rows.append(tuple(row))
    return Presentation(labels, tuple(rows))


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]  # d_1 | d_2 | ... | d_k >= 0, padded with 0s
    left: tuple[tuple[int, ...], ...]  # U, unimodular
    right: tuple[tuple[int, ...], ...]  # V, unimodular; U A V = diag


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix) -> SmithForm:
    """Exact Smith normal form with unimodular transforms.

    Returns diag(d_1..d_k) with d_1 | d_2 | ... and U A V = D.  Pivots are
    chosen by minimal nonzero absolute value; everything is exact integer
    arithmetic.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < best):
                    best = abs(A[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            reduced = False
            for i in range(t + 1, m):
                if A[i][t] % A[t][t] != 0:
                    row_op(i, t, A[i][t] // A[t][t])
                    if abs(A[i][t]) < abs(A[t][t]):
                        swap_rows(i, t)
                    reduced = True
            for j in range(t + 1, n):
                if A[t][j] % A[t][t] != 0:
                    col_op(j, t, A[t][j] // A[t][t])
                    if abs(A[t][j]) < abs(A[t][t]):
                        swap_cols(j, t)
                    reduced = True
            if reduced:
                continue
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
            # pivot must divide the whole remaining block for d_i | d_{i+1}
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    diag = tuple(A[i][i] if i < n else 0 for i in range(min(m, n)))
    return SmithForm(diag, tuple(map(tuple, U)), tuple(map(tuple, V)))


def local_orders(S: SeifertData, p: int) -> LocalDecomposition:
    """Cyclic decomposition of the p-primary torsion, with generator labels.

    Labels refer to positions after reordering at p.  For r = 1 the group
    is cyclic, generated by the image of the regular fibre h.
    """
    require_valid(S)
    if S.r == 1:
        a1, b1 = S.pairs[0]
        e = padic_val(b1, p) if b1 % p == 0 else 0
        orders = ((("h", p**e),) if e > 0 else ())
        return LocalDecomposition(p, orders, 0)
    Sp, _ = reorder_at_prime(S, p)
    eps = euler_invariant(Sp)
    orders = []
    for i in range(2, Sp.r):
        e = padic_val(Sp.pairs[i][0], p)
        if e > 0:
            orders.append((f"q{i + 1}'", p**e))
    free = 1
    if eps != 0:
        free = 0
        a1 = Sp.pairs[0][0]
        a2 = Sp.pairs[1][0]
        vs = padic_val(Fraction(a1) * a2 * eps, p)
        if vs > 0:
            orders.append(("s", p**vs))
    return LocalDecomposition(p, tuple(orders), free)


def structure_check(S: SeifertData) -> dict:
    """Cross-validate local_orders against the Smith normal form oracle.

    For every relevant prime the multiset of p-power orders predicted by
    the localized presentation must match the p-parts of the SNF diagonal,
    and the free rank of H_1 must be 2g + 1 exactly when eps = 0.
    """
    require_valid(S)
    pres = presentation_matrix(S)
    snf = smith_normal_form(pres.matrix)
    eps = euler_invariant(S)
    free_snf = 2 * S.genus + sum(1 for d in snf.diagonal if d == 0)
    free_expected = 2 * S.genus + (1 if eps == 0 else 0)
    primes = []
    ok = free_snf == free_expected
    for p in relevant_primes(S):
        from_snf = sorted(
            (p ** padic_val(d, p) for d in snf.diagonal if d != 0 and d % p == 0),
            reverse=True,
        )
        local = local_orders(S, p)
        match = tuple(from_snf) == local.order_multiset()
        ok = ok and match
        primes.append(
            {
                "prime": p,
                "orders": list(local.order_multiset()),
                "orders_snf": list(from_snf),
                "free_rank": 2 * S.genus + local.free_rank,
                "snf_match": match,
            }
        )
    return {
        "euler_zero": eps == 0,
        "free_rank": free_snf,
        "free_rank_expected": free_expected,
        "free_rank_match": free_snf == free_expected,
        "primes": primes,
        "ok": ok,
    }


def torsion_order(S: SeifertData) -> int:
    """Order of the torsion subgroup of H_1 (product over relevant primes)."""
    total = 1
    for p in relevant_primes(S):
        for _, n in local_orders(S, p).orders:
            total *= n
    return total


def unsupported_r1_pairing(S: SeifertData) -> None:
    if S.r < 2:
        raise UnsupportedError(
            "pairing computation needs r >= 2; r = 1 spaces are lens spaces "
            "whose cyclic pairings are handled symbolically"
        )
