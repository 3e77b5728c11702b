"""Shared randomized generators with built-in oracles.

Random chain complexes are assembled from elementary pieces whose homology
is known (free generators and two-step multiplication complexes), then
conjugated by a random degree-preserving unimodular change of basis, so the
homology oracle survives exactly.  Commuting U-actions come from U = dW + Wd
for a random degree -1 map W; anticommuting square-zero Y-actions from
Y = dX - Xd with rejection on Y.Y != 0.
"""

import random
from typing import Dict, List, Optional, Tuple

from artifact.chain import ChainComplex, GradedMap, GradedModule, PMorphism
from artifact.exactlin import AbelianGroup, IntMatrix


def random_matrix(rng: random.Random, rows: int, cols: int, lo=-5, hi=5,
                  density=0.6) -> IntMatrix:
    ent = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    ent[(i, j)] = v
    return IntMatrix(rows, cols, ent)


def det(M: IntMatrix) -> int:
    """Exact determinant by dynamic programming over column subsets."""
    n = M.rows
    assert n == M.cols
    if n == 0:
        return 1
    dense = M.to_dense()
    memo = {0: 1}
    for i in range(n):
        new: Dict[int, int] = {}
        for mask, val in memo.items():
            if not val:
                continue
            sign = 1
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    sign = -sign
                    continue
                a = dense[i][j]
                if a:
                    nm = mask | bit
                    new[nm] = new.get(nm, 0) + sign * val * a
        memo = new
    return memo.get((1 << n) - 1, 0)


def _to_invariant_factors(free: int, orders: List[int]) -> AbelianGroup:
    """Canonical form of Z^free + sum of Z/n over the given cyclic orders."""
    by_prime: Dict[int, List[int]] = {}
    for n in orders:
        m, f = n, 2
        while f * f <= m:
            if m % f == 0:
                q = 1
                while m % f == 0:
                    m //= f
                    q *= f
                by_prime.setdefault(f, []).append(q)
            f += 1
        if m > 1:
            by_prime.setdefault(m, []).append(m)
    lists = [sorted(v) for v in by_prime.values()]
    factors: List[int] = []
    while any(lists):
        d = 1
        for ch in lists:
            if ch:
                d *= ch.pop()
        factors.append(d)
    factors.reverse()
    return AbelianGroup(free, factors)


class ComplexSpec:
    """A random complex together with its known homology."""

    def __init__(self, complex: ChainComplex, expected: Dict[int, AbelianGroup]):
        self.complex = complex
        self.expected = expected


def random_complex(rng: random.Random, max_pieces: int = 4,
                   degree_span: Tuple[int, int] = (-3, 4), p: int = 0,
                   with_u: bool = False) -> ComplexSpec:
    """Direct sum of elementary pieces in a random unimodular basis.

    Pieces: a lone generator in degree k (contributes Z to H_k), or a pair
    b(k) -> a(k-1) with d(b) = n a (contributes Z/|n| to H_{k-1}; nothing
    when n is a unit; Z + Z when n = 0).
    """
    gens: List[Tuple[str, int]] = []
    diff: Dict[Tuple[str, str], int] = {}
    free: Dict[int, int] = {}
    orders: Dict[int, List[int]] = {}

    npieces = rng.randint(1, max_pieces)
    for idx in range(npieces):
        k = rng.randint(*degree_span)
        if rng.random() < 0.4:
            gens.append((f"g{idx}", k))
            free[k] = free.get(k, 0) + 1
            continue
        n = rng.choice([0, 1, 2, 2, 3, 4, 6, -2])
        gens.append((f"b{idx}", k))
        gens.append((f"a{idx}", k - 1))
        if n:
            diff[(f"b{idx}", f"a{idx}")] = n
        if p == 0:
            if n == 0:
                free[k] = free.get(k, 0) + 1
                free[k - 1] = free.get(k - 1, 0) + 1
            elif abs(n) >= 2:
                orders.setdefault(k - 1, []).append(abs(n))
        else:
            if n % p == 0:
                free[k] = free.get(k, 0) + 1
                free[k - 1] = free.get(k - 1, 0) + 1
    module = GradedModule(gens)
    d = GradedMap(module, module, -1, diff)
    C = ChainComplex(module, d, p=p)
    C = random_basis_change(rng, C)
    if with_u:
        C = C.with_actions(u_action=commuting_u(rng, C))
    table = {}
    for deg in set(free) | set(orders):
        table[deg] = _to_invariant_factors(free.get(deg, 0), orders.get(deg, []))
    return ComplexSpec(C, table)


def random_basis_change(rng: random.Random, C: ChainComplex) -> ChainComplex:
    """Conjugate by a random degree-preserving unimodular map (shear moves)."""
    module = C.module
    names = list(module.names())
    if not names:
        return C
    g = GradedMap.identity(module)
    ginv = GradedMap.identity(module)
    for _ in range(rng.randint(0, 2 * len(names))):
        a, b = rng.choice(names), rng.choice(names)
        if a == b or module.degree_of(a) != module.degree_of(b):
            continue
        c = rng.choice([-2, -1, 1, 2])
        ident = {(n, n): 1 for n in names}
        shear = GradedMap(module, module, 0, {**ident, (a, b): c})
        unshear = GradedMap(module, module, 0, {**ident, (a, b): -c})
        g = shear @ g
        ginv = ginv @ unshear
    d = g @ C.d @ ginv
    u = g @ C.u_action @ ginv if C.u_action is not None else None
    y = g @ C.y_action @ ginv if C.y_action is not None else None
    return ChainComplex(module, d, u, y, C.p)


def commuting_u(rng: random.Random, C: ChainComplex) -> GradedMap:
    """U = dW + Wd for random degree -1 W always commutes with d."""
    module = C.module
    ent = {}
    for a, da in module.generators:
        for b, db in module.generators:
            if db == da - 1 and rng.random() < 0.4:
                v = rng.randint(-2, 2)
                if v:
                    ent[(a, b)] = v
    W = GradedMap(module, module, -1, ent)
    return (C.d @ W) + (W @ C.d)


def anticommuting_y(rng: random.Random, C: ChainComplex,
                    tries: int = 8) -> Optional[GradedMap]:
    """Y = dX - Xd for degree +2 X anticommutes with d; keep only draws
    with Y.Y = 0."""
    module = C.module
    for _ in range(tries):
        ent = {}
        for a, da in module.generators:
            for b, db in module.generators:
                if db == da + 2 and rng.random() < 0.4:
                    v = rng.randint(-2, 2)
                    if v:
                        ent[(a, b)] = v
        X = GradedMap(module, module, 2, ent)
        Y = (C.d @ X) - (X @ C.d)
        if (Y @ Y).is_zero_mod(C.p):
            return Y
    return None


def random_pmorphism(rng: random.Random, C1: ChainComplex, C2: ChainComplex,
                     degree: Optional[int] = None) -> PMorphism:
    """A p-morphism C1 -> C2 from a random map N of degree d+1:
    phi = d2.N + (-1)^d N.d1 is a chain map of degree d, and
    K = U2.N - N.U1 witnesses its U-commutation."""
    d = rng.choice([0, 0, -1, 1]) if degree is None else degree
    ent = {}
    for a, da in C1.module.generators:
        for b, db in C2.module.generators:
            if db == da + d + 1 and rng.random() < 0.5:
                v = rng.randint(-2, 2)
                if v:
                    ent[(a, b)] = v
    N = GradedMap(C1.module, C2.module, d + 1, ent)
    sign = -1 if d % 2 else 1
    phi = (C2.d @ N) + (N @ C1.d).scale(sign)
    K = (C2.u_action @ N) - (N @ C1.u_action)
    return PMorphism(C1, C2, phi, K)
