"""Exact linear algebra over Z and prime fields.

Everything here is exact: arbitrary-precision integers, or residues mod a
prime p.  The ring is selected by an integer parameter ``p`` on each
operation -- ``p=0`` means Z, ``p`` a prime means F_p.  Matrices are stored
sparsely as ``(row, col) -> nonzero value``.

The workhorse is Smith normal form with unimodular transforms, from which
ranks, saturated kernels, exact linear solves, and finitely generated
abelian-group quotients all follow.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class ExactLinError(Exception):
    pass


class DimensionMismatch(ExactLinError):
    pass


class CompositionNonzero(ExactLinError):
    pass


class IntMatrix:
    """Immutable sparse integer matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int,
                 entries: Optional[Dict[Tuple[int, int], int]] = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        clean: Dict[Tuple[int, int], int] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise DimensionMismatch(
                        f"entry ({i},{j}) outside {rows}x{cols}")
                if v:
                    clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]],
                  cols: Optional[int] = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(rows, cols, entries)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        n = len(diag)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        return cls(rows, cols, {(i, i): d for i, d in enumerate(diag) if d})

    @classmethod
    def column(cls, values: Sequence[int]) -> "IntMatrix":
        return cls(len(values), 1, {(i, 0): v for i, v in enumerate(values) if v})

    # -- basic accessors ---------------------------------------------------

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def col_vector(self, j: int) -> List[int]:
        return [self.entries.get((i, j), 0) for i in range(self.rows)]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("matrix sum shape mismatch")
        entries = dict(self.entries)
        for k, v in other.entries.items():
            w = entries.get(k, 0) + v
            if w:
                entries[k] = w
            else:
                entries.pop(k, None)
        return IntMatrix(self.rows, self.cols, entries)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        if not c:
            return IntMatrix(self.rows, self.cols)
        return IntMatrix(self.rows, self.cols,
                         {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        by_row: Dict[int, Dict[int, int]] = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, {})[k] = v
        by_k: Dict[int, Dict[int, int]] = {}
        for (k, j), v in other.entries.items():
            by_k.setdefault(k, {})[j] = v
        entries: Dict[Tuple[int, int], int] = {}
        for i, row in by_row.items():
            acc: Dict[int, int] = {}
            for k, v in row.items():
                rk = by_k.get(k)
                if not rk:
                    continue
                for j, w in rk.items():
                    acc[j] = acc.get(j, 0) + v * w
            for j, s in acc.items():
                if s:
                    entries[(i, j)] = s
        return IntMatrix(self.rows, other.cols, entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         {(j, i): v for (i, j), v in self.entries.items()})

    def mod(self, p: int) -> "IntMatrix":
        if p <= 0:
            return self
        return IntMatrix(self.rows, self.cols,
                         {k: v % p for k, v in self.entries.items() if v % p})

    @classmethod
    def hstack(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        if not blocks:
            return cls(0, 0)
        rows = blocks[0].rows
        entries = {}
        off = 0
        for b in blocks:
            if b.rows != rows:
                raise DimensionMismatch("hstack row mismatch")
            for (i, j), v in b.entries.items():
                entries[(i, j + off)] = v
            off += b.cols
        return cls(rows, off, entries)

    def submatrix_cols(self, js: Sequence[int]) -> "IntMatrix":
        pos = {j: a for a, j in enumerate(js)}
        entries = {}
        for (i, j), v in self.entries.items():
            if j in pos:
                entries[(i, pos[j])] = v
        return IntMatrix(self.rows, len(js), entries)


class AbelianGroup:
    """Finitely generated abelian group in canonical invariant-factor form.

    ``torsion`` is the chain d_1 | d_2 | ... with each d_i >= 2.  Over a
    prime field the same type is reused with ``free_rank`` holding the
    dimension and empty torsion.
    """

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int, torsion: Iterable[int] = ()):
        tor = tuple(torsion)
        if free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(tor, tor[1:]):
            if b % a:
                raise ValueError(f"torsion {tor} is not a divisibility chain")
        if any(d < 2 for d in tor):
            raise ValueError("torsion factors must be >= 2")
        object.__setattr__(self, "free_rank", free_rank)
        object.__setattr__(self, "torsion", tor)

    def __setattr__(self, name, value):
        raise AttributeError("AbelianGroup is immutable")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __eq__(self, other) -> bool:
        return (isinstance(other, AbelianGroup)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self) -> str:
        return f"AbelianGroup({self.free_rank}, {self.torsion})"

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


TRIVIAL_GROUP = AbelianGroup(0)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

class _Worker:
    """Mutable row-dict workspace tracking left/right transforms."""

    def __init__(self, M: IntMatrix):
        self.n = M.rows
        self.m = M.cols
        self.a: List[Dict[int, int]] = [dict() for _ in range(self.n)]
        for (i, j), v in M.entries.items():
            self.a[i][j] = v
        self.left: List[Dict[int, int]] = [{i: 1} for i in range(self.n)]
        self.right: List[Dict[int, int]] = [{j: 1} for j in range(self.m)]

    # row operations act on (a, left); column operations on (a, right).

    def row_swap(self, i1, i2):
        if i1 != i2:
            self.a[i1], self.a[i2] = self.a[i2], self.a[i1]
            self.left[i1], self.left[i2] = self.left[i2], self.left[i1]

    def row_addmul(self, dst, src, c):
        if not c:
            return
        for mat in (self.a, self.left):
            row, s = mat[dst], mat[src]
            for j, v in s.items():
                w = row.get(j, 0) + c * v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)

    def row_negate(self, i):
        self.a[i] = {j: -v for j, v in self.a[i].items()}
        self.left[i] = {j: -v for j, v in self.left[i].items()}

    def col_swap(self, j1, j2):
        if j1 == j2:
            return
        for mat in (self.a, self.right):
            for row in mat:
                v1, v2 = row.pop(j1, None), row.pop(j2, None)
                if v2 is not None:
                    row[j1] = v2
                if v1 is not None:
                    row[j2] = v1

    def col_addmul(self, dst, src, c):
        # col_dst += c * col_src, i.e. right-multiply by an elementary matrix;
        # the same elementary matrix multiplies the accumulated right transform.
        if not c:
            return
        for mat in (self.a, self.right):
            for row in mat:
                v = row.get(src)
                if v:
                    w = row.get(dst, 0) + c * v
                    if w:
                        row[dst] = w
                    else:
                        row.pop(dst, None)

    def matrices(self) -> Tuple[IntMatrix, IntMatrix]:
        lent = {(i, j): v for i, row in enumerate(self.left) for j, v in row.items()}
        rent = {(i, j): v for i, row in enumerate(self.right) for j, v in row.items()}
        return (IntMatrix(self.n, self.n, lent), IntMatrix(self.m, self.m, rent))


class SNFResult(Tuple[Tuple[int, ...], IntMatrix, IntMatrix]):
    """(invariant factors, left transform, right transform), with
    left @ M @ right = diag(factors)."""

    __slots__ = ()

    def __new__(cls, factors, left, right):
        return tuple.__new__(cls, (tuple(factors), left, right))

    @property
    def factors(self) -> Tuple[int, ...]:
        return self[0]

    @property
    def left(self) -> IntMatrix:
        return self[1]

    @property
    def right(self) -> IntMatrix:
        return self[2]


def _pick_pivot(w: _Worker, t: int) -> Optional[Tuple[int, int]]:
    best = None
    best_abs = None
    for i in range(t, w.n):
        for j in sorted(w.a[i]):
            if j < t:
                continue
            a = abs(w.a[i][j])
            if best_abs is None or a < best_abs:
                best, best_abs = (i, j), a
    return best


def _snf_int(M: IntMatrix) -> SNFResult:
    w = _Worker(M)
    t = 0
    limit = min(w.n, w.m)
    while t < limit:
        pos = _pick_pivot(w, t)
        if pos is None:
            break
        w.row_swap(t, pos[0])
        w.col_swap(t, pos[1])
        while True:
            if w.a[t].get(t, 0) < 0:
                w.row_negate(t)
            piv = w.a[t][t]
            # knock the rest of column t down by floor division
            col_left = False
            for i in range(w.n):
                if i == t:
                    continue
                v = w.a[i].get(t)
                if v:
                    w.row_addmul(i, t, -(v // piv))
                    if w.a[i].get(t):
                        col_left = True
            if col_left:
                # a nonzero remainder < pivot exists; make it the new pivot
                for i in range(w.n):
                    if i != t and w.a[i].get(t):
                        w.row_swap(t, i)
                        break
                continue
            row_left = False
            for j in list(w.a[t]):
                if j == t:
                    continue
                v = w.a[t][j]
                w.col_addmul(j, t, -(v // piv))
                if w.a[t].get(j):
                    row_left = True
            if row_left:
                for j in sorted(w.a[t]):
                    if j != t:
                        w.col_swap(t, j)
                        break
                continue
            # row and column are clear; enforce divisibility of the rest
            bad = None
            for i in range(t + 1, w.n):
                for j in sorted(w.a[i]):
                    if w.a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            w.row_addmul(t, bad, 1)
        t += 1
    factors = []
    for i in range(limit):
        v = w.a[i].get(i, 0)
        if v:
            factors.append(v)
    left, right = w.matrices()
    return SNFResult(factors, left, right)


def _inv_mod(v: int, p: int) -> int:
    return pow(v % p, p - 2, p)


def _snf_field(M: IntMatrix, p: int) -> SNFResult:
    w = _Worker(M)
    for row in w.a:
        for j in list(row):
            row[j] %= p
            if not row[j]:
                del row[j]
    t = 0
    limit = min(w.n, w.m)
    while t < limit:
        pos = None
        for i in range(t, w.n):
            for j in sorted(w.a[i]):
                if j >= t:
                    pos = (i, j)
                    break
            if pos:
                break
        if pos is None:
            break
        w.row_swap(t, pos[0])
        w.col_swap(t, pos[1])
        inv = _inv_mod(w.a[t][t], p)
        # scale row t so the pivot is 1 (invertible over F_p)
        w.a[t] = {j: (v * inv) % p for j, v in w.a[t].items()}
        w.left[t] = {j: (v * inv) % p for j, v in w.left[t].items()}
        for i in range(w.n):
            if i != t and w.a[i].get(t):
                w.row_addmul(i, t, -w.a[i][t])
        for j in list(w.a[t]):
            if j != t:
                w.col_addmul(j, t, -w.a[t][j])
        for mat in (w.a, w.left):
            for row in mat:
                for j in list(row):
                    row[j] %= p
                    if not row[j]:
                        del row[j]
        for row in w.right:
            for j in list(row):
                row[j] %= p
                if not row[j]:
                    del row[j]
        t += 1
    factors = [1] * sum(1 for i in range(limit) if w.a[i].get(i))
    left, right = w.matrices()
    return SNFResult(factors, left.mod(p), right.mod(p))


def snf(M: IntMatrix, p: int = 0) -> SNFResult:
    """Smith normal form with transforms: left @ M @ right = diag(factors).

    Over Z the factors form a positive divisibility chain and the transforms
    are unimodular.  Over F_p (``p`` prime) the factors are all 1 and the
    transforms are invertible mod p.  Pivoting picks the entry of minimal
    absolute value, first in row-major order, for determinism.
    """
    return _snf_int(M) if p == 0 else _snf_field(M, p)


def rank_and_kernel(M: IntMatrix, p: int = 0) -> Tuple[int, IntMatrix]:
    """Rank and a saturated integral (or F_p) kernel basis, as columns."""
    res = snf(M, p)
    rank = len(res.factors)
    kernel = res.right.submatrix_cols(range(rank, M.cols))
    return rank, kernel


def solve(M: IntMatrix, b: IntMatrix, p: int = 0) -> Optional[IntMatrix]:
    """One exact solution x of M @ x = b over Z or F_p, or None."""
    if b.rows != M.rows or b.cols != 1:
        raise DimensionMismatch("solve expects a column vector of matching height")
    res = snf(M, p)
    lb = res.left @ b
    if p:
        lb = lb.mod(p)
    y: Dict[Tuple[int, int], int] = {}
    rank = len(res.factors)
    for i in range(M.rows):
        v = lb[(i, 0)]
        if i < rank:
            d = res.factors[i]
            if p:
                y[(i, 0)] = (v * _inv_mod(d, p)) % p
            else:
                if v % d:
                    return None
                y[(i, 0)] = v // d
        elif v:
            return None
    x = res.right @ IntMatrix(M.cols, 1, {k: v for k, v in y.items() if k[0] < M.cols})
    return x.mod(p) if p else x


def _in_lattice(basis: IntMatrix, v: IntMatrix, p: int = 0) -> bool:
    return solve(basis, v, p) is not None


def lattice_contains(basis: IntMatrix, vectors: IntMatrix, p: int = 0) -> bool:
    """True iff every column of ``vectors`` lies in the span of ``basis``."""
    for j in range(vectors.cols):
        col = IntMatrix(vectors.rows, 1,
                        {(i, 0): vectors[(i, j)] for i in range(vectors.rows)})
        if not _in_lattice(basis, col, p):
            return False
    return True


def lattices_equal(a: IntMatrix, b: IntMatrix, p: int = 0) -> bool:
    return lattice_contains(a, b, p) and lattice_contains(b, a, p)


def homology_of_pair(d_in: IntMatrix, d_out: IntMatrix, p: int = 0) -> AbelianGroup:
    """ker(d_out) / im(d_in) where d_in maps into and d_out maps out of Z^n."""
    if d_out.cols != d_in.rows:
        raise DimensionMismatch(
            f"ambient mismatch: d_out has {d_out.cols} columns, d_in has {d_in.rows} rows")
    comp = (d_out @ d_in)
    if p:
        comp = comp.mod(p)
    if not comp.is_zero():
        raise CompositionNonzero("d_out . d_in != 0")
    return PresentedGroup.from_pair(d_in, d_out, p).group


def invert_unimodular(L: IntMatrix, p: int = 0) -> IntMatrix:
    """Exact inverse of an invertible (unimodular over Z) square matrix."""
    if L.rows != L.cols:
        raise DimensionMismatch("not square")
    res = snf(L, p)
    if len(res.factors) != L.rows or (p == 0 and any(d != 1 for d in res.factors)):
        raise ExactLinError("matrix is not invertible over the ring")
    inv = res.right @ res.left
    return inv.mod(p) if p else inv


class PresentedGroup:
    """A subquotient (lattice of cycles)/(lattice of boundaries) of Z^n or F_p^n.

    Carries canonical coordinates: first the torsion coordinates (moduli
    d_i >= 2 in chain order), then the free coordinates.  Used to present
    homology groups, express classes, and push classes through maps.
    """

    def __init__(self, cycles: IntMatrix, boundaries_in_cycle_coords: IntMatrix,
                 p: int = 0):
        self.p = p
        self.cycles = cycles                      # n x z, saturated basis
        self.rel = boundaries_in_cycle_coords     # z x b
        res = snf(self.rel, p)
        self.rel_left = res.left
        z = cycles.cols
        rank = len(res.factors)
        self.torsion_moduli: List[int] = []
        self.torsion_rows: List[int] = []
        for i, d in enumerate(res.factors):
            if p == 0 and d >= 2:
                self.torsion_moduli.append(d)
                self.torsion_rows.append(i)
        self.free_rows = list(range(rank, z))
        self.group = AbelianGroup(len(self.free_rows), self.torsion_moduli)
        self._left_inv: Optional[IntMatrix] = None

    @classmethod
    def from_pair(cls, d_in: IntMatrix, d_out: IntMatrix, p: int = 0) -> "PresentedGroup":
        _, cycles = rank_and_kernel(d_out, p)
        cols = []
        for j in range(d_in.cols):
            col = IntMatrix(d_in.rows, 1,
                            {(i, 0): d_in[(i, j)] for i in range(d_in.rows)})
            x = solve(cycles, col, p)
            if x is None:
                raise ExactLinError("boundary is not a cycle; composition nonzero?")
            cols.append(x)
        rel = (IntMatrix.hstack(cols) if cols
               else IntMatrix(cycles.cols, 0))
        return cls(cycles, rel, p)

    # -- coordinates -------------------------------------------------------

    def rank_coords(self) -> int:
        return len(self.torsion_rows) + len(self.free_rows)

    def coords_of(self, ambient_vector: IntMatrix) -> Optional[List[int]]:
        """Canonical coordinates of the class of a cycle, or None if the
        vector is not in the cycle lattice."""
        x = solve(self.cycles, ambient_vector, self.p)
        if x is None:
            return None
        y = self.rel_left @ x
        if self.p:
            y = y.mod(self.p)
        out = []
        for i, d in zip(self.torsion_rows, self.torsion_moduli):
            out.append(y[(i, 0)] % d)
        for i in self.free_rows:
            out.append(y[(i, 0)])
        return out

    def representative(self, k: int) -> IntMatrix:
        """An ambient cycle representing the k-th canonical generator."""
        if self._left_inv is None:
            self._left_inv = invert_unimodular(self.rel_left, self.p)
        rows = self.torsion_rows + self.free_rows
        e = IntMatrix(self.rel_left.rows, 1, {(rows[k], 0): 1})
        return self.cycles @ (self._left_inv @ e)

    def coords_are_zero(self, coords: Sequence[int]) -> bool:
        nt = len(self.torsion_moduli)
        for c, d in zip(coords[:nt], self.torsion_moduli):
            if c % d:
                return False
        if self.p:
            return all(c % self.p == 0 for c in coords[nt:])
        return all(c == 0 for c in coords[nt:])

    def torsion_relation_columns(self) -> IntMatrix:
        """Columns m_t * e_t expressing the torsion relations in canonical
        coordinates (the free coordinates have no relations)."""
        a = self.rank_coords()
        ent = {}
        for t, d in enumerate(self.torsion_moduli):
            ent[(t, t)] = d
        return IntMatrix(a, len(self.torsion_moduli), ent)


def subgroup_membership(gens: IntMatrix, relations: IntMatrix, v: IntMatrix,
                        p: int = 0) -> bool:
    """Is v in the subgroup generated by ``gens`` columns, inside the group
    presented on these coordinates with ``relations`` columns?"""
    return solve(IntMatrix.hstack([gens, relations]), v, p) is not None


def subgroups_equal(gens_a: IntMatrix, gens_b: IntMatrix, relations: IntMatrix,
                    p: int = 0) -> bool:
    """Equality of subgroups of a presented group, by double inclusion."""
    ga = IntMatrix.hstack([gens_a, relations])
    gb = IntMatrix.hstack([gens_b, relations])
    for j in range(gens_a.cols):
        col = IntMatrix(gens_a.rows, 1,
                        {(i, 0): gens_a[(i, j)] for i in range(gens_a.rows)})
        if solve(gb, col, p) is None:
            return False
    for j in range(gens_b.cols):
        col = IntMatrix(gens_b.rows, 1,
                        {(i, 0): gens_b[(i, j)] for i in range(gens_b.rows)})
        if solve(ga, col, p) is None:
            return False
    return True


def kernel_of_presented_map(F: IntMatrix, target_relations: IntMatrix,
                            p: int = 0) -> IntMatrix:
    """Generators (columns) of ker(F: Z^a -> Z^b/relations) as a subgroup of
    the source coordinate space."""
    stacked = IntMatrix.hstack([F, target_relations])
    _, ker = rank_and_kernel(stacked, p)
    # project kernel columns onto the x-part (first F.cols coordinates)
    ent = {}
    for (i, j), v in ker.entries.items():
        if i < F.cols:
            ent[(i, j)] = v
    return IntMatrix(F.cols, ker.cols, ent)
