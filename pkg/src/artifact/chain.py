"""Graded chain complexes with circle actions.

Conventions used across the package:

- the differential has degree -1 and squares to zero;
- an optional endomorphism U of degree -2 commutes with the differential;
- an optional endomorphism Y of degree +1 anticommutes with the
  differential and squares to zero;
- the graded commutator is [A, B] = A.B - (-1)^{|A||B|} B.A;
- a chain map of degree r satisfies  f.d1 - (-1)^r d2.f = 0  (so odd maps
  anticommute with the differentials);
- a p-morphism is a chain map f together with a witness K of degree
  deg(f) - 1 such that  f.U1 - U2.f + (-1)^{deg f} K.d1 + d2.K = 0.

Coefficients are integers; complexes carry a ring parameter ``p`` (0 for Z,
a prime for F_p) and all verifications reduce modulo p when p > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .exactlin import (AbelianGroup, IntMatrix, PresentedGroup, TRIVIAL_GROUP,
                       CompositionNonzero, kernel_of_presented_map, snf, solve,
                       subgroups_equal)


class ChainError(Exception):
    pass


class NotAChainMap(ChainError):
    pass


class ModulusUnsupported(ChainError):
    pass


# ---------------------------------------------------------------------------
# Graded modules and maps
# ---------------------------------------------------------------------------

class GradedModule:
    """Finite list of named generators with integer degrees.

    ``modulus`` even and positive turns the grading into Z/modulus; degrees
    are then stored as representatives in [0, modulus).
    """

    __slots__ = ("generators", "modulus", "_index", "_by_degree")

    def __init__(self, generators: Iterable[Tuple[str, int]], modulus: int = 0):
        if modulus < 0 or modulus % 2:
            raise ChainError("modulus must be an even nonnegative integer")
        gens = []
        for name, deg in generators:
            if modulus:
                deg %= modulus
            gens.append((str(name), int(deg)))
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "modulus", modulus)
        index: Dict[str, int] = {}
        by_degree: Dict[int, List[str]] = {}
        for pos, (name, deg) in enumerate(self.generators):
            if name in index:
                raise ChainError(f"duplicate generator name {name!r}")
            index[name] = pos
            by_degree.setdefault(deg, []).append(name)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_by_degree", by_degree)

    def __setattr__(self, name, value):
        raise AttributeError("GradedModule is immutable")

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    def degree_of(self, name: str) -> int:
        return self.generators[self._index[name]][1]

    def gens_in_degree(self, j: int) -> List[str]:
        if self.modulus:
            j %= self.modulus
        return list(self._by_degree.get(j, ()))

    def degrees(self) -> List[int]:
        return sorted(self._by_degree)

    def reduce_degree(self, j: int) -> int:
        return j % self.modulus if self.modulus else j

    def support_window(self) -> Optional[Tuple[int, int]]:
        ds = self.degrees()
        return (ds[0], ds[-1]) if ds else None

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedModule)
                and self.generators == other.generators
                and self.modulus == other.modulus)

    def __repr__(self) -> str:
        return f"GradedModule({len(self.generators)} gens, modulus={self.modulus})"


class GradedMap:
    """Homogeneous linear map of fixed degree, stored generator-to-generator."""

    __slots__ = ("source", "target", "degree", "entries", "_by_src")

    def __init__(self, source: GradedModule, target: GradedModule, degree: int,
                 entries: Optional[Dict[Tuple[str, str], int]] = None):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "degree", degree)
        clean: Dict[Tuple[str, str], int] = {}
        by_src: Dict[str, Dict[str, int]] = {}
        if entries:
            for (s, t), v in entries.items():
                if not v:
                    continue
                if s not in source:
                    raise ChainError(f"unknown source generator {s!r}")
                if t not in target:
                    raise ChainError(f"unknown target generator {t!r}")
                want = source.degree_of(s) + degree
                if target.modulus:
                    want %= target.modulus
                if target.degree_of(t) != want:
                    raise ChainError(
                        f"entry {s!r}->{t!r} violates degree {degree} homogeneity")
                clean[(s, t)] = v
                by_src.setdefault(s, {})[t] = v
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "_by_src", by_src)

    def __setattr__(self, name, value):
        raise AttributeError("GradedMap is immutable")

    @classmethod
    def zero(cls, source: GradedModule, target: GradedModule, degree: int) -> "GradedMap":
        return cls(source, target, degree)

    @classmethod
    def identity(cls, module: GradedModule) -> "GradedMap":
        return cls(module, module, 0, {(n, n): 1 for n in module.names()})

    def is_zero(self) -> bool:
        return not self.entries

    def is_zero_mod(self, p: int) -> bool:
        if p == 0:
            return not self.entries
        return all(v % p == 0 for v in self.entries.values())

    def image_of(self, name: str) -> Dict[str, int]:
        return dict(self._by_src.get(name, ()))

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check_parallel(other)
        ent = dict(self.entries)
        for k, v in other.entries.items():
            w = ent.get(k, 0) + v
            if w:
                ent[k] = w
            else:
                ent.pop(k, None)
        return GradedMap(self.source, self.target, self.degree, ent)

    def __neg__(self) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree,
                         {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def scale(self, c: int) -> "GradedMap":
        if not c:
            return GradedMap(self.source, self.target, self.degree)
        return GradedMap(self.source, self.target, self.degree,
                         {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ChainError("composition source/target mismatch")
        ent: Dict[Tuple[str, str], int] = {}
        for (s, m), v in other.entries.items():
            row = self._by_src.get(m)
            if not row:
                continue
            for t, w in row.items():
                k = (s, t)
                acc = ent.get(k, 0) + v * w
                if acc:
                    ent[k] = acc
                else:
                    ent.pop(k, None)
        return GradedMap(other.source, self.target, self.degree + other.degree, ent)

    def _check_parallel(self, other: "GradedMap"):
        if (self.source != other.source or self.target != other.target
                or self.degree != other.degree):
            raise ChainError("maps are not parallel")

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedMap) and self.source == other.source
                and self.target == other.target and self.degree == other.degree
                and self.entries == other.entries)

    def __repr__(self) -> str:
        return (f"GradedMap(degree={self.degree}, {len(self.entries)} entries)")

    def block(self, j: int) -> IntMatrix:
        """Matrix of the degree-j piece: columns are source generators of
        degree j, rows are target generators of degree j + self.degree, both
        in module order."""
        src = self.source.gens_in_degree(j)
        tgt = self.target.gens_in_degree(j + self.degree)
        tpos = {n: i for i, n in enumerate(tgt)}
        ent = {}
        for c, s in enumerate(src):
            for t, v in self._by_src.get(s, {}).items():
                r = tpos.get(t)
                if r is not None:
                    ent[(r, c)] = v
        return IntMatrix(len(tgt), len(src), ent)

    def nonzero_witness(self, p: int = 0) -> Optional[Tuple[str, str]]:
        for (s, t), v in sorted(self.entries.items()):
            if p == 0 or v % p:
                return (s, t)
        return None


def commutator(f: GradedMap, g: GradedMap) -> GradedMap:
    """Graded commutator [f, g] = f.g - (-1)^{|f||g|} g.f."""
    sign = -1 if (f.degree % 2) and (g.degree % 2) else 1
    return (f @ g) - (g @ f).scale(sign)


def is_chain_map(f: GradedMap, source: "ChainComplex", target: "ChainComplex") -> bool:
    """f.d1 - (-1)^{deg f} d2.f = 0 (mod the ring of the complexes)."""
    sign = -1 if f.degree % 2 else 1
    defect = (f @ source.d) - (target.d @ f).scale(sign)
    return defect.is_zero_mod(source.p)


# ---------------------------------------------------------------------------
# Chain complexes
# ---------------------------------------------------------------------------

class ChainComplex:
    """A graded module with a square-zero degree -1 differential, optional
    circle actions U (degree -2) and Y (degree +1), over Z (p=0) or F_p."""

    __slots__ = ("module", "d", "u_action", "y_action", "p")

    def __init__(self, module: GradedModule, d: GradedMap,
                 u_action: Optional[GradedMap] = None,
                 y_action: Optional[GradedMap] = None, p: int = 0):
        if d.source != module or d.target != module or d.degree != -1:
            raise ChainError("differential must be a degree -1 endomorphism")
        if u_action is not None and (u_action.source != module
                                     or u_action.target != module
                                     or u_action.degree != -2):
            raise ChainError("U must be a degree -2 endomorphism")
        if y_action is not None and (y_action.source != module
                                     or y_action.target != module
                                     or y_action.degree != 1):
            raise ChainError("Y must be a degree +1 endomorphism")
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "u_action", u_action)
        object.__setattr__(self, "y_action", y_action)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("ChainComplex is immutable")

    def with_actions(self, u_action: Optional[GradedMap] = None,
                     y_action: Optional[GradedMap] = None) -> "ChainComplex":
        return ChainComplex(self.module, self.d,
                            u_action if u_action is not None else self.u_action,
                            y_action if y_action is not None else self.y_action,
                            self.p)

    def degrees(self) -> List[int]:
        return self.module.degrees()

    def __repr__(self) -> str:
        extras = "".join([", U" if self.u_action is not None else "",
                          ", Y" if self.y_action is not None else ""])
        ring = "Z" if self.p == 0 else f"F{self.p}"
        return f"ChainComplex({len(self.module)} gens over {ring}{extras})"


@dataclass(frozen=True)
class LawCheck:
    law: str
    passed: bool
    witness: Optional[Tuple[str, str]] = None


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[LawCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> List[LawCheck]:
        return [c for c in self.checks if not c.passed]


def validate(C: ChainComplex) -> ValidationReport:
    """Check d^2 = 0, [d,U] = 0, dY + Yd = 0, Y^2 = 0, and degree
    homogeneity; failures carry a witnessing generator pair."""
    checks: List[LawCheck] = []
    # degree homogeneity is enforced when maps are built, so it can only pass
    checks.append(LawCheck("degree-homogeneity", True))
    dd = C.d @ C.d
    w = dd.nonzero_witness(C.p)
    checks.append(LawCheck("d.d=0", w is None, w))
    if C.u_action is not None:
        w = commutator(C.d, C.u_action).nonzero_witness(C.p)
        checks.append(LawCheck("[d,U]=0", w is None, w))
    if C.y_action is not None:
        w = commutator(C.d, C.y_action).nonzero_witness(C.p)
        checks.append(LawCheck("dY+Yd=0", w is None, w))
        w = (C.y_action @ C.y_action).nonzero_witness(C.p)
        checks.append(LawCheck("Y.Y=0", w is None, w))
    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

class HomologyTable:
    """Map degree -> AbelianGroup; degrees outside the support are trivial."""

    __slots__ = ("table",)

    def __init__(self, table: Dict[int, AbelianGroup]):
        object.__setattr__(self, "table",
                           {j: g for j, g in table.items() if not g.is_trivial()})

    def __setattr__(self, name, value):
        raise AttributeError("HomologyTable is immutable")

    def __getitem__(self, j: int) -> AbelianGroup:
        return self.table.get(j, TRIVIAL_GROUP)

    def degrees(self) -> List[int]:
        return sorted(self.table)

    def is_trivial(self) -> bool:
        return not self.table

    def shifted(self, s: int) -> "HomologyTable":
        """Table T with T[j] = self[j - s] (content moved up by s)."""
        return HomologyTable({j + s: g for j, g in self.table.items()})

    def restricted(self, window: Tuple[int, int]) -> "HomologyTable":
        lo, hi = window
        return HomologyTable({j: g for j, g in self.table.items() if lo <= j <= hi})

    def equal_on(self, other: "HomologyTable", window: Tuple[int, int]) -> bool:
        lo, hi = window
        return all(self[j] == other[j] for j in range(lo, hi + 1))

    def __eq__(self, other) -> bool:
        return isinstance(other, HomologyTable) and self.table == other.table

    def __repr__(self) -> str:
        inner = ", ".join(f"{j}: {self.table[j]}" for j in self.degrees())
        return f"HomologyTable({{{inner}}})"


def present_homology(C: ChainComplex, window: Optional[Tuple[int, int]] = None
                     ) -> Dict[int, PresentedGroup]:
    """PresentedGroup for each degree (in the window, or the full support
    extended one step so trivial edges are visible)."""
    if window is None:
        sw = C.module.support_window()
        if sw is None:
            return {}
        window = sw
    lo, hi = window
    if C.module.modulus:
        degs = sorted({C.module.reduce_degree(j) for j in range(lo, hi + 1)})
    else:
        degs = list(range(lo, hi + 1))
    out = {}
    for j in degs:
        d_out = C.d.block(j)
        d_in = C.d.block(j + 1)
        out[j] = PresentedGroup.from_pair(d_in, d_out, C.p)
    return out


def homology(C: ChainComplex, window: Optional[Tuple[int, int]] = None) -> HomologyTable:
    """Degreewise homology via exact kernels and images."""
    rep = validate(C)
    if not rep.ok:
        bad = rep.failing()[0]
        raise ChainError(f"complex fails law {bad.law} at {bad.witness}")
    pres = present_homology(C, window)
    return HomologyTable({j: pg.group for j, pg in pres.items()})


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def cone(f: GradedMap, A: ChainComplex, B: ChainComplex,
         tags: Tuple[str, str] = ("A", "B")) -> ChainComplex:
    """Mapping cone of an anticommuting degree -1 chain map f: A -> B.

    Generators of A keep their degrees and are prefixed ``tags[0].``; same
    for B with ``tags[1].``; the differential is [[d_A, 0], [f, d_B]].
    """
    if f.source != A.module or f.target != B.module or f.degree != -1:
        raise NotAChainMap("cone expects a degree -1 map from A to B")
    if A.p != B.p:
        raise ChainError("ring mismatch")
    defect = (f @ A.d) + (B.d @ f)
    if not defect.is_zero_mod(A.p):
        raise NotAChainMap("map does not anticommute with the differentials")
    ta, tb = tags
    gens = [(f"{ta}.{n}", d) for n, d in A.module.generators]
    gens += [(f"{tb}.{n}", d) for n, d in B.module.generators]
    module = GradedModule(gens, A.module.modulus)
    ent: Dict[Tuple[str, str], int] = {}
    for (s, t), v in A.d.entries.items():
        ent[(f"{ta}.{s}", f"{ta}.{t}")] = v
    for (s, t), v in B.d.entries.items():
        ent[(f"{tb}.{s}", f"{tb}.{t}")] = v
    for (s, t), v in f.entries.items():
        ent[(f"{ta}.{s}", f"{tb}.{t}")] = v
    return ChainComplex(module, GradedMap(module, module, -1, ent), p=A.p)


def cone_inclusion(E: ChainComplex, B: ChainComplex, tag: str = "B") -> GradedMap:
    """The degreewise-split inclusion B -> cone."""
    return GradedMap(B.module, E.module, 0,
                     {(n, f"{tag}.{n}"): 1 for n in B.module.names()})


def cone_projection(E: ChainComplex, A: ChainComplex, tag: str = "A") -> GradedMap:
    """The degreewise-split projection cone -> A."""
    return GradedMap(E.module, A.module, 0,
                     {(f"{tag}.{n}", n): 1 for n in A.module.names()})


@dataclass(frozen=True)
class TensorResult:
    """Product complex with the raw factor actions exposed.

    ``u1``/``u2``/``y1``/``y2`` are U1x1, 1xU2, Y1x1, 1xY2 on the product
    module (None when the factor lacks the action); odd maps applied through
    the first factor carry the Koszul sign.
    """
    complex: ChainComplex
    u1: Optional[GradedMap]
    u2: Optional[GradedMap]
    y1: Optional[GradedMap]
    y2: Optional[GradedMap]


def tensor_name(a: str, b: str) -> str:
    return f"{a}|{b}"


def tensor(C1: ChainComplex, C2: ChainComplex) -> TensorResult:
    """Product complex with differential d1 x 1 + (-1)^{deg of first} 1 x d2."""
    if C1.module.modulus or C2.module.modulus:
        raise ModulusUnsupported("tensor products need genuine Z-gradings")
    if C1.p != C2.p:
        raise ChainError("ring mismatch")
    gens = [(tensor_name(a, b), da + db)
            for a, da in C1.module.generators
            for b, db in C2.module.generators]
    module = GradedModule(gens)

    def left_map(f: GradedMap, degree: int) -> GradedMap:
        ent = {}
        for (s, t), v in f.entries.items():
            for b, _db in C2.module.generators:
                ent[(tensor_name(s, b), tensor_name(t, b))] = v
        return GradedMap(module, module, degree, ent)

    def right_map(f: GradedMap, degree: int, signed: bool) -> GradedMap:
        ent = {}
        for a, da in C1.module.generators:
            sign = -1 if (signed and da % 2) else 1
            for (s, t), v in f.entries.items():
                ent[(tensor_name(a, s), tensor_name(a, t))] = sign * v
        return GradedMap(module, module, degree, ent)

    d = left_map(C1.d, -1) + right_map(C2.d, -1, signed=True)
    u1 = left_map(C1.u_action, -2) if C1.u_action is not None else None
    u2 = right_map(C2.u_action, -2, signed=False) if C2.u_action is not None else None
    y1 = left_map(C1.y_action, 1) if C1.y_action is not None else None
    y2 = right_map(C2.y_action, 1, signed=True) if C2.y_action is not None else None
    return TensorResult(ChainComplex(module, d, p=C1.p), u1, u2, y1, y2)


# ---------------------------------------------------------------------------
# Chain maps up to homotopy; p-morphisms
# ---------------------------------------------------------------------------

def verify_homotopy(f: GradedMap, g: GradedMap, K: GradedMap,
                    source: ChainComplex, target: ChainComplex) -> bool:
    """True iff f - g = d.K + (-1)^{deg f} K.d entry-exactly (mod p)."""
    if f.degree != g.degree:
        raise ChainError("f and g must have the same degree")
    if K.degree != f.degree + 1:
        raise ChainError("homotopy must have degree deg(f)+1")
    sign = -1 if f.degree % 2 else 1
    defect = (f - g) - (target.d @ K) - (K @ source.d).scale(sign)
    return defect.is_zero_mod(source.p)


class PMorphism:
    """A chain map together with its U-commutation witness.

    Invariants: phi.d1 - (-1)^{deg phi} d2.phi = 0 and
    phi.U1 - U2.phi + (-1)^{deg phi} k_phi.d1 + d2.k_phi = 0.
    """

    __slots__ = ("source", "target", "phi", "k_phi")

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 phi: GradedMap, k_phi: GradedMap):
        if k_phi.degree != phi.degree - 1:
            raise ChainError("k_phi must have degree deg(phi) - 1")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "k_phi", k_phi)

    def __setattr__(self, name, value):
        raise AttributeError("PMorphism is immutable")

    @classmethod
    def strict(cls, source: ChainComplex, target: ChainComplex,
               phi: GradedMap) -> "PMorphism":
        return cls(source, target, phi,
                   GradedMap.zero(phi.source, phi.target, phi.degree - 1))

    @classmethod
    def identity(cls, C: ChainComplex) -> "PMorphism":
        return cls.strict(C, C, GradedMap.identity(C.module))

    def chain_map_defect(self) -> GradedMap:
        sign = -1 if self.phi.degree % 2 else 1
        return (self.phi @ self.source.d) - (self.target.d @ self.phi).scale(sign)

    def u_defect(self) -> GradedMap:
        if self.source.u_action is None or self.target.u_action is None:
            raise ChainError("both complexes need U-actions")
        sign = -1 if self.phi.degree % 2 else 1
        return ((self.phi @ self.source.u_action)
                - (self.target.u_action @ self.phi)
                + (self.k_phi @ self.source.d).scale(sign)
                + (self.target.d @ self.k_phi))

    def verify(self) -> bool:
        p = self.source.p
        return (self.chain_map_defect().is_zero_mod(p)
                and self.u_defect().is_zero_mod(p))

    def compose(self, other: "PMorphism") -> "PMorphism":
        """self after other, with the standard witness composition
        K = K_self . phi_other + (-1)^{deg self} phi_self . K_other."""
        sign = -1 if self.phi.degree % 2 else 1
        k = (self.k_phi @ other.phi) + (self.phi @ other.k_phi).scale(sign)
        return PMorphism(other.source, self.target, self.phi @ other.phi, k)


# ---------------------------------------------------------------------------
# Induced maps on homology and exactness certificates
# ---------------------------------------------------------------------------

def _class_matrix(f: GradedMap, src: PresentedGroup, tgt: PresentedGroup,
                  j: int, p: int) -> IntMatrix:
    """Matrix of the induced map in canonical coordinates at source degree j."""
    src_names = f.source.gens_in_degree(j)
    tgt_names = f.target.gens_in_degree(j + f.degree)
    tpos = {n: i for i, n in enumerate(tgt_names)}
    cols = []
    for k in range(src.rank_coords()):
        rep = src.representative(k)
        out: Dict[Tuple[int, int], int] = {}
        for r, name in enumerate(src_names):
            c = rep[(r, 0)]
            if not c:
                continue
            for t, v in f.image_of(name).items():
                i = tpos.get(t)
                if i is not None:
                    out[(i, 0)] = out.get((i, 0), 0) + c * v
        vec = IntMatrix(len(tgt_names), 1, out)
        coords = tgt.coords_of(vec)
        if coords is None:
            raise NotAChainMap("image of a cycle is not a cycle")
        cols.append(IntMatrix.column(coords))
    return (IntMatrix.hstack(cols) if cols
            else IntMatrix(tgt.rank_coords(), 0))


@dataclass(frozen=True)
class DegreeMapInfo:
    source_group: AbelianGroup
    target_group: AbelianGroup
    matrix: IntMatrix          # canonical coords of target x canonical of source
    injective: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


@dataclass(frozen=True)
class InducedMap:
    degree: int
    by_degree: Dict[int, DegreeMapInfo] = field(default_factory=dict)

    def info(self, j: int) -> Optional[DegreeMapInfo]:
        return self.by_degree.get(j)

    def iso_on(self, window: Tuple[int, int]) -> bool:
        lo, hi = window
        for j in range(lo, hi + 1):
            inf = self.by_degree.get(j)
            if inf is None:
                continue
            if not inf.isomorphism:
                return False
        return True


def _flags(F: IntMatrix, src: PresentedGroup, tgt: PresentedGroup,
           p: int) -> Tuple[bool, bool]:
    t_tgt = tgt.torsion_relation_columns()
    # surjective: columns of F plus torsion relations generate the target
    res = snf(IntMatrix.hstack([F, t_tgt]), p)
    full = len(res.factors) == tgt.rank_coords()
    surj = full and (p != 0 or all(d == 1 for d in res.factors))
    # injective: preimage of the relation lattice lies in the source relations
    ker = kernel_of_presented_map(F, t_tgt, p)
    inj = True
    for c in range(ker.cols):
        coords = [ker[(i, c)] for i in range(ker.rows)]
        if not src.coords_are_zero(coords):
            inj = False
            break
    return inj, surj


def induced_on_homology(f: GradedMap, source: ChainComplex, target: ChainComplex,
                        window: Optional[Tuple[int, int]] = None) -> InducedMap:
    """Lift classes to cycles, push forward, re-express in the target
    presentation; flags injective/surjective/iso per degree."""
    if not is_chain_map(f, source, target):
        raise NotAChainMap("induced_on_homology needs a chain map")
    if window is None:
        sw = source.module.support_window()
        if sw is None:
            return InducedMap(f.degree, {})
        window = sw
    src_pres = present_homology(source, window)
    tgt_pres = present_homology(target, (window[0] + f.degree, window[1] + f.degree))
    out = {}
    p = source.p
    for j, spg in src_pres.items():
        tpg = tgt_pres.get(j + f.degree)
        if tpg is None:
            d_out = target.d.block(j + f.degree)
            d_in = target.d.block(j + f.degree + 1)
            tpg = PresentedGroup.from_pair(d_in, d_out, p)
        F = _class_matrix(f, spg, tpg, j, p)
        inj, surj = _flags(F, spg, tpg, p)
        out[j] = DegreeMapInfo(spg.group, tpg.group, F, inj, surj)
    return InducedMap(f.degree, out)


class _HomologyArrow:
    """A map of homology presentations given by a chain-level evaluator.

    ``evaluate`` takes (degree j, ambient cycle column in that degree of the
    source) and returns an ambient column in degree j + degree of the target.
    This covers both honest chain maps and snake-lemma connecting maps.
    """

    def __init__(self, source: ChainComplex, target: ChainComplex, degree: int,
                 evaluate: Callable[[int, IntMatrix], IntMatrix]):
        self.source = source
        self.target = target
        self.degree = degree
        self.evaluate = evaluate

    @classmethod
    def from_map(cls, f: GradedMap, source: ChainComplex,
                 target: ChainComplex) -> "_HomologyArrow":
        def ev(j: int, vec: IntMatrix) -> IntMatrix:
            src_names = f.source.gens_in_degree(j)
            tgt_names = f.target.gens_in_degree(j + f.degree)
            tpos = {n: i for i, n in enumerate(tgt_names)}
            out: Dict[Tuple[int, int], int] = {}
            for r, name in enumerate(src_names):
                c = vec[(r, 0)]
                if not c:
                    continue
                for t, v in f.image_of(name).items():
                    i = tpos.get(t)
                    if i is not None:
                        out[(i, 0)] = out.get((i, 0), 0) + c * v
            return IntMatrix(len(tgt_names), 1, out)
        return cls(source, target, f.degree, ev)

    def class_matrix(self, j: int, src_pg: PresentedGroup,
                     tgt_pg: PresentedGroup) -> IntMatrix:
        cols = []
        for k in range(src_pg.rank_coords()):
            rep = src_pg.representative(k)
            img = self.evaluate(j, rep)
            coords = tgt_pg.coords_of(img)
            if coords is None:
                raise ChainError("image of a cycle is not a cycle")
            cols.append(IntMatrix.column(coords))
        return (IntMatrix.hstack(cols) if cols
                else IntMatrix(tgt_pg.rank_coords(), 0))


def _presentation(C: ChainComplex, j: int,
                  cache: Dict[Tuple[int, int], PresentedGroup]) -> PresentedGroup:
    key = (id(C), j)
    pg = cache.get(key)
    if pg is None:
        pg = PresentedGroup.from_pair(C.d.block(j + 1), C.d.block(j), C.p)
        cache[key] = pg
    return pg


def exactness_pair(incoming: _HomologyArrow, outgoing: _HomologyArrow, j: int,
                   cache: Dict[Tuple[int, int], PresentedGroup]
                   ) -> Tuple[bool, bool]:
    """(image contained in kernel, image equals kernel) at degree j of the
    middle complex; incoming lands in degree j, outgoing leaves from it."""
    p = incoming.target.p
    mid = _presentation(incoming.target, j, cache)
    src = _presentation(incoming.source, j - incoming.degree, cache)
    tgt = _presentation(outgoing.target, j + outgoing.degree, cache)
    F = incoming.class_matrix(j - incoming.degree, src, mid)
    G = outgoing.class_matrix(j, mid, tgt)
    t_mid = mid.torsion_relation_columns()
    t_tgt = tgt.torsion_relation_columns()
    kernel_gens = IntMatrix.hstack(
        [kernel_of_presented_map(G, t_tgt, p), t_mid])
    contained = True
    for c in range(F.cols):
        col = IntMatrix(F.rows, 1, {(i, 0): F[(i, c)] for i in range(F.rows)})
        if solve(kernel_gens, col, p) is None:
            contained = False
            break
    equal = contained and subgroups_equal(
        IntMatrix.hstack([F, t_mid]), kernel_gens, t_mid, p)
    return contained, equal


def verify_exact_at(complexes: Sequence[ChainComplex], maps: Sequence[GradedMap],
                    position: int, window: Tuple[int, int]) -> bool:
    """Homology-level exactness at ``complexes[position]`` for each degree in
    the window; ``maps[i]`` goes from complexes[i] to complexes[i+1].

    Raises CompositionNonzero when the image fails to land inside the kernel
    (the "composes to zero on homology" precondition).
    """
    if not (0 < position < len(complexes) - 1):
        raise ChainError("position must be interior to the sequence")
    if len(maps) != len(complexes) - 1:
        raise ChainError("need exactly one map per adjacent pair")
    fin = maps[position - 1]
    fout = maps[position]
    for f, s, t in ((fin, complexes[position - 1], complexes[position]),
                    (fout, complexes[position], complexes[position + 1])):
        if not is_chain_map(f, s, t):
            raise NotAChainMap("verify_exact_at expects chain maps")
    incoming = _HomologyArrow.from_map(fin, complexes[position - 1], complexes[position])
    outgoing = _HomologyArrow.from_map(fout, complexes[position], complexes[position + 1])
    cache: Dict[Tuple[int, int], PresentedGroup] = {}
    lo, hi = window
    for j in range(lo, hi + 1):
        contained, equal = exactness_pair(incoming, outgoing, j, cache)
        if not contained:
            raise CompositionNonzero(
                f"composite is nonzero on homology at degree {j}")
        if not equal:
            return False
    return True


def direct_sum(A: ChainComplex, B: ChainComplex,
               tags: Tuple[str, str] = ("A", "B")) -> ChainComplex:
    return cone(GradedMap.zero(A.module, B.module, -1), A, B, tags)
