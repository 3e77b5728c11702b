"""Circle-action functors between U-module and Y-module chain complexes.

``s_u`` doubles a complex carrying a degree -2 U-action into one carrying a
degree +1 square-zero Y-action; ``e_y`` goes back by tensoring with one of
four standard u-power ranges (minus: n >= 1, infinity: all n, plus: n <= 0,
hat: n = 0 only), sliced to a degree window using deg(g.u{n}) = deg(g) - 2n
so every slice is finite.  Both directions of the duality are checked by
brute-force homology comparison up to a uniform degree shift.

Conventions match chain.py: differentials have degree -1; a degree-d chain
map satisfies f.d - (-1)^d d.f = 0.  On a doubled complex the blocks over
(g, g.y) are [[d, 0], [U, -d]], the Y-action is g -> g.y, and a p-morphism
(phi, K) becomes [[phi, 0], [K, (-1)^{deg phi} phi]].

Window-safe degrees: j is safe when every generator the *untruncated*
flavor complex would have in degrees {j-1, j, j+1} is retained by the
slice.  Truncation is by generator deletion, so artifacts are confined to
unsafe degrees and all assertions are made at safe ones.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .chain import (
    ChainComplex,
    ChainError,
    GradedMap,
    GradedModule,
    HomologyTable,
    ModulusUnsupported,
    PMorphism,
    _HomologyArrow,
    exactness_pair,
    homology,
    induced_on_homology,
    is_chain_map,
    validate,
)
from .exactlin import AbelianGroup, PresentedGroup, lattices_equal, rank_and_kernel


class MissingUAction(ChainError):
    pass


class MissingYAction(ChainError):
    pass


class NotAPMorphism(ChainError):
    pass


# ---------------------------------------------------------------------------
# Flavors and windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Flavor:
    """One of the four u-power ranges: minus (n >= 1), infinity (all n),
    plus (n <= 0, residues mod the positive powers), hat (n = 0 only)."""

    tag: str

    def __post_init__(self):
        if self.tag not in ("minus", "infinity", "plus", "hat"):
            raise ChainError(f"unknown flavor {self.tag!r}")

    def valid_exponent(self, n: int) -> bool:
        if self.tag == "minus":
            return n >= 1
        if self.tag == "plus":
            return n <= 0
        if self.tag == "hat":
            return n == 0
        return True

    def occupies_degree(self, gen_degrees: Sequence[int], t: int) -> bool:
        """Would the untruncated flavor complex have a generator at degree t?"""
        for dg in gen_degrees:
            if (dg - t) % 2:
                continue
            n = (dg - t) // 2
            if self.valid_exponent(n):
                return True
        return False

    def __str__(self) -> str:
        return self.tag


MINUS = Flavor("minus")
INFINITY = Flavor("infinity")
PLUS = Flavor("plus")
HAT = Flavor("hat")
ALL_FLAVORS = (MINUS, INFINITY, PLUS, HAT)


class Window(Tuple[int, int]):
    """Inclusive degree bounds used to slice infinite-rank flavor complexes."""

    def __new__(cls, lo: int, hi: int):
        if lo > hi:
            raise ChainError(f"window {lo}..{hi} is empty")
        return super().__new__(cls, (lo, hi))

    @property
    def lo(self) -> int:
        return self[0]

    @property
    def hi(self) -> int:
        return self[1]

    @classmethod
    def default_for(cls, C: ChainComplex, margin: int = 2) -> "Window":
        sw = C.module.support_window()
        if sw is None:
            return cls(-margin, margin)
        return cls(sw[0] - margin, sw[1] + margin)


def _resolve_window(C: ChainComplex, window) -> Window:
    if window is None:
        return Window.default_for(C)
    if isinstance(window, Window):
        return window
    lo, hi = window
    return Window(lo, hi)


def safe_degrees(C: ChainComplex, flavor: Flavor, window) -> List[int]:
    """Degrees of e_y(C, flavor, window) untouched by the slicing."""
    win = _resolve_window(C, window)
    degs = [d for _, d in C.module.generators]
    out = []
    for j in range(win.lo, win.hi + 1):
        ok = True
        for t in (j - 1, j, j + 1):
            if flavor.occupies_degree(degs, t) and not (win.lo <= t <= win.hi):
                ok = False
                break
        if ok:
            out.append(j)
    return out


# ---------------------------------------------------------------------------
# S_U: from U-modules to Y-modules
# ---------------------------------------------------------------------------

def s_u(C: ChainComplex) -> ChainComplex:
    """Double C along a polynomial variable y: generators g and g.y with
    differential blocks [[d, 0], [U, -d]] and Y = multiplication by y."""
    if C.module.modulus:
        raise ModulusUnsupported("s_u needs a genuine Z-grading")
    if C.u_action is None:
        raise MissingUAction("s_u needs a U-action")
    gens = []
    for g, dg in C.module.generators:
        gens.append((g, dg))
    for g, dg in C.module.generators:
        gens.append((f"{g}.y", dg + 1))
    module = GradedModule(gens)
    ent: Dict[Tuple[str, str], int] = {}
    for (s, t), v in C.d.entries.items():
        ent[(s, t)] = v
        ent[(f"{s}.y", f"{t}.y")] = -v
    for (s, t), v in C.u_action.entries.items():
        ent[(s, f"{t}.y")] = ent.get((s, f"{t}.y"), 0) + v
    d = GradedMap(module, module, -1, ent)
    y = GradedMap(module, module, 1, {(g, f"{g}.y"): 1 for g in C.module.names()})
    out = ChainComplex(module, d, y_action=y, p=C.p)
    rep = validate(out)
    if not rep.ok:
        bad = rep.failing()[0]
        raise ChainError(f"s_u output fails {bad.law} at {bad.witness}")
    return out


def s_u_map(P: PMorphism) -> GradedMap:
    """The doubled map [[phi, 0], [K, (-1)^{deg phi} phi]] between s_u
    complexes; a chain map commuting with the Y-actions."""
    if not P.verify():
        raise NotAPMorphism("s_u_map needs a verified p-morphism")
    src = s_u(P.source)
    tgt = s_u(P.target)
    sign = -1 if P.phi.degree % 2 else 1
    ent: Dict[Tuple[str, str], int] = {}
    for (s, t), v in P.phi.entries.items():
        ent[(s, t)] = v
        ent[(f"{s}.y", f"{t}.y")] = sign * v
    for (s, t), v in P.k_phi.entries.items():
        ent[(s, f"{t}.y")] = ent.get((s, f"{t}.y"), 0) + v
    return GradedMap(src.module, tgt.module, P.phi.degree, ent)


# ---------------------------------------------------------------------------
# E_Y in the four flavors
# ---------------------------------------------------------------------------

def _u_name(g: str, n: int) -> str:
    return f"{g}.u{n}"


def _exponents_for(dg: int, flavor: Flavor, win: Window) -> List[int]:
    # lo <= dg - 2n <= hi  <=>  ceil((dg - hi)/2) <= n <= floor((dg - lo)/2)
    lo_n = -((win.hi - dg) // 2)
    hi_n = (dg - win.lo) // 2
    return [n for n in range(lo_n, hi_n + 1) if flavor.valid_exponent(n)]


def e_y(C: ChainComplex, flavor: Flavor, window=None) -> ChainComplex:
    """Flavor complex on generators g.u{n}, differential d + Y.u (the
    u-multiplication truncates out of the exponent range), u-action =
    exponent shift exposed as the output's U."""
    if C.module.modulus:
        raise ModulusUnsupported("e_y needs a genuine Z-grading")
    if C.y_action is None:
        raise MissingYAction("e_y needs a Y-action")
    win = _resolve_window(C, window)
    gens = []
    kept: Set[str] = set()
    for g, dg in C.module.generators:
        for n in _exponents_for(dg, flavor, win):
            name = _u_name(g, n)
            gens.append((name, dg - 2 * n))
            kept.add(name)
    module = GradedModule(gens)
    ent: Dict[Tuple[str, str], int] = {}

    def put(sname, tname, v):
        if sname in kept and tname in kept and v:
            ent[(sname, tname)] = ent.get((sname, tname), 0) + v

    for g, dg in C.module.generators:
        for n in _exponents_for(dg, flavor, win):
            for t, v in C.d.image_of(g).items():
                put(_u_name(g, n), _u_name(t, n), v)
            if flavor.valid_exponent(n + 1):
                for t, v in C.y_action.image_of(g).items():
                    put(_u_name(g, n), _u_name(t, n + 1), v)
    d = GradedMap(module, module, -1, {k: v for k, v in ent.items() if v})
    uent = {}
    for g, dg in C.module.generators:
        for n in _exponents_for(dg, flavor, win):
            if flavor.valid_exponent(n + 1) and _u_name(g, n + 1) in kept:
                uent[(_u_name(g, n), _u_name(g, n + 1))] = 1
    u = GradedMap(module, module, -2, uent)
    return ChainComplex(module, d, u_action=u, p=C.p)


def e_y_map(f: GradedMap, source: ChainComplex, target: ChainComplex,
            flavor: Flavor, window=None) -> GradedMap:
    """f tensored with the identity of the u-range: g.u{n} -> f(g).u{n} on
    the window slices.  f must be a chain map commuting with Y up to the
    usual degree sign."""
    if not is_chain_map(f, source, target):
        raise ChainError("e_y_map needs a chain map")
    sign = -1 if f.degree % 2 else 1
    ynat = (f @ source.y_action) - (target.y_action @ f).scale(sign)
    if not ynat.is_zero_mod(source.p):
        raise ChainError("e_y_map needs Y-equivariance")
    src = e_y(source, flavor, window)
    tgt = e_y(target, flavor, window)
    tnames = set(tgt.module.names())
    ent = {}
    for sname, sdeg in src.module.generators:
        g, un = sname.rsplit(".u", 1)
        n = int(un)
        for t, v in f.image_of(g).items():
            tname = _u_name(t, n)
            if tname in tnames:
                ent[(sname, tname)] = v
    return GradedMap(src.module, tgt.module, f.degree, ent)


# ---------------------------------------------------------------------------
# Fundamental sequences and their long exact sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShortExactSequence:
    tag: str
    left: ChainComplex
    middle: ChainComplex
    right: ChainComplex
    inject: GradedMap
    project: GradedMap
    checked_degrees: Tuple[int, ...]
    exact: bool


@dataclass(frozen=True)
class LESNode:
    location: str
    degree: int
    contained: bool
    equal: bool


@dataclass(frozen=True)
class LESCertificate:
    tag: str
    nodes: Tuple[LESNode, ...]

    @property
    def ok(self) -> bool:
        return all(n.contained and n.equal for n in self.nodes)

    def failures(self) -> List[LESNode]:
        return [n for n in self.nodes if not (n.contained and n.equal)]


@dataclass(frozen=True)
class FundamentalSequences:
    window: Window
    complexes: Dict[str, ChainComplex]
    seq1: ShortExactSequence
    seq2: ShortExactSequence
    les1: LESCertificate
    les2: LESCertificate
    delta1: _HomologyArrow = None  # plus -> minus, degree -1
    delta2: _HomologyArrow = None  # hat -> minus, degree -1

    @property
    def ok(self) -> bool:
        return self.seq1.exact and self.seq2.exact and self.les1.ok and self.les2.ok


def _identity_entries(src: ChainComplex, tgt: ChainComplex) -> Dict[Tuple[str, str], int]:
    tnames = set(tgt.module.names())
    return {(n, n): 1 for n in src.module.names() if n in tnames}


def _ses_exact_at(inject: GradedMap, project: GradedMap, mid_degree: int,
                  p: int) -> bool:
    """Module-level exactness of 0 -> A -> B -> C -> 0 at middle degree."""
    bi = inject.block(mid_degree - inject.degree)
    bp = project.block(mid_degree)
    comp = (bp @ bi).mod(p) if p else (bp @ bi)
    if not comp.is_zero():
        return False
    ri, _ = rank_and_kernel(bi, p)
    if ri != bi.cols:           # injective
        return False
    rp, kp = rank_and_kernel(bp, p)
    if rp != bp.rows:           # surjective
        return False
    return lattices_equal(bi, kp, p)


def fundamental_sequences(C: ChainComplex, window=None) -> FundamentalSequences:
    """The two short exact sequences of flavor complexes (minus into
    infinity onto plus; minus into minus by u onto hat) with degreewise
    exactness checks and homology-level long-exact-sequence certificates at
    window-safe degrees, connecting maps computed by the snake construction
    through the canonical degreewise splitting."""
    win = _resolve_window(C, window)
    em = e_y(C, MINUS, win)
    ei = e_y(C, INFINITY, win)
    ep = e_y(C, PLUS, win)
    eh = e_y(C, HAT, win)
    p = C.p

    inc = GradedMap(em.module, ei.module, 0, _identity_entries(em, ei))
    proj = GradedMap(ei.module, ep.module, 0, _identity_entries(ei, ep))
    safe = {f.tag: set(safe_degrees(C, f, win)) for f in ALL_FLAVORS}

    # the generator split is window-uniform, so the module-level sequence is
    # exact at every sliced degree
    seq1_checked = tuple(range(win.lo, win.hi + 1))
    seq1_ok = all(_ses_exact_at(inc, proj, j, p) for j in seq1_checked)
    seq1 = ShortExactSequence("u-range-splice", em, ei, ep, inc, proj,
                              seq1_checked, seq1_ok)

    # multiplication by u inside minus, quotient onto the hat line (u^1 -> u^0)
    mult_names = {}
    for name, _ in em.module.generators:
        g, un = name.rsplit(".u", 1)
        tname = _u_name(g, int(un) + 1)
        if tname in em.module:
            mult_names[(name, tname)] = 1
    mult_u = GradedMap(em.module, em.module, -2, mult_names)
    proj2_names = {}
    for name, _ in eh.module.generators:
        g, _un = name.rsplit(".u", 1)
        sname = _u_name(g, 1)
        if sname in em.module:
            proj2_names[(sname, name)] = 1
    proj2 = GradedMap(em.module, eh.module, 2, proj2_names)

    # u-multiplication runs off the top of the slice, so the module-level
    # check stops two degrees short of it
    seq2_checked = tuple(range(win.lo, win.hi - 1))
    seq2_ok = all(_ses_exact_at(mult_u, proj2, j, p) for j in seq2_checked)
    seq2 = ShortExactSequence("u-multiplication", em, em, eh, mult_u, proj2,
                              seq2_checked, seq2_ok)

    # connecting maps via retraction . d . section (canonical split lifts)
    sec1 = GradedMap(ep.module, ei.module, 0, _identity_entries(ep, ei))
    ret1 = GradedMap(ei.module, em.module, 0, _identity_entries(ei, em))
    delta1_map = ret1 @ ei.d @ sec1
    delta1 = _HomologyArrow.from_map(delta1_map, ep, em)

    sec2_names = {}
    for name, _ in eh.module.generators:
        g, _un = name.rsplit(".u", 1)
        sname = _u_name(g, 1)
        if sname in em.module:
            sec2_names[(name, sname)] = 1
    sec2 = GradedMap(eh.module, em.module, -2, sec2_names)
    ret2_names = {}
    for name, _ in em.module.generators:
        g, un = name.rsplit(".u", 1)
        n = int(un)
        if n >= 2:
            tname = _u_name(g, n - 1)
            if tname in em.module:
                ret2_names[(name, tname)] = 1
    ret2 = GradedMap(em.module, em.module, 2, ret2_names)
    delta2_map = ret2 @ em.d @ sec2
    delta2 = _HomologyArrow.from_map(delta2_map, eh, em)

    inc_a = _HomologyArrow.from_map(inc, em, ei)
    proj_a = _HomologyArrow.from_map(proj, ei, ep)
    mult_a = _HomologyArrow.from_map(mult_u, em, em)
    proj2_a = _HomologyArrow.from_map(proj2, em, eh)

    cache: Dict[Tuple[int, int], PresentedGroup] = {}
    nodes1: List[LESNode] = []
    for j in range(win.lo, win.hi + 1):
        if (j in safe["infinity"] and j in safe["minus"] and j in safe["plus"]):
            c, e = exactness_pair(inc_a, proj_a, j, cache)
            nodes1.append(LESNode("infinity", j, c, e))
        if (j in safe["plus"] and j in safe["infinity"]
                and (j - 1) in safe["minus"]):
            c, e = exactness_pair(proj_a, delta1, j, cache)
            nodes1.append(LESNode("plus", j, c, e))
        if (j in safe["minus"] and (j + 1) in safe["plus"]
                and j in safe["infinity"]):
            c, e = exactness_pair(delta1, inc_a, j, cache)
            nodes1.append(LESNode("minus", j, c, e))
    les1 = LESCertificate("localization-sequence", tuple(nodes1))

    nodes2: List[LESNode] = []
    for j in range(win.lo, win.hi + 1):
        if (j in safe["minus"] and (j + 2) in safe["minus"]
                and (j + 2) in safe["hat"]):
            c, e = exactness_pair(mult_a, proj2_a, j, cache)
            nodes2.append(LESNode("minus@u-image", j, c, e))
        if (j in safe["hat"] and (j - 2) in safe["minus"]
                and (j - 1) in safe["minus"]):
            c, e = exactness_pair(proj2_a, delta2, j, cache)
            nodes2.append(LESNode("hat", j, c, e))
        if (j in safe["minus"] and (j + 1) in safe["hat"]
                and (j - 2) in safe["minus"]):
            c, e = exactness_pair(delta2, mult_a, j, cache)
            nodes2.append(LESNode("minus@delta-image", j, c, e))
    les2 = LESCertificate("u-multiplication-sequence", tuple(nodes2))

    return FundamentalSequences(
        win,
        {"minus": em, "infinity": ei, "plus": ep, "hat": eh},
        seq1, seq2, les1, les2, delta1, delta2)


# ---------------------------------------------------------------------------
# The first-page models and both Koszul comparisons
# ---------------------------------------------------------------------------

def _transport(f: GradedMap, module: GradedModule, suffix: str,
               degree: int, scale: int = 1) -> GradedMap:
    kept = set(module.names())
    ent = {}
    for (s, t), v in f.entries.items():
        k = (f"{s}{suffix}", f"{t}{suffix}")
        if k[0] in kept and k[1] in kept:
            ent[k] = scale * v
    return GradedMap(module, module, degree, ent)


def _plus_model_gens(C: ChainComplex, win: Window) -> Set[str]:
    """Generators whose iterated-U orbit dies before leaving the window,
    closed under reachability through d and U (so the restricted span is a
    genuine subcomplex).  For a finite complex fitting in the window this is
    everything; for a truncated translation tower it is only the edge band."""
    p = C.p

    def step(vec: Dict[str, int]) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for g, c in vec.items():
            for t, v in C.u_action.image_of(g).items():
                w = out.get(t, 0) + c * v
                if w:
                    out[t] = w
                else:
                    out.pop(t, None)
        if p:
            out = {k: v % p for k, v in out.items() if v % p}
        return out

    kept: Set[str] = set()
    for g, dg in C.module.generators:
        vec = {g: 1}
        d = dg
        while vec and d >= win.lo:
            vec = step(vec)
            d -= 2
        if not vec:
            kept.add(g)
    # close under reachability so d and U restrict
    frontier = list(kept)
    while frontier:
        g = frontier.pop()
        for f in (C.d, C.u_action):
            for t in f.image_of(g):
                if t not in kept:
                    kept.add(t)
                    frontier.append(t)
    return kept


def e1_page(C: ChainComplex, flavor: Flavor, window=None) -> ChainComplex:
    """The finite model carrying the first-page groups of the flavor
    comparison, with differential -d as stored.

      minus:    one copy of C on the u^1 line (g.u1 at degree-2), u acts by U;
      infinity: the zero complex (u is invertible there but nilpotent here);
      plus:     the u-torsion model: generators whose U-orbit dies inside the
                window, at their own degrees, u acting by -U;
      hat:      C itself with differential -d and u = 0.
    """
    if C.module.modulus:
        raise ModulusUnsupported("e1_page needs a genuine Z-grading")
    if C.u_action is None:
        raise MissingUAction("e1_page needs a U-action")
    win = _resolve_window(C, window)
    p = C.p
    if flavor.tag == "infinity":
        m = GradedModule([])
        z = GradedMap.zero(m, m, -1)
        return ChainComplex(m, z, u_action=GradedMap.zero(m, m, -2), p=p)
    if flavor.tag == "minus":
        gens = [(f"{g}.u1", dg - 2) for g, dg in C.module.generators
                if win.lo <= dg - 2 <= win.hi]
        module = GradedModule(gens)
        d = _transport(C.d, module, ".u1", -1, -1)
        u = _transport(C.u_action, module, ".u1", -2, 1)
        return ChainComplex(module, d, u_action=u, p=p)
    if flavor.tag == "plus":
        keep = _plus_model_gens(C, win)
        gens = [(f"{g}.u0", dg) for g, dg in C.module.generators
                if g in keep and win.lo <= dg <= win.hi]
        module = GradedModule(gens)
        d = _transport(C.d, module, ".u0", -1, -1)
        u = _transport(C.u_action, module, ".u0", -2, -1)
        return ChainComplex(module, d, u_action=u, p=p)
    gens = [(f"{g}.u0", dg) for g, dg in C.module.generators
            if win.lo <= dg <= win.hi]
    module = GradedModule(gens)
    d = _transport(C.d, module, ".u0", -1, -1)
    return ChainComplex(module, d,
                        u_action=GradedMap.zero(module, module, -2), p=p)


def _model_safe_degrees(gen_degrees: Sequence[int], win: Window) -> List[int]:
    occupied = set(gen_degrees)
    out = []
    for j in range(win.lo, win.hi + 1):
        if all(t not in occupied or win.lo <= t <= win.hi
               for t in (j - 1, j, j + 1)):
            out.append(j)
    return out


@dataclass(frozen=True)
class ShiftReport:
    """Uniform-shift comparison of two homology tables.

    ``shift`` = s means the first table at degree j + s matches the second
    at degree j for every degree where both sides are trustworthy; None when
    no uniform s works.  ``per_degree`` maps the second table's degree j to
    (second[j], first[j + s])."""

    shift: Optional[int]
    per_degree: Dict[int, Tuple[AbelianGroup, AbelianGroup]] = field(default_factory=dict)
    witness_ok: Optional[bool] = None

    @property
    def matched(self) -> bool:
        return self.shift is not None


def _match_shift(leftH: HomologyTable, rightH: HomologyTable,
                 safe_left: Sequence[int], safe_right: Sequence[int]
                 ) -> Tuple[Optional[int], Dict[int, Tuple[AbelianGroup, AbelianGroup]]]:
    sl, sr = set(safe_left), set(safe_right)
    left_nz = sorted(j for j in sl if not leftH[j].is_trivial())
    right_nz = sorted(j for j in sr if not rightH[j].is_trivial())
    if not left_nz and not right_nz:
        return 0, {}
    if not left_nz or not right_nz:
        return None, {}
    candidates = sorted({left_nz[0] - right_nz[0], left_nz[-1] - right_nz[-1]})
    for s in candidates:
        if not all(j - s in sr for j in left_nz):
            continue
        if not all(k + s in sl for k in right_nz):
            continue
        if all(leftH[j] == rightH[j - s] for j in sl if j - s in sr):
            table = {}
            for k in sorted(sr):
                if k + s in sl and not (rightH[k].is_trivial()
                                        and leftH[k + s].is_trivial()):
                    table[k] = (rightH[k], leftH[k + s])
            return s, table
    return None, {}


def koszul_a(C: ChainComplex, flavor: Flavor, window=None) -> ShiftReport:
    """Compare H(e_y(s_u(C), flavor)) against the first-page model's
    homology, reporting the uniform shift.  For hat the right side is
    H(s_u(C)) itself and the match is groupwise-exact at shift 0."""
    SU = s_u(C)
    win = _resolve_window(SU, window)
    left = homology(e_y(SU, flavor, win))
    sl = safe_degrees(SU, flavor, win)
    if flavor.tag == "hat":
        right = homology(SU)
        sr = list(range(win.lo - 1, win.hi + 2))
    else:
        model = e1_page(C, flavor, win)
        right = homology(model)
        if flavor.tag == "minus":
            degs = [dg - 2 for _, dg in C.module.generators]
        elif flavor.tag == "plus":
            degs = [dg for _, dg in C.module.generators]
        else:
            degs = []
        sr = _model_safe_degrees(degs, win)
    s, table = _match_shift(left, right, sl, sr)
    return ShiftReport(s, table)


def koszul_b(C: ChainComplex, window=None) -> ShiftReport:
    """Compare H(s_u(e_y(C, minus))) against H(C) up to uniform shift and
    verify the cycle-level witness z -> (Yz).u1 + z.u1.y: a chain map,
    Y-equivariant, inducing isomorphisms at window-safe degrees.

    The default window hangs four degrees below the support (instead of the
    usual two) so the doubled minus-flavor complex is still safe one degree
    below every class of H(C)."""
    if C.y_action is None:
        raise MissingYAction("koszul_b needs a Y-action")
    if window is None:
        sw = C.module.support_window()
        window = Window(sw[0] - 4, sw[1] + 2) if sw else Window(-4, 2)
    win = _resolve_window(C, window)
    em = e_y(C, MINUS, win)
    SUm = s_u(em)
    left = homology(SUm)
    right = homology(C)
    min_degs = [d for _, d in C.module.generators]
    sl = []
    for j in range(win.lo, win.hi + 1):
        ok = True
        for t in (j - 2, j - 1, j, j + 1):
            if MINUS.occupies_degree(min_degs, t) and not (win.lo <= t <= win.hi):
                ok = False
        if ok:
            sl.append(j)
    sr = list(range(win.lo - 1, win.hi + 2))
    s, table = _match_shift(left, right, sl, sr)

    ent: Dict[Tuple[str, str], int] = {}
    names = set(SUm.module.names())
    for (g, t), v in C.y_action.entries.items():
        tn = f"{t}.u1"
        if tn in names:
            ent[(g, tn)] = v
    for g, _dg in C.module.generators:
        tn = f"{g}.u1.y"
        if tn in names:
            ent[(g, tn)] = ent.get((g, tn), 0) + 1
    W = GradedMap(C.module, SUm.module, -1, ent)
    witness_ok = is_chain_map(W, C, SUm)
    if witness_ok:
        # the witness intertwines the y-actions on the nose: W(Yz) = Y(W(z))
        ynat = (W @ C.y_action) - (SUm.y_action @ W)
        witness_ok = ynat.is_zero_mod(C.p)
    if witness_ok:
        ind = induced_on_homology(W, C, SUm)
        for j, info in ind.by_degree.items():
            if j - 1 in sl and not info.isomorphism:
                witness_ok = False
                break
    return ShiftReport(s, table, witness_ok=witness_ok)
