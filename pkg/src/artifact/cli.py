"""Text front end: parse graded complexes, balanced component data, and
candidate gluing maps from a line-oriented grammar, run the verification
suites and flavor computations, and report the results.

Grammar (``#`` starts a comment anywhere; blank lines are skipped; blocks
close with ``end``, and end of input closes the final block):

    complex <name>
      ring Z | F<p>
      mod <c>                           # grading modulus, 0 for Z
      gen <id> <degree>
      d <src> <dst> <coeff>
      u <src> <dst> <coeff>
      y <src> <dst> <coeff>
      dU <src> <dst> <coeff> <exponent> # filtered complexes only

    components <name>                   # balanced block data
      ring Z | F<p>
      part o|s|u                        # gen lines follow
      map d:o->s                        # one of the sixteen block maps
      entry <src> <dst> <coeff>

    summaps <name>                      # candidate gluing maps; the named
      of <c1> <c2>                      # complexes must appear earlier in
      sharp <name>                      # the same file
      map V0 <degree>                   # V0 V1 V0d V1d Hsharp A B C D
      entry <src> <dst> <coeff>

Reports come in two formats.  ``text`` is human-oriented: homology lines
``H_j = Z^r + Z/d``, one ``PASS``/``FAIL`` line per checked identity (cited
by its tag), and complex output in the grammar above so it can be fed back
in.  ``machine`` is line-oriented ``key=value`` records with a fixed field
order, byte-stable across runs.

Exit codes: 0 all checks pass, 1 a verification failed, 2 parse or
validation error.
"""

import argparse
import random
import re
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .chain import (ChainComplex, ChainError, GradedMap, GradedModule,
                    HomologyTable, homology, validate)
from .circle import (HAT, INFINITY, MINUS, PLUS, Flavor, ShiftReport, Window,
                     e_y, koszul_a, koszul_b, s_u)
from .connsum import (ConnSumMaps, FilteredComplex, IdentificationFailed,
                      PositivityViolated, SumInput, case1_check, case2_check,
                      check_positivity, cm_flavors, product_complex,
                      verify_sum_maps)
from .exactlin import AbelianGroup
from .flavors import (_SHAPES, AssemblyInconsistent, BalancedComponents,
                      TowerParams, assemble, cone_identities, four_flavors,
                      ladder_check, tower_model)

__all__ = [
    "Manifest",
    "ParseError",
    "SumSpec",
    "ValidationError",
    "main",
    "parse",
    "parse_all",
    "parse_all_text",
    "print_complex",
    "print_components",
    "print_sum_file",
    "run",
]


class ParseError(Exception):
    """Input text does not conform to the grammar."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class ValidationError(Exception):
    """Input parsed but the described object violates a structural law."""

    def __init__(self, law: str, witness: str):
        super().__init__(f"{law}: {witness}")
        self.law = law
        self.witness = witness


_FLAVOR_BY_FLAG = {"minus": MINUS, "inf": INFINITY, "plus": PLUS, "hat": HAT}

# tags of the identities assemble() verifies, in its checking order
_ASSEMBLY_TAGS = (
    "eq:hat-d", "eq:bar-d", "eq:check-d",
    "eq:ijk:i", "eq:ijk:j", "eq:ijk:p",
    "eq:U-i", "eq:U-i:j", "eq:U-i:p",
    "eq:U-hat", "eq:U-bar", "eq:U-check",
)

_SUMMAP_NAMES = ("V0", "V1", "V0d", "V1d", "Hsharp", "A", "B", "C", "D")


@dataclass(frozen=True)
class SumSpec:
    """A parsed gluing-data file: the two factors plus the candidate maps."""

    name: str
    inputs: SumInput
    maps: ConnSumMaps


ParsedObject = Union[ChainComplex, FilteredComplex, BalancedComponents,
                     SumSpec]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

@dataclass
class _Block:
    kind: str
    name: str
    line: int
    rows: List[Tuple[int, List[str]]]


_BLOCK_KINDS = ("complex", "components", "summaps")


def _blocks(text: str) -> List[_Block]:
    out: List[_Block] = []
    open_block: Optional[_Block] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if toks[0] in _BLOCK_KINDS:
            if open_block is not None:
                raise ParseError(lineno, f"{toks[0]!r} before "
                                 f"{open_block.kind!r} block was closed")
            if len(toks) != 2:
                raise ParseError(lineno, f"{toks[0]} needs exactly one name")
            open_block = _Block(toks[0], toks[1], lineno, [])
        elif toks == ["end"]:
            if open_block is None:
                raise ParseError(lineno, "end outside any block")
            out.append(open_block)
            open_block = None
        elif open_block is None:
            raise ParseError(lineno, f"unexpected {toks[0]!r} outside a block")
        else:
            open_block.rows.append((lineno, toks))
    if open_block is not None:
        # End of input closes the final block, so a minimal file needs no
        # trailing ``end`` (printers still emit one).
        out.append(open_block)
    return out


def _int(tok: str, lineno: int, what: str = "integer") -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected {what}, got {tok!r}") from None


def _ring(tok: str, lineno: int) -> int:
    if tok == "Z":
        return 0
    m = re.fullmatch(r"F(\d+)", tok)
    if m and int(m.group(1)) >= 2:
        return int(m.group(1))
    raise ParseError(lineno, f"ring must be Z or F<p>, got {tok!r}")


def _ring_name(p: int) -> str:
    return "Z" if p == 0 else f"F{p}"


def _arity(toks: List[str], lineno: int, count: int) -> None:
    if len(toks) != count:
        raise ParseError(lineno, f"{toks[0]} takes {count - 1} argument(s)")


def _wrap_chain_error(e: ChainError) -> ValidationError:
    law = "degree-homogeneity" if "homogeneity" in str(e) else "structure"
    return ValidationError(law, str(e))


def _parse_complex(b: _Block) -> Union[ChainComplex, FilteredComplex]:
    ring = 0
    mod = 0
    gens: List[Tuple[str, int]] = []
    ents: Dict[str, Dict[Tuple[str, str], int]] = {"d": {}, "u": {}, "y": {}}
    laurent: Dict[Tuple[str, str], List[Tuple[int, int]]] = {}
    for lineno, toks in b.rows:
        kw = toks[0]
        if kw == "ring":
            _arity(toks, lineno, 2)
            ring = _ring(toks[1], lineno)
        elif kw == "mod":
            _arity(toks, lineno, 2)
            mod = _int(toks[1], lineno, "grading modulus")
        elif kw == "gen":
            _arity(toks, lineno, 3)
            gens.append((toks[1], _int(toks[2], lineno, "degree")))
        elif kw in ents:
            _arity(toks, lineno, 4)
            key = (toks[1], toks[2])
            ents[kw][key] = ents[kw].get(key, 0) + _int(
                toks[3], lineno, "coefficient")
        elif kw == "dU":
            _arity(toks, lineno, 5)
            laurent.setdefault((toks[1], toks[2]), []).append(
                (_int(toks[4], lineno, "exponent"),
                 _int(toks[3], lineno, "coefficient")))
        else:
            raise ParseError(lineno, f"unknown keyword {kw!r} in a complex")
    if laurent:
        if any(ents.values()):
            raise ParseError(b.line, "dU entries cannot mix with d/u/y")
        if mod:
            raise ParseError(b.line, "filtered complexes are Z-graded "
                             "(mod must be 0)")
        try:
            return FilteredComplex(gens, laurent, p=ring)
        except ChainError as e:
            raise _wrap_chain_error(e) from None
    try:
        module = GradedModule(gens, modulus=mod)
        return ChainComplex(
            module,
            GradedMap(module, module, -1, ents["d"]),
            u_action=GradedMap(module, module, -2, ents["u"]),
            y_action=GradedMap(module, module, 1, ents["y"]),
            p=ring)
    except ChainError as e:
        raise _wrap_chain_error(e) from None


def _map_field(spec: str, lineno: int) -> str:
    m = re.fullmatch(r"(d|dbar|u|ubar):([osu])->([osu])", spec)
    if not m:
        raise ParseError(lineno, f"map spec must look like d:o->s, "
                         f"got {spec!r}")
    name = f"{m.group(1)}_{m.group(2)}{m.group(3)}"
    if name not in _SHAPES:
        raise ParseError(lineno, f"no such block map {spec!r}")
    return name


def _parse_components(b: _Block) -> BalancedComponents:
    ring = 0
    parts: Dict[str, List[Tuple[str, int]]] = {"o": [], "s": [], "u": []}
    maps: Dict[str, Dict[Tuple[str, str], int]] = {}
    section: Optional[Tuple[str, str]] = None
    for lineno, toks in b.rows:
        kw = toks[0]
        if kw == "ring":
            _arity(toks, lineno, 2)
            ring = _ring(toks[1], lineno)
            section = None
        elif kw == "part":
            _arity(toks, lineno, 2)
            if toks[1] not in parts:
                raise ParseError(lineno, f"part must be o, s, or u, "
                                 f"got {toks[1]!r}")
            section = ("part", toks[1])
        elif kw == "map":
            _arity(toks, lineno, 2)
            name = _map_field(toks[1], lineno)
            maps.setdefault(name, {})
            section = ("map", name)
        elif kw == "gen":
            if section is None or section[0] != "part":
                raise ParseError(lineno, "gen outside a part section")
            _arity(toks, lineno, 3)
            parts[section[1]].append((toks[1],
                                      _int(toks[2], lineno, "degree")))
        elif kw == "entry":
            if section is None or section[0] != "map":
                raise ParseError(lineno, "entry outside a map section")
            _arity(toks, lineno, 4)
            ent = maps[section[1]]
            key = (toks[1], toks[2])
            ent[key] = ent.get(key, 0) + _int(toks[3], lineno, "coefficient")
        else:
            raise ParseError(lineno, f"unknown keyword {kw!r} in components")
    try:
        mods = {letter: GradedModule(g) for letter, g in parts.items()}
        built = {}
        for name, ent in maps.items():
            src_field, tgt_field, deg = _SHAPES[name]
            built[name] = GradedMap(mods[src_field[-1]], mods[tgt_field[-1]],
                                    deg, ent)
        return BalancedComponents.zeros(mods["o"], mods["s"], mods["u"],
                                        p=ring, **built)
    except ChainError as e:
        raise _wrap_chain_error(e) from None


def _parse_summaps(b: _Block,
                   named: Dict[str, ParsedObject]) -> SumSpec:
    of_names: Optional[Tuple[str, str]] = None
    sharp_name: Optional[str] = None
    maps: Dict[str, Tuple[int, Dict[Tuple[str, str], int]]] = {}
    current: Optional[str] = None
    for lineno, toks in b.rows:
        kw = toks[0]
        if kw == "of":
            _arity(toks, lineno, 3)
            of_names = (toks[1], toks[2])
        elif kw == "sharp":
            _arity(toks, lineno, 2)
            sharp_name = toks[1]
        elif kw == "map":
            _arity(toks, lineno, 3)
            if toks[1] not in _SUMMAP_NAMES:
                raise ParseError(lineno, f"no such gluing map {toks[1]!r}")
            current = toks[1]
            maps[current] = (_int(toks[2], lineno, "degree"), {})
        elif kw == "entry":
            if current is None:
                raise ParseError(lineno, "entry outside a map section")
            _arity(toks, lineno, 4)
            ent = maps[current][1]
            key = (toks[1], toks[2])
            ent[key] = ent.get(key, 0) + _int(toks[3], lineno, "coefficient")
        else:
            raise ParseError(lineno, f"unknown keyword {kw!r} in summaps")
    if of_names is None or sharp_name is None:
        raise ParseError(b.line, "summaps needs both an of line and a "
                         "sharp line")
    missing = [n for n in _SUMMAP_NAMES if n not in maps]
    if missing:
        raise ParseError(b.line, f"summaps is missing map(s) "
                         f"{', '.join(missing)}")

    def complex_named(name: str) -> ChainComplex:
        obj = named.get(name)
        if not isinstance(obj, ChainComplex):
            raise ParseError(b.line, f"summaps references {name!r}, which is "
                             "not a complex defined earlier in the file")
        return obj

    c1 = complex_named(of_names[0])
    c2 = complex_named(of_names[1])
    sharp = complex_named(sharp_name)
    try:
        inputs = SumInput(c1, c2)
        pm = product_complex(inputs).module
        sm = sharp.module
        shapes = {"V0": (sm, pm), "V1": (sm, pm), "V0d": (pm, sm),
                  "V1d": (pm, sm), "Hsharp": (sm, sm), "A": (pm, pm),
                  "B": (pm, pm), "C": (pm, pm), "D": (pm, pm)}
        gm = {}
        for name in _SUMMAP_NAMES:
            deg, ent = maps[name]
            src, tgt = shapes[name]
            gm[name] = GradedMap(src, tgt, deg, ent)
        built = ConnSumMaps(sharp, V0=gm["V0"], V1=gm["V1"], V0d=gm["V0d"],
                            V1d=gm["V1d"], H_sharp=gm["Hsharp"], A=gm["A"],
                            B=gm["B"], Cc=gm["C"], D=gm["D"])
    except ChainError as e:
        raise _wrap_chain_error(e) from None
    return SumSpec(b.name, inputs, built)


def parse_all_text(text: str) -> List[Tuple[str, ParsedObject]]:
    """All named objects of a file, in file order."""
    out: List[Tuple[str, ParsedObject]] = []
    named: Dict[str, ParsedObject] = {}
    for b in _blocks(text):
        if b.name in named:
            raise ParseError(b.line, f"duplicate block name {b.name!r}")
        if b.kind == "complex":
            obj: ParsedObject = _parse_complex(b)
        elif b.kind == "components":
            obj = _parse_components(b)
        else:
            obj = _parse_summaps(b, named)
        named[b.name] = obj
        out.append((b.name, obj))
    if not out:
        raise ParseError(1, "no blocks found")
    return out


def parse_all(path: str) -> List[Tuple[str, ParsedObject]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_all_text(fh.read())


def parse(path: str):
    """The file's primary object: its last block (gluing maps as the raw
    map data when the file ends in a summaps block)."""
    obj = parse_all(path)[-1][1]
    return obj.maps if isinstance(obj, SumSpec) else obj


# ---------------------------------------------------------------------------
# Printing (canonical form; parse . print is the identity on files the
# printer wrote)
# ---------------------------------------------------------------------------

def print_complex(C: Union[ChainComplex, FilteredComplex], name: str) -> str:
    lines = [f"complex {name}", f"  ring {_ring_name(C.p)}"]
    if isinstance(C, FilteredComplex):
        lines.append("  mod 0")
        for n, d in C.generators:
            lines.append(f"  gen {n} {d}")
        for s, t in sorted(C.d_entries):
            for exp, coeff in C.d_entries[(s, t)]:
                lines.append(f"  dU {s} {t} {coeff} {exp}")
    else:
        lines.append(f"  mod {C.module.modulus}")
        for n, d in C.module.generators:
            lines.append(f"  gen {n} {d}")
        for label, f in (("d", C.d), ("u", C.u_action), ("y", C.y_action)):
            if f is None:
                continue
            for s, t in sorted(f.entries):
                lines.append(f"  {label} {s} {t} {f.entries[(s, t)]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def print_components(bc: BalancedComponents, name: str) -> str:
    lines = [f"components {name}", f"  ring {_ring_name(bc.p)}"]
    for letter, module in (("o", bc.c_o), ("s", bc.c_s), ("u", bc.c_u)):
        lines.append(f"  part {letter}")
        for n, d in module.generators:
            lines.append(f"  gen {n} {d}")
    for field in sorted(_SHAPES):
        f: GradedMap = getattr(bc, field)
        if f.is_zero():
            continue
        kind, st = field.rsplit("_", 1)
        lines.append(f"  map {kind}:{st[0]}->{st[1]}")
        for s, t in sorted(f.entries):
            lines.append(f"  entry {s} {t} {f.entries[(s, t)]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def print_sum_file(spec: SumSpec, c1_name: str = "c1", c2_name: str = "c2",
                   sharp_name: str = "sharp") -> str:
    parts = [print_complex(spec.inputs.C1, c1_name),
             print_complex(spec.inputs.C2hat, c2_name),
             print_complex(spec.maps.sharp, sharp_name)]
    m = spec.maps
    fields = (("V0", m.V0), ("V1", m.V1), ("V0d", m.V0d), ("V1d", m.V1d),
              ("Hsharp", m.H_sharp), ("A", m.A), ("B", m.B), ("C", m.Cc),
              ("D", m.D))
    lines = [f"summaps {spec.name}", f"  of {c1_name} {c2_name}",
             f"  sharp {sharp_name}"]
    for name, f in fields:
        lines.append(f"  map {name} {f.degree}")
        for s, t in sorted(f.entries):
            lines.append(f"  entry {s} {t} {f.entries[(s, t)]}")
    lines.append("end")
    parts.append("\n".join(lines) + "\n")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def _group_text(g: AbelianGroup, p: int) -> str:
    if g.is_trivial():
        return "0"
    if p:
        return _ring_name(p) if g.free_rank == 1 else \
            f"{_ring_name(p)}^{g.free_rank}"
    return str(g)


def _group_machine(g: AbelianGroup, p: int) -> str:
    return _group_text(g, p).replace(" ", "")


class _Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: List[str] = []
        self.failed = False

    def raw(self, line: str) -> None:
        self.lines.append(line)

    def check(self, tag: str, passed: bool) -> None:
        if not passed:
            self.failed = True
        if self.fmt == "machine":
            status = "pass" if passed else "fail"
            self.raw(f"kind=check tag={tag} status={status}")
        else:
            self.raw(f"{'PASS' if passed else 'FAIL'} {tag}")

    def info(self, key: str, value) -> None:
        if self.fmt == "machine":
            self.raw(f"kind=info {key}={value}")
        else:
            self.raw(f"{key}={value}")

    def window(self, win: Window) -> None:
        self.info("window", f"{win.lo}..{win.hi}")

    def detail(self, message: str) -> None:
        if self.fmt == "machine":
            self.raw(f'kind=detail message="{message}"')
        else:
            self.raw(f"  {message}")

    def error(self, message: str) -> None:
        if self.fmt == "machine":
            self.raw(f'kind=error message="{message}"')
        else:
            self.raw(f"ERROR {message}")

    def homology_table(self, H: HomologyTable, p: int,
                       flavor: Optional[str] = None,
                       comment: bool = False) -> None:
        degs = H.degrees()
        if self.fmt == "machine":
            base = "kind=homology"
            if flavor:
                base += f" flavor={flavor}"
            for j in degs:
                self.raw(f"{base} degree={j} group={_group_machine(H[j], p)}")
            return
        prefix = "# " if comment else ""
        if flavor:
            self.raw(f"{prefix}flavor {flavor}")
        if not degs:
            self.raw(f"{prefix}H = 0")
        for j in degs:
            self.raw(f"{prefix}H_{j} = {_group_text(H[j], p)}")

    def shift_result(self, r: ShiftReport, p: int) -> None:
        matched = r.matched and r.witness_ok is not False
        if not matched:
            self.failed = True
        shift = f"{r.shift:+d}" if r.shift is not None else "none"
        yn = "yes" if matched else "no"
        if self.fmt == "machine":
            self.raw(f"kind=result shift={shift} match={yn}")
        else:
            self.raw(f"shift={shift}, match={yn}")
        for j in sorted(r.per_degree):
            expected, got = r.per_degree[j]
            if self.fmt == "machine":
                self.raw(f"kind=pair degree={j} "
                         f"expected={_group_machine(expected, p)} "
                         f"got={_group_machine(got, p)}")
            else:
                self.raw(f"H_{j} = {_group_text(expected, p)} ~ "
                         f"{_group_text(got, p)}")

    def complex_block(self, C: Union[ChainComplex, FilteredComplex],
                      name: str) -> None:
        if self.fmt == "text":
            self.raw(print_complex(C, name).rstrip("\n"))
            return
        self.raw(f"kind=complex name={name} ring={_ring_name(C.p)}")
        if isinstance(C, FilteredComplex):
            for n, d in C.generators:
                self.raw(f"kind=gen name={n} degree={d}")
            for s, t in sorted(C.d_entries):
                for exp, coeff in C.d_entries[(s, t)]:
                    self.raw(f"kind=entry map=dU src={s} dst={t} "
                             f"coeff={coeff} exponent={exp}")
            return
        for n, d in C.module.generators:
            self.raw(f"kind=gen name={n} degree={d}")
        for label, f in (("d", C.d), ("u", C.u_action), ("y", C.y_action)):
            if f is None:
                continue
            for s, t in sorted(f.entries):
                self.raw(f"kind=entry map={label} src={s} dst={t} "
                         f"coeff={f.entries[(s, t)]}")

    def render(self) -> str:
        return "".join(line + "\n" for line in self.lines)


# ---------------------------------------------------------------------------
# The manifest and the runner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Manifest:
    """One CLI invocation: the command, its inputs, and its options."""

    command: str
    inputs: Tuple[str, ...] = ()
    flavor: Optional[str] = None
    window: Optional[Window] = None
    n: Optional[int] = None
    direction: Optional[str] = None
    seed: Optional[int] = None
    fmt: str = "text"


def _primary(m: Manifest) -> Tuple[str, ParsedObject]:
    if not m.inputs:
        raise ValidationError("manifest", f"{m.command} needs an input file")
    try:
        objs = parse_all(m.inputs[0])
    except OSError as e:
        raise ValidationError("input", str(e)) from None
    return objs[-1]


def _chain_input(m: Manifest) -> Tuple[str, ChainComplex]:
    name, obj = _primary(m)
    if not isinstance(obj, ChainComplex):
        raise ValidationError("manifest",
                              f"{m.command} needs a plain complex")
    return name, obj


def _flavor_option(m: Manifest, default: Optional[str] = None) -> Flavor:
    flag = m.flavor or default
    if flag is None:
        raise ValidationError("manifest", f"{m.command} needs --flavor")
    return _FLAVOR_BY_FLAG[flag]


def _window_pair(win: Optional[Window]) -> Optional[Tuple[int, int]]:
    return (win.lo, win.hi) if win is not None else None


def _as_filtered(C: ChainComplex) -> FilteredComplex:
    if (C.u_action is not None and not C.u_action.is_zero_mod(C.p)) or \
            (C.y_action is not None and not C.y_action.is_zero_mod(C.p)):
        raise ValidationError("manifest", "a complex with u or y entries "
                              "has no filtered form")
    if C.module.modulus:
        raise ValidationError("manifest", "filtered complexes are Z-graded")
    return FilteredComplex(
        C.module.generators,
        {k: [(0, v)] for k, v in C.d.entries.items()}, p=C.p)


def _point_base() -> ChainComplex:
    m = GradedModule((("a", 0),))
    return ChainComplex(m, GradedMap.zero(m, m, -1),
                        u_action=GradedMap.zero(m, m, -2))


def _random_u_complex(seed: int) -> ChainComplex:
    """Deterministic small U-complex: a direct sum of single generators,
    two-term acyclic-or-torsion arrows, and three-step u-towers."""
    rng = random.Random(seed)
    gens: List[Tuple[str, int]] = []
    dent: Dict[Tuple[str, str], int] = {}
    uent: Dict[Tuple[str, str], int] = {}
    idx = 0
    for _ in range(rng.randint(1, 4)):
        kind = rng.choice(("single", "arrow", "utower"))
        base = rng.randint(-3, 3)
        if kind == "single":
            gens.append((f"g{idx}", base))
            idx += 1
        elif kind == "arrow":
            a, b = f"g{idx}", f"g{idx + 1}"
            gens += [(a, base), (b, base - 1)]
            dent[(a, b)] = rng.choice((1, -1, 2, 3))
            idx += 2
        else:
            names = [f"g{idx + k}" for k in range(3)]
            gens += [(n, base - 2 * k) for k, n in enumerate(names)]
            uent[(names[0], names[1])] = 1
            uent[(names[1], names[2])] = 1
            idx += 3
    module = GradedModule(gens)
    return ChainComplex(module,
                        GradedMap(module, module, -1, dent),
                        u_action=GradedMap(module, module, -2, uent),
                        y_action=GradedMap.zero(module, module, 1))


# --- command handlers ------------------------------------------------------

def _cmd_verify(m: Manifest, rep: _Report) -> None:
    name, obj = _primary(m)
    if isinstance(obj, ChainComplex):
        for c in validate(obj).checks:
            rep.check(c.law, c.passed)
    elif isinstance(obj, FilteredComplex):
        rep.check("degree-homogeneity", True)
        rep.check("d.d=0", True)
        rep.check("positivity", check_positivity(obj))
    elif isinstance(obj, BalancedComponents):
        try:
            bundle = assemble(obj)
        except AssemblyInconsistent as e:
            rep.check(e.tag, False)
            return
        for tag in _ASSEMBLY_TAGS:
            rep.check(tag, True)
        for tag, ok in cone_identities(bundle).checks:
            rep.check(tag, ok)
    else:
        report = verify_sum_maps(obj.inputs, obj.maps)
        for c in report.checks:
            rep.check(c.law, c.passed)


def _cmd_homology(m: Manifest, rep: _Report) -> None:
    _, C = _chain_input(m)
    if m.window is not None:
        rep.window(m.window)
    rep.homology_table(homology(C, _window_pair(m.window)), C.p)


def _cmd_su(m: Manifest, rep: _Report) -> None:
    name, C = _chain_input(m)
    S = s_u(C)
    rep.complex_block(S, f"{name}.su")
    rep.homology_table(homology(S), S.p, comment=True)


def _cmd_ey(m: Manifest, rep: _Report) -> None:
    name, C = _chain_input(m)
    flavor = _flavor_option(m)
    E = e_y(C, flavor, m.window)
    rep.complex_block(E, f"{name}.{flavor.tag}")
    rep.homology_table(homology(E), E.p, comment=True)


def _cmd_flavors(m: Manifest, rep: _Report) -> None:
    _, C = _chain_input(m)
    ff = four_flavors(C, m.window)
    rep.window(ff.window)
    for tag in ("minus", "infinity", "plus", "hat"):
        rep.homology_table(ff.tables[tag], C.p, flavor=tag)
    seqs = ff.sequences
    rep.check("eq:E-sq1", seqs.seq1.exact and seqs.les1.ok)
    rep.check("eq:E-sq2", seqs.seq2.exact and seqs.les2.ok)


def _cmd_koszul(m: Manifest, rep: _Report) -> None:
    C = _random_u_complex(m.seed or 0)
    if m.direction == "a":
        r = koszul_a(C, _flavor_option(m, default="minus"), m.window)
    else:
        r = koszul_b(s_u(C), m.window)
    rep.shift_result(r, C.p)


def _cmd_ladder(m: Manifest, rep: _Report) -> None:
    _, obj = _primary(m)
    if not isinstance(obj, BalancedComponents):
        raise ValidationError("manifest", "ladder needs a components file")
    try:
        bundle = assemble(obj)
    except AssemblyInconsistent as e:
        rep.check(e.tag, False)
        return
    lr = ladder_check(bundle, m.window)
    rep.window(lr.window)
    rep.check("eq:induced-KM1", lr.cone_les.ok)
    rep.check("eq:induced-KM1:delta", lr.delta_matches_p)
    rep.info("vanishing", "yes" if lr.bar_vanishing else "no")
    if lr.su_j_iso is not None:
        rep.check("eq:KM:j-iso", lr.su_j_iso)
    rep.check("eq:E-sq1:hat", lr.top_row.ok)
    rep.check("eq:E-sq1:bar", lr.side_rows[0].ok)
    rep.check("eq:E-sq1:check", lr.side_rows[1].ok)
    rep.check("eq:KM-bottom", lr.bottom_row.ok)
    order: List[str] = []
    agg: Dict[str, bool] = {}
    for sq in lr.squares:
        if sq.name not in agg:
            order.append(sq.name)
            agg[sq.name] = True
        agg[sq.name] = agg[sq.name] and sq.commutes
    for name in order:
        rep.check(name, agg[name])
    if lr.bar_u_iso is not None:
        rep.info("u-iso", "yes" if lr.bar_u_iso else "no")


def _cmd_tower(m: Manifest, rep: _Report) -> None:
    if m.n is None:
        raise ValidationError("manifest", "tower needs --n")
    bundle = assemble(tower_model(TowerParams(base=_point_base(), n=m.n)))
    H = homology(s_u(bundle.bar))
    lo, hi = -2 * m.n, 2 * m.n + 1
    rep.check("tower-vanishing",
              all(H[j].is_trivial() for j in range(lo + 1, hi)))
    rep.check("tower-edges", H.degrees() == [lo, hi])
    rep.homology_table(H, bundle.bar.p)


def _cmd_cmflavors(m: Manifest, rep: _Report) -> None:
    _, obj = _primary(m)
    if isinstance(obj, ChainComplex):
        obj = _as_filtered(obj)
    if not isinstance(obj, FilteredComplex):
        raise ValidationError("manifest", "cmflavors needs a filtered "
                              "complex")
    try:
        fl = cm_flavors(obj, m.window)
    except PositivityViolated as e:
        rep.check("positivity", False)
        rep.detail(str(e))
        return
    rep.check("positivity", True)
    rep.window(fl.window)
    for tag in ("minus", "infinity", "plus", "hat"):
        rep.homology_table(homology(fl.complexes[tag]), obj.p, flavor=tag)
    rep.check("eq:fund-short:1", fl.seq1.exact and fl.les1.ok)
    rep.check("eq:fund-short:2", fl.seq2.exact and fl.les2.ok)


def _cmd_case1(m: Manifest, rep: _Report) -> None:
    _, C = _chain_input(m)
    r = case1_check(C, m.n if m.n is not None else 4, m.window)
    rep.shift_result(r, C.p)


def _cmd_case2(m: Manifest, rep: _Report) -> None:
    _, C = _chain_input(m)
    flavor = _flavor_option(m)
    try:
        ok = case2_check(C, flavor.tag, m.window)
    except IdentificationFailed as e:
        rep.check("eq:S=eq:E", False)
        rep.detail(str(e))
        return
    rep.check("eq:S=eq:E", ok)


def _cmd_consum_verify(m: Manifest, rep: _Report) -> None:
    _, obj = _primary(m)
    if not isinstance(obj, SumSpec):
        raise ValidationError("manifest", "consum-verify needs a summaps "
                              "file")
    report = verify_sum_maps(obj.inputs, obj.maps)
    for c in report.checks:
        rep.check(c.law, c.passed)


_HANDLERS = {
    "verify": _cmd_verify,
    "homology": _cmd_homology,
    "su": _cmd_su,
    "ey": _cmd_ey,
    "flavors": _cmd_flavors,
    "koszul": _cmd_koszul,
    "ladder": _cmd_ladder,
    "tower": _cmd_tower,
    "cmflavors": _cmd_cmflavors,
    "consum-case1": _cmd_case1,
    "consum-case2": _cmd_case2,
    "consum-verify": _cmd_consum_verify,
}


def run(manifest: Manifest) -> Tuple[int, str]:
    """Execute one manifest; returns (exit code, report text)."""
    rep = _Report(manifest.fmt)
    try:
        _HANDLERS[manifest.command](manifest, rep)
    except (ParseError, ValidationError) as e:
        rep.error(str(e))
        return 2, rep.render()
    except ChainError as e:
        rep.error(str(e))
        return 2, rep.render()
    return (1 if rep.failed else 0), rep.render()


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _window_flag(text: str) -> Window:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError("window must look like -4..6")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise argparse.ArgumentTypeError("window lower end exceeds upper")
    return Window(lo, hi)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=_window_flag, default=None,
                        metavar="LO..HI",
                        help="degree window (default: support widened by 2)")
    common.add_argument("--format", dest="fmt", choices=("text", "machine"),
                        default="text", help="report format")
    parser = argparse.ArgumentParser(
        prog="artifact",
        description="Exact verification and flavor computation for graded "
                    "complexes with circle actions.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    def cmd(name: str, help_text: str, takes_file: bool = True
            ) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if takes_file:
            sp.add_argument("inputs", nargs=1, metavar="FILE")
        return sp

    cmd("verify", "run every law the input's kind must satisfy")
    cmd("homology", "degreewise homology of a complex")
    cmd("su", "double a U-complex into a Y-complex")
    sp = cmd("ey", "flavor expansion of a Y-complex")
    sp.add_argument("--flavor", choices=sorted(_FLAVOR_BY_FLAG),
                    required=True)
    cmd("flavors", "all four flavor homologies with both fundamental "
        "sequences")
    sp = cmd("koszul", "round-trip comparison on a seeded random complex",
             takes_file=False)
    sp.add_argument("--direction", choices=("a", "b"), required=True)
    sp.add_argument("--flavor", choices=sorted(_FLAVOR_BY_FLAG))
    sp.add_argument("--seed", type=int, default=0)
    cmd("ladder", "assemble a components file and certify the comparison "
        "ladder")
    sp = cmd("tower", "truncated tower over a point: vanishing and edge "
             "classes", takes_file=False)
    sp.add_argument("--n", type=int, required=True)
    cmd("cmflavors", "four flavor expansions of a filtered complex")
    sp = cmd("consum-case1", "polynomial-factor product against the "
             "homology model")
    sp.add_argument("--n", type=int, default=4)
    sp = cmd("consum-case2", "exponent-model product against the flavor "
             "expansion")
    sp.add_argument("--flavor", choices=sorted(_FLAVOR_BY_FLAG),
                    required=True)
    cmd("consum-verify", "check candidate gluing maps against their "
        "identities")
    return parser


def _merge_flag_values(argv: Sequence[str]) -> List[str]:
    """Join ``--flag value`` into ``--flag=value`` for flags whose values
    may start with ``-`` (windows like ``-4..2``, negative seeds)."""
    out: List[str] = []
    it = iter(argv)
    for arg in it:
        if arg in ("--window", "--seed", "--n"):
            value = next(it, None)
            if value is None:
                out.append(arg)
            else:
                out.append(f"{arg}={value}")
        else:
            out.append(arg)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = _build_parser().parse_args(_merge_flag_values(argv))
    manifest = Manifest(
        command=args.command,
        inputs=tuple(getattr(args, "inputs", ()) or ()),
        flavor=getattr(args, "flavor", None),
        window=args.window,
        n=getattr(args, "n", None),
        direction=getattr(args, "direction", None),
        seed=getattr(args, "seed", None),
        fmt=args.fmt)
    code, text = run(manifest)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
