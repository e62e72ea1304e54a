"""Reading instance files.

An instance file is TOML.  The grammar is documented in README.md; in short
it declares a quiver, named representations, an optional torsion pair, the
t-structure, probe and generator lists, subcategory predicates, heart
complexes to realize and filtered complex literals.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .exactla import Mat, Subspace
from .quiverrep import Quiver, QuiverError, Rep, RepMor, SubRep, TorsionPair, TorsionPairError, projective, trace_radical
from .complexes import Complex, ComplexError, derived_hom_basis, combine_derived, direct_sum_complex, shift
from .fcat import FilteredComplex, FiltrationError, SubcatPredicate
from .tstruct import TStructureSpec
from .realization import HeartComplex, RealizationError

SHIPPED = ("a2_standard", "a2_tilt_pos", "a2_tilt_neg", "a3_subcat")


class ConfigError(Exception):
    """Any problem with an instance file.  ``field`` names the offending key."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


class ConfigNotFound(ConfigError):
    pass


class ConfigSyntaxError(ConfigError):
    pass


class UnresolvedName(ConfigError):
    pass


class ShapeError(ConfigError):
    pass


class ConfigValueError(ConfigError):
    pass


@dataclass
class HeartCase:
    name: str
    complex: HeartComplex
    expect: Optional[str] = None
    expect_object: Optional[Complex] = None
    subcat: Optional[str] = None


@dataclass
class Config:
    name: str
    source: str
    quiver: Quiver
    reps: dict
    torsion: Optional[TorsionPair]
    tstructure: TStructureSpec
    probes: list = field(default_factory=list)       # [(expression, Complex)]
    generators: list = field(default_factory=list)   # [(expression, Complex)]
    subcats: dict = field(default_factory=dict)
    realize: list = field(default_factory=list)      # [HeartCase]
    functoriality: list = field(default_factory=list)
    filtered: list = field(default_factory=list)     # [(name, FilteredComplex)]
    seed: int = 0
    samples: int = 20
    quiver_name: str = ""


def shipped_path(name: str):
    return resources.files("fcatreal").joinpath("configs", f"{name}.toml")


def locate(where: str) -> Path:
    """A path, or the name of a shipped instance."""
    p = Path(where)
    if p.exists():
        return p
    if where in SHIPPED:
        with resources.as_file(shipped_path(where)) as q:
            return Path(q)
    raise ConfigNotFound(f"config not found: {where}")


# -- small readers ------------------------------------------------------------------------

def _need(table: dict, key: str, where: str, kind=None):
    if key not in table:
        raise ConfigValueError(f"missing key {key} at {where}", where)
    val = table[key]
    if kind is not None and not isinstance(val, kind):
        raise ConfigValueError(f"{where}.{key} has the wrong type", f"{where}.{key}")
    return val


def _only(table: dict, allowed, where: str):
    # a stray key usually means a top-level key was written after a table header
    for key in table:
        if key not in allowed:
            raise ConfigValueError(f"unknown key {key} at {where}", f"{where}.{key}")


TOP_KEYS = ("name", "probes", "generators", "quiver", "reps", "torsion", "tstructure",
            "subcats", "realize", "functoriality", "filtered", "random")


def _matrix(raw, nrows: int, ncols: int, where: str) -> Mat:
    if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
        raise ConfigValueError(f"{where} must be a list of rows", where)
    try:
        m = Mat(raw, ncols=len(raw[0]) if raw else ncols)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ConfigValueError(f"{where}: {e}", where) from None
    if raw == [] and 0 in (nrows, ncols):
        m = Mat.zeros(nrows, ncols)
    if m.shape != (nrows, ncols):
        raise ShapeError(f"{where}: matrix is {m.shape[0]}x{m.shape[1]}, expected {nrows}x{ncols}", where)
    return m


def _quiver(raw: dict) -> Quiver:
    verts = _need(raw, "vertices", "quiver", list)
    arrows = raw.get("arrows", [])
    for i, a in enumerate(arrows):
        if not (isinstance(a, list) and len(a) == 3):
            raise ConfigValueError(f"quiver.arrows[{i}] must be [label, source, target]", f"quiver.arrows[{i}]")
    try:
        return Quiver(tuple(str(v) for v in verts), tuple(tuple(map(str, a)) for a in arrows))
    except QuiverError as e:
        raise ConfigValueError(f"quiver: {e}", "quiver") from None


def _rep(q: Quiver, raw: dict, where: str) -> Rep:
    dims = _need(raw, "dims", where)
    if isinstance(dims, dict):
        unknown = [v for v in dims if v not in q.vertices]
        if unknown:
            raise UnresolvedName(f"unresolved name {unknown[0]} at {where}.dims", f"{where}.dims")
        dims = {v: int(dims.get(v, 0)) for v in q.vertices}
    elif isinstance(dims, list):
        if len(dims) != len(q.vertices):
            raise ShapeError(f"{where}.dims lists {len(dims)} entries for {len(q.vertices)} vertices", f"{where}.dims")
        dims = dict(zip(q.vertices, dims))
    else:
        raise ConfigValueError(f"{where}.dims must be a list or table", f"{where}.dims")
    maps = {}
    for label, m in raw.get("maps", {}).items():
        try:
            _, s, t = q.arrows[q.arrow_index(label)]
        except QuiverError:
            raise UnresolvedName(f"unresolved name {label} at {where}.maps", f"{where}.maps") from None
        w = f"{where}.maps.{label}"
        try:
            maps[label] = _matrix(m, dims[t], dims[s], w)
        except ShapeError as e:
            raise ShapeError(f"arrow {label} ({s}->{t}): {str(e).split(': ', 1)[1]} at {w}", w) from None
    try:
        return Rep(q, dims, maps)
    except QuiverError as e:
        raise ShapeError(f"{where}: {e}", where) from None


_TERM = re.compile(r"^\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(\[\s*(?P<shift>[+-]?\d+)\s*\])?\s*$")


def parse_object(expr: str, q: Quiver, reps: dict, where: str) -> Complex:
    """``NAME``, ``NAME[k]``, sums ``A + B[1]``, or ``0``."""
    if not isinstance(expr, str):
        raise ConfigValueError(f"{where} must be a string", where)
    if expr.strip() == "0":
        return Complex.zero(q)
    parts = []
    for piece in expr.split("+"):
        m = _TERM.match(piece)
        if not m:
            raise ConfigValueError(f"cannot read object {expr!r} at {where}", where)
        name = m.group("name")
        if name not in reps:
            raise UnresolvedName(f"unresolved name {name} at {where}", where)
        parts.append(shift(Complex.concentrated(reps[name]), int(m.group("shift") or 0)))
    if len(parts) == 1:
        return parts[0]
    return direct_sum_complex(parts, q)[0]


def _object_list(raw, q, reps, where) -> list:
    if not isinstance(raw, list):
        raise ConfigValueError(f"{where} must be a list", where)
    return [(e, parse_object(e, q, reps, f"{where}[{i}]")) for i, e in enumerate(raw)]


def _default_reps(q: Quiver) -> dict:
    out = {}
    for v in q.vertices:
        out[f"S{v}"] = Rep.simple(q, v)
        out[f"P{v}"] = projective(q, v)
    return out


def _heart_complex(raw: dict, q, reps, t, where) -> HeartComplex:
    terms = {}
    for i, e in enumerate(_need(raw, "terms", where, list)):
        w = f"{where}.terms[{i}]"
        deg = _need(e, "degree", w, int)
        terms[deg] = parse_object(_need(e, "object", w, str), q, reps, f"{w}.object")
    diffs = {}
    for i, e in enumerate(raw.get("diffs", [])):
        w = f"{where}.diffs[{i}]"
        deg = _need(e, "degree", w, int)
        if deg not in terms or deg + 1 not in terms:
            raise ConfigValueError(f"{w}: degrees {deg} and {deg + 1} must both be terms", w)
        basis = derived_hom_basis(terms[deg], terms[deg + 1], 0)
        coeffs = _need(e, "coeffs", w, list)
        if len(coeffs) != len(basis):
            raise ShapeError(f"{w}.coeffs has {len(coeffs)} entries, Hom has dimension {len(basis)}", f"{w}.coeffs")
        try:
            coeffs = [Mat([[c]]).rows[0][0] for c in coeffs]
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise ConfigValueError(f"{w}.coeffs: {e}", f"{w}.coeffs") from None
        diffs[deg] = combine_derived(basis, coeffs, terms[deg], terms[deg + 1])
    try:
        return HeartComplex(q, t, terms, diffs)
    except RealizationError as e:
        raise ConfigValueError(f"{where}: {e}", where) from None


def _filtered(raw: dict, q, reps, where) -> FilteredComplex:
    terms = {}
    for i, e in enumerate(_need(raw, "terms", where, list)):
        w = f"{where}.terms[{i}]"
        name = _need(e, "object", w, str)
        if name not in reps:
            raise UnresolvedName(f"unresolved name {name} at {w}.object", f"{w}.object")
        terms[_need(e, "degree", w, int)] = reps[name]
    diffs = {}
    for i, e in enumerate(raw.get("diffs", [])):
        w = f"{where}.diffs[{i}]"
        deg = _need(e, "degree", w, int)
        src, tgt = terms.get(deg), terms.get(deg + 1)
        if src is None or tgt is None:
            raise ConfigValueError(f"{w}: degrees {deg} and {deg + 1} must both be terms", w)
        comps = _need(e, "maps", w, dict)
        mats = []
        for v, a, b in zip(q.vertices, src.dims, tgt.dims):
            mats.append(_matrix(comps[v], b, a, f"{w}.maps.{v}") if v in comps else Mat.zeros(b, a))
        diffs[deg] = RepMor(src, tgt, tuple(mats))
    try:
        u = Complex.from_dict(q, terms, diffs)
    except (ComplexError, QuiverError) as e:
        raise ConfigValueError(f"{where}: {e}", where) from None
    a = int(raw.get("a", 0))
    spans = raw.get("spans", [])
    for i, sp in enumerate(spans):
        w = f"{where}.spans[{i}]"
        for key, kind in (("p", int), ("degree", int), ("vertex", (str, int)), ("basis", list)):
            _need(sp, key, w, kind)
        if not a < sp["p"]:
            raise ConfigValueError(f"{w}.p must exceed a = {a}", f"{w}.p")
        if sp["degree"] not in terms:
            raise ConfigValueError(f"{w}.degree {sp['degree']} is not a term", f"{w}.degree")
        if str(sp["vertex"]) not in q.vertices:
            raise UnresolvedName(f"unresolved name {sp['vertex']} at {w}.vertex", f"{w}.vertex")
    top = max((s["p"] for s in spans), default=a)
    steps = []
    for p in range(a + 1, top + 1):
        row = {}
        for n in u.degrees():
            t = u.term(n)
            spaces = []
            for v, d in zip(q.vertices, t.dims):
                cols = [s for s in spans if s["p"] == p and s["degree"] == n and str(s["vertex"]) == v]
                if cols:
                    spaces.append(Subspace.span(_matrix(cols[0]["basis"], d, len(cols[0]["basis"][0]) if cols[0]["basis"] else 0,
                                                        f"{where}.spans")))
                else:
                    spaces.append(Subspace.zero(d))
            try:
                row[n] = SubRep(t, tuple(spaces))
            except QuiverError as e:
                raise ConfigValueError(f"{where}: step {p}, degree {n}: {e}", f"{where}.spans") from None
        steps.append(row)
    try:
        return FilteredComplex.from_steps(u, a, steps)
    except (FiltrationError, QuiverError) as e:
        raise ConfigValueError(f"{where}: {e}", where) from None


# -- entry point --------------------------------------------------------------------------

def parse_config(path) -> Config:
    """Read and validate an instance file (a path or a shipped name)."""
    p = locate(str(path))
    try:
        raw = tomllib.loads(p.read_text())
    except tomllib.TOMLDecodeError as e:
        raise ConfigSyntaxError(f"syntax error in {p.name}: {e}") from None
    return build_config(raw, str(path))


def build_config(raw: dict, source: str = "<memory>") -> Config:
    _only(raw, TOP_KEYS, "<top>")
    for key, allowed in (("quiver", ("name", "vertices", "arrows")), ("torsion", ("name", "generators")),
                         ("tstructure", ("kind",)), ("random", ("seed", "samples"))):
        _only(raw.get(key, {}), allowed, key)
    q = _quiver(_need(raw, "quiver", "<top>", dict))
    reps = _default_reps(q)
    for name, body in raw.get("reps", {}).items():
        reps[name] = _rep(q, body, f"reps.{name}")

    torsion = None
    if "torsion" in raw:
        tr = raw["torsion"]
        gens = []
        for i, g in enumerate(_need(tr, "generators", "torsion", list)):
            if g not in reps:
                raise UnresolvedName(f"unresolved name {g} at torsion.generators[{i}]", f"torsion.generators[{i}]")
            gens.append(reps[g])
        torsion = TorsionPair(tuple(gens), tr.get("name", "torsion"))
        # the generators must give a torsion pair at least on every object the file can name
        for name, m in reps.items():
            try:
                trace_radical(torsion, m)
            except TorsionPairError:
                raise ConfigValueError(f"torsion.generators do not give a torsion pair: it fails at {name}",
                                       "torsion.generators") from None

    kind = raw.get("tstructure", {}).get("kind", "standard")
    if kind == "standard":
        t = TStructureSpec.standard()
    elif kind == "tilt":
        if torsion is None:
            raise ConfigValueError("tstructure.kind = tilt needs a [torsion] table", "tstructure.kind")
        t = TStructureSpec.tilt(torsion)
    else:
        raise ConfigValueError(f"unknown t-structure kind {kind!r} at tstructure.kind", "tstructure.kind")

    cfg = Config(raw.get("name", Path(source).stem), source, q, reps, torsion, t)
    cfg.quiver_name = str(raw["quiver"].get("name", ""))
    cfg.probes = _object_list(raw.get("probes", []), q, reps, "probes")
    cfg.generators = _object_list(raw.get("generators", []), q, reps, "generators")

    for name, body in raw.get("subcats", {}).items():
        w = f"subcats.{name}"
        sk = _need(body, "kind", w, str)
        if sk == "vertex-support":
            verts = _need(body, "vertices", w, list)
            for i, v in enumerate(verts):
                if str(v) not in q.vertices:
                    raise UnresolvedName(f"unresolved name {v} at {w}.vertices[{i}]", f"{w}.vertices[{i}]")
            cfg.subcats[name] = SubcatPredicate(sk, frozenset(map(str, verts)), name=name)
        elif sk == "thick-generated":
            gens = [c for _, c in _object_list(_need(body, "generators", w, list), q, reps, f"{w}.generators")]
            cfg.subcats[name] = SubcatPredicate(sk, generators=tuple(gens), depth=int(body.get("depth", 2)), name=name)
        else:
            raise ConfigValueError(f"unknown subcategory kind {sk!r} at {w}.kind", f"{w}.kind")

    for i, body in enumerate(raw.get("realize", [])):
        w = f"realize[{i}]"
        k = _heart_complex(body, q, reps, t, w)
        expect = body.get("expect")
        obj = parse_object(expect, q, reps, f"{w}.expect") if expect is not None else None
        cfg.realize.append(HeartCase(body.get("name", w), k, expect, obj))

    for i, body in enumerate(raw.get("functoriality", [])):
        w = f"functoriality[{i}]"
        sub = _need(body, "subcat", w, str)
        if sub not in cfg.subcats:
            raise UnresolvedName(f"unresolved name {sub} at {w}.subcat", f"{w}.subcat")
        k = _heart_complex(body, q, reps, t, w)
        cfg.functoriality.append(HeartCase(body.get("name", w), k, subcat=sub))

    for i, body in enumerate(raw.get("filtered", [])):
        w = f"filtered[{i}]"
        cfg.filtered.append((body.get("name", w), _filtered(body, q, reps, w)))

    rnd = raw.get("random", {})
    cfg.seed = int(rnd.get("seed", 0))
    cfg.samples = int(rnd.get("samples", 20))
    return cfg
