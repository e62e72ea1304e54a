"""Filtered complexes: the f-category of finitely filtered complexes over A.

Filtrations are decreasing, ``F^p`` for integer ``p``; ``F^p`` is everything
for ``p <= a`` and zero for ``p >= b``.  Membership conventions:

* ``X`` lies in ``CF(<= n)`` iff ``gr^i X`` is acyclic for all ``i > n``,
* ``X`` lies in ``CF(>= n)`` iff ``gr^i X`` is acyclic for all ``i < n``,
* ``s`` reindexes, ``(sX)`` has ``F^p = F^(p-1) X``, and ``iota: X -> sX``
  is the identity on underlying complexes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .exactla import Mat, Subspace, ZERO, block_diag, hstack, nullspace_vectors, vstack
from .quiverrep import (
    Quiver,
    Rep,
    RepMor,
    SubRep,
    SubQuotient,
    combine,
    direct_sum,
    block_mor,
    hom_basis,
    image_subrep,
    in_additive_closure,
    is_projective,
    standard_projectives,
    top_multiplicities,
)
from .complexes import (
    ChainMap,
    Complex,
    ComplexError,
    HomClasses,
    SubQuotientComplex,
    check_subcomplex,
    chain_maps_mod_homotopy,
    cohomology,
    cone,
    derived_hom_basis,
    hom_classes,
    independent_modulo,
    is_acyclic,
    is_qis,
    shift,
    subquotient_complex,
    tot_resolution,
    tot_resolution_map,
)


class FiltrationError(ValueError):
    pass


def _subrep_of(piece: SubQuotient, sub: SubRep) -> SubRep:
    """``sub`` (contained in ``piece.big``) in the coordinates of ``piece.rep``."""
    return SubRep(piece.rep, tuple(Subspace.span(fa @ sp.basis) for fa, sp in zip(piece.from_ambient, sub.spaces)))


class FilteredComplex:
    """A bounded complex with a finite decreasing filtration by subcomplexes.

    ``steps[i]`` holds ``F^(a+1+i)`` as a tuple of SubReps aligned with the
    degrees of ``underlying``.
    """

    __slots__ = ("underlying", "a", "steps", "_hash")

    def __init__(self, underlying: Complex, a: int, steps: Sequence[Sequence[SubRep]] = (), check: bool = True):
        steps = [tuple(s) for s in steps]
        if underlying.is_zero():
            a, steps = 0, []
        ndeg = len(underlying.terms)
        for s in steps:
            if len(s) != ndeg:
                raise FiltrationError("filtration step must list one subrepresentation per degree")
        if check:
            prev = None
            for i, s in enumerate(steps):
                subs = dict(zip(underlying.degrees(), s))
                for n, sr in subs.items():
                    if sr.ambient != underlying.term(n):
                        raise FiltrationError(f"F^{a + 1 + i} in degree {n} lives in the wrong object")
                if not check_subcomplex(underlying, subs):
                    raise FiltrationError(f"F^{a + 1 + i} is not a subcomplex")
                if prev is not None and not all(x <= y for x, y in zip(s, prev)):
                    raise FiltrationError(f"F^{a + 1 + i} is not contained in F^{a + i}")
                prev = s
        while steps and all(sr.is_whole() for sr in steps[0]):
            steps.pop(0)
            a += 1
        while steps and all(sr.is_zero() for sr in steps[-1]):
            steps.pop()
        self.underlying = underlying
        self.a = a
        self.steps = tuple(steps)
        self._hash = None

    @classmethod
    def trivial(cls, x: Complex, at: int = 0) -> "FilteredComplex":
        """``j(x)``: filtration jumping only at ``at``."""
        return cls(x, at, (), check=False)

    @classmethod
    def from_steps(cls, underlying: Complex, a: int, steps: Sequence[Mapping[int, SubRep]]) -> "FilteredComplex":
        """Interior steps ``F^(a+1), F^(a+2), ...``; absent degrees are zero."""
        rows = []
        for s in steps:
            rows.append(tuple(s.get(n) or SubRep.zero(underlying.term(n)) for n in underlying.degrees()))
        return cls(underlying, a, rows)

    @property
    def b(self) -> int:
        """First index with ``F^b = 0``."""
        return self.a + len(self.steps) + 1 if not self.underlying.is_zero() else self.a

    @property
    def quiver(self) -> Quiver:
        return self.underlying.quiver

    def filtration_range(self) -> range:
        """Indices ``p`` where ``gr^p`` may be nonzero."""
        return range(self.a, self.b)

    def F(self, p: int) -> dict[int, SubRep]:
        x = self.underlying
        if p <= self.a:
            return {n: SubRep.whole(x.term(n)) for n in x.degrees()}
        if p >= self.b:
            return {n: SubRep.zero(x.term(n)) for n in x.degrees()}
        return dict(zip(x.degrees(), self.steps[p - self.a - 1]))

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.underlying == other.underlying and self.a == other.a and self.steps == other.steps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.underlying, self.a, self.steps))
        return self._hash

    def __repr__(self):
        gr_dims = {p: [t.dims for t in gr(self, p).terms] for p in self.filtration_range()}
        return f"FilteredComplex({self.underlying!r}, gr={gr_dims})"

    def identity(self) -> "FilteredMap":
        return FilteredMap(self, self, self.underlying.identity(), check=False)


@dataclass(frozen=True)
class FilteredMap:
    source: FilteredComplex
    target: FilteredComplex
    chain: ChainMap
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.chain.source != self.source.underlying or self.chain.target != self.target.underlying:
            raise FiltrationError("chain map endpoints differ from the filtered complexes")
        if self.check:
            p = respects_filtration(self.source, self.target, self.chain)
            if p is not None:
                raise FiltrationError(f"chain map does not carry F^{p} into F^{p}")

    def __matmul__(self, other: "FilteredMap") -> "FilteredMap":
        return FilteredMap(other.source, self.target, self.chain @ other.chain, check=False)


def respects_filtration(x: FilteredComplex, y: FilteredComplex, f: ChainMap, deg: int = 0) -> Optional[int]:
    """First ``p`` where ``f`` fails to send ``F^p x`` into ``F^p y``, else None."""
    lo = min(x.a, y.a)
    hi = max(x.b, y.b)
    for p in range(lo, hi + 1):
        fx, fy = x.F(p), y.F(p)
        for n, sub in fx.items():
            tgt = fy.get(n + deg)
            comp = f.comp(n)
            for v, (sp, m) in enumerate(zip(sub.spaces, comp.comps)):
                if sp.dim == 0 or m.nrows == 0:
                    continue
                if tgt is None or not tgt.spaces[v].contains(m @ sp.basis):
                    return p
    return None


# -- the quadruple (CF(<=0), CF(>=0), s, iota) ---------------------------------------

def filt_shift_s(x: FilteredComplex, n: int = 1) -> FilteredComplex:
    """``s^n``: the same complex with ``F^p`` replaced by ``F^(p-n)``."""
    if n == 0 or x.underlying.is_zero():
        return x
    return FilteredComplex(x.underlying, x.a + n, x.steps, check=False)


def tri_shift(x: FilteredComplex, k: int) -> FilteredComplex:
    """Triangulated shift ``X[k]``; the filtration moves along with the terms."""
    if k == 0 or x.underlying.is_zero():
        return x
    return FilteredComplex(shift(x.underlying, k), x.a, x.steps, check=False)


def tri_shift_map(f: FilteredMap, k: int) -> FilteredMap:
    return FilteredMap(tri_shift(f.source, k), tri_shift(f.target, k), f.chain.shift(k), check=False)


def iota(x: FilteredComplex) -> FilteredMap:
    return FilteredMap(x, filt_shift_s(x, 1), x.underlying.identity())


def s_map(f: FilteredMap, n: int = 1) -> FilteredMap:
    """``s`` on morphisms: the chain map is unchanged."""
    return FilteredMap(filt_shift_s(f.source, n), filt_shift_s(f.target, n), f.chain, check=False)


def omega(x: FilteredComplex) -> Complex:
    return x.underlying


def omega_map(f: FilteredMap) -> ChainMap:
    return f.chain


def in_cf_le(x: FilteredComplex, n: int) -> bool:
    return all(is_acyclic(gr(x, i)) for i in x.filtration_range() if i > n)


def in_cf_ge(x: FilteredComplex, n: int) -> bool:
    return all(is_acyclic(gr(x, i)) for i in x.filtration_range() if i < n)


# -- subquotients, gr and sigma -------------------------------------------------------------

@dataclass(frozen=True)
class FilteredSubquotient:
    filtered: FilteredComplex
    data: SubQuotientComplex


def filtered_subquotient(x: FilteredComplex, big: Mapping[int, SubRep], small: Mapping[int, SubRep]) -> FilteredSubquotient:
    """``big / small`` with the filtration ``(F^p & big + small) / small``."""
    u = x.underlying
    sq = subquotient_complex(u, big, small)
    steps = []
    for p in range(x.a + 1, x.b):
        fp = x.F(p)
        row = []
        for n, piece in sq.pieces:
            s = (fp[n] & piece.big) + piece.small
            row.append(_subrep_of(piece, s))
        steps.append(tuple(row))
    # steps are aligned with ambient degrees; the subquotient may have lost end degrees
    deg = [n for n, _ in sq.pieces]
    keep = [i for i, n in enumerate(deg) if n in sq.complex.degrees()]
    steps = [tuple(r[i] for i in keep) for r in steps]
    return FilteredSubquotient(FilteredComplex(sq.complex, x.a, steps, check=False), sq)


@lru_cache(maxsize=None)
def gr_data(x: FilteredComplex, p: int) -> SubQuotientComplex:
    return subquotient_complex(x.underlying, x.F(p), x.F(p + 1))


def gr(x: FilteredComplex, p: int) -> Complex:
    """``F^p / F^(p+1)`` as a plain complex."""
    if p not in x.filtration_range():
        return Complex.zero(x.quiver)
    return gr_data(x, p).complex


def gr_map(f: FilteredMap, p: int) -> ChainMap:
    return gr_data(f.source, p).induced_to(gr_data(f.target, p), f.chain)


@dataclass(frozen=True)
class Sigma:
    """``sigma_{>= n+1} X -> X -> sigma_{<= n} X``."""

    ge: FilteredComplex
    le: FilteredComplex
    inclusion: FilteredMap
    projection: FilteredMap

    def cone_comparison(self) -> FilteredMap:
        """The natural map ``cone(inclusion) -> le``, ``(a, x) |-> proj(x)``."""
        cf, c = filtered_cone(self.inclusion)
        comps = {}
        for n in c.complex.degrees():
            parts = [self.ge.underlying.term(n + 1), self.inclusion.target.underlying.term(n)]
            m = block_mor(parts, [self.le.underlying.term(n)], [[None, self.projection.chain.comp(n)]])
            comps[n] = RepMor(c.complex.term(n), self.le.underlying.term(n), m.comps, check=False)
        return FilteredMap(cf, self.le, ChainMap(c.complex, self.le.underlying, comps))


def sigma(x: FilteredComplex, n: int) -> Sigma:
    u = x.underlying
    fn = x.F(n + 1)
    zero = {k: SubRep.zero(u.term(k)) for k in u.degrees()}
    sub = filtered_subquotient(x, fn, zero)
    quo = filtered_subquotient(x, {}, fn)
    inc = FilteredMap(sub.filtered, x, sub.data.inclusion())
    proj = FilteredMap(x, quo.filtered, quo.data.projection())
    return Sigma(sub.filtered, quo.filtered, inc, proj)


def filtered_cone(f: FilteredMap):
    """Cone with ``F^p = F^p A[1] (+) F^p B``; returns (FilteredComplex, Cone)."""
    c = cone(f.chain)
    a, bb = f.source, f.target
    lo, hi = min(a.a, bb.a), max(a.b, bb.b)
    steps = []
    for p in range(lo + 1, hi):
        fa, fb = a.F(p), bb.F(p)
        row = []
        for n in c.complex.degrees():
            sa = fa.get(n + 1) or SubRep.zero(a.underlying.term(n + 1))
            sb = fb.get(n) or SubRep.zero(bb.underlying.term(n))
            spaces = tuple(Subspace.span(block_diag([x.basis, y.basis])) for x, y in zip(sa.spaces, sb.spaces))
            row.append(SubRep(c.complex.term(n), spaces))
        steps.append(tuple(row))
    return FilteredComplex(c.complex, lo, steps, check=False), c


def is_filtered_qis(f: FilteredMap) -> tuple[bool, Optional[tuple]]:
    """Quasi-isomorphism on every graded piece; witness ``(p, degree)``."""
    lo = min(f.source.a, f.target.a)
    hi = max(f.source.b, f.target.b)
    for p in range(lo, hi):
        ok, n = is_qis(gr_map(f, p))
        if not ok:
            return False, (p, n)
    return True, None


# -- cellular models ------------------------------------------------------------------------

@dataclass(frozen=True)
class CellularFlag:
    """Evidence that every graded term is projective: top multiplicities per (p, degree)."""

    holds_on: FilteredComplex = field(compare=False, repr=False)
    evidence: tuple  # ((p, n, multiplicities), ...)


def cellular_flag(x: FilteredComplex) -> Optional[CellularFlag]:
    evidence = []
    for p in x.filtration_range():
        g = gr(x, p)
        for n in g.degrees():
            t = g.term(n)
            if not is_projective(t):
                return None
            evidence.append((p, n, top_multiplicities(t)))
    return CellularFlag(x, tuple(evidence))


@dataclass(frozen=True)
class CellularModel:
    complex: FilteredComplex
    flag: CellularFlag
    qis: FilteredMap  # complex -> original


@lru_cache(maxsize=None)
def cellularize_filtered(x: FilteredComplex) -> CellularModel:
    """A filtered quasi-isomorphism onto ``x`` from a complex with projective graded terms.

    Inputs that are already cellular come back with the identity.  Otherwise
    the standard resolutions of the terms are totalized; the resolution is an
    exact functor, so the image of each ``F^p`` gives the filtration and the
    graded pieces are totalized resolutions of the graded pieces of ``x``.
    """
    flag = cellular_flag(x)
    if flag is not None:
        return CellularModel(x, flag, x.identity())
    u = x.underlying
    rep = tot_resolution(u)
    steps = []
    for p in range(x.a + 1, x.b):
        sq = subquotient_complex(u, x.F(p), {})
        inc = sq.inclusion()
        sub_rep = tot_resolution(sq.complex)
        m = tot_resolution_map(inc, sub_rep, rep)
        row = tuple(image_subrep(m.comp(n)) for n in rep.complex.degrees())
        steps.append(row)
    fx = FilteredComplex(rep.complex, x.a, steps)
    flag = cellular_flag(fx)
    if flag is None:
        raise FiltrationError("totalized resolution failed to be cellular")
    return CellularModel(fx, flag, FilteredMap(fx, x, rep.qis))


# -- filtered Hom -------------------------------------------------------------------------

def _filtration_constraint(x: FilteredComplex, y: FilteredComplex, deg: int):
    lo, hi = min(x.a, y.a), max(x.b, y.b)
    fx = {p: x.F(p) for p in range(lo + 1, hi)}
    fy = {p: y.F(p) for p in range(lo + 1, hi)}

    def constraint(n, basis):
        rows = []
        for p in range(lo + 1, hi):
            sx = fx[p].get(n)
            sy = fy[p].get(n + deg)
            if sx is None or sy is None:
                continue
            for v in range(len(sx.spaces)):
                src, tgt = sx.spaces[v], sy.spaces[v]
                if src.dim == 0 or tgt.is_full():
                    continue
                ann = tgt.annihilator()
                for i in range(ann.nrows):
                    for j in range(src.dim):
                        rows.append([(ann.take_rows([i]) @ b.comps[v] @ src.basis.take_cols([j]))[0, 0] for b in basis])
        if not rows:
            return None
        return Mat(rows, ncols=len(basis))

    return constraint


@dataclass
class FilteredHom:
    source: FilteredComplex
    target: FilteredComplex
    classes: HomClasses
    maps: list  # FilteredMap basis of the homotopy classes

    @property
    def dim(self) -> int:
        return len(self.maps)

    def rank_of(self, maps: Sequence[FilteredMap]) -> int:
        return self.classes.rank_of([f.chain for f in maps])

    def is_null(self, f: FilteredMap) -> bool:
        return self.classes.is_null(f.chain)


_filtered_hom_cache: dict = {}


def filtered_hom_basis(x: FilteredComplex, y: FilteredComplex, shift_by: int = 0) -> FilteredHom:
    """Filtered chain maps ``x -> y[shift_by]`` modulo filtered homotopy.

    ``x`` must be cellular (projective graded terms); for such sources these
    classes are the morphisms of the filtered derived category.
    """
    if cellular_flag(x) is None:
        raise FiltrationError("filtered Hom needs a cellular source; use cellularize_filtered")
    key = (x, y, shift_by)
    hit = _filtered_hom_cache.get(key)
    if hit is not None:
        return hit
    yy = tri_shift(y, shift_by)
    classes = hom_classes(x.underlying, yy.underlying,
                          _filtration_constraint(x, yy, 0), _filtration_constraint(x, yy, -1))
    maps = [FilteredMap(x, yy, c, check=False) for c in classes.classes]
    out = FilteredHom(x, yy, classes, maps)
    _filtered_hom_cache[key] = out
    return out


# -- checkers -----------------------------------------------------------------------------

@dataclass
class CheckRecord:
    name: str
    status: str  # "pass" | "fail" | "unknown"
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _describe(x: FilteredComplex) -> str:
    gr_dims = ";".join(f"{p}:" + ",".join(f"{n}{gr(x, p).term(n).dims}" for n in gr(x, p).degrees())
                       for p in x.filtration_range())
    return f"[{gr_dims}]"


def _check_membership_lattice(samples, window: int = 2) -> CheckRecord:
    bad = []
    for i, x in enumerate(samples):
        lo, hi = x.a - window, x.b + window
        for n in range(lo, hi):
            if in_cf_le(x, n) and not in_cf_le(x, n + 1):
                bad.append(f"sample {i}: in CF(<={n}) but not CF(<={n + 1})")
            if in_cf_ge(x, n + 1) and not in_cf_ge(x, n):
                bad.append(f"sample {i}: in CF(>={n + 1}) but not CF(>={n})")
            # CF(<= n) = s^n CF(<= 0)
            back = filt_shift_s(x, -n)
            if in_cf_le(x, n) != in_cf_le(back, 0) or in_cf_ge(x, n) != in_cf_ge(back, 0):
                bad.append(f"sample {i}: membership at {n} disagrees with s^{-n}")
        if not (in_cf_le(x, x.b) and in_cf_ge(x, x.a)):
            bad.append(f"sample {i}: not exhausted by the filtration range")
    return CheckRecord("f-axiom-1", "fail" if bad else "pass", bad)


def _check_iota_shift(samples) -> CheckRecord:
    bad = []
    for i, x in enumerate(samples):
        lhs = iota(x)
        rhs = s_map(iota(filt_shift_s(x, -1)), 1)
        if not (lhs.source == rhs.source and lhs.target == rhs.target and lhs.chain == rhs.chain):
            bad.append(f"sample {i}")
    return CheckRecord("f-axiom-2", "fail" if bad else "pass", bad)


def orthogonal_pairs(samples: Sequence[FilteredComplex], cross: int = 1) -> list[tuple[FilteredComplex, FilteredComplex]]:
    """Pairs ``(A, B)`` with ``A`` in CF(>=1) and ``B`` in CF(<=0), built from samples.

    Each sample contributes its own sigma pieces; ``cross`` additional pairs
    mix a sample's upper piece with the next sample's lower piece.
    """
    pieces = []
    for x in samples:
        sg = sigma(x, 0)
        pieces.append((sg.ge, sg.le))
    pairs = list(pieces)
    for k in range(1, cross + 1):
        for i in range(len(pieces)):
            pairs.append((pieces[i][0], pieces[(i + k) % len(pieces)][1]))
    return pairs


def check_axiom3_pair(a: FilteredComplex, b: FilteredComplex, shifts=(0,)) -> list[str]:
    """Failures of the vanishing and both iota-isomorphisms for ``a`` in CF(>=1), ``b`` in CF(<=0)."""
    bad = []
    ca = cellularize_filtered(a).complex
    cb = cellularize_filtered(b).complex
    for k in shifts:
        bk = tri_shift(b, k)
        ak = tri_shift(a, k)
        h = filtered_hom_basis(ca, bk)
        if h.dim:
            bad.append(f"Hom(A, B[{k}]) has dimension {h.dim}")
        # iota_*: Hom(B, s^-1 A) -> Hom(B, A)
        src = filtered_hom_basis(cb, filt_shift_s(ak, -1))
        tgt = filtered_hom_basis(cb, ak)
        io = iota(filt_shift_s(ak, -1))
        images = [FilteredMap(cb, ak, io.chain @ f.chain, check=False) for f in src.maps]
        if not (src.dim == tgt.dim == tgt.rank_of(images)):
            bad.append(f"iota_* at shift {k}: {src.dim} -> {tgt.dim}, rank {tgt.rank_of(images)}")
        # iota^*: Hom(sB, A) -> Hom(B, A)
        sb = filt_shift_s(cb, 1)
        src2 = filtered_hom_basis(sb, ak)
        ib = iota(cb)
        images2 = [FilteredMap(cb, ak, f.chain @ ib.chain, check=False) for f in src2.maps]
        if not (src2.dim == tgt.dim == tgt.rank_of(images2)):
            bad.append(f"iota^* at shift {k}: {src2.dim} -> {tgt.dim}, rank {tgt.rank_of(images2)}")
    return bad


def _check_orthogonality(samples, shifts) -> CheckRecord:
    bad = []
    for i, (a, b) in enumerate(orthogonal_pairs(samples)):
        if not in_cf_ge(a, 1) or not in_cf_le(b, 0):
            bad.append(f"pair {i}: sigma pieces on the wrong side")
            continue
        bad.extend(f"pair {i}: {w}" for w in check_axiom3_pair(a, b, shifts))
    return CheckRecord("f-axiom-3", "fail" if bad else "pass", bad)


def _check_triangle(samples) -> CheckRecord:
    bad = []
    for i, x in enumerate(samples):
        sg = sigma(x, 0)
        if not in_cf_ge(sg.ge, 1):
            bad.append(f"sample {i}: upper piece not in CF(>=1)")
        if not in_cf_le(sg.le, 0):
            bad.append(f"sample {i}: lower piece not in CF(<=0)")
        ok, w = is_filtered_qis(sg.cone_comparison())
        if not ok:
            bad.append(f"sample {i}: cone comparison fails at {w}")
    return CheckRecord("f-axiom-4", "fail" if bad else "pass", bad)


def check_f_axioms(samples: Sequence[FilteredComplex], shifts=(-1, 0, 1)) -> list[CheckRecord]:
    """Run the four f-category conditions over ``samples``."""
    return [
        _check_membership_lattice(samples),
        _check_iota_shift(samples),
        _check_orthogonality(samples, shifts),
        _check_triangle(samples),
    ]


def check_gr_shift(samples: Sequence[FilteredComplex]) -> CheckRecord:
    """``gr^p(s x) = gr^(p-1)(x)`` as complexes, for every ``p`` in range."""
    bad = []
    for i, x in enumerate(samples):
        sx = filt_shift_s(x, 1)
        for p in range(x.a, x.b + 2):
            if gr(sx, p) != gr(x, p - 1):
                bad.append(f"sample {i}: p = {p}")
    return CheckRecord("gr-shift", "fail" if bad else "pass", bad, {"samples": len(samples)})


def omega_hom_comparison(x: FilteredComplex, y: FilteredComplex) -> tuple[int, int, int]:
    """(dim filtered Hom, dim derived Hom of omegas, rank of omega on classes)."""
    cx = cellularize_filtered(x).complex
    fh = filtered_hom_basis(cx, y)
    # cellular underlying complexes have projective terms: chain maps compute derived Hom
    dh = chain_maps_mod_homotopy(cx.underlying, y.underlying)
    return fh.dim, dh.dim, dh.rank_of([f.chain for f in fh.maps])


def _next_same_quiver(samples, i):
    for k in range(1, len(samples) + 1):
        y = samples[(i + k) % len(samples)]
        if y.quiver == samples[i].quiver:
            return y


def _companion(samples, i, objects) -> FilteredComplex:
    """A trivially filtered plain object over the same quiver as sample ``i``."""
    q = samples[i].quiver
    pool = [o for o in objects if o.quiver == q]
    if pool:
        return FilteredComplex.trivial(pool[i % len(pool)])
    y = _next_same_quiver(samples, i)
    return FilteredComplex.trivial(gr(y, y.a))


def check_omega_props(samples: Sequence[FilteredComplex], objects: Sequence[Complex] = ()) -> list[CheckRecord]:
    """Adjunctions (1), (2), iota-inversion (3) and Hom comparison (4) for omega."""
    recs = []
    # (1): X in CF(<=0), M plain: Hom(X, jM) = Hom(wX, M)
    bad1, bad2 = [], []
    for i, x in enumerate(samples):
        le = sigma(x, 0).le
        ge = sigma(x, -1).ge
        m = _companion(samples, i, objects)
        f, d, r = omega_hom_comparison(le, m)
        if not f == d == r:
            bad1.append(f"sample {i}: {f}, {d}, rank {r}")
        f, d, r = omega_hom_comparison(m, ge)
        if not f == d == r:
            bad2.append(f"sample {i}: {f}, {d}, rank {r}")
    recs.append(CheckRecord("omega-1", "fail" if bad1 else "pass", bad1))
    recs.append(CheckRecord("omega-2", "fail" if bad2 else "pass", bad2))
    bad3 = []
    for i, x in enumerate(samples):
        ok, w = is_qis(omega_map(iota(x)))
        if not ok:
            bad3.append(f"sample {i}: degree {w}")
    recs.append(CheckRecord("omega-3", "fail" if bad3 else "pass", bad3))
    bad4 = []
    count = 0
    for i, x in enumerate(samples):
        le = sigma(x, 0).le
        ge = sigma(_next_same_quiver(samples, i), -1).ge
        f, d, r = omega_hom_comparison(le, ge)
        count += 1
        if not f == d == r:
            bad4.append(f"pair {i}: filtered {f}, derived {d}, rank {r}")
    recs.append(CheckRecord("omega-4", "fail" if bad4 else "pass", bad4, {"pairs": count}))
    return recs


# -- random cellular samples -------------------------------------------------------------

def _random_projective_sum(rng: random.Random, quiver: Quiver, max_dim: int) -> Rep:
    projs = standard_projectives(quiver)
    parts = []
    total = 0
    for _ in range(rng.randint(0, 2)):
        p = rng.choice(projs)
        if total + p.total_dim <= max_dim:
            parts.append(p)
            total += p.total_dim
    return direct_sum(parts, quiver)


def gen_random_cellular(seed: int, quiver: Quiver, max_steps: int = 3, max_degrees: int = 3, max_dim: int = 3) -> FilteredComplex:
    """Reproducible random cellular filtered complex.

    Graded blocks ``G^(p,n)`` are sums of indecomposable projectives of total
    dimension at most ``max_dim``; the differential is a random filtered map
    subject to ``d o d = 0``.
    """
    rng = random.Random(seed)
    nsteps = rng.randint(1, max_steps)
    ndeg = rng.randint(1, max_degrees)
    a = rng.randint(-1, 1)
    lo = rng.randint(-1, 0)
    blocks = {(p, n): _random_projective_sum(rng, quiver, max_dim) for p in range(nsteps) for n in range(ndeg)}
    if all(b.is_zero() for b in blocks.values()):
        blocks[(0, 0)] = standard_projectives(quiver)[-1]
    terms = {n: direct_sum([blocks[(p, n)] for p in range(nsteps)], quiver) for n in range(ndeg)}
    diffs = {}
    prev = None
    for n in range(ndeg - 1):
        src, tgt = terms[n], terms[n + 1]
        # filtered maps: block (p -> p') allowed for p' >= p
        basis = []
        for p in range(nsteps):
            for p2 in range(p, nsteps):
                for b in hom_basis(blocks[(p, n)], blocks[(p2, n + 1)]):
                    grid = [[b if (i == p2 and j == p) else None for j in range(nsteps)] for i in range(nsteps)]
                    m = block_mor([blocks[(q, n)] for q in range(nsteps)], [blocks[(q, n + 1)] for q in range(nsteps)], grid)
                    basis.append(RepMor(src, tgt, m.comps, check=False))
        if not basis:
            diffs[n] = RepMor.zero(src, tgt)
            prev = diffs[n]
            continue
        if prev is not None and not prev.is_zero():
            cols = [(b @ prev).flat() for b in basis]
            size = len(cols[0])
            allowed = nullspace_vectors(Mat.from_columns(cols, size)) if size else [
                [1 if i == j else 0 for i in range(len(basis))] for j in range(len(basis))]
        else:
            allowed = [[1 if i == j else 0 for i in range(len(basis))] for j in range(len(basis))]
        coeffs = [0] * len(basis)
        for vec in allowed:
            c = rng.choice((0, 0, 1, -1, 2))
            if c:
                coeffs = [x + c * y for x, y in zip(coeffs, vec)]
        diffs[n] = combine(basis, coeffs, src, tgt)
        prev = diffs[n]
    shifted_terms = {n + lo: t for n, t in terms.items()}
    shifted_diffs = {n + lo: d for n, d in diffs.items()}
    u = Complex.from_dict(quiver, shifted_terms, shifted_diffs)
    steps = []
    for q in range(1, nsteps):
        row = {}
        for n in range(ndeg):
            if (n + lo) not in u.degrees():
                continue
            t = terms[n]
            spaces = []
            for v in range(len(quiver.vertices)):
                before = sum(blocks[(p, n)].dims[v] for p in range(q))
                dim = t.dims[v]
                spaces.append(Subspace.span(Mat.identity(dim).take_cols(range(before, dim))))
            row[n + lo] = SubRep(t, tuple(spaces))
        steps.append(row)
    return FilteredComplex.from_steps(u, a, steps)


def random_samples(quiver: Quiver, count: int, seed: int = 0, **bounds) -> list[FilteredComplex]:
    return [gen_random_cellular(seed * 100003 + i, quiver, **bounds) for i in range(count)]


# -- sub-f-categories ----------------------------------------------------------------------

@dataclass(frozen=True)
class SubcatPredicate:
    """A triangulated subcategory of D^b(A), decided per object.

    ``vertex-support``: cohomology supported on ``vertices``.
    ``thick-generated``: thick closure of ``generators``, searched to ``depth``.
    """

    kind: str
    vertices: frozenset = frozenset()
    generators: tuple = ()
    depth: int = 2
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("vertex-support", "thick-generated"):
            raise ValueError(f"unknown subcategory kind {self.kind!r}")
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "generators", tuple(self.generators))

    def support(self) -> frozenset:
        if self.kind == "vertex-support":
            return self.vertices
        out = set()
        for g in self.generators:
            for n in g.degrees():
                out |= cohomology(g, n).support()
        return frozenset(out)

    def contains(self, x: Complex) -> str:
        """"true", "false" or "unknown"."""
        supp = set()
        for n in x.degrees():
            supp |= cohomology(x, n).support()
        if not supp <= self.support():
            return "false"
        if self.kind == "vertex-support":
            return "true"
        pieces = _thick_closure(self.generators, self.depth)
        for n in x.degrees():
            h = cohomology(x, n)
            if not h.is_zero() and not in_additive_closure(h, pieces):
                return "unknown"
        return "true"


@lru_cache(maxsize=None)
def _thick_closure(generators: tuple, depth: int) -> tuple:
    """Representations reached from the generators' cohomology in ``depth`` rounds.

    Each round adds kernels and cokernels of Hom-basis maps and their pairwise
    sums, and middle terms of Ext^1-basis extensions.  Over a hereditary
    category every object of the thick closure has cohomology in the additive
    closure of the limit of this process.
    """
    from .quiverrep import factor_morphism

    found: list[Rep] = []

    def add(m: Rep):
        if m.is_zero():
            return
        if any(m == f for f in found):
            return
        if found and in_additive_closure(m, found):
            return
        found.append(m)

    for g in generators:
        for n in g.degrees():
            add(cohomology(g, n))
    for _ in range(depth):
        current = list(found)
        for m in current:
            for n in current:
                basis = hom_basis(m, n)
                maps = list(basis) + [basis[i] + basis[j] for i in range(len(basis)) for j in range(i + 1, len(basis))]
                for f in maps:
                    fac = factor_morphism(f)
                    add(fac.kernel)
                    add(fac.cokernel)
                for e in derived_hom_basis(Complex.concentrated(m), Complex.concentrated(n), 1):
                    mid = cone(e.representative).complex
                    for k in mid.degrees():
                        add(cohomology(mid, k))
    return tuple(found)


def subcat_membership(x: FilteredComplex, d: SubcatPredicate) -> tuple[str, dict]:
    verdicts = {p: d.contains(gr(x, p)) for p in x.filtration_range()}
    vals = set(verdicts.values())
    if "false" in vals:
        return "false", verdicts
    if "unknown" in vals:
        return "unknown", verdicts
    return "true", verdicts
