"""Bounded cochain complexes of quiver representations.

Conventions (fixed everywhere):

* ``X[k]^n = X^(n+k)`` with differential ``(-1)^k d``; chain maps shift
  without sign, ``f[k]^n = f^(n+k)``.
* ``cone(f: X -> Y)^n = X^(n+1) (+) Y^n`` with differential
  ``[[-d_X, 0], [f, d_Y]]``.
* Derived morphisms ``X -> Y`` are homotopy classes of chain maps out of the
  cellular replacement of ``X``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .exactla import Mat, Fraction, ZERO, hstack, rank, solve, nullspace_vectors, _eliminate
from .quiverrep import (
    Quiver,
    Rep,
    RepMor,
    SubRep,
    SubQuotient,
    block_mor,
    combine,
    direct_sum,
    hom_basis,
    image_subrep,
    is_projective,
    kernel_subrep,
    resolve_morphism,
    standard_resolution,
    subquotient,
    unflatten_mor,
)


class ComplexError(ValueError):
    pass


class SolverInfeasible(RuntimeError):
    """A linear system that theory says is solvable had no solution."""


class Complex:
    """``terms[i]`` sits in degree ``lo + i``; ``diffs[i]: terms[i] -> terms[i+1]``."""

    __slots__ = ("quiver", "lo", "terms", "diffs", "_hash")

    def __init__(self, quiver: Quiver, lo: int, terms: Sequence[Rep], diffs: Sequence[RepMor] = (), check: bool = True):
        terms = list(terms)
        diffs = list(diffs)
        if terms and len(diffs) != len(terms) - 1:
            raise ComplexError("need exactly one differential between consecutive terms")
        while terms and terms[0].is_zero():
            terms.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while terms and terms[-1].is_zero():
            terms.pop()
            if diffs:
                diffs.pop()
        if not terms:
            lo = 0
            diffs = []
        self.quiver = quiver
        self.lo = lo
        self.terms = tuple(terms)
        self.diffs = tuple(diffs)
        self._hash = None
        if check:
            for i, d in enumerate(self.diffs):
                if d.source != self.terms[i] or d.target != self.terms[i + 1]:
                    raise ComplexError(f"differential in degree {lo + i} has wrong endpoints")
            for i in range(len(self.diffs) - 1):
                if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                    raise ComplexError(f"d^{lo + i + 1} o d^{lo + i} != 0")

    @classmethod
    def from_dict(cls, quiver: Quiver, terms: Mapping[int, Rep], diffs: Mapping[int, RepMor] = None, check=True) -> "Complex":
        diffs = diffs or {}
        if not terms:
            return cls(quiver, 0, ())
        lo, hi = min(terms), max(terms)
        ts = [terms.get(n) or Rep.zero(quiver) for n in range(lo, hi + 1)]
        ds = [diffs.get(n) or RepMor.zero(ts[n - lo], ts[n - lo + 1]) for n in range(lo, hi)]
        return cls(quiver, lo, ts, ds, check=check)

    @classmethod
    def concentrated(cls, m: Rep, degree: int = 0) -> "Complex":
        return cls(m.quiver, degree, (m,))

    @classmethod
    def zero(cls, quiver: Quiver) -> "Complex":
        return cls(quiver, 0, ())

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, n: int) -> Rep:
        if self.lo <= n <= self.hi:
            return self.terms[n - self.lo]
        return Rep.zero(self.quiver)

    def diff(self, n: int) -> RepMor:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return RepMor.zero(self.term(n), self.term(n + 1))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.quiver == other.quiver and self.lo == other.lo
                and self.terms == other.terms and self.diffs == other.diffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.quiver, self.lo, self.terms, self.diffs))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "Complex(0)"
        body = " -> ".join(f"{n}:{t.dims}" for n, t in zip(self.degrees(), self.terms))
        return f"Complex({body})"

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {n: self.term(n).identity() for n in self.degrees()}, check=False)

    def zero_map(self, target: "Complex") -> "ChainMap":
        return ChainMap(self, target, {}, check=False)

    def is_projective(self) -> bool:
        return all(is_projective(t) for t in self.terms)


class ChainMap:
    __slots__ = ("source", "target", "comps", "_hash")

    def __init__(self, source: Complex, target: Complex, comps: Mapping[int, RepMor], check: bool = True):
        kept = {}
        for n in source.degrees():
            c = comps.get(n)
            if c is None or target.term(n).is_zero():
                continue
            if c.source != source.term(n) or c.target != target.term(n):
                raise ComplexError(f"chain map component in degree {n} has wrong endpoints")
            if not c.is_zero():
                kept[n] = c
        self.source = source
        self.target = target
        self.comps = kept
        self._hash = None
        if check:
            bad = self.chain_defect()
            if bad is not None:
                raise ComplexError(f"not a chain map: fails in degree {bad}")

    def comp(self, n: int) -> RepMor:
        c = self.comps.get(n)
        return c if c is not None else RepMor.zero(self.source.term(n), self.target.term(n))

    def chain_defect(self) -> Optional[int]:
        lo = min(self.source.lo, self.target.lo) - 1
        hi = max(self.source.hi, self.target.hi) + 1
        for n in range(lo, hi):
            lhs = self.target.diff(n) @ self.comp(n)
            rhs = self.comp(n + 1) @ self.source.diff(n)
            if lhs != rhs:
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, tuple(sorted(self.comps.items(), key=lambda kv: kv[0]))))
        return self._hash

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise ComplexError("composing non-composable chain maps")
        comps = {n: self.comp(n) @ other.comp(n) for n in other.source.degrees()}
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        comps = {n: self.comp(n) + other.comp(n) for n in self.source.degrees()}
        return ChainMap(self.source, self.target, comps, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -c for n, c in self.comps.items()}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: m.scale(c) for n, m in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return not self.comps

    def shift(self, k: int) -> "ChainMap":
        src, tgt = shift(self.source, k), shift(self.target, k)
        return ChainMap(src, tgt, {n - k: c for n, c in self.comps.items()}, check=False)


@dataclass(frozen=True)
class Homotopy:
    """``f - g = d h + h d`` with ``h^n: X^n -> Y^(n-1)``."""

    f: ChainMap
    g: ChainMap
    comps: tuple  # ((n, RepMor), ...)

    def comp(self, n: int) -> RepMor:
        for k, c in self.comps:
            if k == n:
                return c
        return RepMor.zero(self.f.source.term(n), self.f.target.term(n - 1))

    def verify(self) -> bool:
        x, y = self.f.source, self.f.target
        diff = self.f - self.g
        for n in range(min(x.lo, y.lo) - 1, max(x.hi, y.hi) + 2):
            rhs = y.diff(n - 1) @ self.comp(n) + self.comp(n + 1) @ x.diff(n)
            if diff.comp(n) != rhs:
                return False
        return True


# -- basic constructions ---------------------------------------------------------------

def shift(x: Complex, k: int) -> Complex:
    if k == 0 or x.is_zero():
        return x
    sign = -1 if k % 2 else 1
    diffs = [d.scale(sign) if sign < 0 else d for d in x.diffs]
    return Complex(x.quiver, x.lo - k, x.terms, diffs, check=False)


def direct_sum_complex(parts: Sequence[Complex], quiver: Quiver) -> tuple[Complex, list[ChainMap], list[ChainMap]]:
    """Sum with its canonical inclusions and projections."""
    nonzero = [p for p in parts if not p.is_zero()]
    if not nonzero:
        z = Complex.zero(quiver)
        return z, [p.zero_map(z) for p in parts], [z.zero_map(p) for p in parts]
    lo = min(p.lo for p in nonzero)
    hi = max(p.hi for p in nonzero)
    terms = {n: direct_sum([p.term(n) for p in parts], quiver) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        srcs = [p.term(n) for p in parts]
        tgts = [p.term(n + 1) for p in parts]
        blocks = [[p.diff(n) if i == j else None for j, _ in enumerate(parts)] for i, p in enumerate(parts)]
        diffs[n] = block_mor(srcs, tgts, blocks)
    total = Complex.from_dict(quiver, terms, diffs, check=False)
    incs, projs = [], []
    for i, p in enumerate(parts):
        ic, pc = {}, {}
        for n in range(lo, hi + 1):
            srcs = [q.term(n) for q in parts]
            ic[n] = block_mor([p.term(n)], srcs, [[p.term(n).identity() if j == i else None] for j in range(len(parts))])
            pc[n] = block_mor(srcs, [p.term(n)], [[p.term(n).identity() if j == i else None for j in range(len(parts))]])
            ic[n] = RepMor(p.term(n), total.term(n), ic[n].comps, check=False)
            pc[n] = RepMor(total.term(n), p.term(n), pc[n].comps, check=False)
        incs.append(ChainMap(p, total, ic, check=False))
        projs.append(ChainMap(total, p, pc, check=False))
    return total, incs, projs


@dataclass(frozen=True)
class Cone:
    complex: Complex
    source: Complex  # X
    target: Complex  # Y
    f: ChainMap
    inclusion: ChainMap  # Y -> C
    projection: ChainMap  # C -> X[1]

    def inclusion_homotopy(self) -> Homotopy:
        """Null-homotopy of ``inclusion o f``: h(x) = (x, 0)."""
        x, c = self.source, self.complex
        comps = []
        for n in x.degrees():
            if c.term(n - 1).is_zero():
                continue
            blocks = [[x.term(n).identity()], [None]]
            m = block_mor([x.term(n)], [x.term(n), self.target.term(n - 1)], blocks)
            comps.append((n, RepMor(x.term(n), c.term(n - 1), m.comps, check=False)))
        comp = self.inclusion @ self.f
        return Homotopy(comp, comp.source.zero_map(comp.target), tuple(comps))

    def projection_homotopy(self) -> Homotopy:
        """Null-homotopy of ``f[1] o projection``: h(x, y) = y."""
        c, y = self.complex, self.target
        y1 = shift(y, 1)
        comps = []
        for n in c.degrees():
            if y1.term(n - 1).is_zero():
                continue
            m = block_mor([self.source.term(n + 1), y.term(n)], [y.term(n)], [[None, y.term(n).identity()]])
            comps.append((n, RepMor(c.term(n), y1.term(n - 1), m.comps, check=False)))
        comp = self.f.shift(1) @ self.projection
        return Homotopy(comp, comp.source.zero_map(comp.target), tuple(comps))


def cone(f: ChainMap) -> Cone:
    x, y = f.source, f.target
    q = x.quiver
    if x.is_zero() and y.is_zero():
        z = Complex.zero(q)
        return Cone(z, x, y, f, y.zero_map(z), z.zero_map(shift(x, 1)))
    ends = ([(x.lo - 1, x.hi - 1)] if not x.is_zero() else []) + ([(y.lo, y.hi)] if not y.is_zero() else [])
    lo = min(a for a, _ in ends)
    hi = max(b for _, b in ends)
    terms, diffs = {}, {}
    parts = {n: [x.term(n + 1), y.term(n)] for n in range(lo, hi + 2)}
    for n in range(lo, hi + 1):
        terms[n] = direct_sum(parts[n], q)
    for n in range(lo, hi):
        blocks = [[-x.diff(n + 1), None], [f.comp(n + 1), y.diff(n)]]
        diffs[n] = block_mor(parts[n], parts[n + 1], blocks)
    c = Complex.from_dict(q, terms, diffs)
    inc, proj = {}, {}
    for n in range(lo, hi + 1):
        inc[n] = RepMor(y.term(n), c.term(n), block_mor([y.term(n)], parts[n], [[None], [y.term(n).identity()]]).comps, check=False)
        proj[n] = RepMor(c.term(n), x.term(n + 1), block_mor(parts[n], [x.term(n + 1)], [[x.term(n + 1).identity(), None]]).comps, check=False)
    inclusion = ChainMap(y, c, inc)
    projection = ChainMap(c, shift(x, 1), proj)
    return Cone(c, x, y, f, inclusion, projection)


# -- subquotient complexes ------------------------------------------------------------

@dataclass(frozen=True)
class SubQuotientComplex:
    """``big / small`` for nested per-degree subcomplexes of ``ambient``."""

    ambient: Complex
    complex: Complex
    pieces: tuple  # ((n, SubQuotient), ...) for the ambient degrees

    def piece(self, n: int) -> SubQuotient:
        for k, p in self.pieces:
            if k == n:
                return p
        return None

    def section(self, n: int) -> Mat:
        p = self.piece(n)
        return p.to_ambient if p else None

    def inclusion(self) -> ChainMap:
        """Into the ambient; valid when ``small`` is zero."""
        return ChainMap(self.complex, self.ambient,
                        {n: p.to_ambient_mor() for n, p in self.pieces if not p.rep.is_zero()}, check=False)

    def projection(self) -> ChainMap:
        """From the ambient; valid when ``big`` is everything."""
        return ChainMap(self.ambient, self.complex,
                        {n: RepMor(p.ambient, self.complex.term(n), p.from_ambient, check=False)
                         for n, p in self.pieces if not p.rep.is_zero()}, check=False)

    def induced_to(self, other: "SubQuotientComplex", f: ChainMap) -> ChainMap:
        """Map ``self -> other`` induced by an ambient chain map respecting both."""
        comps = {}
        for n, p in self.pieces:
            o = other.piece(n)
            if o is None or p.rep.is_zero() or o.rep.is_zero():
                continue
            comps[n] = RepMor(self.complex.term(n), other.complex.term(n),
                              tuple(a @ m @ b for a, m, b in zip(o.from_ambient, f.comp(n).comps, p.to_ambient)), check=False)
        return ChainMap(self.complex, other.complex, comps, check=False)


def subquotient_complex(x: Complex, big: Mapping[int, SubRep], small: Mapping[int, SubRep]) -> SubQuotientComplex:
    """Missing degrees default to everything for ``big`` and zero for ``small``."""
    pieces = []
    for n in x.degrees():
        t = x.term(n)
        b = big.get(n) or SubRep.whole(t)
        s = small.get(n) or SubRep.zero(t)
        pieces.append((n, subquotient(t, b, s)))
    pmap = dict(pieces)
    terms = {n: p.rep for n, p in pieces}
    diffs = {}
    for n in x.degrees():
        if n + 1 in pmap:
            diffs[n] = pmap[n].induced(pmap[n + 1], x.diff(n).comps)
    c = Complex.from_dict(x.quiver, terms, diffs, check=False) if terms else Complex.zero(x.quiver)
    return SubQuotientComplex(x, c, tuple(pieces))


def check_subcomplex(x: Complex, subs: Mapping[int, SubRep]) -> bool:
    for n in x.degrees():
        s = subs.get(n) or SubRep.whole(x.term(n))
        t = subs.get(n + 1) if n + 1 in subs else SubRep.whole(x.term(n + 1))
        for sp, tp, d in zip(s.spaces, t.spaces, x.diff(n).comps):
            if not tp.contains(d @ sp.basis):
                return False
    return True


def cycles(x: Complex, n: int) -> SubRep:
    return kernel_subrep(x.diff(n))


def boundaries(x: Complex, n: int) -> SubRep:
    return image_subrep(x.diff(n - 1))


def cohomology_piece(x: Complex, n: int) -> SubQuotient:
    t = x.term(n)
    return subquotient(t, cycles(x, n), boundaries(x, n))


def cohomology(x: Complex, n: int) -> Rep:
    return cohomology_piece(x, n).rep


def is_acyclic(x: Complex) -> bool:
    return all(cohomology(x, n).is_zero() for n in x.degrees())


def cohomology_dims(x: Complex) -> dict[int, tuple]:
    return {n: cohomology(x, n).dims for n in x.degrees() if not cohomology(x, n).is_zero()}


def induced_on_cohomology(f: ChainMap, n: int) -> RepMor:
    a, b = cohomology_piece(f.source, n), cohomology_piece(f.target, n)
    return a.induced(b, f.comp(n).comps)


def is_qis(f: ChainMap) -> tuple[bool, Optional[int]]:
    """Whether ``f`` is a quasi-isomorphism; otherwise the first bad degree."""
    lo = min(f.source.lo, f.target.lo) if not (f.source.is_zero() and f.target.is_zero()) else 0
    hi = max(f.source.hi, f.target.hi) if not (f.source.is_zero() and f.target.is_zero()) else -1
    for n in range(lo, hi + 1):
        h = induced_on_cohomology(f, n)
        if h.source.dims != h.target.dims or not h.is_iso():
            return False, n
    return True, None


@dataclass(frozen=True)
class Truncation:
    le: Complex
    le_map: ChainMap  # le -> x
    ge: Complex
    ge_map: ChainMap  # x -> ge
    sub: SubQuotientComplex
    quot: SubQuotientComplex

    def connecting(self) -> "DerivedMor":
        return connecting_morphism(self.sub, self.quot)


def truncation_from_sub(x: Complex, subs: Mapping[int, SubRep]) -> Truncation:
    zero = {n: SubRep.zero(x.term(n)) for n in x.degrees()}
    full = {n: SubRep.whole(x.term(n)) for n in x.degrees()}
    big = {**full, **subs}
    sub = subquotient_complex(x, big, zero)
    quot = subquotient_complex(x, full, big)
    return Truncation(sub.complex, sub.inclusion(), quot.complex, quot.projection(), sub, quot)


def truncate_std(x: Complex, n: int) -> Truncation:
    """``tau_{<=n} x`` as the subcomplex ending in ker d^n, and the quotient."""
    subs = {}
    for k in x.degrees():
        if k == n:
            subs[k] = cycles(x, k)
        elif k > n:
            subs[k] = SubRep.zero(x.term(k))
    return truncation_from_sub(x, subs)


# -- cellular replacement -------------------------------------------------------------

@dataclass(frozen=True)
class Replacement:
    complex: Complex
    qis: ChainMap


def tot_resolution(x: Complex) -> Replacement:
    q = x.quiver
    res = {n: standard_resolution(x.term(n)) for n in range(x.lo, x.hi + 2)}
    terms, parts = {}, {}
    for n in range(x.lo - 1, x.hi + 1):
        p0 = res[n].p0 if n >= x.lo else Rep.zero(q)
        p1 = res[n + 1].p1 if n + 1 <= x.hi else Rep.zero(q)
        parts[n] = [p0, p1]
        terms[n] = direct_sum(parts[n], q)
    diffs = {}
    for n in range(x.lo - 1, x.hi):
        d1_p1, d1_p0 = resolve_morphism(x.diff(n + 1))
        _, d0_p0 = resolve_morphism(x.diff(n))
        delta = res[n + 1].delta
        blocks = [[d0_p0 if n >= x.lo else None, delta], [None, -d1_p1]]
        # shapes for absent ends
        fixed = []
        for i, row in enumerate(blocks):
            fixed_row = []
            for j, b in enumerate(row):
                if b is not None and (b.source != parts[n][j] or b.target != parts[n + 1][i]):
                    b = RepMor.zero(parts[n][j], parts[n + 1][i])
                fixed_row.append(b)
            fixed.append(fixed_row)
        diffs[n] = block_mor(parts[n], parts[n + 1], fixed)
    p = Complex.from_dict(q, terms, diffs)
    qis = {}
    for n in x.degrees():
        eps = res[n].epsilon
        qis[n] = block_mor(parts[n], [x.term(n)], [[eps, None]])
        qis[n] = RepMor(p.term(n), x.term(n), qis[n].comps, check=False)
    return Replacement(p, ChainMap(p, x, qis))


def tot_resolution_map(f: ChainMap, src: Replacement, tgt: Replacement) -> ChainMap:
    """The chain map between standard-resolution totalizations induced by ``f``."""
    x, y = f.source, f.target
    comps = {}
    for n in src.complex.degrees():
        p1f, _ = resolve_morphism(f.comp(n + 1))
        _, p0f = resolve_morphism(f.comp(n))
        sparts = [standard_resolution(x.term(n)).p0 if x.lo <= n <= x.hi else Rep.zero(x.quiver),
                  standard_resolution(x.term(n + 1)).p1 if x.lo <= n + 1 <= x.hi else Rep.zero(x.quiver)]
        tparts = [standard_resolution(y.term(n)).p0 if y.lo <= n <= y.hi else Rep.zero(x.quiver),
                  standard_resolution(y.term(n + 1)).p1 if y.lo <= n + 1 <= y.hi else Rep.zero(x.quiver)]
        b00 = p0f if (p0f.source == sparts[0] and p0f.target == tparts[0]) else RepMor.zero(sparts[0], tparts[0])
        b11 = p1f if (p1f.source == sparts[1] and p1f.target == tparts[1]) else RepMor.zero(sparts[1], tparts[1])
        m = block_mor(sparts, tparts, [[b00, None], [None, b11]])
        comps[n] = RepMor(src.complex.term(n), tgt.complex.term(n), m.comps, check=False)
    return ChainMap(src.complex, tgt.complex, comps)


@lru_cache(maxsize=None)
def cellular_replacement(x: Complex) -> Replacement:
    """Bounded complex of projectives with a quasi-isomorphism onto ``x``.

    Complexes whose terms are already projective are returned unchanged.
    Otherwise the standard resolutions of the terms are totalized, which
    widens the support by one degree at the bottom.
    """
    if x.is_projective():
        return Replacement(x, x.identity())
    return tot_resolution(x)


# -- graded families of morphisms as flat vectors ----------------------------------------

class Layout:
    """Coordinates for families ``x^n -> y^(n+deg)``."""

    def __init__(self, x: Complex, y: Complex, deg: int):
        self.x, self.y, self.deg = x, y, deg
        self.degrees = [n for n in x.degrees() if not y.term(n + deg).is_zero()]
        self.offsets = {}
        pos = 0
        for n in self.degrees:
            self.offsets[n] = pos
            pos += sum(a * b for a, b in zip(x.term(n).dims, y.term(n + deg).dims))
        self.size = pos

    def flatten(self, comps: Callable[[int], RepMor]) -> list:
        out = []
        for n in self.degrees:
            out.extend(comps(n).flat())
        return out

    def unflatten(self, vec) -> dict[int, RepMor]:
        out = {}
        for n in self.degrees:
            src, tgt = self.x.term(n), self.y.term(n + self.deg)
            size = sum(a * b for a, b in zip(src.dims, tgt.dims))
            out[n] = unflatten_mor(src, tgt, vec[self.offsets[n]:self.offsets[n] + size])
        return out

    def embed(self, n: int, mor: RepMor) -> list:
        vec = [ZERO] * self.size
        flat = mor.flat()
        vec[self.offsets[n]:self.offsets[n] + len(flat)] = flat
        return vec


Constraint = Optional[Callable[[int, Sequence[RepMor]], Optional[Mat]]]


def family_basis(x: Complex, y: Complex, deg: int, constraint: Constraint = None) -> list[tuple[int, RepMor]]:
    """Basis of morphism families, degree by degree, optionally constrained.

    ``constraint(n, basis)`` returns a matrix whose nullspace (in the
    coefficients of ``basis``) is the allowed subspace in degree ``n``.
    """
    out = []
    for n in x.degrees():
        src, tgt = x.term(n), y.term(n + deg)
        if tgt.is_zero():
            continue
        basis = hom_basis(src, tgt)
        if not basis:
            continue
        if constraint is not None:
            cm = constraint(n, basis)
            if cm is not None:
                for coeffs in nullspace_vectors(cm):
                    out.append((n, combine(basis, coeffs, src, tgt)))
                continue
        out.extend((n, b) for b in basis)
    return out


def _single(n: int, mor: RepMor) -> Callable[[int], RepMor]:
    def get(k):
        if k == n:
            return mor
        return None
    return get


def _defect_vector(x: Complex, y: Complex, n: int, mor: RepMor, out: Layout) -> list:
    """Flat ``d_y f - f d_x`` for a degree-0 family supported in degree ``n``."""
    vec = [ZERO] * out.size
    # contributes d_y^n f^n in degree n and -f^n d_x^(n-1) in degree n-1
    a = y.diff(n) @ mor
    if n in out.offsets:
        f = a.flat()
        o = out.offsets[n]
        vec[o:o + len(f)] = f
    if n - 1 in out.offsets:
        b = (mor @ x.diff(n - 1)).flat()
        o = out.offsets[n - 1]
        for i, v in enumerate(b):
            if v:
                vec[o + i] -= v
    return vec


def _boundary_vector(x: Complex, y: Complex, n: int, h: RepMor, out: Layout) -> list:
    """Flat ``d h + h d`` for ``h: x^n -> y^(n-1)``."""
    vec = [ZERO] * out.size
    if n in out.offsets:
        f = (y.diff(n - 1) @ h).flat()
        o = out.offsets[n]
        for i, v in enumerate(f):
            if v:
                vec[o + i] += v
    if n - 1 in out.offsets:
        f = (h @ x.diff(n - 1)).flat()
        o = out.offsets[n - 1]
        for i, v in enumerate(f):
            if v:
                vec[o + i] += v
    return vec


def _columns(vectors: Sequence[Sequence], size: int) -> Mat:
    return Mat.from_columns(list(vectors), size) if vectors else Mat.zeros(size, 0)


def independent_modulo(base: Sequence[Sequence], candidates: Sequence[Sequence], size: int) -> list[int]:
    """Indices of a maximal subset of ``candidates`` independent modulo span(base)."""
    cols = list(base) + list(candidates)
    if not cols:
        return []
    m = _columns(cols, size)
    rows = [{j: x for j, x in enumerate(r) if x} for r in m.rows]
    _, pivots = _eliminate(rows, len(cols))
    nb = len(base)
    return [p - nb for p in pivots if p >= nb]


@dataclass
class HomClasses:
    """Chain maps x -> y modulo homotopy, possibly under filtration constraints."""

    layout: Layout
    cycles: list  # flat chain-map vectors (basis)
    boundaries: list  # flat null-homotopic vectors (spanning)
    classes: list  # ChainMap representatives of a basis of the quotient
    homotopy_basis: list  # (n, RepMor) generating the boundaries

    @property
    def dim(self) -> int:
        return len(self.classes)

    def flat(self, f: ChainMap) -> list:
        return self.layout.flatten(f.comp)

    def is_null(self, f: ChainMap) -> bool:
        return not independent_modulo(self.boundaries, [self.flat(f)], self.layout.size)

    def rank_of(self, maps: Sequence[ChainMap]) -> int:
        return len(independent_modulo(self.boundaries, [self.flat(f) for f in maps], self.layout.size))

    def coordinates(self, f: ChainMap) -> Optional[list]:
        """Coefficients of ``f`` on :attr:`classes` (mod boundaries), or None."""
        size = self.layout.size
        cols = [self.flat(c) for c in self.classes] + list(self.boundaries)
        a = _columns(cols, size)
        rhs = self.flat(f)
        res = solve(a, Mat.column(rhs) if size else Mat.zeros(0, 1))
        if res is None:
            return None
        return [r[0] for r in res[0].rows[:len(self.classes)]]

    def null_homotopy(self, f: ChainMap) -> Optional[Homotopy]:
        size = self.layout.size
        cols = [_boundary_vector(self.layout.x, self.layout.y, n, h, self.layout) for n, h in self.homotopy_basis]
        a = _columns(cols, size)
        rhs = self.flat(f)
        res = solve(a, Mat.column(rhs) if size else Mat.zeros(0, 1))
        if res is None:
            return None
        coeffs = [r[0] for r in res[0].rows]
        comps: dict[int, RepMor] = {}
        for (n, h), c in zip(self.homotopy_basis, coeffs):
            if c:
                comps[n] = comps[n] + h.scale(c) if n in comps else h.scale(c)
        zero = f.source.zero_map(f.target)
        return Homotopy(f, zero, tuple(sorted(comps.items(), key=lambda kv: kv[0])))


def hom_classes(x: Complex, y: Complex, constraint: Constraint = None, homotopy_constraint: Constraint = None) -> HomClasses:
    layout = Layout(x, y, 0)
    defect_layout = Layout(x, y, 1)
    fam = family_basis(x, y, 0, constraint)
    defects = [_defect_vector(x, y, n, m, defect_layout) for n, m in fam]
    a = _columns(defects, defect_layout.size)
    coeff_sols = nullspace_vectors(a) if fam else []
    cyc = []
    for coeffs in coeff_sols:
        vec = [ZERO] * layout.size
        for (n, m), c in zip(fam, coeffs):
            if c:
                o = layout.offsets[n]
                for i, v in enumerate(m.flat()):
                    if v:
                        vec[o + i] += c * v
        cyc.append(vec)
    hbasis = family_basis(x, y, -1, homotopy_constraint)
    bnd = [_boundary_vector(x, y, n, h, layout) for n, h in hbasis]
    idx = independent_modulo(bnd, cyc, layout.size)
    classes = [ChainMap(x, y, layout.unflatten(cyc[i]), check=False) for i in idx]
    return HomClasses(layout, cyc, bnd, classes, hbasis)


_hom_classes_cached = lru_cache(maxsize=None)(lambda x, y: hom_classes(x, y))


def chain_maps_mod_homotopy(x: Complex, y: Complex) -> HomClasses:
    return _hom_classes_cached(x, y)


def solve_up_to_homotopy(candidates: Sequence[ChainMap], target: ChainMap, classes: HomClasses) -> Optional[list]:
    """Coefficients ``a`` with ``sum a_i c_i - target`` null-homotopic."""
    size = classes.layout.size
    cols = [classes.flat(c) for c in candidates] + [[-v for v in b] for b in classes.boundaries]
    a = _columns(cols, size)
    rhs = classes.flat(target)
    res = solve(a, Mat.column(rhs) if size else Mat.zeros(0, 1))
    if res is None:
        return None
    return [r[0] for r in res[0].rows[:len(candidates)]]


def lift_through_qis(r: ChainMap, qis: ChainMap) -> ChainMap:
    """``L: P -> Q`` with ``qis o L`` homotopic to ``r: P -> Y``.

    ``P`` must be a bounded complex of projectives and ``qis: Q -> Y`` a
    quasi-isomorphism; then a lift exists and is unique up to homotopy.
    """
    p, qq = r.source, qis.source
    maps = chain_maps_mod_homotopy(p, qq)
    target_classes = chain_maps_mod_homotopy(p, r.target)
    basis = [ChainMap(p, qq, maps.layout.unflatten(v), check=False) for v in maps.cycles]
    composed = [qis @ b for b in basis]
    coeffs = solve_up_to_homotopy(composed, r, target_classes)
    if coeffs is None:
        raise SolverInfeasible("no lift through the quasi-isomorphism")
    out = p.zero_map(qq)
    for b, c in zip(basis, coeffs):
        if c:
            out = out + b.scale(c)
    return out


# -- derived morphisms ------------------------------------------------------------

class DerivedMor:
    """A morphism of D^b(A), as a chain map out of the cellular replacement of the source."""

    __slots__ = ("source", "target", "representative")

    def __init__(self, source: Complex, target: Complex, representative: ChainMap):
        rep = cellular_replacement(source)
        if representative.source != rep.complex or representative.target != target:
            raise ComplexError("representative must start at the cellular replacement of the source")
        self.source = source
        self.target = target
        self.representative = representative

    def __repr__(self):
        return f"DerivedMor({self.source!r} -> {self.target!r})"

    @classmethod
    def from_chain_map(cls, f: ChainMap) -> "DerivedMor":
        rep = cellular_replacement(f.source)
        return cls(f.source, f.target, f @ rep.qis)

    @classmethod
    def from_roof(cls, qis: ChainMap, g: ChainMap) -> "DerivedMor":
        """The morphism ``g o qis^-1`` for a quasi-isomorphism ``qis: Q -> X``."""
        x = qis.target
        rep = cellular_replacement(x)
        lift = lift_through_qis(rep.qis, qis)
        return cls(x, g.target, g @ lift)

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "DerivedMor":
        return cls(source, target, cellular_replacement(source).complex.zero_map(target))

    @classmethod
    def identity(cls, x: Complex) -> "DerivedMor":
        return cls(x, x, cellular_replacement(x).qis)

    def _classes(self) -> HomClasses:
        return chain_maps_mod_homotopy(self.representative.source, self.target)

    def is_zero(self) -> bool:
        return self._classes().is_null(self.representative)

    def equals(self, other: "DerivedMor") -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        return self._classes().is_null(self.representative - other.representative)

    def __add__(self, other: "DerivedMor") -> "DerivedMor":
        return DerivedMor(self.source, self.target, self.representative + other.representative)

    def __neg__(self) -> "DerivedMor":
        return DerivedMor(self.source, self.target, -self.representative)

    def __sub__(self, other: "DerivedMor") -> "DerivedMor":
        return self + (-other)

    def scale(self, c) -> "DerivedMor":
        return DerivedMor(self.source, self.target, self.representative.scale(c))

    def __matmul__(self, other: "DerivedMor") -> "DerivedMor":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise ComplexError("composing non-composable derived morphisms")
        lift = lift_through_qis(other.representative, cellular_replacement(self.source).qis)
        return DerivedMor(other.source, self.target, self.representative @ lift)

    def then_chain(self, g: ChainMap) -> "DerivedMor":
        """Post-compose with an honest chain map."""
        return DerivedMor(self.source, g.target, g @ self.representative)

    def shift(self, k: int) -> "DerivedMor":
        rep = cellular_replacement(self.source)
        return DerivedMor.from_roof(rep.qis.shift(k), self.representative.shift(k))

    def is_iso(self) -> bool:
        return is_qis(self.representative)[0]


def derived_hom_basis(x: Complex, y: Complex, shift_by: int = 0) -> list[DerivedMor]:
    """Basis of Hom_{D^b}(x, y[shift_by])."""
    target = shift(y, shift_by)
    rep = cellular_replacement(x)
    classes = chain_maps_mod_homotopy(rep.complex, target)
    return [DerivedMor(x, target, c) for c in classes.classes]


def derived_hom_dim(x: Complex, y: Complex, shift_by: int = 0) -> int:
    return len(derived_hom_basis(x, y, shift_by))


def derived_coordinates(f: DerivedMor) -> Optional[list]:
    return f._classes().coordinates(f.representative)


def combine_derived(basis: Sequence[DerivedMor], coeffs, source: Complex, target: Complex) -> DerivedMor:
    out = DerivedMor.zero(source, target)
    for b, c in zip(basis, coeffs):
        if c:
            out = out + b.scale(c)
    return out


def find_iso(x: Complex, y: Complex, seed: int = 0, attempts: int = 6) -> Optional[DerivedMor]:
    """Search for an isomorphism ``x -> y`` in D^b(A).

    Returns None when cohomology dimensions already differ or no random
    combination of a Hom basis was invertible.
    """
    lo = min(x.lo, y.lo) if not (x.is_zero() or y.is_zero()) else (x.lo if not x.is_zero() else y.lo)
    hi = max(x.hi if not x.is_zero() else lo, y.hi if not y.is_zero() else lo)
    for n in range(lo, hi + 1):
        if cohomology(x, n).dims != cohomology(y, n).dims:
            return None
    if all(cohomology(x, n).is_zero() for n in range(lo, hi + 1)):
        return DerivedMor.zero(x, y)
    basis = derived_hom_basis(x, y, 0)
    if not basis:
        return None
    rng = random.Random(seed)
    for _ in range(attempts):
        f = combine_derived(basis, [rng.randint(-97, 97) for _ in basis], x, y)
        if f.is_iso():
            return f
    return None


def is_zero_object(x: Complex) -> bool:
    return is_acyclic(x)


def connecting_morphism(sub: SubQuotientComplex, quot: SubQuotientComplex) -> DerivedMor:
    """The map ``C -> A[1]`` of the triangle of ``0 -> A -> B -> C -> 0``.

    ``sub`` presents ``A`` as a subcomplex of ``B`` and ``quot`` presents
    ``C = B / A``.  This is minus the class of :func:`lifted_defect`.
    """
    c = quot.complex
    rep = cellular_replacement(c)
    return DerivedMor(c, shift(sub.complex, 1), -lifted_defect(quot, sub, rep.qis))


def lifted_defect(upper: SubQuotientComplex, lower: SubQuotientComplex, q: ChainMap) -> ChainMap:
    """``d l - l d`` for a degreewise lift ``l`` of ``q: P -> upper``, read in ``lower[1]``.

    ``upper = F / G`` and ``lower = G / H`` are stacked subquotients of one
    ambient complex, and ``P`` has projective terms.  The defect lands in
    ``G`` and its image in ``lower`` gives a chain map ``P -> lower[1]``.
    """
    from .quiverrep import lift_through

    x = upper.ambient
    p = q.source
    lifts = {}
    for n in p.degrees():
        up = upper.piece(n)
        if up is None or up.rep.is_zero():
            continue
        t = x.term(n)
        big = subquotient(t, up.big, SubRep.zero(t))
        onto = RepMor(big.rep, up.rep, tuple(fa @ s for fa, s in zip(up.from_ambient, big.to_ambient)), check=False)
        l = lift_through(onto, q.comp(n))
        if l is None:
            raise SolverInfeasible(f"projective lift failed in degree {n}")
        lifts[n] = RepMor(p.term(n), t, tuple(s @ m for s, m in zip(big.to_ambient, l.comps)), check=False)

    def lift(n):
        return lifts.get(n) or RepMor.zero(p.term(n), x.term(n))

    target = shift(lower.complex, 1)
    comps = {}
    for n in p.degrees():
        piece = lower.piece(n + 1)
        if piece is None or piece.rep.is_zero():
            continue
        defect = x.diff(n) @ lift(n) - lift(n + 1) @ p.diff(n)
        comps[n] = RepMor(p.term(n), target.term(n), tuple(fa @ m for fa, m in zip(piece.from_ambient, defect.comps)), check=False)
    return ChainMap(p, target, comps)
