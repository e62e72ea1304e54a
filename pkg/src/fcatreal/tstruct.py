"""The standard t-structure on D^b(A) and tilts by torsion pairs.

Tilt convention (torsion class T, torsion-free class F):

    C^{t<=n} = {X : H^k X = 0 for k > n, H^n X in T}
    C^{t>=n} = {X : H^k X = 0 for k < n-1, H^(n-1) X in F}

The standard t-structure is the case T = everything, F = 0, and both share
one implementation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .exactla import Subspace, hstack
from .quiverrep import Rep, SubRep, TorsionPair, direct_sum, trace_radical
from .complexes import (
    Complex,
    RepMor,
    Truncation,
    cohomology,
    cohomology_piece,
    is_acyclic,
    shift,
    truncation_from_sub,
)
from .fcat import CheckRecord, FilteredComplex, filt_shift_s, gr


@dataclass(frozen=True)
class TStructureSpec:
    kind: str = "standard"
    torsion: Optional[TorsionPair] = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("standard", "tilt"):
            raise ValueError(f"unknown t-structure kind {self.kind!r}")
        if self.kind == "tilt" and self.torsion is None:
            raise ValueError("a tilted t-structure needs a torsion pair")

    @classmethod
    def standard(cls) -> "TStructureSpec":
        return cls("standard", None, "standard")

    @classmethod
    def tilt(cls, torsion: TorsionPair) -> "TStructureSpec":
        return cls("tilt", torsion, torsion.name)

    def label(self) -> str:
        return self.name or self.kind


@lru_cache(maxsize=None)
def torsion_split(t: TStructureSpec, m: Rep) -> tuple[SubRep, Rep]:
    """(tM as a subrepresentation, M / tM); raises TorsionPairError when uncertified."""
    if t.kind == "standard":
        return SubRep.whole(m), Rep.zero(m.quiver)
    tm, quotient, _ = trace_radical(t.torsion, m)
    return tm, quotient


def in_torsion_class(t: TStructureSpec, m: Rep) -> bool:
    return torsion_split(t, m)[0].is_whole()


def in_torsion_free_class(t: TStructureSpec, m: Rep) -> bool:
    return torsion_split(t, m)[0].is_zero()


def _window(x: Complex) -> range:
    if x.is_zero():
        return range(0)
    return range(x.lo, x.hi + 1)


def in_aisle(x: Complex, n: int, t: TStructureSpec) -> bool:
    """Membership in C^{t<=n}, read off classical cohomology."""
    for k in _window(x):
        h = cohomology(x, k)
        if k > n and not h.is_zero():
            return False
        if k == n and not in_torsion_class(t, h):
            return False
    return True


def in_coaisle(x: Complex, n: int, t: TStructureSpec) -> bool:
    """Membership in C^{t>=n}, read off classical cohomology."""
    for k in _window(x):
        h = cohomology(x, k)
        if k < n - 1 and not h.is_zero():
            return False
        if k == n - 1 and not in_torsion_free_class(t, h):
            return False
    return True


def truncate_t(x: Complex, n: int, t: TStructureSpec) -> Truncation:
    """``tau_{<=n} x -> x -> tau_{>=n+1} x`` as a subcomplex and its quotient.

    The subcomplex keeps every term below ``n``, the cycles whose class lies
    in the torsion part of ``H^n`` in degree ``n``, and nothing above.
    """
    subs = {}
    for k in x.degrees():
        if k == n:
            piece = cohomology_piece(x, k)
            tm, _ = torsion_split(t, piece.rep)
            spaces = []
            for small, sec, sp in zip(piece.small.spaces, piece.to_ambient, tm.spaces):
                spaces.append(Subspace.span(hstack([small.basis, sec @ sp.basis], nrows=small.ambient_dim)))
            subs[k] = SubRep(x.term(k), tuple(spaces))
        elif k > n:
            subs[k] = SubRep.zero(x.term(k))
    return truncation_from_sub(x, subs)


@dataclass(frozen=True)
class HeartObject:
    value: Complex
    tspec: TStructureSpec
    checked: tuple  # degrees where t-cohomology was checked to vanish

    def __repr__(self):
        return f"HeartObject({self.value!r})"


def cohomology_t_model(x: Complex, k: int, t: TStructureSpec) -> Complex:
    """``(tau_{>=k} tau_{<=k} x)[k]`` computed through the truncation models."""
    le = truncate_t(x, k, t).le
    ge = truncate_t(le, k - 1, t).ge
    return shift(ge, k)


def cohomology_t(x: Complex, k: int, t: TStructureSpec) -> HeartObject:
    """The k-th t-cohomology object as a complex with zero differential.

    Its degree -1 term is the torsion-free part of ``H^(k-1) x`` and its
    degree 0 term the torsion part of ``H^k x``.  Over a hereditary category
    this split form is isomorphic to the truncation model.
    """
    q = x.quiver
    top = torsion_split(t, cohomology(x, k))[0].as_rep() if k in _window(x) else Rep.zero(q)
    bottom = torsion_split(t, cohomology(x, k - 1))[1] if (k - 1) in _window(x) else Rep.zero(q)
    value = Complex.from_dict(q, {-1: bottom, 0: top}, check=False)
    return HeartObject(value, t, (k,))


def heart_contains(x: Complex, t: TStructureSpec) -> tuple[bool, HeartObject | tuple]:
    """Whether ``x`` lies in the heart; the certificate lists checked degrees."""
    if x.is_zero():
        return True, HeartObject(x, t, ())
    window = range(x.lo - 1, x.hi + 2)
    bad = tuple(k for k in window if k != 0 and not cohomology_t(x, k, t).value.is_zero())
    if bad:
        return False, bad
    return True, HeartObject(x, t, tuple(window))


def is_heart_object(x: Complex, t: TStructureSpec) -> bool:
    return heart_contains(x, t)[0]


# -- the compatible t-structure on filtered complexes ------------------------------------

def cf_t_membership(x: FilteredComplex, side: str, t: TStructureSpec, n: int = 0) -> bool:
    """``x`` in CF^{t<=n} (side "le") or CF^{t>=n} (side "ge").

    Graded test: ``gr^p x`` must lie in C^{t<=p+n}, respectively C^{t>=p+n}.
    """
    if side not in ("le", "ge"):
        raise ValueError("side must be 'le' or 'ge'")
    test = in_aisle if side == "le" else in_coaisle
    return all(test(gr(x, p), p + n, t) for p in x.filtration_range())


def cf_heart_contains(x: FilteredComplex, t: TStructureSpec) -> tuple[bool, dict, Optional[int]]:
    """Heart of the compatible t-structure: every ``gr^p[p]`` is a heart object.

    Returns (verdict, pieces ``{p: gr^p[p]}``, first failing ``p``).
    """
    pieces = {}
    for p in x.filtration_range():
        m = shift(gr(x, p), p)
        if not is_heart_object(m, t):
            return False, pieces, p
        if not is_acyclic(m):
            pieces[p] = m
    return True, pieces, None


def check_cf_shift_law(samples, t: TStructureSpec, window: int = 2) -> CheckRecord:
    """``x`` in CF^{t<=n} iff ``s x`` in CF^{t<=n-1}, and likewise for ``>=``."""
    bad = []
    for i, x in enumerate(samples):
        sx = filt_shift_s(x, 1)
        for n in range(-window, window + 1):
            for side in ("le", "ge"):
                if cf_t_membership(x, side, t, n) != cf_t_membership(sx, side, t, n - 1):
                    bad.append(f"sample {i}: side {side}, n = {n}")
    return CheckRecord("cf-t-shift", "fail" if bad else "pass", bad, {"samples": len(samples)})


def check_trivial_heart(objects, t: TStructureSpec) -> CheckRecord:
    """Heart objects, trivially filtered at 0, lie in the heart of CF; non-heart objects do not."""
    bad = []
    for name, m in objects:
        inside = is_heart_object(m, t)
        if cf_heart_contains(FilteredComplex.trivial(m), t)[0] != inside:
            bad.append(name)
    return CheckRecord("cf-heart-trivial", "fail" if bad else "pass", bad, {"objects": len(objects)})
