"""Finite-dimensional representations of a finite acyclic quiver over Q.

This is the base abelian category.  It is hereditary: every representation
has the functorial standard resolution

    0 -> (+)_{a: i->j} P(j) (x) M_i  -> (+)_i P(i) (x) M_i -> M -> 0

which the complex layer uses to build projective models.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .exactla import (
    Mat,
    Subspace,
    ZERO,
    ONE,
    block_diag,
    hstack,
    kron,
    nullspace_vectors,
    rank,
    solve,
    vstack,
)


class QuiverError(ValueError):
    pass


class TorsionPairError(ValueError):
    """Raised when a generator list fails the torsion-pair checks at an object."""

    def __init__(self, message: str, obj: "Rep"):
        super().__init__(message)
        self.obj = obj


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (label, source, target)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        arrows = tuple((str(l), str(s), str(t)) for l, s, t in self.arrows)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arrows)
        if len(set(verts)) != len(verts):
            raise QuiverError("duplicate vertex labels")
        labels = [a[0] for a in arrows]
        if len(set(labels)) != len(labels):
            raise QuiverError("duplicate arrow labels")
        for l, s, t in arrows:
            if s not in verts or t not in verts:
                raise QuiverError(f"arrow {l} has an unknown endpoint")
        self._toposort()

    @classmethod
    def linear(cls, n: int) -> "Quiver":
        """The equioriented A_n quiver 1 -> 2 -> ... -> n."""
        verts = tuple(str(i) for i in range(1, n + 1))
        arrows = tuple((f"a{i}", str(i), str(i + 1)) for i in range(1, n))
        return cls(verts, arrows)

    def _toposort(self) -> list[str]:
        indeg = {v: 0 for v in self.vertices}
        for _, _, t in self.arrows:
            indeg[t] += 1
        order = []
        ready = [v for v in self.vertices if indeg[v] == 0]
        while ready:
            v = ready.pop(0)
            order.append(v)
            for _, s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        if len(order) != len(self.vertices):
            raise QuiverError("quiver has a directed cycle")
        return order

    def index(self, v) -> int:
        return self.vertices.index(str(v))

    def arrow_index(self, label) -> int:
        for i, a in enumerate(self.arrows):
            if a[0] == label:
                return i
        raise QuiverError(f"no arrow {label}")

    def paths_from(self, v: str) -> dict[str, list[tuple]]:
        """Paths starting at ``v``, grouped by end vertex, in a fixed order."""
        out: dict[str, list[tuple]] = {w: [] for w in self.vertices}
        frontier = [((), v)]
        while frontier:
            path, end = frontier.pop(0)
            out[end].append(path)
            for l, s, t in self.arrows:
                if s == end:
                    frontier.append((path + (l,), t))
        for w in out:
            out[w].sort(key=lambda p: (len(p), p))
        return out

    def full_subquiver(self, vertices: Sequence[str]) -> "Quiver":
        keep = [v for v in self.vertices if v in set(map(str, vertices))]
        return Quiver(tuple(keep), tuple(a for a in self.arrows if a[1] in keep and a[2] in keep))


class Rep:
    """A representation: a vector space per vertex and a matrix per arrow."""

    __slots__ = ("quiver", "dims", "maps", "_hash")

    def __init__(self, quiver: Quiver, dims, maps=None):
        if isinstance(dims, Mapping):
            dims = tuple(int(dims.get(v, 0)) for v in quiver.vertices)
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(quiver.vertices) or any(d < 0 for d in dims):
            raise QuiverError("bad dimension vector")
        if maps is None:
            maps = {}
        if isinstance(maps, Mapping):
            built = []
            for l, s, t in quiver.arrows:
                m = maps.get(l)
                shape = (dims[quiver.index(t)], dims[quiver.index(s)])
                if m is None:
                    m = Mat.zeros(*shape)
                elif not isinstance(m, Mat):
                    m = Mat(m, ncols=shape[1]) if len(m) else Mat.zeros(shape[0], shape[1])
                built.append(m)
            maps = built
        maps = tuple(maps)
        for (l, s, t), m in zip(quiver.arrows, maps):
            shape = (dims[quiver.index(t)], dims[quiver.index(s)])
            if m.shape != shape:
                raise QuiverError(f"arrow {l}: matrix is {m.shape[0]}x{m.shape[1]}, expected {shape[0]}x{shape[1]}")
        self.quiver = quiver
        self.dims = dims
        self.maps = maps
        self._hash = None

    @classmethod
    def zero(cls, quiver: Quiver) -> "Rep":
        return cls(quiver, (0,) * len(quiver.vertices))

    @classmethod
    def simple(cls, quiver: Quiver, v) -> "Rep":
        i = quiver.index(v)
        return cls(quiver, tuple(1 if j == i else 0 for j in range(len(quiver.vertices))))

    def __eq__(self, other):
        if not isinstance(other, Rep):
            return NotImplemented
        return self.quiver == other.quiver and self.dims == other.dims and self.maps == other.maps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.quiver, self.dims, self.maps))
        return self._hash

    def __repr__(self):
        return f"Rep(dims={self.dims})"

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_at(self, v) -> int:
        return self.dims[self.quiver.index(v)]

    def arrow_map(self, label) -> Mat:
        return self.maps[self.quiver.arrow_index(label)]

    def path_map(self, start: str, path: tuple) -> Mat:
        q = self.quiver
        m = Mat.identity(self.dims[q.index(start)])
        for l in path:
            m = self.arrow_map(l) @ m
        return m

    def support(self) -> set[str]:
        return {v for v, d in zip(self.quiver.vertices, self.dims) if d}

    def identity(self) -> "RepMor":
        return RepMor(self, self, tuple(Mat.identity(d) for d in self.dims), check=False)


class RepMor:
    """A morphism of representations, one matrix per vertex."""

    __slots__ = ("source", "target", "comps", "_hash")

    def __init__(self, source: Rep, target: Rep, comps, check: bool = True):
        q = source.quiver
        if target.quiver != q:
            raise QuiverError("morphism between representations of different quivers")
        if isinstance(comps, Mapping):
            comps = [comps.get(v) or Mat.zeros(target.dims[i], source.dims[i]) for i, v in enumerate(q.vertices)]
        comps = tuple(c if isinstance(c, Mat) else Mat(c, ncols=source.dims[i]) for i, c in enumerate(comps))
        for i, c in enumerate(comps):
            if c.shape != (target.dims[i], source.dims[i]):
                raise QuiverError(f"component at vertex {q.vertices[i]} has wrong shape {c.shape}")
        self.source = source
        self.target = target
        self.comps = comps
        self._hash = None
        if check:
            for k, (l, s, t) in enumerate(q.arrows):
                si, ti = q.index(s), q.index(t)
                if target.maps[k] @ comps[si] != comps[ti] @ source.maps[k]:
                    raise QuiverError(f"not a morphism: square at arrow {l} does not commute")

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "RepMor":
        return cls(source, target, tuple(Mat.zeros(t, s) for s, t in zip(source.dims, target.dims)), check=False)

    def __eq__(self, other):
        if not isinstance(other, RepMor):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.comps))
        return self._hash

    def __repr__(self):
        return f"RepMor({self.source.dims} -> {self.target.dims})"

    def __matmul__(self, other: "RepMor") -> "RepMor":
        if other.target != self.source:
            raise QuiverError("composition of non-composable morphisms")
        return RepMor(other.source, self.target, tuple(a @ b for a, b in zip(self.comps, other.comps)), check=False)

    def __add__(self, other: "RepMor") -> "RepMor":
        return RepMor(self.source, self.target, tuple(a + b for a, b in zip(self.comps, other.comps)), check=False)

    def __neg__(self) -> "RepMor":
        return RepMor(self.source, self.target, tuple(-a for a in self.comps), check=False)

    def __sub__(self, other: "RepMor") -> "RepMor":
        return self + (-other)

    def scale(self, c) -> "RepMor":
        return RepMor(self.source, self.target, tuple(a.scale(c) for a in self.comps), check=False)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def is_iso(self) -> bool:
        return all(c.is_invertible() for c in self.comps)

    def flat(self) -> list:
        out = []
        for c in self.comps:
            out.extend(c.flat())
        return out


def unflatten_mor(source: Rep, target: Rep, values, check: bool = False) -> RepMor:
    comps = []
    pos = 0
    for s, t in zip(source.dims, target.dims):
        comps.append(Mat.from_flat(values[pos:pos + s * t], t, s))
        pos += s * t
    return RepMor(source, target, tuple(comps), check=check)


def combine(basis: Sequence[RepMor], coeffs, source: Rep, target: Rep) -> RepMor:
    out = RepMor.zero(source, target)
    for b, c in zip(basis, coeffs):
        if c:
            out = out + b.scale(c)
    return out


# -- Hom spaces ------------------------------------------------------------

def _commuting_system(x: Rep, y: Rep) -> Mat:
    """Linear equations on the flattened components of a map x -> y."""
    q = x.quiver
    offsets = []
    pos = 0
    for sx, sy in zip(x.dims, y.dims):
        offsets.append(pos)
        pos += sx * sy
    nvars = pos
    rows = []
    for k, (l, s, t) in enumerate(q.arrows):
        si, ti = q.index(s), q.index(t)
        ya, xa = y.maps[k], x.maps[k]
        ds, dt = x.dims[si], x.dims[ti]
        es, et = y.dims[si], y.dims[ti]
        # (Y_a C_s - C_t X_a)[i, j] for i < et, j < ds
        for i in range(et):
            for j in range(ds):
                row = [ZERO] * nvars
                for kk in range(es):
                    c = ya[i, kk]
                    if c:
                        row[offsets[si] + kk * ds + j] += c
                for kk in range(dt):
                    c = xa[kk, j]
                    if c:
                        row[offsets[ti] + i * dt + kk] -= c
                rows.append(row)
    return Mat(rows, ncols=nvars) if rows else Mat.zeros(0, nvars)


@lru_cache(maxsize=None)
def hom_basis(x: Rep, y: Rep) -> tuple[RepMor, ...]:
    """Canonical basis of Hom(x, y) from the commuting-square equations."""
    if x.quiver != y.quiver:
        raise QuiverError("hom_basis: quiver mismatch")
    system = _commuting_system(x, y)
    return tuple(unflatten_mor(x, y, v) for v in nullspace_vectors(system))


def hom_dim(x: Rep, y: Rep) -> int:
    return len(hom_basis(x, y))


# -- direct sums -------------------------------------------------------------

def direct_sum(reps: Sequence[Rep], quiver: Optional[Quiver] = None) -> Rep:
    if not reps:
        return Rep.zero(quiver)
    q = reps[0].quiver
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(len(q.vertices)))
    maps = tuple(block_diag([r.maps[k] for r in reps]) for k in range(len(q.arrows)))
    return Rep(q, dims, maps)


def sum_inclusions(reps: Sequence[Rep], total: Rep) -> list[RepMor]:
    out = []
    offs = [0] * len(total.dims)
    for r in reps:
        comps = []
        for i, d in enumerate(r.dims):
            m = Mat.identity(total.dims[i]).take_cols(range(offs[i], offs[i] + d))
            comps.append(m)
            offs[i] += d
        out.append(RepMor(r, total, tuple(comps), check=False))
    return out


def sum_projections(reps: Sequence[Rep], total: Rep) -> list[RepMor]:
    return [RepMor(total, i.source, tuple(c.T for c in i.comps), check=False) for i in sum_inclusions(reps, total)]


def block_mor(source_parts: Sequence[Rep], target_parts: Sequence[Rep], blocks) -> RepMor:
    """Assemble a morphism between direct sums; ``blocks[i][j]`` maps part j to part i."""
    src = direct_sum(source_parts, source_parts[0].quiver if source_parts else None)
    tgt = direct_sum(target_parts, target_parts[0].quiver if target_parts else None)
    comps = []
    for v in range(len(src.dims)):
        rows = []
        for i, tp in enumerate(target_parts):
            row = []
            for j, sp in enumerate(source_parts):
                b = blocks[i][j]
                row.append(b.comps[v] if b is not None else Mat.zeros(tp.dims[v], sp.dims[v]))
            rows.append(hstack(row, nrows=tp.dims[v]))
        comps.append(vstack(rows, ncols=src.dims[v]))
    return RepMor(src, tgt, tuple(comps), check=False)


# -- subobjects and subquotients ----------------------------------------------

@dataclass(frozen=True)
class SubRep:
    ambient: Rep
    spaces: tuple  # Subspace per vertex

    def __post_init__(self):
        q = self.ambient.quiver
        for k, (l, s, t) in enumerate(q.arrows):
            si, ti = q.index(s), q.index(t)
            img = self.ambient.maps[k] @ self.spaces[si].basis
            if not self.spaces[ti].contains(img):
                raise QuiverError(f"not a subrepresentation: arrow {l} leaves the subspace")

    @classmethod
    def whole(cls, m: Rep) -> "SubRep":
        return cls(m, tuple(Subspace.full(d) for d in m.dims))

    @classmethod
    def zero(cls, m: Rep) -> "SubRep":
        return cls(m, tuple(Subspace.zero(d) for d in m.dims))

    @property
    def dims(self) -> tuple:
        return tuple(s.dim for s in self.spaces)

    def is_zero(self) -> bool:
        return all(s.dim == 0 for s in self.spaces)

    def is_whole(self) -> bool:
        return all(s.is_full() for s in self.spaces)

    def __le__(self, other: "SubRep") -> bool:
        return all(a <= b for a, b in zip(self.spaces, other.spaces))

    def __add__(self, other: "SubRep") -> "SubRep":
        return SubRep(self.ambient, tuple(a + b for a, b in zip(self.spaces, other.spaces)))

    def __and__(self, other: "SubRep") -> "SubRep":
        return SubRep(self.ambient, tuple(a & b for a, b in zip(self.spaces, other.spaces)))

    def as_rep(self) -> Rep:
        return subquotient(self.ambient, self, SubRep.zero(self.ambient)).rep

    def inclusion(self) -> RepMor:
        return subquotient(self.ambient, self, SubRep.zero(self.ambient)).to_ambient_mor()

    def quotient(self) -> tuple[Rep, RepMor]:
        sq = subquotient(self.ambient, SubRep.whole(self.ambient), self)
        return sq.rep, sq.from_ambient_mor()


@dataclass(frozen=True)
class SubQuotient:
    """``big / small`` for nested subrepresentations of ``ambient``.

    ``to_ambient[v]`` is a linear section (not a morphism in general) and
    ``from_ambient[v]`` the coordinate map, defined on vectors of ``big``.
    """

    ambient: Rep
    big: SubRep
    small: SubRep
    rep: Rep
    to_ambient: tuple
    from_ambient: tuple

    def induced(self, other: "SubQuotient", maps: Sequence[Mat]) -> RepMor:
        """Morphism induced by ambient matrices that respect both filtrations."""
        comps = tuple(o @ m @ s for o, m, s in zip(other.from_ambient, maps, self.to_ambient))
        return RepMor(self.rep, other.rep, comps, check=False)

    def to_ambient_mor(self) -> RepMor:
        """Inclusion into the ambient; only a morphism when ``small`` is zero."""
        return RepMor(self.rep, self.ambient, self.to_ambient, check=False)

    def from_ambient_mor(self) -> RepMor:
        """Projection from the ambient; only a morphism when ``big`` is everything."""
        return RepMor(self.ambient, self.rep, self.from_ambient, check=False)


@lru_cache(maxsize=None)
def subquotient(ambient: Rep, big: SubRep, small: SubRep) -> SubQuotient:
    q = ambient.quiver
    to_amb, from_amb = [], []
    for b, s in zip(big.spaces, small.spaces):
        inner = Subspace.span(b.coords(s.basis))
        to_amb.append(b.basis @ inner.quotient_section())
        from_amb.append(inner.quotient_projection() @ Mat.identity(b.ambient_dim).take_rows(b.pivots))
    maps = []
    for k, (l, s, t) in enumerate(q.arrows):
        si, ti = q.index(s), q.index(t)
        maps.append(from_amb[ti] @ ambient.maps[k] @ to_amb[si])
    dims = tuple(m.nrows for m in from_amb)
    rep = Rep(q, dims, tuple(maps))
    return SubQuotient(ambient, big, small, rep, tuple(to_amb), tuple(from_amb))


def image_subrep(f: RepMor) -> SubRep:
    return SubRep(f.target, tuple(Subspace.span(c) for c in f.comps))


def kernel_subrep(f: RepMor) -> SubRep:
    return SubRep(f.source, tuple(Subspace.span(Mat.from_columns(nullspace_vectors(c), c.ncols)) for c in f.comps))


def preimage_subrep(f: RepMor, sub: SubRep) -> SubRep:
    return SubRep(f.source, tuple(s.preimage(c) for s, c in zip(sub.spaces, f.comps)))


def pushforward_subrep(f: RepMor, sub: SubRep) -> SubRep:
    return SubRep(f.target, tuple(s.image(c) for s, c in zip(sub.spaces, f.comps)))


@dataclass(frozen=True)
class Factorization:
    kernel: Rep
    kernel_inclusion: RepMor
    image: Rep
    coimage_map: RepMor  # source -> image
    image_inclusion: RepMor  # image -> target
    cokernel: Rep
    cokernel_projection: RepMor


def factor_morphism(f: RepMor) -> Factorization:
    ker = kernel_subrep(f)
    img = image_subrep(f)
    sk = subquotient(f.source, ker, SubRep.zero(f.source))
    si = subquotient(f.target, img, SubRep.zero(f.target))
    coker, proj = img.quotient()
    onto = RepMor(f.source, si.rep, tuple(fa @ c for fa, c in zip(si.from_ambient, f.comps)), check=False)
    return Factorization(sk.rep, sk.to_ambient_mor(), si.rep, onto, si.to_ambient_mor(), coker, proj)


def lift_through(target_epi: RepMor, f: RepMor) -> Optional[RepMor]:
    """Some ``g`` with ``target_epi @ g == f``, or None."""
    basis = hom_basis(f.source, target_epi.source)
    cols = [(target_epi @ b).flat() for b in basis]
    a = Mat.from_columns(cols, len(f.flat()))
    rhs = f.flat()
    res = solve(a, Mat.column(rhs) if rhs else Mat.zeros(0, 1))
    if res is None:
        return None
    coeffs = [r[0] for r in res[0].rows]
    return combine(basis, coeffs, f.source, target_epi.source)


# -- projectives ------------------------------------------------------------------

def projective(quiver: Quiver, v: str) -> Rep:
    """The indecomposable projective P(v), spanned by paths starting at v."""
    return tensor_projective(quiver, v, 1)


@lru_cache(maxsize=None)
def _path_data(quiver: Quiver, v: str):
    paths = quiver.paths_from(v)
    dims = tuple(len(paths[w]) for w in quiver.vertices)
    maps = []
    for l, s, t in quiver.arrows:
        src, tgt = paths[s], paths[t]
        m = [[ONE if tp == sp + (l,) else ZERO for sp in src] for tp in tgt]
        maps.append(Mat(m, ncols=len(src)) if tgt else Mat.zeros(0, len(src)))
    return paths, dims, tuple(maps)


def tensor_projective(quiver: Quiver, v: str, mult: int) -> Rep:
    """P(v) (x) Q^mult, basis ordered path-major."""
    _, dims, maps = _path_data(quiver, v)
    return Rep(quiver, tuple(d * mult for d in dims), tuple(kron(m, Mat.identity(mult)) for m in maps))


def standard_projectives(quiver: Quiver) -> list[Rep]:
    return [projective(quiver, v) for v in quiver.vertices]


def top_multiplicities(m: Rep) -> tuple[int, ...]:
    """dim of (M / rad M) at each vertex."""
    q = m.quiver
    out = []
    for i, v in enumerate(q.vertices):
        incoming = [m.maps[k] for k, (l, s, t) in enumerate(q.arrows) if t == v]
        r = rank(hstack(incoming, nrows=m.dims[i])) if incoming else 0
        out.append(m.dims[i] - r)
    return tuple(out)


def is_projective(m: Rep) -> bool:
    q = m.quiver
    top = top_multiplicities(m)
    expected = [0] * len(q.vertices)
    for v, t in zip(q.vertices, top):
        _, dims, _ = _path_data(q, v)
        for i, d in enumerate(dims):
            expected[i] += t * d
    return tuple(expected) == m.dims


@dataclass(frozen=True)
class StandardResolution:
    p1: Rep
    p0: Rep
    delta: RepMor  # p1 -> p0
    epsilon: RepMor  # p0 -> m


def _p0_parts(m: Rep) -> list[Rep]:
    q = m.quiver
    return [tensor_projective(q, v, m.dims[i]) for i, v in enumerate(q.vertices)]


def _p1_parts(m: Rep) -> list[Rep]:
    q = m.quiver
    return [tensor_projective(q, t, m.dim_at(s)) for l, s, t in q.arrows]


@lru_cache(maxsize=None)
def standard_resolution(m: Rep) -> StandardResolution:
    q = m.quiver
    p0_parts = _p0_parts(m)
    p1_parts = _p1_parts(m)
    p0 = direct_sum(p0_parts, q)
    p1 = direct_sum(p1_parts, q)
    # epsilon: (path p from i to w) (x) m  |->  M_p(m)
    eps = []
    for wi, w in enumerate(q.vertices):
        cols = []
        for i, v in enumerate(q.vertices):
            paths, _, _ = _path_data(q, v)
            for path in paths[w]:
                cols.append(m.path_map(v, path))
        eps.append(hstack(cols, nrows=m.dims[wi]))
    epsilon = RepMor(p0, m, tuple(eps), check=False)
    # delta on P(j) (x) M_i for a: i -> j:  q (x) x |-> (a.q) (x) x  -  q (x) M_a x
    delta_comps = []
    for wi, w in enumerate(q.vertices):
        p0_offsets = {}
        off = 0
        for i, v in enumerate(q.vertices):
            p0_offsets[v] = off
            off += p0_parts[i].dims[wi]
        col_blocks = []
        for k, (l, s, t) in enumerate(q.arrows):
            ms = m.dim_at(s)
            tpaths = _path_data(q, t)[0][w]
            spaths = _path_data(q, s)[0][w]
            blk = [[ZERO] * (len(tpaths) * ms) for _ in range(p0.dims[wi])]
            ma = m.maps[k]
            mt = m.dim_at(t)
            for pi, path in enumerate(tpaths):
                longer = (l,) + path
                si_ = spaths.index(longer)
                for x in range(ms):
                    col = pi * ms + x
                    blk[p0_offsets[s] + si_ * ms + x][col] += ONE
                    for y in range(mt):
                        c = ma[y, x]
                        if c:
                            blk[p0_offsets[t] + pi * mt + y][col] -= c
            col_blocks.append(Mat(blk, ncols=len(tpaths) * ms) if blk else Mat.zeros(0, len(tpaths) * ms))
        delta_comps.append(hstack(col_blocks, nrows=p0.dims[wi]))
    delta = RepMor(p1, p0, tuple(delta_comps), check=False)
    return StandardResolution(p1, p0, delta, epsilon)


def resolve_morphism(f: RepMor) -> tuple[RepMor, RepMor]:
    """The maps induced on (P1, P0) of the standard resolutions."""
    q = f.source.quiver
    rs, rt = standard_resolution(f.source), standard_resolution(f.target)
    p0_blocks = []
    for wi, w in enumerate(q.vertices):
        blocks = []
        for i, v in enumerate(q.vertices):
            npaths = len(_path_data(q, v)[0][w])
            blocks.append(kron(Mat.identity(npaths), f.comps[i]))
        p0_blocks.append(block_diag(blocks))
    p1_blocks = []
    for wi, w in enumerate(q.vertices):
        blocks = []
        for l, s, t in q.arrows:
            npaths = len(_path_data(q, t)[0][w])
            blocks.append(kron(Mat.identity(npaths), f.comps[q.index(s)]))
        p1_blocks.append(block_diag(blocks) if blocks else Mat.zeros(rt.p1.dims[wi], rs.p1.dims[wi]))
    return (RepMor(rs.p1, rt.p1, tuple(p1_blocks), check=False),
            RepMor(rs.p0, rt.p0, tuple(p0_blocks), check=False))


# -- isomorphism and additive closure ------------------------------------------------

def find_rep_iso(x: Rep, y: Rep, seed: int = 0, attempts: int = 6) -> Optional[RepMor]:
    """Search for an isomorphism x -> y via seeded generic combinations."""
    import random

    if x.dims != y.dims:
        return None
    basis = hom_basis(x, y)
    if x.is_zero():
        return RepMor.zero(x, y)
    if not basis:
        return None
    rng = random.Random(seed)
    for _ in range(attempts):
        f = combine(basis, [rng.randint(-97, 97) for _ in basis], x, y)
        if f.is_iso():
            return f
    return None


def in_additive_closure(m: Rep, objects: Sequence[Rep]) -> bool:
    """Is ``m`` a direct summand of a finite sum of ``objects``?

    Tested by asking whether the canonical approximation
    (+)_K K (x) Hom(K, m) -> m is a split epimorphism.
    """
    if m.is_zero():
        return True
    parts, maps = [], []
    for k in objects:
        for b in hom_basis(k, m):
            parts.append(k)
            maps.append(b)
    if not parts:
        return False
    approx = block_mor(parts, [m], [maps])
    return lift_through(approx, m.identity()) is not None


# -- torsion pairs -------------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionPair:
    """Torsion class generated (under images of maps) by ``generators``."""

    generators: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))


@dataclass(frozen=True)
class TorsionCertificate:
    idempotent: bool
    quotient_torsion_free: bool

    @property
    def ok(self) -> bool:
        return self.idempotent and self.quotient_torsion_free


def _trace(gens: Sequence[Rep], m: Rep) -> SubRep:
    acc = SubRep.zero(m)
    for g in gens:
        if g.quiver != m.quiver:
            raise QuiverError("torsion generator over a different quiver")
        for b in hom_basis(g, m):
            acc = acc + image_subrep(b)
    return acc


def trace_radical(t: TorsionPair, m: Rep) -> tuple[SubRep, Rep, TorsionCertificate]:
    """Torsion part tM (trace of the generators), M/tM, and the checks."""
    tm = _trace(t.generators, m)
    tm_rep = tm.as_rep()
    quotient, _ = tm.quotient()
    cert = TorsionCertificate(
        idempotent=_trace(t.generators, tm_rep).is_whole(),
        quotient_torsion_free=_trace(t.generators, quotient).is_zero(),
    )
    if not cert.ok:
        bad = tm_rep if not cert.idempotent else quotient
        raise TorsionPairError("not a torsion pair at this object", bad)
    return tm, quotient, cert


def is_torsion(t: TorsionPair, m: Rep) -> bool:
    return trace_radical(t, m)[0].is_whole()


def is_torsion_free(t: TorsionPair, m: Rep) -> bool:
    return trace_radical(t, m)[0].is_zero()


# -- support restriction -----------------------------------------------------------------------

def restrict(m: Rep, sub: Quiver) -> Rep:
    """Restriction to a full subquiver; only faithful when supported there."""
    q = m.quiver
    dims = tuple(m.dim_at(v) for v in sub.vertices)
    return Rep(sub, dims, tuple(m.arrow_map(l) for l, _, _ in sub.arrows))


def restrict_mor(f: RepMor, sub: Quiver) -> RepMor:
    q = f.source.quiver
    return RepMor(restrict(f.source, sub), restrict(f.target, sub),
                  tuple(f.comps[q.index(v)] for v in sub.vertices), check=False)


def extend_by_zero(m: Rep, big: Quiver) -> Rep:
    dims = {v: m.dim_at(v) if v in m.quiver.vertices else 0 for v in big.vertices}
    maps = {}
    for l, s, t in big.arrows:
        if (l, s, t) in m.quiver.arrows:
            maps[l] = m.arrow_map(l)
    return Rep(big, dims, maps)


def extend_mor_by_zero(f: RepMor, big: Quiver) -> RepMor:
    src, tgt = extend_by_zero(f.source, big), extend_by_zero(f.target, big)
    comps = []
    for i, v in enumerate(big.vertices):
        if v in f.source.quiver.vertices:
            comps.append(f.comps[f.source.quiver.index(v)])
        else:
            comps.append(Mat.zeros(0, 0))
    return RepMor(src, tgt, tuple(comps), check=False)


def largest_quotient_supported_on(m: Rep, vertices: set) -> Rep:
    """M modulo the subrepresentation generated by its components outside ``vertices``."""
    q = m.quiver
    gen = SubRep.zero(m)
    for i, v in enumerate(q.vertices):
        if v not in vertices and m.dims[i]:
            spaces = []
            paths = q.paths_from(v)
            for w in q.vertices:
                cols = [m.path_map(v, p) for p in paths[w]]
                spaces.append(Subspace.span(hstack(cols, nrows=m.dim_at(w))) if cols else Subspace.zero(m.dim_at(w)))
            gen = gen + SubRep(m, tuple(spaces))
    return gen.quotient()[0]
