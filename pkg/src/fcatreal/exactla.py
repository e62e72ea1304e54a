"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  :class:`Mat` is an immutable dense
matrix; elimination runs on sparse row dictionaries because the systems
built by the higher layers (commuting squares, chain-map and homotopy
equations) are very sparse.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

__all__ = [
    "Fraction",
    "Mat",
    "Subspace",
    "to_fraction",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "subspace_ops",
    "fmt_scalar",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt_scalar(x: Fraction) -> str:
    """"3/2", or "3" for integers; the same form the config reader accepts."""
    return str(x)


class Mat:
    """Immutable rows x cols matrix of Fractions.

    ``Mat([[1, 2], [3, 4]])`` builds a 2x2 matrix; zero-row or zero-column
    shapes need the explicit ``nrows``/``ncols`` form via :meth:`zeros`.
    """

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: Optional[int] = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "Mat":
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        row = (ZERO,) * ncols
        return cls._raw((row,) * nrows, nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        rows = tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        return cls._raw(rows, n, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Mat":
        rows = tuple(tuple(to_fraction(c[i]) for c in cols) for i in range(nrows))
        return cls._raw(rows, nrows, len(cols))

    @classmethod
    def column(cls, values: Sequence) -> "Mat":
        return cls([[v] for v in values], ncols=1) if values else cls.zeros(0, 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Mat({self.nrows}x{self.ncols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    @property
    def T(self) -> "Mat":
        if self.nrows == 0:
            return Mat.zeros(self.ncols, 0)
        return Mat._raw(tuple(zip(*self.rows)), self.ncols, self.nrows)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Mat._raw(rows, self.nrows, self.ncols)

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self.rows), self.nrows, self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = to_fraction(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.nrows, self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.ncols
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(ocols):
                        b = ok[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Mat._raw(tuple(out), self.nrows, ocols)

    def take_rows(self, idx: Sequence[int]) -> "Mat":
        return Mat._raw(tuple(self.rows[i] for i in idx), len(idx), self.ncols)

    def take_cols(self, idx: Sequence[int]) -> "Mat":
        return Mat._raw(tuple(tuple(r[j] for j in idx) for r in self.rows), self.nrows, len(idx))

    def flat(self) -> list[Fraction]:
        return [x for row in self.rows for x in row]

    @classmethod
    def from_flat(cls, values: Sequence, nrows: int, ncols: int) -> "Mat":
        rows = tuple(tuple(values[i * ncols:(i + 1) * ncols]) for i in range(nrows))
        return cls._raw(rows, nrows, ncols)

    def to_strings(self) -> list[list[str]]:
        return [[fmt_scalar(x) for x in r] for r in self.rows]

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and rank(self) == self.nrows


def hstack(mats: Sequence[Mat], nrows: Optional[int] = None) -> Mat:
    if not mats:
        return Mat.zeros(nrows or 0, 0)
    n = mats[0].nrows
    for m in mats:
        if m.nrows != n:
            raise ValueError("hstack row mismatch")
    rows = tuple(sum((m.rows[i] for m in mats), ()) for i in range(n))
    return Mat._raw(rows, n, sum(m.ncols for m in mats))


def vstack(mats: Sequence[Mat], ncols: Optional[int] = None) -> Mat:
    if not mats:
        return Mat.zeros(0, ncols or 0)
    c = mats[0].ncols
    for m in mats:
        if m.ncols != c:
            raise ValueError("vstack column mismatch")
    rows = sum((m.rows for m in mats), ())
    return Mat._raw(rows, len(rows), c)


def block(grid: Sequence[Sequence[Mat]]) -> Mat:
    return vstack([hstack(list(r)) for r in grid])


def block_diag(mats: Sequence[Mat]) -> Mat:
    ncols = sum(m.ncols for m in mats)
    rows = []
    offset = 0
    for m in mats:
        pad_l = (ZERO,) * offset
        pad_r = (ZERO,) * (ncols - offset - m.ncols)
        rows.extend(pad_l + r + pad_r for r in m.rows)
        offset += m.ncols
    return Mat._raw(tuple(rows), len(rows), ncols)


def kron(a: Mat, b: Mat) -> Mat:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append(tuple(x * y for x in ra for y in rb))
    return Mat._raw(tuple(rows), a.nrows * b.nrows, a.ncols * b.ncols)


# -- elimination on sparse rows ------------------------------------------------

def _sparse_rows(m: Mat) -> list[dict]:
    return [{j: x for j, x in enumerate(r) if x} for r in m.rows]


def _eliminate(rows: list[dict], pivot_limit: int) -> tuple[list[dict], list[int]]:
    """Gauss-Jordan on sparse rows; pivots only in columns < pivot_limit.

    Returns the nonzero reduced rows (sorted by pivot) followed by any rows
    whose support lies entirely at or beyond ``pivot_limit``, and the pivots.
    """
    pending = [r for r in rows if r]
    done: list[tuple[int, dict]] = []
    for col in range(pivot_limit):
        best = None
        for i, r in enumerate(pending):
            if col in r and (best is None or len(r) < len(pending[best])):
                best = i
        if best is None:
            continue
        prow = pending.pop(best)
        inv = ONE / prow[col]
        if inv != 1:
            prow = {j: x * inv for j, x in prow.items()}
        for group in (pending, [r for _, r in done]):
            for r in group:
                f = r.get(col)
                if f:
                    for j, x in prow.items():
                        y = r.get(j, ZERO) - f * x
                        if y:
                            r[j] = y
                        else:
                            r.pop(j, None)
        done.append((col, prow))
        pending = [r for r in pending if r]
    pivots = [c for c, _ in done]
    return [r for _, r in done] + pending, pivots


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    reduced, pivots = _eliminate(_sparse_rows(m), m.ncols)
    rows = [tuple(r.get(j, ZERO) for j in range(m.ncols)) for r in reduced]
    rows.extend([(ZERO,) * m.ncols] * (m.nrows - len(rows)))
    return Mat._raw(tuple(rows), m.nrows, m.ncols), pivots


def rank(m: Mat) -> int:
    return len(_eliminate(_sparse_rows(m), m.ncols)[1])


def _nullspace_from(reduced: list[dict], pivots: list[int], ncols: int) -> list[list[Fraction]]:
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for p, r in zip(pivots, reduced):
            x = r.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def nullspace_vectors(m: Mat) -> list[list[Fraction]]:
    reduced, pivots = _eliminate(_sparse_rows(m), m.ncols)
    return _nullspace_from(reduced, pivots, m.ncols)


def nullspace(m: Mat) -> "Subspace":
    vecs = nullspace_vectors(m)
    return Subspace.span(Mat.from_columns(vecs, m.ncols))


def solve(a: Mat, b: Mat) -> Optional[tuple[Mat, "Subspace"]]:
    """Solve ``a @ X = b`` exactly.

    Returns ``(particular, nullspace)`` or ``None`` when inconsistent.  The
    particular solution sets every free variable to zero.
    """
    if a.nrows != b.nrows:
        raise ValueError(f"solve: a has {a.nrows} rows, b has {b.nrows}")
    n = a.ncols
    rows = [{j: x for j, x in enumerate(ra + rb) if x} for ra, rb in zip(a.rows, b.rows)]
    reduced, pivots = _eliminate(rows, n)
    for r in reduced[len(pivots):]:
        if r:
            return None
    x = [[ZERO] * b.ncols for _ in range(n)]
    for p, r in zip(pivots, reduced):
        for j, val in r.items():
            if j >= n:
                x[p][j - n] = val
    reduced_a = [{j: v for j, v in r.items() if j < n} for r in reduced[:len(pivots)]]
    null = Subspace.span(Mat.from_columns(_nullspace_from(reduced_a, pivots, n), n))
    return Mat(x, ncols=b.ncols) if n else Mat.zeros(0, b.ncols), null


def solve_vector(a: Mat, b: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Single right-hand side convenience wrapper; returns a particular solution."""
    res = solve(a, Mat.column(list(b)) if len(b) else Mat.zeros(0, 1))
    if res is None:
        return None
    return [r[0] for r in res[0].rows]


class Subspace:
    """Subspace of Q^n stored by its reduced column-echelon basis.

    The basis is canonical, so ``==`` decides equality of subspaces.  Pivot
    rows carry an identity block, which makes coordinates of a member vector
    just its entries at those rows.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Mat, pivots: tuple[int, ...]):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, gens: Mat) -> "Subspace":
        n = gens.nrows
        reduced, pivots = _eliminate(_sparse_rows(gens.T), n)
        cols = [[r.get(i, ZERO) for i in range(n)] for r in reduced[:len(pivots)]]
        return cls(n, Mat.from_columns(cols, n), tuple(pivots))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Mat.zeros(n, 0), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Mat.identity(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} in Q^{self.ambient_dim})"

    def coords(self, vecs: Mat) -> Mat:
        """Coordinates of member vectors (columns of ``vecs``) in the basis."""
        return vecs.take_rows(self.pivots)

    def contains(self, vecs: Mat) -> bool:
        if vecs.ncols == 0:
            return True
        return self.basis @ self.coords(vecs) == vecs

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def image(self, f: Mat) -> "Subspace":
        return Subspace.span(f @ self.basis)

    def preimage(self, f: Mat) -> "Subspace":
        """``{v : f v in self}``."""
        return nullspace(self.annihilator() @ f)

    def annihilator(self) -> Mat:
        """Rows spanning the linear forms vanishing on the subspace."""
        proj = self.quotient_projection()
        return proj

    def complement_indices(self) -> list[int]:
        piv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in piv]

    def quotient_projection(self) -> Mat:
        """Canonical projection Q^n -> Q^n / self, coordinates on non-pivot rows."""
        n = self.ambient_dim
        rest = self.complement_indices()
        # v -> (v - B v[pivots])[rest]
        reducer = Mat.identity(n) - self.basis @ Mat.identity(n).take_rows(self.pivots)
        return reducer.take_rows(rest)

    def quotient_section(self) -> Mat:
        """Linear section of :meth:`quotient_projection` (standard basis vectors)."""
        return Mat.identity(self.ambient_dim).take_cols(self.complement_indices())

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_ops(self, other)[0]

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_ops(self, other)[1]


def subspace_ops(u: Subspace, v: Subspace) -> tuple[Subspace, Subspace]:
    """Sum and intersection, both in canonical form."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError(f"ambient mismatch {u.ambient_dim} vs {v.ambient_dim}")
    n = u.ambient_dim
    total = Subspace.span(hstack([u.basis, v.basis], nrows=n))
    # solutions of U a - V b = 0 give U a in the intersection
    system = hstack([u.basis, -v.basis], nrows=n)
    sols = nullspace_vectors(system)
    if not sols:
        return total, Subspace.zero(n)
    coeffs = Mat.from_columns([s[:u.dim] for s in sols], u.dim)
    return total, Subspace.span(u.basis @ coeffs)
