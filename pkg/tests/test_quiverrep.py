import pytest
from hypothesis import given, strategies as st

from fcatreal.exactla import Mat, nullspace_vectors, rank
from fcatreal.quiverrep import (
    Quiver,
    QuiverError,
    Rep,
    RepMor,
    SubRep,
    TorsionPair,
    combine,
    factor_morphism,
    find_rep_iso,
    hom_basis,
    hom_dim,
    is_projective,
    projective,
    standard_projectives,
    standard_resolution,
    trace_radical,
)

from conftest import A2, A3, NEG, P1, P2, POS, S1, S2, reps


def brute_hom_dim(m: Rep, n: Rep) -> int:
    """Solve the commuting squares N_a X_s = X_t M_a directly."""
    q = m.quiver
    offs, size = {}, 0
    for v in q.vertices:
        offs[v] = size
        size += n.dim_at(v) * m.dim_at(v)
    eqs = []
    for l, s, t in q.arrows:
        ma, na = m.arrow_map(l), n.arrow_map(l)
        for i in range(n.dim_at(t)):
            for j in range(m.dim_at(s)):
                row = [0] * size
                # (N_a X_s)[i, j] = sum_k N_a[i, k] X_s[k, j]
                for k in range(n.dim_at(s)):
                    row[offs[s] + k * m.dim_at(s) + j] += na[i, k]
                # (X_t M_a)[i, j] = sum_k X_t[i, k] M_a[k, j]
                for k in range(m.dim_at(t)):
                    row[offs[t] + i * m.dim_at(t) + k] -= ma[k, j]
                eqs.append(row)
    if size == 0:
        return 0
    return size - (rank(Mat(eqs, ncols=size)) if eqs else 0)


def dual(m: Rep) -> Rep:
    q = m.quiver
    op = Quiver(q.vertices, tuple((l, t, s) for l, s, t in q.arrows))
    return Rep(op, m.dims, {l: m.arrow_map(l).T for l, _, _ in q.arrows})


def test_hom_examples():
    assert hom_dim(S1, S1) == 1
    assert hom_basis(S1, S1)[0] == S1.identity()
    assert hom_dim(P1, S2) == 0
    assert hom_dim(P1, S1) == 1
    f = hom_basis(P1, S1)[0]
    assert f.comps[0].shape == (1, 1) and f.comps[0][0, 0] != 0


def test_hom_rejects_mixed_quivers():
    with pytest.raises(QuiverError):
        hom_basis(S1, Rep.simple(A3, "1"))


def test_shape_error_names_arrow():
    with pytest.raises(QuiverError, match="arrow a1"):
        Rep(A2, (2, 2), {"a1": Mat([[1, 0, 0], [0, 1, 0]])})


def test_factor_examples():
    f = factor_morphism(P1.identity())
    assert f.kernel.is_zero() and f.cokernel.is_zero() and f.image.dims == P1.dims
    inc = hom_basis(P2, P1)[0]
    f = factor_morphism(inc)
    assert f.kernel.is_zero()
    assert find_rep_iso(f.cokernel, S1) is not None
    f = factor_morphism(RepMor.zero(S1, S2))
    assert f.kernel.dims == S1.dims and f.image.is_zero() and f.cokernel.dims == S2.dims


def test_projectives():
    assert standard_projectives(A2) == [P1, P2]
    assert P2 == S2
    assert P1.dims == (1, 1)
    single = Quiver(("x",), ())
    assert standard_projectives(single) == [Rep.simple(single, "x")]
    assert projective(A3, "1").dims == (1, 1, 1)
    assert is_projective(P1) and not is_projective(S1)


def test_trace_radical_examples():
    tm, quo, cert = trace_radical(POS.torsion, P1)
    assert tm.is_whole() and quo.is_zero() and cert.ok
    tm, quo, _ = trace_radical(POS.torsion, S2)
    assert tm.is_zero() and quo.dims == S2.dims
    tm, quo, _ = trace_radical(NEG.torsion, P1)
    assert tm.dims == (0, 1)
    assert find_rep_iso(quo, S1) is not None


@given(reps(), reps())
def test_hom_dim_matches_commuting_squares(m, n):
    assert hom_dim(m, n) == brute_hom_dim(m, n)


@given(reps(A3), reps(A3))
def test_hom_dim_matches_commuting_squares_a3(m, n):
    assert hom_dim(m, n) == brute_hom_dim(m, n)


@given(reps(A3), reps(A3))
def test_hom_dual_symmetry(m, n):
    assert hom_dim(m, n) == hom_dim(dual(n), dual(m))


@given(reps(A3, max_dim=2), reps(A3, max_dim=2), st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_factorization_is_exact(m, n, coeffs):
    basis = hom_basis(m, n)
    f = combine(basis, coeffs[:len(basis)], m, n)
    fac = factor_morphism(f)
    for v in range(len(m.dims)):
        assert fac.kernel.dims[v] + fac.image.dims[v] == m.dims[v]
        assert fac.image.dims[v] + fac.cokernel.dims[v] == n.dims[v]
    assert (f @ fac.kernel_inclusion).is_zero()
    assert (fac.cokernel_projection @ f).is_zero()
    assert fac.image_inclusion @ fac.coimage_map == f


@given(reps(A3))
def test_standard_resolution_is_exact(m):
    r = standard_resolution(m)
    assert is_projective(r.p0) and is_projective(r.p1)
    assert factor_morphism(r.delta).kernel.is_zero()
    assert factor_morphism(r.epsilon).cokernel.is_zero()
    assert (r.epsilon @ r.delta).is_zero()
    for v in range(len(m.dims)):
        assert r.p0.dims[v] == r.p1.dims[v] + m.dims[v]


@given(reps(), st.sampled_from([POS, NEG]))
def test_torsion_sequence(m, t):
    tm, quo, cert = trace_radical(t.torsion, m)
    assert cert.ok
    assert all(a + b == c for a, b, c in zip(tm.dims, quo.dims, m.dims))
    for g in t.torsion.generators:
        assert hom_dim(g, quo) == 0
