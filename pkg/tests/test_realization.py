import pytest
from hypothesis import given, strategies as st

from fcatreal.complexes import (
    DerivedMor,
    cohomology,
    derived_hom_basis,
    find_iso,
    is_acyclic,
    shift,
)
from fcatreal.fcat import FilteredComplex, SubcatPredicate, cellular_flag, gr
from fcatreal.tstruct import cf_heart_contains, cohomology_t
from fcatreal.realization import (
    HeartComplex,
    HeartMap,
    RealizationError,
    decompose_to_heart_complex,
    eta,
    eta_inverse,
    eta_round_trip,
    functoriality_square,
    heart_cohomology,
    heart_complex_corpus,
    real_functor,
    real_on_maps,
    verify_equivalence,
    verify_ff_criterion,
)

from conftest import A2, A3, NEG, P1, POS, S1, S2, STD, at
from fcatreal.quiverrep import Rep, projective

S2_1 = shift(at(S2), 1)
S1_1 = shift(at(S1), 1)
HEARTS = {
    "standard": (STD, [at(S1), at(S2), at(P1)]),
    "pos": (POS, [at(S1), at(P1), S2_1]),
    "neg": (NEG, [at(S2), S1_1]),
}


def k0_class(x) -> tuple:
    """Euler characteristic of a complex in K_0, as a dimension vector."""
    out = [0] * len(x.quiver.vertices)
    for n in x.degrees():
        for i, d in enumerate(cohomology(x, n).dims):
            out[i] += (-1) ** (n % 2) * d
    return tuple(out)


def heart_k0(k: HeartComplex) -> tuple:
    out = [0] * len(k.quiver.vertices)
    for n, m in k.terms.items():
        for i, d in enumerate(k0_class(m)):
            out[i] += (-1) ** (n % 2) * d
    return tuple(out)


def phi_complex():
    phi = derived_hom_basis(at(S1), S2_1, 0)
    assert len(phi) == 1
    return HeartComplex(A2, POS, {0: at(S1), 1: S2_1}, {0: phi[0]})


def identity_complex(m, t):
    return HeartComplex(m.quiver, t, {0: m, 1: m}, {0: DerivedMor.identity(m)})


def corpus(name, count, seed):
    t, objs = HEARTS[name]
    return heart_complex_corpus(t, objs, count, seed)


def test_real_of_phi_is_p1():
    k = phi_complex()
    r = real_functor(k, POS)
    iso = find_iso(r, at(P1))
    assert iso is not None and iso.is_iso()
    e = eta_inverse(k, POS).filtered
    assert len(e.filtration_range()) == 2
    assert cf_heart_contains(e, POS)[0]


def test_eta_of_trivial_filtration():
    for t, objs in HEARTS.values():
        for m in objs:
            k = eta(FilteredComplex.trivial(m), t)
            assert k.terms == {0: m} and not k.diffs


def test_eta_recovers_phi():
    k = phi_complex()
    back = eta(eta_inverse(k, POS).filtered, POS)
    assert not back.diff(0).is_zero()
    assert eta_round_trip(k, POS)[0]


def test_eta_rejects_non_heart():
    from fcatreal.fcat import FilteredComplex
    from conftest import x_filt
    with pytest.raises(RealizationError):
        eta(x_filt(), STD)


def test_zero_differential_gives_sum():
    from fcatreal.complexes import direct_sum_complex
    k = HeartComplex(A2, POS, {0: at(P1), 1: S2_1, 2: at(S1)}, {})
    r = real_functor(k, POS)
    expect = direct_sum_complex([shift(m, -n) for n, m in k.terms.items()], A2)[0]
    assert find_iso(r, expect) is not None


@pytest.mark.parametrize("name", sorted(HEARTS))
def test_real_on_heart_objects(name):
    t, objs = HEARTS[name]
    for m in objs:
        k = HeartComplex(A2, t, {0: m})
        assert find_iso(real_functor(k, t), m) is not None
        assert eta_round_trip(k, t)[0]


@pytest.mark.parametrize("name", sorted(HEARTS))
def test_real_of_acyclic_is_zero(name):
    t, objs = HEARTS[name]
    for m in objs:
        assert is_acyclic(real_functor(identity_complex(m, t), t))


@pytest.mark.parametrize("name", sorted(HEARTS))
def test_corpus_round_trips_and_t_exactness(name):
    for k in corpus(name, 8, seed=1):
        t = k.tspec
        assert eta_round_trip(k, t)[0]
        r = real_functor(k, t)
        assert k0_class(r) == heart_k0(k)
        for n in range(k.lo - 1, k.hi + 2):
            assert find_iso(cohomology_t(r, n, t).value, heart_cohomology(k, n, t)) is not None


@given(st.sampled_from(sorted(HEARTS)), st.integers(0, 10 ** 6), st.integers(-2, 2))
def test_real_commutes_with_shift(name, seed, s):
    k = corpus(name, 1, seed)[0]
    t = k.tspec
    assert find_iso(real_functor(k.shift(s), t), shift(real_functor(k, t), s)) is not None


@given(st.sampled_from(sorted(HEARTS)), st.integers(0, 10 ** 6))
def test_eta_inverse_lands_in_filtered_heart(name, seed):
    k = corpus(name, 1, seed)[0]
    e = eta_inverse(k, k.tspec)
    assert cellular_flag(e.filtered) is not None
    assert cf_heart_contains(e.filtered, k.tspec)[0]
    for n, m in e.pieces.items():
        assert m.source == shift(gr(e.filtered, n), n)


def test_real_on_maps_identity_and_zero():
    k = phi_complex()
    ident = HeartMap(k, k, {n: DerivedMor.identity(m) for n, m in k.terms.items()})
    assert ident.is_chain_map()
    r = real_on_maps(ident, POS)
    assert r.is_iso()
    zero = HeartMap(k, k, {})
    assert real_on_maps(zero, POS).is_zero()


def test_decompose_examples():
    d = decompose_to_heart_complex(at(P1), POS)
    assert d.terms == {0: at(P1)}
    d = decompose_to_heart_complex(at(S2), POS)
    assert list(d.terms) == [1] and d.terms[1] == S2_1
    assert find_iso(real_functor(d, POS), at(S2)) is not None
    assert decompose_to_heart_complex(at(P1), NEG) is None


@pytest.mark.parametrize("name", ["standard", "pos"])
def test_decompose_then_real(name):
    t, _ = HEARTS[name]
    for g in (at(S1), at(S2), at(P1), shift(at(P1), -1)):
        d = decompose_to_heart_complex(g, t)
        assert d is not None
        assert find_iso(real_functor(d, t), g) is not None


def test_ff_criterion_examples():
    ext2, exts = verify_ff_criterion(POS, [("S1", at(S1)), ("P1", at(P1)), ("S2[1]", S2_1)])
    assert ext2.passed and ext2.details["pairs"] == 9 and exts.passed
    ext2, _ = verify_ff_criterion(NEG, [("S2", at(S2)), ("S1[1]", S1_1)])
    assert not ext2.passed and ext2.witnesses == [("S1[1]", "S2", 2, 1)]
    ext2, _ = verify_ff_criterion(STD, [("S1", at(S1)), ("S2", at(S2)), ("P1", at(P1))])
    assert ext2.passed


def test_verdicts():
    gens = [("S1", at(S1)), ("S2", at(S2)), ("P1", at(P1))]
    assert verify_equivalence(POS, gens, [("S1", at(S1)), ("P1", at(P1)), ("S2[1]", S2_1)]).conclusion == "equivalence"
    v = verify_equivalence(NEG, gens, [("S2", at(S2)), ("S1[1]", S1_1)])
    assert v.conclusion == "criterion-fails"
    assert v.ext2.witnesses == [("S1[1]", "S2", 2, 1)]
    assert verify_equivalence(STD, gens, gens).conclusion == "equivalence"


def test_functoriality_examples():
    s2 = Rep.simple(A3, "2")
    v2 = SubcatPredicate("vertex-support", {"2"})
    k = HeartComplex(A3, STD, {0: at(s2)})
    sq = functoriality_square(v2, STD, k)
    assert sq["commutes"] and find_iso(sq["outside"], at(s2)) is not None
    k = identity_complex(at(s2), STD)
    sq = functoriality_square(v2, STD, k)
    assert sq["commutes"] and is_acyclic(sq["inside"]) and is_acyclic(sq["outside"])
    t2 = SubcatPredicate("thick-generated", generators=(at(s2),), depth=1)
    assert functoriality_square(t2, STD, k)["commutes"]
    with pytest.raises(RealizationError, match="probe not in subcategory"):
        functoriality_square(v2, STD, HeartComplex(A3, STD, {0: at(projective(A3, "2"))}))


def test_functoriality_under_tilt():
    # TILT_POS on the subquiver 2 -> 3 of 1 -> 2 -> 3
    from fcatreal.quiverrep import TorsionPair
    from fcatreal.tstruct import TStructureSpec
    s2, s3 = Rep.simple(A3, "2"), Rep.simple(A3, "3")
    p2 = projective(A3, "2")
    t = TStructureSpec.tilt(TorsionPair((s2, p2), "T23"))
    v23 = SubcatPredicate("vertex-support", {"2", "3"})
    phi = derived_hom_basis(at(s2), shift(at(s3), 1), 0)[0]
    k = HeartComplex(A3, t, {0: at(s2), 1: shift(at(s3), 1)}, {0: phi})
    sq = functoriality_square(v23, t, k)
    assert sq["commutes"]
    assert find_iso(sq["outside"], at(p2)) is not None


@pytest.mark.parametrize("name", ["standard", "pos"])
def test_decompose_inverts_real_on_corpus(name):
    # both hearts pass the Ext^2 check, so they are hereditary and a complex over
    # them is determined up to isomorphism by its heart cohomology
    t, objs = HEARTS[name]
    for k in corpus(name, 10, seed=4):
        d = decompose_to_heart_complex(real_functor(k, t), t)
        assert d is not None
        for n in range(k.lo - 1, k.hi + 2):
            assert find_iso(heart_cohomology(d, n, t), heart_cohomology(k, n, t)) is not None


def test_decompose_obstructed_under_neg():
    # negative control: the criterion fails under TILT_NEG and P1 cannot be rebuilt
    assert decompose_to_heart_complex(at(P1), NEG) is None
    assert decompose_to_heart_complex(at(S2), NEG) is not None
