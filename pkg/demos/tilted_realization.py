"""
Realizing a complex over a tilted heart
=======================================

Representations of 1 -> 2 carry three indecomposables: S1, S2 and P1, with
P1 an extension of S1 by S2.  Tilting at the torsion class generated by S1
and P1 gives a new heart whose objects are S1, P1 and S2[1].  In that heart
there is a morphism S1 -> S2[1], and its realization should rebuild P1.
"""
from fcatreal import (
    Complex,
    HeartComplex,
    Quiver,
    Rep,
    TStructureSpec,
    TorsionPair,
    cohomology,
    derived_hom_basis,
    eta,
    eta_inverse,
    eta_round_trip,
    find_iso,
    gr,
    heart_contains,
    projective,
    real_functor,
    shift,
)

q = Quiver.linear(2)
S1, S2, P1 = Rep.simple(q, "1"), Rep.simple(q, "2"), projective(q, "1")
t = TStructureSpec.tilt(TorsionPair((S1, P1), "TILT_POS"))

s1 = Complex.concentrated(S1)
s2_1 = shift(Complex.concentrated(S2), 1)
p1 = Complex.concentrated(P1)

###############################################################################
# Which objects sit in the heart?

for name, x in [("S1", s1), ("P1", p1), ("S2", Complex.concentrated(S2)), ("S2[1]", s2_1)]:
    print(f"{name:6} in heart: {heart_contains(x, t)[0]}")

###############################################################################
# Hom(S1, S2[1]) is one-dimensional; that morphism is our differential.

basis = derived_hom_basis(s1, s2_1, 0)
print("dim Hom(S1, S2[1]) =", len(basis))
phi = basis[0]

k = HeartComplex(q, t, {0: s1, 1: s2_1}, {0: phi})
r = real_functor(k, t)
print("real(K) cohomology dims:", {n: cohomology(r, n).dims for n in r.degrees()})
print("real(K) isomorphic to P1:", find_iso(r, p1) is not None)

###############################################################################
# The filtered object behind the realization.  Its graded pieces are the
# terms of K shifted into place, and eta takes it back to K.

f = eta_inverse(k, t).filtered
for p in f.filtration_range():
    print(f"gr^{p}:", gr(f, p))
back = eta(f, t)
same = all(find_iso(back.terms[n], m) is not None for n, m in k.terms.items())
print("eta gives back isomorphic terms:", same)
print("eta gives back a nonzero differential:", not back.diff(0).is_zero())
print("full round trip:", eta_round_trip(k, t)[0])

###############################################################################
# With the zero differential the pieces do not glue: real gives S1 + S2.

split = HeartComplex(q, t, {0: s1, 1: s2_1}, {})
print("split realization isomorphic to P1:", find_iso(real_functor(split, t), p1) is not None)
