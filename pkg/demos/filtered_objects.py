"""
Filtered complexes, graded pieces and the forgetful functor
===========================================================

A tour of the filtered side: build P1 with its socle filtration, cut it with
sigma, forget the filtration with omega, and compare filtered Hom with Hom
after forgetting.
"""
from fcatreal import Complex, FilteredComplex, Quiver, derived_hom_dim, filt_shift_s, gr, omega, projective, sigma
from fcatreal.exactla import Subspace
from fcatreal.fcat import cellularize_filtered, check_f_axioms, filtered_hom_basis, random_samples
from fcatreal.quiverrep import SubRep

q = Quiver.linear(2)
P1 = projective(q, "1")
x = Complex.concentrated(P1)

# F^0 = P1 and F^1 = the copy of S2 at the bottom of P1; only interior steps are listed
socle = SubRep(P1, (Subspace.zero(1), Subspace.full(1)))
xf = FilteredComplex.from_steps(x, 0, [{0: socle}])
for p in xf.filtration_range():
    print(f"gr^{p} =", gr(xf, p).term(0).dims)
print("omega =", omega(xf).term(0).dims)

###############################################################################
# s moves every graded piece one step up.

sx = filt_shift_s(xf, 1)
print("gr of s(X):", {p: gr(sx, p).term(0).dims for p in sx.filtration_range()})

###############################################################################
# sigma splits X into the part filtered in degrees <= 0 and the rest.

cut = sigma(xf, 0)
print("sigma<=0:", cut.le.underlying.term(0).dims, " sigma>=1:", cut.ge.underlying.term(0).dims)

###############################################################################
# Filtered Hom from the low piece (S1 at level 0) to the high piece (S2 at
# level 1), against Hom after forgetting.  Nothing in degree 0; the extension
# class gluing P1 together shows up one degree higher on both sides.

low = cellularize_filtered(cut.le).complex
for k in (0, 1):
    filtered = filtered_hom_basis(low, cut.ge, k).dim
    plain = derived_hom_dim(omega(cut.le), omega(cut.ge), k)
    print(f"degree {k}: filtered Hom = {filtered}, Hom after omega = {plain}")

###############################################################################
# The four f-category conditions on a handful of random cellular samples.

for rec in check_f_axioms(random_samples(q, 10, seed=1)):
    print(f"{rec.name}: {rec.status}")
