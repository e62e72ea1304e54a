"""
When is realization an equivalence?
===================================

For a heart A inside D^b(mod kQ), realization D^b(A) -> D^b(mod kQ) is fully
faithful exactly when Hom(M, N[p]) computed in the big category matches the
Yoneda Ext of A.  On a hereditary heart this comes down to Hom(M, N[2]) = 0
for heart objects M, N.  We test the two tilts of A2 and the standard heart.
"""
from fcatreal import verify_equivalence
from fcatreal.cli import human_report, run_command
from fcatreal.config import parse_config

for name in ("a2_standard", "a2_tilt_pos", "a2_tilt_neg"):
    cfg = parse_config(name)
    v = verify_equivalence(cfg.tstructure, cfg.generators, cfg.probes)
    print(f"{name:12} {cfg.tstructure.label():9} -> {v.conclusion}")
    if v.ext2.witnesses:
        for m, n, p, d in v.ext2.witnesses:
            print(f"    dim Hom({m}, {n}[{p}]) = {d}")
    if v.generation.witnesses:
        print("    not reached from the heart:", v.generation.witnesses)

###############################################################################
# The heart of the second tilt is add{S2, S1[1]}.  Its S1[1] and S2 are two
# shifts apart in the ambient category, so Hom(S1[1], S2[2]) = Ext^1(S1, S2)
# is nonzero even though the heart sees no Ext^2.  The CLI report says the same.

print()
print(human_report(run_command("verify-equivalence", parse_config("a2_tilt_neg"))))
