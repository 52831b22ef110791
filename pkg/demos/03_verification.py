# Checking the identities numerically
#
# run_suite pushes every class in a box forward and checks the h0 identity,
# the rank law, twisting by ell * E0, the ell = 1 case and composition of
# Frobenius maps. Checks that do not apply (a non-complete fan, torsion)
# are reported as skipped rather than failed.

from toric_frobenius import SuiteConfig, builtin_fan, compute_class_group, run_suite

for name in ["projective_space(2)", "hirzebruch(2)", "quadric_cone"]:
    print(run_suite(builtin_fan(name), SuiteConfig(ells=(2, 3), box=2)).table())
    print()

# The h0 check is not a tautology. Adding one to any entry of the cube
# distribution breaks it.

from toric_frobenius import ClassDistribution, class_distribution_cube
from toric_frobenius.verify import check_h0_identity

fan = builtin_fan("projective_space(2)")
cg = compute_class_group(fan)
dist = class_distribution_cube(cg, 2)
print({str(c): n for c, n in dist.items()})
for c in dist:
    counts = dict(dist.counts)
    counts[c] += 1
    r = check_h0_identity(fan, 2, cg.classes_in_box(3), dist=ClassDistribution(2, counts))
    print(c, r.status, len(r.failures), "failing classes")
