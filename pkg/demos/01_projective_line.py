# Frobenius push-forwards on the projective line
#
# On P^1 every line bundle is O(a). Pushing O(a) forward along the ell-th
# power map gives a sum of line bundles, and the multiplicities come from
# counting points of the cube {0, ..., ell-1}^2 by their class.

from toric_frobenius import builtin_fan, compute_class_group, decompose, h0

fan = builtin_fan("projective_space(1)")
cg = compute_class_group(fan)
print(cg.describe(), [str(g) for g in cg.generators()])

# The structure sheaf splits as O + O(-1)^(ell-1).

for ell in range(2, 6):
    print(ell, decompose(cg, cg.zero(), ell))

# Twisting the source moves the summands around. For O(3) and ell = 2
# the summand O(3) itself is absent, only O(1) appears, twice.

for a in range(-3, 4):
    print(a, decompose(cg, cg.element([a]), 2))

# Sanity check: h0 of the source equals the weighted sum of h0 over the summands.

D = cg.element([5])
dec = decompose(cg, D, 3)
print(h0(fan, cg, D), sum(m * h0(fan, cg, E) for E, m in dec.summands.items()))
