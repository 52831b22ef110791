# Class groups of a few toric surfaces
#
# The class group is Z^r modulo the principal divisors. Torsion shows up for
# singular examples like the quadric cone, where Cl = Z/2.

from toric_frobenius import BUILTIN_NAMES, builtin_fan, compute_class_group, is_complete, is_smooth

for name in BUILTIN_NAMES:
    fan = builtin_fan(name)
    cg = compute_class_group(fan)
    gens = ", ".join(str(g) for g in cg.generators())
    print(f"{name:22s} Cl = {cg.describe():6s} smooth={is_smooth(fan)!s:5s} "
          f"complete={is_complete(fan)}  rays -> {gens}")

# On the Hirzebruch surface F_1 the classes are pairs. The class map sends a
# T-divisor to its coordinates, and representative() goes back.

cg = compute_class_group(builtin_fan("hirzebruch(1)"))
c = cg.class_of([1, 2, 0, -1])
print(c, cg.representative(c), cg.class_of(cg.representative(c)) == c)

# When ell shares a factor with a torsion order, several classes E solve
# ell * E = D. The push-forward still makes sense, with the result flagged.

from toric_frobenius import decompose

qc = compute_class_group(builtin_fan("quadric_cone"))
dec = decompose(qc, qc.zero(), 2)
print(dec, "rank", dec.rank, "shares torsion:", dec.ell_shares_torsion)
