"""Assumption diagnostics on discretized continuous problems.

* A scalarized objective can be bounded below on the worthwhile set while
  the payoffs are not bounded by any bounded set plus the cone.
* A worthwhile set computed directly can be larger than a stated reference value.
* A variable cone family can violate the structural conditions it is meant
  to satisfy; flipping one sign repairs it.
"""
import numpy as np

from domivar import check_F3, load_instance, validate_assumptions, worthwhile_set
from domivar.geometry import subset_cone

inst = load_instance("example_4_3")
rep = validate_assumptions(inst, "efficient")
print(f"[{inst.n}-point grid] inf psi on W(x0) = {rep['E1']['inf_psi']}, "
      f"quasibounded: {rep['quasibounded']['ok']} (radius ratio {rep['quasibounded']['growth_ratio']})")

inst = load_instance("example_4_4")
W = sorted(float(s) for s in worthwhile_set(inst, "efficient", "0"))
print(f"\nW(0) on a {inst.n}-point grid spans [{W[0]}, {W[-1]}]")
print("note:", inst.notes)

for name in ("example_4_8", "example_4_8_sign_flipped"):
    inst = load_instance(name)
    f3 = check_F3(inst.structure, inst, 500, seed=0)
    rng = np.random.default_rng(0)
    bad = 0
    for _ in range(100):
        a, b = sorted(rng.uniform(-2, 2, 2), reverse=True)
        bad += not subset_cone(inst.structure.evaluate([a, a]), inst.structure.evaluate([b, b]))[0]
    print(f"\n{name}: F3-a {f3['F3-a']['ok']}, F3-c {f3['F3-c']['ok']}, "
          f"D(a,a) ⊆ D(b,b) violations for a >= b: {bad}/100")
