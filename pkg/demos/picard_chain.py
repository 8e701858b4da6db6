"""Following the Picard iteration on a three-point chain.

Payoffs fall from (4,4) to (0,0) while moving costs |i - j| along k = (1,1).
Starting from the top, the iteration jumps to the bottom in one step and
stops there: nothing is worth the cost of leaving.
"""
from domivar import brute_force_fixed_points, load_instance, solve, worthwhile_set

inst = load_instance("chain")
for x in inst.labels:
    print(f"W({x}) = {worthwhile_set(inst, 'efficient', x)}")

res = solve(inst, "efficient")
print("\ntrace:")
for s in res.steps:
    print(f"  {s.label}: psi={s.psi:+.2f}  q_step={s.q_step:.1f}  |W|={s.w_size}")
print("x* =", res.x_star, "status:", res.status)

c = res.certificates
print("\nreached worthwhile from x0:", c["i"]["ok"], " balance", c["i"]["balance"])
print("nothing worth leaving for:", c["ii"]["ok"])
print("localization q(x0,x*) <= sqrt(eps):", c["iii"]["status"],
      f"(q = {c['iii']['q_x0_xstar']}, bound {c['iii']['bound']})")
print("brute-force fixed points:", brute_force_fixed_points(inst))

lazy = inst.with_changes(epsilon=25.0)
print("\nwith moving five times dearer the start is already final:", solve(lazy).x_star)
