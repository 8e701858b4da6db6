"""Three points, three different domination cones.

Point 1 judges with the Pareto cone, point 2 with a halfplane and point 3
with a cone that also accepts a loss in the second objective.  The notions
of efficiency (judged from the reference point) and nondominance (judged
from the challenger) then disagree.
"""
from domivar import classify, load_instance, theta_sets, verify_relationship_propositions
from domivar.analysis import solution_sets
from domivar.geometry import generators_of

inst = load_instance("example_2_5")
print("payoffs:")
for lab, y in zip(inst.labels, inst.payoffs()):
    print(f"  f({lab}) = {y.tolist()}")

rows = classify(inst)
print("\nflags per point:")
for r in rows:
    flags = [k for k, v in r.to_json().items() if v is True]
    print(f"  {r.label}: {', '.join(flags) or '-'}")

sets = solution_sets(rows)
print("\nefficient:", sets["efficient"], " nondominated:", sets["nondominated"])

theta_i, theta_u = theta_sets(inst)
print("intersection of all cones is spanned by", generators_of(theta_i).round(3).tolist())
print("union has", len(theta_u), "distinct members")

rep = verify_relationship_propositions(inst, rows)
print("implications between notions hold:", rep["ok"])
