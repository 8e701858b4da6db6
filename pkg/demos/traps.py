"""Ex ante versus ex post judgement of a move.

A move is worthwhile ex ante when its balance (payoff gain minus moving
cost) lies in the mover's current cone, and ex post when it lies in the
cone the mover will hold after arriving.  On the three-point instance the
move 1 -> 3 is rejected beforehand but endorsed afterwards.
"""
from domivar import evaluate_move, find_trap, load_instance, verify_trap

inst = load_instance("example_2_5")
m = evaluate_move(inst, "1", "3")
print(f"move 1 -> 3: advantage {m.advantage.tolist()}, cost {m.inconvenience.tolist()}, "
      f"balance {m.balance.tolist()}")
print("  worthwhile before moving:", m.ex_ante_worthwhile)
print("  worthwhile after moving: ", m.ex_post_worthwhile)

chain = load_instance("chain")
for kind in ("ex-ante", "ex-post"):
    cert = find_trap(chain, kind)
    print(f"\n{kind} trap on the chain: x* = {cert.x_star}, "
          f"reach={cert.condition_i}, stay={cert.condition_ii}, verified={verify_trap(chain, cert)}")
