"""
Choice maps and their set transformers
======================================

A choice map sends each state to the set of states it may move to.  The
same information can be carried by two set transformers: the inverse image
(states that surely land in A) and the weak inverse image (states that may
land in A).  Either one is enough to rebuild the map.
"""

import nondet as nd
from nondet.catalog import branching_three, sign_flip

# a moves to b or c, b is stuck, c stays where it is
t3 = branching_three()
space = t3.space
for name, succ in t3.items():
    print(f"{name} -> {succ}")

post = space.set("bc")
print("surely lands in {b, c}:", nd.inverse(t3, post))
print("may land in {c}:     ", nd.weak_inverse(t3, space.set("c")))

###############################################################################
# The inverse image keeps intersections, the weak inverse keeps unions.
# The check runs over every pair of subsets when the space is small.

mu = nd.from_inverse(t3)
alpha = nd.from_weak_inverse(t3)
print(nd.verify_axioms(mu, "multiplicative"))
print(nd.verify_axioms(alpha, "additive"))

###############################################################################
# Going back: the map is recovered from either transformer alone.

print("rebuilt from inverse:", nd.delta_from_multiplicative(mu) == t3)
print("rebuilt from weak inverse:", nd.delta_from_additive(alpha) == t3)

# each transformer is the dual of the other
dual = nd.dualize(mu, "mu_to_alpha")
print("dual agrees:", all(dual(a) == alpha(a) for a in space.subsets()))

###############################################################################
# Swapping the laws fails.  On x -> {x, -x} the weak inverse of the
# non-negative and non-positive halves both cover everything, while the
# weak inverse of their meet {0} is just {0}.

flip = sign_flip(4)
fs = flip.space
nonneg = fs.set(str(v) for v in range(0, 5))
nonpos = fs.set(str(v) for v in range(-4, 1))
print(nd.weak_inverse(flip, nonneg) & nd.weak_inverse(flip, nonpos))
print(nd.weak_inverse(flip, nonneg & nonpos))

# the exhaustive check finds its own (smaller) counterexample
report = nd.verify_axioms(nd.from_weak_inverse(flip), "multiplicative")
print(report.passed, [str(s) for s in report.witness])
