"""
Where does a nondeterministic process end up?
==============================================

Fixed points, stable points (never get stuck), convergent points (every
behaviour settles within bounded time) and weakly convergent points (some
behaviour settles).  All four are bit-vector fixpoints.
"""

import nondet as nd
from nondet.catalog import reflecting_walk, step_two_walk

walk = reflecting_walk(10)  # 0 absorbs, interior states step left or right
sets = nd.analyze(walk)
for key, value in sets.as_dict().items():
    print(f"{key:6s}", value)

# every state can reach 0, but only 0 is sure to get there
print("limit of 7:", nd.limit_map(walk)["7"])

###############################################################################
# A walk on -8..8 in steps of two: negative states are stuck, 2 is fixed.
# Here the four sets are all different.

z = step_two_walk(8)
for key, value in nd.analyze(z).as_dict().items():
    print(f"{key:6s}", value)

###############################################################################
# Runs from a state, classified as they are found.

for run in nd.enumerate_runs(walk, "2", 3):
    print(run.classification.ljust(10), " -> ".join(run.names(walk.space)))

###############################################################################
# The basin of A: convergent states whose limit points all lie in A.
# Two independent routes give the same answer.

a = z.space.set(["2"])
print(nd.basin(z, a), nd.basin_by_iterated_inverse(z, a))
