"""
Guarded commands and loop preconditions
=======================================

Euclid's algorithm by subtraction, over x, y in 0..7.  A loop state with a
zero coordinate keeps its guard true but never moves: the loop hangs there.
"""

import math
from pathlib import Path

import nondet as nd
from nondet.frontend import parse_program, predicate_set, program_to_quilt

source = (Path(__file__).parent / "data" / "gcd.gcl").read_text()
program = parse_program(source)
q = program_to_quilt(program)
vs = program.space

print(len(q), "commands over", vs.size, "states")
print("hang set:", q.hang)

###############################################################################
# Weakest precondition for ending on the diagonal.  The iteration starts
# from the unguarded part of the target and grows one step at a time.

diag = predicate_set(vs, "x == y")
steps = nd.wp_do_iterates(q, diag)
print("sizes:", [len(h) for h in steps])
pre = steps[-1]
print(len(pre), "states; (0,0) included:", vs.encode({"x": 0, "y": 0}) in pre)

# the same set from the loop's own choice map and from the basin
print(pre == nd.inverse(nd.do_delta(q), diag) == nd.basin(nd.quilt_delta(q), diag - q.guard))

###############################################################################
# The gcd is invariant under each command, so the loop keeps it.  The
# axis states (2,0) and (0,2) hang, so only (2,2) is reached.

gcd_two = vs.states.set(i for i, env in enumerate(vs.environments()) if math.gcd(env["x"], env["y"]) == 2)
print(nd.check_invariance(q, gcd_two))
print(nd.apply(nd.do_delta(q), gcd_two))
