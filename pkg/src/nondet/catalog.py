"""Ready-made choice structures and quilts.

The infinite-state structures are cut down to a finite window: successors
outside the window are dropped.  Truncation can change the analysis (for
instance :func:`stop_or_count` is convergent everywhere once bounded).
"""

from __future__ import annotations

from .gcl import Patch, Quilt
from .sets import ChoiceMap, StateSpace, abort_map, chaos_map, deterministic_map, skip_map
from .frontend.varspace import VarSpace

__all__ = [
    "abort_map",
    "skip_map",
    "chaos_map",
    "deterministic_map",
    "branching_three",
    "reflecting_walk",
    "step_two_walk",
    "stop_or_count",
    "sign_flip",
    "gcd_quilt",
    "stop_or_count_quilt",
]


def branching_three() -> ChoiceMap:
    """``a -> {b, c}``, ``b`` static, ``c`` fixed."""
    space = StateSpace("abc")
    return ChoiceMap.from_mapping(space, {"a": "bc", "b": "", "c": "c"})


def reflecting_walk(n: int = 10) -> ChoiceMap:
    """Walk on ``0..n-1`` stepping ±1, absorbed at 0 and reflected at the top."""
    space = StateSpace.of_size(n)

    def step(x):
        if x == 0:
            return [0]
        return [y for y in (x - 1, x + 1) if y < n]

    return ChoiceMap.from_function(space, step)


def step_two_walk(bound: int = 8) -> ChoiceMap:
    """States ``-bound..bound``; non-negative ``x`` steps ±2, 2 is fixed,
    negative states are static."""
    values = list(range(-bound, bound + 1))
    space = StateSpace(str(v) for v in values)

    def step(i):
        x = values[i]
        if x < 0:
            return []
        if x == 2:
            return ["2"]
        return [str(y) for y in (x - 2, x + 2) if -bound <= y <= bound]

    return ChoiceMap.from_function(space, step)


def _pair_space(width: int) -> VarSpace:
    return VarSpace([("x", 0, width - 1), ("y", 0, 1)])


def stop_or_count(width: int = 8) -> ChoiceMap:
    """On ``x < width, y in {0, 1}``: with ``y = 1`` either stop (``y := 0``)
    or increment ``x``; ``y = 0`` states are fixed."""
    vs = _pair_space(width)

    def step(i):
        env = vs.decode(i)
        x, y = env["x"], env["y"]
        if y == 0:
            return [i]
        out = [vs.encode({"x": x, "y": 0})]
        if x + 1 < width:
            out.append(vs.encode({"x": x + 1, "y": 1}))
        return out

    return ChoiceMap.from_function(vs.states, step)


def sign_flip(radius: int = 4) -> ChoiceMap:
    """``x -> {x, -x}`` on ``-radius..radius``."""
    values = list(range(-radius, radius + 1))
    space = StateSpace(str(v) for v in values)
    return ChoiceMap.from_function(space, lambda i: [str(values[i]), str(-values[i])])


def gcd_quilt(hi: int = 7) -> tuple[VarSpace, Quilt]:
    """Euclid by subtraction on ``x, y in 0..hi``."""
    vs = VarSpace([("x", 0, hi), ("y", 0, hi)])
    envs = list(vs.environments())
    x_big = vs.states.set(i for i, e in enumerate(envs) if e["x"] > e["y"])
    y_big = vs.states.set(i for i, e in enumerate(envs) if e["y"] > e["x"])
    patches = [
        Patch.build(x_big, lambda i: vs.encode({"x": envs[i]["x"] - envs[i]["y"], "y": envs[i]["y"]})),
        Patch.build(y_big, lambda i: vs.encode({"x": envs[i]["x"], "y": envs[i]["y"] - envs[i]["x"]})),
    ]
    return vs, Quilt(vs.states, patches)


def stop_or_count_quilt(width: int = 8) -> tuple[VarSpace, Quilt]:
    """Quilt form of :func:`stop_or_count`: ``y = 1 -> y := 0`` and
    ``y = 1 and x < width-1 -> x := x + 1``."""
    vs = _pair_space(width)
    envs = list(vs.environments())
    stop = vs.states.set(i for i, e in enumerate(envs) if e["y"] == 1)
    count = vs.states.set(i for i, e in enumerate(envs) if e["y"] == 1 and e["x"] < width - 1)
    patches = [
        Patch.build(stop, lambda i: vs.encode({"x": envs[i]["x"], "y": 0})),
        Patch.build(count, lambda i: vs.encode({"x": envs[i]["x"] + 1, "y": 1})),
    ]
    return vs, Quilt(vs.states, patches)
