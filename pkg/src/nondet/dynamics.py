"""Iterated behaviour of a choice map.

The point sets (fixed, stable, convergent, weakly convergent) are computed
as bit-vector fixpoints, each settling in at most ``n`` sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .sets import (
    ChoiceMap,
    State,
    StateSet,
    _check_same,
    apply_mask,
    dyn_mask,
    inverse_mask,
    iter_bits,
    weak_inverse_mask,
)

Classification = Literal["aborted", "terminal", "extendable"]


def _fix_mask(masks: tuple[int, ...]) -> int:
    out = 0
    for x, s in enumerate(masks):
        if s == 1 << x:
            out |= 1 << x
    return out


def _stab_mask(masks: tuple[int, ...]) -> int:
    current = dyn_mask(masks)
    while True:
        nxt = current & inverse_mask(masks, current)
        if nxt == current:
            return current
        current = nxt


def _ascend(start: int, step) -> int:
    current = start
    while True:
        nxt = current | step(current)
        if nxt == current:
            return current
        current = nxt


def fixed_points(delta: ChoiceMap) -> StateSet:
    """States whose only successor is themselves."""
    return StateSet(delta.space, _fix_mask(delta.masks))


def stable_points(delta: ChoiceMap) -> StateSet:
    """States from which no sequence of moves leaves the dynamic states.

    Greatest fixpoint: start from the dynamic states and repeatedly drop
    states having a successor outside the current set.
    """
    return StateSet(delta.space, _stab_mask(delta.masks))


def convergent_points(delta: ChoiceMap) -> StateSet:
    """States all of whose behaviour ends in a fixed point after bounded time.

    Least fixpoint of ``C -> fix ∪ inverse(C)``; the ascending union of the
    iterated inverse images of the fixed points.
    """
    masks = delta.masks
    return StateSet(delta.space, _ascend(_fix_mask(masks), lambda c: inverse_mask(masks, c)))


def weakly_convergent_points(delta: ChoiceMap) -> StateSet:
    """States from which some run reaches a fixed point (backward reachability)."""
    masks = delta.masks
    return StateSet(delta.space, _ascend(_fix_mask(masks), lambda w: weak_inverse_mask(masks, w)))


@dataclass(frozen=True)
class AnalysisSets:
    dyn: StateSet
    fix: StateSet
    stab: StateSet
    con: StateSet
    con_w: StateSet

    def as_dict(self) -> dict[str, StateSet]:
        return {"dyn": self.dyn, "fix": self.fix, "stab": self.stab, "con": self.con, "con_w": self.con_w}


def analyze(delta: ChoiceMap) -> AnalysisSets:
    return AnalysisSets(
        dyn=StateSet(delta.space, dyn_mask(delta.masks)),
        fix=fixed_points(delta),
        stab=stable_points(delta),
        con=convergent_points(delta),
        con_w=weakly_convergent_points(delta),
    )


def reachable_mask(masks: tuple[int, ...], start: int) -> int:
    """States reachable from ``start`` in zero or more moves."""
    seen = start
    frontier = start
    while frontier:
        frontier = apply_mask(masks, frontier) & ~seen
        seen |= frontier
    return seen


def limit_map(delta: ChoiceMap) -> ChoiceMap:
    """Map each state to the fixed points reachable from it."""
    masks = delta.masks
    fix = _fix_mask(masks)
    return ChoiceMap(delta.space, (reachable_mask(masks, 1 << x) & fix for x in range(len(masks))))


def basin(delta: ChoiceMap, a: StateSet) -> StateSet:
    """Convergent states all of whose limit points lie in ``a``."""
    _check_same(delta.space, a.space)
    con = convergent_points(delta).mask
    return StateSet(delta.space, con & inverse_mask(limit_map(delta).masks, a.mask))


def basin_by_iterated_inverse(delta: ChoiceMap, a: StateSet) -> StateSet:
    """Basin as the union of ``inverse^k(a ∩ fix)`` over ``k >= 0``.

    An independent route to :func:`basin`, kept for cross-checking.
    """
    _check_same(delta.space, a.space)
    masks = delta.masks
    return StateSet(delta.space, _ascend(a.mask & _fix_mask(masks), lambda c: inverse_mask(masks, c)))


def iterated_inverse(delta: ChoiceMap, a: StateSet, k: int) -> StateSet:
    """Apply the inverse image operator ``k`` times to ``a``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    _check_same(delta.space, a.space)
    mask = a.mask
    for _ in range(k):
        mask = inverse_mask(delta.masks, mask)
    return StateSet(delta.space, mask)


@dataclass(frozen=True)
class Run:
    """A path ``x0 -> x1 -> ... -> xm`` (``m >= 1``) of state indices."""

    states: tuple[int, ...]
    classification: Classification

    @property
    def length(self) -> int:
        return len(self.states) - 1

    def names(self, space) -> list[str]:
        return [space.names[i] for i in self.states]


def enumerate_runs(delta: ChoiceMap, start: State, max_len: int) -> list[Run]:
    """Every run from ``start`` of length ``1..max_len``, depth first.

    Runs are not continued once they enter a fixed point or a static state.
    Distinct paths are distinct runs, so the count can grow exponentially
    with ``max_len``.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    masks = delta.masks
    fix = _fix_mask(masks)
    x0 = delta.space.index(start)
    runs: list[Run] = []

    def extend(path: list[int]) -> None:
        for y in iter_bits(masks[path[-1]]):
            path.append(y)
            if fix >> y & 1:
                runs.append(Run(tuple(path), "terminal"))
            elif not masks[y]:
                runs.append(Run(tuple(path), "aborted"))
            else:
                runs.append(Run(tuple(path), "extendable"))
                if len(path) <= max_len:
                    extend(path)
            path.pop()

    extend([x0])
    return runs
