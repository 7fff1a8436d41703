"""Alternative (IF) and repetitive (DO) constructs built from quilts.

A patch is a guarded command: a guard set ``domain`` and a transition
defined on that set only.  A quilt is an ordered collection of patches.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType
from typing import Literal, Optional

from . import dynamics
from .sets import (
    ChoiceMap,
    State,
    StateSet,
    StateSpace,
    SpaceMismatchError,
    _check_same,
    inverse_mask,
    iter_bits,
)


@dataclass(frozen=True, eq=False)
class Patch:
    """Guard set plus a transition ``{state index: next state index}`` on it."""

    domain: StateSet
    transition: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "transition", MappingProxyType(dict(self.transition)))
        n = len(self.domain.space)
        keys = set(self.transition)
        if keys != set(self.domain):
            raise ValueError("transition must be defined exactly on the patch domain")
        for y in self.transition.values():
            if not 0 <= y < n:
                raise ValueError(f"transition target {y} outside the state space")

    @classmethod
    def build(cls, domain: StateSet, fn: Callable[[int], State]) -> Patch:
        space = domain.space
        return cls(domain, {x: space.index(fn(x)) for x in domain})

    @property
    def space(self) -> StateSpace:
        return self.domain.space

    def __eq__(self, other):
        if not isinstance(other, Patch):
            return NotImplemented
        return self.domain == other.domain and dict(self.transition) == dict(other.transition)

    def __hash__(self):
        return hash(self.domain)


class Quilt:
    """An ordered collection of patches over one state space."""

    __slots__ = ("space", "patches", "guard", "hang")

    def __init__(self, space: StateSpace, patches: Iterable[Patch] = ()):
        patches = tuple(patches)
        for p in patches:
            if p.space != space:
                raise SpaceMismatchError("patch belongs to a different state space")
        guard = 0
        for p in patches:
            guard |= p.domain.mask
        # guarded states that every enabled command leaves unchanged
        hang = 0
        for x in iter_bits(guard):
            if all(p.transition[x] == x for p in patches if x in p.transition):
                hang |= 1 << x
        self.space = space
        self.patches = patches
        self.guard = StateSet(space, guard)
        self.hang = StateSet(space, hang)

    def __len__(self):
        return len(self.patches)

    def __iter__(self):
        return iter(self.patches)

    def __eq__(self, other):
        if not isinstance(other, Quilt):
            return NotImplemented
        return self.space == other.space and self.patches == other.patches

    def __repr__(self):
        return f"Quilt(<{len(self.space)} states>, {len(self.patches)} patches)"


def _targets(q: Quilt) -> list[int]:
    masks = [0] * len(q.space)
    for p in q.patches:
        for x, y in p.transition.items():
            masks[x] |= 1 << y
    return masks


def quilt_delta(q: Quilt) -> ChoiceMap:
    """Enabled commands' results on the guard set; stay put outside it."""
    masks = _targets(q)
    for x in range(len(masks)):
        if not masks[x]:
            masks[x] = 1 << x
    return ChoiceMap(q.space, masks)


def if_delta(q: Quilt) -> ChoiceMap:
    """Like :func:`quilt_delta` but with no successors outside the guard set."""
    return ChoiceMap(q.space, _targets(q))


def do_delta(q: Quilt) -> ChoiceMap:
    """Limit map of the quilt restricted to the basin of the unguarded states."""
    dq = quilt_delta(q)
    proper = dynamics.basin(dq, ~q.guard).mask
    limit = dynamics.limit_map(dq).masks
    return ChoiceMap(q.space, (limit[x] if proper >> x & 1 else 0 for x in range(len(limit))))


def wp_if(q: Quilt, a: StateSet) -> StateSet:
    _check_same(q.space, a.space)
    return StateSet(q.space, inverse_mask(tuple(_targets(q)), a.mask))


def wp_if_patchwise(q: Quilt, a: StateSet) -> StateSet:
    """Guarded states where every enabled command lands in ``a``."""
    _check_same(q.space, a.space)
    out = q.guard.mask
    for p in q.patches:
        for x, y in p.transition.items():
            if not a.mask >> y & 1:
                out &= ~(1 << x)
    return StateSet(q.space, out)


def wp_do_iterates(q: Quilt, a: StateSet) -> list[StateSet]:
    """The ascending sequence ``H_0 ⊆ H_1 ⊆ ...`` up to and including its limit.

    ``H_0 = a ∖ guard``, ``H_{k+1} = wp_if(H_k) ∪ H_0``.
    """
    _check_same(q.space, a.space)
    targets = tuple(_targets(q))
    base = a.mask & ~q.guard.mask
    seq = [base]
    while True:
        nxt = inverse_mask(targets, seq[-1]) | base
        if nxt == seq[-1]:
            break
        seq.append(nxt)
    return [StateSet(q.space, m) for m in seq]


def wp_do(q: Quilt, a: StateSet) -> StateSet:
    """States from which the loop surely terminates in ``a``."""
    return wp_do_iterates(q, a)[-1]


@dataclass(frozen=True)
class Verdict:
    """Result of a theorem check.

    ``status`` is ``"pass"``, ``"hypothesis-not-met"`` or ``"violation"``;
    ``witness`` names an offending state index for the latter two.
    """

    status: Literal["pass", "hypothesis-not-met", "violation"]
    witness: Optional[int] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "violation"


def _first_escape(masks, source: int, target: int) -> Optional[int]:
    for x in iter_bits(source):
        if masks[x] & ~target:
            return x
    return None


def check_alternative(q: Quilt, a: StateSet, b: StateSet) -> Verdict:
    """If ``a`` lies in the guard set and each command maps ``a`` into ``b``,
    the alternative construct maps ``a`` into ``b``."""
    _check_same(q.space, a.space)
    _check_same(q.space, b.space)
    outside = a.mask & ~q.guard.mask
    if outside:
        x = next(iter_bits(outside))
        return Verdict("hypothesis-not-met", x, "state in A is not guarded")
    for p in q.patches:
        for x in iter_bits(a.mask & p.domain.mask):
            if not b.mask >> p.transition[x] & 1:
                return Verdict("hypothesis-not-met", x, "a command maps A outside B")
    bad = _first_escape(if_delta(q).masks, a.mask, b.mask)
    if bad is not None:
        return Verdict("violation", bad, "IF maps a state of A outside B")
    return Verdict("pass")


def check_invariance(q: Quilt, v: StateSet) -> Verdict:
    """If the alternative construct keeps ``v ∩ guard`` inside ``v``, the loop
    maps convergent states of ``v`` into ``v`` minus the guard set."""
    _check_same(q.space, v.space)
    guard = q.guard.mask
    ifm = if_delta(q).masks
    bad = _first_escape(ifm, v.mask & guard, v.mask)
    if bad is not None:
        return Verdict("hypothesis-not-met", bad, "IF leaves V from a guarded state")
    con = dynamics.convergent_points(quilt_delta(q)).mask
    target = v.mask & ~guard
    bad = _first_escape(do_delta(q).masks, v.mask & con, target)
    if bad is not None:
        return Verdict("violation", bad, "DO leaves V or ends in a guarded state")
    return Verdict("pass")
