"""Set transformers: maps from subsets of a space to subsets of it.

A multiplicative transformer preserves the empty set and intersections, an
additive one preserves the empty set and unions.  They correspond one to one
with choice maps through :func:`from_inverse` / :func:`delta_from_multiplicative`
and :func:`from_weak_inverse` / :func:`delta_from_additive`, and to each
other through :func:`dualize`.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .sets import (
    ChoiceMap,
    SpaceMismatchError,
    StateSet,
    StateSpace,
    inverse_mask,
    weak_inverse_mask,
)

Law = Literal["multiplicative", "additive"]

#: Largest space for which :func:`verify_axioms` will enumerate all subset pairs.
EXHAUSTIVE_LIMIT = 12


class SetTransformer:
    """An opaque, deterministic map from subsets of ``space`` to subsets of it.

    ``fn`` receives and returns :class:`StateSet` objects.  ``origin`` is a
    free-form provenance tag (``"inverse"``, ``"weak-inverse"``, ``"dual"``,
    ``"user"``).
    """

    __slots__ = ("space", "fn", "origin")

    def __init__(self, space: StateSpace, fn: Callable[[StateSet], StateSet], origin: str = "user"):
        self.space = space
        self.fn = fn
        self.origin = origin

    def __call__(self, a: StateSet) -> StateSet:
        if a.space != self.space:
            raise SpaceMismatchError("argument is not a subset of the transformer's space")
        out = self.fn(a)
        if not isinstance(out, StateSet) or out.space != self.space:
            raise SpaceMismatchError("transformer returned a set outside its space")
        return out

    def eval_mask(self, mask: int) -> int:
        return self(StateSet(self.space, mask)).mask

    def __repr__(self):
        return f"SetTransformer(<{len(self.space)} states>, origin={self.origin!r})"

    @classmethod
    def from_masks(cls, space: StateSpace, fn: Callable[[int], int], origin: str = "user") -> SetTransformer:
        return cls(space, lambda a: StateSet(space, fn(a.mask)), origin)


def identity(space: StateSpace) -> SetTransformer:
    return SetTransformer(space, lambda a: a, "identity")


def from_inverse(delta: ChoiceMap) -> SetTransformer:
    masks = delta.masks
    return SetTransformer.from_masks(delta.space, lambda m: inverse_mask(masks, m), "inverse")


def from_weak_inverse(delta: ChoiceMap) -> SetTransformer:
    masks = delta.masks
    return SetTransformer.from_masks(delta.space, lambda m: weak_inverse_mask(masks, m), "weak-inverse")


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of :func:`verify_axioms`.

    On failure ``witness`` is a family of sets breaking the law: a single
    empty set when ``t(∅) != ∅``, otherwise two or more sets whose
    intersection (multiplicative) or union (additive) is not preserved.
    """

    law: Law
    passed: bool
    witness: Optional[tuple[StateSet, ...]]
    coverage: Literal["exhaustive", "sampled"]
    checked: int
    seed: Optional[int] = None

    def __bool__(self):
        return self.passed


def _combine(law: Law, masks: Sequence[int], full: int) -> int:
    if law == "multiplicative":
        out = full
        for m in masks:
            out &= m
    else:
        out = 0
        for m in masks:
            out |= m
    return out


def violates(t: SetTransformer, law: Law, family: Sequence[StateSet]) -> bool:
    """True if ``family`` is a counterexample to ``law`` for ``t``."""
    if law not in ("multiplicative", "additive"):
        raise ValueError(f"unknown law {law!r}")
    masks = [a.mask for a in family]
    if len(masks) == 1 and masks[0] == 0:
        return t.eval_mask(0) != 0
    full = t.space.full_mask
    lhs = t.eval_mask(_combine(law, masks, full))
    rhs = _combine(law, [t.eval_mask(m) for m in masks], full)
    return lhs != rhs


def _exhaustive(t: SetTransformer, law: Law) -> tuple[Optional[tuple[int, int]], int]:
    n = len(t.space)
    size = 1 << n
    table = np.fromiter((t.eval_mask(m) for m in range(size)), dtype=np.int64, count=size)
    subsets = np.arange(size, dtype=np.int64)
    for a in range(size):
        # only pairs a <= b; the laws are symmetric
        bs = subsets[a:]
        if law == "multiplicative":
            bad = table[a & bs] != (table[a] & table[a:])
        else:
            bad = table[a | bs] != (table[a] | table[a:])
        hit = np.flatnonzero(bad)
        if hit.size:
            return (a, int(bs[hit[0]])), size * (size + 1) // 2
    return None, size * (size + 1) // 2


def verify_axioms(
    t: SetTransformer,
    law: Law,
    *,
    samples: Optional[int] = None,
    seed: int = 0,
) -> AxiomReport:
    """Check that ``t`` is multiplicative or additive.

    With ``samples=None`` every pair of subsets is checked (spaces of at most
    :data:`EXHAUSTIVE_LIMIT` states).  Otherwise ``samples`` random families
    of two to four sets are drawn from a generator seeded with ``seed``.
    Preserving ∅ and all pairwise meets (joins) is enough on a finite space,
    since any finite family is reached by repeated pairing.
    """
    if law not in ("multiplicative", "additive"):
        raise ValueError(f"unknown law {law!r}")
    space = t.space
    n = len(space)
    empty_witness = (space.empty(),)

    if samples is None:
        if n > EXHAUSTIVE_LIMIT:
            raise ValueError(f"exhaustive check limited to {EXHAUSTIVE_LIMIT} states, space has {n}")
        if t.eval_mask(0) != 0:
            return AxiomReport(law, False, empty_witness, "exhaustive", 1)
        pair, checked = _exhaustive(t, law)
        if pair is None:
            return AxiomReport(law, True, None, "exhaustive", checked + 1)
        witness = tuple(StateSet(space, m) for m in pair)
        return AxiomReport(law, False, witness, "exhaustive", checked + 1)

    if t.eval_mask(0) != 0:
        return AxiomReport(law, False, empty_witness, "sampled", 1, seed)
    rng = random.Random(seed)
    full = space.full_mask
    for i in range(samples):
        size = 2 if i % 2 == 0 else rng.randint(2, 4)
        masks = [_random_mask(rng, n, full) for _ in range(size)]
        family = tuple(StateSet(space, m) for m in masks)
        if violates(t, law, family):
            return AxiomReport(law, False, family, "sampled", i + 2, seed)
    return AxiomReport(law, True, None, "sampled", samples + 1, seed)


def _random_mask(rng: random.Random, n: int, full: int) -> int:
    # vary density so that near-empty and near-full sets both show up
    mode = rng.random()
    if mode < 0.2:
        return rng.getrandbits(n) & rng.getrandbits(n) & rng.getrandbits(n)
    if mode < 0.4:
        return (rng.getrandbits(n) | rng.getrandbits(n) | rng.getrandbits(n)) & full
    return rng.getrandbits(n)


def delta_from_multiplicative(mu: SetTransformer) -> ChoiceMap:
    """The unique choice map whose inverse image operator is ``mu``.

    Uses ``y ∈ Δ(x)  iff  x ∈ μ(X) and x ∉ μ(X ∖ {y})``, which agrees with the
    intersection ``∩{A | x ∈ μ(A)}`` whenever ``mu`` is multiplicative, at the
    cost of ``n + 1`` evaluations.  Non-multiplicative input is not rejected.
    """
    space = mu.space
    n = len(space)
    full = space.full_mask
    dom = mu.eval_mask(full)
    without = [mu.eval_mask(full & ~(1 << y)) for y in range(n)]
    masks = []
    for x in range(n):
        bit = 1 << x
        if not dom & bit:
            masks.append(0)
            continue
        succ = 0
        for y in range(n):
            if not without[y] & bit:
                succ |= 1 << y
        masks.append(succ)
    return ChoiceMap(space, masks)


def delta_from_additive(alpha: SetTransformer) -> ChoiceMap:
    """The unique choice map whose weak inverse image operator is ``alpha``.

    ``Δ(x) = {y | x ∈ α({y})}`` for ``x ∈ α(X)``, empty otherwise.
    """
    space = alpha.space
    n = len(space)
    dom = alpha.eval_mask(space.full_mask)
    singles = [alpha.eval_mask(1 << y) for y in range(n)]
    masks = []
    for x in range(n):
        bit = 1 << x
        succ = 0
        if dom & bit:
            for y in range(n):
                if singles[y] & bit:
                    succ |= 1 << y
        masks.append(succ)
    return ChoiceMap(space, masks)


def dualize(t: SetTransformer, direction: Literal["mu_to_alpha", "alpha_to_mu"] = "mu_to_alpha") -> SetTransformer:
    """``A -> t(X) ∖ t(A^c)``.

    The same formula turns a multiplicative map into its additive partner and
    back; ``direction`` only sets the provenance tag of the result.
    """
    if direction not in ("mu_to_alpha", "alpha_to_mu"):
        raise ValueError(f"unknown direction {direction!r}")
    full = t.space.full_mask
    top = t.eval_mask(full)
    return SetTransformer.from_masks(
        t.space,
        lambda m: top & ~t.eval_mask(full & ~m),
        "dual-additive" if direction == "mu_to_alpha" else "dual-multiplicative",
    )


class MonotoneChain:
    """A finite ascending or descending chain of subsets of one space."""

    __slots__ = ("sets", "direction")

    def __init__(self, sets: Sequence[StateSet]):
        sets = tuple(sets)
        if not sets:
            raise ValueError("a chain needs at least one set")
        space = sets[0].space
        for s in sets:
            if s.space != space:
                raise SpaceMismatchError("chain mixes state spaces")
        pairs = list(zip(sets, sets[1:]))
        if all(a <= b for a, b in pairs):
            direction = "ascending"
        elif all(a >= b for a, b in pairs):
            direction = "descending"
        else:
            raise ValueError("sequence is neither ascending nor descending")
        self.sets = sets
        self.direction = direction

    @property
    def space(self) -> StateSpace:
        return self.sets[0].space

    @property
    def limit(self) -> StateSet:
        # union of an ascending / intersection of a descending finite chain
        return self.sets[-1]

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def check_continuity(t: SetTransformer, chain: MonotoneChain) -> bool:
    """Does ``t`` commute with the limit of ``chain``?

    The limit of the images is their union for an ascending chain and their
    intersection for a descending one.
    """
    if not isinstance(chain, MonotoneChain):
        chain = MonotoneChain(chain)
    images = [t(a) for a in chain]
    if chain.direction == "ascending":
        image_limit = t.space.empty()
        for b in images:
            image_limit = image_limit | b
    else:
        image_limit = t.space.full()
        for b in images:
            image_limit = image_limit & b
    return t(chain.limit) == image_limit
