"""Finite state spaces, state sets and choice set maps.

States are dense indices ``0..n-1`` with a name table.  A :class:`StateSet`
is an integer bit mask tied to its :class:`StateSpace`; a :class:`ChoiceMap`
holds one successor mask per state.  Everything here is immutable.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from typing import Union

#: Practical ceiling for set operations; exhaustive law checks stop far below.
MAX_STATES = 4096

State = Union[int, str]


class SpaceMismatchError(ValueError):
    """Raised when objects from two different state spaces are combined."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class StateSpace:
    """An ordered, finite, non-empty collection of distinctly named states."""

    __slots__ = ("names", "_index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(str(name) for name in names)
        if not names:
            raise ValueError("a state space needs at least one state")
        if len(names) > MAX_STATES:
            raise ValueError(f"state space too large ({len(names)} > {MAX_STATES})")
        index = {}
        for i, name in enumerate(names):
            if name in index:
                raise ValueError(f"duplicate state name {name!r}")
            index[name] = i
        self.names = names
        self._index = index
        self._hash = hash(names)

    @classmethod
    def of_size(cls, n: int) -> StateSpace:
        """Space with states named ``"0"``, ``"1"``, ..."""
        return cls(str(i) for i in range(n))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, StateSpace):
            return NotImplemented
        return self._hash == other._hash and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if len(self.names) <= 8:
            return f"StateSpace({list(self.names)!r})"
        return f"StateSpace(<{len(self.names)} states>)"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, state: State) -> int:
        """Resolve a state name or index to its index."""
        if isinstance(state, str):
            try:
                return self._index[state]
            except KeyError:
                raise KeyError(f"unknown state {state!r}") from None
        i = int(state)
        if not 0 <= i < len(self.names):
            raise IndexError(f"state index {i} out of range for {len(self.names)} states")
        return i

    def name(self, index: int) -> str:
        return self.names[index]

    def set(self, states: Iterable[State] = ()) -> StateSet:
        mask = 0
        for s in states:
            mask |= 1 << self.index(s)
        return StateSet(self, mask)

    def empty(self) -> StateSet:
        return StateSet(self, 0)

    def full(self) -> StateSet:
        return StateSet(self, self.full_mask)

    def singleton(self, state: State) -> StateSet:
        return StateSet(self, 1 << self.index(state))

    def subsets(self) -> Iterator[StateSet]:
        """All ``2**n`` subsets, in mask order.  Only sensible for small ``n``."""
        for mask in range(1 << len(self.names)):
            yield StateSet(self, mask)


def _check_same(a: StateSpace, b: StateSpace) -> None:
    if a is not b and a != b:
        raise SpaceMismatchError(f"{a!r} and {b!r} are different state spaces")


class StateSet:
    """A subset of a :class:`StateSpace`, stored as a bit mask.

    Iteration yields state indices in ascending order.  ``~s`` is the
    complement relative to the space.
    """

    __slots__ = ("space", "mask")

    def __init__(self, space: StateSpace, mask: int = 0):
        if mask < 0 or mask >> len(space):
            raise ValueError("mask has bits outside the state space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, key, value):
        raise AttributeError("StateSet is immutable")

    def _other(self, other: StateSet) -> int:
        if not isinstance(other, StateSet):
            raise TypeError(f"expected StateSet, got {type(other).__name__}")
        _check_same(self.space, other.space)
        return other.mask

    def __or__(self, other):
        return StateSet(self.space, self.mask | self._other(other))

    def __and__(self, other):
        return StateSet(self.space, self.mask & self._other(other))

    def __sub__(self, other):
        return StateSet(self.space, self.mask & ~self._other(other))

    def __xor__(self, other):
        return StateSet(self.space, self.mask ^ self._other(other))

    def __invert__(self):
        return StateSet(self.space, self.space.full_mask & ~self.mask)

    complement = __invert__

    def __le__(self, other):
        return self.mask & ~self._other(other) == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __eq__(self, other):
        if not isinstance(other, StateSet):
            return NotImplemented
        return self.mask == other.mask and self.space == other.space

    def __hash__(self):
        return hash((self.space, self.mask))

    def __bool__(self):
        return self.mask != 0

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, state: State) -> bool:
        return bool(self.mask >> self.space.index(state) & 1)

    def isdisjoint(self, other: StateSet) -> bool:
        return self.mask & self._other(other) == 0

    def names(self) -> list[str]:
        return [self.space.names[i] for i in self]

    def __repr__(self):
        return "{" + ", ".join(self.names()) + "}"


class ChoiceMap:
    """Assigns every state of a space its set of possible successors.

    An empty successor set marks a static element.  ``delta[x]`` accepts a
    state name or index and returns a :class:`StateSet`.
    """

    __slots__ = ("space", "masks")

    def __init__(self, space: StateSpace, masks: Iterable[int]):
        masks = tuple(masks)
        if len(masks) != len(space):
            raise ValueError(f"expected {len(space)} successor sets, got {len(masks)}")
        full = space.full_mask
        for m in masks:
            if m < 0 or m & ~full:
                raise ValueError("successor mask has bits outside the state space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "masks", masks)

    def __setattr__(self, key, value):
        raise AttributeError("ChoiceMap is immutable")

    @classmethod
    def from_sets(cls, space: StateSpace, successors: Iterable[StateSet]) -> ChoiceMap:
        masks = []
        for s in successors:
            _check_same(space, s.space)
            masks.append(s.mask)
        return cls(space, masks)

    @classmethod
    def from_function(cls, space: StateSpace, fn: Callable[[int], Iterable[State]]) -> ChoiceMap:
        """Build from ``fn(index) -> iterable of successor names or indices``."""
        return cls(space, (space.set(fn(i)).mask for i in range(len(space))))

    @classmethod
    def from_mapping(cls, space: StateSpace, mapping: Mapping[State, Iterable[State]]) -> ChoiceMap:
        """Build from ``{state: successors}``; absent states get no successors."""
        masks = [0] * len(space)
        for state, succ in mapping.items():
            masks[space.index(state)] = space.set(succ).mask
        return cls(space, masks)

    def __getitem__(self, state: State) -> StateSet:
        return StateSet(self.space, self.masks[self.space.index(state)])

    def __len__(self):
        return len(self.masks)

    def __eq__(self, other):
        if not isinstance(other, ChoiceMap):
            return NotImplemented
        return self.masks == other.masks and self.space == other.space

    def __hash__(self):
        return hash((self.space, self.masks))

    def items(self) -> Iterator[tuple[str, StateSet]]:
        for i, name in enumerate(self.space.names):
            yield name, StateSet(self.space, self.masks[i])

    def __repr__(self):
        body = ", ".join(f"{name}: {succ!r}" for name, succ in self.items())
        return f"ChoiceMap({body})"


def _member_of(delta: ChoiceMap, a: StateSet) -> int:
    _check_same(delta.space, a.space)
    return a.mask


# mask-level kernels shared by the other modules

def apply_mask(masks: tuple[int, ...], a: int) -> int:
    out = 0
    for x in iter_bits(a):
        out |= masks[x]
    return out


def inverse_mask(masks: tuple[int, ...], a: int) -> int:
    out = 0
    outside = ~a
    for x, s in enumerate(masks):
        if s and not s & outside:
            out |= 1 << x
    return out


def weak_inverse_mask(masks: tuple[int, ...], a: int) -> int:
    out = 0
    for x, s in enumerate(masks):
        if s & a:
            out |= 1 << x
    return out


def dyn_mask(masks: tuple[int, ...]) -> int:
    out = 0
    for x, s in enumerate(masks):
        if s:
            out |= 1 << x
    return out


def dyn_set(delta: ChoiceMap) -> StateSet:
    """States with at least one successor."""
    return StateSet(delta.space, dyn_mask(delta.masks))


def apply(delta: ChoiceMap, a: StateSet) -> StateSet:
    """Union of the successor sets of the members of ``a``."""
    return StateSet(delta.space, apply_mask(delta.masks, _member_of(delta, a)))


def inverse(delta: ChoiceMap, a: StateSet) -> StateSet:
    """States with a non-empty successor set lying entirely inside ``a``."""
    return StateSet(delta.space, inverse_mask(delta.masks, _member_of(delta, a)))


def weak_inverse(delta: ChoiceMap, a: StateSet) -> StateSet:
    """States with at least one successor in ``a``."""
    return StateSet(delta.space, weak_inverse_mask(delta.masks, _member_of(delta, a)))


def compose(outer: ChoiceMap, inner: ChoiceMap) -> ChoiceMap:
    """``x -> outer(inner(x))``: run ``inner`` first, then ``outer``."""
    _check_same(outer.space, inner.space)
    return ChoiceMap(outer.space, (apply_mask(outer.masks, m) for m in inner.masks))


def power(delta: ChoiceMap, k: int) -> ChoiceMap:
    """``k``-fold composition of ``delta``; ``k == 0`` gives the skip map."""
    if k < 0:
        raise ValueError("power needs k >= 0")
    result = skip_map(delta.space)
    base = delta
    # square-and-multiply; composition is associative
    while k:
        if k & 1:
            result = compose(base, result)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def skip_map(space: StateSpace) -> ChoiceMap:
    return ChoiceMap(space, (1 << i for i in range(len(space))))


def abort_map(space: StateSpace) -> ChoiceMap:
    return ChoiceMap(space, (0,) * len(space))


def chaos_map(space: StateSpace) -> ChoiceMap:
    return ChoiceMap(space, (space.full_mask,) * len(space))


def deterministic_map(space: StateSpace, fn: Callable[[int], State]) -> ChoiceMap:
    """Choice map of a self-map: every state has exactly one successor."""
    return ChoiceMap(space, (1 << space.index(fn(i)) for i in range(len(space))))
