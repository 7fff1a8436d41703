"""State spaces spanned by bounded integer variables."""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from math import prod

from ..sets import MAX_STATES, StateSpace

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class VarSpace:
    """Cartesian product of integer ranges ``lo..hi`` (inclusive).

    States are numbered in mixed radix with the first declared variable most
    significant, so the index order is lexicographic in declaration order.
    State names read ``(x=3, y=1)``.
    """

    def __init__(self, variables: Iterable[tuple[str, int, int]], max_states: int = MAX_STATES):
        variables = tuple((str(name), int(lo), int(hi)) for name, lo, hi in variables)
        if not variables:
            raise ValueError("at least one variable is required")
        seen = set()
        for name, lo, hi in variables:
            if not _IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            if name in seen:
                raise ValueError(f"variable {name!r} declared twice")
            if lo > hi:
                raise ValueError(f"empty range {lo}..{hi} for {name!r}")
            seen.add(name)
        radices = [hi - lo + 1 for _, lo, hi in variables]
        size = prod(radices)
        if size > max_states:
            raise ValueError(f"variable space has {size} states, limit is {max_states}")
        self.variables = variables
        self.radices = tuple(radices)
        self.size = size
        self._pos = {name: i for i, (name, _, _) in enumerate(variables)}
        self.states = StateSpace(self.state_name(self.decode(i)) for i in range(size))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _, _ in self.variables)

    def __len__(self):
        return self.size

    def __contains__(self, name: str) -> bool:
        return name in self._pos

    def __eq__(self, other):
        if not isinstance(other, VarSpace):
            return NotImplemented
        return self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        decls = ", ".join(f"{n}:{lo}..{hi}" for n, lo, hi in self.variables)
        return f"VarSpace({decls})"

    def bounds(self, name: str) -> tuple[int, int]:
        _, lo, hi = self.variables[self._pos[name]]
        return lo, hi

    def in_range(self, name: str, value: int) -> bool:
        lo, hi = self.bounds(name)
        return lo <= value <= hi

    def encode(self, values: Mapping[str, int]) -> int:
        index = 0
        for (name, lo, hi), radix in zip(self.variables, self.radices):
            v = values[name]
            if not lo <= v <= hi:
                raise ValueError(f"{name}={v} outside {lo}..{hi}")
            index = index * radix + (v - lo)
        return index

    def decode(self, index: int) -> dict[str, int]:
        if not 0 <= index < self.size:
            raise IndexError(index)
        values = [0] * len(self.variables)
        for i in range(len(self.variables) - 1, -1, -1):
            index, digit = divmod(index, self.radices[i])
            values[i] = self.variables[i][1] + digit
        return {name: v for (name, _, _), v in zip(self.variables, values)}

    def state_name(self, values: Mapping[str, int]) -> str:
        return "(" + ", ".join(f"{name}={values[name]}" for name in self.names) + ")"

    def environments(self) -> Iterator[dict[str, int]]:
        for i in range(self.size):
            yield self.decode(i)
