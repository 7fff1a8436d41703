"""JSON structure files.

::

    {"states": ["a", "b", "c"],
     "delta": {"a": ["b", "c"], "b": [], "c": ["c"]}}

States missing from ``delta`` have no successors.
"""

from __future__ import annotations

import json
from typing import Union

from ..sets import ChoiceMap, StateSpace
from .errors import ParseError, SemanticError, UnknownNameError


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def _locate(text: str, name: str, occurrence: int = 1, after: int = 0) -> tuple[int, int]:
    """Line and column of the ``occurrence``-th JSON string ``name`` past ``after``."""
    needle = json.dumps(name, ensure_ascii=False)
    pos = after - 1
    for _ in range(occurrence):
        pos = text.find(needle, pos + 1)
        if pos < 0:
            return 0, 0
    return _position(text, pos)


def _reject_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise _DuplicateKey(key)
        seen[key] = value
    return seen


class _DuplicateKey(Exception):
    def __init__(self, key):
        self.key = key


def parse_structure(source: Union[str, bytes]) -> tuple[StateSpace, ChoiceMap]:
    """Read a structure file; raises :class:`ParseError` or :class:`SemanticError`."""
    if isinstance(source, bytes):
        try:
            text = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"structure file is not UTF-8: {exc}") from None
    else:
        text = source
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    except _DuplicateKey as exc:
        line, col = _locate(text, exc.key, 2)
        raise SemanticError(f"duplicate key {exc.key!r}", line, col) from None

    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object", 1, 1)
    unknown_keys = set(data) - {"states", "delta"}
    if unknown_keys:
        key = sorted(unknown_keys)[0]
        raise ParseError(f"unexpected key {key!r}", *_locate(text, key))
    states = data.get("states")
    if not isinstance(states, list) or not states or not all(isinstance(s, str) for s in states):
        raise ParseError('"states" must be a non-empty array of strings', *_locate(text, "states"))
    seen = set()
    for name in states:
        if name in seen:
            raise SemanticError(f"duplicate state name {name!r}", *_locate(text, name, 2))
        seen.add(name)
    space = StateSpace(states)

    delta = data.get("delta", {})
    if not isinstance(delta, dict):
        raise ParseError('"delta" must be a JSON object', *_locate(text, "delta"))
    delta_at = text.find('"delta"')
    masks = [0] * len(space)
    for name, succ in delta.items():
        if name not in seen:
            raise UnknownNameError(f"unknown state {name!r} in delta", *_locate(text, name, 1, delta_at))
        if not isinstance(succ, list) or not all(isinstance(s, str) for s in succ):
            raise ParseError(f"successors of {name!r} must be an array of strings", *_locate(text, name, 1, delta_at))
        mask = 0
        for target in succ:
            if target not in seen:
                key_at = text.find(json.dumps(name, ensure_ascii=False), delta_at)
                raise UnknownNameError(
                    f"unknown successor {target!r} of {name!r}", *_locate(text, target, 1, max(key_at, 0))
                )
            mask |= 1 << space.index(target)
        masks[space.index(name)] = mask
    return space, ChoiceMap(space, masks)


def format_structure(delta: ChoiceMap) -> str:
    """Inverse of :func:`parse_structure`; every state gets a delta entry."""
    data = {
        "states": list(delta.space.names),
        "delta": {name: succ.names() for name, succ in delta.items()},
    }
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
