"""Entity-type catalog: the ordered list of things that can move.

Loaded from a UTF-8 text file, one name per line; blank lines and lines
starting with ``#`` are ignored.  The catalog size is configuration, not
code -- ship your own file to extend it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator


class EntityTypeCatalog:
    def __init__(self, names: Iterable[str]):
        cleaned = [n.strip() for n in names]
        self._names: list[str] = []
        seen = set()
        for name in cleaned:
            if not name:
                raise ValueError("entity-type names must be non-empty")
            if name in seen:
                raise ValueError(f"duplicate entity type {name!r}")
            seen.add(name)
            self._names.append(name)
        self._index = seen

    @classmethod
    def from_file(cls, path: str | Path) -> "EntityTypeCatalog":
        names = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            names.append(stripped)
        return cls(names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __len__(self) -> int:
        return len(self._names)

    @property
    def names(self) -> list[str]:
        return list(self._names)
