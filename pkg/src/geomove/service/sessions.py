"""Static worker registry and token sessions.

No external identity provider: a TSV file maps tokens to workers and
roles (expert labels spans, voter casts agreement votes, reviewer
confirms committee predictions).  Votes are always attributed to exactly
one worker id.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

ROLES = ("expert", "voter", "reviewer")


@dataclass(frozen=True)
class Worker:
    worker_id: str
    role: str
    token: str


class WorkerRegistry:
    def __init__(self, workers: list[Worker]):
        self._by_token = {}
        for worker in workers:
            if worker.role not in ROLES:
                raise ValueError(f"unknown role {worker.role!r} for {worker.worker_id}")
            if worker.token in self._by_token:
                raise ValueError(f"duplicate token for {worker.worker_id}")
            self._by_token[worker.token] = worker
        self.workers = list(workers)

    @classmethod
    def from_tsv(cls, path: Optional[str | Path] = None) -> "WorkerRegistry":
        """TSV columns: worker_id, role, token; '#' comments allowed."""
        if path is None:
            text = resources.files("geomove.data").joinpath("workers.tsv").read_text("utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        workers = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"workers file line {lineno}: need worker_id<TAB>role<TAB>token")
            workers.append(Worker(parts[0].strip(), parts[1].strip(), parts[2].strip()))
        return cls(workers)

    def authenticate(self, token: Optional[str]) -> Optional[Worker]:
        if not token:
            return None
        return self._by_token.get(token)
