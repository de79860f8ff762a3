"""HTTP API and iteration runner."""

from geomove.service.app import create_app
from geomove.service.runner import InteractiveReviewer, LoopRunner
from geomove.service.sessions import Worker, WorkerRegistry

__all__ = ["InteractiveReviewer", "LoopRunner", "Worker", "WorkerRegistry", "create_app"]
