"""JSON-Lines session log for verification runs.

Writes one event per line to `<log_dir>/verify_logs/<session_id>_verify_log.jsonl`.
Append-only and guarded by one lock, since suite workers report verdicts
from several threads.
"""

from __future__ import annotations

import json
import threading
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any

from src.models import AxiomReport, SuiteSummary


class SessionLogger:
    """One verify session; each event records the worker thread that produced it."""

    def __init__(self, log_dir: Path, session_id: str | None = None) -> None:
        stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.session_id = session_id or f"{stamp}_{uuid.uuid4().hex[:6]}"
        self.log_path = Path(log_dir) / "verify_logs" / f"{self.session_id}_verify_log.jsonl"
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        self.log_path.touch()
        self._lock = threading.Lock()

    def log_event(self, event_type: str, **fields: Any) -> None:
        record = {
            "event": event_type,
            "session_id": self.session_id,
            "thread": threading.current_thread().name,
            "timestamp": datetime.now().isoformat(timespec="seconds"),
        }
        record.update(fields)
        with self._lock:
            with self.log_path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(record, default=str) + "\n")

    def events(self) -> list[dict[str, Any]]:
        with self._lock:
            text = self.log_path.read_text(encoding="utf-8")
        return [json.loads(line) for line in text.splitlines()]

    def log_suite_start(self, suite: str, tasks: int, cutoff: int) -> None:
        self.log_event("suite_start", suite=suite, tasks=tasks, cutoff=cutoff)

    def log_verdict(self, report: AxiomReport) -> None:
        self.log_event("verdict", **report.model_dump(mode="json"))

    def log_suite_finish(self, summary: SuiteSummary) -> None:
        self.log_event(
            "suite_finish",
            suite=summary.suite,
            checks=len(summary.reports),
            failed=len(summary.failed),
            all_hold=summary.all_hold,
        )

    def log_error(self, suite: str, reason: str) -> None:
        self.log_event("error", suite=suite, reason=reason)
