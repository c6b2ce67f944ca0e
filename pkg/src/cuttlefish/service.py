"""Job-queue service: worker pool around the store, plus job execution.

Problems and questions are submitted as payloads, validated up front,
and solved asynchronously by worker threads.  Results are stored as
plain dicts so the HTTP layer can return them verbatim.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from typing import Optional

from .explain import ContrastiveQuestion, answer_contrastive, restrict
from .model import DynamicTariff
from .planner import SearchBudget, SolveStatus, astar_solve
from .scenarios import week_tariff
from .serialize import (
    SchemaError,
    additions_from_dict,
    explanation_to_dict,
    model_from_dict,
    model_to_dict,
    outcome_to_dict,
    plan_from_dict,
    problem_hash,
    question_payload,
)
from .store import DONE, JobRecord, JobStore
from .canon import content_hash

log = logging.getLogger(__name__)

PROBLEM = "problem"
QUESTION = "question"


class SubmitError(ValueError):
    """Rejected submission (bad payload or unmet precondition)."""


@dataclass(frozen=True)
class ServiceConfig:
    store_path: str
    worker_count: int = 12
    budget: SearchBudget = field(default_factory=SearchBudget)
    heuristic_mode: str = "auto"
    lease_seconds: float = 240.0
    poll_seconds: float = 0.1
    tariff: Optional[DynamicTariff] = None


class PlannerService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = JobStore(config.store_path)
        self.tariff = config.tariff if config.tariff is not None else week_tariff()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    # -- submission --------------------------------------------------

    def submit_problem(self, payload: dict) -> tuple[JobRecord, bool]:
        model = model_from_dict(payload)
        return self.store.submit(problem_hash(model), PROBLEM, model_to_dict(model))

    def submit_question(self, payload: dict) -> tuple[JobRecord, bool]:
        if not isinstance(payload, dict):
            raise SchemaError("question", "expected an object")
        base_id = payload.get("base_problem_hash")
        if not isinstance(base_id, str):
            raise SchemaError("base_problem_hash", "expected a string")
        base = self.store.get(base_id)
        if base is None or base.kind != PROBLEM:
            raise SubmitError(f"unknown problem {base_id!r}")
        if base.status != DONE:
            raise SubmitError(f"problem {base_id!r} is {base.status}; wait for it to finish")
        assert base.result is not None
        if base.result["status"] != SolveStatus.SOLVED.value:
            raise SubmitError(
                f"problem {base_id!r} ended {base.result['status']!r}; a question"
                " needs a solved baseline"
            )
        model = model_from_dict(base.payload)
        additions = additions_from_dict(payload)
        restrict(model, additions)  # validates names and windows
        canonical = question_payload(base_id, additions)
        return self.store.submit(content_hash(canonical), QUESTION, canonical)

    # -- execution ---------------------------------------------------

    def _solve_problem(self, record: JobRecord) -> dict:
        model = model_from_dict(record.payload)
        outcome = astar_solve(
            model, self.config.budget, heuristic_mode=self.config.heuristic_mode
        )
        return outcome_to_dict(outcome)

    def _answer_question(self, record: JobRecord) -> dict:
        base = self.store.get(record.payload["base_problem_hash"])
        if base is None or base.status != DONE or base.result is None:
            raise RuntimeError("baseline problem result missing")
        model = model_from_dict(base.payload)
        plan = plan_from_dict(base.result["plan"], n_appliances=len(model.appliances))
        additions = additions_from_dict(record.payload)
        question = ContrastiveQuestion(model=model, plan=plan, additions=additions)
        explanation = answer_contrastive(
            question, self.config.budget, heuristic_mode=self.config.heuristic_mode
        )
        return explanation_to_dict(explanation)

    def run_one(self, record: JobRecord) -> None:
        try:
            if record.kind == PROBLEM:
                result = self._solve_problem(record)
            elif record.kind == QUESTION:
                result = self._answer_question(record)
            else:
                raise RuntimeError(f"unknown job kind {record.kind!r}")
        except Exception as exc:  # job must not take the worker down
            log.exception("job %s failed", record.id)
            self.store.fail(record.id, f"{type(exc).__name__}: {exc}")
            return
        self.store.finish(record.id, result)

    def _worker(self, index: int) -> None:
        while not self._stop.is_set():
            record = self.store.claim(self.config.lease_seconds)
            if record is None:
                self._stop.wait(self.config.poll_seconds)
                continue
            log.info("worker %d claimed %s kind=%s", index, record.id, record.kind)
            self.run_one(record)

    # -- lifecycle ---------------------------------------------------

    def start(self) -> None:
        if self._threads:
            raise RuntimeError("already started")
        self._stop.clear()
        for i in range(self.config.worker_count):
            thread = threading.Thread(target=self._worker, args=(i,), daemon=True)
            thread.start()
            self._threads.append(thread)
        log.info("service started workers=%d store=%s", len(self._threads), self.config.store_path)

    def stop(self) -> None:
        self._stop.set()
        for thread in self._threads:
            thread.join(timeout=10.0)
        self._threads = []
