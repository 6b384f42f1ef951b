"""Built-in model catalog: sources, default clients, expected critical steps."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .dsl import ObjectModel, parse_model
from .machine import ClientConfig
from .seqspec import SequentialSpec, ccas_spec, queue_spec, stack_spec


@dataclass(frozen=True)
class ModelEntry:
    name: str
    default_config: ClientConfig
    expected_critical: frozenset
    spec: SequentialSpec
    description: str
    source_name: str = ""

    @property
    def source(self) -> str:
        return model_source(self.source_name or self.name)

    def parse(self) -> ObjectModel:
        return parse_model(self.source, name=self.name)


def model_source(name: str) -> str:
    path = resources.files("effectrace").joinpath("models", f"{name}.model")
    return path.read_text(encoding="utf-8")


def _fixed(ops):
    return ClientConfig.fixed(ops)


_CATALOG = None


def catalog() -> dict:
    """All shipped models, keyed by stable CLI name."""
    global _CATALOG
    if _CATALOG is not None:
        return _CATALOG
    entries = [
        ModelEntry(
            "hw-queue",
            _fixed({1: [("Enq", "a")], 2: [("Deq", None)], 3: [("Enq", "b")]}),
            frozenset({"E1", "E2", "D4.val", "D4.null"}),
            queue_spec(enq_result=None),
            "array queue, 3 threads: Enq(a) | Deq | Enq(b)",
        ),
        ModelEntry(
            "hw-queue-2op",
            _fixed({1: [("Enq", "a")], 2: [("Deq", None), ("Deq", None)],
                    3: [("Enq", "b")]}),
            frozenset({"E1", "E2", "D4.val", "D4.null"}),
            queue_spec(enq_result=None),
            "array queue, dequeuer invokes twice: Enq(a) | Deq;Deq | Enq(b)",
            source_name="hw-queue",
        ),
        ModelEntry(
            "ms-queue",
            _fixed({1: [("Enq", 1), ("Deq", None), ("Enq", 2)],
                    2: [("Deq", None), ("Enq", 3), ("Deq", None)]}),
            frozenset({"L8.ok", "L20", "L21.true", "L28.ok"}),
            queue_spec(enq_result="true"),
            "linked lock-free queue, 2 threads x 3 ops",
        ),
        ModelEntry(
            "dglm-queue",
            _fixed({1: [("Enq", 1), ("Deq", None), ("Enq", 2)],
                    2: [("Deq", None), ("Enq", 3), ("Deq", None)]}),
            frozenset({"L8.ok", "L20", "L21.true", "L28.ok"}),
            queue_spec(enq_result="true"),
            "head-committing variant of the linked queue, same client as ms-queue",
        ),
        ModelEntry(
            "treiber-stack",
            _fixed({1: [("Push", 1), ("Pop", None)],
                    2: [("Pop", None), ("Push", 2)]}),
            frozenset({"P4.ok", "Q1", "Q4.ok"}),
            stack_spec(),
            "lock-free stack, 2 threads x 2 ops",
        ),
        ModelEntry(
            "ccas",
            _fixed({1: [("CCAS", (1, 2))], 2: [("CCAS", (2, 3))],
                    3: [("CCAS", (2, 5))], 4: [("SetFlag", "false")]}),
            frozenset({"C4.ok", "C7.ok", "C13", "C15.ok", "C17.ok", "F1"}),
            ccas_spec(),
            "flag-guarded conditional cas, 4 threads x 1 op",
        ),
    ]
    _CATALOG = {e.name: e for e in entries}
    return _CATALOG


def get_model(name: str) -> ModelEntry:
    cat = catalog()
    if name not in cat:
        raise KeyError(f"unknown model {name!r}; available: {', '.join(sorted(cat))}")
    return cat[name]
