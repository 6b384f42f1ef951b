"""State-space exploration and effect analysis for fine-grained concurrent objects."""

from .lts import (Action, History, Lts, LtsError, Operation, Path, build_lts,
                  collapse_tau_sccs, history_of, precedes)
from .bisim import Partition, QuotientLts, branching_partition, is_stutter, quotient
from .ktrace import KTracePartition, ktrace_partition, max_trace_partition

__all__ = [
    "Action", "History", "Lts", "LtsError", "Operation", "Path",
    "build_lts", "collapse_tau_sccs", "history_of", "precedes",
    "Partition", "QuotientLts", "branching_partition", "is_stutter", "quotient",
    "KTracePartition", "ktrace_partition", "max_trace_partition",
]
