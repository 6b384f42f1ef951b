"""Brute-force k-trace equivalence on small acyclic LTSs.

The level-k trace set of a state records, for every path, the level-(k-1)
class of each visited state with internal runs through a constant class
compressed away.  Level 0 puts every state in one class; level 1 is ordinary
trace equivalence; the limit is max-trace equivalence.  Deliberately
exponential: this is the independent oracle for the bisimulation engine, so
it stays a literal construction.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .lts import Action, Lts, LtsError, build_lts

DEFAULT_MAX_STATES = 64
_ENV_CAP = "EFFECTRACE_ORACLE_MAX_STATES"

_TAU = "||tau||"  # internal actions are anonymous inside traces


class OracleBound(LtsError):
    pass


@dataclass(frozen=True)
class KTracePartition:
    level: int
    class_of: dict
    classes: tuple

    def key(self):
        return frozenset(self.classes)

    def same_class(self, a, b) -> bool:
        return self.class_of[a] == self.class_of[b]


def _oracle_cap(max_states):
    if max_states is not None:
        return max_states
    return int(os.environ.get(_ENV_CAP, DEFAULT_MAX_STATES))


def _check_input(lts: Lts, max_states):
    cap = _oracle_cap(max_states)
    if lts.state_count > cap:
        raise OracleBound(
            f"oracle refuses {lts.state_count} states (cap {cap}); "
            f"set {_ENV_CAP} or pass max_states to raise it")
    order = _topological(lts)
    if order is None:
        raise OracleBound("oracle requires an acyclic transition graph")
    return order


def _topological(lts: Lts):
    """Reverse-topological state order over all transitions, or None if cyclic."""
    indeg = {s: 0 for s in lts.states}
    for src, _, dst in lts.transitions:
        indeg[dst] += 1
    ready = sorted(s for s, d in indeg.items() if d == 0)
    order = []
    while ready:
        s = ready.pop()
        order.append(s)
        for _, dst in lts.successors(s):
            indeg[dst] -= 1
            if indeg[dst] == 0:
                ready.append(dst)
        ready.sort()
    if len(order) != len(lts.states):
        return None
    return list(reversed(order))


def _classes_from(class_of):
    groups = {}
    for s, c in class_of.items():
        groups.setdefault(c, set()).add(s)
    ordered = sorted(groups.values(), key=min)
    renamed = {}
    for i, g in enumerate(ordered):
        for s in g:
            renamed[s] = i
    return renamed, tuple(frozenset(g) for g in ordered)


def _refine_once(lts: Lts, rev_topo, class_of):
    """One level: group states by their set of compressed class-sequence traces."""
    traces = {}
    for s in rev_topo:
        c = class_of[s]
        out = {(c,)}
        for act, dst in lts.successors(s):
            akey = _TAU if act.is_tau else act.render()
            for t in traces[dst]:
                if akey is _TAU and t[0] == c:
                    out.add(t)  # constant-class internal run compresses away
                else:
                    out.add((c, akey) + t)
        traces[s] = frozenset(out)
    groups = {}
    for s in lts.states:
        groups.setdefault(traces[s], []).append(s)
    new_class = {}
    for i, key in enumerate(sorted(groups, key=lambda k: min(groups[k]))):
        for s in groups[key]:
            new_class[s] = i
    return new_class


def ktrace_partition(lts: Lts, k: int, max_states=None) -> KTracePartition:
    """The partition under level-k trace equivalence, by literal construction."""
    if k < 0:
        raise LtsError("k must be >= 0")
    rev_topo = _check_input(lts, max_states)
    class_of = {s: 0 for s in lts.states}
    for _ in range(k):
        class_of = _refine_once(lts, rev_topo, class_of)
    class_of, classes = _classes_from(class_of)
    return KTracePartition(k, class_of, classes)


def max_trace_partition(lts: Lts, max_states=None):
    """Iterate ktrace refinement to its fixpoint; returns (partition, cap)."""
    rev_topo = _check_input(lts, max_states)
    class_of = {s: 0 for s in lts.states}
    level = 0
    while True:
        nxt = _refine_once(lts, rev_topo, class_of)
        if _classes_from(nxt)[1] == _classes_from(class_of)[1]:
            class_of, classes = _classes_from(class_of)
            return KTracePartition(level, class_of, classes), level
        class_of = nxt
        level += 1


def random_dag_lts(rng: random.Random, max_states: int = 40,
                   max_labels: int = 4) -> Lts:
    """Random connected DAG over internal and visible labels (oracle test input)."""
    n = rng.randint(2, max_states)
    n_labels = rng.randint(1, max_labels)
    labels = [chr(ord("a") + i) for i in range(n_labels)]
    tau_prob = rng.uniform(0.25, 0.65)

    def random_action(i):
        if rng.random() < tau_prob:
            return Action.tau(rng.randint(1, 3), f"x{i}")
        return Action.call(rng.randint(1, 3), rng.choice(labels))

    transitions = []
    for j in range(1, n):
        transitions.append((rng.randrange(j), random_action(j), j))
    extra = rng.randint(0, 2 * n)
    for i in range(extra):
        a = rng.randrange(n - 1)
        b = rng.randrange(a + 1, n)
        transitions.append((a, random_action(n + i), b))
    return build_lts(transitions, 0)
