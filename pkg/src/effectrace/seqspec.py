"""Sequential specifications and legal sequential history enumeration."""

from __future__ import annotations

from dataclasses import dataclass

from .lts import Action, History, Operation


@dataclass(frozen=True)
class SequentialSpec:
    """Deterministic abstract object: apply(state, method, arg) -> (state, result)."""

    name: str
    initial: object
    apply: object  # callable

    def run(self, calls):
        """Results of a sequence of (method, arg) against the spec."""
        state = self.initial
        out = []
        for method, arg in calls:
            state, res = self.apply(state, method, arg)
            out.append(res)
        return out


def queue_spec(enq_result=None, empty_result="EMPTY") -> SequentialSpec:
    def apply(state, method, arg):
        if method == "Enq":
            return state + (arg,), enq_result
        if method == "Deq":
            if state:
                return state[1:], state[0]
            return state, empty_result
        raise ValueError(f"queue spec has no method {method}")
    return SequentialSpec("fifo-queue", (), apply)


def stack_spec(push_result="true", empty_result="EMPTY") -> SequentialSpec:
    def apply(state, method, arg):
        if method == "Push":
            return state + (arg,), push_result
        if method == "Pop":
            if state:
                return state[:-1], state[-1]
            return state, empty_result
        raise ValueError(f"stack spec has no method {method}")
    return SequentialSpec("lifo-stack", (), apply)


def ccas_spec(initial_value=1, initial_flag="true") -> SequentialSpec:
    # One cell plus a flag; CCAS atomically reads the cell, installs the new
    # value only when it matched and the flag is set, and returns the old value.
    def apply(state, method, arg):
        value, flag = state
        if method == "CCAS":
            o, n = arg
            if value == o and flag == "true":
                return (n, flag), value
            return (value, flag), value
        if method == "SetFlag":
            return (value, arg), None
        raise ValueError(f"ccas spec has no method {method}")
    return SequentialSpec("ccas-cell", (initial_value, initial_flag), apply)


def sequential_history(ordered_ops) -> History:
    """Call/ret pairs laid out back to back in the given operation order."""
    events = []
    for op in ordered_ops:
        events.append(Action.call(op.thread, op.method, op.arg))
        events.append(Action.ret(op.thread, op.method, op.result))
    return History(tuple(events))


def is_legal(spec: SequentialSpec, s: History) -> bool:
    """A sequential history is legal if its results match the spec."""
    if not s.sequential:
        return False
    state = spec.initial
    for op in s.operations():
        state, res = spec.apply(state, op.method, op.arg)
        if res != op.result:
            return False
    return True


def linearizations(spec: SequentialSpec, h: History, limit=None):
    """All legal sequential histories S with h linearizable w.r.t. S.

    Interleaves the per-thread operation sequences (preserving program
    order), keeps only orders whose spec results match the concrete results,
    and enforces the operation precedence order of h.
    """
    ops = h.operations()
    by_thread = {}
    for op in ops:
        by_thread.setdefault(op.thread, []).append(op)
    threads = sorted(by_thread)
    out = []

    def backtrack(position, state, chosen):
        if limit is not None and len(out) >= limit:
            return
        if len(chosen) == len(ops):
            out.append(sequential_history(chosen))
            return
        for t in threads:
            i = position[t]
            if i >= len(by_thread[t]):
                continue
            op = by_thread[t][i]
            # precedence: anything that returned before op's call must be placed already
            if any(o.ret_index < op.call_index and o not in chosen for o in ops):
                continue
            nstate, res = spec.apply(state, op.method, op.arg)
            if res != op.result:
                continue
            position[t] = i + 1
            chosen.append(op)
            backtrack(position, nstate, chosen)
            chosen.pop()
            position[t] = i

    backtrack({t: 0 for t in threads}, spec.initial, [])
    return out
