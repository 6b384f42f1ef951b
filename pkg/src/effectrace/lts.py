"""Labeled transition systems for concurrent objects.

States are dense integer ids.  Actions are call/return events (visible)
or internal steps carrying an instruction tag used only for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Values carried by actions: small ints, short atoms, or tuples of those.
Value = object

_KIND_ORDER = {"call": 0, "ret": 1, "tau": 2}


def render_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, tuple):
        return ",".join(render_value(x) for x in v)
    return str(v)


def parse_value(text: str):
    text = text.strip()
    if text == "":
        return None
    if "," in text:
        return tuple(parse_value(p) for p in text.split(","))
    if text.lstrip("-").isdigit():
        return int(text)
    return text


@dataclass(frozen=True)
class Action:
    """One of Call(thread, method, arg), Ret(thread, method, result), Tau(thread, tag)."""

    kind: str  # "call" | "ret" | "tau"
    thread: int
    method: str | None = None
    value: Value = None
    tag: str = ""

    @staticmethod
    def call(thread: int, method: str, arg=None) -> "Action":
        return Action("call", thread, method, arg)

    @staticmethod
    def ret(thread: int, method: str, result=None) -> "Action":
        return Action("ret", thread, method, result)

    @staticmethod
    def tau(thread: int, tag: str = "") -> "Action":
        return Action("tau", thread, tag=tag)

    @property
    def visible(self) -> bool:
        return self.kind != "tau"

    @property
    def is_tau(self) -> bool:
        return self.kind == "tau"

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.thread, self.method or "",
                render_value(self.value), self.tag)

    def render(self) -> str:
        """Short human-readable form: t1.Enq(a), t2.ret(b), t3.E2."""
        if self.kind == "call":
            return f"t{self.thread}.{self.method}({render_value(self.value)})"
        if self.kind == "ret":
            if self.value is None:
                return f"t{self.thread}.ret"
            return f"t{self.thread}.ret({render_value(self.value)})"
        return f"t{self.thread}.{self.tag}" if self.tag else f"t{self.thread}.tau"

    def __repr__(self):
        return f"<{self.render()}>"


class LtsError(ValueError):
    pass


class Lts:
    """Finite LTS: integer states, an initial state, and labeled transitions.

    Immutable after construction; unreachable states are retained but
    excluded from reachability-based analyses.
    """

    def __init__(self, states, initial, transitions, payload=None):
        self.states = frozenset(states)
        self.initial = initial
        self.transitions = tuple(transitions)
        self.payload = payload or {}
        if initial not in self.states:
            raise LtsError(f"initial state {initial} not among states")
        for t in self.transitions:
            src, act, dst = t
            if src not in self.states or dst not in self.states:
                raise LtsError(f"dangling endpoint in transition {t!r}")
            if not isinstance(act, Action):
                raise LtsError(f"transition label is not an Action: {t!r}")
        self._succ = None
        self._reachable = None

    # -- derived views -------------------------------------------------

    def successors(self, state):
        if self._succ is None:
            succ = {s: [] for s in self.states}
            for src, act, dst in self.transitions:
                succ[src].append((act, dst))
            for s in succ:
                succ[s].sort(key=lambda p: (p[0].sort_key(), p[1]))
            self._succ = succ
        return self._succ[state]

    def reachable(self) -> frozenset:
        if self._reachable is None:
            seen = {self.initial}
            stack = [self.initial]
            while stack:
                s = stack.pop()
                for _, dst in self.successors(s):
                    if dst not in seen:
                        seen.add(dst)
                        stack.append(dst)
            self._reachable = frozenset(seen)
        return self._reachable

    def unreachable(self) -> frozenset:
        return self.states - self.reachable()

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def transition_count(self) -> int:
        return len(self.transitions)

    @property
    def tau_count(self) -> int:
        return sum(1 for _, a, _ in self.transitions if a.is_tau)

    @property
    def visible_count(self) -> int:
        return self.transition_count - self.tau_count

    def tau_transitions(self):
        return [t for t in self.transitions if t[1].is_tau]

    def terminal_states(self):
        return sorted(s for s in self.reachable() if not self.successors(s))

    def __repr__(self):
        return (f"Lts(states={self.state_count}, transitions={self.transition_count}, "
                f"tau={self.tau_count})")


def build_lts(transitions, initial, states=None, payload=None) -> Lts:
    """Validate and build an Lts from transition triples.

    With explicit `states`, endpoints outside the set are construction
    errors naming the offending transition.  Without it, the state set is
    the endpoints plus the initial state.
    """
    transitions = list(transitions)
    if states is None:
        states = {initial}
        for src, _, dst in transitions:
            states.add(src)
            states.add(dst)
    else:
        states = set(states)
        states.add(initial)
        for t in transitions:
            src, _, dst = t
            if src not in states or dst not in states:
                raise LtsError(f"dangling endpoint in transition {t!r}")
    transitions.sort(key=lambda t: (t[0], t[1].sort_key(), t[2]))
    return Lts(states, initial, transitions, payload=payload)


def _tau_sccs(lts: Lts):
    """Tarjan over internal edges only, iterative.  Returns state -> scc id."""
    tau_succ = {s: [] for s in lts.states}
    for src, act, dst in lts.transitions:
        if act.is_tau and src != dst:
            tau_succ[src].append(dst)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    scc_of = {}
    counter = [0]
    n_sccs = [0]

    for root in sorted(lts.states):
        if root in index:
            continue
        work = [(root, iter(tau_succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = counter[0]
                    counter[0] += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(tau_succ[child])))
                    advanced = True
                    break
                elif child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    scc_of[member] = n_sccs[0]
                    if member == node:
                        break
                n_sccs[0] += 1
    return scc_of


def collapse_tau_sccs(lts: Lts):
    """Merge every internal-transition cycle into a single state.

    Returns (collapsed Lts, total mapping old state -> new state).  Visible
    transitions are preserved; the result has no internal cycles.  New state
    ids are assigned in BFS order from the collapsed initial state, with
    unreachable components numbered afterwards.
    """
    scc_of = _tau_sccs(lts)
    # Representative of each scc: minimum member (determinism).
    rep = {}
    members = {}
    for s, c in scc_of.items():
        members.setdefault(c, []).append(s)
        if c not in rep or s < rep[c]:
            rep[c] = s

    scc_succ = {}
    for src, act, dst in lts.transitions:
        a, b = scc_of[src], scc_of[dst]
        if act.is_tau and a == b:
            continue  # in-component internal step, including self-loops
        scc_succ.setdefault(a, set()).add((act, b))

    init_scc = scc_of[lts.initial]
    order = {init_scc: 0}
    queue = [init_scc]
    qi = 0
    while qi < len(queue):
        c = queue[qi]
        qi += 1
        for act, b in sorted(scc_succ.get(c, ()), key=lambda p: (p[0].sort_key(), rep[p[1]])):
            if b not in order:
                order[b] = len(order)
                queue.append(b)
    for c in sorted(set(scc_of.values()) - set(order), key=lambda c: rep[c]):
        order[c] = len(order)

    mapping = {s: order[scc_of[s]] for s in lts.states}
    new_transitions = set()
    for src, act, dst in lts.transitions:
        a, b = mapping[src], mapping[dst]
        if act.is_tau and a == b:
            continue
        new_transitions.add((a, act, b))
    payload = {}
    for c, new_id in order.items():
        if rep[c] in lts.payload:
            payload[new_id] = lts.payload[rep[c]]
    collapsed = build_lts(sorted(new_transitions, key=lambda t: (t[0], t[1].sort_key(), t[2])),
                          mapping[lts.initial],
                          states=set(mapping.values()),
                          payload=payload)
    return collapsed, mapping


@dataclass(frozen=True)
class Path:
    """A path: start state plus (action, state) steps."""

    start: int
    steps: tuple = ()

    @property
    def end(self):
        return self.steps[-1][1] if self.steps else self.start

    def states(self):
        return [self.start] + [s for _, s in self.steps]

    def actions(self):
        return [a for a, _ in self.steps]

    def __add__(self, other: "Path") -> "Path":
        if other.start != self.end:
            raise LtsError(f"cannot concatenate: path ends at {self.end}, "
                           f"next starts at {other.start}")
        return Path(self.start, self.steps + other.steps)

    def __len__(self):
        return len(self.steps)


def validate_path(lts: Lts, path: Path) -> None:
    cur = path.start
    for act, nxt in path.steps:
        if (cur, act, nxt) not in set(lts.transitions):
            raise LtsError(f"step ({cur}, {act!r}, {nxt}) is not a transition")
        cur = nxt


@dataclass(frozen=True)
class Operation:
    """A matched call/return pair within a history."""

    thread: int
    method: str
    arg: Value
    result: Value
    call_index: int
    ret_index: int

    def render(self):
        return (f"t{self.thread}.{self.method}({render_value(self.arg)})"
                f"->{render_value(self.result)}")


@dataclass(frozen=True)
class History:
    """Finite sequence of call/return events (no internal actions)."""

    events: tuple = ()

    def __post_init__(self):
        for e in self.events:
            if e.is_tau:
                raise LtsError("histories contain only call/return events")

    def __add__(self, other: "History") -> "History":
        return History(self.events + other.events)

    def __len__(self):
        return len(self.events)

    def projection(self, thread: int) -> "History":
        return History(tuple(e for e in self.events if e.thread == thread))

    @property
    def completed(self) -> bool:
        pending = {}
        for e in self.events:
            if e.kind == "call":
                if e.thread in pending:
                    return False
                pending[e.thread] = e
            else:
                if e.thread not in pending:
                    return False
                del pending[e.thread]
        return not pending

    def operations(self) -> tuple:
        """Matched operations in call order; pending calls are dropped."""
        ops = []
        pending = {}
        for i, e in enumerate(self.events):
            if e.kind == "call":
                pending[e.thread] = (i, e)
            elif e.thread in pending:
                ci, call = pending.pop(e.thread)
                if call.method != e.method:
                    raise LtsError(f"return {e!r} does not match call {call!r}")
                ops.append(Operation(e.thread, e.method, call.value, e.value, ci, i))
        ops.sort(key=lambda o: o.call_index)
        return tuple(ops)

    @property
    def sequential(self) -> bool:
        """Starts with a call, call/ret alternate, each ret matches the previous call."""
        if not self.events:
            return True
        for i, e in enumerate(self.events):
            if i % 2 == 0:
                if e.kind != "call":
                    return False
            else:
                prev = self.events[i - 1]
                if e.kind != "ret" or e.thread != prev.thread or e.method != prev.method:
                    return False
        return len(self.events) % 2 == 0

    def render(self):
        return " ".join(e.render() for e in self.events)


def history_of(execution: Path, lts: Lts | None = None) -> History:
    """The visible subsequence of an execution, internal actions dropped."""
    if lts is not None and execution.start != lts.initial:
        raise LtsError("execution does not start at the initial state")
    return History(tuple(a for a in execution.actions() if a.visible))


def precedes(h: History, e1: Operation, e2: Operation) -> bool:
    """Operation order <_H: e1's return occurs before e2's call."""
    ops = h.operations()
    if e1 not in ops or e2 not in ops:
        raise LtsError("operation does not occur in the history")
    return e1.ret_index < e2.call_index
