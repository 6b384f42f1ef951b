"""Branching-bisimulation partition refinement and quotient construction.

Two interchangeable strategies compute the coarsest branching bisimulation:
signature refinement iterated to fixpoint (the default), and a
splitter-driven refinement in the Groote-Vaandrager style.  Both require
internal cycles collapsed first, which branching_partition does internally;
they must produce identical partitions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lts import Action, Lts, LtsError, collapse_tau_sccs

_TAU = "||tau||"


@dataclass(frozen=True)
class Partition:
    """Equivalence classes over states; class ids ordered by least member."""

    class_of: dict
    classes: tuple

    def key(self):
        return frozenset(self.classes)

    def same_class(self, a, b) -> bool:
        return self.class_of[a] == self.class_of[b]

    def __len__(self):
        return len(self.classes)


def _renumber(class_of) -> Partition:
    groups = {}
    for s, c in class_of.items():
        groups.setdefault(c, set()).add(s)
    ordered = sorted(groups.values(), key=min)
    out = {}
    for i, g in enumerate(ordered):
        for s in g:
            out[s] = i
    return Partition(out, tuple(frozenset(g) for g in ordered))


def _tau_rev_topo(lts: Lts):
    """Reverse-topological order of the internal-step graph (a DAG here)."""
    indeg = {s: 0 for s in lts.states}
    for src, act, dst in lts.transitions:
        if act.is_tau:
            indeg[dst] += 1
    ready = sorted(s for s, d in indeg.items() if d == 0)
    order = []
    while ready:
        s = ready.pop()
        order.append(s)
        for act, dst in lts.successors(s):
            if act.is_tau:
                indeg[dst] -= 1
                if indeg[dst] == 0:
                    ready.append(dst)
        ready.sort()
    if len(order) != len(lts.states):
        raise LtsError("internal cycles present; collapse them first")
    return list(reversed(order))


def _signature_fixpoint(lts: Lts):
    rev_topo = _tau_rev_topo(lts)
    class_of = {s: 0 for s in lts.states}
    n_classes = 1
    while True:
        sigs = {}
        for s in rev_topo:
            c = class_of[s]
            sig = set()
            for act, dst in lts.successors(s):
                if act.visible:
                    sig.add((act, class_of[dst]))
                elif class_of[dst] != c:
                    sig.add((_TAU, class_of[dst]))
                else:
                    sig |= sigs[dst]  # exits reachable through in-class stutters
            sigs[s] = frozenset(sig)
        groups = {}
        for s in lts.states:
            groups.setdefault((class_of[s], sigs[s]), []).append(s)
        if len(groups) == n_classes:
            return class_of
        keyed = sorted(groups.items(), key=lambda kv: min(kv[1]))
        class_of = {}
        for i, (_, members) in enumerate(keyed):
            for s in members:
                class_of[s] = i
        n_classes = len(keyed)


def _splitter_fixpoint(lts: Lts):
    class_of = {s: 0 for s in lts.states}
    blocks = {0: set(lts.states)}
    tau_preds = {s: [] for s in lts.states}
    for src, act, dst in lts.transitions:
        if act.is_tau:
            tau_preds[dst].append(src)

    def split_by(act_key, target_block):
        if isinstance(act_key, Action):
            pos = {src for src, act, dst in lts.transitions
                   if act == act_key and class_of[dst] == target_block}
        else:
            pos = {src for src, act, dst in lts.transitions
                   if act.is_tau and class_of[dst] == target_block
                   and class_of[src] != target_block}
        frontier = list(pos)
        while frontier:
            s = frontier.pop()
            for u in tau_preds[s]:
                if u not in pos and class_of[u] == class_of[s]:
                    pos.add(u)
                    frontier.append(u)
        changed = False
        for bid in sorted(blocks):
            inside = blocks[bid] & pos
            if inside and inside != blocks[bid]:
                new_id = len(blocks)
                blocks[new_id] = inside
                blocks[bid] = blocks[bid] - inside
                for s in inside:
                    class_of[s] = new_id
                changed = True
        return changed

    actions = sorted({a for _, a, _ in lts.transitions if a.visible},
                     key=Action.sort_key)
    while True:
        any_split = False
        for target in sorted(blocks):
            if target not in blocks:
                continue
            for key in actions + [_TAU]:
                if split_by(key, target):
                    any_split = True
        if not any_split:
            return class_of


def branching_partition(lts: Lts, strategy: str = "signature") -> Partition:
    """Coarsest partition of lts under branching bisimilarity.

    Internal cycles are collapsed internally; the returned partition maps
    the original states.
    """
    collapsed, mapping = collapse_tau_sccs(lts)
    if strategy == "signature":
        class_of = _signature_fixpoint(collapsed)
    elif strategy == "splitter":
        class_of = _splitter_fixpoint(collapsed)
    else:
        raise LtsError(f"unknown strategy {strategy!r}")
    lifted = {s: class_of[mapping[s]] for s in lts.states}
    return _renumber(lifted)


@dataclass
class QuotientLts:
    """The quotient system over equivalence classes.

    Internal transitions between members of one class are dropped; internal
    transitions between distinct classes merge into a single anonymous
    internal edge per class pair, with the contributing (thread, tag) labels
    kept aside in tau_labels.  Visible transitions lift with their action.
    """

    lts: Lts
    partition: Partition
    tau_labels: dict

    @property
    def state_count(self):
        return self.lts.state_count

    @property
    def transition_count(self):
        return self.lts.transition_count

    @property
    def tau_count(self):
        return self.lts.tau_count


def quotient(lts: Lts, p: Partition) -> QuotientLts:
    if set(p.class_of) != set(lts.states):
        raise LtsError("partition does not cover exactly the Lts states")
    visible = set()
    tau_labels = {}
    for src, act, dst in lts.transitions:
        cs, cd = p.class_of[src], p.class_of[dst]
        if act.visible:
            visible.add((cs, act, cd))
        elif cs != cd:
            tau_labels.setdefault((cs, cd), set()).add((act.thread, act.tag))
    transitions = list(visible)
    transitions.extend((cs, Action.tau(0, ""), cd) for cs, cd in tau_labels)
    from .lts import build_lts

    payload = {i: {"size": len(members), "min_state": min(members)}
               for i, members in enumerate(p.classes)}
    qlts = build_lts(transitions, p.class_of[lts.initial],
                     states=set(range(len(p.classes))), payload=payload)
    return QuotientLts(qlts, p, {k: frozenset(v) for k, v in tau_labels.items()})


def is_stutter(lts: Lts, p: Partition, t) -> bool:
    """A stutter step is an internal transition within one class."""
    src, act, dst = t
    if act.visible:
        raise LtsError("stutter is defined on internal steps only")
    return p.class_of[src] == p.class_of[dst]
