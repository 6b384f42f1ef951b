"""Aldebaran (.aut) import/export.

Header: ``des (I, M, N)`` with I the initial state index, M the transition
count, N the state count; then one line per transition ``(src, "label", dst)``.
Internal actions render as ``i`` in abstract mode or ``i(t3.E2)`` in annotated
mode; on import the labels ``i`` and ``tau`` parse as internal with empty tag.
"""

from __future__ import annotations

import re

from .lts import Action, Lts, LtsError, build_lts, parse_value, render_value

_LINE_RE = re.compile(r'^\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)$')
_HEADER_RE = re.compile(r"^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$")
_CALLRET_RE = re.compile(r"^t(\d+)\.(call|ret)\.(\w+)\((.*)\)$")
_ANNOT_RE = re.compile(r"^i\(t(\d+)(?:\.(.*))?\)$")


def render_label(action: Action, mode: str = "annotated") -> str:
    if action.is_tau:
        if mode == "abstract":
            return "i"
        if action.tag:
            return f"i(t{action.thread}.{action.tag})"
        return f"i(t{action.thread})"
    return (f"t{action.thread}.{action.kind}.{action.method}"
            f"({render_value(action.value)})")


def parse_label(label: str) -> Action:
    if label in ("i", "tau"):
        return Action.tau(0, "")
    m = _ANNOT_RE.match(label)
    if m:
        return Action.tau(int(m.group(1)), m.group(2) or "")
    m = _CALLRET_RE.match(label)
    if m:
        thread, kind, method, val = m.groups()
        return Action(kind, int(thread), method, parse_value(val))
    raise LtsError(f"unparseable label: {label!r}")


def render_aut(lts: Lts, mode: str = "annotated") -> str:
    lines = [f"des ({lts.initial}, {lts.transition_count}, {lts.state_count})"]
    for src, act, dst in sorted(lts.transitions,
                                key=lambda t: (t[0], t[1].sort_key(), t[2])):
        lines.append(f'({src}, "{render_label(act, mode)}", {dst})')
    return "\n".join(lines) + "\n"


def parse_aut(text: str) -> Lts:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [(i + 1, ln) for i, ln in enumerate(lines) if ln]
    if not lines:
        raise LtsError("empty .aut input")
    lineno, header = lines[0]
    m = _HEADER_RE.match(header)
    if not m:
        raise LtsError(f"line {lineno}: malformed header: {header!r}")
    initial, n_trans, n_states = (int(g) for g in m.groups())
    transitions = []
    for lineno, ln in lines[1:]:
        m = _LINE_RE.match(ln)
        if not m:
            raise LtsError(f"line {lineno}: malformed transition: {ln!r}")
        src, label, dst = m.groups()
        try:
            act = parse_label(label)
        except LtsError as e:
            raise LtsError(f"line {lineno}: {e}") from None
        transitions.append((int(src), act, int(dst)))
    if len(transitions) != n_trans:
        raise LtsError(f"header declares {n_trans} transitions, found {len(transitions)}")
    states = set(range(n_states)) if n_states else {initial}
    for lineno, t in zip((l for l, _ in lines[1:]), transitions):
        if t[0] not in states or t[2] not in states:
            raise LtsError(f"line {lineno}: state index out of range in {t!r}")
    return build_lts(transitions, initial, states=states)


def export_aut(lts: Lts, path, mode: str = "annotated") -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_aut(lts, mode))


def import_aut(path) -> Lts:
    with open(path, "r", encoding="utf-8") as f:
        return parse_aut(f.read())


def render_dot(quotient, critical_edges=None, name="quotient") -> str:
    """DOT of a quotient: classes as nodes, internal edges styled, critical red."""
    from .bisim import QuotientLts

    assert isinstance(quotient, QuotientLts)
    lts = quotient.lts
    lines = [f"digraph {name} {{", "  rankdir=LR;",
             f"  init [shape=point]; init -> {lts.initial};"]
    for s in sorted(lts.states):
        size = len(quotient.partition.classes[s])
        lines.append(f'  {s} [label="[{s}] ({size})"];')
    for src, act, dst in lts.transitions:
        if act.is_tau:
            labels = quotient.tau_labels.get((src, dst), frozenset())
            text = ",".join(f"t{t}.{tag}" for t, tag in sorted(labels))
            lines.append(f'  {src} -> {dst} [label="{text}", color=red, style=bold];')
        else:
            lines.append(f'  {src} -> {dst} [label="{act.render()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
