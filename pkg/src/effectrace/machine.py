"""Interleaving operational semantics for object models.

Each labeled source statement is one atomic step.  Exploration runs a
bounded most-general client: every thread, when idle, may invoke any of its
remaining operations; running threads execute their next statement.  States
are canonical (heap nodes numbered in first-reference order), so two
semantically identical states compare equal, and state numbering is BFS
discovery order, which makes exploration fully deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .dsl import ModelError, ObjectModel, parse_model
from .lts import Action, Lts, build_lts

DEFAULT_STEP_BOUND = 1_000_000

_UNSET = "__unset__"


class ExplorationError(ModelError):
    pass


class ExplorationTimeout(ExplorationError):
    pass


@dataclass(frozen=True)
class ClientConfig:
    """Bounded client: k threads, each with a fixed op list or a most-general budget."""

    threads: int
    fixed_ops: tuple | None = None  # per-thread tuple of (method, arg) tuples
    mgc_budget: int = 0
    mgc_methods: tuple = ()
    mgc_domain: tuple = ()

    def __post_init__(self):
        if self.threads < 1:
            raise ModelError("client needs at least one thread")
        if self.fixed_ops is None:
            if self.mgc_budget < 1:
                raise ModelError("most-general client needs a budget >= 1")
            if not self.mgc_domain:
                raise ModelError("most-general client needs a nonempty argument domain")
        elif len(self.fixed_ops) != self.threads:
            raise ModelError("fixed op lists must cover every thread")

    @staticmethod
    def fixed(ops_by_thread) -> "ClientConfig":
        """ops_by_thread: {tid: [(method, arg), ...]} with tids 1..k."""
        k = max(ops_by_thread)
        ops = tuple(tuple(ops_by_thread.get(t, ())) for t in range(1, k + 1))
        return ClientConfig(threads=k, fixed_ops=ops)

    @staticmethod
    def mgc(threads, budget, domain, methods=None) -> "ClientConfig":
        return ClientConfig(threads=threads, mgc_budget=budget,
                            mgc_methods=tuple(methods or ()),
                            mgc_domain=tuple(domain))

    def budget(self, tid) -> int:
        if self.fixed_ops is not None:
            return len(self.fixed_ops[tid - 1])
        return self.mgc_budget

    def op_choices(self, tid, opidx, model: ObjectModel):
        if self.fixed_ops is not None:
            ops = self.fixed_ops[tid - 1]
            return [ops[opidx]] if opidx < len(ops) else []
        if opidx >= self.mgc_budget:
            return []
        out = []
        methods = self.mgc_methods or tuple(model.methods)
        for m in methods:
            arity = len(model.methods[m].params)
            if arity == 0:
                out.append((m, None))
            elif arity == 1:
                out.extend((m, v) for v in self.mgc_domain)
            else:
                pool = [(v,) for v in self.mgc_domain]
                for _ in range(arity - 1):
                    pool = [p + (v,) for p in pool for v in self.mgc_domain]
                out.extend((m, p) for p in pool)
        return out

    def describe(self) -> str:
        if self.fixed_ops is not None:
            parts = []
            for t, ops in enumerate(self.fixed_ops, start=1):
                rendered = "/".join(
                    f"{m}({','.join(map(str, a)) if isinstance(a, tuple) else (a if a is not None else '')})"
                    for m, a in ops)
                parts.append(f"t{t}:{rendered}")
            return ",".join(parts)
        dom = ",".join(map(str, self.mgc_domain))
        return f"mgc:{self.threads}x{self.mgc_budget},domain={dom}"


# -- compilation -------------------------------------------------------


@dataclass
class _Label:
    pc: int = -1


@dataclass
class Step:
    tag: str
    mod: str | None
    kind: str  # assign | cas | casv | if | return | callsub | goto
    data: tuple
    next: object = None  # _Label or int
    alt: object = None


@dataclass
class CompiledFunc:
    name: str
    params: list
    steps: list
    local_names: list
    local_index: dict
    is_sub: bool


def _collect_locals(func, shared):
    names = list(func.params)

    def target_name(t):
        if t[0] == "name":
            return t[1]
        if t[0] == "index":
            return t[1]
        return None  # field writes do not declare locals

    def walk(stmts):
        for _tag, _mod, st, _line in stmts:
            if st[0] == "assign":
                for t in st[1]:
                    n = target_name(t)
                    if n and n not in shared and n not in names:
                        names.append(n)
            elif st[0] == "casstmt" and st[2] is not None:
                n = target_name(st[2])
                if n and n not in shared and n not in names:
                    names.append(n)
            elif st[0] == "if":
                walk(st[2])
                walk(st[3])
            elif st[0] in ("while", "loop"):
                walk(st[-1])
    walk(func.stmts)
    return names


class _FuncCompiler:
    def __init__(self, func, model: ObjectModel):
        self.func = func
        self.model = model
        self.shared_index = {n: i for i, n in enumerate(model.shared)}
        self.local_names = _collect_locals(func, model.shared)
        self.local_index = {n: i for i, n in enumerate(self.local_names)}
        self.steps: list[Step] = []
        self.tag_labels: dict[str, _Label] = {}
        self.pending_gotos: list[tuple[Step, str, int]] = []

    def compile(self) -> CompiledFunc:
        end = _Label()
        self.emit_block(self.func.stmts, end)
        end.pc = len(self.steps)
        for step, tag, line in self.pending_gotos:
            if tag not in self.tag_labels:
                raise ModelError(f"goto target {tag!r} not found", line)
            step.next = self.tag_labels[tag]
        for step in self.steps:
            step.next = self._resolve(step.next)
            step.alt = self._resolve(step.alt)
        return CompiledFunc(self.func.name, list(self.func.params), self.steps,
                            self.local_names, self.local_index, self.func.is_sub)

    def _resolve(self, x):
        return x.pc if isinstance(x, _Label) else x

    def emit_block(self, stmts, after: _Label):
        for i, item in enumerate(stmts):
            nxt = after if i == len(stmts) - 1 else _Label()
            self.emit_stmt(item, nxt)
            if nxt is not after:
                nxt.pc = len(self.steps)

    def _new_step(self, tag, mod, kind, data, line) -> Step:
        step = Step(tag, mod, kind, data)
        if tag is not None:
            label = _Label(len(self.steps))
            self.tag_labels[tag] = label
        self.steps.append(step)
        return step

    def emit_stmt(self, item, nxt: _Label):
        tag, mod, st, line = item
        kind = st[0]
        if kind == "assign":
            targets = [self.rw_target(t, line) for t in st[1]]
            exprs = [self.rw(e, line) for e in st[2]]
            if any(e[0] == "new" for e in exprs) and (len(exprs) != 1 or exprs[0][0] != "new"):
                raise ModelError("new() must be the sole right-hand side", line)
            step = self._new_step(tag, mod, "assign", (targets, exprs), line)
            step.next = nxt
        elif kind == "casstmt":
            _, cas_kind, target, lv, old, new = st
            data = (self.rw_target(target, line) if target else None,
                    self.rw_target(lv, line), self.rw(old, line), self.rw(new, line))
            step = self._new_step(tag, mod, cas_kind, data, line)
            step.next = nxt
        elif kind == "return":
            expr = self.rw(st[1], line) if st[1] is not None else None
            self._new_step(tag, mod, "return", (expr,), line)
        elif kind == "goto":
            step = self._new_step(tag, mod, "goto", (), line)
            self.pending_gotos.append((step, st[1], line))
        elif kind == "call":
            step = self._emit_call(tag, mod, st[1], st[2], line)
            step.next = nxt
        elif kind == "fusedif":
            cond = self.rw(st[1], line)
            body = st[2]
            if body[0] == "return":
                expr = self.rw(body[1], line) if body[1] is not None else None
                step = self._new_step(tag, mod, "if", (cond, ("return", expr)), line)
                step.alt = nxt
            elif body[0] == "goto":
                step = self._new_step(tag, mod, "if", (cond, ("goto",)), line)
                step.alt = nxt
                self.pending_gotos.append((step, body[1], line))
            elif body[0] == "call":
                sub, args = self._check_call(body[1], body[2], line)
                step = self._new_step(tag, mod, "if",
                                      (cond, ("call", sub, args, nxt)), line)
                step.alt = nxt
            else:
                raise ModelError("one-line if body must be return, goto, or call", line)
        elif kind == "if":
            cond = self.rw(st[1], line)
            then_l, else_l = _Label(), _Label()
            step = self._new_step(tag, mod, "if", (cond, ("jump",)), line)
            step.next = then_l
            step.alt = else_l
            then_l.pc = len(self.steps)
            self.emit_block(st[2], nxt)
            else_l.pc = len(self.steps)
            if st[3]:
                self.emit_block(st[3], nxt)
            else:
                # empty else means fall through; alias to nxt via a direct label
                step.alt = nxt
        elif kind == "while":
            cond = self.rw(st[1], line)
            head = _Label(len(self.steps))
            body_l = _Label()
            step = self._new_step(tag, mod, "if", (cond, ("jump",)), line)
            step.next = body_l
            step.alt = nxt
            body_l.pc = len(self.steps)
            self.emit_block(st[2], head)
        elif kind == "loop":
            head = _Label(len(self.steps))
            self.emit_block(st[2] if len(st) > 2 else st[1], head)
        else:
            raise ModelError(f"unknown statement kind {kind!r}", line)

    def _check_call(self, sub, args, line):
        if sub not in self.model.subs:
            raise ModelError(f"call target {sub!r} is not a sub", line)
        if self.func.is_sub:
            raise ModelError("subs may not call subs", line)
        if len(args) != len(self.model.subs[sub].params):
            raise ModelError(f"wrong argument count for {sub!r}", line)
        return sub, [self.rw(a, line) for a in args]

    def _emit_call(self, tag, mod, sub, args, line):
        sub, rw_args = self._check_call(sub, args, line)
        return self._new_step(tag, mod, "callsub", (sub, rw_args), line)

    # rewrite names to ("local", i) / ("shared", i); undeclared reads fail here
    def rw(self, e, line):
        k = e[0]
        if k == "name":
            n = e[1]
            if n in self.local_index:
                return ("local", self.local_index[n])
            if n in self.shared_index:
                return ("shared", self.shared_index[n])
            raise ModelError(f"undeclared variable {n!r}", line)
        if k in ("int", "atom"):
            return e
        if k == "index":
            if e[1] not in self.shared_index:
                raise ModelError(f"undeclared array {e[1]!r}", line)
            return ("index", self.shared_index[e[1]], self.rw(e[2], line))
        if k == "field":
            return ("field", self.rw(e[1], line), e[2])
        if k in ("bin", "cmp"):
            return (k, e[1], self.rw(e[2], line), self.rw(e[3], line))
        if k in ("not", "isdesc", "new"):
            return (k, self.rw(e[1], line))
        if k == "desc":
            return ("desc", self.rw(e[1], line), self.rw(e[2], line))
        raise ModelError(f"unknown expression {e!r}", line)

    def rw_target(self, t, line):
        k = t[0]
        if k == "name":
            n = t[1]
            if n in self.local_index:
                return ("local", self.local_index[n])
            if n in self.shared_index:
                return ("shared", self.shared_index[n])
            raise ModelError(f"undeclared assignment target {n!r}", line)
        if k == "index":
            if t[1] not in self.shared_index:
                raise ModelError(f"undeclared array {t[1]!r}", line)
            return ("index", self.shared_index[t[1]], self.rw(t[2], line))
        if k == "field":
            return ("field", self.rw(t[1], line), t[2])
        raise ModelError(f"bad assignment target {t!r}", line)


def compile_model(model: ObjectModel) -> dict:
    funcs = {}
    for f in list(model.methods.values()) + list(model.subs.values()):
        funcs[f.name] = _FuncCompiler(f, model).compile()
    return funcs


# -- evaluation --------------------------------------------------------


def _truth(v, line_ctx=""):
    if v == "true" or v is True:
        return True
    if v == "false" or v is False:
        return False
    raise ModelError(f"condition is not a boolean: {v!r} {line_ctx}")


class Machine:
    def __init__(self, model: ObjectModel, cfg: ClientConfig):
        if isinstance(model, str):
            model = parse_model(model)
        self.model = model
        self.cfg = cfg
        self.funcs = compile_model(model)
        self.shared_names = list(model.shared)
        node_ref = {n: ("ref", i) for i, n in enumerate(model.init_nodes)}
        self.init_heap = tuple((v, "null") for v in model.init_nodes.values())
        self.shared_init = tuple(node_ref.get(v, v) if isinstance(v, str) else v
                                 for v in (model.shared[n] for n in self.shared_names))

    # states: (shared: tuple, heap: tuple[(val, next)], threads: tuple)
    # thread: ("idle", opidx) | ("run", method, opidx, frames)
    # frame:  (func, pc, locals: tuple)

    def initial_state(self):
        threads = tuple(("idle", 0) for _ in range(self.cfg.threads))
        return self._canon((self.shared_init, self.init_heap, threads))

    def _frame0(self, func_name, args):
        f = self.funcs[func_name]
        locs = [_UNSET] * len(f.local_names)
        for p, v in zip(f.params, args):
            locs[f.local_index[p]] = v
        return (func_name, 0, tuple(locs))

    def _canon(self, state):
        shared, heap, threads = state
        mapping = {}
        discovered = []

        def visit(v):
            if isinstance(v, tuple):
                if v and v[0] == "ref":
                    i = v[1]
                    if i not in mapping:
                        mapping[i] = len(discovered)
                        discovered.append(i)
                    return ("ref", mapping[i])
                return tuple(visit(x) for x in v)
            return v

        new_shared = visit(shared)
        new_threads = []
        for th in threads:
            if th[0] == "run":
                _, m, opidx, frames = th
                nf = tuple((fn, pc, visit(loc)) for fn, pc, loc in frames)
                new_threads.append(("run", m, opidx, nf))
            else:
                new_threads.append(th)
        new_heap = []
        k = 0
        while k < len(discovered):
            new_heap.append(visit(heap[discovered[k]]))
            k += 1
        if self.model.arena and len(new_heap) > self.model.arena:
            raise ExplorationError(
                f"arena exhausted ({len(new_heap)} live nodes > {self.model.arena})")
        return (new_shared, tuple(new_heap), tuple(new_threads))

    def _eval(self, e, shared, heap, locals_, tid):
        k = e[0]
        if k == "int" or k == "atom":
            return e[1]
        if k == "local":
            v = locals_[e[1]]
            if v is _UNSET:
                raise ModelError("read of unset local variable")
            return v
        if k == "shared":
            return shared[e[1]]
        if k == "index":
            arr = shared[e[1]]
            idx = self._eval(e[2], shared, heap, locals_, tid)
            if not isinstance(arr, tuple) or not isinstance(idx, int) \
                    or not 0 <= idx < len(arr):
                raise ModelError(f"bad array access index {idx!r}")
            return arr[idx]
        if k == "field":
            base = self._eval(e[1], shared, heap, locals_, tid)
            f = e[2]
            if isinstance(base, tuple) and base and base[0] == "ref":
                val, nxt = heap[base[1]]
                if f == "val":
                    return val
                if f == "next":
                    return nxt
                raise ModelError(f"node has no field {f!r}")
            if isinstance(base, tuple) and base and base[0] == "desc":
                if f == "o":
                    return base[2]
                if f == "n":
                    return base[3]
                if f == "cid":
                    return base[1]
                raise ModelError(f"descriptor has no field {f!r}")
            raise ModelError(f"field access on non-reference {base!r}")
        if k == "bin":
            l = self._eval(e[2], shared, heap, locals_, tid)
            r = self._eval(e[3], shared, heap, locals_, tid)
            if not isinstance(l, int) or not isinstance(r, int):
                raise ModelError("arithmetic on non-integers")
            return l + r if e[1] == "+" else l - r
        if k == "cmp":
            l = self._eval(e[2], shared, heap, locals_, tid)
            r = self._eval(e[3], shared, heap, locals_, tid)
            op = e[1]
            if op == "==":
                return "true" if l == r else "false"
            if op == "!=":
                return "true" if l != r else "false"
            if not isinstance(l, int) or not isinstance(r, int):
                raise ModelError("ordering comparison on non-integers")
            res = {"<": l < r, "<=": l <= r, ">": l > r, ">=": l >= r}[op]
            return "true" if res else "false"
        if k == "not":
            return "false" if _truth(self._eval(e[1], shared, heap, locals_, tid)) else "true"
        if k == "isdesc":
            v = self._eval(e[1], shared, heap, locals_, tid)
            return "true" if isinstance(v, tuple) and v and v[0] == "desc" else "false"
        if k == "desc":
            o = self._eval(e[1], shared, heap, locals_, tid)
            n = self._eval(e[2], shared, heap, locals_, tid)
            return ("desc", tid, o, n)
        raise ModelError(f"unknown expression {e!r}")

    def _read_target(self, t, shared, heap, locals_, tid):
        if t[0] == "local":
            v = locals_[t[1]]
            if v is _UNSET:
                raise ModelError("cas on unset local")
            return v
        return self._eval(t, shared, heap, locals_, tid)

    def _write_target(self, t, value, shared, heap, locals_, tid):
        """Returns updated (shared, heap, locals_)."""
        k = t[0]
        if k == "local":
            locals_ = locals_[:t[1]] + (value,) + locals_[t[1] + 1:]
        elif k == "shared":
            shared = shared[:t[1]] + (value,) + shared[t[1] + 1:]
        elif k == "index":
            arr = shared[t[1]]
            idx = self._eval(t[2], shared, heap, locals_, tid)
            if not isinstance(arr, tuple) or not 0 <= idx < len(arr):
                raise ModelError(f"bad array store index {idx!r}")
            arr = arr[:idx] + (value,) + arr[idx + 1:]
            shared = shared[:t[1]] + (arr,) + shared[t[1] + 1:]
        elif k == "field":
            base = self._eval(t[1], shared, heap, locals_, tid)
            if not (isinstance(base, tuple) and base and base[0] == "ref"):
                raise ModelError(f"field store on non-reference {base!r}")
            i = base[1]
            val, nxt = heap[i]
            node = (value, nxt) if t[2] == "val" else (val, value)
            if t[2] not in ("val", "next"):
                raise ModelError(f"node has no field {t[2]!r}")
            heap = heap[:i] + (node,) + heap[i + 1:]
        else:
            raise ModelError(f"bad target {t!r}")
        return shared, heap, locals_

    def eval_statement(self, state, tid):
        """Successors of the enabled thread's next atomic statement (always one)."""
        shared, heap, threads = state
        th = threads[tid - 1]
        if th[0] != "run":
            raise ModelError(f"thread {tid} has no pending statement")
        return [self._exec(state, tid)]

    def _exec(self, state, tid):
        shared, heap, threads = state
        _, method, opidx, frames = threads[tid - 1]
        fn, pc, locals_ = frames[-1]
        func = self.funcs[fn]
        step = func.steps[pc]
        kind = step.kind

        def rebuild(shared, heap, frames, tag):
            nt = threads[:tid - 1] + (("run", method, opidx, frames),) + threads[tid:]
            return Action.tau(tid, tag), self._canon((shared, heap, self._norm(nt, tid)))

        def finish_ret(value):
            nt = threads[:tid - 1] + (("idle", opidx + 1),) + threads[tid:]
            return (Action.ret(tid, method, value),
                    self._canon((shared, heap, nt)))

        if kind == "assign":
            targets, exprs = step.data
            if len(exprs) == 1 and exprs[0][0] == "new":
                v = self._eval(exprs[0][1], shared, heap, locals_, tid)
                heap = heap + ((v, "null"),)
                values = [("ref", len(heap) - 1)]
            else:
                values = [self._eval(e, shared, heap, locals_, tid) for e in exprs]
            idx_cache = [self._eval(t[2], shared, heap, locals_, tid)
                         if t[0] == "index" else None for t in targets]
            for t, cached, v in zip(targets, idx_cache, values):
                if t[0] == "index":
                    t = ("index", t[1], ("int", cached))
                shared, heap, locals_ = self._write_target(t, v, shared, heap, locals_, tid)
            tag = step.tag
            if step.mod is not None:
                watched = locals_[func.local_index[step.mod]]
                tag += ".null" if watched == "null" else ".val"
            nf = frames[:-1] + ((fn, step.next, locals_),)
            return rebuild(shared, heap, nf, tag)

        if kind in ("cas", "casv"):
            target, lv, old_e, new_e = step.data
            old = self._eval(old_e, shared, heap, locals_, tid)
            new = self._eval(new_e, shared, heap, locals_, tid)
            cur = self._read_target(lv, shared, heap, locals_, tid)
            ok = cur == old
            if ok:
                shared, heap, locals_ = self._write_target(lv, new, shared, heap, locals_, tid)
            result = ("true" if ok else "false") if kind == "cas" else cur
            if target is not None:
                shared, heap, locals_ = self._write_target(target, result, shared,
                                                           heap, locals_, tid)
            nf = frames[:-1] + ((fn, step.next, locals_),)
            return rebuild(shared, heap, nf, step.tag + (".ok" if ok else ".fail"))

        if kind == "if":
            cond, body = step.data
            taken = _truth(self._eval(cond, shared, heap, locals_, tid))
            if not taken:
                nf = frames[:-1] + ((fn, step.alt, locals_),)
                return rebuild(shared, heap, nf, step.tag + ".false")
            if body[0] == "return":
                value = self._eval(body[1], shared, heap, locals_, tid) \
                    if body[1] is not None else None
                return finish_ret(value)
            if body[0] == "call":
                _, sub, args, _ = body
                vals = [self._eval(a, shared, heap, locals_, tid) for a in args]
                nf = frames[:-1] + ((fn, step.alt, locals_), self._frame0(sub, vals))
                return rebuild(shared, heap, nf, step.tag + ".true")
            nf = frames[:-1] + ((fn, step.next, locals_),)
            return rebuild(shared, heap, nf, step.tag + ".true")

        if kind == "return":
            expr = step.data[0]
            value = self._eval(expr, shared, heap, locals_, tid) if expr is not None else None
            return finish_ret(value)

        if kind == "goto":
            nf = frames[:-1] + ((fn, step.next, locals_),)
            return rebuild(shared, heap, nf, step.tag)

        if kind == "callsub":
            sub, args = step.data
            vals = [self._eval(a, shared, heap, locals_, tid) for a in args]
            nf = frames[:-1] + ((fn, step.next, locals_), self._frame0(sub, vals))
            return rebuild(shared, heap, nf, step.tag)

        raise ModelError(f"unknown step kind {kind!r}")

    def _norm(self, threads, tid):
        """Pop finished sub frames so states never rest at a sub's end."""
        th = threads[tid - 1]
        if th[0] != "run":
            return threads
        _, m, opidx, frames = th
        while len(frames) > 1:
            fn, pc, _ = frames[-1]
            if pc < len(self.funcs[fn].steps):
                break
            frames = frames[:-1]
        return threads[:tid - 1] + (("run", m, opidx, frames),) + threads[tid:]

    def thread_actions(self, state, tid):
        shared, heap, threads = state
        th = threads[tid - 1]
        if th[0] == "idle":
            out = []
            for method, arg in self.cfg.op_choices(tid, th[1], self.model):
                f = self.funcs[method]
                args = () if arg is None else (arg if isinstance(arg, tuple) else (arg,))
                if len(args) != len(f.params):
                    raise ModelError(f"{method} takes {len(f.params)} argument(s), "
                                     f"got {len(args)}")
                frames = (self._frame0(method, args),)
                nt = threads[:tid - 1] + (("run", method, th[1], frames),) + threads[tid:]
                succ = self._canon((shared, heap, self._norm(nt, tid)))
                out.append((Action.call(tid, method, arg), succ))
            return out
        _, method, opidx, frames = th
        fn, pc, _ = frames[-1]
        if len(frames) == 1 and pc >= len(self.funcs[fn].steps):
            nt = threads[:tid - 1] + (("idle", opidx + 1),) + threads[tid:]
            return [(Action.ret(tid, method, None), self._canon((shared, heap, nt)))]
        return [self._exec(state, tid)]

    def state_actions(self, state):
        out = []
        for tid in range(1, self.cfg.threads + 1):
            out.extend(self.thread_actions(state, tid))
        return out

    def pending(self, state) -> bool:
        return any(th[0] == "run" for th in state[2])

    def describe(self, state) -> str:
        shared, heap, threads = state
        sh = " ".join(f"{n}={v!r}" for n, v in zip(self.shared_names, shared))
        ths = []
        for i, th in enumerate(threads, start=1):
            if th[0] == "idle":
                ths.append(f"t{i}:idle/{th[1]}")
            else:
                fn, pc, _ = th[3][-1]
                ths.append(f"t{i}:{th[1]}@{fn}+{pc}")
        return f"{sh} | {' '.join(ths)}" + (f" | heap={heap!r}" if heap else "")


def explore(model, cfg: ClientConfig, step_bound: int = DEFAULT_STEP_BOUND,
            with_payload: bool = True, deadline: float | None = None) -> Lts:
    """BFS over global states; returns the Lts with BFS state numbering.

    Raises ExplorationError when the state count exceeds step_bound (which
    flags non-terminating models) and ExplorationTimeout past a deadline.
    """
    m = Machine(model, cfg) if not isinstance(model, Machine) else model
    s0 = m.initial_state()
    ids = {s0: 0}
    order = [s0]
    transitions = []
    qi = 0
    while qi < len(order):
        state = order[qi]
        sid = qi
        qi += 1
        if deadline is not None and qi % 512 == 0 and time.monotonic() > deadline:
            raise ExplorationTimeout(f"exploration exceeded deadline at {len(ids)} states")
        for act, succ in m.state_actions(state):
            nid = ids.get(succ)
            if nid is None:
                if len(ids) >= step_bound:
                    raise ExplorationError(
                        f"step bound {step_bound} exceeded; looping state: "
                        f"{m.describe(state)}")
                nid = len(ids)
                ids[succ] = nid
                order.append(succ)
            transitions.append((sid, act, nid))
    payload = None
    if with_payload:
        payload = {i: {"pending": m.pending(s), "desc": m.describe(s)}
                   for i, s in enumerate(order)}
    return build_lts(transitions, 0, states=range(len(order)), payload=payload)
