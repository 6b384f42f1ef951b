"""Parser for the concurrent-object modeling language.

Models are UTF-8 text, one file per algorithm.  The grammar is line-based
with python-style indentation for blocks:

    shared NAME = LITERAL            shared variable with initial value
    shared NAME = [LITERAL; N]       shared array of N copies
    arena N                          node pool size for new()
    method NAME(p1, ...):            entry method (0-2 parameters)
    sub NAME(p1, ...):               helper routine (no nested subs)
      TAG: statement                 one labeled atomic statement per line

Statements: multi-assignment ``x, y := e1, e2`` (right sides evaluated
first, so swaps are atomic), boolean ``cas(&lv, old, new)``, value-returning
``casv(&lv, old, new)``, node allocation ``new(e)``, descriptor construction
``desc(e1, e2)``, ``if``/``while`` sugar, ``goto TAG``, ``call Sub(args)``,
and ``return [expr]``.  ``while true:`` takes no tag and no step; every other
statement is one atomic step carrying its tag.  Conditionals report as
``TAG.true``/``TAG.false``, cas steps as ``TAG.ok``/``TAG.fail``, and a
``TAG?x:`` modifier reports ``TAG.val``/``TAG.null`` by whether local x ends
up null.  A one-line ``if COND: return e`` (or goto/call) executes test and
body as a single atomic step, matching how such lines are written in
fine-grained algorithms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

ATOMS = {"null", "true", "false", "ok", "EMPTY"}

_TOKEN_RE = re.compile(r"""
    (?P<num>-?\d+)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>:=|==|!=|<=|>=|[][()<>+\-,.&:?;=])
  | (?P<ws>\s+)
""", re.VERBOSE)


class ModelError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


def _tokenize(text, line):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ModelError(f"cannot tokenize {text[pos:pos+10]!r} (column {pos + 1})", line)
        pos = m.end()
        if m.lastgroup != "ws":
            out.append(m.group())
    return out


class _Tokens:
    def __init__(self, toks, line):
        self.toks = toks
        self.i = 0
        self.line = line

    def peek(self, ahead=0):
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ModelError("unexpected end of line", self.line)
        self.i += 1
        return t

    def expect(self, tok):
        t = self.next()
        if t != tok:
            raise ModelError(f"expected {tok!r}, got {t!r}", self.line)
        return t

    def done(self):
        return self.i >= len(self.toks)


# Expression AST nodes are plain tuples:
#   ("int", v) ("atom", s) ("name", x) ("field", expr, name)
#   ("index", name, expr) ("bin", op, l, r) ("cmp", op, l, r)
#   ("not", e) ("isdesc", e) ("new", e) ("desc", e1, e2)

def _parse_primary(ts: _Tokens):
    t = ts.next()
    if re.fullmatch(r"-?\d+", t):
        return ("int", int(t))
    if t == "(":
        e = _parse_expr(ts)
        ts.expect(")")
        return _postfix(ts, e)
    if t == "not":
        return ("not", _parse_primary(ts))
    if re.fullmatch(r"[A-Za-z_]\w*", t):
        if t in ("new", "desc", "isdesc") and ts.peek() == "(":
            ts.expect("(")
            args = [_parse_expr(ts)]
            while ts.peek() == ",":
                ts.next()
                args.append(_parse_expr(ts))
            ts.expect(")")
            if t == "new" and len(args) == 1:
                return ("new", args[0])
            if t == "desc" and len(args) == 2:
                return ("desc", args[0], args[1])
            if t == "isdesc" and len(args) == 1:
                return ("isdesc", args[0])
            raise ModelError(f"wrong arity for {t}", ts.line)
        if t in ATOMS:
            return _postfix(ts, ("atom", t))
        node = ("name", t)
        if ts.peek() == "[":
            ts.next()
            idx = _parse_expr(ts)
            ts.expect("]")
            node = ("index", t, idx)
        return _postfix(ts, node)
    raise ModelError(f"unexpected token {t!r}", ts.line)


def _postfix(ts: _Tokens, node):
    while ts.peek() == ".":
        ts.next()
        f = ts.next()
        node = ("field", node, f)
    return node


def _parse_arith(ts: _Tokens):
    node = _parse_primary(ts)
    while ts.peek() in ("+", "-"):
        op = ts.next()
        node = ("bin", op, node, _parse_primary(ts))
    return node


def _parse_expr(ts: _Tokens):
    node = _parse_arith(ts)
    if ts.peek() in ("==", "!=", "<", "<=", ">", ">="):
        op = ts.next()
        node = ("cmp", op, node, _parse_arith(ts))
    return node


def _parse_lvalue(ts: _Tokens):
    name = ts.next()
    if not re.fullmatch(r"[A-Za-z_]\w*", name) or name in ATOMS:
        raise ModelError(f"bad assignment target {name!r}", ts.line)
    node = ("name", name)
    if ts.peek() == "[":
        ts.next()
        idx = _parse_expr(ts)
        ts.expect("]")
        node = ("index", name, idx)
    while ts.peek() == ".":
        ts.next()
        node = ("field", node, ts.next())
    return node


def _parse_cas(ts: _Tokens, kind):
    ts.expect("(")
    ts.expect("&")
    lv = _parse_lvalue(ts)
    ts.expect(",")
    old = _parse_expr(ts)
    ts.expect(",")
    new = _parse_expr(ts)
    ts.expect(")")
    return (kind, lv, old, new)


# Statement AST:
#   ("assign", [targets], [exprs])
#   ("casstmt", kind, target|None, lvalue, old, new)
#   ("if", cond, then_block, else_block)         blocks are stmt lists
#   ("fusedif", cond, body_stmt)                  one-line if
#   ("while", cond, block) / ("loop", block)      loop = while true
#   ("return", expr|None) ("goto", tag) ("call", sub, [args])

@dataclass
class _Line:
    number: int
    indent: int
    tag: str | None
    modifier: str | None  # TAG?x value-report modifier
    body: str


@dataclass
class FuncDef:
    name: str
    params: list
    stmts: list = field(default_factory=list)
    is_sub: bool = False


@dataclass
class ObjectModel:
    """Program text of a concurrent object: shared state plus method bodies."""

    name: str | None
    shared: dict
    arena: int
    methods: dict
    subs: dict
    init_nodes: dict
    source: str = ""

    def all_tags(self):
        tags = []

        def walk(stmts):
            for tag, _mod, st, line in stmts:
                if tag:
                    tags.append(tag)
                if st[0] == "if":
                    walk(st[2])
                    walk(st[3])
                elif st[0] in ("while", "loop"):
                    walk(st[-1])
        for f in list(self.methods.values()) + list(self.subs.values()):
            walk(f.stmts)
        return tags


def _parse_literal(ts: _Tokens):
    e = _parse_expr(ts)
    if e[0] in ("int", "atom"):
        return e[1]
    if e[0] == "name":  # reference to a declared initial node
        return e[1]
    raise ModelError("initial values must be literals", ts.line)


def _split_lines(text):
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        indent = len(stripped) - len(stripped.lstrip())
        lines.append((no, indent, stripped.strip()))
    return lines


_TAG_RE = re.compile(r"^([A-Za-z_]\w*)\s*(\?\s*([A-Za-z_]\w*))?\s*:\s*(.*)$")


def parse_model(text: str, name: str | None = None) -> ObjectModel:
    """Parse model text; raises ModelError with a line number on bad input."""
    lines = _split_lines(text)
    if not lines:
        raise ModelError("empty model text", 1)
    shared: dict = {}
    arena = 0
    methods: dict = {}
    subs: dict = {}
    init_nodes: dict = {}
    model_name = name
    i = 0

    def parse_block(start, indent):
        """Parse statements at exactly `indent`, returning (stmts, next_index)."""
        stmts = []
        j = start
        while j < len(lines):
            no, ind, text = lines[j]
            if ind < indent:
                break
            if ind > indent:
                raise ModelError("unexpected indentation", no)
            tag = mod = None
            body = text
            if text.startswith("else"):
                rest = text[4:].strip()
                if rest != ":":
                    raise ModelError("malformed else", no)
                break  # handled by the enclosing if
            if not (text.startswith("while true") and ":" in text):
                m = _TAG_RE.match(text)
                if m and m.group(1) not in ("goto", "return", "call", "if", "while"):
                    tag, mod, body = m.group(1), m.group(3), m.group(4)
            stmt, j = parse_statement(no, tag, mod, body, j, indent)
            stmts.append(stmt)
        return stmts, j

    def parse_statement(no, tag, mod, body, j, indent):
        ts = _Tokens(_tokenize(body, no), no)
        head = ts.peek()

        if head == "while":
            ts.next()
            if ts.peek() == "true":
                ts.next()
                ts.expect(":")
                if tag is not None:
                    raise ModelError("while true takes no tag (it is not a step)", no)
                block, nj = parse_block(j + 1, _child_indent(j, indent, no))
                return (None, None, ("loop", block), no), nj
            cond = _parse_expr(ts)
            ts.expect(":")
            _require_tag(tag, no, "while")
            block, nj = parse_block(j + 1, _child_indent(j, indent, no))
            return (tag, mod, ("while", cond, block), no), nj

        if head == "if":
            ts.next()
            cond = _parse_expr(ts)
            ts.expect(":")
            _require_tag(tag, no, "if")
            if not ts.done():  # one-line fused body
                body_stmt = parse_simple(ts, no)
                return (tag, mod, ("fusedif", cond, body_stmt), no), j + 1
            then_block, nj = parse_block(j + 1, _child_indent(j, indent, no))
            else_block = []
            if nj < len(lines):
                eno, eind, etext = lines[nj]
                if eind == indent and etext.rstrip() == "else:":
                    else_block, nj = parse_block(nj + 1, _child_indent(nj, indent, eno))
            return (tag, mod, ("if", cond, then_block, else_block), no), nj

        _require_tag(tag, no, head)
        return (tag, mod, parse_simple(ts, no), no), j + 1

    def parse_simple(ts: _Tokens, no):
        head = ts.peek()
        if head == "return":
            ts.next()
            expr = None if ts.done() else _parse_expr(ts)
            _finish(ts, no)
            return ("return", expr)
        if head == "goto":
            ts.next()
            target = ts.next()
            _finish(ts, no)
            return ("goto", target)
        if head == "call":
            ts.next()
            sub = ts.next()
            ts.expect("(")
            args = []
            if ts.peek() != ")":
                args.append(_parse_expr(ts))
                while ts.peek() == ",":
                    ts.next()
                    args.append(_parse_expr(ts))
            ts.expect(")")
            _finish(ts, no)
            return ("call", sub, args)
        if head in ("cas", "casv") and ts.peek(1) == "(":
            kind = ts.next()
            _, lv, old, new = _parse_cas(ts, kind)
            _finish(ts, no)
            return ("casstmt", kind, None, lv, old, new)
        # assignment: targets := exprs
        targets = [_parse_lvalue(ts)]
        while ts.peek() == ",":
            ts.next()
            targets.append(_parse_lvalue(ts))
        ts.expect(":=")
        if ts.peek() in ("cas", "casv") and ts.peek(1) == "(":
            kind = ts.next()
            _, lv, old, new = _parse_cas(ts, kind)
            _finish(ts, no)
            if len(targets) != 1:
                raise ModelError("cas assigns a single target", no)
            return ("casstmt", kind, targets[0], lv, old, new)
        exprs = [_parse_expr(ts)]
        while ts.peek() == ",":
            ts.next()
            exprs.append(_parse_expr(ts))
        _finish(ts, no)
        if len(targets) != len(exprs):
            raise ModelError("assignment arity mismatch", no)
        return ("assign", targets, exprs)

    def _finish(ts: _Tokens, no):
        if not ts.done():
            raise ModelError(f"trailing tokens: {' '.join(ts.toks[ts.i:])!r}", no)

    def _require_tag(tag, no, what):
        if tag is None:
            raise ModelError(f"statement {what!r} needs an instruction tag", no)

    def _child_indent(j, indent, no):
        if j + 1 >= len(lines) or lines[j + 1][1] <= indent:
            raise ModelError("expected an indented block", no)
        return lines[j + 1][1]

    while i < len(lines):
        no, ind, text = lines[i]
        if ind != 0:
            raise ModelError("top-level declarations must not be indented", no)
        ts = _Tokens(_tokenize(text, no), no)
        head = ts.next()
        if head == "model":
            model_name = ts.next()
            i += 1
        elif head == "shared":
            var = ts.next()
            ts.expect("=" if ts.peek() == "=" else ":=")
            if ts.peek() == "[":
                ts.next()
                fill = _parse_literal(ts)
                ts.expect(";")
                count = int(ts.next())
                ts.expect("]")
                shared[var] = tuple([fill] * count)
            else:
                shared[var] = _parse_literal(ts)
            i += 1
        elif head == "arena":
            arena = int(ts.next())
            i += 1
        elif head == "node":
            nname = ts.next()
            ts.next()  # = or :=
            init_nodes[nname] = _parse_literal(ts)
            i += 1
        elif head in ("method", "sub"):
            fname = ts.next()
            ts.expect("(")
            params = []
            if ts.peek() != ")":
                params.append(ts.next())
                while ts.peek() == ",":
                    ts.next()
                    params.append(ts.next())
            ts.expect(")")
            ts.expect(":")
            block, i = parse_block(i + 1, _child_indent_top(lines, i, no))
            f = FuncDef(fname, params, block, is_sub=(head == "sub"))
            (subs if head == "sub" else methods)[fname] = f
        else:
            raise ModelError(f"unknown declaration {head!r}", no)

    if not methods:
        raise ModelError("model declares no methods", lines[0][0])
    model = ObjectModel(model_name, shared, arena, methods, subs, init_nodes,
                        source=text)
    tags = model.all_tags()
    dupes = {t for t in tags if tags.count(t) > 1}
    if dupes:
        raise ModelError(f"duplicate instruction tags: {sorted(dupes)}")
    return model


def _child_indent_top(lines, j, no):
    if j + 1 >= len(lines) or lines[j + 1][1] == 0:
        raise ModelError("expected an indented method body", no)
    return lines[j + 1][1]
