"""OpenQASM 2.0 subset: parse into a small AST, then lower to a CircuitDag.

Only what reversible-logic and textbook benchmark files use is accepted. Anything
else is rejected loudly instead of being skipped, with the line and column of
the offending token.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

from .circuit import CircuitDag, Gate, GateKind, gate
from .errors import QasmError, UnsupportedFeatureError, UnsupportedGateError
from .gates import ccx_network

K = GateKind

# --- lexer -----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|==|[;,()\[\]{}+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Unary, Binary, Call]

_FUNCS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


def evaluate(e: Expr, env: dict[str, float] | None = None) -> float:
    """Value of ``e`` in radians."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.name == "pi":
            return math.pi
        if env is None or e.name not in env:
            raise QasmError(f"unknown parameter {e.name!r}", e.line, e.col)
        return env[e.name]
    if isinstance(e, Unary):
        return -evaluate(e.arg, env)
    if isinstance(e, Call):
        return _FUNCS[e.func](evaluate(e.arg, env))
    a, b = evaluate(e.left, env), evaluate(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        return a / b
    return a**b


@dataclass(frozen=True)
class Arg:
    register: str
    index: int | None  # None: whole register (broadcast) or a gate-body argument
    line: int
    col: int


@dataclass(frozen=True)
class GateCall:
    name: str
    params: tuple[Expr, ...]
    args: tuple[Arg, ...]
    line: int
    col: int


@dataclass(frozen=True)
class Measure:
    qubit: Arg
    line: int


@dataclass(frozen=True)
class Barrier:
    args: tuple[Arg, ...]
    line: int


Statement = Union[GateCall, Measure, Barrier]


@dataclass
class GateDef:
    name: str
    params: tuple[str, ...]
    qargs: tuple[str, ...]
    body: list[GateCall]
    line: int


@dataclass
class QasmProgram:
    version: str | None = None
    qregs: dict[str, int] = field(default_factory=dict)
    cregs: dict[str, int] = field(default_factory=dict)
    gate_defs: dict[str, GateDef] = field(default_factory=dict)
    statements: list[Statement] = field(default_factory=list)
    includes: list[str] = field(default_factory=list)

    @property
    def num_qubits(self) -> int:
        return sum(self.qregs.values())

    def offsets(self) -> dict[str, int]:
        out, k = {}, 0
        for name, size in self.qregs.items():
            out[name] = k
            k += size
        return out

    @property
    def measures(self) -> int:
        return sum(isinstance(s, Measure) for s in self.statements)

    @property
    def barriers(self) -> int:
        return sum(isinstance(s, Barrier) for s in self.statements)


# --- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.prog = QasmProgram()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> QasmError:
        t = tok or self.tok
        return QasmError(msg, t.line, t.col)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind in ("string",):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "string":
            self.i += 1
            return True
        return False

    # program ----------------------------------------------------------------

    def program(self) -> QasmProgram:
        if self.tok.text == "OPENQASM":
            self.advance()
            ver = self.advance()
            if ver.kind not in ("real", "int") or not ver.text.startswith("2"):
                raise UnsupportedFeatureError(f"OpenQASM version {ver.text} is not supported", ver.line, ver.col)
            self.prog.version = ver.text
            self.expect(";")
        while self.tok.kind != "eof":
            self.statement()
        return self.prog

    def statement(self) -> None:
        t = self.tok
        if t.kind != "id":
            raise self.error(f"unexpected {t.text!r}")
        word = t.text
        if word == "include":
            self.advance()
            name = self.expect_kind("string", "file name")
            self.prog.includes.append(name.text.strip('"'))
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.advance()
            name = self.expect_kind("id", "register name")
            self.expect("[")
            size = int(self.expect_kind("int", "register size").text)
            self.expect("]")
            self.expect(";")
            regs = self.prog.qregs if word == "qreg" else self.prog.cregs
            if name.text in self.prog.qregs or name.text in self.prog.cregs:
                raise self.error(f"register {name.text!r} declared twice", name)
            if size < 1:
                raise self.error("register size must be positive", name)
            regs[name.text] = size
        elif word == "gate":
            self.gate_def()
        elif word == "measure":
            self.advance()
            q = self.argument()
            self.expect("->")
            self.argument(classical=True)
            self.expect(";")
            self.prog.statements.append(Measure(q, t.line))
        elif word == "barrier":
            self.advance()
            args = self.arg_list()
            self.expect(";")
            self.prog.statements.append(Barrier(tuple(args), t.line))
        elif word in ("if", "opaque", "reset"):
            raise UnsupportedFeatureError(f"{word!r} statements are not supported", t.line, t.col)
        else:
            self.prog.statements.append(self.gate_call())

    def gate_def(self) -> None:
        start = self.advance()
        name = self.expect_kind("id", "gate name")
        params: list[str] = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expect_kind("id", "parameter name").text)
                while self.accept(","):
                    params.append(self.expect_kind("id", "parameter name").text)
                self.expect(")")
        qargs = [self.expect_kind("id", "qubit argument").text]
        while self.accept(","):
            qargs.append(self.expect_kind("id", "qubit argument").text)
        self.expect("{")
        body = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated gate body")
            if self.tok.text == "barrier":
                self.advance()
                self.arg_list()
                self.expect(";")
                continue
            call = self.gate_call()
            for a in call.args:
                if a.index is not None or a.register not in qargs:
                    raise QasmError(f"gate body uses undeclared argument {a.register!r}", a.line, a.col)
            body.append(call)
        self.prog.gate_defs[name.text] = GateDef(name.text, tuple(params), tuple(qargs), body, start.line)

    def gate_call(self) -> GateCall:
        name = self.expect_kind("id", "gate name")
        params: list[Expr] = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expr())
                while self.accept(","):
                    params.append(self.expr())
                self.expect(")")
        args = self.arg_list()
        self.expect(";")
        return GateCall(name.text, tuple(params), tuple(args), name.line, name.col)

    def arg_list(self) -> list[Arg]:
        args = [self.argument()]
        while self.accept(","):
            args.append(self.argument())
        return args

    def argument(self, classical: bool = False) -> Arg:
        name = self.expect_kind("id", "register name")
        index = None
        if self.accept("["):
            index = int(self.expect_kind("int", "index").text)
            self.expect("]")
        return Arg(name.text, index, name.line, name.col)

    # expressions: + - lowest, then * /, then unary minus, then ^ ----------------

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.accept("-"):
            return Unary("-", self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind in ("int", "real"):
            self.advance()
            return Num(float(t.text))
        if t.kind == "id":
            self.advance()
            if t.text in _FUNCS:
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return Call(t.text, e)
            return Var(t.text, t.line, t.col)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        raise self.error(f"expected an expression, found {t.text or 'end of input'!r}")


def parse_qasm(text: str) -> QasmProgram:
    return _Parser(text).program()


# --- lowering -------------------------------------------------------------------

_PI = math.pi


def _u3(t: float, p: float, l: float, q: int) -> list[Gate]:
    return [gate(K.TK1, q, params=[p + 0.5, t, l - 0.5])]


def _fixed(kind: GateKind) -> Callable[..., list[Gate]]:
    return lambda *qs: [gate(kind, *qs)]


def _rot(kind: GateKind) -> Callable[..., list[Gate]]:
    return lambda a, *qs: [gate(kind, *qs, params=[a])]


# name -> (parameter count, qubit count, builder taking params in pi units then qubits)
BUILTINS: dict[str, tuple[int, int, Callable[..., list[Gate]]]] = {
    "id": (0, 1, lambda q: []),
    "x": (0, 1, _fixed(K.X)),
    "y": (0, 1, _fixed(K.Y)),
    "z": (0, 1, _fixed(K.Z)),
    "h": (0, 1, _fixed(K.H)),
    "s": (0, 1, _fixed(K.S)),
    "sdg": (0, 1, _fixed(K.SDG)),
    "t": (0, 1, _fixed(K.T)),
    "tdg": (0, 1, _fixed(K.TDG)),
    "rx": (1, 1, _rot(K.RX)),
    "ry": (1, 1, _rot(K.RY)),
    "rz": (1, 1, _rot(K.RZ)),
    "u1": (1, 1, _rot(K.RZ)),
    "u2": (2, 1, lambda p, l, q: _u3(0.5, p, l, q)),
    "u3": (3, 1, _u3),
    "U": (3, 1, _u3),
    "cx": (0, 2, _fixed(K.CNOT)),
    "CX": (0, 2, _fixed(K.CNOT)),
    "cz": (0, 2, _fixed(K.CZ)),
    "cu1": (1, 2, _rot(K.CU1)),
    "cry": (1, 2, _rot(K.CRY)),
    "rzz": (1, 2, _rot(K.ZZ)),
    "swap": (0, 2, _fixed(K.SWAP)),
    "ccx": (0, 3, lambda a, b, c: ccx_network(a, b, c)),
}


@dataclass
class Lowered:
    circuit: CircuitDag
    measures_stripped: int
    barriers_stripped: int


class _Lowerer:
    def __init__(self, prog: QasmProgram):
        self.prog = prog
        self.offsets = prog.offsets()
        if not prog.qregs:
            raise QasmError("program declares no quantum register")
        self.dag = CircuitDag(prog.num_qubits)

    def resolve(self, a: Arg) -> list[int]:
        if a.register not in self.prog.qregs:
            raise QasmError(f"undeclared quantum register {a.register!r}", a.line, a.col)
        size = self.prog.qregs[a.register]
        base = self.offsets[a.register]
        if a.index is None:
            return [base + k for k in range(size)]
        if a.index >= size:
            raise QasmError(f"index {a.index} out of range for {a.register}[{size}]", a.line, a.col)
        return [base + a.index]

    def emit(self, name: str, params: list[float], qubits: list[int], call: GateCall, stack: tuple[str, ...]) -> None:
        if name in BUILTINS:
            npar, nq, build = BUILTINS[name]
            if len(params) != npar or len(qubits) != nq:
                raise QasmError(
                    f"{name} takes {npar} parameter(s) and {nq} qubit(s), got {len(params)} and {len(qubits)}",
                    call.line,
                    call.col,
                )
            if len(set(qubits)) != len(qubits):
                raise QasmError(f"{name} applied to repeated qubits", call.line, call.col)
            self.dag.extend(build(*[p / _PI for p in params], *qubits))
            return
        d = self.prog.gate_defs.get(name)
        if d is None:
            raise UnsupportedGateError(f"line {call.line}, column {call.col}: unsupported gate {name!r}")
        if name in stack:
            raise QasmError(f"recursive gate definition {name!r}", call.line, call.col)
        if len(params) != len(d.params) or len(qubits) != len(d.qargs):
            raise QasmError(f"wrong number of arguments for gate {name!r}", call.line, call.col)
        env = dict(zip(d.params, params))
        qmap = dict(zip(d.qargs, qubits))
        for inner in d.body:
            vals = [evaluate(e, env) for e in inner.params]
            self.emit(inner.name, vals, [qmap[a.register] for a in inner.args], inner, stack + (name,))

    def run(self) -> Lowered:
        for s in self.prog.statements:
            if isinstance(s, (Measure, Barrier)):
                for a in (s.args if isinstance(s, Barrier) else (s.qubit,)):
                    self.resolve(a)
                continue
            params = [evaluate(e) for e in s.params]
            regs = [self.resolve(a) for a in s.args]
            width = max(len(r) for r in regs)
            if any(len(r) not in (1, width) for r in regs):
                raise QasmError(f"register sizes do not match in {s.name}", s.line, s.col)
            for k in range(width):
                qubits = [r[0] if len(r) == 1 else r[k] for r in regs]
                self.emit(s.name, params, qubits, s, ())
        return Lowered(self.dag, self.prog.measures, self.prog.barriers)


def lower_to_dag(prog: QasmProgram) -> Lowered:
    return _Lowerer(prog).run()


def load_qasm(path: str | Path) -> Lowered:
    return lower_to_dag(parse_qasm(Path(path).read_text()))


def qasm_to_circuit(text: str) -> CircuitDag:
    return lower_to_dag(parse_qasm(text)).circuit


def circuit_to_qasm(c: CircuitDag) -> str:
    """Emit an input-side circuit (pre-compilation kinds) as OpenQASM 2.0."""
    names = {
        K.X: "x", K.Y: "y", K.Z: "z", K.H: "h", K.S: "s", K.SDG: "sdg", K.T: "t", K.TDG: "tdg",
        K.RX: "rx", K.RY: "ry", K.RZ: "rz", K.CNOT: "cx", K.CZ: "cz", K.CU1: "cu1",
        K.SWAP: "swap", K.CRY: "cry", K.ZZ: "rzz", K.CCX: "ccx",
    }
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{c.n}];"]
    for g in c.ordered_gates():
        if g.kind is K.TK1:
            a, b, cc = g.params
            ps = f"({b!r}*pi,{a - 0.5!r}*pi,{cc + 0.5!r}*pi)"
            name = "u3"
        elif g.kind in names:
            name = names[g.kind]
            ps = "(" + ",".join(f"{p!r}*pi" for p in g.params) + ")" if g.params else ""
        else:
            raise UnsupportedGateError(f"{g.kind.label} has no OpenQASM 2.0 spelling")
        qs = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{name}{ps} {qs};")
    return "\n".join(lines) + "\n"
