"""Command-line front end.

Expression grammar (whitespace-insensitive; ^ binds tightest, then unary
minus, then * and /, then + and -; implicit multiplication not supported):

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' ['-'] integer)?
    atom     := integer | variable (single letter) | '(' expr ')'

ODE files are line-oriented: a ``var:`` line naming the single-letter
variable, an ``order:`` line, then ``P1:`` .. ``Pk:`` expression lines.
Signature files: an ``n:`` line, ``elliptic: <value> <order>`` lines and
``cusp: <value or inf>`` lines.  Anywhere a file is expected,
``fixture:<name>`` loads a bundled fixture instead.

Exit codes: 0 = a verdict/report was produced (including NOT MODULAR and
NotSymmetricSquare), 1 = input or parse error, 2 = internal contract
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence, Union

from .elliptic import (
    ConstantJ,
    IdenticallySingular,
    WeierstrassModel,
    check_elliptic_modularity,
    delta_aux,
    discriminant,
    euler_sum,
    functional_invariant,
)
from .exact import AT_INFINITY, AlgebraicPoint, Polynomial, RationalFunction
from .k3 import FrickeOrbifoldData, SignatureValueCollision, check_k3_modularity
from .mirror import (
    NotMUM,
    UnsupportedLocation,
    mirror_coordinate_text,
    mirror_map,
)
from .ode import (
    LinearODE,
    NotFuchsian,
    PointKind,
    QuadraticExponent,
    UnsupportedExponentField,
    analyze,
    exponent_text,
    fuchsian_check,
    pnf2,
    pnf3,
)
from .transform import (
    ConstantMap,
    NotSymmetricSquare,
    classify_pullback,
    sym2,
    sym2_root,
)
from .uniformize import CUSP, uniformization_check
from .uniformdata import UnknownFixture, load_fixture


# ---------------------------------------------------------------------------
# expression parsing


class ParseError(ValueError):
    """Syntax error with position and the expected-token set."""

    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)


class InputError(ValueError):
    """Bad input file or semantic error in an expression."""


class ExpressionAST:
    """Nodes: integer literals, a single-letter variable, unary negation,
    and binary {+, -, *, /, ^}."""

    __slots__ = ("kind", "value", "children")

    def __init__(self, kind: str, value=None, children=()):
        self.kind = kind
        self.value = value
        self.children = tuple(children)

    def variables(self) -> set:
        if self.kind == "var":
            return {self.value}
        out = set()
        for c in self.children:
            out |= c.variables()
        return out

    def evaluate(self) -> RationalFunction:
        if self.kind == "int":
            return RationalFunction.constant(self.value)
        if self.kind == "var":
            return RationalFunction.x()
        if self.kind == "neg":
            return -self.children[0].evaluate()
        if self.kind == "pow":
            base = self.children[0].evaluate()
            if base.is_zero() and self.value < 0:
                raise InputError("zero raised to a negative power")
            return base**self.value
        left = self.children[0].evaluate()
        right = self.children[1].evaluate()
        if self.kind == "add":
            return left + right
        if self.kind == "sub":
            return left - right
        if self.kind == "mul":
            return left * right
        if self.kind == "div":
            if right.is_zero():
                raise InputError("division by zero in expression")
            return left / right
        raise AssertionError(f"unknown node kind {self.kind}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            if i + 1 < len(text) and text[i + 1].isalnum():
                raise ParseError("variables are single letters", i)
            tokens.append(("var", ch, i))
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], expected=[kind])
        return self.advance()

    def parse(self) -> ExpressionAST:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], expected=["end of input"])
        return node

    def expr(self) -> ExpressionAST:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = ExpressionAST("add" if op == "+" else "sub", children=(node, rhs))
        return node

    def term(self) -> ExpressionAST:
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.unary()
            node = ExpressionAST("mul" if op == "*" else "div", children=(node, rhs))
        return node

    def unary(self) -> ExpressionAST:
        if self.peek()[0] == "-":
            self.advance()
            return ExpressionAST("neg", children=(self.unary(),))
        return self.power()

    def power(self) -> ExpressionAST:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            sign = 1
            if self.peek()[0] == "-":
                self.advance()
                sign = -1
            tok = self.expect("int")
            return ExpressionAST("pow", value=sign * int(tok[1]), children=(base,))
        return base

    def atom(self) -> ExpressionAST:
        tok = self.peek()
        if tok[0] == "int":
            self.advance()
            return ExpressionAST("int", value=int(tok[1]))
        if tok[0] == "var":
            self.advance()
            return ExpressionAST("var", value=tok[1])
        if tok[0] == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(
            f"unexpected {tok[1]!r}" if tok[0] != "end" else "unexpected end of input",
            tok[2],
            expected=["integer", "variable", "("],
        )


def parse_expression(text: str) -> ExpressionAST:
    return _Parser(text).parse()


def parse_ratfunc(text: str, var: Optional[str] = None) -> RationalFunction:
    """Parse an expression into a RationalFunction; when ``var`` is given
    the expression must use that variable (or none)."""
    ast = parse_expression(text)
    used = ast.variables()
    if len(used) > 1:
        raise InputError(f"expression uses several variables: {sorted(used)}")
    if var is not None and used and used != {var}:
        raise InputError(f"expression uses {used.pop()!r}, expected {var!r}")
    return ast.evaluate()


def parse_constant(text: str) -> Fraction:
    value = parse_ratfunc(text)
    if not value.is_constant():
        raise InputError(f"expected a constant, got {text!r}")
    return value.constant_value()


def parse_p1_value(text: str):
    """A point of the projective line: a rational constant or ``inf``."""
    text = text.strip()
    if text in ("inf", "oo", "infinity"):
        return None
    return parse_constant(text)


def parse_point(text: str) -> AlgebraicPoint:
    value = parse_p1_value(text)
    return AT_INFINITY if value is None else AlgebraicPoint.rational(value)


# ---------------------------------------------------------------------------
# input files


def _read_source(source: str) -> Union[str, object]:
    """Return file text, or the fixture payload for fixture:<name>."""
    if source.startswith("fixture:"):
        return load_fixture(source[len("fixture:"):]).payload
    try:
        with open(source, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc


_FIXTURE_VARS = {"lambda": "x", "family-E-pf": "s"}


def load_ode(source: str) -> tuple[LinearODE, str]:
    """Load an operator from a file path or fixture:<name>; returns the
    operator and its variable name."""
    payload = _read_source(source)
    if isinstance(payload, LinearODE):
        name = source[len("fixture:"):]
        return payload, _FIXTURE_VARS.get(name, "x")
    if not isinstance(payload, str):
        raise InputError(f"{source} is not an operator fixture")
    fields = _parse_keyed_lines(payload)
    var = _single_value(fields, "var")
    if len(var) != 1 or not var.isalpha():
        raise InputError(f"var must be a single letter, got {var!r}")
    try:
        order = int(_single_value(fields, "order"))
    except ValueError as exc:
        raise InputError(f"bad order: {exc}") from exc
    if order < 1:
        raise InputError("order must be >= 1")
    coeffs = []
    for i in range(1, order + 1):
        key = f"p{i}"
        if key not in fields:
            raise InputError(f"missing coefficient line P{i}:")
        coeffs.append(parse_ratfunc(_single_value(fields, key), var))
    known = {"var", "order"} | {f"p{i}" for i in range(1, order + 1)}
    extra = set(fields) - known
    if extra:
        raise InputError(f"unknown keys in ODE file: {sorted(extra)}")
    return LinearODE(coeffs), var


def load_signature(source: str) -> FrickeOrbifoldData:
    payload = _read_source(source)
    if isinstance(payload, FrickeOrbifoldData):
        return payload
    if not isinstance(payload, str):
        raise InputError(f"{source} is not a signature fixture")
    n = None
    elliptic = []
    cusps = []
    for raw in payload.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise InputError(f"bad signature line: {raw!r}")
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.lower()
        if key == "n":
            n = int(value)
        elif key == "elliptic":
            parts = value.split()
            if len(parts) != 2:
                raise InputError(f"elliptic line needs '<value> <order>': {raw!r}")
            elliptic.append((parse_p1_value(parts[0]), int(parts[1])))
        elif key == "cusp":
            cusps.append(parse_p1_value(value))
        else:
            raise InputError(f"unknown signature key {key!r}")
    if n is None:
        raise InputError("signature file is missing the n: line")
    try:
        return FrickeOrbifoldData(n, elliptic, cusps)
    except (ValueError, SignatureValueCollision) as exc:
        raise InputError(str(exc)) from exc


def _parse_keyed_lines(text: str) -> dict:
    fields = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise InputError(f"bad line (no colon): {raw!r}")
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.lower()
        if key in fields:
            raise InputError(f"duplicate key {key!r}")
        fields[key] = value
    return fields


def _single_value(fields: dict, key: str) -> str:
    if key not in fields:
        raise InputError(f"missing {key}: line")
    return fields[key]


# ---------------------------------------------------------------------------
# report rendering


class _Report:
    """Accumulates (key, value) lines and named tables; renders either a
    structured-text document or one JSON object with stable field names."""

    def __init__(self, command: str):
        self.data = {"command": command}
        self.lines = []

    def field(self, key: str, value, text=None):
        self.data[key] = value
        self.lines.append(f"{key}: {value if text is None else text}")

    def table(self, key: str, headers, rows):
        self.data[key] = [dict(zip(headers, row)) for row in rows]
        if not rows:
            self.lines.append(f"{key}: none")
            return
        self.lines.append(f"{key}:")
        widths = [max(len(str(h)), max(len(str(r[i])) for r in rows)) for i, h in enumerate(headers)]
        header = "  " + "  ".join(str(h).ljust(w) for h, w in zip(headers, widths))
        self.lines.append(header)
        for row in rows:
            self.lines.append("  " + "  ".join(str(c).ljust(w) for c, w in zip(row, widths)))

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.data, indent=2, default=str)
        return "\n".join(self.lines)


def _diff_text(diff) -> str:
    if diff is None:
        return "-"
    if isinstance(diff, QuadraticExponent):
        return repr(diff)
    return str(diff)


def _classification_text(cls) -> str:
    if cls is None:
        return "-"
    return repr(cls)


def _operator_lines(L: LinearODE, var: str) -> list[str]:
    return L.to_text(var).splitlines()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(args) -> int:
    L, var = load_ode(args.ode)
    report = _Report("analyze")
    report.field("order", L.order)
    report.field("variable", var)
    diag = fuchsian_check(L)
    report.field("fuchsian", bool(diag), text=str(bool(diag)).lower())
    rows = []
    for rep in analyze(L):
        exps = ", ".join(exponent_text(e) for e in rep.exponents)
        rows.append((
            rep.location.describe(var),
            exps if exps else "-",
            _diff_text(rep.exponent_difference),
            _classification_text(rep.classification),
            "yes" if rep.log_obstruction_checked else "no",
        ))
    report.table("points", ["location", "exponents", "difference", "classification",
                            "obstruction_checked"], rows)
    print(report.render(args.json))
    return 0


def _cmd_pnf(args) -> int:
    L, var = load_ode(args.ode)
    if L.order == 2:
        normal = pnf2(L)
    elif L.order == 3:
        normal = pnf3(L)
    else:
        raise InputError("pnf supports orders 2 and 3")
    report = _Report("pnf")
    report.field("var", var)
    report.field("order", normal.order)
    _emit_operator(report, normal, var)
    print(report.render(args.json))
    return 0


def _emit_operator(report: _Report, L: LinearODE, var: str):
    coeffs = [c.to_text(var) for c in L.coefficients]
    report.data["coefficients"] = coeffs
    for i, text in enumerate(coeffs, start=1):
        report.lines.append(f"P{i}: {text}")


def _cmd_pullback(args) -> int:
    L, var = load_ode(args.ode)
    R = parse_ratfunc(args.map, var)
    result = classify_pullback(L, R)
    report = _Report("pullback")
    report.field("variable", var)
    report.field("map", R.to_text(var))
    _emit_operator(report, result.operator, var)
    rows = []
    for rep in result.points:
        rows.append((
            rep.location.describe(var),
            rep.source.describe(var) if rep.source is not None else "ordinary value",
            "inf" if rep.source_weight is CUSP else rep.source_weight,
            rep.ramification,
            _diff_text(rep.difference),
            _classification_text(rep.classification),
        ))
    report.table("points", ["location", "source", "source_weight", "ramification",
                            "difference", "classification"], rows)
    print(report.render(args.json))
    return 0


def _cmd_sym2(args) -> int:
    L, var = load_ode(args.ode)
    if L.order != 2:
        raise InputError("sym2 expects an order-2 operator")
    S = sym2(L)
    report = _Report("sym2")
    report.field("var", var)
    report.field("order", S.order)
    _emit_operator(report, S, var)
    print(report.render(args.json))
    return 0


def _cmd_sqrt(args) -> int:
    L, var = load_ode(args.ode)
    if L.order != 3:
        raise InputError("sqrt expects an order-3 operator")
    report = _Report("sqrt")
    try:
        root = sym2_root(L)
    except NotSymmetricSquare:
        report.field("verdict", "NotSymmetricSquare")
        print(report.render(args.json))
        return 0
    report.field("verdict", "SymmetricSquare")
    report.field("var", var)
    report.field("order", root.order)
    _emit_operator(report, root, var)
    print(report.render(args.json))
    return 0


def _cmd_uniformize(args) -> int:
    L, var = load_ode(args.ode)
    report = _Report("uniformize")
    report.field("variable", var)
    if L.order != 2:
        raise InputError("uniformize expects an order-2 operator")
    if not L.coefficient(1).is_zero():
        L = pnf2(L)
        report.field("normalized", True, text="true (input was not in PNF)")
    result = uniformization_check(L)
    report.field("verdict", "PASS" if result.passed else "FAIL")
    report.field("strict", "PASS" if result.strict_passed else "FAIL")
    if result.signature is not None:
        report.field("signature", result.signature.describe())
    rows = []
    for v in result.points:
        rows.append((
            v.location.describe(var),
            _diff_text(v.difference),
            _classification_text(v.classification),
            "ok" if v.ok else "FAIL",
            v.reason,
        ))
    report.table("points", ["location", "difference", "classification", "status", "reason"], rows)
    print(report.render(args.json))
    return 0


def _cmd_mirror_map(args) -> int:
    L, var = load_ode(args.ode)
    point = parse_point(args.point)
    if args.terms < 1:
        raise InputError("--terms must be >= 1")
    series = mirror_map(L, point, args.terms)
    report = _Report("mirror-map")
    report.field("variable", var)
    report.field("point", point.describe(var))
    report.field("coordinate", mirror_coordinate_text(point, var))
    report.field("terms", args.terms)
    report.field("series", series.to_text("q", show_order=False))
    print(report.render(args.json))
    return 0


def _cmd_elliptic(args) -> int:
    var = _common_variable([args.g2, args.g3])
    g2 = parse_ratfunc(args.g2, var)
    g3 = parse_ratfunc(args.g3, var)
    W = WeierstrassModel(g2, g3)
    result = check_elliptic_modularity(W)
    report = _Report("elliptic")
    report.field("variable", var)
    report.field("discriminant", discriminant(W).to_text(var))
    report.field("functional_invariant", result.j_invariant.to_text(var))
    census_rows = [(pt.describe(var), str(fiber)) for pt, fiber in result.census]
    report.table("fibers", ["location", "type"], census_rows)
    report.field("euler_sum", euler_sum([f for _, f in result.census]))
    report.table(
        "zero_orders",
        ["location", "order", "admissible"],
        [(pt.describe(var), mult, "yes" if ok else "no")
         for pt, mult, ok in result.zero_audit.entries],
    )
    report.table(
        "one_orders",
        ["location", "order", "admissible"],
        [(pt.describe(var), mult, "yes" if ok else "no")
         for pt, mult, ok in result.one_audit.entries],
    )
    report.field("extra_ramification_defect", result.rh_defect)
    report.table(
        "apparent_points",
        ["location"],
        [(pt.describe(var),) for pt in result.apparent_points],
    )
    if result.forbidden_fibers:
        report.table(
            "forbidden_fibers",
            ["location", "type"],
            [(pt.describe(var), str(f)) for pt, f in result.forbidden_fibers],
        )
    report.field("verdict", "MODULAR" if result.modular else "NOT MODULAR")
    print(report.render(args.json))
    return 0


def _common_variable(texts) -> str:
    used = set()
    for text in texts:
        used |= parse_expression(text).variables()
    if len(used) > 1:
        raise InputError(f"expressions use several variables: {sorted(used)}")
    return used.pop() if used else "s"


def _cmd_k3_check(args) -> int:
    orb = load_signature(args.signature)
    var = _common_variable([args.hn])
    hn = parse_ratfunc(args.hn, var)
    L3 = None
    if args.ode:
        L3, ode_var = load_ode(args.ode)
        if ode_var != var and not hn.is_constant():
            raise InputError(
                f"operator variable {ode_var!r} differs from map variable {var!r}"
            )
    report = _Report("k3-check")
    report.field("variable", var)
    report.field("hauptmodul_map", hn.to_text(var))
    report.field("level", orb.n)
    try:
        result = check_k3_modularity(hn, orb, L3)
    except NotSymmetricSquare:
        report.field("verdict", "NOT MODULAR")
        report.field("reason", "supplied operator is not a symmetric square")
        print(report.render(args.json))
        return 0
    for audit in result.elliptic_audits:
        rows = [
            (pt.describe(var), r, "yes" if ok else "no", "yes" if app else "no")
            for pt, r, ok, app in audit.entries
        ]
        report.table(
            f"elliptic_{audit.value.describe()}_order_{audit.order}",
            ["location", "multiplicity", "table_admissible", "apparent"],
            rows,
        )
    cusp_rows = []
    for value, fiber in result.cusp_fibers:
        for pt, r in fiber:
            cusp_rows.append((value.describe(), pt.describe(var), r))
    report.table("cusp_preimages", ["cusp_value", "location", "multiplicity"], cusp_rows)
    report.field("extra_ramification_defect", result.rh_defect)
    if result.analytic is not None:
        report.field("analytic", "PASS" if result.analytic.passed else "FAIL")
        report.field("agreement", str(result.agreement).lower())
    report.field("verdict", "MODULAR" if result.modular else "NOT MODULAR")
    print(report.render(args.json))
    return 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picardfuchs",
        description="Exact analysis of Fuchsian operators: normal forms, "
        "uniformization checks, elliptic/K3 modularity verdicts, mirror maps.",
    )
    parser.add_argument("--json", action="store_true", help="emit one JSON object")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze", help="singular points, exponents, classifications")
    p.add_argument("--ode", required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("pnf", help="projective normal form (orders 2 and 3)")
    p.add_argument("--ode", required=True)
    p.set_defaults(func=_cmd_pnf)

    p = sub.add_parser("pullback", help="pullback along a rational map + classification")
    p.add_argument("--ode", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(func=_cmd_pullback)

    p = sub.add_parser("sym2", help="symmetric square of an order-2 operator")
    p.add_argument("--ode", required=True)
    p.set_defaults(func=_cmd_sym2)

    p = sub.add_parser("sqrt", help="symmetric-square root of an order-3 operator")
    p.add_argument("--ode", required=True)
    p.set_defaults(func=_cmd_sqrt)

    p = sub.add_parser("uniformize", help="orbifold uniformization verdict + signature")
    p.add_argument("--ode", required=True)
    p.set_defaults(func=_cmd_uniformize)

    p = sub.add_parser("mirror-map", help="mirror map q-series at a MUM point")
    p.add_argument("--ode", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--terms", type=int, required=True)
    p.set_defaults(func=_cmd_mirror_map)

    p = sub.add_parser("elliptic", help="Weierstrass surface analysis + modularity verdict")
    p.add_argument("--g2", required=True)
    p.add_argument("--g3", required=True)
    p.set_defaults(func=_cmd_elliptic)

    p = sub.add_parser("k3-check", help="K3 vanishing-order modularity verdict")
    p.add_argument("--hn", required=True)
    p.add_argument("--signature", required=True)
    p.add_argument("--ode", default=None)
    p.set_defaults(func=_cmd_k3_check)

    return parser


_INPUT_ERRORS = (
    ParseError,
    InputError,
    UnknownFixture,
    NotMUM,
    UnsupportedLocation,
    NotFuchsian,
    ConstantJ,
    ConstantMap,
    IdenticallySingular,
    SignatureValueCollision,
    UnsupportedExponentField,
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, ZeroDivisionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
