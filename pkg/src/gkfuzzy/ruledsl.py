"""Plain-text rule base format (``.frb``).

Grammar, one declaration per statement, ``#`` comments, free whitespace::

    var <name> range <lo> <hi> {
      term <label> points (<x>,<degree>) (<x>,<degree>) ... ;
      ...
    }
    output <name> range <lo> <hi> { ... }
    rule: if <name> is <label> and <name> is <label> ... then <name> is <label>

:func:`parse_rulebase` never raises anything but
:class:`RuleBaseSyntaxError`, whose diagnostic carries a stable code plus
1-based line:column. :func:`format_rulebase` emits the canonical form that
parses back to an equal model.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .core import FuzzySet, LinguisticVariable, PiecewiseLinearMF, Universe
from .inference import InferenceConfig, Rule, RuleBase

# diagnostic codes
UNEXPECTED_CHARACTER = "unexpected-character"
UNEXPECTED_TOKEN = "unexpected-token"
UNEXPECTED_END = "unexpected-end"
INVALID_NUMBER = "invalid-number"
INVALID_RANGE = "invalid-range"
DUPLICATE_VARIABLE = "duplicate-variable"
DUPLICATE_TERM = "duplicate-term"
DUPLICATE_OUTPUT = "duplicate-output"
TOO_FEW_POINTS = "too-few-points"
BREAKPOINTS_NOT_INCREASING = "breakpoints-not-increasing"
DEGREE_OUT_OF_RANGE = "degree-out-of-range"
BREAKPOINT_OUTSIDE_RANGE = "breakpoint-outside-range"
UNKNOWN_VARIABLE = "unknown-variable"
UNKNOWN_TERM = "unknown-term"
DUPLICATE_ANTECEDENT = "duplicate-antecedent"
OUTPUT_IN_ANTECEDENT = "output-in-antecedent"
CONSEQUENT_NOT_OUTPUT = "consequent-not-output"
MISSING_OUTPUT = "missing-output"
NO_INPUT_VARIABLES = "no-input-variables"
NO_RULES = "no-rules"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.code}: {self.message}"


class RuleBaseSyntaxError(ValueError):
    """Parse or validation failure, with position and diagnostic code."""

    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


@dataclass(frozen=True)
class RuleBaseDocument:
    """Parsed rule base plus source text and declaration positions."""

    source: str
    rulebase: RuleBase
    variable_positions: dict[str, tuple[int, int]]
    rule_positions: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT | NUMBER | PUNCT | EOF
    text: str
    line: int
    column: int


_NUMBER_RE = re.compile(r"-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCT = set("{}(),;:")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or ch == "." or (ch == "-" and i + 1 < n and (text[i + 1].isdigit() or text[i + 1] == ".")):
            m = _NUMBER_RE.match(text, i)
            if m and m.group(0) not in (".", "-"):
                tok = m.group(0)
                tokens.append(_Token("NUMBER", tok, line, col))
                i += len(tok)
                col += len(tok)
                continue
        m = _IDENT_RE.match(text, i)
        if m:
            tok = m.group(0)
            tokens.append(_Token("IDENT", tok, line, col))
            i += len(tok)
            col += len(tok)
            continue
        raise RuleBaseSyntaxError(
            Diagnostic(UNEXPECTED_CHARACTER, f"unexpected character {ch!r}", line, col)
        )
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, code: str, message: str, tok: _Token | None = None) -> RuleBaseSyntaxError:
        tok = tok or self.peek()
        return RuleBaseSyntaxError(Diagnostic(code, message, tok.line, tok.column))

    def expect_keyword(self, word: str) -> _Token:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.text != word:
            if tok.kind == "EOF":
                raise self.fail(UNEXPECTED_END, f"expected {word!r}, found end of input")
            raise self.fail(UNEXPECTED_TOKEN, f"expected {word!r}, found {tok.text!r}")
        return self.advance()

    def expect_ident(self, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            if tok.kind == "EOF":
                raise self.fail(UNEXPECTED_END, f"expected {what}, found end of input")
            raise self.fail(UNEXPECTED_TOKEN, f"expected {what}, found {tok.text!r}")
        return self.advance()

    def expect_punct(self, ch: str) -> _Token:
        tok = self.peek()
        if tok.kind != "PUNCT" or tok.text != ch:
            if tok.kind == "EOF":
                raise self.fail(UNEXPECTED_END, f"expected {ch!r}, found end of input")
            raise self.fail(UNEXPECTED_TOKEN, f"expected {ch!r}, found {tok.text!r}")
        return self.advance()

    def expect_number(self, what: str) -> tuple[float, _Token]:
        tok = self.peek()
        if tok.kind != "NUMBER":
            if tok.kind == "EOF":
                raise self.fail(UNEXPECTED_END, f"expected {what}, found end of input")
            raise self.fail(UNEXPECTED_TOKEN, f"expected {what}, found {tok.text!r}")
        value = float(tok.text)
        if not math.isfinite(value):
            raise self.fail(INVALID_NUMBER, f"number {tok.text!r} is out of range", tok)
        return value, self.advance()


def _parse_variable_block(p: _Parser, keyword: str) -> tuple[LinguisticVariable, _Token]:
    name_tok = p.expect_ident("a variable name")
    p.expect_keyword("range")
    lo, lo_tok = p.expect_number("the range lower bound")
    hi, _ = p.expect_number("the range upper bound")
    if not lo < hi:
        raise p.fail(INVALID_RANGE, f"range [{lo:g}, {hi:g}] needs lo < hi", lo_tok)
    universe = Universe(lo, hi)
    p.expect_punct("{")
    terms: dict[str, FuzzySet] = {}
    while True:
        tok = p.peek()
        if tok.kind == "PUNCT" and tok.text == "}":
            p.advance()
            break
        term_kw = p.expect_keyword("term")
        label_tok = p.expect_ident("a term label")
        if label_tok.text in terms:
            raise p.fail(
                DUPLICATE_TERM,
                f"term {label_tok.text!r} already declared for {name_tok.text!r}",
                label_tok,
            )
        p.expect_keyword("points")
        points: list[tuple[float, float]] = []
        point_toks: list[_Token] = []
        while p.peek().kind == "PUNCT" and p.peek().text == "(":
            open_tok = p.expect_punct("(")
            x, _ = p.expect_number("a breakpoint x value")
            p.expect_punct(",")
            d, d_tok = p.expect_number("a breakpoint degree")
            p.expect_punct(")")
            if not 0.0 <= d <= 1.0:
                raise p.fail(DEGREE_OUT_OF_RANGE, f"degree {d:g} outside [0, 1]", d_tok)
            if x < lo or x > hi:
                raise p.fail(
                    BREAKPOINT_OUTSIDE_RANGE,
                    f"breakpoint x {x:g} outside range [{lo:g}, {hi:g}]",
                    open_tok,
                )
            if points and x <= points[-1][0]:
                raise p.fail(
                    BREAKPOINTS_NOT_INCREASING,
                    f"breakpoint x {x:g} does not increase past {points[-1][0]:g}",
                    open_tok,
                )
            points.append((x, d))
            point_toks.append(open_tok)
        if len(points) < 2:
            raise p.fail(
                TOO_FEW_POINTS,
                f"term {label_tok.text!r} needs at least 2 breakpoints",
                term_kw,
            )
        p.expect_punct(";")
        mf = PiecewiseLinearMF(points)
        terms[label_tok.text] = FuzzySet(label_tok.text, universe, mf)
    if not terms:
        raise p.fail(TOO_FEW_POINTS, f"{keyword} {name_tok.text!r} declares no terms", name_tok)
    return LinguisticVariable(name_tok.text, universe, terms), name_tok


def _parse_rule(
    p: _Parser,
    variables: dict[str, LinguisticVariable],
    output: LinguisticVariable | None,
) -> Rule:
    p.expect_punct(":")
    p.expect_keyword("if")
    antecedent: list[tuple[str, str]] = []
    seen: set[str] = set()
    while True:
        var_tok = p.expect_ident("a variable name")
        p.expect_keyword("is")
        term_tok = p.expect_ident("a term label")
        if output is not None and var_tok.text == output.name:
            raise p.fail(
                OUTPUT_IN_ANTECEDENT,
                f"output variable {var_tok.text!r} cannot appear in an antecedent",
                var_tok,
            )
        variable = variables.get(var_tok.text)
        if variable is None:
            raise p.fail(UNKNOWN_VARIABLE, f"unknown variable {var_tok.text!r}", var_tok)
        if term_tok.text not in variable.terms:
            raise p.fail(
                UNKNOWN_TERM,
                f"variable {var_tok.text!r} has no term {term_tok.text!r}",
                term_tok,
            )
        if var_tok.text in seen:
            raise p.fail(
                DUPLICATE_ANTECEDENT,
                f"variable {var_tok.text!r} appears twice in one rule",
                var_tok,
            )
        seen.add(var_tok.text)
        antecedent.append((var_tok.text, term_tok.text))
        nxt = p.peek()
        if nxt.kind == "IDENT" and nxt.text == "and":
            p.advance()
            continue
        break
    p.expect_keyword("then")
    out_tok = p.expect_ident("the output variable name")
    p.expect_keyword("is")
    out_term_tok = p.expect_ident("an output term label")
    if output is None or out_tok.text != output.name:
        if out_tok.text in variables:
            raise p.fail(
                CONSEQUENT_NOT_OUTPUT,
                f"consequent names input variable {out_tok.text!r}",
                out_tok,
            )
        raise p.fail(UNKNOWN_VARIABLE, f"unknown output variable {out_tok.text!r}", out_tok)
    if out_term_tok.text not in output.terms:
        raise p.fail(
            UNKNOWN_TERM,
            f"output variable has no term {out_term_tok.text!r}",
            out_term_tok,
        )
    return Rule(tuple(antecedent), (out_tok.text, out_term_tok.text))


def parse_document(text: str | bytes) -> RuleBaseDocument:
    """Parse rule base text, keeping source positions for diagnostics."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    p = _Parser(text)
    variables: dict[str, LinguisticVariable] = {}
    variable_positions: dict[str, tuple[int, int]] = {}
    order: list[LinguisticVariable] = []
    output: LinguisticVariable | None = None
    rules: list[Rule] = []
    rule_positions: list[tuple[int, int]] = []

    while True:
        tok = p.peek()
        if tok.kind == "EOF":
            break
        if tok.kind != "IDENT":
            raise p.fail(UNEXPECTED_TOKEN, f"expected a declaration, found {tok.text!r}")
        if tok.text == "var":
            p.advance()
            variable, name_tok = _parse_variable_block(p, "var")
            if variable.name in variables or (output and variable.name == output.name):
                raise p.fail(
                    DUPLICATE_VARIABLE, f"variable {variable.name!r} already declared", name_tok
                )
            variables[variable.name] = variable
            variable_positions[variable.name] = (name_tok.line, name_tok.column)
            order.append(variable)
        elif tok.text == "output":
            p.advance()
            variable, name_tok = _parse_variable_block(p, "output")
            if output is not None:
                raise p.fail(DUPLICATE_OUTPUT, "output variable already declared", name_tok)
            if variable.name in variables:
                raise p.fail(
                    DUPLICATE_VARIABLE, f"variable {variable.name!r} already declared", name_tok
                )
            output = variable
            variable_positions[variable.name] = (name_tok.line, name_tok.column)
        elif tok.text == "rule":
            rule_tok = p.advance()
            rules.append(_parse_rule(p, variables, output))
            rule_positions.append((rule_tok.line, rule_tok.column))
        else:
            raise p.fail(
                UNEXPECTED_TOKEN,
                f"expected 'var', 'output' or 'rule', found {tok.text!r}",
            )

    eof = p.peek()
    if output is None:
        raise p.fail(MISSING_OUTPUT, "no output variable declared", eof)
    if not variables:
        raise p.fail(NO_INPUT_VARIABLES, "no input variables declared", eof)
    if not rules:
        raise p.fail(NO_RULES, "no rules declared", eof)

    rulebase = RuleBase(order, output, rules, InferenceConfig())
    return RuleBaseDocument(
        source=text,
        rulebase=rulebase,
        variable_positions=variable_positions,
        rule_positions=tuple(rule_positions),
    )


def parse_rulebase(text: str | bytes) -> RuleBase:
    """Parse rule base text into a ready-to-evaluate model."""
    return parse_document(text).rulebase


def format_number(x: float) -> str:
    """Shortest decimal that parses back to exactly ``x``."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _format_variable(keyword: str, variable: LinguisticVariable, out: list[str]) -> None:
    lo = format_number(variable.universe.lo)
    hi = format_number(variable.universe.hi)
    out.append(f"{keyword} {variable.name} range {lo} {hi} {{")
    for label, fset in variable.terms.items():
        pts = " ".join(
            f"({format_number(x)},{format_number(d)})" for x, d in fset.mf.breakpoints
        )
        out.append(f"  term {label} points {pts};")
    out.append("}")


def format_rulebase(rulebase: RuleBase) -> str:
    """Canonical text form: variables, output, then rules, declaration order."""
    out: list[str] = []
    for variable in rulebase.input_variables:
        _format_variable("var", variable, out)
    _format_variable("output", rulebase.output_variable, out)
    for rule in rulebase.rules:
        conds = " and ".join(f"{var} is {term}" for var, term in rule.antecedent)
        out_var, out_term = rule.consequent
        out.append(f"rule: if {conds} then {out_var} is {out_term}")
    return "\n".join(out) + "\n"
