"""Line-oriented description language for twin-beam noise pipelines.

Grammar, one statement per line (``#`` starts a comment; key=value
pairs may appear in any order after the mode names)::

    mode <name>
    squeeze2 <a> <b> gain=<float>
    loss <mode> t=<float>
    mix <mode> v=<float> eps=<float> [anc_var=<float>]
    measure <mode> phase=<float>
    measure_joint <a> <b> phase_a=<float> phase_b=<float> sign=<+|->

``squeeze2`` is a two-mode squeezer with intensity gain >= 1, ``loss``
a beam splitter of intensity transmittance t in [0, 1] against vacuum,
and ``mix`` the imperfect-visibility element: a beam splitter of
transmittance v**2 whose other port carries a fraction eps of
uncorrelated thermal light.  Unless ``anc_var`` pins it explicitly, the
thermal ancilla matches the target mode's variance at the point the mix
is applied, evaluated in the quadrature the mode is later measured in.

Modes must be declared before use and measurements read the state at
their position in the statement order, so intermediate taps are legal.

``parse`` never raises on malformed text: it returns diagnostics
(kind, line number, message) alongside the parsed circuit so a caller
can report every problem in one pass.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Union

from .gaussian import (
    ModeLabel,
    apply_loss,
    apply_two_mode_squeeze,
    apply_visibility_mixer,
    joint_quadrature_variance,
    quadrature_variance,
    vacuum,
)

__all__ = [
    "Squeeze2",
    "Loss",
    "Mix",
    "MeasureSingle",
    "MeasureJoint",
    "CircuitSpec",
    "Diagnostic",
    "ParseResult",
    "parse",
    "render",
    "render_element",
    "evaluate",
    "apply_overrides",
    "UNKNOWN_KEYWORD",
    "UNDECLARED_MODE",
    "OUT_OF_RANGE",
    "DUPLICATE_MODE",
    "SYNTAX",
    "NO_MEASURE",
]

# Diagnostic kinds.  Line number 0 marks a whole-file problem.
UNKNOWN_KEYWORD = "unknown-keyword"
UNDECLARED_MODE = "undeclared-mode"
OUT_OF_RANGE = "out-of-range"
DUPLICATE_MODE = "duplicate-mode"
SYNTAX = "syntax"
NO_MEASURE = "no-measure"


@dataclass(frozen=True)
class Squeeze2:
    mode_a: str
    mode_b: str
    gain: float


@dataclass(frozen=True)
class Loss:
    mode: str
    t: float


@dataclass(frozen=True)
class Mix:
    mode: str
    v: float
    eps: float
    anc_var: float | None = None


@dataclass(frozen=True)
class MeasureSingle:
    mode: str
    phase: float


@dataclass(frozen=True)
class MeasureJoint:
    mode_a: str
    mode_b: str
    phase_a: float
    phase_b: float
    sign: int


Element = Union[Squeeze2, Loss, Mix, MeasureSingle, MeasureJoint]


@dataclass(frozen=True)
class CircuitSpec:
    """Parsed pipeline: declared modes plus ordered elements."""

    modes: tuple[ModeLabel, ...]
    elements: tuple[Element, ...]


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    line: int
    message: str


@dataclass(frozen=True)
class ParseResult:
    spec: CircuitSpec | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.spec is not None


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
# Plain decimal floats only: no inf/nan/underscores, so rendered files
# stay portable and bit-exact on reparse.
_FLOAT_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")

# keyword -> (positional mode count, required keys, optional keys)
_STATEMENTS: dict[str, tuple[int, tuple[str, ...], tuple[str, ...]]] = {
    "squeeze2": (2, ("gain",), ()),
    "loss": (1, ("t",), ()),
    "mix": (1, ("v", "eps"), ("anc_var",)),
    "measure": (1, ("phase",), ()),
    "measure_joint": (2, ("phase_a", "phase_b", "sign"), ()),
}

# key -> (accept predicate, requirement text); keys absent here (phases)
# are unconstrained.
_VALUE_RULES: dict[tuple[str, str], tuple] = {
    ("squeeze2", "gain"): (lambda x: x >= 1.0, "must be >= 1"),
    ("loss", "t"): (lambda x: 0.0 <= x <= 1.0, "must lie in [0, 1]"),
    ("mix", "v"): (lambda x: 0.0 <= x <= 1.0, "must lie in [0, 1]"),
    ("mix", "eps"): (lambda x: 0.0 <= x <= 1.0, "must lie in [0, 1]"),
    ("mix", "anc_var"): (lambda x: x >= 1.0, "must be >= 1"),
}

_PAIRED = ("squeeze2", "measure_joint")


def _build_element(keyword: str, pos: list[str], values: dict[str, float]) -> Element:
    if keyword == "squeeze2":
        return Squeeze2(pos[0], pos[1], values["gain"])
    if keyword == "loss":
        return Loss(pos[0], values["t"])
    if keyword == "mix":
        return Mix(pos[0], values["v"], values["eps"], values.get("anc_var"))
    if keyword == "measure":
        return MeasureSingle(pos[0], values["phase"])
    return MeasureJoint(
        pos[0], pos[1], values["phase_a"], values["phase_b"], int(values["sign"])
    )


def parse(text: str) -> ParseResult:
    """Parse circuit text, collecting every diagnostic before giving up."""
    diags: list[Diagnostic] = []
    modes: list[ModeLabel] = []
    declared: set[str] = set()
    elements: list[Element] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stmt = raw.split("#", 1)[0].strip()
        if not stmt:
            continue
        tokens = stmt.split()
        keyword, args = tokens[0], tokens[1:]

        if keyword == "mode":
            if len(args) != 1 or "=" in args[0]:
                diags.append(
                    Diagnostic(SYNTAX, lineno, "mode expects exactly one name")
                )
                continue
            name = args[0]
            if not _NAME_RE.match(name):
                diags.append(
                    Diagnostic(SYNTAX, lineno, f"invalid mode name {name!r}")
                )
                continue
            if name in declared:
                diags.append(
                    Diagnostic(
                        DUPLICATE_MODE, lineno, f"mode {name!r} already declared"
                    )
                )
                continue
            declared.add(name)
            modes.append(ModeLabel(name, len(modes)))
            continue

        if keyword not in _STATEMENTS:
            diags.append(
                Diagnostic(UNKNOWN_KEYWORD, lineno, f"unknown keyword {keyword!r}")
            )
            continue

        n_pos, required, optional = _STATEMENTS[keyword]
        pos = [tok for tok in args if "=" not in tok]
        pairs = [tok for tok in args if "=" in tok]
        ok = True

        if len(pos) != n_pos:
            diags.append(
                Diagnostic(
                    SYNTAX,
                    lineno,
                    f"{keyword} expects {n_pos} mode name(s), got {len(pos)}",
                )
            )
            ok = False

        kv: dict[str, str] = {}
        for item in pairs:
            key, _, value_text = item.partition("=")
            if key in kv:
                diags.append(
                    Diagnostic(SYNTAX, lineno, f"duplicate key {key!r}")
                )
                ok = False
            elif key not in required and key not in optional:
                diags.append(
                    Diagnostic(SYNTAX, lineno, f"{keyword} does not take key {key!r}")
                )
                ok = False
            else:
                kv[key] = value_text

        missing = [key for key in required if key not in kv]
        if missing:
            diags.append(
                Diagnostic(
                    SYNTAX, lineno, f"{keyword} missing key(s): {', '.join(missing)}"
                )
            )
            ok = False

        for name in pos:
            if name not in declared:
                diags.append(
                    Diagnostic(
                        UNDECLARED_MODE, lineno, f"mode {name!r} used before declaration"
                    )
                )
                ok = False

        if keyword in _PAIRED and len(pos) == 2 and pos[0] == pos[1]:
            diags.append(
                Diagnostic(SYNTAX, lineno, f"{keyword} needs two distinct modes")
            )
            ok = False

        values: dict[str, float] = {}
        for key, value_text in kv.items():
            if key == "sign":
                if value_text == "+":
                    values["sign"] = 1.0
                elif value_text == "-":
                    values["sign"] = -1.0
                else:
                    diags.append(
                        Diagnostic(
                            SYNTAX, lineno, f"sign must be + or -, got {value_text!r}"
                        )
                    )
                    ok = False
                continue
            if not _FLOAT_RE.match(value_text):
                diags.append(
                    Diagnostic(
                        SYNTAX,
                        lineno,
                        f"{key} must be a decimal number, got {value_text!r}",
                    )
                )
                ok = False
                continue
            value = float(value_text)
            rule = _VALUE_RULES.get((keyword, key))
            if rule is not None and not rule[0](value):
                diags.append(
                    Diagnostic(OUT_OF_RANGE, lineno, f"{key}={value_text} {rule[1]}")
                )
                ok = False
                continue
            values[key] = value

        if ok:
            elements.append(_build_element(keyword, pos, values))

    if not any(isinstance(e, (MeasureSingle, MeasureJoint)) for e in elements):
        diags.append(
            Diagnostic(NO_MEASURE, 0, "circuit contains no measure statement")
        )

    if diags:
        return ParseResult(None, tuple(diags))
    return ParseResult(CircuitSpec(tuple(modes), tuple(elements)), ())


def _format_float(value: float) -> str:
    # repr of a float is the shortest string that reparses to the same
    # bits, which keeps render -> parse an exact round trip.
    return repr(value)


def render_element(e: Element) -> str:
    """Canonical single-statement text for one element."""
    if isinstance(e, Squeeze2):
        return f"squeeze2 {e.mode_a} {e.mode_b} gain={_format_float(e.gain)}"
    if isinstance(e, Loss):
        return f"loss {e.mode} t={_format_float(e.t)}"
    if isinstance(e, Mix):
        line = f"mix {e.mode} v={_format_float(e.v)} eps={_format_float(e.eps)}"
        if e.anc_var is not None:
            line += f" anc_var={_format_float(e.anc_var)}"
        return line
    if isinstance(e, MeasureSingle):
        return f"measure {e.mode} phase={_format_float(e.phase)}"
    sign_text = "+" if e.sign > 0 else "-"
    return (
        f"measure_joint {e.mode_a} {e.mode_b} "
        f"phase_a={_format_float(e.phase_a)} "
        f"phase_b={_format_float(e.phase_b)} sign={sign_text}"
    )


def render(spec: CircuitSpec) -> str:
    """Canonical text for a circuit; reparsing reproduces ``spec`` exactly."""
    lines = [f"mode {m.name}" for m in spec.modes]
    lines.extend(render_element(e) for e in spec.elements)
    return "\n".join(lines) + "\n"


def evaluate(spec: CircuitSpec) -> list[float]:
    """Run the pipeline on vacuum; one variance per measure statement,
    in statement order, shot-noise units."""
    index = {m.name: m.index for m in spec.modes}

    # Quadrature each mode is eventually read out in; a mix element
    # matches its thermal ancilla to the signal variance in that
    # quadrature.  Modes never measured default to phase 0.
    read_phase: dict[str, float] = {}
    for e in spec.elements:
        if isinstance(e, MeasureSingle):
            read_phase.setdefault(e.mode, e.phase)
        elif isinstance(e, MeasureJoint):
            read_phase.setdefault(e.mode_a, e.phase_a)
            read_phase.setdefault(e.mode_b, e.phase_b)

    state = vacuum(len(spec.modes))
    out: list[float] = []
    for e in spec.elements:
        if isinstance(e, Squeeze2):
            state = apply_two_mode_squeeze(
                state, index[e.mode_a], index[e.mode_b], e.gain
            )
        elif isinstance(e, Loss):
            state = apply_loss(state, index[e.mode], e.t)
        elif isinstance(e, Mix):
            anc = e.anc_var
            if anc is None:
                anc = quadrature_variance(
                    state, index[e.mode], read_phase.get(e.mode, 0.0)
                )
                anc = max(anc, 1.0)  # guard sub-vacuum rounding fuzz
            state = apply_visibility_mixer(state, index[e.mode], e.v, e.eps, anc)
        elif isinstance(e, MeasureSingle):
            out.append(quadrature_variance(state, index[e.mode], e.phase))
        else:
            out.append(
                joint_quadrature_variance(
                    state,
                    index[e.mode_a],
                    e.phase_a,
                    index[e.mode_b],
                    e.phase_b,
                    e.sign,
                )
            )
    return out


_OVERRIDE_KINDS: dict[str, type] = {
    "squeeze2": Squeeze2,
    "loss": Loss,
    "mix": Mix,
    "measure": MeasureSingle,
    "measure_joint": MeasureJoint,
}


def _element_modes(element: Element) -> tuple[str, ...]:
    if isinstance(element, (Squeeze2, MeasureJoint)):
        return (element.mode_a, element.mode_b)
    return (element.mode,)


def apply_overrides(spec: CircuitSpec, settings: list[str]) -> CircuitSpec:
    """Rewrite element parameters without editing the circuit file.

    Each setting is ``kind[@modes].key=value``, e.g. ``squeeze2.gain=2.5``
    or ``loss@p.t=0.8``; when ``@modes`` is omitted every element of that
    kind is updated.  Unmatched selectors and out-of-range values raise
    ``ValueError``.
    """
    elements = list(spec.elements)
    for setting in settings:
        selector, eq, value_text = setting.partition("=")
        if not eq or not value_text:
            raise ValueError(f"override {setting!r} must look like selector=value")
        head, dot, key = selector.rpartition(".")
        if not dot:
            raise ValueError(
                f"override selector {selector!r} must look like kind[@modes].key"
            )
        kind, at, modes_text = head.partition("@")
        wanted = tuple(modes_text.split(",")) if at else None
        cls = _OVERRIDE_KINDS.get(kind)
        if cls is None:
            raise ValueError(f"unknown element kind {kind!r} in override {setting!r}")

        if key == "sign":
            if cls is not MeasureJoint:
                raise ValueError(f"{kind} does not take key {key!r}")
            if value_text == "+":
                new_value: float | int = 1
            elif value_text == "-":
                new_value = -1
            else:
                raise ValueError(f"sign must be + or -, got {value_text!r}")
        else:
            if key not in cls.__dataclass_fields__ or key.startswith("mode"):
                raise ValueError(f"{kind} does not take key {key!r}")
            if not _FLOAT_RE.match(value_text):
                raise ValueError(f"{key} must be a decimal number, got {value_text!r}")
            new_value = float(value_text)
            rule = _VALUE_RULES.get((kind, key))
            if rule is not None and not rule[0](new_value):
                raise ValueError(f"{key}={value_text} {rule[1]}")

        matched = False
        for i, element in enumerate(elements):
            if not isinstance(element, cls):
                continue
            if wanted is not None and _element_modes(element) != wanted:
                continue
            elements[i] = replace(element, **{key: new_value})
            matched = True
        if not matched:
            raise ValueError(f"override {setting!r} matches no element")

    return CircuitSpec(spec.modes, tuple(elements))
