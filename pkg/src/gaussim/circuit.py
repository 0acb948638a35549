"""Circuit DSL: parsing, validation, and trajectory execution.

Programs are line-oriented UTF-8 text: a ``modes N`` header, then one
instruction per line.  ``#`` starts a comment; blank lines are ignored.

    modes 2
    init vacuum
    squeeze 0 r=0.5
    bs 0 1 theta=0.7853981633974483
    homodyne 1 theta=0.0 -> m
    feedforward gain=-0.5 from=m to=0 q
    output state

Angles are radians and all parameters are dimensionless quadrature units.
Measurements and ``discard`` remove their mode: later instructions use the
shrunken, re-numbered indexing.
"""

import json
import re
from dataclasses import dataclass, field

import numpy as np

from . import maps, states
from .errors import ExecutionError, ParseError
from .maps import GaussianMap
from .measure import Feedforward, MeasurementRecord, RandomSource, discard_measurement
from .measure import heterodyne as run_heterodyne
from .measure import homodyne as run_homodyne

# Hard cap on the header mode count; keeps pathological inputs from
# allocating enormous matrices before validation can reject them.
MAX_MODES = 256

# Magnitude bound applied to every numeric parameter during validation.
PARAM_BOUND = 1e6

# Squeeze parameters beyond this overflow double precision once squared.
SQUEEZE_BOUND = 50.0


# ---------------------------------------------------------------------------
# Instructions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prepare:
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Gate:
    name: str
    modes: tuple
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RawMap:
    map: GaussianMap


@dataclass(frozen=True)
class Homodyne:
    mode: int
    theta: float
    label: str


@dataclass(frozen=True)
class Heterodyne:
    mode: int
    label: str


@dataclass(frozen=True)
class Discard:
    mode: int


@dataclass(frozen=True)
class Output:
    what: str
    point: tuple = None


@dataclass(frozen=True)
class Circuit:
    n: int
    instructions: tuple


@dataclass(frozen=True)
class Diagnostic:
    """A validation finding; ``index`` is the offending instruction (None = header)."""

    index: object
    message: str


@dataclass(frozen=True)
class SimulationResult:
    """Outcome of one trajectory.

    ``log`` holds (instruction index, post-instruction resource count)
    pairs, one per instruction, recording that the bookkeeping stays
    polynomial in the live mode count.  ``outputs`` holds the payloads of
    ``output`` instructions in order.
    """

    final_state: states.GaussianState
    record: MeasurementRecord
    log: tuple
    outputs: tuple


PREPARE_KINDS = {
    "vacuum": (),
    "coherent": ("xi",),
    "squeezed": ("r",),
    "thermal": ("nbar",),
    "epr": ("r",),
}

GATE_SIGNATURES = {
    "disp": (1, ("dq", "dp"), ()),
    "phase": (1, ("theta",), ("theta",)),
    "squeeze": (1, ("r",), ("r",)),
    "bs": (2, ("theta",), ("theta",)),
    "tms": (2, ("r",), ("r",)),
    "loss": (1, ("eta",), ("eta",)),
    "amp": (1, ("g",), ("g",)),
    "noise": (1, ("nbar",), ("nbar",)),
}

_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")
_TOKEN_RE = re.compile(r"\S+")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Line:
    """Tokenized source line remembering 1-based column positions."""

    def __init__(self, text, number):
        self.number = number
        self.tokens = []
        self.cols = []
        body = text.split("#", 1)[0]
        for match in _TOKEN_RE.finditer(body):
            self.tokens.append(match.group())
            self.cols.append(match.start() + 1)

    def error(self, i, message):
        col = self.cols[i] if i < len(self.cols) else (
            self.cols[-1] + len(self.tokens[-1]) if self.tokens else 1
        )
        return ParseError(message, self.number, col)


def _parse_int(line, i, what="integer"):
    try:
        return int(line.tokens[i])
    except ValueError:
        raise ParseError(
            f"malformed {what} {line.tokens[i]!r}", line.number, line.cols[i]
        ) from None


def _parse_float_text(text, line, col):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"malformed number {text!r}", line.number, col) from None
    if not np.isfinite(value):
        raise ParseError(f"number {text!r} is not finite", line.number, col)
    return value


def _parse_param(line, i, allowed):
    """Parse a NAME=VALUE token; VALUE is a float or a comma list of floats."""
    token, col = line.tokens[i], line.cols[i]
    if "=" not in token:
        raise line.error(i, f"expected NAME=VALUE parameter, got {token!r}")
    name, _, value = token.partition("=")
    if name not in allowed:
        raise line.error(i, f"unknown parameter {name!r} (expected one of {sorted(allowed)})")
    vcol = col + len(name) + 1
    if "," in value:
        parts = value.split(",")
        out, offset = [], 0
        for part in parts:
            out.append(_parse_float_text(part, line, vcol + offset))
            offset += len(part) + 1
        return name, tuple(out)
    return name, _parse_float_text(value, line, vcol)


def _parse_params(line, start, allowed):
    params = {}
    for i in range(start, len(line.tokens)):
        name, value = _parse_param(line, i, allowed)
        if name in params:
            raise line.error(i, f"duplicate parameter {name!r}")
        params[name] = value
    return params


def _parse_label(line, i):
    if i >= len(line.tokens):
        raise line.error(i, "expected a label")
    token = line.tokens[i]
    if not _LABEL_RE.match(token):
        raise line.error(i, f"malformed label {token!r}")
    return token


def _expect(line, i, literal):
    if i >= len(line.tokens) or line.tokens[i] != literal:
        got = line.tokens[i] if i < len(line.tokens) else "end of line"
        raise line.error(i, f"expected {literal!r}, got {got!r}")


def _parse_instruction(line):
    op = line.tokens[0]
    if op == "init":
        if len(line.tokens) < 2:
            raise line.error(1, "init requires a state kind")
        kind = line.tokens[1]
        if kind not in PREPARE_KINDS:
            raise line.error(1, f"unknown state kind {kind!r}")
        params = _parse_params(line, 2, set(PREPARE_KINDS[kind]))
        return Prepare(kind, params)
    if op in GATE_SIGNATURES:
        arity, allowed, _ = GATE_SIGNATURES[op]
        if len(line.tokens) < 1 + arity:
            raise line.error(len(line.tokens), f"{op} requires {arity} mode argument(s)")
        modes = tuple(_parse_int(line, 1 + k, "mode index") for k in range(arity))
        params = _parse_params(line, 1 + arity, set(allowed))
        return Gate(op, modes, params)
    if op == "map":
        text = " ".join(line.tokens[1:])
        try:
            data = json.loads(text)
            return RawMap(GaussianMap.from_dict(data))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise line.error(1, f"malformed map payload: {exc}") from None
    if op == "homodyne":
        if len(line.tokens) < 2:
            raise line.error(1, "homodyne requires a mode index")
        mode = _parse_int(line, 1, "mode index")
        name, theta = _parse_param(line, 2, {"theta"})
        _expect(line, 3, "->")
        label = _parse_label(line, 4)
        if len(line.tokens) > 5:
            raise line.error(5, f"unexpected token {line.tokens[5]!r}")
        return Homodyne(mode, theta, label)
    if op == "heterodyne":
        if len(line.tokens) < 2:
            raise line.error(1, "heterodyne requires a mode index")
        mode = _parse_int(line, 1, "mode index")
        _expect(line, 2, "->")
        label = _parse_label(line, 3)
        if len(line.tokens) > 4:
            raise line.error(4, f"unexpected token {line.tokens[4]!r}")
        return Heterodyne(mode, label)
    if op == "discard":
        if len(line.tokens) < 2:
            raise line.error(1, "discard requires a mode index")
        mode = _parse_int(line, 1, "mode index")
        if len(line.tokens) > 2:
            raise line.error(2, f"unexpected token {line.tokens[2]!r}")
        return Discard(mode)
    if op == "feedforward":
        if len(line.tokens) < 5:
            raise line.error(len(line.tokens), "feedforward requires gain=, from=, to= and a quadrature")
        _, gain = _parse_param(line, 1, {"gain"})
        token = line.tokens[2]
        if not token.startswith("from="):
            raise line.error(2, f"expected from=LABEL, got {token!r}")
        source = token[len("from="):]
        if not _LABEL_RE.match(source):
            raise line.error(2, f"malformed label {source!r}")
        token = line.tokens[3]
        if not token.startswith("to="):
            raise line.error(3, f"expected to=MODE, got {token!r}")
        try:
            target = int(token[len("to="):])
        except ValueError:
            raise line.error(3, f"malformed mode index {token[3:]!r}") from None
        direction = line.tokens[4]
        if direction not in ("q", "p"):
            raise line.error(4, f"quadrature must be 'q' or 'p', got {direction!r}")
        if len(line.tokens) > 5:
            raise line.error(5, f"unexpected token {line.tokens[5]!r}")
        return Feedforward(gain, source, target, direction)
    if op == "output":
        if len(line.tokens) < 2:
            raise line.error(1, "output requires 'state' or 'wigner'")
        what = line.tokens[1]
        if what == "state":
            if len(line.tokens) > 2:
                raise line.error(2, f"unexpected token {line.tokens[2]!r}")
            return Output("state")
        if what == "wigner":
            point = tuple(
                _parse_float_text(line.tokens[i], line, line.cols[i])
                for i in range(2, len(line.tokens))
            )
            return Output("wigner", point)
        raise line.error(1, f"unknown output kind {what!r}")
    raise line.error(0, f"unknown instruction {op!r}")


def parse(text):
    """Parse circuit source into a :class:`Circuit`.

    Raises:
        ParseError: with the 1-based line and column of the offending token.
    """
    lines = [_Line(raw, i + 1) for i, raw in enumerate(text.splitlines())]
    lines = [ln for ln in lines if ln.tokens]
    if not lines:
        raise ParseError("empty program: expected a 'modes N' header", 1, 1)
    header = lines[0]
    if header.tokens[0] != "modes":
        # Parse the line anyway so malformed instructions get the most
        # specific error; a syntactically fine instruction means the header
        # itself is missing.
        _parse_instruction(header)
        raise header.error(0, "expected 'modes N' header before instructions")
    if len(header.tokens) < 2:
        raise header.error(1, "modes header requires a count")
    n = _parse_int(header, 1, "mode count")
    if len(header.tokens) > 2:
        raise header.error(2, f"unexpected token {header.tokens[2]!r}")
    instructions = tuple(_parse_instruction(ln) for ln in lines[1:])
    return Circuit(n, instructions)


# ---------------------------------------------------------------------------
# Renderer
# ---------------------------------------------------------------------------


def _fmt(value):
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    return repr(float(value))


def _render_params(params, order):
    parts = [f"{k}={_fmt(params[k])}" for k in order if k in params]
    parts += [f"{k}={_fmt(v)}" for k, v in sorted(params.items()) if k not in order]
    return parts


def render(circuit):
    """Render a circuit back to DSL text; parse(render(c)) == c."""
    out = [f"modes {circuit.n}"]
    for instr in circuit.instructions:
        if isinstance(instr, Prepare):
            parts = ["init", instr.kind] + _render_params(
                instr.params, PREPARE_KINDS[instr.kind]
            )
        elif isinstance(instr, Gate):
            order = GATE_SIGNATURES[instr.name][1]
            parts = [instr.name] + [str(m) for m in instr.modes]
            parts += _render_params(instr.params, order)
        elif isinstance(instr, RawMap):
            parts = ["map", json.dumps(instr.map.to_dict(), separators=(",", ":"))]
        elif isinstance(instr, Homodyne):
            parts = ["homodyne", str(instr.mode), f"theta={_fmt(instr.theta)}", "->", instr.label]
        elif isinstance(instr, Heterodyne):
            parts = ["heterodyne", str(instr.mode), "->", instr.label]
        elif isinstance(instr, Discard):
            parts = ["discard", str(instr.mode)]
        elif isinstance(instr, Feedforward):
            parts = [
                "feedforward",
                f"gain={_fmt(instr.gain)}",
                f"from={instr.source}",
                f"to={instr.target}",
                instr.direction,
            ]
        elif isinstance(instr, Output):
            parts = ["output", instr.what]
            if instr.what == "wigner":
                parts += [repr(float(v)) for v in instr.point]
        else:
            raise TypeError(f"unknown instruction {instr!r}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON form of a parsed circuit, for programmatic use
# ---------------------------------------------------------------------------


def circuit_to_dict(circuit):
    """JSON-ready dict form of a parsed circuit."""
    out = []
    for instr in circuit.instructions:
        if isinstance(instr, Prepare):
            out.append({"op": "init", "kind": instr.kind, "params": _params_out(instr.params)})
        elif isinstance(instr, Gate):
            out.append({
                "op": instr.name,
                "modes": list(instr.modes),
                "params": _params_out(instr.params),
            })
        elif isinstance(instr, RawMap):
            out.append({"op": "map", "map": instr.map.to_dict()})
        elif isinstance(instr, Homodyne):
            out.append({"op": "homodyne", "mode": instr.mode, "theta": instr.theta, "label": instr.label})
        elif isinstance(instr, Heterodyne):
            out.append({"op": "heterodyne", "mode": instr.mode, "label": instr.label})
        elif isinstance(instr, Discard):
            out.append({"op": "discard", "mode": instr.mode})
        elif isinstance(instr, Feedforward):
            out.append({
                "op": "feedforward",
                "gain": instr.gain,
                "from": instr.source,
                "to": instr.target,
                "direction": instr.direction,
            })
        elif isinstance(instr, Output):
            entry = {"op": "output", "what": instr.what}
            if instr.point is not None:
                entry["point"] = list(instr.point)
            out.append(entry)
    return {"modes": circuit.n, "instructions": out}


def _params_out(params):
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}


def _params_in(params):
    return {k: (tuple(v) if isinstance(v, list) else float(v)) for k, v in params.items()}


def circuit_from_dict(data):
    """Inverse of :func:`circuit_to_dict`."""
    instructions = []
    for entry in data["instructions"]:
        op = entry["op"]
        if op == "init":
            instructions.append(Prepare(entry["kind"], _params_in(entry.get("params", {}))))
        elif op in GATE_SIGNATURES:
            instructions.append(
                Gate(op, tuple(int(m) for m in entry["modes"]), _params_in(entry.get("params", {})))
            )
        elif op == "map":
            instructions.append(RawMap(GaussianMap.from_dict(entry["map"])))
        elif op == "homodyne":
            instructions.append(Homodyne(int(entry["mode"]), float(entry["theta"]), entry["label"]))
        elif op == "heterodyne":
            instructions.append(Heterodyne(int(entry["mode"]), entry["label"]))
        elif op == "discard":
            instructions.append(Discard(int(entry["mode"])))
        elif op == "feedforward":
            instructions.append(
                Feedforward(float(entry["gain"]), entry["from"], int(entry["to"]), entry["direction"])
            )
        elif op == "output":
            point = entry.get("point")
            instructions.append(Output(entry["what"], tuple(point) if point is not None else None))
        else:
            raise ValueError(f"unknown instruction op {op!r}")
    return Circuit(int(data["modes"]), tuple(instructions))


# ---------------------------------------------------------------------------
# Validator
# ---------------------------------------------------------------------------


def _check_range(diags, index, params, name, low, high, low_open=False):
    if name not in params:
        diags.append(Diagnostic(index, f"missing required parameter {name!r}"))
        return
    value = params[name]
    if isinstance(value, tuple):
        diags.append(Diagnostic(index, f"parameter {name!r} must be a single number"))
        return
    ok_low = value > low if low_open else value >= low
    if not (ok_low and value <= high):
        bracket = "(" if low_open else "["
        diags.append(
            Diagnostic(index, f"parameter {name}={value} outside {bracket}{low}, {high}]")
        )


def _check_optional(diags, index, params, name, bound=PARAM_BOUND):
    if name in params and not isinstance(params[name], tuple):
        if abs(params[name]) > bound:
            diags.append(Diagnostic(index, f"parameter {name}={params[name]} exceeds |{bound}|"))


def validate(circuit):
    """Statically check a circuit; returns a list of diagnostics (empty = valid).

    Checks mode indices against the live mode count (which shrinks after
    measurements), parameter presence and ranges, CP validity of raw maps,
    label uniqueness, and feedforward label resolution.
    """
    diags = []
    if circuit.n < 1:
        diags.append(Diagnostic(None, f"mode count must be positive, got {circuit.n}"))
        return diags
    if circuit.n > MAX_MODES:
        diags.append(Diagnostic(None, f"mode count {circuit.n} exceeds supported maximum {MAX_MODES}"))
        return diags
    count = circuit.n
    labels = set()
    for index, instr in enumerate(circuit.instructions):
        if isinstance(instr, Prepare):
            if index != 0:
                diags.append(Diagnostic(index, "init is only allowed as the first instruction"))
                continue
            if instr.kind == "coherent":
                xi = instr.params.get("xi")
                if xi is None:
                    diags.append(Diagnostic(index, "missing required parameter 'xi'"))
                else:
                    xi = (xi,) if not isinstance(xi, tuple) else xi
                    if len(xi) != 2 * count:
                        diags.append(Diagnostic(
                            index, f"coherent means need {2 * count} entries, got {len(xi)}"
                        ))
                    elif max(abs(v) for v in xi) > PARAM_BOUND:
                        diags.append(Diagnostic(index, f"means entries exceed |{PARAM_BOUND}|"))
            elif instr.kind == "squeezed":
                if count != 1:
                    diags.append(Diagnostic(index, "init squeezed requires exactly 1 mode"))
                _check_range(diags, index, instr.params, "r", -SQUEEZE_BOUND, SQUEEZE_BOUND)
            elif instr.kind == "thermal":
                if count != 1:
                    diags.append(Diagnostic(index, "init thermal requires exactly 1 mode"))
                _check_range(diags, index, instr.params, "nbar", 0.0, PARAM_BOUND)
            elif instr.kind == "epr":
                if count != 2:
                    diags.append(Diagnostic(index, "init epr requires exactly 2 modes"))
                _check_range(diags, index, instr.params, "r", -SQUEEZE_BOUND, SQUEEZE_BOUND)
            continue
        if count == 0 and not isinstance(instr, Output):
            diags.append(Diagnostic(index, "no modes remain"))
            continue
        if isinstance(instr, Gate):
            bad_mode = False
            for m in instr.modes:
                if not 0 <= m < count:
                    diags.append(Diagnostic(index, f"mode {m} out of range (current count {count})"))
                    bad_mode = True
            if len(set(instr.modes)) != len(instr.modes):
                diags.append(Diagnostic(index, f"modes must be distinct, got {instr.modes}"))
                bad_mode = True
            if bad_mode:
                continue
            if instr.name == "disp":
                _check_optional(diags, index, instr.params, "dq")
                _check_optional(diags, index, instr.params, "dp")
            elif instr.name in ("phase", "bs"):
                _check_range(diags, index, instr.params, "theta", -PARAM_BOUND, PARAM_BOUND)
            elif instr.name in ("squeeze", "tms"):
                _check_range(diags, index, instr.params, "r", -SQUEEZE_BOUND, SQUEEZE_BOUND)
            elif instr.name == "loss":
                _check_range(diags, index, instr.params, "eta", 0.0, 1.0, low_open=True)
            elif instr.name == "amp":
                _check_range(diags, index, instr.params, "g", 1.0, PARAM_BOUND)
            elif instr.name == "noise":
                _check_range(diags, index, instr.params, "nbar", 0.0, PARAM_BOUND)
        elif isinstance(instr, RawMap):
            if instr.map.n != count:
                diags.append(Diagnostic(
                    index, f"map acts on {instr.map.n} modes but current count is {count}"
                ))
                continue
            report = maps.validate_cp(instr.map)
            if not report:
                diags.append(Diagnostic(
                    index,
                    f"map is not completely positive: minimum eigenvalue "
                    f"{report.min_eigenvalue}",
                ))
        elif isinstance(instr, Homodyne):
            if not 0 <= instr.mode < count:
                diags.append(Diagnostic(index, f"mode {instr.mode} out of range (current count {count})"))
                continue
            if abs(instr.theta) > PARAM_BOUND:
                diags.append(Diagnostic(index, f"parameter theta={instr.theta} exceeds |{PARAM_BOUND}|"))
            if instr.label in labels:
                diags.append(Diagnostic(index, f"duplicate measurement label {instr.label!r}"))
            labels.add(instr.label)
            count -= 1
        elif isinstance(instr, Heterodyne):
            if not 0 <= instr.mode < count:
                diags.append(Diagnostic(index, f"mode {instr.mode} out of range (current count {count})"))
                continue
            for sub in (f"{instr.label}.q", f"{instr.label}.p"):
                if sub in labels:
                    diags.append(Diagnostic(index, f"duplicate measurement label {sub!r}"))
                labels.add(sub)
            count -= 1
        elif isinstance(instr, Discard):
            if not 0 <= instr.mode < count:
                diags.append(Diagnostic(index, f"mode {instr.mode} out of range (current count {count})"))
                continue
            count -= 1
        elif isinstance(instr, Feedforward):
            if instr.source not in labels:
                diags.append(Diagnostic(
                    index, f"feedforward source {instr.source!r} has no earlier measurement"
                ))
            if not 0 <= instr.target < count:
                diags.append(Diagnostic(index, f"mode {instr.target} out of range (current count {count})"))
            if abs(instr.gain) > PARAM_BOUND:
                diags.append(Diagnostic(index, f"parameter gain={instr.gain} exceeds |{PARAM_BOUND}|"))
        elif isinstance(instr, Output):
            if instr.what == "wigner":
                point = instr.point or ()
                if len(point) != 2 * count:
                    diags.append(Diagnostic(
                        index, f"wigner point needs {2 * count} coordinates, got {len(point)}"
                    ))
                elif point and max(abs(v) for v in point) > PARAM_BOUND:
                    diags.append(Diagnostic(index, f"point coordinates exceed |{PARAM_BOUND}|"))
    return diags


# ---------------------------------------------------------------------------
# Executor
# ---------------------------------------------------------------------------


def _prepare_state(n, instr):
    kind, params = instr.kind, instr.params
    if kind == "vacuum":
        return states.vacuum(n)
    if kind == "coherent":
        xi = params["xi"]
        xi = (xi,) if not isinstance(xi, tuple) else xi
        return states.coherent(n, np.asarray(xi))
    if kind == "squeezed":
        if n != 1:
            raise ValueError("init squeezed requires exactly 1 mode")
        return states.squeezed_vacuum(params["r"])
    if kind == "thermal":
        if n != 1:
            raise ValueError("init thermal requires exactly 1 mode")
        return states.thermal(params["nbar"])
    if kind == "epr":
        if n != 2:
            raise ValueError("init epr requires exactly 2 modes")
        return states.epr(params["r"])
    raise ValueError(f"unknown state kind {kind!r}")


def gate_map(n, instr):
    """Build the GaussianMap for a gate instruction at mode count ``n``."""
    name, params = instr.name, instr.params
    if name == "disp":
        alpha = np.zeros(2 * n)
        alpha[instr.modes[0]] = params.get("dq", 0.0)
        alpha[n + instr.modes[0]] = params.get("dp", 0.0)
        return maps.displacement(alpha)
    if name == "phase":
        return maps.phase_shift(n, instr.modes[0], params["theta"])
    if name == "squeeze":
        return maps.squeeze(n, instr.modes[0], params["r"])
    if name == "bs":
        return maps.beamsplitter(n, instr.modes[0], instr.modes[1], params["theta"])
    if name == "tms":
        return maps.two_mode_squeeze(n, instr.modes[0], instr.modes[1], params["r"])
    if name == "loss":
        return maps.loss(n, instr.modes[0], params["eta"])
    if name == "amp":
        return maps.amplifier(n, instr.modes[0], params["g"])
    if name == "noise":
        return maps.thermal_noise(n, instr.modes[0], params["nbar"])
    raise ValueError(f"unknown gate {name!r}")


def execute(circuit, rng):
    """Run one trajectory of a circuit.

    The circuit should validate cleanly first; execution wraps any failure
    in :class:`ExecutionError` carrying the instruction index.

    Args:
        circuit: parsed circuit.
        rng (RandomSource): source of measurement outcomes.

    Returns:
        SimulationResult: final state, measurement record, resource log,
        and output payloads.
    """
    state = None
    record = MeasurementRecord()
    log = []
    outputs = []
    for index, instr in enumerate(circuit.instructions):
        try:
            if isinstance(instr, Prepare):
                if index != 0:
                    raise ValueError("init is only allowed as the first instruction")
                state = _prepare_state(circuit.n, instr)
            else:
                if state is None:
                    state = states.vacuum(circuit.n)
                if isinstance(instr, Gate):
                    state = maps.apply(gate_map(state.n, instr), state)
                elif isinstance(instr, RawMap):
                    state = maps.apply(instr.map, state)
                elif isinstance(instr, Homodyne):
                    outcome, state = run_homodyne(state, instr.mode, instr.theta, rng)
                    record.add(instr.label, outcome)
                elif isinstance(instr, Heterodyne):
                    oq, op_, state = run_heterodyne(state, instr.mode, rng)
                    record.add(f"{instr.label}.q", oq)
                    record.add(f"{instr.label}.p", op_)
                elif isinstance(instr, Discard):
                    state = discard_measurement(state, instr.mode)
                elif isinstance(instr, Feedforward):
                    state = instr.apply(state, record)
                elif isinstance(instr, Output):
                    if instr.what == "state":
                        outputs.append({"index": index, "kind": "state", "value": state.to_dict()})
                    else:
                        value = states.wigner(state, np.asarray(instr.point))
                        outputs.append({"index": index, "kind": "wigner", "value": value})
                else:
                    raise TypeError(f"unknown instruction {instr!r}")
        except ExecutionError:
            raise
        except Exception as exc:
            raise ExecutionError(index, str(exc)) from exc
        if state is None:
            state = states.vacuum(circuit.n)
        log.append((index, states.resource_count(state).total))
    if state is None:
        state = states.vacuum(circuit.n)
    return SimulationResult(state, record, tuple(log), tuple(outputs))


@dataclass(frozen=True)
class LabelStats:
    """Summary statistics for one measurement label over many shots."""

    mean: float
    variance: float
    count: int


def sample(circuit, shots, seed):
    """Run ``shots`` independent trajectories with derived per-shot streams.

    Deterministic for fixed (seed, shots): shot ``i`` uses the child stream
    ``RandomSource(seed).child(i)``, so results do not depend on execution
    order and match a future parallel implementation shot for shot.

    Returns:
        tuple: (list of MeasurementRecord, dict label -> LabelStats) with
        labels in first-appearance order; variance is the unbiased sample
        variance (0.0 for a single shot).
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    root = RandomSource(seed)
    records = []
    values = {}
    for i in range(shots):
        result = execute(circuit, root.child(i))
        records.append(result.record)
        for label, value in result.record.entries:
            values.setdefault(label, []).append(value)
    summary = {}
    for label, vals in values.items():
        arr = np.asarray(vals)
        variance = float(np.var(arr, ddof=1)) if len(vals) > 1 else 0.0
        summary[label] = LabelStats(float(np.mean(arr)), variance, len(vals))
    return records, summary
