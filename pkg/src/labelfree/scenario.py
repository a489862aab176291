"""Scenario files: a line-oriented ``[section]`` / ``key = value`` format.

See ``docs/scenario_format.md`` for the grammar. :func:`parse` builds a
:class:`Scenario` and type-checks every reference and task parameter;
:func:`serialize` writes it back so that ``parse(serialize(s)) == s``.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass, field

from .errors import LabelFreeError

# (label, amplitude) pairs
AmpMap = tuple[tuple[str, complex], ...]

STATE_KINDS = ("terms", "spes", "naive_w", "bell", "psi")
TASK_KINDS = ("amp", "norm", "trace", "entropy", "spes", "slocc", "bell", "verify")

_STATE_KEYS = {
    "terms": {"term"},
    "spes": {"modes", "spins"},
    "naive_w": {"modes"},
    "bell": {"modes", "spins", "alpha", "beta"},
    "psi": {"modes", "spins", "alpha", "beta"},
}
# key -> (type, required)
_TASK_PARAMS: dict[str, dict[str, tuple[str, bool]]] = {
    "amp": {"bra": ("state", True), "ket": ("state", True)},
    "norm": {"state": ("state", True)},
    "trace": {"state": ("state", True), "m": ("int", False), "over": ("modes", False)},
    "entropy": {"state": ("state", True), "m": ("int", False), "over": ("modes", False)},
    "spes": {"state": ("state", True)},
    "slocc": {"state": ("state", True), "left": ("region", True), "right": ("region", True)},
    "bell": {
        "state": ("state", True),
        "left": ("region", True),
        "right": ("region", True),
        "samples": ("int", False),
        "seed": ("int", False),
    },
    "verify": {"levels": ("int", False), "seed": ("int", False)},
}


class ScenarioError(LabelFreeError):
    """Malformed or inconsistent scenario; carries the 1-based position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = "" if line is None else f"line {line}, column {column or 1}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class SingleDef:
    spatial: str | AmpMap
    spin: str | AmpMap


@dataclass(frozen=True)
class StateDef:
    kind: str
    terms: tuple[tuple[complex, tuple[str, ...]], ...] = ()
    modes: tuple[str, ...] = ()
    spins: tuple[str, ...] = ()
    alpha: complex = 1 + 0j
    beta: complex = 1 + 0j


@dataclass(frozen=True)
class TaskDef:
    kind: str
    name: str
    params: tuple[tuple[str, object], ...] = ()

    def get(self, key: str, default=None):
        return dict(self.params).get(key, default)


@dataclass(frozen=True)
class Scenario:
    statistics: str
    modes: tuple[str, ...]
    spins: tuple[str, ...] = ("↑", "↓")
    spatial: tuple[tuple[str, AmpMap], ...] = ()
    single: tuple[tuple[str, SingleDef], ...] = ()
    states: tuple[tuple[str, StateDef], ...] = ()
    tasks: tuple[TaskDef, ...] = field(default=())

    @property
    def eta(self) -> int:
        return 1 if self.statistics == "boson" else -1


# --- complex literals ----------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCS = {"sqrt": lambda z: complex(z) ** 0.5, "exp": lambda z: complex(math.e) ** complex(z)}
_CONSTS = {"pi": math.pi, "i": 1j, "j": 1j}
_IMAG_SUFFIX = re.compile(r"(?<![\w.])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i\b")


def parse_complex(text: str) -> complex:
    """``a+bi`` literals and small arithmetic (``1/sqrt(2)``, ``0.6*i``, ``pi``)."""
    src = _IMAG_SUFFIX.sub(r"\1j", text.strip())
    try:
        tree = ast.parse(src, mode="eval")
        value = _eval(tree.body)
    except ScenarioError:
        raise
    except (SyntaxError, ZeroDivisionError, OverflowError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad complex literal {text.strip()!r} ({exc.__class__.__name__})") from None
    return complex(value)


def _eval(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval(node.operand)
        return v if isinstance(node.op, ast.UAdd) else -v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.Name) and node.id in _CONSTS:
        return _CONSTS[node.id]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise ScenarioError(f"unsupported expression element {ast.dump(node)[:40]}")


def format_complex(z: complex) -> str:
    """Round-trip text for a complex number (shortest repr of each part)."""
    z = complex(z)
    im = z.imag
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{z.real!r}{sign}{abs(im)!r}i"


# --- parsing -------------------------------------------------------------------

_SECTION = re.compile(r"^\[\s*([A-Za-z_]+)(?:\s+([^\]\s]+))?\s*\]$")
_NAME = re.compile(r"^[A-Za-z_][\w']*$")


@dataclass
class _Line:
    no: int
    key: str
    value: str
    col: int  # column of the value


def _strip_comment(raw: str) -> str:
    pos = raw.find("#")
    return raw if pos < 0 else raw[:pos]


def _split_list(text: str, ln: _Line) -> tuple[str, ...]:
    items = tuple(x.strip() for x in text.split(","))
    if not items or any(not x for x in items):
        raise ScenarioError(f"empty item in list {text!r}", ln.no, ln.col)
    return items


def _amp_map(text: str, ln: _Line) -> AmpMap:
    out = []
    for item in text.split(","):
        if ":" not in item:
            raise ScenarioError(f"expected 'label: amplitude' in {item.strip()!r}", ln.no, ln.col)
        label, amp = item.split(":", 1)
        try:
            out.append((label.strip(), parse_complex(amp)))
        except ScenarioError as exc:
            raise ScenarioError(str(exc), ln.no, ln.col) from None
    return tuple(out)


def _ref_or_map(text: str, ln: _Line) -> str | AmpMap:
    text = text.strip()
    return _amp_map(text, ln) if ":" in text else text


def _int(text: str, ln: _Line) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScenarioError(f"expected an integer, got {text!r}", ln.no, ln.col) from None


def parse(text: str) -> Scenario:
    """Parse scenario text; raises :class:`ScenarioError` with line/column."""
    sections: list[tuple[str, str | None, int, list[_Line]]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            m = _SECTION.match(stripped)
            if not m:
                raise ScenarioError(f"malformed section header {stripped!r}", no, line.index("[") + 1)
            sections.append((m.group(1).lower(), m.group(2), no, []))
            continue
        if "=" not in line:
            raise ScenarioError("expected 'key = value'", no, len(line) - len(line.lstrip()) + 1)
        if not sections:
            raise ScenarioError("key outside of any section", no, 1)
        key, value = line.split("=", 1)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        sections[-1][3].append(_Line(no, key.strip().lower(), value.strip(), col))
    return _build(sections)


def _build(sections) -> Scenario:
    system = [s for s in sections if s[0] == "system"]
    if len(system) != 1:
        raise ScenarioError("exactly one [system] section is required", system[1][2] if system else None, 1)
    sysd = _system(system[0])
    spatial: dict[str, AmpMap] = {}
    single: dict[str, SingleDef] = {}
    states: dict[str, StateDef] = {}
    tasks: list[TaskDef] = []
    for kind, arg, no, lines in sections:
        if kind == "system":
            continue
        if kind == "spatial":
            for ln in lines:
                _new_name(ln.key, spatial, ln)
                spatial[ln.key] = _amp_map(ln.value, ln)
        elif kind == "single":
            for ln in lines:
                _new_name(ln.key, single, ln)
                if "|" not in ln.value:
                    raise ScenarioError("single state needs 'spatial | spin'", ln.no, ln.col)
                sp, spin = ln.value.split("|", 1)
                single[ln.key] = SingleDef(_ref_or_map(sp, ln), _ref_or_map(spin, ln))
        elif kind == "state":
            if arg is None:
                raise ScenarioError("[state] needs a name: [state NAME]", no, 1)
            if arg in states:
                raise ScenarioError(f"state {arg!r} defined twice", no, 1)
            states[arg] = _state(lines, no)
        elif kind == "task":
            tasks.append(_task(lines, no, arg or f"task{len(tasks) + 1}"))
        else:
            raise ScenarioError(f"unknown section [{kind}]", no, 1)
    sc = Scenario(
        sysd["statistics"],
        sysd["modes"],
        sysd["spins"],
        tuple(spatial.items()),
        tuple(single.items()),
        tuple(states.items()),
        tuple(tasks),
    )
    check(sc)
    return sc


def _new_name(name: str, table: dict, ln: _Line) -> None:
    if not _NAME.match(name):
        raise ScenarioError(f"invalid name {name!r}", ln.no, 1)
    if name in table:
        raise ScenarioError(f"{name!r} defined twice", ln.no, 1)


def _system(section) -> dict:
    _, _, no, lines = section
    out = {"spins": ("↑", "↓")}
    for ln in lines:
        if ln.key == "statistics":
            v = ln.value.lower()
            if v not in ("boson", "fermion"):
                raise ScenarioError(f"statistics must be boson or fermion, got {ln.value!r}", ln.no, ln.col)
            out["statistics"] = v
        elif ln.key in ("modes", "spins"):
            out[ln.key] = _split_list(ln.value, ln)
        else:
            raise ScenarioError(f"unknown [system] key {ln.key!r}", ln.no, 1)
    for key in ("statistics", "modes"):
        if key not in out:
            raise ScenarioError(f"[system] is missing {key!r}", no, 1)
    return out


def _state(lines: list[_Line], no: int) -> StateDef:
    kinds = [ln for ln in lines if ln.key == "kind"]
    if len(kinds) != 1:
        raise ScenarioError("state needs exactly one 'kind'", no, 1)
    kind = kinds[0].value
    if kind not in STATE_KINDS:
        raise ScenarioError(f"unknown state kind {kind!r}; expected one of {STATE_KINDS}", kinds[0].no, kinds[0].col)
    fields: dict = {"kind": kind}
    terms = []
    for ln in lines:
        if ln.key == "kind":
            continue
        if ln.key not in _STATE_KEYS[kind]:
            raise ScenarioError(f"key {ln.key!r} not allowed for state kind {kind!r}", ln.no, 1)
        if ln.key == "term":
            if ":" not in ln.value:
                raise ScenarioError("term needs 'coefficient : slot, slot, ...'", ln.no, ln.col)
            coeff, slots = ln.value.split(":", 1)
            try:
                c = parse_complex(coeff)
            except ScenarioError as exc:
                raise ScenarioError(str(exc), ln.no, ln.col) from None
            terms.append((c, _split_list(slots, ln)))
        elif ln.key in ("modes", "spins"):
            fields[ln.key] = _split_list(ln.value, ln)
        else:
            try:
                fields[ln.key] = parse_complex(ln.value)
            except ScenarioError as exc:
                raise ScenarioError(str(exc), ln.no, ln.col) from None
    if kind == "terms":
        if not terms:
            raise ScenarioError("terms state needs at least one 'term'", no, 1)
        fields["terms"] = tuple(terms)
    for key in _STATE_KEYS[kind] - {"term", "alpha", "beta"}:
        if key not in fields:
            raise ScenarioError(f"state kind {kind!r} needs {key!r}", no, 1)
    return StateDef(**fields)


def _task(lines: list[_Line], no: int, name: str) -> TaskDef:
    kinds = [ln for ln in lines if ln.key == "kind"]
    if len(kinds) != 1:
        raise ScenarioError("task needs exactly one 'kind'", no, 1)
    kind = kinds[0].value
    if kind not in TASK_KINDS:
        raise ScenarioError(f"unknown task kind {kind!r}; expected one of {TASK_KINDS}", kinds[0].no, kinds[0].col)
    schema = _TASK_PARAMS[kind]
    params = {}
    for ln in lines:
        if ln.key == "kind":
            continue
        if ln.key not in schema:
            raise ScenarioError(f"parameter {ln.key!r} not allowed for task {kind!r}", ln.no, 1)
        if ln.key in params:
            raise ScenarioError(f"parameter {ln.key!r} given twice", ln.no, 1)
        typ = schema[ln.key][0]
        if typ == "int":
            params[ln.key] = _int(ln.value, ln)
        elif typ == "modes":
            params[ln.key] = "*" if ln.value == "*" else _split_list(ln.value, ln)
        else:
            params[ln.key] = ln.value
    for key, (_, required) in schema.items():
        if required and key not in params:
            raise ScenarioError(f"task {kind!r} needs parameter {key!r}", no, 1)
    return TaskDef(kind, name, tuple(params.items()))


# --- semantic check --------------------------------------------------------------


def check(sc: Scenario) -> None:
    """Every referenced name must exist and every label must be declared."""
    spatial = dict(sc.spatial)
    single = dict(sc.single)
    states = dict(sc.states)
    if len(set(sc.modes)) != len(sc.modes) or len(set(sc.spins)) != len(sc.spins):
        raise ScenarioError("duplicate mode or spin labels in [system]")

    def spatial_ok(ref, where):
        if isinstance(ref, str):
            if ref not in spatial and ref not in sc.modes:
                raise ScenarioError(f"{where}: undefined spatial state or mode {ref!r}")
        else:
            for label, _ in ref:
                if label not in sc.modes:
                    raise ScenarioError(f"{where}: unknown mode {label!r}")

    def spin_ok(ref, where):
        labels = [ref] if isinstance(ref, str) else [lab for lab, _ in ref]
        for label in labels:
            if label not in sc.spins:
                raise ScenarioError(f"{where}: unknown spin {label!r}")

    for name, amp in sc.spatial:
        spatial_ok(amp, f"spatial {name!r}")
    for name, sd in sc.single:
        spatial_ok(sd.spatial, f"single {name!r}")
        spin_ok(sd.spin, f"single {name!r}")
    for name, st in sc.states:
        where = f"state {name!r}"
        n_slots = {len(slots) for _, slots in st.terms}
        if len(n_slots) > 1:
            raise ScenarioError(f"{where}: terms have different particle numbers")
        for _, slots in st.terms:
            for s in slots:
                if s not in single:
                    raise ScenarioError(f"{where}: undefined single-particle state {s!r}")
        for m in st.modes:
            spatial_ok(m, where)
        for s in st.spins:
            spin_ok(s, where)
        if st.kind == "spes" and len(st.spins) != len(st.modes):
            raise ScenarioError(f"{where}: {len(st.modes)} modes but {len(st.spins)} spins")
        if st.kind in ("bell", "psi") and (len(st.modes) != 2 or len(st.spins) != 2):
            raise ScenarioError(f"{where}: {st.kind} needs two modes and two spins")
    for t in sc.tasks:
        where = f"task {t.name!r}"
        for key, (typ, _) in _TASK_PARAMS[t.kind].items():
            v = t.get(key)
            if v is None:
                continue
            if typ == "state" and v not in states:
                raise ScenarioError(f"{where}: undefined state {v!r}")
            if typ == "region":
                spatial_ok(v, where)
            if typ == "modes" and v != "*":
                for m in v:
                    if m not in sc.modes:
                        raise ScenarioError(f"{where}: unknown mode {m!r}")
            if typ == "int" and key in ("m", "levels", "samples") and v < (0 if key == "samples" else 1):
                raise ScenarioError(f"{where}: {key} out of range ({v})")
        if t.kind == "spes" and states[t.get("state")].kind != "spes":
            raise ScenarioError(f"{where}: state {t.get('state')!r} is not a spes state")


# --- serialization -----------------------------------------------------------------


def _fmt_map(amp: AmpMap) -> str:
    return ", ".join(f"{label}: {format_complex(z)}" for label, z in amp)


def _fmt_ref(ref) -> str:
    return ref if isinstance(ref, str) else _fmt_map(ref)


def serialize(sc: Scenario) -> str:
    out = ["[system]", f"statistics = {sc.statistics}", f"modes = {', '.join(sc.modes)}", f"spins = {', '.join(sc.spins)}"]
    if sc.spatial:
        out += ["", "[spatial]"] + [f"{n} = {_fmt_map(a)}" for n, a in sc.spatial]
    if sc.single:
        out += ["", "[single]"] + [f"{n} = {_fmt_ref(d.spatial)} | {_fmt_ref(d.spin)}" for n, d in sc.single]
    for name, st in sc.states:
        out += ["", f"[state {name}]", f"kind = {st.kind}"]
        out += [f"term = {format_complex(c)} : {', '.join(slots)}" for c, slots in st.terms]
        if st.modes:
            out.append(f"modes = {', '.join(st.modes)}")
        if st.spins:
            out.append(f"spins = {', '.join(st.spins)}")
        if st.kind in ("bell", "psi"):
            out += [f"alpha = {format_complex(st.alpha)}", f"beta = {format_complex(st.beta)}"]
    for t in sc.tasks:
        out += ["", f"[task {t.name}]", f"kind = {t.kind}"]
        for key, v in t.params:
            text = ", ".join(v) if isinstance(v, tuple) else str(v)
            out.append(f"{key} = {text}")
    return "\n".join(out) + "\n"
