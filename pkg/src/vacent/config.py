"""Run configuration documents.

A config is a flat list of ``key = value`` lines plus optional ``sweep``
blocks; ``#`` starts a comment::

    scenario = a
    omega = 4.6
    lambda = 1.5
    t = 1
    sweep {
      param = separation
      from = 0
      to = 2.733
      steps = 200
    }
    out = fig2a_a.csv

A sweep block may also be written on one line,
``sweep { param = separation, from = 0, to = 2.733, steps = 200 }``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .scenarios import AcceleratedSpec, InertialSpec, SweepAxis

SCENARIOS = ("a", "b", "c", "d", "accelerated", "single-detector", "unruh-response")
PARAMS = ("omega", "lambda", "t", "separation", "T", "delay", "r", "Omega", "a")
SWEEP_KEYS = ("param", "from", "to", "steps")

_REQUIRED = {
    "a": {"omega", "lambda", "t"},
    "b": {"omega", "lambda", "t"},
    "c": {"omega", "lambda", "t"},
    "d": {"omega", "lambda", "t", "T"},
    "accelerated": {"lambda", "t"},
    "single-detector": {"omega", "lambda", "t"},
    "unruh-response": {"omega", "lambda", "t"},
}
_ALLOWED = {
    "a": {"omega", "lambda", "t", "separation"},
    "b": {"omega", "lambda", "t", "separation"},
    "c": {"omega", "lambda", "t", "separation"},
    "d": {"omega", "lambda", "t", "separation", "T"},
    "accelerated": {"omega", "lambda", "t", "delay", "r", "Omega", "a"},
    "single-detector": {"omega", "lambda", "t"},
    "unruh-response": {"omega", "lambda", "t", "r"},
}

_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_-]*)\s*=\s*(.*?)\s*$")


class ConfigError(ValueError):
    """Malformed or invalid configuration; ``key`` names the offender if known."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    params: dict[str, float]
    sweeps: tuple[SweepAxis, ...] = ()
    out: str | None = None
    format: str = "csv"
    paper_positions: bool = False

    def spec(self) -> InertialSpec | AcceleratedSpec:
        """Scenario spec for the inertial and accelerated pair scenarios."""
        p = {ax.param: ax.start for ax in self.sweeps}
        p.update(self.params)
        if self.scenario in ("a", "b", "c", "d"):
            return InertialSpec(
                self.scenario,
                p["omega"],
                p["lambda"],
                p["t"],
                p.get("separation", 0.0),
                p.get("T", 0.0),
                self.paper_positions,
            )
        if self.scenario == "accelerated":
            return AcceleratedSpec(
                p.get("omega", p.get("Omega")),
                p["lambda"],
                p["t"],
                r=p.get("r"),
                delay=p.get("delay"),
                Omega=p.get("Omega"),
                a=p.get("a"),
            )
        raise ConfigError(f"scenario {self.scenario!r} has no pair spec", "scenario")

    def to_text(self) -> str:
        """Canonical document; parsing it gives back an equal config."""
        lines = [f"scenario = {self.scenario}"]
        for key in PARAMS:
            if key in self.params:
                lines.append(f"{key} = {self.params[key]!r}")
        for ax in self.sweeps:
            lines.append(
                f"sweep {{ param = {ax.param}, from = {ax.start!r}, to = {ax.stop!r}, steps = {ax.steps} }}"
            )
        if self.out is not None:
            lines.append(f"out = {self.out}")
        return "\n".join(lines) + "\n"


def _number(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}", key) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite", key)
    return value


def _sweep_block(body: list[str], lineno: int) -> SweepAxis:
    entries: dict[str, str] = {}
    for item in body:
        m = _LINE.match(item)
        if not m:
            raise ConfigError(f"line {lineno}: malformed sweep entry {item!r}", "sweep")
        key, value = m.groups()
        if key not in SWEEP_KEYS:
            raise ConfigError(f"line {lineno}: unknown sweep key {key!r}", key)
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate sweep key {key!r}", key)
        entries[key] = value
    for key in SWEEP_KEYS:
        if key not in entries:
            raise ConfigError(f"sweep block at line {lineno} is missing {key!r}", key)
    try:
        steps = int(entries["steps"])
    except ValueError:
        raise ConfigError(f"steps: expected an integer, got {entries['steps']!r}", "steps") from None
    if steps < 2:
        raise ConfigError("steps: a sweep needs at least 2 steps", "steps")
    return SweepAxis(
        entries["param"],
        _number("from", entries["from"]),
        _number("to", entries["to"]),
        steps,
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config document.

    Raises:
        ConfigError: on syntax errors, unknown or duplicate keys, missing
            required keys, or inconsistent parameters.
    """
    raw: dict[str, str] = {}
    sweeps: list[SweepAxis] = []
    lines = text.splitlines()
    k = 0
    while k < len(lines):
        lineno = k + 1
        line = lines[k].split("#", 1)[0].strip()
        k += 1
        if not line:
            continue
        if line.startswith("sweep"):
            rest = line[len("sweep") :].strip()
            if not rest.startswith("{"):
                raise ConfigError(f"line {lineno}: expected '{{' after sweep", "sweep")
            rest = rest[1:]
            chunks = []
            while "}" not in rest:
                chunks.append(rest)
                if k >= len(lines):
                    raise ConfigError(f"line {lineno}: unterminated sweep block", "sweep")
                rest = lines[k].split("#", 1)[0].strip()
                k += 1
            inner, tail = rest.split("}", 1)
            if tail.strip():
                raise ConfigError(f"line {lineno}: trailing text after sweep block", "sweep")
            chunks.append(inner)
            body = [item.strip() for c in chunks for item in c.split(",") if item.strip()]
            sweeps.append(_sweep_block(body, lineno))
            continue
        m = _LINE.match(line)
        if not m:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = m.groups()
        if key not in PARAMS and key not in ("scenario", "out"):
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key)
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}", key)
        raw[key] = value

    scenario = raw.pop("scenario", None)
    if scenario is None:
        raise ConfigError("missing required key 'scenario'", "scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario: unknown scenario {scenario!r}", "scenario")
    out = raw.pop("out", None) or None
    params = {key: _number(key, value) for key, value in raw.items()}
    config = RunConfig(scenario, params, tuple(sweeps), out)
    validate(config)
    return config


def validate(config: RunConfig) -> None:
    scenario, p = config.scenario, config.params
    allowed = _ALLOWED[scenario]
    for key in p:
        if key not in allowed:
            raise ConfigError(f"{key}: not a parameter of scenario {scenario!r}", key)
    swept = [ax.param for ax in config.sweeps]
    for name in swept:
        if name not in allowed:
            raise ConfigError(f"sweep: {name!r} is not a parameter of scenario {scenario!r}", name)
    if len(set(swept)) != len(swept):
        raise ConfigError("sweep: a parameter is swept twice", "sweep")
    if len(swept) > 2:
        raise ConfigError("sweep: at most two sweep axes are supported", "sweep")
    present = set(p) | set(swept)
    for key in sorted(_REQUIRED[scenario]):
        if key not in present:
            raise ConfigError(f"{key}: required for scenario {scenario!r}", key)

    if scenario == "accelerated":
        by_accel = {"Omega", "a"} & present
        if "r" in present and by_accel:
            raise ConfigError("r: give either r or (Omega, a), not both", "r")
        if by_accel and by_accel != {"Omega", "a"}:
            missing = ({"Omega", "a"} - by_accel).pop()
            raise ConfigError(f"{missing}: Omega and a must be given together", missing)
        if "r" not in present and not by_accel:
            raise ConfigError("r: accelerated scenario needs r or (Omega, a)", "r")
        if "omega" not in present and "Omega" not in present:
            raise ConfigError("omega: required for scenario 'accelerated'", "omega")
        if "Omega" in swept or ("omega" in swept and "Omega" in p):
            raise ConfigError("sweep: Omega is tied to omega; sweep a or r instead", "sweep")
        if "omega" in p and "Omega" in p and p["omega"] != p["Omega"]:
            raise ConfigError("Omega: detectors are resonant, Omega must equal omega", "Omega")

    for key in ("omega", "Omega", "a"):
        if key in p and p[key] <= 0:
            raise ConfigError(f"{key}: must be positive", key)
    for key in ("lambda", "t", "T", "delay", "r"):
        if key in p and p[key] < 0:
            raise ConfigError(f"{key}: must be non-negative", key)
    for ax in config.sweeps:
        lo = min(ax.start, ax.stop)
        if ax.param in ("omega", "Omega", "a") and lo <= 0:
            raise ConfigError(f"{ax.param}: sweep range must be positive", ax.param)
        if ax.param in ("lambda", "t", "T", "delay", "r") and lo < 0:
            raise ConfigError(f"{ax.param}: sweep range must be non-negative", ax.param)
