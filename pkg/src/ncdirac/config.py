"""
Run configuration: a sectioned key = value file read with strict typing.

Every key has a type and a default; unknown sections or keys, malformed
values and out-of-range values raise ConfigError. ``RunConfig.to_ini``
writes the fully resolved configuration back out in the same format.
"""

import configparser
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError
from .oracle import CENTRIFUGAL_MODES, POTENTIAL_FORMS
from .potential import PEKERIS_VARIANTS, FieldParams, PotentialParams
from .radial import QuantumState
from .spectrum import CONDITIONS, XI_MODES


def _states(text):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != 3:
            raise ValueError(f"state {chunk!r} must be 'n l m_l'")
        out.append(tuple(int(x) for x in parts))
    return out


def _bracket(text):
    text = text.strip()
    if not text:
        return None
    parts = text.split()
    if len(parts) != 2:
        raise ValueError("bracket must be 'lo hi'")
    lo, hi = float(parts[0]), float(parts[1])
    if lo > hi:
        raise ValueError("bracket lo must not exceed hi")
    return (lo, hi)


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return parse


# section -> key -> (parser, default)
SCHEMA = {
    "potential": {
        "V0": (float, 1.0),
        "a": (float, 10.0),
        "b": (float, 1.0),
        "g": (float, 0.0),
        "alpha": (float, 0.4),
        "r_c": (float, 0.5),
        "M": (float, 1.0),
    },
    "nc": {
        "theta": (float, 1e-3),
    },
    "field": {
        "e_charge": (float, 1.0),
        "k_const": (float, 1.0),
        "q_source": (float, 0.01),
    },
    "states": {
        "states": (_states, "0 0 0; 1 0 0; 0 1 -1; 0 1 0; 0 1 1"),
    },
    "solver": {
        "condition": (_choice(CONDITIONS), "parametric_nu"),
        "xi_mode": (_choice(XI_MODES), "nu"),
        "scan_panels": (int, 2000),
        "tol": (float, 1e-12),
        "bracket": (_bracket, ""),
    },
    "oracle": {
        "n_points": (int, 6000),
        "span": (float, 60.0),
        "centrifugal": (_choice(CENTRIFUGAL_MODES), "pekeris"),
        "potential_form": (_choice(POTENTIAL_FORMS), "s_image"),
        "pekeris_variant": (_choice(PEKERIS_VARIANTS), "as_printed"),
    },
}


def _format(value):
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    if isinstance(value, tuple):
        return " ".join(_format(v) for v in value)
    if isinstance(value, list):
        return "; ".join(" ".join(str(x) for x in st) for st in value)
    return str(value)


@dataclass
class SolverOptions:
    condition: str = "parametric_nu"
    xi_mode: str = "nu"
    scan_panels: int = 2000
    tol: float = 1e-12
    bracket: tuple = None


@dataclass
class OracleOptions:
    n_points: int = 6000
    span: float = 60.0
    centrifugal: str = "pekeris"
    potential_form: str = "s_image"
    pekeris_variant: str = "as_printed"


@dataclass
class RunConfig:
    potential: PotentialParams
    theta: float
    field: FieldParams
    states: list
    solver: SolverOptions = field(default_factory=SolverOptions)
    oracle: OracleOptions = field(default_factory=OracleOptions)

    def to_dict(self):
        pot = self.potential
        return {
            "potential": {k: getattr(pot, k) for k in SCHEMA["potential"]},
            "nc": {"theta": self.theta},
            "field": {k: getattr(self.field, k) for k in SCHEMA["field"]},
            "states": {"states": list(self.states)},
            "solver": {k: getattr(self.solver, k) for k in SCHEMA["solver"]},
            "oracle": {k: getattr(self.oracle, k) for k in SCHEMA["oracle"]},
        }

    def to_ini(self):
        lines = []
        for section, values in self.to_dict().items():
            lines.append(f"[{section}]")
            lines.extend(f"{k} = {_format(v)}" for k, v in values.items())
            lines.append("")
        return "\n".join(lines)

    def replace_potential(self, **changes):
        return RunConfig(self.potential.replace(**changes), self.theta, self.field,
                         self.states, self.solver, self.oracle)


def _build(values):
    try:
        potential = PotentialParams(**values["potential"])
        fld = FieldParams(**values["field"])
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    theta = values["nc"]["theta"]
    if theta < 0:
        raise ConfigError("nc.theta must be nonnegative")
    states = values["states"]["states"]
    for n, l, m in states:
        try:
            QuantumState.from_nl(n, l, m_l=m)
        except DomainError as exc:
            raise ConfigError(f"state ({n}, {l}, {m}): {exc}") from exc
    solver = SolverOptions(**values["solver"])
    oracle = OracleOptions(**values["oracle"])
    if solver.scan_panels < 1:
        raise ConfigError("solver.scan_panels must be positive")
    if oracle.n_points < 3 or oracle.span <= 0:
        raise ConfigError("oracle grid must have n_points >= 3 and span > 0")
    if oracle.potential_form == "s_image" and oracle.centrifugal != "pekeris":
        raise ConfigError("oracle.potential_form = s_image requires centrifugal = pekeris")
    return RunConfig(potential, theta, fld, states, solver, oracle)


def defaults():
    values = {
        sec: {k: (parse(d) if isinstance(d, str) and parse is not str else d)
              for k, (parse, d) in keys.items()}
        for sec, keys in SCHEMA.items()
    }
    return _build(values)


def parse_config(text):
    """Parse configuration text; missing keys take their defaults."""
    cp = configparser.ConfigParser(interpolation=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    values = defaults().to_dict()
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            parse = SCHEMA[section][key][0]
            try:
                values[section][key] = parse(raw.strip())
            except ValueError as exc:
                raise ConfigError(f"{section}.{key}: {exc}") from exc
    return _build(values)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
