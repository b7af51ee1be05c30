"""Run configuration: ``key = value`` text with ``#`` comments and optional sections.

Sections (``[law]``, ``[mesh]``, ``[scheme]``, ``[initial]``, ``[output]``,
``[convergence]``) only group keys; every key name is unique across them.
"""

import configparser
import math
from dataclasses import dataclass, field, fields, replace

from .basis import BASIS_KINDS
from .dg import FLUX_MODES
from .errors import ConfigError
from .fluxes import FLUX_NAMES
from .initial import IC_NAMES
from .mesh import BOUNDARY_KINDS

INTEGRATORS = ("ee", "ssp2", "ssp3", "rk4", "ader_ck", "ader_predictor")
LAWS = ("advection", "burgers", "euler")
IC_PARAMS = ("offset", "amplitude", "frequency", "center", "width", "x0",
             "velocity", "pressure")


@dataclass(frozen=True)
class RunConfig:
    law: str = "advection"
    advection_speed: float = 1.0
    gamma: float = 1.4
    lower_bound: float = None
    N: int = 100
    x_min: float = 0.0
    x_max: float = 1.0
    boundary: str = "periodic"
    basis: str = "modal_legendre"
    degree: int = 2
    flux: str = "rusanov"
    rusanov_jump_factor: float = 0.5
    flux_mode: str = "quadrature"
    integrator: str = "ssp3"
    cfl: float = 0.9
    t_end: float = 1.0
    dt_max: float = math.inf
    max_retries: int = 5
    limiter: bool = False
    limiter_eps: float = 1e-13
    p_time: int = None
    picard_tol: float = 1e-12
    picard_max_iter: int = 30
    ic: str = "sine"
    ic_params: dict = field(default_factory=dict)
    output_dir: str = None
    prefix: str = "snapshot"
    snapshot_every: int = 0
    meshes: tuple = ()
    error_component: int = 0
    balance_time_order: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self):
        def check(cond, msg):
            if not cond:
                raise ConfigError(msg)
        check(self.law in LAWS, f"law must be one of {LAWS}, got {self.law!r}")
        check(self.flux in FLUX_NAMES, f"flux must be one of {FLUX_NAMES}, got {self.flux!r}")
        check(self.flux != "upwind" or self.law == "advection",
              "upwind flux is only available for the advection law")
        check(self.basis in BASIS_KINDS, f"basis must be one of {BASIS_KINDS}")
        check(self.boundary in BOUNDARY_KINDS, f"boundary must be one of {BOUNDARY_KINDS}")
        check(self.integrator in INTEGRATORS, f"integrator must be one of {INTEGRATORS}")
        check(self.integrator != "ader_ck" or self.law == "advection",
              "ader_ck is only available for the advection law")
        check(self.flux_mode in FLUX_MODES, f"flux_mode must be one of {FLUX_MODES}")
        check(self.ic in IC_NAMES, f"ic must be one of {IC_NAMES}")
        check(self.degree >= 0, "degree must be >= 0")
        check(self.N >= 1, "N must be >= 1")
        check(self.x_min < self.x_max, "x_min must be < x_max")
        check(0.0 < self.cfl <= 1.0, "cfl must lie in (0, 1]")
        check(self.t_end >= 0.0, "t_end must be >= 0")
        check(self.dt_max > 0.0, "dt_max must be > 0")
        check(self.gamma > 1.0, "gamma must be > 1")
        check(self.rusanov_jump_factor > 0.0, "rusanov_jump_factor must be > 0")
        check(self.limiter_eps >= 0.0, "limiter_eps must be >= 0")
        check(self.p_time is None or self.p_time >= 0, "p_time must be >= 0")
        check(self.picard_tol > 0.0, "picard_tol must be > 0")
        check(self.picard_max_iter >= 1, "picard_max_iter must be >= 1")
        check(self.max_retries >= 0, "max_retries must be >= 0")
        check(self.snapshot_every >= 0, "snapshot_every must be >= 0")
        check(self.error_component >= 0, "error_component must be >= 0")
        unknown = set(self.ic_params) - set(IC_PARAMS)
        check(not unknown, f"unknown initial-condition parameters {sorted(unknown)}")

    def replace(self, **changes):
        return replace(self, **changes)

    @property
    def time_degree(self):
        return self.degree if self.p_time is None else self.p_time

    def law_params(self):
        return {"a": self.advection_speed, "gamma": self.gamma,
                "lower_bound": self.lower_bound}


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_ALIASES = {"a": "advection_speed", "limiter_on": "limiter", "p_t": "p_time"}


def _parse_bool(text):
    v = text.strip().lower()
    if v in ("on", "true", "yes", "1"):
        return True
    if v in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(key, text):
    kind = _TYPES[key]
    text = text.strip()
    if key == "meshes":
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    if text.lower() in ("none", "") and key in ("lower_bound", "p_time", "output_dir"):
        return None
    if kind is bool:
        return _parse_bool(text)
    if kind is int:
        return int(text)
    if kind is float:
        return float(text)
    return text


def parse_config(text):
    """Parse configuration text into a validated :class:`RunConfig`."""
    parser = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",),
        interpolation=None, default_section="__defaults__")
    parser.optionxform = str
    try:
        parser.read_string("[general]\n" + text)
    except configparser.Error as err:
        raise ConfigError(f"malformed configuration: {err}") from err

    values, ic_params = {}, {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = _ALIASES.get(key, key)
            if key in IC_PARAMS:
                try:
                    ic_params[key] = float(raw)
                except ValueError as err:
                    raise ConfigError(f"{key}: {err}") from err
                continue
            if key not in _TYPES or key == "ic_params":
                raise ConfigError(f"unknown configuration key {key!r}")
            if key in values:
                raise ConfigError(f"duplicate configuration key {key!r}")
            try:
                values[key] = _convert(key, raw)
            except ValueError as err:
                raise ConfigError(f"{key}: {err}") from err
    return RunConfig(ic_params=ic_params, **values)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read configuration {path}: {err}") from err
    return parse_config(text)
