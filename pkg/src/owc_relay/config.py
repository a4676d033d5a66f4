"""JSON run configuration shared by the CLI input and the provenance sidecar."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace

from .channel import FogParams, LinkParams, SystemParams, link_at, make_link
from .errors import ConfigError, DomainError
from .geometry import PointingGeometry
from .montecarlo import MODES, SimSpec
from .relay import METHODS, RelayConfig

SWEEP_VARS = {"pt_dbm": "dBm", "d": "km", "d_r": "km", "gamma_th_db": "dB"}
HOP_NAMES = ("hop1", "hop2", "direct")
DEFAULT_GRID = 31


@dataclass(frozen=True)
class DirectPointing:
    """Pointing parameters given directly instead of through beam optics."""
    rho: float
    A0: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ConfigError(f"direct pointing rho must be positive, got {self.rho}")
        if not 0 < self.A0 < 1:
            raise ConfigError(f"direct pointing A0 must lie in (0, 1), got {self.A0}")


@dataclass(frozen=True)
class Topology:
    d_km: float = 1.0
    d_r_km: float | None = None     # None places the relay at the midpoint

    def __post_init__(self):
        if not (math.isfinite(self.d_km) and self.d_km > 0):
            raise ConfigError(f"topology.d_km must be positive, got {self.d_km}")
        if self.d_r_km is not None and not 0 < self.d_r_km < self.d_km:
            raise ConfigError(
                f"topology.d_r_km={self.d_r_km} must satisfy 0 < d_r < d = {self.d_km} km")

    @property
    def relay_distance(self) -> float:
        return 0.5 * self.d_km if self.d_r_km is None else self.d_r_km


@dataclass(frozen=True)
class SimSettings:
    trials: int = 1_000_000
    master_seed: int = 20240611
    chunk_size: int = 100_000
    mode: str = "relay_true"
    workers: int = 1

    def spec(self, gamma_th: float, mode: str | None = None) -> SimSpec:
        return SimSpec(trials=self.trials, master_seed=self.master_seed, chunk_size=self.chunk_size,
                       mode=mode or self.mode, gamma_th=gamma_th, workers=self.workers)


@dataclass(frozen=True)
class SweepSpec:
    var: str
    lo: float
    hi: float
    n: int = DEFAULT_GRID

    def __post_init__(self):
        if self.var not in SWEEP_VARS:
            raise ConfigError(f"sweep variable must be one of {sorted(SWEEP_VARS)}, got {self.var!r}")
        if self.n < 3:
            raise ConfigError(f"sweep grid needs at least 3 points, got {self.n}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ConfigError(f"sweep range needs finite lo < hi, got {self.lo}..{self.hi}")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"--sweep expects var:lo:hi:n, got {text!r}")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError as exc:
            raise ConfigError(f"--sweep {text!r}: {exc}") from None

    def grid(self) -> list[float]:
        # endpoint weighting lands on round values (0.5 in 0.25..0.75) that lo + i*step can miss
        last = self.n - 1
        return [(self.lo * (last - i) + self.hi * i) / last for i in range(self.n)]

    @property
    def column(self) -> str:
        name = {"d": "d_km", "d_r": "d_r_km"}.get(self.var, self.var)
        return name


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    fog: FogParams = field(default_factory=FogParams)
    system: SystemParams = field(default_factory=SystemParams)
    geometry: PointingGeometry = field(default_factory=PointingGeometry)
    direct_pointing: dict = field(default_factory=dict)     # hop name -> DirectPointing
    topology: Topology = field(default_factory=Topology)
    gamma_th_db: float = 6.0
    methods: tuple = ("closed_form", "quadrature")
    baseline: bool = True
    half_duplex_penalty: bool = False
    sim: SimSettings = field(default_factory=SimSettings)
    sweep: SweepSpec | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self):
        if not math.isfinite(self.gamma_th_db):
            raise ConfigError(f"gamma_th_db must be finite, got {self.gamma_th_db}")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise ConfigError(f"methods must be a non-empty subset of {METHODS}, got {list(self.methods)}")
        unknown = set(self.direct_pointing) - set(HOP_NAMES)
        if unknown:
            raise ConfigError(f"direct_pointing keys must be among {HOP_NAMES}, got {sorted(unknown)}")

    @property
    def gamma_th(self) -> float:
        return 10.0 ** (self.gamma_th_db / 10.0)

    def _link(self, name: str, d_km: float) -> LinkParams:
        direct = self.direct_pointing.get(name)
        if direct is not None:
            return make_link(d_km, self.fog, direct, self.system)
        return link_at(d_km, self.fog, self.geometry, self.system)

    def relay_config(self) -> RelayConfig:
        d, d_r = self.topology.d_km, self.topology.relay_distance
        hop1 = self._link("hop1", d_r)
        if self.topology.d_r_km is None and "hop2" not in self.direct_pointing and "hop1" not in self.direct_pointing:
            hop2 = hop1
        else:
            hop2 = self._link("hop2", d - d_r)
        return RelayConfig(hop1, hop2, self.half_duplex_penalty)

    def direct_link(self) -> LinkParams:
        return self._link("direct", self.topology.d_km)

    def with_value(self, var: str, value: float) -> "RunConfig":
        """Copy with one sweep variable set."""
        if var == "pt_dbm":
            return replace(self, system=replace(self.system, pt_dbm=value))
        if var == "gamma_th_db":
            return replace(self, gamma_th_db=value)
        if var == "d":
            return replace(self, topology=Topology(value, self.topology.d_r_km))
        if var == "d_r":
            return replace(self, topology=Topology(self.topology.d_km, value))
        raise ConfigError(f"unknown sweep variable {var!r}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["methods"] = list(self.methods)
        return out


# name -> dataclass for nested sections
_SECTIONS = {
    "fog": FogParams, "system": SystemParams, "geometry": PointingGeometry,
    "topology": Topology, "sim": SimSettings, "output": OutputSpec,
}


def _build(cls, data, section):
    if not isinstance(data, dict):
        raise ConfigError(f"section {section!r} must be an object")
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"section {section!r}: unknown fields {sorted(unknown)}")
    try:
        return cls(**data)
    except (DomainError, TypeError) as exc:
        raise ConfigError(f"section {section!r}: {exc}") from None


def config_from_dict(data: dict) -> RunConfig:
    """Build a RunConfig; accepts a provenance sidecar (uses its ``config`` entry)."""
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    top = {f.name for f in fields(RunConfig)}
    unknown = set(data) - top
    if unknown:
        raise ConfigError(f"unknown config fields {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key in _SECTIONS:
            kwargs[key] = _build(_SECTIONS[key], value, key)
        elif key == "sweep":
            kwargs[key] = None if value is None else _build(SweepSpec, value, key)
        elif key == "direct_pointing":
            if not isinstance(value, dict):
                raise ConfigError("direct_pointing must map hop names to {rho, A0}")
            kwargs[key] = {name: _build(DirectPointing, v, f"direct_pointing.{name}")
                           for name, v in value.items()}
        elif key == "methods":
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    sim = kwargs.get("sim")
    if sim is not None and sim.mode not in MODES:
        raise ConfigError(f"sim.mode must be one of {MODES}, got {sim.mode!r}")
    try:
        return RunConfig(**kwargs)
    except (DomainError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return config_from_dict(data)
