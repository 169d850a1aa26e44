"""Configuration ingestion for sweeps and single simulation runs.

Two on-disk formats resolve to the same validated spec:

* key = value text, one setting per line, ``#`` comments, commas for
  lists::

      carriers = 5, 5
      mu = 1.0
      lambda_grid = 0.5, 1.0, 1.5
      scenarios = sequential, concurrent
      mode = mmc
      interpretation = mechanistic-load
      channels_per_carrier = 7
      horizon = 100000
      warmup_fraction = 0.1
      seed = 0

* JSON with the same keys; ``carriers`` may be a list of populations or
  of ``{"pop": ...}`` objects.

Unknown keys are rejected by name; text-format errors carry the line
number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .erlang import INTERPRETATIONS, SCENARIOS
from .search import DEFAULT_CHANNELS_PER_CARRIER, CarrierSystem
from .simulate import MODES, SimConfig

KNOWN_KEYS = frozenset(
    {
        "carriers",
        "channels_per_carrier",
        "mu",
        "lambda_grid",
        "scenario",
        "scenarios",
        "mode",
        "interpretation",
        "horizon",
        "warmup_fraction",
        "seed",
    }
)


class ConfigError(ValueError):
    """Raised for unparseable or invalid configuration files."""


@dataclass(frozen=True)
class CompareSpec:
    """A fully resolved configuration: carrier system plus run settings."""

    system: CarrierSystem
    mu: float
    lambda_grid: tuple[float, ...] | None
    scenarios: tuple[str, ...]
    mode: str
    interpretation: str
    horizon: int
    warmup_fraction: float
    seed: int

    def sim_config(self, arrival_rate: float, scenario: str, seed: int | None = None) -> SimConfig:
        return SimConfig(
            arrival_rate=arrival_rate,
            service_rate=self.mu,
            scenario=scenario,
            carriers=self.system,
            mode=self.mode,
            interpretation=self.interpretation,
            horizon=self.horizon,
            warmup=int(self.horizon * self.warmup_fraction),
            seed=self.seed if seed is None else seed,
        )

    def resolved_dict(self) -> dict:
        """Canonical plain-data form, used for the run manifest digest."""
        return {
            "carriers": [c.population for c in self.system.carriers],
            "channels_per_carrier": self.system.channels_per_carrier,
            "mu": self.mu,
            "lambda_grid": list(self.lambda_grid) if self.lambda_grid else None,
            "scenarios": list(self.scenarios),
            "mode": self.mode,
            "interpretation": self.interpretation,
            "horizon": self.horizon,
            "warmup_fraction": self.warmup_fraction,
            "seed": self.seed,
        }


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _parse_text(content: str) -> dict:
    raw: dict = {}
    for lineno, line in enumerate(content.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        if "," in value or key in ("carriers", "lambda_grid", "scenarios"):
            raw[key] = [_parse_scalar(part) for part in value.split(",") if part.strip()]
        else:
            raw[key] = _parse_scalar(value)
    return raw


def _parse_json(content: str) -> dict:
    try:
        raw = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise ConfigError("top-level JSON value must be an object")
    for key in raw:
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}")
    return raw


def _coerce_populations(value) -> list[int]:
    if not isinstance(value, list) or not value:
        raise ConfigError("'carriers' must be a non-empty list")
    pops = []
    for item in value:
        if isinstance(item, dict):
            extra = set(item) - {"pop"}
            if extra:
                raise ConfigError(f"unknown carrier key {sorted(extra)[0]!r}")
            if "pop" not in item:
                raise ConfigError("carrier entry is missing 'pop'")
            item = item["pop"]
        if not isinstance(item, int) or isinstance(item, bool) or item < 0:
            raise ConfigError(f"carrier population must be a non-negative integer, got {item!r}")
        pops.append(item)
    return pops


def _as_number(raw: dict, key: str, default=None):
    value = raw.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {value!r}")
    return value


def resolve(raw: dict) -> CompareSpec:
    """Validate a parsed key/value mapping and apply defaults."""
    if "carriers" not in raw:
        raise ConfigError("missing required key 'carriers'")
    if "mu" not in raw:
        raise ConfigError("missing required key 'mu'")
    if "scenario" in raw and "scenarios" in raw:
        raise ConfigError("give either 'scenario' or 'scenarios', not both")

    pops = _coerce_populations(
        raw["carriers"] if isinstance(raw["carriers"], list) else [raw["carriers"]]
    )
    channels = raw.get("channels_per_carrier", DEFAULT_CHANNELS_PER_CARRIER)
    if not isinstance(channels, int) or isinstance(channels, bool) or channels < 1:
        raise ConfigError(f"'channels_per_carrier' must be a positive integer, got {channels!r}")
    try:
        system = CarrierSystem.from_populations(pops, channels_per_carrier=channels)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    mu = _as_number(raw, "mu")
    if mu <= 0:
        raise ConfigError("'mu' must be positive")

    grid_raw = raw.get("lambda_grid")
    grid = None
    if grid_raw is not None:
        if not isinstance(grid_raw, list) or not grid_raw:
            raise ConfigError("'lambda_grid' must be a non-empty list")
        grid = []
        for item in grid_raw:
            if isinstance(item, bool) or not isinstance(item, (int, float)) or item <= 0:
                raise ConfigError(f"'lambda_grid' entries must be positive numbers, got {item!r}")
            grid.append(float(item))
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("'lambda_grid' must be strictly increasing")
        grid = tuple(grid)

    scen_raw = raw.get("scenarios", raw.get("scenario", list(SCENARIOS)))
    if isinstance(scen_raw, str):
        scen_raw = [scen_raw]
    scenarios = tuple(scen_raw)
    for s in scenarios:
        if s not in SCENARIOS:
            raise ConfigError(f"unknown scenario {s!r}; expected one of {SCENARIOS}")
    if len(set(scenarios)) != len(scenarios):
        raise ConfigError("duplicate scenario")

    mode = raw.get("mode", "mmc")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    interpretation = raw.get("interpretation", "mechanistic-load")
    if interpretation == "mechanistic":
        interpretation = "mechanistic-load"
    if interpretation not in INTERPRETATIONS:
        raise ConfigError(
            f"unknown interpretation {interpretation!r}; expected one of {INTERPRETATIONS}"
        )

    horizon = raw.get("horizon", 100_000)
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 10:
        raise ConfigError(f"'horizon' must be an integer >= 10, got {horizon!r}")
    warmup_fraction = _as_number(raw, "warmup_fraction", 0.1)
    if not 0.0 <= warmup_fraction < 1.0:
        raise ConfigError("'warmup_fraction' must be in [0, 1)")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"'seed' must be a non-negative integer, got {seed!r}")

    return CompareSpec(
        system=system,
        mu=float(mu),
        lambda_grid=grid,
        scenarios=scenarios,
        mode=mode,
        interpretation=interpretation,
        horizon=horizon,
        warmup_fraction=float(warmup_fraction),
        seed=seed,
    )


def load_config(path: str) -> CompareSpec:
    """Read, parse and validate a configuration file (text or JSON)."""
    with open(path, "r", encoding="utf-8") as handle:
        content = handle.read()
    stripped = content.lstrip()
    raw = _parse_json(content) if stripped.startswith("{") else _parse_text(content)
    return resolve(raw)
