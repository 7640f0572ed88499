"""
Experiment config reader

Parses a versioned TOML experiment file and validates it against the schema
below. Any validation failure is raised as a ConfigurationError naming the
offending fields.
"""

import hashlib
import os
import sys
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ...errors import ConfigurationError
from ..env.laws import ParameterLaw, build_law
from ..stats.observables import BASE_FUNCTIONS, Observable, linear_weight, make_observable
from ..transfer.grid import Grid

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_VERSION = 1
LAW_KINDS = ("constant", "iid-discrete", "iid-uniform", "finite-markov", "explicit")


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class LawSection(Section):
    """Environment law; only the parameters of the chosen kind may be set."""

    kind: Literal["constant", "iid-discrete", "iid-uniform", "finite-markov", "explicit"]
    beta: Optional[float] = None
    values: Optional[List[float]] = None
    probs: Optional[List[float]] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    states: Optional[List[float]] = None
    transition: Optional[List[List[float]]] = None
    initial: Optional[List[float]] = None
    sequence: Optional[List[float]] = None
    origin: int = 0
    n_future: int = Field(20_000, ge=1)

    def params(self) -> Dict[str, Any]:
        if self.kind == "constant":
            return {"beta": self.beta}
        if self.kind == "iid-discrete":
            return {"values": self.values, "probs": self.probs}
        if self.kind == "iid-uniform":
            return {"lo": self.lo, "hi": self.hi}
        if self.kind == "finite-markov":
            return {"states": self.states, "transition": self.transition, "initial": self.initial}
        return {"sequence": self.sequence, "origin": self.origin}

    @model_validator(mode="after")
    def _required(self) -> "LawSection":
        missing = [
            key for key, value in self.params().items() if value is None and key != "initial"
        ]
        if missing:
            raise ValueError(f"{self.kind} law needs {', '.join(missing)}")
        return self


class GridSection(Section):
    n: int = Field(1024, ge=2)
    kind: Literal["uniform", "geometric"] = "uniform"
    refine: float = Field(2.0, ge=1.0)
    cache_dir: Optional[str] = None


class ObservableSection(Section):
    """φ_ω(x) = scale · (a + bβ) · base(x), optionally a coboundary."""

    base: str = "x"
    centered: bool = True
    weight: Optional[Tuple[float, float]] = None
    coboundary: bool = False
    scale: float = 1.0

    @field_validator("base")
    @classmethod
    def _known(cls, value: str) -> str:
        if value not in BASE_FUNCTIONS:
            raise ValueError(f"unknown base '{value}'; expected one of {sorted(BASE_FUNCTIONS)}")
        return value

    def build(self) -> Observable:
        weight = linear_weight(*self.weight) if self.weight is not None else None
        return make_observable(
            self.base,
            centered=self.centered,
            weight=weight,
            coboundary=self.coboundary,
            scale=self.scale,
        )


class DecaySection(Section):
    """Memory-loss curve over j = i+1..j_max at pullback index s <= i."""

    s: int = 0
    i: int = 0
    j_max: int = Field(400, ge=1)
    norms: List[float] = Field(default_factory=lambda: [1.0])
    fit_lo: int = Field(20, ge=1)
    fit_hi: Optional[int] = None
    mc_check: List[int] = Field(default_factory=list)
    reference_beta: Optional[float] = Field(None, ge=0.0, lt=1.0)
    dominance_from: int = Field(50, ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> "DecaySection":
        if not self.s <= self.i < self.j_max:
            raise ValueError("decay needs s <= i < j_max")
        if self.reference_beta is not None and self.dominance_from > self.j_max:
            raise ValueError("dominance_from must not exceed j_max")
        if any(norm < 1.0 for norm in self.norms):
            raise ValueError("norm indices must be >= 1")
        return self


class SeriesSection(Section):
    """n values for correlation, variance, CLT and moment runs."""

    ns: List[int] = Field(default_factory=lambda: [100, 200, 500, 1000])
    corr_n_max: int = Field(30, ge=0)
    methods: List[Literal["operator", "monte-carlo"]] = Field(
        default_factory=lambda: ["operator", "monte-carlo"]
    )
    fit_lo: int = Field(1, ge=1)
    martingale_n: int = Field(50, ge=1)
    test_functions: List[str] = Field(default_factory=lambda: ["x", "cos2pi", "abs_x_minus_half"])
    n_paths: int = Field(1, ge=1)
    concentration_t: float = Field(0.1, gt=0.0)

    @field_validator("ns")
    @classmethod
    def _increasing(cls, value: List[int]) -> List[int]:
        if not value or any(b <= a for a, b in zip(value, value[1:])) or value[0] < 1:
            raise ValueError("ns must be a nonempty strictly increasing list of positive counts")
        return value


class McSection(Section):
    n_samples: int = Field(100_000, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    block_size: int = Field(1 << 16, ge=1)


class ReturnsSection(Section):
    depth: int = Field(500, ge=1)
    t_max: int = Field(0, ge=0)
    fit_lo: int = Field(10, ge=1)
    fit_hi: Optional[int] = None
    mc_samples: int = Field(0, ge=0)


class CouplingSection(Section):
    theta: float = Field(0.25, gt=0.0, lt=1.0)
    k2: Optional[float] = Field(None, gt=0.0)
    c_u: Optional[float] = Field(None, gt=0.0)
    first_tail: Literal["return", "doubling", "geometric", "zero"] = "return"
    conditional: Literal["window", "geometric", "zero"] = "window"
    rho: float = Field(0.5, gt=0.0, lt=1.0)
    horizon: int = Field(200, ge=1)
    n_samples: int = Field(100_000, ge=1)
    depth: int = Field(50, ge=1)
    n_densities: int = Field(100, ge=1)
    fit_lo: int = Field(5, ge=1)


class AnnealedSection(Section):
    n_paths: int = Field(20, ge=1)
    n_max: int = Field(30, ge=0)
    n_samples: int = Field(10_000, ge=1)
    method: Literal["operator", "monte-carlo"] = "monte-carlo"
    fit_lo: int = Field(5, ge=1)


class Check(Section):
    """Acceptance rule for one named fit; expected defaults to the predicted value."""

    expected: Optional[float] = None
    tolerance: float = Field(0.0, ge=0.0)
    mode: Literal["within", "at_most", "at_least"] = "within"

    def passes(self, value: float, predicted: Optional[float]) -> Optional[bool]:
        target = self.expected if self.expected is not None else predicted
        if target is None or value is None:
            return None
        if self.mode == "within":
            return abs(value - target) <= self.tolerance
        if self.mode == "at_most":
            return value <= target + self.tolerance
        return value >= target - self.tolerance


class ExperimentConfig(Section):
    """Top-level experiment file."""

    schema_version: Literal[1]
    gamma: float = Field(gt=0.0, lt=1.0)
    epsilon: float = Field(0.1, gt=0.0, lt=0.5)
    n_pull: int = Field(2000, ge=1)
    moment_order: float = Field(2.0, ge=2.0)
    output_dir: Optional[str] = None
    law: LawSection
    grid: GridSection = GridSection()
    observable: ObservableSection = ObservableSection()
    observable2: Optional[ObservableSection] = None
    decay: DecaySection = DecaySection()
    series: SeriesSection = SeriesSection()
    mc: McSection = McSection()
    returns: ReturnsSection = ReturnsSection()
    coupling: CouplingSection = CouplingSection()
    annealed: AnnealedSection = AnnealedSection()
    checks: Dict[str, Check] = Field(default_factory=dict)

    def build_law(self) -> ParameterLaw:
        return build_law(self.law.kind, **self.law.params())

    def build_grid(self) -> Grid:
        return Grid.from_kind(self.grid.kind, self.grid.n, self.grid.refine)

    def build_observable(self) -> Observable:
        return self.observable.build()

    def build_observable2(self) -> Observable:
        return (self.observable2 or self.observable).build()


def blob_hash(data: bytes) -> str:
    """git-style blob hash: sha1 of b"blob <len>\\0" followed by the data."""
    digest = hashlib.sha1()
    digest.update(b"blob %d\0" % len(data))
    digest.update(data)
    return digest.hexdigest()


def _format_errors(exc: ValidationError) -> str:
    lines = []
    for error in exc.errors():
        where = ".".join(str(part) for part in error["loc"]) or "<root>"
        lines.append(f"{where}: {error['msg']}")
    return "; ".join(lines)


class ConfigReader:
    """Reads and validates an experiment file, keeping its raw bytes for hashing."""

    def __init__(self, file_path: str):
        """Initialize config reader.

        Args:
            file_path: Path to the TOML experiment file
        """
        self.file_path = file_path
        if not os.path.exists(file_path):
            raise ConfigurationError(f"config file '{file_path}' does not exist")
        with open(file_path, "rb") as handle:
            self.raw = handle.read()

    @property
    def config_hash(self) -> str:
        return blob_hash(self.raw)

    def read(self) -> ExperimentConfig:
        """Parse and validate the file.

        Raises:
            ConfigurationError: TOML syntax errors or schema violations
        """
        try:
            data = tomllib.loads(self.raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigurationError(f"{self.file_path}: {exc}") from exc
        return parse_config(data, source=self.file_path)


def parse_config(data: Dict[str, Any], source: str = "<config>") -> ExperimentConfig:
    """Validate an already-parsed mapping."""
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigurationError(
            f"{source}: unsupported schema_version {version!r}; expected {SCHEMA_VERSION}"
        )
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"{source}: {_format_errors(exc)}") from exc


def read_config(file_path: str) -> Tuple[ExperimentConfig, str]:
    """Load a config file; returns (config, blob hash of its bytes)."""
    reader = ConfigReader(file_path)
    return reader.read(), reader.config_hash
