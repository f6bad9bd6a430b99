"""
Experiment configuration: the JSON document a run is driven by.

    {
      "name": "minimal",
      "domains": [{"kind": "disk", "radius": 1.0}],
      "lambda_values": [0.0],
      "p_schedule": [3.0],
      "mesh_h": 0.025,
      "checks": ["oracle_compare"],
      "output_dir": "runs/minimal"
    }

A single "domain" object is accepted in place of "domains". Everything
else has a default; unknown keys are rejected so typos surface as errors
naming the field.
"""
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator
from pydantic import model_validator

from ..mesh.domain import DomainKind, DomainSpec
from ..shared_libraries import constants
from ..shared_libraries.models import CheckName, GradingSpec

PathLike = Union[str, Path]


class DomainConfig(BaseModel):
    """One convex domain; the keys required depend on ``kind``."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["disk", "ellipse", "rectangle", "convex_polygon"]
    center: Tuple[float, float] = (0.0, 0.0)
    radius: Optional[PositiveFloat] = None
    a: Optional[PositiveFloat] = None
    b: Optional[PositiveFloat] = None
    width: Optional[PositiveFloat] = None
    height: Optional[PositiveFloat] = None
    vertices: Optional[List[Tuple[float, float]]] = None

    @model_validator(mode="after")
    def _required_keys(self) -> "DomainConfig":
        required = {
            "disk": ("radius",),
            "ellipse": ("a", "b"),
            "rectangle": ("width", "height"),
            "convex_polygon": ("vertices",),
        }[self.kind]
        missing = [key for key in required if getattr(self, key) is None]
        if missing:
            raise ValueError(f"{self.kind} domain needs {', '.join(missing)}")
        # convexity and orientation are checked by DomainSpec itself
        self.to_spec()
        return self

    def to_spec(self) -> DomainSpec:
        return DomainSpec.from_dict(self.model_dump(exclude_none=True))

    @classmethod
    def from_spec(cls, spec: DomainSpec) -> "DomainConfig":
        return cls(**spec.to_dict())


class GradingConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    focus: Tuple[float, float] = (0.0, 0.0)
    inner_h: PositiveFloat
    outer_h: PositiveFloat
    transition_radius: PositiveFloat

    @model_validator(mode="after")
    def _ordered(self) -> "GradingConfig":
        if self.inner_h > self.outer_h:
            raise ValueError(f"inner_h {self.inner_h} exceeds outer_h {self.outer_h}")
        return self

    def to_spec(self) -> GradingSpec:
        return GradingSpec(
            focus=self.focus,
            inner_h=self.inner_h,
            outer_h=self.outer_h,
            transition_radius=self.transition_radius,
        )


class Tolerances(BaseModel):
    """Named pass thresholds; every one can be overridden from the config."""
    model_config = ConfigDict(extra="forbid")

    # relative error of FEM sup-norm and c² against the radial oracle
    oracle_compare: PositiveFloat = 0.01
    convergence_order: PositiveFloat = 1.7
    profile_2d: PositiveFloat = 0.3
    profile_oracle: PositiveFloat = 0.05
    # multiples of h_max
    robin_distance: PositiveFloat = 2.0
    robin_center: PositiveFloat = 1e-3
    kernel_residual: PositiveFloat = 1e-5
    kernel_overlap: PositiveFloat = 0.99
    # last value of a sequence over its median
    trend_floor: PositiveFloat = 0.5
    bubble_mass: PositiveFloat = 1e-12


def _in_declared_order(checks) -> List[CheckName]:
    wanted = set(checks)
    return [check for check in CheckName if check in wanted]


def _strictly_increasing(name: str, values: List[float]) -> List[float]:
    if any(not math.isfinite(v) or v <= 1 for v in values):
        raise ValueError(f"{name} entries must be finite and > 1, got {values}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing, got {values}")
    return [float(v) for v in values]


class ExperimentConfig(BaseModel):
    """A sweep over domains × λ × p and the checks to run on it."""
    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    domains: List[DomainConfig] = Field(min_length=1)
    lambda_values: List[float] = Field(default_factory=lambda: [0.0], min_length=1)
    p_schedule: List[float] = Field(min_length=1)
    oracle_p_values: List[float] = Field(default_factory=list)
    mesh_h: PositiveFloat = 0.05
    grading: Optional[GradingConfig] = None
    remesh: bool = True
    refinement_levels: int = Field(default=0, ge=0, le=4)
    robin_spacing: Optional[PositiveFloat] = None
    checks: List[CheckName] = Field(min_length=1)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    output_dir: Path = Path("runs/experiment")
    jobs: PositiveInt = constants.DEFAULT_JOBS
    solver_tol: Optional[PositiveFloat] = None

    @model_validator(mode="before")
    @classmethod
    def _single_domain(cls, data: Any) -> Any:
        if isinstance(data, dict) and "domain" in data:
            data = dict(data)
            if "domains" in data:
                raise ValueError("give either domain or domains, not both")
            data["domains"] = [data.pop("domain")]
        return data

    @field_validator("p_schedule")
    @classmethod
    def _check_p_schedule(cls, values: List[float]) -> List[float]:
        return _strictly_increasing("p_schedule", values)

    @field_validator("oracle_p_values")
    @classmethod
    def _check_oracle_p_values(cls, values: List[float]) -> List[float]:
        return _strictly_increasing("oracle_p_values", values)

    @field_validator("lambda_values")
    @classmethod
    def _check_lambda_values(cls, values: List[float]) -> List[float]:
        if any(not math.isfinite(v) or v < 0 for v in values):
            raise ValueError(f"lambda_values must be finite and >= 0, got {values}")
        if len(set(values)) != len(values):
            raise ValueError(f"lambda_values must be distinct, got {values}")
        return sorted(float(v) for v in values)

    @field_validator("checks")
    @classmethod
    def _check_checks(cls, values: List[CheckName]) -> List[CheckName]:
        return _in_declared_order(values)

    # ------------------------------------------------------------------
    # Derived views
    # ------------------------------------------------------------------

    def domain_specs(self) -> List[DomainSpec]:
        return [domain.to_spec() for domain in self.domains]

    @property
    def oracle_schedule(self) -> List[float]:
        """Exponents for radial-oracle checks; the 2D schedule when none are given."""
        return list(self.oracle_p_values or self.p_schedule)

    @property
    def oracle_radius(self) -> float:
        """Radius of the first disk domain, else the unit disk."""
        for spec in self.domain_specs():
            if spec.kind is DomainKind.DISK:
                return float(spec.radius)
        return 1.0

    def with_checks(self, checks: List[CheckName]) -> "ExperimentConfig":
        return self.model_copy(update={"checks": _in_declared_order(checks)})

    def to_json(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def load_config(path: PathLike) -> ExperimentConfig:
    """
    Parse a JSON config file.

    Raises:
        FileNotFoundError: the file does not exist
        pydantic.ValidationError: the document violates the schema (the message names the field)
    """
    text = Path(path).read_text(encoding="utf-8")
    return ExperimentConfig.model_validate_json(text)


def dump_config(config: ExperimentConfig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(config.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def default_config() -> ExperimentConfig:
    """Unit disk, λ = 0, p = 3: the smallest meaningful run."""
    return ExperimentConfig(
        name="default",
        domains=[DomainConfig(kind="disk", radius=1.0)],
        lambda_values=[0.0],
        p_schedule=[3.0],
        mesh_h=0.025,
        checks=[CheckName.ORACLE_COMPARE],
        output_dir=Path("runs/default"),
    )
