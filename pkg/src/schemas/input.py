"""Input schemas: parsed scenario blocks and command options."""

from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, field_validator


class Block(BaseModel):
    """One `kind [name] { key = value; ... }` block of a scenario file."""

    kind: str = Field(..., description="Block kind: config | algebra | ideal | pauto | semigroup | partial_action | rep | family | covrep | crossed | lelement | verify")
    name: Optional[str] = Field(default=None, description="Name other blocks use to refer to this one")
    params: Dict[str, Any] = Field(default_factory=dict, description="Evaluated key/value pairs")
    line: int = Field(default=0, description="Line of the block header, for error messages")


class ScenarioConfig(BaseModel):
    """Settings a scenario may override in its `config { ... }` block."""

    tol: Optional[float] = Field(default=None, gt=0, description="Numerical tolerance")
    bound: Optional[int] = Field(default=None, ge=1, description="Closure bound for generated semigroups")
    mode: Optional[str] = Field(default=None, description="Default covariant-rep mode: strict | lax")
    seed: Optional[int] = Field(default=None, ge=0, description="Root seed for per-directive seeds")
    max_word_length: Optional[int] = Field(default=None, ge=1, description="Longest word checked by the law suites")

    class Config:
        extra = "forbid"


class RunOptions(BaseModel):
    """Options of the `run` command. Flags win over the scenario's config block."""

    target: str = Field(..., description="Scenario file path or builtin name")
    tol: Optional[float] = Field(default=None, gt=0, description="Override numerical tolerance")
    bound: Optional[int] = Field(default=None, ge=1, description="Override closure bound")
    mode: Optional[str] = Field(default=None, description="Override covariant-rep mode: strict | lax")
    seed: Optional[int] = Field(default=None, ge=0, description="Override root seed")
    jobs: Optional[int] = Field(default=None, ge=1, description="Directives run on this many threads")
    report: Optional[str] = Field(default=None, description="Write the text report here")
    machine_report: Optional[str] = Field(default=None, description="Write the JSON report here")

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in ("strict", "lax"):
            raise ValueError(f"Unsupported mode: {value}. Supported: lax, strict")
        return value


FUZZ_FAMILIES = ("covariant", "l-algebra", "partial-action", "section2", "section3", "semilattice")


class FuzzOptions(BaseModel):
    """Options of the `fuzz` command."""

    family: str = Field(..., description="Fuzz family: covariant | l-algebra | partial-action | semilattice; section2 and section3 alias partial-action and covariant")
    count: int = Field(default=100, ge=1, description="Number of random instances")
    seed: int = Field(default=0, ge=0, description="Root seed")
    tol: Optional[float] = Field(default=None, gt=0, description="Override numerical tolerance")
    report: Optional[str] = Field(default=None, description="Write the text report here")
    machine_report: Optional[str] = Field(default=None, description="Write the JSON report here")

    @field_validator("family")
    @classmethod
    def _known_family(cls, value: str) -> str:
        if value not in FUZZ_FAMILIES:
            raise ValueError(f"Unsupported fuzz family: {value}. Supported: {', '.join(FUZZ_FAMILIES)}")
        return value
