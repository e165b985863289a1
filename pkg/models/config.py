from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from typing import Optional, List, Dict, Any

from config.settings import DEFAULT_SEED, THREADS
from modules.errors import ParameterError


class RunConfig(BaseModel):
    """Parsed command line of one run; every command validates through this."""
    command: str
    input_path: Optional[str] = None
    format: Optional[str] = None
    output_path: Optional[str] = None
    document_path: Optional[str] = None
    terminals_path: Optional[str] = None
    save_path: Optional[str] = None
    eps: Optional[float] = Field(default=None, ge=0)
    r: Optional[float] = Field(default=None, gt=0)
    delta: Optional[float] = Field(default=None, gt=0)
    seed: int = DEFAULT_SEED
    q: Optional[int] = Field(default=None, ge=2)
    solver: str = "exact"
    matching: str = "exact"
    builder: str = "local-search"
    hs_strategy: str = "greedy"
    trials: int = Field(default=1, ge=1)
    gamma: Optional[float] = Field(default=None, ge=0, le=0.125)
    lam: Optional[float] = Field(default=None, gt=0)
    threads: int = Field(default=THREADS, ge=1)
    base: Optional[float] = Field(default=None, gt=0)
    ratio: Optional[float] = Field(default=None, gt=1)
    kind: Optional[str] = None
    params: Dict[str, Any] = {}
    queries: int = Field(default=0, ge=0)
    pair: Optional[List[int]] = None
    strict_induced: bool = False
    verbosity: int = 0

    @field_validator("solver")
    @classmethod
    def known_solver(cls, value: str) -> str:
        if value not in ("exact", "heuristic"):
            raise ValueError(f"solver must be exact or heuristic, got {value}")
        return value

    @field_validator("matching")
    @classmethod
    def known_matching(cls, value: str) -> str:
        if value not in ("exact", "greedy"):
            raise ValueError(f"matching must be exact or greedy, got {value}")
        return value

    @model_validator(mode="after")
    def scale_present(self) -> "RunConfig":
        if self.command in ("spc", "towns") and self.r is None:
            raise ValueError(f"{self.command} needs --r")
        if self.command in ("decompose", "cover", "partition-cover") and self.delta is None:
            raise ValueError(f"{self.command} needs --delta")
        if self.command == "nets" and (self.base is None or self.ratio is None):
            raise ValueError("nets needs --base and --ratio")
        if self.pair is not None and len(self.pair) != 2:
            raise ValueError("a query takes exactly two vertex ids")
        return self


def run_config(**values) -> RunConfig:
    """RunConfig, with pydantic validation failures reported as ParameterError."""
    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ParameterError(f"invalid options: {problems}") from e
