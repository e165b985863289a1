from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Any

from config.settings import REPORT_SCHEMA_VERSION


class InputFingerprint(BaseModel):
    """What was loaded and how it was normalized"""
    path: Optional[str] = None
    format: Optional[str] = None
    vertices: int
    edges: int
    scale: float = 1.0
    dropped_self_loops: int = 0
    merged_parallel_edges: int = 0


class InvariantResult(BaseModel):
    """One verifier outcome; failures carry a witness"""
    name: str
    ok: bool
    witness: Optional[Dict[str, Any]] = None


class Report(BaseModel):
    """Everything a command prints"""
    schema_version: str = REPORT_SCHEMA_VERSION
    command: str
    config: Dict[str, Any] = {}
    input: Optional[InputFingerprint] = None
    metrics: Dict[str, Any] = {}
    invariants: List[InvariantResult] = []
    timings: Dict[str, float] = {}
    document: Optional[Dict[str, Any]] = Field(default=None, description="Primary output document")

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.invariants)

    def check(self, name: str, ok: bool, witness: Optional[Dict[str, Any]] = None) -> bool:
        self.invariants.append(InvariantResult(name=name, ok=ok, witness=None if ok else (witness or {})))
        return ok
