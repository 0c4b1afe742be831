# cli/problem.py

import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, TextIO, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from config import Settings
from core.builtins import demo_families
from core.errors import ProblemParseError, SubspaceMembershipError
from core.frames import WeightedFamily
from core.lifting import LocalFrameSystem

Vector = List[float]


# -----------------------------
# File format
# -----------------------------
class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class SubspaceSpec(_Strict):
    weight: float = 1.0
    spanning_vectors: List[Vector] = Field(default_factory=list)

    @field_validator("weight")
    @classmethod
    def weight_positive(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError("weight must be positive")
        return v


class LocalFramesSpec(_Strict):
    V: Optional[List[List[Vector]]] = None
    W: Optional[List[List[Vector]]] = None


class SampleSpec(_Strict):
    count: int = Field(ge=1)
    seed: int = 0


class OptionsSpec(_Strict):
    frame_tol: Optional[float] = Field(None, gt=0)
    rank_tol: Optional[float] = Field(None, gt=0)
    pattern_cap: Optional[int] = Field(None, ge=0)
    per_pattern_limit: Optional[int] = Field(None, ge=0)
    sample: Optional[SampleSpec] = None

    def overrides(self) -> dict:
        out = self.model_dump(exclude={"sample"}, exclude_none=True)
        if self.sample is not None:
            out.update(sample_count=self.sample.count, sample_seed=self.sample.seed)
        return out


class ProblemFile(_Strict):
    ambient_dim: int = Field(ge=1)
    V: List[SubspaceSpec]
    W: List[SubspaceSpec]
    local_frames: Optional[LocalFramesSpec] = None
    options: Optional[OptionsSpec] = None


@dataclass(frozen=True)
class Problem:
    ambient_dim: int
    v: WeightedFamily
    w: WeightedFamily
    v_local: Optional[LocalFrameSystem] = None
    w_local: Optional[LocalFrameSystem] = None
    source: str = "<memory>"

    @property
    def size(self) -> int:
        return self.v.size


# -----------------------------
# Parsing
# -----------------------------
def _format_loc(loc) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out or "<root>"


def _format_validation(e: ValidationError) -> str:
    messages = []
    for err in e.errors():
        msg = err["msg"].removeprefix("Value error, ")
        messages.append(f"{msg} at {_format_loc(err['loc'])}")
    return "; ".join(messages)


def parse_problem(source: Union[str, Path, TextIO, None] = None) -> ProblemFile:
    """
    Read and validate a problem file. source is a path, '-' / None for stdin,
    or an open text stream.
    """
    if source is None or source == "-":
        text, name = sys.stdin.read(), "<stdin>"
    elif hasattr(source, "read"):
        text, name = source.read(), getattr(source, "name", "<stream>")
    else:
        try:
            text, name = Path(source).read_text(encoding="utf-8"), str(source)
        except OSError as e:
            raise ProblemParseError(f"cannot read problem file: {e}") from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemParseError(f"{name}: syntax error at line {e.lineno} column {e.colno}: {e.msg}") from e
    try:
        problem = ProblemFile.model_validate(raw)
    except ValidationError as e:
        raise ProblemParseError(f"{name}: {_format_validation(e)}") from e
    _check_dimensions(problem)
    logging.info(f"parsed problem {name}: ambient_dim={problem.ambient_dim}, {len(problem.V)} members")
    return problem


def _check_vectors(vectors: List[Vector], n: int, where: str) -> None:
    for j, vec in enumerate(vectors):
        if len(vec) != n:
            raise ProblemParseError(f"dimension mismatch at {where}[{j}]: expected length {n}, got {len(vec)}")


def _check_dimensions(problem: ProblemFile) -> None:
    n = problem.ambient_dim
    if len(problem.V) != len(problem.W):
        raise ProblemParseError(f"V and W must have the same number of members ({len(problem.V)} vs {len(problem.W)})")
    for name in ("V", "W"):
        for i, spec in enumerate(getattr(problem, name)):
            _check_vectors(spec.spanning_vectors, n, f"{name}[{i}].spanning_vectors")
    if problem.local_frames is not None:
        for name in ("V", "W"):
            frames = getattr(problem.local_frames, name)
            if frames is None:
                continue
            if len(frames) != len(problem.V):
                raise ProblemParseError(
                    f"local_frames.{name} has {len(frames)} entries for {len(problem.V)} members"
                )
            for i, vectors in enumerate(frames):
                _check_vectors(vectors, n, f"local_frames.{name}[{i}]")


def resolve_settings(base: Settings, problem: Optional[ProblemFile], **flags) -> Settings:
    """Environment < problem options < command-line flags."""
    settings = base
    if problem is not None and problem.options is not None:
        settings = settings.with_overrides(**problem.options.overrides())
    return settings.with_overrides(**flags)


def build_problem(problem: ProblemFile, settings: Settings, source: str = "<memory>") -> Problem:
    n = problem.ambient_dim

    def family(specs: List[SubspaceSpec]) -> WeightedFamily:
        return WeightedFamily.from_spans(
            [s.spanning_vectors for s in specs], [s.weight for s in specs], ambient_dim=n, tol=settings.rank_tol
        )

    v, w = family(problem.V), family(problem.W)
    local = {"V": None, "W": None}
    if problem.local_frames is not None:
        for name, base in (("V", v), ("W", w)):
            frames = getattr(problem.local_frames, name)
            if frames is None:
                continue
            try:
                local[name] = LocalFrameSystem(base, frames)
            except SubspaceMembershipError as e:
                raise ProblemParseError(f"local_frames.{name}: {e}") from e
    return Problem(n, v, w, local["V"], local["W"], source)


def demo_problem(name: str, n: Optional[int] = None) -> Problem:
    v, w = demo_families(name, n)
    return Problem(v.ambient_dim, v, w, source=f"demo:{name}")
