"""Wire models for instance and pattern files."""
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core import Pattern, SignedCompleteGraph


def _check_pairs(n: int, pairs: List[Tuple[int, int]], name: str) -> None:
    seen = set()
    for i, (u, v) in enumerate(pairs):
        if not (1 <= u < v <= n):
            raise ValueError(f"{name}[{i}] = [{u}, {v}] must satisfy 1 <= u < v <= n (n={n})")
        if (u, v) in seen:
            raise ValueError(f"{name}[{i}] = [{u}, {v}] is listed twice")
        seen.add((u, v))


class InstanceFile(BaseModel):
    """{"n": int, "plus_edges": [[u, v], ...]}; unlisted pairs are minus."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    plus_edges: List[Tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_plus_edges(self):
        _check_pairs(self.n, self.plus_edges, "plus_edges")
        return self

    def to_graph(self) -> SignedCompleteGraph:
        return SignedCompleteGraph(self.n, frozenset(self.plus_edges))

    @classmethod
    def from_graph(cls, host: SignedCompleteGraph) -> "InstanceFile":
        return cls(n=host.n, plus_edges=host.sorted_plus_edges())


class PatternFile(BaseModel):
    """{"n": int, "edges": [[u, v], ...]}"""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_edges(self):
        _check_pairs(self.n, self.edges, "edges")
        return self

    def to_pattern(self) -> Pattern:
        return Pattern(self.n, frozenset(self.edges))

    @classmethod
    def from_pattern(cls, pattern: Pattern) -> "PatternFile":
        return cls(n=pattern.n, edges=pattern.sorted_edges())


PathLike = Union[str, Path]


def load_instance(path: PathLike) -> SignedCompleteGraph:
    return InstanceFile.model_validate_json(Path(path).read_text(encoding="utf-8")).to_graph()


def load_pattern(path: PathLike) -> Pattern:
    return PatternFile.model_validate_json(Path(path).read_text(encoding="utf-8")).to_pattern()


def save_instance(host: SignedCompleteGraph, path: PathLike) -> None:
    Path(path).write_text(InstanceFile.from_graph(host).model_dump_json() + "\n", encoding="utf-8")


def save_pattern(pattern: Pattern, path: PathLike) -> None:
    Path(path).write_text(PatternFile.from_pattern(pattern).model_dump_json() + "\n", encoding="utf-8")
