"""Stage-by-stage record of a pipeline run, and the run result types."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from ..subdivision import SubdivisionCertificate


class PreconditionError(ValueError):
    """A hypothesis of a pipeline operation is violated by the input."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class DuplicateAuxEdge(RuntimeError):
    """Two distinct witnesses map to the same auxiliary edge (a short cycle in the host)."""

    def __init__(self, edge: tuple[int, int], first: int, second: int):
        super().__init__(f"auxiliary edge {edge} produced by both {first} and {second}")
        self.edge = edge
        self.witness = (first, second)


@dataclass
class Stage:
    name: str
    universe: int  # order of the graph the recorded sets live in
    sets: dict[str, frozenset] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    def to_json_obj(self, include_sets: bool = False, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "universe": self.universe,
            "sizes": {k: len(v) for k, v in sorted(self.sets.items())},
            "flags": dict(sorted(self.flags.items())),
            "values": dict(sorted(self.values.items())),
        }
        if include_sets:
            out["sets"] = {k: sorted(v) for k, v in sorted(self.sets.items())}
        if timings:
            out["elapsed"] = round(self.elapsed, 6)
        return out


class PipelineTrace:
    """Ordered list of stages. Sets are stored in the coordinates of ``universe``."""

    def __init__(self):
        self.stages: list[Stage] = []
        self._t0: Optional[float] = None

    def stage(self, name: str, universe: int) -> Stage:
        now = time.perf_counter()
        if self.stages and self._t0 is not None:
            self.stages[-1].elapsed = now - self._t0
        self._t0 = now
        st = Stage(name, universe)
        self.stages.append(st)
        return st

    def close(self) -> None:
        if self.stages and self._t0 is not None:
            self.stages[-1].elapsed = time.perf_counter() - self._t0
            self._t0 = None

    def extend(self, other: "PipelineTrace", prefix: str) -> None:
        for st in other.stages:
            st.name = f"{prefix}/{st.name}"
            self.stages.append(st)

    def get(self, name: str) -> Optional[Stage]:
        for st in reversed(self.stages):
            if st.name == name:
                return st
        return None

    def check_subsets(self) -> list[str]:
        """Names of recorded sets that are not subsets of their stage's vertex range."""
        bad = []
        for st in self.stages:
            for k, v in st.sets.items():
                if any(not (isinstance(x, int) and 0 <= x < st.universe) for x in v):
                    bad.append(f"{st.name}.{k}")
        return bad

    def to_json_obj(self, include_sets: bool = False, timings: bool = False) -> list:
        return [st.to_json_obj(include_sets, timings) for st in self.stages]

    def to_json(self, include_sets: bool = False, timings: bool = False) -> bytes:
        return json.dumps(
            self.to_json_obj(include_sets, timings), separators=(",", ":"), sort_keys=True
        ).encode("ascii")


@dataclass
class PipelineResult:
    """Outcome of a pipeline operation.

    ``certificate`` is present only after it verified induced and proper.
    ``value`` carries non-certificate outputs (the cleaning step's sets).
    ``failed_stage`` names the stage that ended an unsuccessful run.
    """

    trace: PipelineTrace
    certificate: Optional[SubdivisionCertificate] = None
    value: Any = None
    failed_stage: Optional[str] = None
    reason: str = ""
    attempts: int = 0

    @property
    def ok(self) -> bool:
        return self.failed_stage is None


def frozen(xs: Iterable[int]) -> frozenset:
    return frozenset(xs)
