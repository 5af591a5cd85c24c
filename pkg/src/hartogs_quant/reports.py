"""Check reports, sampler configuration and deterministic random streams."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ParameterError

BLOCK_SIZE = 4096


@dataclass
class CheckReport:
    """Machine-readable outcome of one verification suite.

    ``statistic`` is compared against ``bound``; ``details`` carries every
    secondary quantity the suite computed.
    """

    suite: str
    params: dict
    statistic: float
    bound: float
    passed: bool
    n_samples: int = 0
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "statistic": self.statistic,
            "bound": self.bound,
            "pass": bool(self.passed),
            "n_samples": int(self.n_samples),
            "seed": self.seed,
            "details": self.details,
        }

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.suite}: statistic={self.statistic:.6g} bound={self.bound:.6g}"


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling parameters for the property suites.

    ``stress_fraction`` of the points get ``|w|^2`` pushed to between 0.9
    and ``stress_max`` of ``N^mu``.
    """

    n_samples: int = 10_000
    seed: int = 42
    shards: int = 1
    stress_fraction: float = 0.25
    stress_max: float = 0.999
    method: str = "radial"

    def __post_init__(self):
        if self.n_samples < 1:
            raise ParameterError("n_samples must be >= 1")
        if self.shards < 1:
            raise ParameterError("shards must be >= 1")


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent generator for sample block ``block`` of stream ``seed``.

    Samples are produced in fixed-size blocks, each with its own substream, so
    results do not depend on how blocks are distributed over workers.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def block_sizes(n: int, block_size: int = BLOCK_SIZE) -> list[int]:
    full, rest = divmod(n, block_size)
    return [block_size] * full + ([rest] if rest else [])


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and complex numbers to JSON-ready values.

    Complex numbers become ``[re, im]``; non-finite floats become strings.
    """
    if isinstance(obj, CheckReport):
        return to_jsonable(obj.as_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        return val if math.isfinite(val) else str(val)
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON (sorted keys, round-trip float repr)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)
