"""Uniformly sampled trajectories and their CSV form."""

from __future__ import annotations

import csv
import io
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fracdyn.errors import TooFewSamples

__all__ = ["SampledTrajectory", "write_csv", "read_csv", "parse_csv"]


@dataclass(frozen=True, eq=False)
class SampledTrajectory:
    """Values ``x(t0 + i*h)`` for ``i = 0 .. n-1``."""

    t0: float
    h: float
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("trajectory values must be one-dimensional")
        if not self.h > 0:
            raise ValueError(f"step must be positive, got {self.h}")
        if values.size < 2:
            raise TooFewSamples("a trajectory needs at least 2 samples")
        values.setflags(write=False)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "values", values)

    @classmethod
    def sample(cls, f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> SampledTrajectory:
        """Sample ``f`` on ``n`` equal intervals of ``[a, b]`` (``n + 1`` nodes)."""
        h = (b - a) / n
        t = a + h * np.arange(n + 1)
        return cls(a, h, np.asarray(f(t), dtype=float))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.t0 + self.h * (self.n - 1)

    def with_values(self, values: np.ndarray) -> SampledTrajectory:
        return SampledTrajectory(self.t0, self.h, values)

    def rescaled(self, tau: float) -> SampledTrajectory:
        """Same samples on the time axis divided by ``tau``: ``u -> x(u*tau)``."""
        return SampledTrajectory(self.t0 / tau, self.h / tau, self.values)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"SampledTrajectory(t0={self.t0!r}, h={self.h!r}, n={self.n})"


def _fmt(v: float) -> str:
    return "%.17g" % v


def write_csv(traj: SampledTrajectory, path: str | Path | None = None, column: str = "x") -> str:
    """Write ``t,<column>`` rows with ``%.17g`` formatting; returns the text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", column])
    for t, v in zip(traj.t, traj.values):
        w.writerow([_fmt(t), _fmt(v)])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_csv(path: str | Path, rtol: float = 1e-9) -> SampledTrajectory:
    return parse_csv(Path(path).read_text(encoding="utf-8"), rtol)


def parse_csv(text: str, rtol: float = 1e-9) -> SampledTrajectory:
    """Parse a two-column trajectory; the grid must be uniform to ``rtol``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0][:1]] != ["t"] or len(rows[0]) != 2:
        raise ValueError("trajectory CSV must have a 't,<name>' header")
    data = np.array([[float(a), float(b)] for a, b in rows[1:] if a.strip()], dtype=float)
    if data.shape[0] < 2:
        raise TooFewSamples("a trajectory needs at least 2 samples")
    t = data[:, 0]
    steps = np.diff(t)
    h = (t[-1] - t[0]) / (t.size - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > rtol * max(abs(h), 1.0):
        raise ValueError("trajectory grid is not uniform")
    return SampledTrajectory(t[0], h, data[:, 1])
