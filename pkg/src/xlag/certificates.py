"""Small records shared across modules: grids and certificates."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParams


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid ``[start, x_max]`` with spacing ``step``."""

    x_max: float
    step: float = 0.01
    start: float = 0.0

    def __post_init__(self):
        if self.step <= 0:
            raise InvalidParams("grid step must be positive")
        if self.x_max <= self.start:
            raise InvalidParams("grid x_max must exceed its start")

    def points(self):
        count = int(np.floor((self.x_max - self.start) / self.step + 1e-9)) + 1
        pts = self.start + self.step * np.arange(count)
        if pts[-1] < self.x_max:
            pts = np.append(pts, self.x_max)
        return pts


@dataclass
class Certificate:
    """Outcome of a numerical check.

    ``passed`` is ``margin > 0``; ``witness`` is the point (or interval)
    where the margin was smallest; ``method`` says how the check was done.
    """

    passed: bool
    margin: float
    witness: object
    method: str
    details: dict = field(default_factory=dict)

    @classmethod
    def from_margin(cls, margin, witness, method, **details):
        return cls(bool(margin > 0), float(margin), witness, method, details)

    def to_dict(self):
        return {
            "pass": self.passed,
            "margin": self.margin,
            "witness": _plain(self.witness),
            "method": self.method,
            "details": {k: _plain(v) for k, v in self.details.items()},
        }


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value
