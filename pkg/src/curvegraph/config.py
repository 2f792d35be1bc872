"""Run configuration: JSON file, overridden by command-line flags."""

import json
import math
import os
from dataclasses import asdict, dataclass, fields

from . import hyperbolic, intersection
from .errors import PreconditionError

ENV_VAR = "CURVEGRAPH_CONFIG"


@dataclass
class RunConfig:
    precision: object = "binary64"     # or an integer number of mantissa bits
    parabolic: float = hyperbolic.EPS_PARABOLIC
    tangency: float = intersection.LINK_TOL
    cross_ratio: float = 1e-9
    depth: int = 3
    entry_cap: int = 5000
    word_length_cap: int = intersection.DEPTH_CAP
    seeds: object = "default"          # or a list of words

    def __post_init__(self):
        for name in ("parabolic", "tangency", "cross_ratio"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not v > 0:
                raise PreconditionError(f"tolerance {name} must be positive")
        for name in ("entry_cap", "word_length_cap"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise PreconditionError(f"cap {name} must be an integer >= 1")
        if not isinstance(self.depth, int) or self.depth < 0:
            raise PreconditionError("depth must be an integer >= 0")
        if self.precision != "binary64" and not (isinstance(self.precision, int) and self.precision >= 53):
            raise PreconditionError("precision must be 'binary64' or a bit count >= 53")

    @property
    def bits(self):
        return None if self.precision == "binary64" else int(self.precision)

    def to_json(self):
        return asdict(self)

    def apply(self):
        """Push the numeric tolerances into the modules that read them."""
        hyperbolic.EPS_PARABOLIC = self.parabolic
        intersection.LINK_TOL = self.tangency
        intersection.SHAPE_TANGENT = 2 * math.log(2 / self.tangency)
        intersection.DEPTH_CAP = self.word_length_cap


def load_config(path=None, overrides=None):
    """Config from ``path`` (or the file named by $CURVEGRAPH_CONFIG), then ``overrides``."""
    data = {}
    path = path or os.environ.get(ENV_VAR)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    return RunConfig(**data)
