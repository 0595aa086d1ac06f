"""Smooth compactly supported test functions.

The standard mollifier exp(-1/(1-u^2)) rescaled to an arbitrary interval,
normalized to peak value 1, plus a couple of shifted variants used to vary
the test-function shape in verification sweeps.  All are C-infinity with
support exactly [lo, hi].
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Bump:
    """C-infinity bump supported on [lo, hi].

    kind selects the profile:
      "center"  symmetric mollifier peaking at the midpoint
      "left"    peak shifted toward lo (asymmetric)
      "right"   peak shifted toward hi (asymmetric)
    """

    lo: float
    hi: float
    kind: str = "center"

    def __post_init__(self):
        if not (self.hi > self.lo):
            raise ValueError("need hi > lo")
        if self.kind not in ("center", "left", "right"):
            raise ValueError("unknown bump kind %r" % (self.kind,))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (2.0 * x - (self.hi + self.lo)) / (self.hi - self.lo)
        if self.kind == "left":
            u = 2.0 * ((u + 1.0) / 2.0) ** 1.5 - 1.0
        elif self.kind == "right":
            u = 1.0 - 2.0 * ((1.0 - u) / 2.0) ** 1.5
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
        return out if out.shape else float(out)

    @property
    def support(self):
        return (self.lo, self.hi)
