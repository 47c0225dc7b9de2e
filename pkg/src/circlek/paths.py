"""Paths and loops on the unit circle, with discrete winding numbers.

Two representations: an exact power path t -> e^{2*pi*i*(d + b*t)} with
integer winding ``b`` and rational phase ``d``, and a sampled path given
by unit-modulus points on the closed uniform grid t_k = k/(N-1).

Winding numbers of sampled loops are computed by summing principal angle
increments.  Each increment must stay strictly inside (-pi, pi); adjacent
samples subtending an angle of pi or more make the winding ill-defined
and are rejected (sampling adequacy).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

UNIT_MODULUS_TOL = 1e-12
ENDPOINT_TOL = 1e-9
ADEQUACY_MARGIN = 1e-9

__all__ = [
    "PowerPath",
    "SampledPath",
    "CirclePath",
    "PathError",
    "winding_number",
    "lift_increment",
]


class PathError(ValueError):
    """Raised for non-loops, inadequate sampling, or off-circle points."""


@dataclass(frozen=True)
class PowerPath:
    """t -> e^{2*pi*i*(phase + winding*t)} on [0, 1].

    ``winding`` is an integer, so a power path is always a closed loop
    onto its start point e^{2*pi*i*phase}.
    """

    winding: int
    phase: Fraction = Fraction(0)

    def __init__(self, winding: int, phase=Fraction(0)):
        object.__setattr__(self, "winding", int(winding))
        object.__setattr__(self, "phase", Fraction(phase))

    def start(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.phase))

    def end(self) -> complex:
        return self.start()

    def is_loop(self) -> bool:
        return True

    def angle_at(self, t: float) -> float:
        """Circle parameter (in turns) of the path point at time t."""
        return float(self.phase) + self.winding * t

    def sample(self, grid: int) -> "SampledPath":
        """Sampled image on the closed uniform grid with ``grid`` points."""
        if grid < 2:
            raise PathError(f"grid must have at least 2 points, got {grid}")
        pts = tuple(
            cmath.exp(2j * math.pi * self.angle_at(k / (grid - 1)))
            for k in range(grid)
        )
        return SampledPath(pts)


@dataclass(frozen=True)
class SampledPath:
    """Unit-modulus samples on the closed uniform grid t_k = k/(N-1)."""

    points: tuple[complex, ...]

    def __init__(self, points):
        pts = tuple(complex(z) for z in points)
        if len(pts) < 2:
            raise PathError("a sampled path needs at least 2 points")
        for k, z in enumerate(pts):
            if abs(abs(z) - 1.0) > UNIT_MODULUS_TOL:
                raise PathError(
                    f"sample {k} has modulus {abs(z)!r}, not on the unit circle"
                )
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def start(self) -> complex:
        return self.points[0]

    def end(self) -> complex:
        return self.points[-1]

    def is_loop(self, tol: float = ENDPOINT_TOL) -> bool:
        return abs(self.points[0] - self.points[-1]) <= tol

    def angle_at(self, index: int) -> float:
        """Circle parameter (in turns, principal branch) of sample ``index``."""
        z = self.points[index]
        return math.atan2(z.imag, z.real) / (2 * math.pi)

    def increments(self) -> list[float]:
        """Principal angle increments between adjacent samples, in radians.

        Rejects any step of |angle| >= pi (up to a small margin): such a
        pair of samples is antipodal or worse and the lift is ambiguous.
        """
        out = []
        for k in range(len(self.points) - 1):
            step = self.points[k + 1] / self.points[k]
            d = math.atan2(step.imag, step.real)
            if abs(d) >= math.pi - ADEQUACY_MARGIN:
                raise PathError(
                    f"samples {k} and {k + 1} subtend an angle of {abs(d):.6f} rad;"
                    " sampling too coarse for a well-defined winding"
                )
            out.append(d)
        return out


CirclePath = PowerPath | SampledPath


def lift_increment(path: CirclePath) -> float:
    """Total argument-lift change over the path, in turns (units of 2*pi).

    For a loop this equals the winding number.  Sampled paths must satisfy
    the adjacent-angle adequacy condition.
    """
    if isinstance(path, PowerPath):
        return float(path.winding)
    return sum(path.increments()) / (2 * math.pi)


def winding_number(loop: CirclePath) -> int:
    """Winding number of a closed path around the circle.

    Power paths return their exact winding.  Sampled paths must close up
    (first and last points coincide) and the summed increments must land
    within 1e-6 of an integer.
    """
    if isinstance(loop, PowerPath):
        return loop.winding
    if not loop.is_loop():
        raise PathError(
            f"path is not a loop: endpoints {loop.start()!r} and {loop.end()!r} differ"
        )
    turns = lift_increment(loop)
    nearest = round(turns)
    if abs(turns - nearest) > 1e-6:
        raise PathError(f"lift of a closed loop is {turns!r}, not near an integer")
    return int(nearest)
