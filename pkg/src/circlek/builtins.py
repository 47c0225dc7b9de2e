"""Built-in example systems and homomorphism blocks.

Two classic families of limits of circle algebras ship as named
builtins:

* ``bunce-deddens``: sizes 1, 2, 4, ... with the two-slot step whose
  diagonal form is diag(f at the base point, f at the running point);
  every step has signature (2, 1).
* ``goodearl``: sizes c, c^2, c^3, ... where each step places p point
  evaluations and c - p running copies on the diagonal; signature
  (c, c - p), requiring 1 <= p < c.

Both are presented as a single-stage prefix with a period-1 tail.
"""

from __future__ import annotations

import cmath
import math

from .docio import DocumentError
from .homs import TypeABlock
from .paths import SampledPath
from .systems import InductiveSystem, PeriodicTail

__all__ = [
    "BUILTIN_NAMES",
    "builtin_system",
    "parse_builtin_name",
    "bunce_deddens_system",
    "goodearl_system",
    "constant_circle_system",
    "bunce_deddens_block",
]

BUILTIN_NAMES = ("bunce-deddens", "goodearl")


def bunce_deddens_system() -> InductiveSystem:
    """Doubling tower with one base-point slot and one running slot."""
    return InductiveSystem(
        stages=((1,),),
        maps=(),
        tail=PeriodicTail(templates=((((2, 1),),),), pads=((0,),)),
    )


def goodearl_system(c: int = 4, p: int = 2) -> InductiveSystem:
    """Tower with ratio c, p point evaluations per step; needs 1 <= p < c."""
    if c < 2:
        raise DocumentError(f"goodearl ratio must be >= 2, got c={c}")
    if not 1 <= p < c:
        raise DocumentError(
            f"goodearl parameters need 1 <= p < c, got p={p}, c={c}"
        )
    return InductiveSystem(
        stages=((c,),),
        maps=(),
        tail=PeriodicTail(templates=((((c, c - p),),),), pads=((0,),)),
    )


def constant_circle_system(size: int = 1) -> InductiveSystem:
    """Constant tower on one summand of the given size, identity signature."""
    return InductiveSystem(
        stages=((size,),),
        maps=(),
        tail=PeriodicTail(templates=((((1, 1),),),), pads=((0,),)),
    )


def parse_builtin_name(name: str) -> tuple[str, dict[str, int]]:
    """Split ``"goodearl:c=4,p=2"`` into the base name and parameters."""
    base, _, params_text = name.partition(":")
    base = base.strip()
    params: dict[str, int] = {}
    if params_text:
        for item in params_text.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if not key or not value.strip():
                raise DocumentError(f"bad builtin parameter {item!r} in {name!r}")
            try:
                params[key] = int(value)
            except ValueError as err:
                raise DocumentError(
                    f"builtin parameter {key!r} must be an integer, got {value!r}"
                ) from err
    return base, params


def builtin_system(name: str) -> InductiveSystem:
    """Builtin by name, with optional ``name:key=value,...`` parameters."""
    base, params = parse_builtin_name(name)
    if base == "bunce-deddens":
        if params:
            raise DocumentError(f"bunce-deddens takes no parameters, got {params}")
        return bunce_deddens_system()
    if base == "goodearl":
        extra = set(params) - {"c", "p"}
        if extra:
            raise DocumentError(f"unknown goodearl parameters {sorted(extra)}")
        return goodearl_system(c=params.get("c", 4), p=params.get("p", 2))
    raise DocumentError(
        f"unknown builtin {base!r}; available: {', '.join(BUILTIN_NAMES)}"
    )


def bunce_deddens_block(grid: int = 512) -> TypeABlock:
    """The doubling step as a data tuple.

    Two half-rotation paths t -> e^{i*pi*t} and t -> e^{i*pi*(1+t)},
    swapped by the permutation; its diagonal form has windings {0, 1}
    and signature (2, 1).
    """
    first = SampledPath(
        tuple(cmath.exp(1j * math.pi * k / (grid - 1)) for k in range(grid))
    )
    second = SampledPath(
        tuple(cmath.exp(1j * math.pi * (1 + k / (grid - 1))) for k in range(grid))
    )
    return TypeABlock(
        source_size=1,
        target_size=2,
        multiplicity=2,
        permutation=(1, 0),
        paths=(first, second),
    )
