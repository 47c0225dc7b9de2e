"""Numeric realization of blocks as matrix-valued functions on the circle.

This is the floating-point oracle for the exact machinery: a block is
turned into the actual map f -> u(t) diag(f(path_1(t)), ...) u(t)*
(zero-padded to the target size) and evaluated on a uniform grid, so
multiplicativity, adjoint preservation, and endpoint closure can be
checked numerically.

Input functions are sampled on the closed grid t_k = k/(N-1) and
evaluated off-grid by trigonometric interpolation (exact for band-limited
samples, which is what the test functions are).  The connecting unitary
path for a permuted block is synthesized canonically: each transposition
of each cycle contributes a planar rotation by pi*t/2, which lands on the
permutation matrix up to diagonal signs at t=1; signs cancel when
conjugating block-diagonal matrices, so the realized map closes up on the
circle exactly like the original.
"""

from __future__ import annotations

import numpy as np

from .homs import DiagonalBlock, TypeABlock, permutation_cycles
from .paths import PowerPath, SampledPath

REALIZE_TOL = 1e-9

__all__ = ["GridFunction", "RealizeError", "realize", "synthesize_unitary", "numeric_signature"]


class RealizeError(ValueError):
    """Raised for grid mismatches or failed internal unitarity checks."""


class GridFunction:
    """Matrix-valued function sampled on the closed uniform grid.

    ``samples`` has shape (N, n, n) with samples[k] = f at t_k = k/(N-1);
    the first and last samples must agree within tolerance (the function
    lives on the circle).  Evaluation anywhere reconstructs from the
    discrete Fourier coefficients of the N-1 distinct samples.
    """

    def __init__(self, samples, tol: float = REALIZE_TOL):
        arr = np.asarray(samples, dtype=complex)
        if arr.ndim == 1:
            arr = arr[:, None, None]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise RealizeError(f"samples must have shape (N, n, n), got {arr.shape}")
        if arr.shape[0] < 3:
            raise RealizeError("need at least 3 grid points")
        closure = np.max(np.abs(arr[0] - arr[-1]))
        if closure > tol:
            raise RealizeError(
                f"function does not close up on the circle: |f(0)-f(1)| = {closure:g}"
            )
        self.samples = arr
        self.grid = arr.shape[0]
        self.size = arr.shape[1]
        unique = arr[:-1]
        self._coeffs = np.fft.fft(unique, axis=0) / unique.shape[0]
        self._freqs = np.rint(
            np.fft.fftfreq(unique.shape[0]) * unique.shape[0]
        ).astype(int)

    @classmethod
    def from_callable(cls, func, size: int, grid: int = 512) -> "GridFunction":
        """Sample ``func(t) -> (size, size) array`` on the closed grid."""
        ts = np.linspace(0.0, 1.0, grid)
        samples = np.stack([np.asarray(func(t), dtype=complex).reshape(size, size) for t in ts])
        return cls(samples)

    def eval(self, param: float) -> np.ndarray:
        """Value at circle parameter ``param`` (in turns, any branch)."""
        phases = np.exp(2j * np.pi * self._freqs * param)
        return np.tensordot(phases, self._coeffs, axes=(0, 0))

    def at_index(self, index: int) -> np.ndarray:
        return self.samples[index]

    def __matmul__(self, other: "GridFunction") -> "GridFunction":
        if self.grid != other.grid or self.size != other.size:
            raise RealizeError("grid or size mismatch in pointwise product")
        return GridFunction(np.einsum("kij,kjl->kil", self.samples, other.samples))

    def adjoint(self) -> "GridFunction":
        return GridFunction(np.conjugate(np.transpose(self.samples, (0, 2, 1))))


def synthesize_unitary(permutation: tuple[int, ...], t: float) -> np.ndarray:
    """Canonical path from the identity to the permutation matrix (up to signs).

    Each cycle (c1 ... cr) factors as transpositions (c1 cr)...(c1 c2);
    each transposition (i j) becomes the rotation by pi*t/2 in the (i, j)
    plane.  At t=1 the product is the permutation matrix with some rows
    negated, which conjugates block-diagonal matrices exactly like the
    permutation matrix itself.
    """
    a = len(permutation)
    u = np.eye(a, dtype=complex)
    angle = np.pi * t / 2.0
    c, s = np.cos(angle), np.sin(angle)
    for cycle in permutation_cycles(permutation):
        head = cycle[0]
        for other in reversed(cycle[1:]):
            g = np.eye(a, dtype=complex)
            g[head, head] = c
            g[other, other] = c
            g[other, head] = s
            g[head, other] = -s
            u = u @ g
    return u


def _path_param(path, t_index: int, grid: int) -> float:
    if isinstance(path, PowerPath):
        return path.angle_at(t_index / (grid - 1))
    if isinstance(path, SampledPath):
        if len(path) != grid:
            raise RealizeError(
                f"path sampled on {len(path)} points, function on {grid}"
            )
        return path.angle_at(t_index)
    raise RealizeError(f"unsupported path type {type(path).__name__}")


def realize(block: TypeABlock | DiagonalBlock, f: GridFunction, t_index: int) -> np.ndarray:
    """Evaluate the realized map at grid point ``t_index``.

    Returns the target_size x target_size complex matrix
    u(t) diag(f(path_1(t)), ..., f(path_a(t)), 0) u(t)*.
    """
    if f.size != block.source_size:
        raise RealizeError(
            f"function takes {f.size}x{f.size} values, block source size is "
            f"{block.source_size}"
        )
    if not 0 <= t_index < f.grid:
        raise RealizeError(f"grid index {t_index} out of range [0, {f.grid})")
    n = block.source_size
    ell = block.target_size
    a = block.multiplicity
    out = np.zeros((ell, ell), dtype=complex)
    if a == 0:
        return out
    t = t_index / (f.grid - 1)
    if isinstance(block, DiagonalBlock):
        values = [f.eval(b * t) for b in block.windings]
        w = np.eye(a, dtype=complex)
    else:
        values = [f.eval(_path_param(p, t_index, f.grid)) for p in block.paths]
        w = synthesize_unitary(block.permutation, t)
        deviation = np.max(np.abs(w @ w.conj().T - np.eye(a)))
        if deviation > REALIZE_TOL:
            raise RealizeError(f"synthesized path is not unitary: deviation {deviation:g}")
    core = np.zeros((a * n, a * n), dtype=complex)
    for p, val in enumerate(values):
        core[p * n : (p + 1) * n, p * n : (p + 1) * n] = val
    u = np.kron(w, np.eye(n, dtype=complex))
    out[: a * n, : a * n] = u @ core @ u.conj().T
    return out


def numeric_signature(block: TypeABlock | DiagonalBlock, grid: int = 512) -> tuple[int, int]:
    """Recover the signature of a block from its realized map.

    The multiplicity is read off the rank of the realized identity; the
    total winding is the winding number of t -> det of the occupied
    corner of the realized map applied to f(z) = z (an independent check
    on the exact reduction, since the determinant of the conjugating
    unitary drops out).
    """
    from .paths import winding_number

    n = block.source_size
    a = block.multiplicity
    if a == 0:
        return (0, 0)
    ts = np.linspace(0.0, 1.0, grid)
    ident = GridFunction(np.stack([np.exp(2j * np.pi * t) * np.eye(n) for t in ts]))
    dets = []
    for k in range(grid):
        corner = realize(block, ident, k)[: a * n, : a * n]
        d = np.linalg.det(corner)
        dets.append(d / abs(d))
    total = winding_number(SampledPath(tuple(dets)))
    assert total % n == 0, "determinant winding must be divisible by the fiber size"
    return (a, total // n)
