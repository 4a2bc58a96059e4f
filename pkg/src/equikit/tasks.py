"""Executable toy tasks: center of mass, image decoloring/flips, and
antisymmetric (Slater-determinant) functions."""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .activations import Report
from .network import Dataset
from .numerics import determinant


def center_of_mass(points):
    """Mean of m unit-mass positions, an (m, 3) array -> length-3 vector.

    Coordinates are accumulated with an exactly rounded sum, so the
    result is bit-identical under any reordering of the points.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 3 or points.shape[0] == 0:
        raise ValueError(f"expected a nonempty (m, 3) array, got {points.shape}")
    m = points.shape[0]
    return np.array([math.fsum(points[:, c]) / m for c in range(3)])


def com_dataset(m, samples, seed=0):
    """Flattened random point clouds paired with their centers of mass.

    Inputs are uniform in [-1, 1]; deterministic per seed.
    """
    if m < 1 or samples < 1:
        raise ValueError("m and samples must be >= 1")
    rng = np.random.default_rng(seed)
    inputs = rng.uniform(-1.0, 1.0, size=(samples, 3 * m))
    targets = np.stack([center_of_mass(row.reshape(m, 3)) for row in inputs])
    return Dataset(inputs, targets)


@dataclass
class GridImage:
    """N x N RGB image; values in [0, 255], shape (N, N, 3)."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.n, self.n, 3):
            raise ValueError(
                f"expected values of shape ({self.n}, {self.n}, 3), "
                f"got {self.values.shape}"
            )


def random_image(n, seed=0):
    """Seeded random image with integer channel values in [0, 255]."""
    rng = np.random.default_rng(seed)
    return GridImage(n, rng.integers(0, 256, size=(n, n, 3)).astype(np.float64))


def decolor(img):
    """Map every pixel to pitch black iff r=g=b=0, else pure white."""
    nonzero = (img.values != 0.0).any(axis=2)
    out = np.zeros_like(img.values)
    out[nonzero] = 255.0
    return GridImage(img.n, out)


def flip(img, axis):
    """Reverse the row order (top_bottom) or column order (left_right)."""
    if axis == "top_bottom":
        return GridImage(img.n, img.values[::-1].copy())
    if axis == "left_right":
        return GridImage(img.n, img.values[:, ::-1].copy())
    raise ValueError(f"axis must be 'top_bottom' or 'left_right', got {axis!r}")


def write_image(img, fh):
    """Text format: header 'N 3', then N*N lines of three integers."""
    fh.write(f"{img.n} 3\n")
    for r in range(img.n):
        for c in range(img.n):
            px = img.values[r, c]
            fh.write(f"{int(px[0])} {int(px[1])} {int(px[2])}\n")


def read_image(fh):
    header = fh.readline().split()
    if len(header) != 2 or header[1] != "3":
        raise ValueError("image header must be 'N 3'")
    n = int(header[0])
    values = np.zeros((n, n, 3))
    for r in range(n):
        for c in range(n):
            parts = fh.readline().split()
            if len(parts) != 3:
                raise ValueError(f"pixel ({r}, {c}): expected three values")
            values[r, c] = [float(v) for v in parts]
    return GridImage(n, values)


def slater_det(feature_matrix):
    """Determinant of M[i][j] = phi_j(v_i), via pivoted elimination."""
    return float(determinant(feature_matrix))


def monomial_features(points, direction):
    """Feature matrix M[i][j] = (v_i . u)^j for j = 0..m-1."""
    points = np.asarray(points, dtype=np.float64)
    m = points.shape[0]
    proj = points @ np.asarray(direction, dtype=np.float64)
    return proj[:, None] ** np.arange(m)[None, :]


def slater_wavefunction(dim=3, seed=0):
    """Antisymmetric function of m points: det of seeded monomial features."""
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(dim)
    u /= np.sqrt(u @ u)

    def f(points):
        return slater_det(monomial_features(points, u))

    return f


def permutation_sign(perm):
    """Parity of a permutation given as a tuple of indices."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def check_antisymmetry(f, m, dim=3, trials=10, seed=0, tol=1e-10):
    """Exhaustively test f(pi v) = sign(pi) f(v) over all of S_m.

    ``f`` maps an (m, dim) array to a scalar. Limited to m <= 6 (720
    permutations); inputs are seeded uniform in [-1, 1] and residuals
    are normalized by 1 + |f(v)|.
    """
    if m > 6:
        raise ValueError("exhaustive antisymmetry check is limited to m <= 6")
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    for _ in range(trials):
        points = rng.uniform(-1.0, 1.0, size=(m, dim))
        base = f(points)
        for perm in itertools.permutations(range(m)):
            value = f(points[list(perm)])
            residual = abs(value - permutation_sign(perm) * base) / (1.0 + abs(base))
            if residual > worst:
                worst = residual
                witness = (perm, points.copy())
    passed = worst <= tol
    return Report(passed, worst, None if passed else witness)
