"""Constrained weight spaces {A : A rho_in(g) = rho_out(g) A for all g}.

The basis is obtained from the nullspace of the vectorized commutation
constraints stacked over the *generators* only; the homomorphism
property makes that equivalent to constraining over every element (the
full-group version is kept in the test suite as an independent oracle,
together with the character-based dimension count below).
"""

from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOL, nullspace
from .reps import Representation


@dataclass
class IntertwinerBasis:
    """Frobenius-orthonormal basis of an intertwiner space.

    ``basis`` has shape (dim, n_out, n_in); each slice B satisfies
    B @ rho_in(g) = rho_out(g) @ B for every group element.
    """

    rep_in: Representation
    rep_out: Representation
    dim: int
    basis: np.ndarray

    def realize(self, coeffs):
        """Linear combination sum_j coeffs[j] * basis[j]."""
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coefficients, got {coeffs.shape}")
        if self.dim == 0:
            return np.zeros((self.rep_out.degree, self.rep_in.degree))
        return np.tensordot(coeffs, self.basis, axes=1)

    def project(self, a):
        """Coefficients of the Frobenius-orthogonal projection of ``a``."""
        return np.tensordot(self.basis, a, axes=[[1, 2], [0, 1]])


def solve_basis(rep_in, rep_out, tol=DEFAULT_TOL):
    """Solve for the intertwiner space between two representations.

    Stacks, per generator g, the constraint on vec(A) induced by
    A rho_in(g) - rho_out(g) A = 0 (row-major vectorization) and returns
    the orthonormalized nullspace reshaped to matrices.
    """
    if rep_in.group is not rep_out.group:
        raise ValueError("representations must share the same group")
    n_in, n_out = rep_in.degree, rep_out.degree
    eye_in, eye_out = np.eye(n_in), np.eye(n_out)
    blocks = []
    for g in range(rep_in.group.gen_count):
        blocks.append(
            np.kron(eye_out, rep_in.gen_images[g].T)
            - np.kron(rep_out.gen_images[g], eye_in)
        )
    ns = nullspace(np.vstack(blocks), tol=tol)
    dim = ns.shape[1]
    basis = ns.T.reshape(dim, n_out, n_in)
    return IntertwinerBasis(rep_in, rep_out, dim, basis)


def hom_dim_oracle(rep_in, rep_out):
    """Character-formula dimension of the intertwiner space.

    round((1/|G|) * sum_g trace(rho_in(g)) * trace(rho_out(g))); valid
    for real representations, whose characters are real. A rounding
    residue above 1e-6 signals numerically inconsistent representations
    and raises.
    """
    if rep_in.group is not rep_out.group:
        raise ValueError("representations must share the same group")
    chi_in = np.trace(rep_in.images, axis1=1, axis2=2)
    chi_out = np.trace(rep_out.images, axis1=1, axis2=2)
    value = float(chi_in @ chi_out) / rep_in.group.order
    nearest = round(value)
    if abs(value - nearest) > 1e-6:
        raise ValueError(
            f"character average {value!r} is not an integer; "
            "representations are numerically inconsistent"
        )
    return int(nearest)
