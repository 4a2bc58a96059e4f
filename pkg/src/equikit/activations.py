"""Pointwise nonlinearities with bias, and their equivariance checks."""

from dataclasses import dataclass

import numpy as np

from .reps import is_permutation_rep

KINDS = ("relu", "tanh", "threshold", "sign_threshold")


@dataclass(frozen=True)
class ActivationSpec:
    """Scalar map applied coordinatewise.

    relu(t) = max(t, 0); tanh; threshold(theta)(t) = t - theta for
    t >= theta else 0; sign_threshold(theta)(t) = +1 for t >= theta
    else -1.
    """

    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}")

    def scalar(self, t):
        """Apply the scalar map elementwise to an array."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "relu":
            return np.maximum(t, 0.0)
        if self.kind == "tanh":
            return np.tanh(t)
        if self.kind == "threshold":
            return np.where(t >= self.theta, t - self.theta, 0.0)
        return np.where(t >= self.theta, 1.0, -1.0)

    def derivative(self, t):
        """Elementwise derivative (subgradient 0 at kinks)."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "relu":
            return (t > 0.0).astype(np.float64)
        if self.kind == "tanh":
            return 1.0 - np.tanh(t) ** 2
        if self.kind == "threshold":
            return (t > self.theta).astype(np.float64)
        return np.zeros_like(t)

    def __str__(self):
        if self.kind in ("relu", "tanh"):
            return self.kind
        return f"{self.kind}:{self.theta:.17g}"


def parse_activation(text):
    """Parse 'relu', 'tanh', 'threshold:3.0' or 'sign_threshold:3.0'."""
    kind, sep, theta = text.strip().partition(":")
    if kind not in KINDS:
        raise ValueError(f"unknown activation {text!r}")
    if kind in ("relu", "tanh"):
        if sep:
            raise ValueError(f"activation {kind!r} takes no threshold")
        return ActivationSpec(kind)
    if not sep:
        raise ValueError(f"activation {kind!r} needs a threshold, e.g. {kind}:3.0")
    return ActivationSpec(kind, float(theta))


@dataclass
class Report:
    """Outcome of a sampled/exhaustive check."""

    passed: bool
    max_residual: float
    witness: tuple | None = None


def apply_pointwise(spec, b, v):
    """sigma_b(v) = sigma(v + b), coordinatewise."""
    b = np.asarray(b, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if b.shape[-1] != v.shape[-1]:
        raise ValueError(f"length mismatch: bias {b.shape} vs input {v.shape}")
    return spec.scalar(v + b)


EXHAUSTIVE_LIMIT = 5000


def _element_indices(group, trials, rng):
    if group.order <= EXHAUSTIVE_LIMIT:
        return np.arange(group.order)
    return rng.integers(0, group.order, size=trials)


def check_pointwise_equivariance(spec, b, rep, trials=20, seed=0, tol=1e-9):
    """Check sigma_b(rho(g) v) = rho(g) sigma_b(v) on random vectors.

    Exhaustive over the group when |G| <= 5000, otherwise over
    ``trials`` sampled elements. Test vectors are seeded uniform in
    [-2, 4] so thresholds around 3.0 see both sides. Returns a Report
    with the worst (g, v) witness on failure.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (rep.degree,):
        raise ValueError(f"bias must have length {rep.degree}")
    rng = np.random.default_rng(seed)
    vectors = rng.uniform(-2.0, 4.0, size=(max(trials, 1), rep.degree))
    worst = 0.0
    witness = None
    for g in _element_indices(rep.group, trials, rng):
        image = rep.images[g]
        lhs = apply_pointwise(spec, b, vectors @ image.T)
        rhs = apply_pointwise(spec, b, vectors) @ image.T
        dev = np.abs(lhs - rhs).max(axis=1)
        i = int(np.argmax(dev))
        if dev[i] > worst:
            worst = float(dev[i])
            witness = (int(g), vectors[i].copy())
    passed = worst <= tol
    return Report(passed, worst, None if passed else witness)


def is_compatible(spec, b, rep, tol=1e-9):
    """Certified-sufficient condition for pointwise equivariance.

    True iff the representation is a permutation representation and the
    bias is fixed by every generator. Sufficient, not necessary.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (rep.degree,):
        return False
    if not is_permutation_rep(rep):
        return False
    for g in rep.gen_images:
        if np.abs(g @ b - b).max() >= tol:
            return False
    return True
