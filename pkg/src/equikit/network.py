"""Equivariant feed-forward networks in intertwiner coordinates.

A network is k realized weight matrices A_i (linear combinations over
an intertwiner basis) alternating with biased pointwise activations;
the last layer carries no bias and no activation. Because the trainable
parameters are basis coefficients, every realized map is equivariant by
construction and stays so under any coefficient update.

Hidden biases live on the all-coordinates-equal line (the threshold
form), which every permutation representation fixes; together with the
permutation-representation requirement on hidden layers this certifies
pointwise compatibility.
"""

from dataclasses import dataclass

import numpy as np

from .activations import Report, parse_activation
from .groups import group_from_spec
from .intertwiners import solve_basis
from .reps import is_permutation_rep, parse_rep_spec


class DivergenceError(RuntimeError):
    """Training blew up; try a smaller learning rate."""


@dataclass
class Dataset:
    """Paired input/target rows."""

    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        self.targets = np.asarray(self.targets, dtype=np.float64)
        if self.inputs.ndim != 2 or self.targets.ndim != 2:
            raise ValueError("inputs and targets must be 2-D arrays")
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ValueError(
                f"count mismatch: {self.inputs.shape[0]} inputs vs "
                f"{self.targets.shape[0]} targets"
            )
        if self.inputs.shape[0] == 0:
            raise ValueError("dataset is empty")

    def __len__(self):
        return self.inputs.shape[0]


@dataclass
class ParameterCount:
    equivariant: int
    dense: int

    @property
    def ratio(self):
        return self.equivariant / self.dense


def stack_forward(weights, biases, activation, x):
    """Apply the alternating stack: A_k sigma_b ... sigma_b A_1."""
    h = np.asarray(x, dtype=np.float64)
    single = h.ndim == 1
    if single:
        h = h[None, :]
    k = len(weights)
    for i in range(k):
        z = h @ weights[i].T
        if i < k - 1:
            h = activation.scalar(z + biases[i])
        else:
            h = z
    return h[0] if single else h


class EquivariantNetwork:
    """Network over a fixed representation chain rho_0 ... rho_k."""

    def __init__(self, group, layer_reps, weight_bases, weight_coeffs,
                 bias_bases, bias_coeffs, activation):
        self.group = group
        self.layer_reps = list(layer_reps)
        self.weight_bases = list(weight_bases)
        self.weight_coeffs = [np.asarray(c, dtype=np.float64) for c in weight_coeffs]
        self.bias_bases = list(bias_bases)
        self.bias_coeffs = [np.asarray(c, dtype=np.float64) for c in bias_coeffs]
        self.activation = activation

    @property
    def k(self):
        return len(self.weight_bases)

    @property
    def widths(self):
        return [r.degree for r in self.layer_reps]

    def weights(self):
        """Realized weight matrices A_i = sum_j coeffs_j basis_j."""
        return [b.realize(c) for b, c in zip(self.weight_bases, self.weight_coeffs)]

    def biases(self):
        return [basis @ c for basis, c in zip(self.bias_bases, self.bias_coeffs)]

    def copy(self):
        return EquivariantNetwork(
            self.group, self.layer_reps, self.weight_bases,
            [c.copy() for c in self.weight_coeffs],
            self.bias_bases,
            [c.copy() for c in self.bias_coeffs],
            self.activation,
        )

    # --- coefficient vector (flat) layout: w1, b1, w2, b2, ..., wk ---

    def coefficient_vector(self):
        parts = []
        for i in range(self.k):
            parts.append(self.weight_coeffs[i])
            if i < self.k - 1:
                parts.append(self.bias_coeffs[i])
        return np.concatenate(parts)

    def set_coefficient_vector(self, flat):
        flat = np.asarray(flat, dtype=np.float64)
        at = 0
        for i in range(self.k):
            d = self.weight_coeffs[i].size
            self.weight_coeffs[i] = flat[at:at + d].copy()
            at += d
            if i < self.k - 1:
                db = self.bias_coeffs[i].size
                self.bias_coeffs[i] = flat[at:at + db].copy()
                at += db
        if at != flat.size:
            raise ValueError(f"expected {at} coefficients, got {flat.size}")

    # --- evaluation -------------------------------------------------

    def forward(self, v):
        return stack_forward(self.weights(), self.biases(), self.activation, v)

    def check_equivariance(self, trials=8, seed=0, tol=1e-8):
        return check_map_equivariance(
            self.forward, self.layer_reps[0], self.layer_reps[-1],
            trials=trials, seed=seed, tol=tol,
        )

    # --- training ---------------------------------------------------

    def loss(self, data):
        out = self.forward(data.inputs)
        return float(np.mean((out - data.targets) ** 2))

    def loss_grad(self, data):
        """Mean squared error and its gradient over all coefficients.

        The gradient is taken with respect to the basis coefficients
        (reverse-mode chain rule through the alternating composition),
        flattened in layer order as w1, b1, w2, b2, ..., wk.
        """
        mse, grads_w, grads_b = self._loss_grad_structured(data)
        parts = []
        for i in range(self.k):
            parts.append(grads_w[i])
            if i < self.k - 1:
                parts.append(grads_b[i])
        return mse, np.concatenate(parts)

    def _loss_grad_structured(self, data):
        weights = self.weights()
        biases = self.biases()
        act = self.activation
        k = self.k
        hs = [data.inputs]
        pre = []
        h = data.inputs
        for i in range(k):
            z = h @ weights[i].T
            if i < k - 1:
                s = z + biases[i]
                pre.append(s)
                h = act.scalar(s)
                hs.append(h)
            else:
                out = z
        err = out - data.targets
        mse = float(np.mean(err ** 2))
        g_z = 2.0 * err / err.size
        grads_w = [None] * k
        grads_b = [None] * (k - 1)
        grads_w[k - 1] = np.tensordot(
            self.weight_bases[k - 1].basis, g_z.T @ hs[k - 1], axes=[[1, 2], [0, 1]]
        )
        for i in range(k - 2, -1, -1):
            g_h = g_z @ weights[i + 1]
            g_z = g_h * act.derivative(pre[i])
            grads_b[i] = self.bias_bases[i].T @ g_z.sum(axis=0)
            grads_w[i] = np.tensordot(
                self.weight_bases[i].basis, g_z.T @ hs[i], axes=[[1, 2], [0, 1]]
            )
        return mse, grads_w, grads_b

    def train(self, data, steps, learning_rate):
        """Full-batch gradient descent; returns (trained copy, history).

        history[t] is the loss evaluated at step t before the update.
        Coefficients-only updates cannot leave the intertwiner space, so
        equivariance is preserved at every step.
        """
        if steps < 1:
            raise ValueError("steps must be >= 1")
        if learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        net = self.copy()
        history = np.empty(steps)
        for t in range(steps):
            mse, grads_w, grads_b = net._loss_grad_structured(data)
            if not np.isfinite(mse) or mse > 1e12:
                raise DivergenceError(
                    f"loss {mse:.3e} at step {t}; use a smaller learning rate"
                )
            history[t] = mse
            for i in range(net.k):
                net.weight_coeffs[i] = net.weight_coeffs[i] - learning_rate * grads_w[i]
                if i < net.k - 1:
                    net.bias_coeffs[i] = net.bias_coeffs[i] - learning_rate * grads_b[i]
        return net, history

    def count_parameters(self):
        """Trainable-coefficient count next to the dense count.

        The dense figure is sum_i n_{i-1} n_i weights plus one bias per
        hidden width, i.e. the unconstrained network of the same shape.
        """
        equi = sum(c.size for c in self.weight_coeffs)
        equi += sum(c.size for c in self.bias_coeffs)
        widths = self.widths
        dense = sum(widths[i] * widths[i + 1] for i in range(self.k))
        dense += sum(widths[i] for i in range(1, self.k))
        return ParameterCount(equi, dense)


def build(group, layer_reps, activation, seed=0):
    """Assemble an equivariant network for a representation chain.

    Hidden representations must be permutation representations (the
    certified pointwise-compatibility regime), and every layer boundary
    must admit a nonzero intertwiner space. Weight coefficients are
    seeded random, rescaled so each realized matrix has Frobenius norm
    sqrt(2 / fan_in); bias coefficients start at zero.
    """
    layer_reps = list(layer_reps)
    if len(layer_reps) < 2:
        raise ValueError("need at least two representations (one layer)")
    for rep in layer_reps:
        if rep.group is not group:
            raise ValueError("all representations must belong to the given group")
    k = len(layer_reps) - 1
    for i in range(1, k):
        if not is_permutation_rep(layer_reps[i]):
            raise ValueError(
                f"hidden representation {i} is not a permutation "
                "representation; pointwise nonlinearities are only "
                "certified equivariant for permutation actions"
            )
    weight_bases = []
    for i in range(k):
        basis = solve_basis(layer_reps[i], layer_reps[i + 1])
        if basis.dim == 0:
            raise ValueError(
                f"layer {i + 1} has a zero-dimensional weight space; "
                "the layer map would be forced to zero"
            )
        weight_bases.append(basis)

    rng = np.random.default_rng(seed)
    weight_coeffs = []
    for i, basis in enumerate(weight_bases):
        c = rng.standard_normal(basis.dim)
        a = basis.realize(c)
        fro = np.sqrt((a * a).sum())
        if fro > 0:
            c *= np.sqrt(2.0 / layer_reps[i].degree) / fro
        weight_coeffs.append(c)

    bias_bases = []
    bias_coeffs = []
    for i in range(1, k):
        n = layer_reps[i].degree
        bias_bases.append(np.full((n, 1), 1.0 / np.sqrt(n)))
        bias_coeffs.append(np.zeros(1))

    return EquivariantNetwork(
        group, layer_reps, weight_bases, weight_coeffs,
        bias_bases, bias_coeffs, activation,
    )


EXHAUSTIVE_LIMIT = 5000


def check_map_equivariance(apply, rep_in, rep_out, trials=8, seed=0, tol=1e-8):
    """Check f(rho_in(g) v) = rho_out(g) f(v) on seeded random vectors.

    ``apply`` must accept a (batch, n_in) array. Exhaustive over the
    group when |G| <= 5000, else over ``trials`` sampled elements;
    residuals are infinity norms normalized by 1 + ||f(v)||_inf.
    """
    rng = np.random.default_rng(seed)
    vectors = rng.uniform(-1.0, 1.0, size=(max(trials, 1), rep_in.degree))
    base = np.asarray(apply(vectors))
    norms = 1.0 + np.abs(base).max(axis=1)
    group = rep_in.group
    if group.order <= EXHAUSTIVE_LIMIT:
        indices = np.arange(group.order)
    else:
        indices = rng.integers(0, group.order, size=trials)
    worst = 0.0
    witness = None
    for g in indices:
        lhs = np.asarray(apply(vectors @ rep_in.images[g].T))
        rhs = base @ rep_out.images[g].T
        dev = np.abs(lhs - rhs).max(axis=1) / norms
        i = int(np.argmax(dev))
        if dev[i] > worst:
            worst = float(dev[i])
            witness = (int(g), vectors[i].copy())
    passed = worst <= tol
    return Report(passed, worst, None if passed else witness)


# --- model files -----------------------------------------------------------
#
# Line-oriented text; floats are %.17g so values round-trip exactly. The
# file carries the group/rep/activation specs plus, per layer, the basis
# coefficients and the realized weight matrix (and bias vector for hidden
# layers). The realized matrices are the function the file declares;
# `equikit check` verifies them, so edits that break equivariance fail.

FORMAT_HEADER = "equikit model v1"


def _fmt_floats(values):
    return " ".join(f"{v:.17g}" for v in np.asarray(values, dtype=np.float64).ravel())


def save_model(net, path):
    """Write a network to the text model format."""
    for rep in net.layer_reps:
        if rep.spec is None:
            raise ValueError(
                "model serialization needs representations built from "
                "spec strings"
            )
    if net.group.spec is None:
        raise ValueError("model serialization needs a named group")
    weights = net.weights()
    biases = net.biases()
    lines = [FORMAT_HEADER]
    lines.append(f"group: {net.group.spec}")
    lines.append(f"activation: {net.activation}")
    lines.append(f"layers: {net.k}")
    for rep in net.layer_reps:
        lines.append(f"rep: {rep.spec}")
    for i in range(net.k):
        lines.append(f"layer: {i + 1}")
        lines.append(f"weight-coeffs: {net.weight_coeffs[i].size}")
        lines.append(_fmt_floats(net.weight_coeffs[i]))
        if i < net.k - 1:
            lines.append(f"bias-coeffs: {net.bias_coeffs[i].size}")
            lines.append(_fmt_floats(net.bias_coeffs[i]))
        rows, cols = weights[i].shape
        lines.append(f"weight-matrix: {rows} {cols}")
        for row in weights[i]:
            lines.append(_fmt_floats(row))
        if i < net.k - 1:
            lines.append(f"bias-vector: {biases[i].size}")
            lines.append(_fmt_floats(biases[i]))
    lines.append("end")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


class ModelFormatError(ValueError):
    """Model file failed to parse; message carries the offending line."""


@dataclass
class LoadedModel:
    """A parsed model file: the network plus the declared matrices."""

    network: EquivariantNetwork
    declared_weights: list
    declared_biases: list

    def declared_matches(self, tol=1e-9):
        """True when the declared matrices equal the realized ones."""
        realized = self.network.weights()
        for a, b in zip(realized, self.declared_weights):
            if np.abs(a - b).max() > tol:
                return False
        for a, b in zip(self.network.biases(), self.declared_biases):
            if np.abs(a - b).max() > tol:
                return False
        return True

    def declared_forward(self, x):
        """Evaluate the function the file declares (the raw stack)."""
        return stack_forward(
            self.declared_weights, self.declared_biases,
            self.network.activation, x,
        )


class _Reader:
    def __init__(self, path):
        with open(path) as fh:
            self.lines = [ln.rstrip("\n") for ln in fh]
        self.at = 0

    def next(self):
        if self.at >= len(self.lines):
            raise ModelFormatError("unexpected end of model file")
        line = self.lines[self.at]
        self.at += 1
        return line

    def expect(self, prefix):
        line = self.next()
        if not line.startswith(prefix):
            raise ModelFormatError(
                f"line {self.at}: expected {prefix!r}, got {line!r}"
            )
        return line[len(prefix):].strip()

    def floats(self, count):
        line = self.next()
        values = np.array([float(v) for v in line.split()], dtype=np.float64)
        if values.size != count:
            raise ModelFormatError(
                f"line {self.at}: expected {count} values, got {values.size}"
            )
        return values


def load_model(path, max_order=20000):
    """Read a model file back into a LoadedModel."""
    r = _Reader(path)
    if r.next() != FORMAT_HEADER:
        raise ModelFormatError("not an equikit model file")
    group = group_from_spec(r.expect("group:"), max_order=max_order)
    activation = parse_activation(r.expect("activation:"))
    k = int(r.expect("layers:"))
    if k < 1:
        raise ModelFormatError("layer count must be >= 1")
    reps = [parse_rep_spec(group, r.expect("rep:")) for _ in range(k + 1)]
    net = build(group, reps, activation, seed=0)
    declared_weights = []
    declared_biases = []
    for i in range(k):
        r.expect("layer:")
        d = int(r.expect("weight-coeffs:"))
        if d != net.weight_bases[i].dim:
            raise ModelFormatError(
                f"layer {i + 1}: file has {d} weight coefficients but the "
                f"basis dimension is {net.weight_bases[i].dim}"
            )
        net.weight_coeffs[i] = r.floats(d)
        if i < k - 1:
            db = int(r.expect("bias-coeffs:"))
            if db != net.bias_bases[i].shape[1]:
                raise ModelFormatError(
                    f"layer {i + 1}: file has {db} bias coefficients but the "
                    f"bias space dimension is {net.bias_bases[i].shape[1]}"
                )
            net.bias_coeffs[i] = r.floats(db)
        rows, cols = (int(v) for v in r.expect("weight-matrix:").split())
        want = (reps[i + 1].degree, reps[i].degree)
        if (rows, cols) != want:
            raise ModelFormatError(f"layer {i + 1}: weight matrix shape mismatch")
        declared_weights.append(np.vstack([r.floats(cols) for _ in range(rows)]))
        if i < k - 1:
            nb = int(r.expect("bias-vector:"))
            if nb != reps[i + 1].degree:
                raise ModelFormatError(f"layer {i + 1}: bias length mismatch")
            declared_biases.append(r.floats(nb))
    if r.next() != "end":
        raise ModelFormatError("missing end marker")
    return LoadedModel(net, declared_weights, declared_biases)
