import numpy as np
import pytest

from equikit.groups import close, named_group
from equikit.intertwiners import hom_dim_oracle, solve_basis
from equikit.numerics import nullspace
from equikit.reps import (
    Representation,
    defining_rep,
    parse_rep_spec,
    tensor_identity,
    trivial_rep,
)


def trivial_group():
    return close([np.eye(1)])


def all_elements_nullspace(rep_in, rep_out, tol=1e-9):
    """Independent route: constrain over every element, not just generators."""
    n_in, n_out = rep_in.degree, rep_out.degree
    blocks = []
    for e in range(rep_in.group.order):
        blocks.append(
            np.kron(np.eye(n_out), rep_in.images[e].T)
            - np.kron(rep_out.images[e], np.eye(n_in))
        )
    return nullspace(np.vstack(blocks), tol=tol)


def max_commutation_residual(basis, rep_in, rep_out):
    worst = 0.0
    for b in basis.basis:
        lhs = b @ rep_in.images  # broadcasts over elements
        rhs = rep_out.images @ b
        worst = max(worst, np.abs(lhs - rhs).max())
    return worst


def test_trivial_group_unconstrained():
    g = trivial_group()
    rep = trivial_rep(g, 4)
    basis = solve_basis(rep, rep)
    assert basis.dim == 16
    assert hom_dim_oracle(rep, rep) == 16


def test_s3_defining_pair_dimension_and_span():
    g = named_group("symmetric", 3)
    rep = defining_rep(g)
    basis = solve_basis(rep, rep)
    assert basis.dim == 2
    assert hom_dim_oracle(rep, rep) == 2
    # the span is {identity, all-ones}: both project back exactly
    for target in (np.eye(3), np.ones((3, 3))):
        coeffs = basis.project(target)
        assert np.abs(basis.realize(coeffs) - target).max() < 1e-8


def test_c4_shift_pair_is_circulant_space():
    g = named_group("cyclic", 4)
    rep = defining_rep(g)
    basis = solve_basis(rep, rep)
    assert basis.dim == 4
    assert hom_dim_oracle(rep, rep) == 4


def test_deep_sets_dimensions():
    g = named_group("symmetric", 4)
    lifted = tensor_identity(defining_rep(g), 3)
    assert solve_basis(lifted, lifted).dim == 18
    assert hom_dim_oracle(lifted, lifted) == 18
    triv3 = trivial_rep(g, 3)
    assert solve_basis(lifted, triv3).dim == 9
    assert hom_dim_oracle(lifted, triv3) == 9


def test_s3_defining_to_trivial():
    g = named_group("symmetric", 3)
    assert hom_dim_oracle(defining_rep(g), trivial_rep(g, 1)) == 1
    assert solve_basis(defining_rep(g), trivial_rep(g, 1)).dim == 1


def test_real_rotation_rep_has_two_dim_commutant():
    # C3 acting by 120-degree planar rotation: real-irreducible of complex
    # type, so the real commutant has dimension 2, not 1
    c = np.cos(2.0 * np.pi / 3.0)
    s = np.sin(2.0 * np.pi / 3.0)
    g = close([np.array([[c, -s], [s, c]])])
    assert g.order == 3
    rep = defining_rep(g)
    basis = solve_basis(rep, rep)
    assert basis.dim == 2
    assert hom_dim_oracle(rep, rep) == 2


CASES = [
    ("symmetric", 3, "defining", "defining"),
    ("symmetric", 3, "defining", "trivial:1"),
    ("symmetric", 3, "sign", "defining"),
    ("symmetric", 4, "tensor:3(defining)", "tensor:3(defining)"),
    ("symmetric", 4, "tensor:3(defining)", "trivial:3"),
    ("cyclic", 4, "defining", "defining"),
    ("cyclic", 6, "defining", "tensor:2(defining)"),
    ("torus", 3, "defining", "defining"),
    ("p4", 2, "defining", "defining"),
    ("p4m", 2, "defining", "sum(defining;trivial:1)"),
]


@pytest.mark.parametrize("kind,size,spec_in,spec_out", CASES)
def test_solver_matches_character_oracle(kind, size, spec_in, spec_out):
    g = named_group(kind, size)
    rep_in = parse_rep_spec(g, spec_in)
    rep_out = parse_rep_spec(g, spec_out)
    basis = solve_basis(rep_in, rep_out)
    assert basis.dim == hom_dim_oracle(rep_in, rep_out)


@pytest.mark.parametrize("kind,size,spec_in,spec_out", CASES[:6])
def test_solver_matches_all_elements_route(kind, size, spec_in, spec_out):
    g = named_group(kind, size)
    rep_in = parse_rep_spec(g, spec_in)
    rep_out = parse_rep_spec(g, spec_out)
    basis = solve_basis(rep_in, rep_out)
    full = all_elements_nullspace(rep_in, rep_out)
    assert basis.dim == full.shape[1]
    if basis.dim:
        flat = basis.basis.reshape(basis.dim, -1).T
        p1 = flat @ flat.T
        p2 = full @ full.T
        assert np.abs(p1 - p2).max() < 1e-9


@pytest.mark.parametrize("kind,size,spec_in,spec_out", CASES)
def test_basis_commutes_with_every_element(kind, size, spec_in, spec_out):
    g = named_group(kind, size)
    rep_in = parse_rep_spec(g, spec_in)
    rep_out = parse_rep_spec(g, spec_out)
    basis = solve_basis(rep_in, rep_out)
    assert max_commutation_residual(basis, rep_in, rep_out) < 1e-8


@pytest.mark.parametrize("kind,size,spec", [
    ("symmetric", 4, "defining"),
    ("cyclic", 5, "defining"),
    ("symmetric", 3, "tensor:2(defining)"),
])
def test_frobenius_orthonormal(kind, size, spec):
    g = named_group(kind, size)
    rep = parse_rep_spec(g, spec)
    basis = solve_basis(rep, rep)
    flat = basis.basis.reshape(basis.dim, -1)
    gram = flat @ flat.T
    assert np.abs(gram - np.eye(basis.dim)).max() < 1e-10


@pytest.mark.parametrize("kind,size,spec", [
    ("symmetric", 3, "defining"),
    ("cyclic", 4, "defining"),
    ("symmetric", 4, "tensor:3(defining)"),
])
def test_endomorphism_space_closed_under_product(kind, size, spec):
    g = named_group(kind, size)
    rep = parse_rep_spec(g, spec)
    basis = solve_basis(rep, rep)
    for bi in basis.basis:
        for bj in basis.basis:
            prod = bi @ bj
            back = basis.realize(basis.project(prod))
            assert np.abs(back - prod).max() < 1e-8


def test_mismatched_groups_rejected():
    g1 = named_group("symmetric", 3)
    g2 = named_group("cyclic", 3)
    with pytest.raises(ValueError, match="same group"):
        solve_basis(defining_rep(g1), defining_rep(g2))
    with pytest.raises(ValueError, match="same group"):
        hom_dim_oracle(defining_rep(g1), defining_rep(g2))


def test_oracle_rejects_non_integer_average():
    g = named_group("symmetric", 3)
    rep = defining_rep(g)
    corrupted = Representation(
        g, 3, rep.gen_images.copy(), rep.images.copy(), spec=None
    )
    corrupted.images[2] = corrupted.images[2] + 0.37
    with pytest.raises(ValueError, match="not an integer"):
        hom_dim_oracle(corrupted, corrupted)
