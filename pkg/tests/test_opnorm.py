from fractions import Fraction

import numpy as np
import pytest

from models.linalg import BipartiteDims, BipartiteOperator
from utils.errors import NotNormalError, NotPositiveError, RankOutOfRangeError
from utils.linalg import (
    expectation, hermitian_eigh, identity_operator, maximally_entangled_projector, maximally_entangled_state,
    product_state, projector,
)
from utils.opnorm import (
    op_norm_bounds, op_norm_bruteforce, op_norm_equiv_transfer, op_norm_heuristic, op_norm_lower_eig,
    op_norm_lower_eig_best, op_norm_rank_one, op_norm_upper_spectral, operator_norm_floor,
    projection_interpolation, projection_lower_bounds, rank_projection_bounds, smallest_forcing_rank,
)
from utils.random_states import (
    apply_dual_channel_second, complex_gaussian, random_channel_kraus, random_hermitian, random_density,
    random_positive, random_projection, random_pure_state, random_schmidt_state,
)
from utils.schmidt import schmidt_rank

RESTARTS = 8


def product_grid_norm(X: BipartiteOperator, points: int = 200) -> float:
    """max <a b|X|a b> for PSD X on 2 (x) 2: Bloch grid for a, exact maximum over b."""
    theta, phi = np.meshgrid(np.linspace(0, np.pi, points), np.linspace(0, 2 * np.pi, points))
    a = np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1).reshape(-1, 2)
    blocks = X.entries.reshape(2, 2, 2, 2)
    reduced = np.einsum("pi,ijkl,pk->pjl", a.conj(), blocks, a)
    return float(np.max(np.linalg.eigvalsh((reduced + reduced.conj().transpose(0, 2, 1)) / 2)[:, -1]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_maximally_entangled_projector_is_exact(n):
    E = maximally_entangled_projector(n)
    for k in range(1, n + 1):
        bounds = op_norm_bounds(E, k, restarts=RESTARTS)
        assert bounds.lower == pytest.approx(k / n, abs=1e-10)
        assert bounds.upper == pytest.approx(k / n, abs=1e-10)
        assert bounds.methods == ["exact:rank_one"]
        heuristic = op_norm_heuristic(E, k, restarts=RESTARTS)
        assert heuristic.lower >= k / n - 1e-8


def test_identity_has_unit_norm():
    bounds = op_norm_bounds(identity_operator(2, 3), 1, restarts=RESTARTS)
    assert bounds.lower == pytest.approx(1.0, abs=1e-12)
    assert bounds.upper == pytest.approx(1.0, abs=1e-12)


def test_rank_one_values():
    e = maximally_entangled_state(3)
    assert op_norm_rank_one(e, e, 2) == pytest.approx(2 / 3)
    p = product_state([1, 0], [0, 1])
    assert op_norm_rank_one(p, p, 1) == pytest.approx(1.0)
    v = product_state([1, 0], [1, 0])
    w = maximally_entangled_state(2)
    assert op_norm_rank_one(v, w, 1) == pytest.approx(np.sqrt(0.5))


def test_spectral_upper_is_exact_for_rank_one(rng, dims33):
    for _ in range(10):
        v = random_pure_state(dims33, rng)
        for k in (1, 2, 3):
            assert op_norm_upper_spectral(projector(v), k) == pytest.approx(op_norm_rank_one(v, v, k), abs=1e-10)


def test_example_state_norm(example_rho):
    values, vectors = hermitian_eigh(example_rho.entries)
    assert values[-1] == pytest.approx(0.8606, abs=5e-4)
    assert np.sort(np.abs(vectors[:, -1])) == pytest.approx([0.4614, 0.4614, 0.4614, 0.6011], abs=5e-4)
    heuristic = op_norm_heuristic(example_rho, 1)
    assert heuristic.lower == pytest.approx(0.8571, abs=5e-4)
    assert heuristic.lower < values[-1] - 1e-3
    assert schmidt_rank(heuristic.lower_witness) == 1
    assert op_norm_upper_spectral(example_rho, 1) >= heuristic.lower - 1e-12


def test_lower_eigenvalue_rule():
    E = maximally_entangled_projector(3)
    assert op_norm_lower_eig(E, 1, 3) == pytest.approx(1 / 3)
    assert op_norm_lower_eig(identity_operator(3, 3), 2, 2) == pytest.approx(1.0)
    with pytest.raises(RankOutOfRangeError):
        op_norm_lower_eig(E, 2, 1)
    best, r = op_norm_lower_eig_best(E, 2)
    assert best == pytest.approx(2 / 3)
    assert r == 3


def test_lower_eigenvalue_rule_below_product_grid(rng, dims22):
    for _ in range(30):
        X = random_density(dims22, rng)
        grid = product_grid_norm(X)
        assert op_norm_lower_eig_best(X, 1)[0] <= grid + 1e-3
        assert op_norm_upper_spectral(X, 1) >= grid - 1e-8


def test_bounds_bracket_product_grid(rng, dims22):
    for _ in range(30):
        X = random_density(dims22, rng)
        grid = product_grid_norm(X)
        bounds = op_norm_bounds(X, 1, restarts=RESTARTS)
        assert bounds.lower <= grid + 1e-3
        assert bounds.upper >= grid - 1e-8
        assert op_norm_bruteforce(X, 1, samples=2000) <= bounds.upper + 1e-9


def test_bounds_contain_bruteforce_upper_side(rng, dims33):
    for _ in range(10):
        X = random_hermitian(dims33, rng)
        for k in (1, 2):
            bounds = op_norm_bounds(X, k, restarts=RESTARTS)
            assert op_norm_bruteforce(X, k, samples=2000) <= bounds.upper + 1e-9


def test_lower_bound_is_monotone_in_k(rng, dims33):
    for _ in range(10):
        X = random_positive(dims33, rng)
        lowers = [op_norm_bounds(X, k, restarts=RESTARTS).lower for k in (1, 2, 3)]
        assert all(a <= b + 1e-10 for a, b in zip(lowers, lowers[1:]))
        assert lowers[-1] == pytest.approx(float(hermitian_eigh(X.entries, eigvals_only=True)[-1]), rel=1e-9)


def test_bruteforce_is_monotone_in_k(rng, dims33):
    for _ in range(5):
        X = random_hermitian(dims33, rng)
        values = [op_norm_bruteforce(X, k, samples=1000, seed=11) for k in (1, 2, 3)]
        assert values[0] <= values[1] <= values[2]
        assert values[2] <= float(np.max(np.abs(hermitian_eigh(X.entries, eigvals_only=True)))) + 1e-12


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("c", [0.5, 2.0])
def test_bounds_contain_value_for_identity_plus_entangled_projector(n, c):
    # <v|(I + cE)|v> = 1 + c |<phi|v>|^2, maximized at 1 + c k/n
    X = BipartiteOperator.from_matrix(np.eye(n * n) + c * maximally_entangled_projector(n).entries, n, n)
    for k in range(1, n + 1):
        bounds = op_norm_bounds(X, k, restarts=RESTARTS)
        assert bounds.lower - 1e-8 <= 1 + c * k / n <= bounds.upper + 1e-8


def test_bounds_contain_value_for_locally_rotated_diagonal(rng):
    for n, m in [(2, 3), (3, 3)]:
        for _ in range(5):
            diagonal = rng.uniform(0.1, 2.0, n * m)
            u, _ = np.linalg.qr(complex_gaussian(rng, n, n))
            v, _ = np.linalg.qr(complex_gaussian(rng, m, m))
            local = np.kron(u, v)
            X = BipartiteOperator.from_matrix((local * diagonal) @ local.conj().T, n, m)
            for k in range(1, min(n, m) + 1):
                bounds = op_norm_bounds(X, k, restarts=RESTARTS)
                assert bounds.lower - 1e-8 <= diagonal.max() <= bounds.upper + 1e-8


def test_transfer_and_floor():
    assert op_norm_equiv_transfer(0.25, 1, 3) == (0.25, 0.75)
    with pytest.raises(RankOutOfRangeError):
        op_norm_equiv_transfer(0.25, 3, 2)
    assert operator_norm_floor(identity_operator(3, 3), 1) == pytest.approx(1 / 3)


def test_equivalence_transfer_brackets_exact_values():
    E = maximally_entangled_projector(4)
    for h in range(1, 5):
        low, high = op_norm_equiv_transfer(op_norm_bounds(E, h).lower, h, 4)
        assert low <= 1.0 <= high + 1e-9


def test_adjoint_has_same_spectral_bound(rng):
    dims = BipartiteDims(n=2, m=3)
    q, _ = np.linalg.qr(complex_gaussian(rng, 6, 6))
    X = BipartiteOperator(entries=(q * complex_gaussian(rng, 6)) @ q.conj().T, dims=dims)
    assert not X.hermitian
    for k in (1, 2):
        assert op_norm_upper_spectral(X, k) == pytest.approx(op_norm_upper_spectral(X.adjoint(), k), abs=1e-10)
    with pytest.raises(NotNormalError):
        op_norm_upper_spectral(BipartiteOperator.from_matrix(np.triu(np.ones((6, 6))), 2, 3), 1)


def test_smallest_forcing_rank():
    for n, m in [(2, 2), (3, 3), (3, 5), (4, 4)]:
        for rank in range(1, n * m + 1):
            r = smallest_forcing_rank(n, m, rank)
            assert (n - r) * (m - r) <= rank - 1
            assert r == 1 or (n - r + 1) * (m - r + 1) > rank - 1


def test_rank_projection_bounds():
    bounds = rank_projection_bounds(3, 3, 1, 2)
    assert bounds.ineq1 == Fraction(2, 3)
    assert bounds.ineq2 == Fraction(10, 18)
    full = rank_projection_bounds(3, 3, 9, 1)
    assert full.ineq1 == 1 and full.ineq2 == 1
    assert rank_projection_bounds(2, 3, 4, 1).ineq2 == Fraction(4, 6)
    assert rank_projection_bounds(4, 4, 1, 2).best == Fraction(1, 2)


def test_projection_bounds_are_sound(rng, dims22, dims33):
    for dims in (dims22, dims33):
        for _ in range(25):
            rank = int(rng.integers(1, dims.total + 1))
            P = random_projection(dims, rank, rng)
            for k in range(1, dims.max_rank + 1):
                lower = projection_lower_bounds(P, k)
                assert lower <= op_norm_upper_spectral(P, k) + 1e-9
                if dims == dims22 and k == 1:
                    assert lower <= product_grid_norm(P) + 1e-3


def test_projection_interpolation():
    E = maximally_entangled_projector(3)
    assert projection_interpolation(1 / 3, 1, 2, 3) == pytest.approx(2 / 3)
    assert projection_lower_bounds(E, 2, known={1: 1 / 3}) == pytest.approx(2 / 3)
    with pytest.raises(RankOutOfRangeError):
        projection_interpolation(0.5, 3, 2, 3)


def test_heuristic_witness_and_determinism(rng, dims33):
    X = random_positive(dims33, rng)
    first = op_norm_heuristic(X, 2, restarts=RESTARTS, seed=7)
    second = op_norm_heuristic(X, 2, restarts=RESTARTS, seed=7)
    assert first.lower == second.lower
    assert np.array_equal(first.lower_witness.amplitudes, second.lower_witness.amplitudes)
    assert schmidt_rank(first.lower_witness) <= 2
    assert expectation(X, first.lower_witness) == pytest.approx(first.lower, abs=1e-8)


def test_heuristic_rejects_indefinite_input(rng, dims22):
    X = BipartiteOperator.from_matrix(np.diag([1.0, -1.0, 0.5, 0.2]), 2, 2)
    with pytest.raises(NotPositiveError):
        op_norm_heuristic(X, 1)


def test_heuristic_finds_largest_diagonal_product():
    X = BipartiteOperator.from_matrix(np.diag([0.3, 2.0, 1.0, 0.1, 0.7, 0.2, 0.4, 0.5, 0.6]), 3, 3)
    bounds = op_norm_bounds(X, 1, restarts=RESTARTS)
    assert bounds.lower == pytest.approx(2.0, abs=1e-10)


def test_bruteforce_approaches_exact_value():
    E = maximally_entangled_projector(2)
    value = op_norm_bruteforce(E, 1, samples=100000, seed=3)
    assert value <= 0.5 + 1e-12
    assert value == pytest.approx(0.5, abs=2e-3)


def test_bruteforce_is_seeded(rng, dims22):
    X = random_hermitian(dims22, rng)
    assert op_norm_bruteforce(X, 1, samples=500, seed=1) == op_norm_bruteforce(X, 1, samples=500, seed=1)


def test_local_channel_never_increases_norm(rng, dims22):
    for _ in range(20):
        X = random_positive(dims22, rng)
        mapped = apply_dual_channel_second(X, random_channel_kraus(2, 2, rng))
        mapped_value = op_norm_heuristic(mapped, 1, restarts=64).lower
        assert mapped_value <= op_norm_heuristic(X, 1, restarts=64).lower + 1e-6
        assert mapped_value <= op_norm_bounds(X, 1, restarts=RESTARTS).upper + 1e-9


def test_mixing_never_beats_the_best_pure_state(rng, dims33):
    X = random_hermitian(dims33, rng)
    states = [random_schmidt_state(dims33, 2, rng) for _ in range(5)]
    weights = rng.dirichlet(np.ones(5))
    rho = sum(w * projector(s).entries for w, s in zip(weights, states))
    assert np.trace(X.entries @ rho).real <= max(expectation(X, s) for s in states) + 1e-12
