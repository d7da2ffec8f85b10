# utils/random_states.py - Seeded random states, operators and channels
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from models.linalg import BipartiteDims, BipartiteOperator, PureState


def complex_gaussian(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_frames(rng: np.random.Generator, n: int, m: int, k: int):
    """Orthonormal n x k and m x k frames from QR of complex Gaussians."""
    left, _ = np.linalg.qr(complex_gaussian(rng, n, k))
    right, _ = np.linalg.qr(complex_gaussian(rng, m, k))
    return left, right


def random_schmidt_amplitudes(rng: np.random.Generator, n: int, m: int, k: int) -> np.ndarray:
    """Raw amplitudes of a unit vector with Schmidt rank <= k.

    Frames are orthonormalized complex Gaussians; squared coefficients are
    uniform on the simplex.
    """
    left, right = random_frames(rng, n, m, k)
    coefficients = np.sqrt(rng.dirichlet(np.ones(k)))
    matrix = (left * coefficients) @ right.T
    amplitudes = matrix.reshape(-1)
    return amplitudes / np.linalg.norm(amplitudes)


def random_schmidt_batch(rng: np.random.Generator, n: int, m: int, k: int, count: int) -> np.ndarray:
    """`count` Schmidt-rank <= k amplitude vectors as rows."""
    left, _ = np.linalg.qr(complex_gaussian(rng, count, n, k))
    right, _ = np.linalg.qr(complex_gaussian(rng, count, m, k))
    coefficients = np.sqrt(rng.dirichlet(np.ones(k), size=count))
    matrices = np.einsum("bik,bk,bjk->bij", left, coefficients, right)
    batch = matrices.reshape(count, n * m)
    return batch / np.linalg.norm(batch, axis=1, keepdims=True)


def random_pure_state(dims: BipartiteDims, rng: np.random.Generator) -> PureState:
    amplitudes = complex_gaussian(rng, dims.total)
    return PureState.from_amplitudes(amplitudes, dims.n, dims.m, normalize=True)


def random_schmidt_state(dims: BipartiteDims, k: int, rng: np.random.Generator) -> PureState:
    dims.check_k(k)
    amplitudes = random_schmidt_amplitudes(rng, dims.n, dims.m, k)
    return PureState.from_amplitudes(amplitudes, dims.n, dims.m)


def random_state_with_coefficients(dims: BipartiteDims, coefficients: Sequence[float],
                                   rng: np.random.Generator) -> PureState:
    """Random local frames carrying the given Schmidt coefficients."""
    coefficients = np.asarray(coefficients, dtype=float)
    k = coefficients.shape[0]
    left, right = random_frames(rng, dims.n, dims.m, k)
    matrix = (left * coefficients) @ right.T
    return PureState.from_amplitudes(matrix.reshape(-1), dims.n, dims.m, normalize=True)


def random_hermitian(dims: BipartiteDims, rng: np.random.Generator) -> BipartiteOperator:
    a = complex_gaussian(rng, dims.total, dims.total)
    return BipartiteOperator(entries=(a + a.conj().T) / 2, dims=dims)


def random_positive(dims: BipartiteDims, rng: np.random.Generator, rank: Optional[int] = None) -> BipartiteOperator:
    rank = dims.total if rank is None else rank
    a = complex_gaussian(rng, dims.total, rank)
    return BipartiteOperator(entries=a @ a.conj().T, dims=dims)


def random_density(dims: BipartiteDims, rng: np.random.Generator, rank: Optional[int] = None) -> BipartiteOperator:
    positive = random_positive(dims, rng, rank).entries
    return BipartiteOperator(entries=positive / np.trace(positive).real, dims=dims)


def random_projection(dims: BipartiteDims, rank: int, rng: np.random.Generator) -> BipartiteOperator:
    basis, _ = np.linalg.qr(complex_gaussian(rng, dims.total, rank))
    return BipartiteOperator(entries=basis @ basis.conj().T, dims=dims)


def random_hermitian_with_spectrum(dims: BipartiteDims, eigenvalues: Sequence[float],
                                   rng: np.random.Generator) -> BipartiteOperator:
    unitary = unitary_group.rvs(dims.total, random_state=rng)
    return BipartiteOperator(
        entries=(unitary * np.asarray(eigenvalues, dtype=float)) @ unitary.conj().T, dims=dims
    )


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random isometry C^cols -> C^rows (rows >= cols)."""
    if rows < cols:
        raise ValueError(f"an isometry needs rows >= cols, got {rows} < {cols}")
    unitary = unitary_group.rvs(rows, random_state=rng) if rows > 1 else np.ones((1, 1), dtype=complex)
    return unitary[:, :cols]


def random_channel_kraus(d: int, n_kraus: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Kraus operators of a random CPTP map on L(H_d), cut from an isometry
    C^d -> C^(n_kraus) (x) C^d."""
    isometry = random_isometry(n_kraus * d, d, rng)
    return [isometry[i * d:(i + 1) * d, :] for i in range(n_kraus)]


def apply_dual_channel_second(X: BipartiteOperator, kraus: Sequence[np.ndarray]) -> BipartiteOperator:
    """(id_n (x) Phi^dagger)(X) with Phi(rho) = sum_i K_i rho K_i^*."""
    n = X.dims.n
    result = np.zeros_like(X.entries, dtype=complex)
    for op in kraus:
        lifted = np.kron(np.eye(n), op)
        result += lifted.conj().T @ X.entries @ lifted
    return BipartiteOperator(entries=result, dims=X.dims)
