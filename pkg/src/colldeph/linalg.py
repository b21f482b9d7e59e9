"""Dense complex linear algebra for few-qubit states.

Kronecker products, Hermitian eigendecomposition, partial transposition and
bipartition bookkeeping. Basis convention is big endian throughout: qubit 1
is the most significant bit of a computational-basis index, so the basis kets
of two qubits are ordered |00>, |01>, |10>, |11>.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionMismatchError, MaskMismatchError, NotHermitianError
from .tolerances import DEFAULT as TOL

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def kron(*matrices: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    out = np.asarray(matrices[0])
    for m in matrices[1:]:
        out = np.kron(out, np.asarray(m))
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def is_hermitian(a: np.ndarray, tol: float = TOL.hermiticity) -> bool:
    a = np.asarray(a)
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(np.abs(a).max(), 1.0)
    return np.abs(a - a.conj().T).max() <= tol * scale


def hermitian_part(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    return (a + a.conj().T) / 2


def hermitian_eigenvalues(h: np.ndarray, vectors: bool = False):
    """Eigenvalues of a Hermitian matrix, ascending.

    With ``vectors=True`` also returns the unitary of eigenvectors (columns),
    satisfying ``h ~= V diag(w) V^dag``.

    Raises
    ------
    NotHermitianError
        If the symmetry check fails.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise NotHermitianError(
            f"matrix is not Hermitian within {TOL.hermiticity:g} (relative)")
    if vectors:
        w, v = np.linalg.eigh(h)
        return w, v
    return np.linalg.eigvalsh(h)


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def trace_real(a: np.ndarray) -> float:
    return float(np.trace(np.asarray(a)).real)


@dataclass(frozen=True)
class BipartitionMask:
    """One side M of a bipartition M | Mbar of n qubits.

    ``member_set`` is a bitmask over basis-index bits: qubit j corresponds to
    bit (n_qubits - j), so qubit 1 is the most significant bit. Canonical
    masks contain qubit 1, which stores each bipartition exactly once.
    """

    n_qubits: int
    member_set: int

    def __post_init__(self):
        full = (1 << self.n_qubits) - 1
        if not (0 < self.member_set < full):
            raise MaskMismatchError(
                f"mask {self.member_set:#b} must be a proper nonempty subset "
                f"of {self.n_qubits} qubits")

    @classmethod
    def from_qubits(cls, qubits, n_qubits: int) -> "BipartitionMask":
        """Build a mask from 1-based qubit labels."""
        mask = 0
        for q in qubits:
            if not 1 <= q <= n_qubits:
                raise MaskMismatchError(f"qubit {q} out of range 1..{n_qubits}")
            mask |= 1 << (n_qubits - q)
        return cls(n_qubits, mask)

    @property
    def qubits(self) -> tuple:
        """Member qubits as 1-based labels, ascending."""
        return tuple(q for q in range(1, self.n_qubits + 1)
                     if self.member_set & (1 << (self.n_qubits - q)))

    def canonical(self) -> "BipartitionMask":
        """The representative containing qubit 1 (complement if needed)."""
        msb = 1 << (self.n_qubits - 1)
        if self.member_set & msb:
            return self
        full = (1 << self.n_qubits) - 1
        return BipartitionMask(self.n_qubits, full ^ self.member_set)

    def label(self) -> str:
        return "".join(str(q) for q in self.qubits)


def all_bipartitions(n_qubits: int) -> list:
    """All 2**(n-1) - 1 canonical bipartition masks, ascending bitmask value."""
    if n_qubits < 2:
        raise MaskMismatchError("bipartitions need at least 2 qubits")
    msb = 1 << (n_qubits - 1)
    full = (1 << n_qubits) - 1
    return [BipartitionMask(n_qubits, m) for m in range(msb, full)]


@dataclass(frozen=True)
class DensityMatrix:
    """An n-qubit state: Hermitian, unit trace, PSD up to numerical slack."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        d = 2 ** self.n_qubits
        if m.shape != (d, d):
            raise DimensionMismatchError(
                f"expected {d}x{d} matrix for {self.n_qubits} qubits, got {m.shape}")
        if not is_hermitian(m):
            raise NotHermitianError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TOL.trace:
            raise DimensionMismatchError(f"trace {tr} != 1 beyond {TOL.trace:g}")
        if np.linalg.eigvalsh(m)[0] < -TOL.psd_slack:
            raise DimensionMismatchError(
                f"minimum eigenvalue {np.linalg.eigvalsh(m)[0]:.3e} below "
                f"-{TOL.psd_slack:g}")

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @classmethod
    def from_ket(cls, amplitudes, n_qubits: int | None = None) -> "DensityMatrix":
        psi = np.asarray(amplitudes, dtype=complex).ravel()
        if n_qubits is None:
            n_qubits = int(round(np.log2(psi.size)))
        if psi.size != 2 ** n_qubits:
            raise DimensionMismatchError(
                f"ket length {psi.size} is not 2**{n_qubits}")
        nrm = np.linalg.norm(psi)
        if nrm == 0:
            raise DimensionMismatchError("zero ket")
        psi = psi / nrm
        return cls(n_qubits, np.outer(psi, psi.conj()))


def _as_matrix(rho) -> tuple:
    """Accept a DensityMatrix or a raw square array; return (matrix, n)."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix, rho.n_qubits
    m = np.asarray(rho, dtype=complex)
    n = int(round(np.log2(m.shape[0])))
    if m.shape != (2 ** n, 2 ** n):
        raise DimensionMismatchError(f"shape {m.shape} is not 2^n x 2^n")
    return m, n


def partial_transpose(rho, mask: BipartitionMask) -> np.ndarray:
    """Transpose the indices of the qubits in ``mask``.

    Involutive and trace preserving; the result is Hermitian but in general
    not positive.
    """
    m, n = _as_matrix(rho)
    if mask.n_qubits != n:
        raise MaskMismatchError(
            f"mask is for {mask.n_qubits} qubits, state has {n}")
    t = m.reshape((2,) * (2 * n))
    for q in mask.qubits:
        t = np.swapaxes(t, q - 1, n + q - 1)
    return t.reshape(m.shape)


def negative_eigenvalue_sum(h: np.ndarray) -> float:
    """Sum of |negative eigenvalues| of a Hermitian matrix."""
    w = hermitian_eigenvalues(h)
    return float(-w[w < 0].sum())


# ---------------------------------------------------------------------------
# random ensembles (used by property tests and the invariance scan)

def haar_random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_density_matrix(n_qubits: int, rng: np.random.Generator,
                          rank: int | None = None) -> DensityMatrix:
    """Random full-rank (or given-rank) mixed state via a Wishart draw."""
    d = 2 ** n_qubits
    k = rank or d
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(n_qubits, hermitian_part(m))


def random_product_ket(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    parts = [haar_random_ket(2, rng) for _ in range(n_qubits)]
    psi = parts[0]
    for p in parts[1:]:
        psi = np.kron(psi, p)
    return psi


def hamming_weights(n_qubits: int) -> np.ndarray:
    """Hamming weight of every n-bit basis index, in index order."""
    idx = np.arange(2 ** n_qubits)
    return np.array([bin(i).count("1") for i in idx])


def placements(n_qubits: int, n_minus: int):
    """All distinct position sets for ``n_minus`` marked qubits out of n."""
    return combinations(range(n_qubits), n_minus)
