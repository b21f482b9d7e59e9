"""Collective dephasing channel for N qubits.

All qubits couple to one fluctuating field of fixed orientation. The evolved
state is a Toeplitz-weighted double sum over the field's eigenvalue-sector
projectors: rho(t) = sum_{jk} M_jk(t) Theta_j rho(0) Theta_k, where
M_jk(t) = phi((j - k) t) and phi is the characteristic function of the
field-fluctuation distribution. Time is dimensionless (Gamma t) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatchError, GridRangeError,
                     InvalidSpectrumError, NotUnitVectorError)
from .linalg import (IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, DensityMatrix,
                     frobenius_norm, hamming_weights, kron, placements)
from .tolerances import DEFAULT as TOL


@dataclass(frozen=True)
class FieldOrientation:
    """Unit vector giving the field direction."""

    n_x: float
    n_y: float
    n_z: float

    def __post_init__(self):
        if abs(self.norm() - 1.0) > TOL.unit_vector:
            raise NotUnitVectorError(
                f"orientation ({self.n_x}, {self.n_y}, {self.n_z}) has norm "
                f"{self.norm()!r}, expected 1")

    def norm(self) -> float:
        return float(np.sqrt(self.n_x ** 2 + self.n_y ** 2 + self.n_z ** 2))

    def dot_sigma(self) -> np.ndarray:
        return self.n_x * PAULI_X + self.n_y * PAULI_Y + self.n_z * PAULI_Z

    def is_z_axis(self) -> bool:
        return self.n_x == 0.0 and self.n_y == 0.0 and self.n_z == 1.0

    @classmethod
    def normalized(cls, n_x: float, n_y: float, n_z: float) -> "FieldOrientation":
        nrm = float(np.sqrt(n_x ** 2 + n_y ** 2 + n_z ** 2))
        if nrm == 0:
            raise NotUnitVectorError("zero orientation vector")
        return cls(n_x / nrm, n_y / nrm, n_z / nrm)


Z_AXIS = FieldOrientation(0.0, 0.0, 1.0)


class SpectralDistribution:
    """Fluctuation law p(omega), represented by its characteristic function."""

    def phi(self, t: float) -> complex:
        raise NotImplementedError

    def phi_array(self, ts: np.ndarray) -> np.ndarray:
        return np.array([self.phi(float(t)) for t in np.ravel(ts)]).reshape(np.shape(ts))

    def describe(self) -> str:
        raise NotImplementedError


class StandardCauchy(SpectralDistribution):
    """Unit-scale, zero-centered Cauchy law: phi(t) = exp(-|t|)."""

    def phi(self, t: float) -> complex:
        return complex(np.exp(-abs(t)))

    def phi_array(self, ts) -> np.ndarray:
        return np.exp(-np.abs(np.asarray(ts, dtype=float))).astype(complex)

    def describe(self) -> str:
        return "cauchy"

    def __eq__(self, other):
        return isinstance(other, StandardCauchy)


class CauchyDistribution(SpectralDistribution):
    """Cauchy law centered at ``center`` with scale ``scale_param``.

    phi(t) = exp(i * center * t - scale_param * |t|). A nonzero center makes
    phi complex; the Toeplitz matrix stays Hermitian and the map stays valid,
    though only the symmetric case is exercised by the standard results.
    """

    def __init__(self, center: float, scale_param: float):
        if scale_param <= 0:
            raise InvalidSpectrumError("scale parameter must be positive")
        self.center = float(center)
        self.scale_param = float(scale_param)

    def phi(self, t: float) -> complex:
        return complex(np.exp(1j * self.center * t - self.scale_param * abs(t)))

    def phi_array(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return np.exp(1j * self.center * ts - self.scale_param * np.abs(ts))

    def describe(self) -> str:
        return f"cauchy:{self.center:g}:{self.scale_param:g}"

    def __eq__(self, other):
        return (isinstance(other, CauchyDistribution)
                and other.center == self.center
                and other.scale_param == self.scale_param)


class TabulatedCharacteristic(SpectralDistribution):
    """phi(t) given on a sample grid, linearly interpolated.

    The grid must cover t = 0 with phi(0) = 1 and satisfy |phi| <= 1.
    Negative times use the conjugate symmetry phi(-t) = conj(phi(t)).
    Requests outside the tabulated range raise GridRangeError.
    """

    def __init__(self, times, values):
        t = np.asarray(times, dtype=float)
        v = np.asarray(values, dtype=complex)
        if t.ndim != 1 or t.shape != v.shape:
            raise InvalidSpectrumError("times and values must be equal-length 1d")
        order = np.argsort(t)
        self.times = t[order]
        self.values = v[order]
        if self.times[0] > 0 or self.times[-1] < 0:
            raise InvalidSpectrumError("grid must include t = 0")
        if abs(np.interp(0.0, self.times, self.values.real) - 1.0) > 1e-12 or \
                abs(np.interp(0.0, self.times, self.values.imag)) > 1e-12:
            raise InvalidSpectrumError("phi(0) must equal 1 exactly")
        if np.any(np.abs(v) > 1 + 1e-12):
            raise InvalidSpectrumError("|phi(t)| must not exceed 1")

    def _range(self) -> tuple:
        lo, hi = self.times[0], self.times[-1]
        # conjugate symmetry widens the usable range to the larger side
        return min(lo, -hi), max(hi, -lo)

    def phi(self, t: float) -> complex:
        lo, hi = self._range()
        if t < lo or t > hi:
            raise GridRangeError(f"t={t:g} outside tabulated range [{lo:g}, {hi:g}]")
        if t < self.times[0] or t > self.times[-1]:
            re = np.interp(-t, self.times, self.values.real)
            im = np.interp(-t, self.times, self.values.imag)
            return complex(re, -im)
        re = np.interp(t, self.times, self.values.real)
        im = np.interp(t, self.times, self.values.imag)
        return complex(re, im)

    def describe(self) -> str:
        return f"tabulated[{len(self.times)} pts]"


def characteristic_function(spectrum: SpectralDistribution, t: float) -> complex:
    """phi(t) for the given fluctuation spectrum."""
    return spectrum.phi(float(t))


def projectors(orientation: FieldOrientation) -> tuple:
    """The orthogonal pair Lambda_pm = (I +- n.sigma)/2 for one qubit."""
    ns = orientation.dot_sigma()
    lam_plus = (IDENTITY_2 + ns) / 2
    lam_minus = (IDENTITY_2 - ns) / 2
    return lam_plus, lam_minus


def theta_operators(n_qubits: int, orientation: FieldOrientation) -> list:
    """Sector projectors Theta_0..Theta_N of the collective field Hamiltonian.

    Theta_j sums the binom(N, j) distinct tensor arrangements of j copies of
    Lambda_minus and N-j copies of Lambda_plus. This equals the full
    symmetric-group average and is exponentially cheaper to form.
    """
    if not 1 <= n_qubits <= 6:
        raise DimensionMismatchError("theta operators support 1..6 qubits")
    lam_plus, lam_minus = projectors(orientation)
    d = 2 ** n_qubits
    thetas = []
    for j in range(n_qubits + 1):
        acc = np.zeros((d, d), dtype=complex)
        for pos in placements(n_qubits, j):
            factors = [lam_minus if q in pos else lam_plus for q in range(n_qubits)]
            acc += kron(*factors)
        thetas.append(acc)
    return thetas


@dataclass(frozen=True)
class ToeplitzCoefficients:
    """The (N+1)x(N+1) weight matrix M_jk(t) = phi((j-k) t)."""

    n_qubits: int
    t: float
    entries: np.ndarray


def toeplitz_matrix(spectrum: SpectralDistribution, n_qubits: int,
                    t: float) -> ToeplitzCoefficients:
    """Build M(t) and assert its Bochner positivity.

    A genuine characteristic function always yields a PSD Toeplitz matrix;
    a violation signals an invalid spectrum and raises InvalidSpectrumError.
    """
    if t < 0:
        raise DimensionMismatchError("time must be nonnegative")
    n = n_qubits + 1
    diffs = np.subtract.outer(np.arange(n), np.arange(n)) * t
    entries = spectrum.phi_array(diffs)
    if np.linalg.eigvalsh(entries)[0] < -TOL.toeplitz_psd:
        raise InvalidSpectrumError(
            "Toeplitz dephasing matrix is not PSD; the supplied phi(t) is "
            "not a valid characteristic function")
    return ToeplitzCoefficients(n_qubits, float(t), entries)


@dataclass(frozen=True)
class DephasingChannel:
    """Collective dephasing for ``n_qubits`` at a fixed field orientation.

    The Theta projectors are precomputed at construction; a channel instance
    is immutable and can be shared across threads.
    """

    n_qubits: int
    orientation: FieldOrientation
    spectrum: SpectralDistribution
    theta_ops: tuple = field(default=None)

    def __post_init__(self):
        if self.theta_ops is None:
            ops = tuple(theta_operators(self.n_qubits, self.orientation))
            object.__setattr__(self, "theta_ops", ops)
        ident = sum(self.theta_ops)
        d = 2 ** self.n_qubits
        if np.abs(ident - np.eye(d)).max() > 10 * TOL.projector:
            raise DimensionMismatchError("Theta projectors do not sum to identity")


def z_channel(n_qubits: int,
              spectrum: SpectralDistribution | None = None) -> DephasingChannel:
    """Convenience constructor for the z-axis channel."""
    return DephasingChannel(n_qubits, Z_AXIS, spectrum or StandardCauchy())


def evolve(channel: DephasingChannel, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """rho(t) = sum_jk M_jk(t) Theta_j rho(0) Theta_k."""
    if rho0.n_qubits != channel.n_qubits:
        raise DimensionMismatchError(
            f"state has {rho0.n_qubits} qubits, channel {channel.n_qubits}")
    m = toeplitz_matrix(channel.spectrum, channel.n_qubits, t).entries
    thetas = channel.theta_ops
    left = [th @ rho0.matrix for th in thetas]
    d = rho0.dim
    out = np.zeros((d, d), dtype=complex)
    for j in range(channel.n_qubits + 1):
        # right factor collects sum_k M_jk Theta_k
        right = np.tensordot(m[j], np.stack(thetas), axes=(0, 0))
        out += left[j] @ right
    out = (out + out.conj().T) / 2
    return DensityMatrix(channel.n_qubits, out)


def evolve_z_fastpath(rho0: DensityMatrix, t: float,
                      spectrum: SpectralDistribution | None = None) -> DensityMatrix:
    """Exact z-axis evolution: entry (x, y) scales by phi((w(x) - w(y)) t).

    w is the Hamming weight of the basis index. Agrees with ``evolve`` for
    orientation (0, 0, 1) elementwise; valid only for that orientation.
    """
    spectrum = spectrum or StandardCauchy()
    w = hamming_weights(rho0.n_qubits)
    diffs = np.subtract.outer(w, w) * t
    factors = spectrum.phi_array(diffs)
    out = rho0.matrix * factors
    return DensityMatrix(rho0.n_qubits, (out + out.conj().T) / 2)


def is_dfs_state(channel: DephasingChannel, rho0: DensityMatrix,
                 sample_times) -> bool:
    """True iff the channel leaves ``rho0`` unchanged at every sample time."""
    times = list(sample_times)
    if not times:
        raise DimensionMismatchError("sample_times must be nonempty")
    for t in times:
        rt = evolve(channel, rho0, t)
        if frobenius_norm(rt.matrix - rho0.matrix) > TOL.dfs:
            return False
    return True
