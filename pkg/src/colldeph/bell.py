"""Ardehali-type Bell operator and genuine-nonlocality analysis.

The four-qubit operator uses rotated settings A = (X+Y)/sqrt(2) and
B = (X-Y)/sqrt(2) on the first qubit and X/Y on the rest; its local bound is
4 and its quantum maximum 8*sqrt(2), attained on the GHZ state. A state of n
parties is genuinely multipartite nonlocal when |<B>| exceeds 2**(n-1).

The published decay curve for the evolved four-qubit family,
<B_A>(t) = (16 b - a (1-b) (9 - 7 e^{-2t})) / sqrt(2), drives the threshold
and sudden-death analysis here. Note a structural caveat: every term of the
operator is a product of X/Y factors, which have zero diagonal, so a direct
trace against the evolved family cannot reproduce the curve's
population-dependent constant; the curve is kept as the published analysis
surface while the operator trace is exposed separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import (ColldephError, DimensionMismatchError, NotHermitianError,
                     NotUnitaryError, ParamRangeError)
from .linalg import IDENTITY_2, PAULI_X, PAULI_Y, DensityMatrix, is_hermitian, kron

SQRT2 = float(np.sqrt(2))

_FACTORS = {
    "X": PAULI_X,
    "Y": PAULI_Y,
    "A": (PAULI_X + PAULI_Y) / SQRT2,
    "B": (PAULI_X - PAULI_Y) / SQRT2,
    "I": IDENTITY_2,
}


@dataclass(frozen=True)
class BellOperator:
    """Weighted sum of tensor products of single-qubit observables."""

    n_qubits: int
    terms: tuple  # ((coefficient, (label, ...)), ...)

    def __post_init__(self):
        for coeff, labels in self.terms:
            if len(labels) != self.n_qubits:
                raise DimensionMismatchError(
                    f"term {labels} does not have {self.n_qubits} factors")
            for lab in labels:
                if lab not in _FACTORS:
                    raise ParamRangeError(f"unknown observable label {lab!r}")

    def materialize(self) -> np.ndarray:
        d = 2 ** self.n_qubits
        out = np.zeros((d, d), dtype=complex)
        for coeff, labels in self.terms:
            out += coeff * kron(*[_FACTORS[lab] for lab in labels])
        return out


def _distinct_perms(labels) -> list:
    return sorted(set(permutations(labels)))


def ardehali_operator() -> BellOperator:
    """The four-qubit construction; 16 terms, quantum maximum 8*sqrt(2).

    Bracketed groups run over all distinct permutations of the observables
    on the last three qubits.
    """
    terms = []
    terms.append((1.0, ("A", "X", "X", "X")))
    terms.append((1.0, ("B", "X", "X", "X")))
    for first, sign in (("A", -1.0), ("B", -1.0)):
        for p in _distinct_perms(("X", "Y", "Y")):
            terms.append((sign, (first,) + p))
    for first, sign in (("A", -1.0), ("B", +1.0)):
        for p in _distinct_perms(("X", "X", "Y")):
            terms.append((sign, (first,) + p))
    terms.append((1.0, ("A", "Y", "Y", "Y")))
    terms.append((-1.0, ("B", "Y", "Y", "Y")))
    return BellOperator(4, tuple(terms))


def transport_settings(op, local_unitaries) -> np.ndarray:
    """Conjugate a Bell operator by a product of single-qubit unitaries.

    Evaluating the transported matrix on (U x ... x U) rho (...)^dag equals
    evaluating the original on rho.
    """
    matrix = op.materialize() if isinstance(op, BellOperator) else np.asarray(op)
    us = list(local_unitaries)
    d = 2 ** len(us)
    if matrix.shape != (d, d):
        raise DimensionMismatchError(
            f"operator is {matrix.shape}, expected {(d, d)} for {len(us)} qubits")
    for u in us:
        u = np.asarray(u)
        if u.shape != (2, 2) or np.abs(u @ u.conj().T - np.eye(2)).max() > 1e-12:
            raise NotUnitaryError("local transports must be 2x2 unitaries")
    big = kron(*us)
    return big @ matrix @ big.conj().T


GHZ6_TRANSPORT = (IDENTITY_2, PAULI_X, IDENTITY_2, PAULI_X)


def ardehali_for_ghz6() -> np.ndarray:
    """Settings carried to the (|0101> + |1010>)/sqrt(2) frame.

    Flipping qubits 2 and 4 maps |0000>+|1111> onto that state, so the
    transported operator reaches 8*sqrt(2) on it.
    """
    return transport_settings(ardehali_operator(), GHZ6_TRANSPORT)


def bell_expectation(rho, op_matrix: np.ndarray) -> float:
    """Tr(rho B) for a Hermitian operator; the imaginary residue must stay
    below 1e-10 and is discarded."""
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    op_matrix = np.asarray(op_matrix)
    if matrix.shape != op_matrix.shape:
        raise DimensionMismatchError(
            f"state {matrix.shape} vs operator {op_matrix.shape}")
    if not is_hermitian(op_matrix):
        raise NotHermitianError("Bell operator must be Hermitian")
    val = np.trace(matrix @ op_matrix)
    if abs(val.imag) > 1e-10:
        raise ColldephError(f"expectation has imaginary part {val.imag:.2e}")
    return float(val.real)


def ardehali_expectation_curve(alpha: float, beta: float, t) -> np.ndarray:
    """Published decay curve (16 b - a (1-b) (9 - 7 e^{-2t})) / sqrt(2) for
    the evolved four-qubit family; accepts scalar or array t."""
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    t = np.asarray(t, dtype=float)
    val = (16 * beta - alpha * (1 - beta) * (9 - 7 * np.exp(-2 * t))) / SQRT2
    return val if val.ndim else float(val)


def genuine_nonlocality_test(value: float, n_qubits: int) -> bool:
    """Strict threshold |value| > 2**(n-1)."""
    return abs(value) > 2 ** (n_qubits - 1)


def nonlocality_threshold_beta(alpha: float) -> float:
    """Smallest beta (exclusive) giving genuine nonlocality at t = 0:
    (4 sqrt(2) + alpha) / (8 + alpha). Increasing in alpha."""
    _check_unit("alpha", alpha)
    return (4 * SQRT2 + alpha) / (8 + alpha)


@dataclass(frozen=True)
class SuddenDeathResult:
    kind: str                 # "never" | "immediate" | "at"
    time: float | None = None


SUDDEN_DEATH_BRACKET = 50.0  # beyond this, asymptote classification applies


def sudden_death_time(alpha: float, beta: float,
                      tol: float = 1e-6) -> SuddenDeathResult:
    """When the published curve crosses the genuine-nonlocality threshold 8.

    The curve is non-increasing in t for alpha > 0, beta < 1, so bracketed
    bisection suffices. "never" means the asymptote stays above threshold,
    "immediate" that the state starts at or below it.
    """
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    threshold = 2 ** 3

    def excess(t):
        return ardehali_expectation_curve(alpha, beta, t) - threshold

    if excess(0.0) <= 0:
        return SuddenDeathResult("immediate")
    if excess(SUDDEN_DEATH_BRACKET) > 0:
        return SuddenDeathResult("never")
    lo, hi = 0.0, SUDDEN_DEATH_BRACKET
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return SuddenDeathResult("at", (lo + hi) / 2)


def _check_unit(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ParamRangeError(f"parameter {name}={value} outside [0, 1]")
