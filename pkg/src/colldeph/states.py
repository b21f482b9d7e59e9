"""State constructors, parametric families, and their closed-form z-axis dynamics.

The closed-form evolutions serve as oracles against the numeric channel: the
decoherence-free component of each family is untouched while the orthogonal
coherences are damped by phi of the Hamming-weight difference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .channel import SpectralDistribution, StandardCauchy
from .errors import (ConfigError, ParamRangeError, UnsupportedStateError)
from .linalg import DensityMatrix
from .tolerances import DEFAULT as TOL

_BELL_KETS = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
}


def bell_state(kind: str) -> DensityMatrix:
    """One of the four Bell states: kind in {phi+, phi-, psi+, psi-}."""
    key = kind.strip().lower().replace("_", "")
    if key not in _BELL_KETS:
        raise UnsupportedStateError(f"unknown Bell state {kind!r}")
    return DensityMatrix.from_ket(_BELL_KETS[key], 2)


@dataclass(frozen=True)
class GhzSpec:
    """A GHZ-type state (|pattern> + sign |~pattern>)/sqrt(2).

    ``pattern`` is the basis index of the first branch (qubit 1 = MSB).
    Canonical form has the leading bit 0: a pattern with leading bit 1 is
    replaced by its complement, which describes the same state up to a
    global sign.
    """

    n_qubits: int
    pattern: int
    sign: int = +1

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ParamRangeError("sign must be +1 or -1")
        if not 0 <= self.pattern < 2 ** self.n_qubits:
            raise ParamRangeError(
                f"pattern {self.pattern} out of range for {self.n_qubits} qubits")

    def canonical(self) -> "GhzSpec":
        msb = 1 << (self.n_qubits - 1)
        if self.pattern & msb:
            full = (1 << self.n_qubits) - 1
            return GhzSpec(self.n_qubits, self.pattern ^ full, self.sign)
        return self

    @property
    def bitstring(self) -> str:
        return format(self.pattern, f"0{self.n_qubits}b")


def ghz_state(spec: GhzSpec) -> DensityMatrix:
    spec = spec.canonical()
    d = 2 ** spec.n_qubits
    full = d - 1
    psi = np.zeros(d, dtype=complex)
    psi[spec.pattern] = 1 / np.sqrt(2)
    psi[spec.pattern ^ full] += spec.sign / np.sqrt(2)
    return DensityMatrix.from_ket(psi, spec.n_qubits)


def ghz_enumeration(n_qubits: int) -> list:
    """All 2**n GHZ-type basis states, ordered by pattern value then sign."""
    out = []
    for pattern in range(2 ** (n_qubits - 1)):
        for sign in (+1, -1):
            out.append(GhzSpec(n_qubits, pattern, sign))
    return out


def w_state(n_qubits: int = 3) -> DensityMatrix:
    """Uniform superposition of all weight-1 kets (three qubits only)."""
    if n_qubits != 3:
        raise UnsupportedStateError("the W constructor supports exactly 3 qubits")
    psi = np.zeros(8, dtype=complex)
    for idx in (0b001, 0b010, 0b100):
        psi[idx] = 1 / np.sqrt(3)
    return DensityMatrix.from_ket(psi, 3)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    d = 2 ** n_qubits
    return DensityMatrix(n_qubits, np.eye(d, dtype=complex) / d)


FAMILY_NAMES = ("rho_a", "rho_ab", "rho_eta", "rho_alpha", "rho_alpha_beta")

_FAMILY_PARAMS = {
    "rho_a": ("a",),
    "rho_ab": ("a", "b"),
    "rho_eta": ("eta",),
    "rho_alpha": ("alpha",),
    "rho_alpha_beta": ("alpha", "beta"),
}

_FAMILY_QUBITS = {
    "rho_a": 2, "rho_ab": 2, "rho_eta": 3, "rho_alpha": 4, "rho_alpha_beta": 4,
}


@dataclass(frozen=True)
class FamilyParams:
    """Parameters selecting one member of a named state family.

    Families:
      rho_a(a)                two qubits, a * Phi+ mixed with white noise
      rho_ab(a, b)            two qubits, b * Psi(sign) + (1-b) * rho_a
      rho_eta(eta)            three qubits, (1-eta) * GHZ + eta * W
      rho_alpha(alpha)        four qubits, alpha * ghz(0001,+) + white noise
      rho_alpha_beta(alpha, beta)  beta * ghz(0101,+) + (1-beta) * rho_alpha

    ``bell_sign`` picks Psi+ or Psi- in rho_ab; both give identical spectra.
    """

    family: str
    params: dict = field(default_factory=dict)
    bell_sign: int = +1

    def __post_init__(self):
        if self.family not in _FAMILY_PARAMS:
            raise ParamRangeError(
                f"unknown family {self.family!r}; choose from {FAMILY_NAMES}")
        expected = _FAMILY_PARAMS[self.family]
        got = tuple(sorted(self.params))
        if got != tuple(sorted(expected)):
            raise ParamRangeError(
                f"{self.family} needs parameters {expected}, got {got}")
        for k, v in self.params.items():
            if not 0.0 <= float(v) <= 1.0:
                raise ParamRangeError(f"parameter {k}={v} outside [0, 1]")
        if self.bell_sign not in (+1, -1):
            raise ParamRangeError("bell_sign must be +1 or -1")
        object.__setattr__(self, "params",
                           {k: float(v) for k, v in self.params.items()})

    @property
    def n_qubits(self) -> int:
        return _FAMILY_QUBITS[self.family]


def ghz2_state() -> DensityMatrix:
    """(|0001> + |1110>)/sqrt(2): decays under the z channel."""
    return ghz_state(GhzSpec(4, 0b0001, +1))


def ghz6_state() -> DensityMatrix:
    """(|0101> + |1010>)/sqrt(2): lives in the z-axis DFS."""
    return ghz_state(GhzSpec(4, 0b0101, +1))


def build_family(params: FamilyParams) -> DensityMatrix:
    """The state at t = 0."""
    return evolved_family(params, 0.0)


def evolved_family(params: FamilyParams, t: float,
                   spectrum: SpectralDistribution | None = None) -> DensityMatrix:
    """Closed-form z-axis evolution of a family member.

    Only the z orientation admits these closed forms; other orientations must
    go through the numeric channel.
    """
    if t < 0:
        raise ParamRangeError("time must be nonnegative")
    spectrum = spectrum or StandardCauchy()
    p = params.params
    fam = params.family
    if fam in ("rho_a", "rho_ab"):
        a = p["a"] if "a" in p else None
        g2 = spectrum.phi(2.0 * t)  # weight difference 2 on the Phi+ coherence
        phi = bell_state("phi+").matrix.copy()
        phi[0, 3] *= g2
        phi[3, 0] *= np.conj(g2)
        rho_a = a * phi + (1 - a) * np.eye(4) / 4
        if fam == "rho_a":
            m = rho_a
        else:
            b = p["b"]
            psi = bell_state("psi+" if params.bell_sign > 0 else "psi-").matrix
            m = b * psi + (1 - b) * rho_a
        return DensityMatrix(2, m)
    if fam == "rho_eta":
        eta = p["eta"]
        g3 = spectrum.phi(3.0 * t)
        ghz = ghz_state(GhzSpec(3, 0b000, +1)).matrix.copy()
        ghz[0, 7] *= g3
        ghz[7, 0] *= np.conj(g3)
        m = (1 - eta) * ghz + eta * w_state().matrix
        return DensityMatrix(3, m)
    # four-qubit families
    alpha = p["alpha"]
    g2 = spectrum.phi(2.0 * t)  # weights 1 vs 3 on the 0001/1110 coherence
    rho2 = ghz2_state().matrix.copy()
    rho2[0b0001, 0b1110] *= g2
    rho2[0b1110, 0b0001] *= np.conj(g2)
    rho_alpha = alpha * rho2 + (1 - alpha) * np.eye(16) / 16
    if fam == "rho_alpha":
        return DensityMatrix(4, rho_alpha)
    beta = p["beta"]
    m = beta * ghz6_state().matrix + (1 - beta) * rho_alpha
    return DensityMatrix(4, m)


def closed_pt_spectrum_rho_ab(a: float, b: float, t: float) -> np.ndarray:
    """The four eigenvalues of the partially transposed evolved rho_ab.

    Returned in the fixed analytic order (not sorted); they sum to 1. The
    first entry is negative exactly when b > (1 + a)/(3 + a) and is
    independent of t, which is the source of the invariant negativity.
    """
    _check_unit("a", a)
    _check_unit("b", b)
    g2 = np.exp(-2.0 * t)
    return np.array([
        (1 + a - (3 + a) * b) / 4,
        (1 + a + b - a * b) / 4,
        (1 + b - a * (1 - b) * (1 - 2 * g2)) / 4,
        (1 + b - a * (1 - b) * (1 + 2 * g2)) / 4,
    ])


def closed_negativity_rho_ab(a: float, b: float) -> float:
    """((3+a) b - 1 - a)/2, valid when b exceeds the (1+a)/(3+a) threshold."""
    return ((3 + a) * b - 1 - a) / 2


def closed_spectrum_rho_alpha_beta(alpha: float, beta: float,
                                   t: float) -> np.ndarray:
    """All sixteen eigenvalues of the evolved four-qubit family, ascending
    in the fixed analytic order: thirteen copies of the flat value, the large
    DFS eigenvalue, then the two time-dependent ones."""
    _check_unit("alpha", alpha)
    _check_unit("beta", beta)
    g2 = np.exp(-2.0 * t)
    flat = (1 - alpha) * (1 - beta) / 16
    out = np.full(16, flat)
    out[13] = (1 - alpha + 15 * beta + alpha * beta) / 16
    out[14] = (1 + 7 * alpha - 8 * alpha * g2) * (1 - beta) / 16
    out[15] = (1 + 7 * alpha + 8 * alpha * g2) * (1 - beta) / 16
    return out


def _check_unit(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ParamRangeError(f"parameter {name}={value} outside [0, 1]")


# ---------------------------------------------------------------------------
# JSON state configs (shared with the CLI)

def state_from_config(config: dict) -> tuple:
    """Build a state from a JSON-style dict.

    Two forms are accepted::

        {"family": "rho_ab", "params": {"a": 1.0, "b": 0.75}}
        {"mixture": [{"weight": 0.5, "ket": [[re, im], ...]}, ...]}

    Mixture weights must sum to 1 within 1e-9. Returns (state, params) where
    params is the FamilyParams for the first form and None for mixtures.
    """
    if not isinstance(config, dict):
        raise ConfigError("state config must be a JSON object")
    if "family" in config:
        try:
            fp = FamilyParams(config["family"], dict(config.get("params", {})),
                              int(config.get("bell_sign", +1)))
        except (ParamRangeError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad family config: {exc}") from exc
        return build_family(fp), fp
    if "mixture" in config:
        comps = config["mixture"]
        if not isinstance(comps, list) or not comps:
            raise ConfigError("mixture must be a nonempty list")
        total = 0.0
        acc = None
        n_qubits = None
        for comp in comps:
            try:
                weight = float(comp["weight"])
                ket = np.array([complex(re, im) for re, im in comp["ket"]])
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad mixture component: {exc}") from exc
            if weight < 0:
                raise ConfigError("mixture weights must be nonnegative")
            dm = DensityMatrix.from_ket(ket)
            if n_qubits is None:
                n_qubits = dm.n_qubits
                acc = np.zeros((dm.dim, dm.dim), dtype=complex)
            elif dm.n_qubits != n_qubits:
                raise ConfigError("mixture components differ in qubit count")
            acc += weight * dm.matrix
            total += weight
        if abs(total - 1.0) > TOL.mixture_weights:
            raise ConfigError(f"mixture weights sum to {total!r}, expected 1")
        return DensityMatrix(n_qubits, acc), None
    raise ConfigError("state config needs a 'family' or 'mixture' key")


def state_from_json(text: str) -> tuple:
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return state_from_config(config)
