"""Bipartite negativity and the genuine-multipartite-negativity monotone.

The monotone E(rho) is the negative optimum of min Tr(W rho) over fully
decomposable witnesses: for every bipartition M the witness splits as
W = P_M + Q_M^{T_M} with 0 <= P_M, Q_M <= I. The SDP solved here is the
conic-standard-form equivalent whose dual variables ARE the witness and its
decomposition, so every solve yields certificates that verify_witness can
recheck from scratch. E is bounded by 1/2 for qubit systems and equals half
the (doubled) negativity on two qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import evolve_z_fastpath
from .errors import ParamRangeError, SolverFailedError
from .linalg import (BipartitionMask, DensityMatrix, all_bipartitions,
                     frobenius_norm, haar_random_ket, negative_eigenvalue_sum,
                     partial_transpose)
from .sdp import SdpProblem, SdpSolution, SolveOptions, _basis, solve
from .states import FamilyParams, GhzSpec, evolved_family, ghz_state, w_state

E_UPPER_BOUND = 0.5  # qubit systems cannot exceed this


def negativity(rho, mask: BipartitionMask) -> float:
    """Doubled negativity: 2 * sum |negative eigenvalues of rho^{T_M}|.

    The doubling makes Bell states score exactly 1.
    """
    return 2.0 * negative_eigenvalue_sum(partial_transpose(rho, mask))


def negativity_all_bipartitions(rho: DensityMatrix) -> dict:
    return {m.label(): negativity(rho, m) for m in all_bipartitions(rho.n_qubits)}


# ---------------------------------------------------------------------------
# the PPT-mixture program

def _pt_batch(n_qubits: int, mask: BipartitionMask):
    """Partial transpose as a batched self-adjoint map on (B, d, d) stacks."""
    def op(batch: np.ndarray) -> np.ndarray:
        t = batch.reshape((-1,) + (2,) * (2 * n_qubits))
        for q in mask.qubits:
            t = np.swapaxes(t, 1 + (q - 1), 1 + n_qubits + (q - 1))
        return t.reshape(batch.shape)
    return op


@dataclass
class _WitnessTemplate:
    problem: SdpProblem
    rho_rows: range
    masks: list
    block_names: dict  # mask label -> (split_p, split_n, pt_p, pt_n)
    kind: str


_TEMPLATES: dict = {}


def build_witness_problem(n_qubits: int, kind: str = "herm") -> _WitnessTemplate:
    """Conic form of the PPT-mixture program for n qubits.

    Primal blocks per bipartition M: the +/- splits of a component Y_M and
    of its partial transpose. Constraints: sum_M Y_M = rho (rhs swapped in
    per state) and PT_M(Y_M) equals its own +/- split. The dual solution
    carries the witness: W = -mat(y) on the rho rows, Q_M and P_M are dual
    slack blocks.

    ``kind="sym"`` restricts every variable to real matrices, which is
    lossless for a real density matrix: conjugating any feasible witness
    decomposition gives another one with the same objective, so the optimum
    is attained at a real point. It roughly halves the problem size.
    """
    d = 2 ** n_qubits
    masks = all_bipartitions(n_qubits)
    prob = SdpProblem()
    names = {}
    for m in masks:
        lbl = m.label()
        names[lbl] = (f"split_{lbl}_p", f"split_{lbl}_n",
                      f"pt_{lbl}_p", f"pt_{lbl}_n")
        for name in names[lbl]:
            prob.add_block(name, d, kind)
        prob.add_objective(names[lbl][1], np.eye(d))
        prob.add_objective(names[lbl][3], np.eye(d))
    rho_terms = []
    for m in masks:
        sp_, sn, _, _ = names[m.label()]
        rho_terms += [(sp_, +1.0, None), (sn, -1.0, None)]
    rho_rows = prob.add_matrix_equality(rho_terms, np.zeros((d, d)))
    for m in masks:
        sp_, sn, pp, pn = names[m.label()]
        op = _pt_batch(n_qubits, m)
        prob.add_matrix_equality(
            [(sp_, +1.0, op), (sn, -1.0, op), (pp, -1.0, None), (pn, +1.0, None)],
            np.zeros((d, d)))
    prob.compile()
    return _WitnessTemplate(prob, rho_rows, masks, names, kind)


def _witness_template(n_qubits: int, kind: str) -> _WitnessTemplate:
    if (n_qubits, kind) not in _TEMPLATES:
        _TEMPLATES[n_qubits, kind] = build_witness_problem(n_qubits, kind)
    return _TEMPLATES[n_qubits, kind]


DEFAULT_WITNESS_OPTIONS = SolveOptions(gap_tol=1e-9, feas_tol=1e-9)

# a solve that stalls at the float64 floor is still accepted when its
# certificates meet the downstream tolerance
CERTIFICATE_GAP = 1e-7
CERTIFICATE_RESIDUAL = 1e-7


@dataclass
class GenuineNegativityResult:
    """E value plus the witness certificate and solver diagnostics."""

    value: float                  # E = max(0, -min Tr(W rho))
    raw_optimum: float            # min Tr(W rho), may be positive
    witness: np.ndarray
    decomposition: list           # (mask, P_M, Q_M) triples
    duality_gap: float
    max_residual: float
    iterations: int
    status: str

    @property
    def entangled(self) -> bool:
        return self.raw_optimum < 0


def genuine_negativity(rho: DensityMatrix,
                       options: SolveOptions | None = None) -> GenuineNegativityResult:
    """Genuine multipartite negativity via the PPT-mixture SDP (2..4 qubits)."""
    n = rho.n_qubits
    if not 2 <= n <= 4:
        raise ParamRangeError("genuine_negativity supports 2 to 4 qubits")
    real_state = bool(np.all(rho.matrix.imag == 0))
    kind = "sym" if real_state else "herm"
    tmpl = _witness_template(n, kind)
    matrix = rho.matrix.real if real_state else rho.matrix
    prob = tmpl.problem.replace_rhs(tmpl.rho_rows, matrix)
    sol = solve(prob, options or DEFAULT_WITNESS_OPTIONS)
    certified = (sol.duality_gap <= CERTIFICATE_GAP
                 and sol.max_residual <= CERTIFICATE_RESIDUAL)
    if sol.status != "optimal" and not certified:
        raise SolverFailedError(
            f"witness SDP ended with status {sol.status}: {sol.message} "
            f"(gap {sol.duality_gap:.2e}, residual {sol.max_residual:.2e})",
            solution=sol)
    basis = _basis(2 ** n, kind)
    y_w = basis.mat(sol.dual_y[np.asarray(tmpl.rho_rows)])
    witness = -y_w
    decomposition = []
    for m in tmpl.masks:
        sp_, _, pp, _ = tmpl.block_names[m.label()]
        p_m = sol.dual_blocks[sp_]
        q_m = sol.dual_blocks[pp]
        decomposition.append((m, p_m, q_m))
    raw = -sol.dual_objective  # = min Tr(W rho)
    return GenuineNegativityResult(
        value=max(0.0, -raw),
        raw_optimum=raw,
        witness=witness,
        decomposition=decomposition,
        duality_gap=sol.duality_gap,
        max_residual=sol.max_residual,
        iterations=sol.iterations,
        status=sol.status if sol.status == "optimal" else "certified",
    )


# ---------------------------------------------------------------------------
# independent certificate check

@dataclass
class WitnessCheck:
    name: str
    value: float
    bound: float
    passed: bool


@dataclass
class WitnessReport:
    checks: list
    all_passed: bool
    entanglement_detected: bool
    witness_expectation: float


def verify_witness(result: GenuineNegativityResult, rho: DensityMatrix,
                   residual_tol: float = 1e-7,
                   eig_slack: float = 1e-8) -> WitnessReport:
    """Recheck every certificate from scratch, independent of the solver.

    Recomputes Tr(W rho), the decomposition residual of every bipartition,
    and the eigenvalue bounds of every P_M and Q_M.
    """
    checks = []
    w = result.witness
    expec = float(np.trace(w @ rho.matrix).real)
    checks.append(WitnessCheck(
        "witness_expectation_matches", abs(expec - result.raw_optimum),
        residual_tol, abs(expec - result.raw_optimum) <= residual_tol))
    for mask, p_m, q_m in result.decomposition:
        lbl = mask.label()
        resid = frobenius_norm(w - (p_m + partial_transpose(q_m, mask)))
        checks.append(WitnessCheck(
            f"decomposition_residual_{lbl}", resid, residual_tol,
            resid <= residual_tol))
        for tag, mat in (("P", p_m), ("Q", q_m)):
            evs = np.linalg.eigvalsh(mat)
            ok = evs[0] >= -eig_slack and evs[-1] <= 1 + eig_slack
            checks.append(WitnessCheck(
                f"{tag}_{lbl}_eigenvalue_range",
                float(max(-evs[0], evs[-1] - 1)), eig_slack, ok))
    checks.append(WitnessCheck(
        "value_within_qubit_bound", result.value, E_UPPER_BOUND + 1e-7,
        result.value <= E_UPPER_BOUND + 1e-7))
    return WitnessReport(
        checks=checks,
        all_passed=all(c.passed for c in checks),
        entanglement_detected=expec < 0,
        witness_expectation=expec,
    )


# ---------------------------------------------------------------------------
# time-invariance detection

@dataclass
class InvarianceResult:
    invariant: bool
    value: float | None           # E(0) when invariant
    values: np.ndarray            # E on the grid
    state_changes: np.ndarray     # ||rho(t) - rho(0)||_F on the grid
    max_deviation: float          # max_t |E(t) - E(0)|
    max_state_change: float
    grid: np.ndarray


def detect_time_invariance(params: FamilyParams, grid,
                           tol: float = 1e-5,
                           options: SolveOptions | None = None) -> InvarianceResult:
    """E(rho(t)) on a grid via closed-form z-axis evolution plus the SDP.

    Invariant means max_t |E(t) - E(0)| <= tol. The reported state-change
    norms let callers separate genuine invariance from mere DFS membership.
    """
    grid = np.asarray(list(grid), dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ParamRangeError("grid must be nonempty and strictly ascending")
    rho0 = evolved_family(params, float(grid[0]))
    values = np.empty(grid.size)
    changes = np.empty(grid.size)
    for i, t in enumerate(grid):
        rho_t = evolved_family(params, float(t))
        values[i] = genuine_negativity(rho_t, options).value
        changes[i] = frobenius_norm(rho_t.matrix - rho0.matrix)
    max_dev = float(np.abs(values - values[0]).max())
    invariant = max_dev <= tol
    return InvarianceResult(
        invariant=invariant,
        value=float(values[0]) if invariant else None,
        values=values,
        state_changes=changes,
        max_deviation=max_dev,
        max_state_change=float(changes.max()),
        grid=grid,
    )


# ---------------------------------------------------------------------------
# random search for invariance (three-qubit conjecture support)

NONTRIVIAL_STATE_CHANGE = 1e-6  # below this a hit is mere DFS membership


@dataclass
class ScanSample:
    index: int
    weights: tuple
    description: str
    max_deviation: float
    max_state_change: float
    invariant: bool
    nontrivial_hit: bool
    e_values: np.ndarray


@dataclass
class ScanReport:
    n_qubits: int
    n_samples: int
    seed: int
    grid: np.ndarray
    tol: float
    samples: list = field(default_factory=list)
    n_invariant: int = 0
    n_nontrivial_hits: int = 0

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "grid": [float(t) for t in self.grid],
            "tol_invariance": self.tol,
            "n_invariant": self.n_invariant,
            "n_nontrivial_hits": self.n_nontrivial_hits,
            "samples": [
                {
                    "index": s.index,
                    "weights": [float(w) for w in s.weights],
                    "description": s.description,
                    "max_abs_dE": float(s.max_deviation),
                    "max_state_change": float(s.max_state_change),
                    "invariant": bool(s.invariant),
                    "nontrivial_hit": bool(s.nontrivial_hit),
                }
                for s in self.samples
            ],
        }


def _scan_components(n_qubits: int, rng: np.random.Generator,
                     dfs_bias: bool) -> tuple:
    """One random mixture: GHZ-type + (W | DFS GHZ) + Haar pure."""
    d = 2 ** n_qubits
    if n_qubits == 3:
        pattern = int(rng.integers(0, 4))
        sign = +1 if rng.integers(0, 2) == 0 else -1
        comps = [ghz_state(GhzSpec(3, pattern, sign)).matrix,
                 w_state().matrix]
        desc = f"ghz({pattern:03b},{sign:+d})+W+haar"
    elif n_qubits == 4:
        dfs_patterns = (0b0011, 0b0101, 0b0110)
        pat_dfs = int(dfs_patterns[rng.integers(0, 3)])
        decaying = [p for p in range(8) if p not in dfs_patterns]
        pat_dec = int(decaying[rng.integers(0, len(decaying))])
        sign = +1 if rng.integers(0, 2) == 0 else -1
        comps = [ghz_state(GhzSpec(4, pat_dfs, sign)).matrix,
                 ghz_state(GhzSpec(4, pat_dec, +1)).matrix]
        desc = f"ghz_dfs({pat_dfs:04b})+ghz({pat_dec:04b})+haar"
    else:
        raise ParamRangeError("scan supports 3 or 4 qubits")
    ket = haar_random_ket(d, rng)
    comps.append(np.outer(ket, ket.conj()))
    alpha = (6.0, 1.0, 1.0) if dfs_bias else (1.0, 1.0, 1.0)
    weights = rng.dirichlet(alpha)
    m = sum(w * c for w, c in zip(weights, comps))
    return m, tuple(float(w) for w in weights), desc


def random_invariance_scan(n_qubits: int, n_samples: int, seed: int,
                           grid=None, tol: float = 1e-5,
                           dfs_bias: bool = False,
                           options: SolveOptions | None = None) -> ScanReport:
    """Sample random mixtures, evolve them on the z axis, and look for
    nontrivial time-invariant genuine entanglement.

    A nontrivial hit requires the E trace to stay within ``tol`` while the
    state itself moves by more than 1e-6 in Frobenius norm. Deterministic
    for a fixed seed: sample i draws from SeedSequence(seed, spawn_key=(i,)).
    """
    if n_samples < 1:
        raise ParamRangeError("n_samples must be at least 1")
    grid = np.asarray(list(grid) if grid is not None else np.linspace(0, 5, 6),
                      dtype=float)
    report = ScanReport(n_qubits=n_qubits, n_samples=n_samples, seed=seed,
                        grid=grid, tol=tol)
    for i in range(n_samples):
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(seed, spawn_key=(i,))))
        matrix, weights, desc = _scan_components(n_qubits, rng, dfs_bias)
        rho0 = DensityMatrix(n_qubits, matrix)
        values = np.empty(grid.size)
        changes = np.empty(grid.size)
        for k, t in enumerate(grid):
            rho_t = evolve_z_fastpath(rho0, float(t))
            values[k] = genuine_negativity(rho_t, options).value
            changes[k] = frobenius_norm(rho_t.matrix - rho0.matrix)
        max_dev = float(np.abs(values - values[0]).max())
        max_change = float(changes.max())
        invariant = max_dev <= tol
        hit = invariant and max_change > NONTRIVIAL_STATE_CHANGE
        report.samples.append(ScanSample(
            index=i, weights=weights, description=desc,
            max_deviation=max_dev, max_state_change=max_change,
            invariant=invariant, nontrivial_hit=hit, e_values=values))
        report.n_invariant += int(invariant)
        report.n_nontrivial_hits += int(hit)
    return report
