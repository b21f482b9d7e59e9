"""Collective dephasing of few-qubit registers, with certified genuine
multipartite entanglement and Bell-type nonlocality analysis.

The package covers the full pipeline: dense complex linear algebra and
bipartition bookkeeping, the collective-dephasing channel for an arbitrary
field orientation and fluctuation spectrum, the named state families with
closed-form dynamics, a self-contained interior-point SDP solver, the
PPT-mixture genuine-negativity monotone with witness certificates, and the
Ardehali operator with sudden-death-of-nonlocality analysis.
"""

__version__ = "0.1.0"

from .bell import (BellOperator, SuddenDeathResult, ardehali_expectation_curve,
                   ardehali_for_ghz6, ardehali_operator, bell_expectation,
                   genuine_nonlocality_test, nonlocality_threshold_beta,
                   sudden_death_time, transport_settings)
from .channel import (CauchyDistribution, DephasingChannel, FieldOrientation,
                      SpectralDistribution, StandardCauchy,
                      TabulatedCharacteristic, ToeplitzCoefficients, Z_AXIS,
                      characteristic_function, evolve, evolve_z_fastpath,
                      is_dfs_state, projectors, theta_operators,
                      toeplitz_matrix, z_channel)
from .errors import (ColldephError, ConfigError, DimensionMismatchError,
                     GridRangeError, InvalidSpectrumError, MaskMismatchError,
                     NotHermitianError, NotUnitVectorError, NotUnitaryError,
                     ParamRangeError, SolverFailedError, UnsupportedStateError)
from .linalg import (BipartitionMask, DensityMatrix, all_bipartitions,
                     frobenius_norm, hermitian_eigenvalues, kron,
                     partial_transpose)
from .measures import (GenuineNegativityResult, InvarianceResult, ScanReport,
                       WitnessReport, build_witness_problem,
                       detect_time_invariance, genuine_negativity, negativity,
                       negativity_all_bipartitions, random_invariance_scan,
                       verify_witness)
from .sdp import (SdpProblem, SdpSolution, SolveOptions, embed_hermitian,
                  load_problem, solve)
from .states import (FamilyParams, GhzSpec, bell_state, build_family,
                     closed_negativity_rho_ab, closed_pt_spectrum_rho_ab,
                     closed_spectrum_rho_alpha_beta, evolved_family,
                     ghz2_state, ghz6_state, ghz_enumeration, ghz_state,
                     maximally_mixed, state_from_config, state_from_json,
                     w_state)
from .tolerances import DEFAULT as TOLERANCES
