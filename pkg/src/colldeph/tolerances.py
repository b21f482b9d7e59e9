"""Central numerical tolerances.

Every module reads these instead of hard-coding its own, so property tests
have a single point of tuning.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-12     # max |A - A^dag| relative to max |A|
    psd_slack: float = 1e-9        # smallest admissible eigenvalue of a state
    trace: float = 1e-10           # |tr(rho) - 1|
    unit_vector: float = 1e-12     # | ||n|| - 1 |
    projector: float = 1e-12      # Theta_j completeness / orthogonality
    toeplitz_psd: float = 1e-10    # Bochner check on the dephasing matrix
    dfs: float = 1e-9              # Frobenius distance for DFS membership
    mixture_weights: float = 1e-9  # JSON mixture weights must sum to 1


DEFAULT = Tolerances()
