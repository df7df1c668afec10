"""
Rank-constrained beamforming by restriction to faces of the PSD cone.

Null directions define a polynomial ideal whose Toeplitz basis ``Q`` fixes
the column space of ``W``; the design then optimizes ``X`` in ``Q X Q^H`` with
``X`` positive definite, so the nulls and the rank hold by construction.
"""

from .array_model import (
    AngleGrid,
    ArrayGeometry,
    beampattern,
    make_grid,
    steering_matrix,
    steering_vector,
    to_db,
    variety_from_directions,
)
from .config import ExperimentConfig, default_config, load_config
from .errors import (
    AmbiguityError,
    ConfigError,
    DimensionError,
    DomainError,
    FactorizationError,
    MetricUndefinedError,
    PreconditionError,
    SolverFailure,
)
from .gsc import BlockingMatrix, blocking_matrix, verify_blocking
from .metrics import BeampatternReport, compute_metrics
from .polyideal import IdealBasis, Poly, Variety, extend_variety, generator_poly, ideal_basis
from .restriction import (
    DesignSpec,
    build_restricted,
    recover_W,
    solve_restricted,
    solve_sdr_baseline,
    to_sdp,
)
from .sdp_solver import HermitianSdp, SdpSolution, SolverOptions, solve

__version__ = "0.1.0"
