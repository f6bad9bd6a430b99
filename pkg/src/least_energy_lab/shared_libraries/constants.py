"""
Configuration constants for Least Energy Lab.

This module loads and validates configuration from environment variables.
In production, out-of-range configuration will raise an error.
"""
import os
import math
import logging
from dotenv import load_dotenv
from typing import List

load_dotenv()

logger = logging.getLogger(__name__)

# Environment
ENVIRONMENT = os.getenv("ENVIRONMENT", "development")

# Package identity
PACKAGE_NAME = "least_energy_lab"
DESCRIPTION = "Least-energy solutions of -Δu + λu = u^p on planar convex domains"

# Cache Configuration (meshes keyed by domain and target size)
CACHE_DIR = os.getenv("LEL_CACHE_DIR", "")

# Solver Configuration
SOLVER_TOL = float(os.getenv("LEL_SOLVER_TOL", "1e-9"))
EIGEN_TOL = float(os.getenv("LEL_EIGEN_TOL", "1e-10"))
CG_ITERATION_FACTOR = int(os.getenv("LEL_CG_ITERATION_FACTOR", "50"))
LOG_DOMAIN = os.getenv("LEL_LOG_DOMAIN", "True") == "True"
STAGNATION_WINDOW = int(os.getenv("LEL_STAGNATION_WINDOW", "100"))
MAX_GRADIENT_STEPS = int(os.getenv("LEL_MAX_GRADIENT_STEPS", "4000"))
MAX_NEWTON_STEPS = int(os.getenv("LEL_MAX_NEWTON_STEPS", "40"))
CONTINUATION_RATIO = float(os.getenv("LEL_CONTINUATION_RATIO", "1.5"))
CONTINUATION_START = float(os.getenv("LEL_CONTINUATION_START", "3"))

# Mesh Configuration
MAX_MESH_VERTICES = int(os.getenv("LEL_MAX_MESH_VERTICES", "400000"))
GRADING_RATE = float(os.getenv("LEL_GRADING_RATE", "0.3"))

# Diagnostics Configuration
WINDOW_RESOLUTION_FACTOR = float(os.getenv("LEL_WINDOW_RESOLUTION_FACTOR", "3"))
DEFAULT_EIGENPAIRS = int(os.getenv("LEL_DEFAULT_EIGENPAIRS", "6"))
NONDEGENERACY_GAP_FACTOR = float(os.getenv("LEL_NONDEGENERACY_GAP_FACTOR", "1e-3"))
# Rescaled radii |X| and angles sampled by profile comparisons
PROFILE_RADII = (0.5, 1.0, 2.0, 3.0, 4.0)
PROFILE_ANGLES = 8
CONCENTRATION_WINDOW = 2.0

# Harness Configuration
DEFAULT_JOBS = int(os.getenv("LEL_DEFAULT_JOBS", "1"))

# Limit-problem constants
MU_BAR_SQUARED = 1.0 / 8.0
BUBBLE_TOTAL_MASS = 8.0 * math.pi
SOBOLEV_LIMIT = (8.0 * math.pi * math.e) ** -0.5


def validate_configuration() -> List[str]:
    """
    Validate configuration and return list of errors.

    Returns:
        List of validation error messages (empty if valid)
    """
    errors = []

    if not 0 < SOLVER_TOL < 1e-2:
        errors.append(f"LEL_SOLVER_TOL must be in (0, 1e-2), got {SOLVER_TOL}")

    if not 0 < EIGEN_TOL < 1e-2:
        errors.append(f"LEL_EIGEN_TOL must be in (0, 1e-2), got {EIGEN_TOL}")

    if CG_ITERATION_FACTOR < 1:
        errors.append(f"LEL_CG_ITERATION_FACTOR must be positive, got {CG_ITERATION_FACTOR}")

    if MAX_MESH_VERTICES < 100 or MAX_MESH_VERTICES > 50_000_000:
        errors.append(
            f"LEL_MAX_MESH_VERTICES must be between 100 and 50000000, got {MAX_MESH_VERTICES}"
        )

    if CONTINUATION_RATIO <= 1.0:
        errors.append(f"LEL_CONTINUATION_RATIO must exceed 1, got {CONTINUATION_RATIO}")

    if not 1.0 < CONTINUATION_START <= 5.0:
        errors.append(f"LEL_CONTINUATION_START must be in (1, 5], got {CONTINUATION_START}")

    if not 0.05 <= GRADING_RATE <= 1.0:
        errors.append(f"LEL_GRADING_RATE must be between 0.05 and 1, got {GRADING_RATE}")

    if WINDOW_RESOLUTION_FACTOR <= 0:
        errors.append(
            f"LEL_WINDOW_RESOLUTION_FACTOR must be positive, got {WINDOW_RESOLUTION_FACTOR}"
        )

    if DEFAULT_EIGENPAIRS < 1:
        errors.append(f"LEL_DEFAULT_EIGENPAIRS must be positive, got {DEFAULT_EIGENPAIRS}")

    if DEFAULT_JOBS < 1:
        errors.append(f"LEL_DEFAULT_JOBS must be positive, got {DEFAULT_JOBS}")

    # In production, the mesh cache must be set
    if ENVIRONMENT == "production":
        if not CACHE_DIR:
            errors.append("LEL_CACHE_DIR must be set in production")

    return errors


def validate_or_exit() -> None:
    """
    Validate configuration and exit if invalid in production.

    In development, only logs warnings.
    In production, raises RuntimeError on invalid configuration.
    """
    errors = validate_configuration()

    if errors:
        for error in errors:
            if ENVIRONMENT == "production":
                logger.critical(f"Configuration error: {error}")
            else:
                logger.warning(f"Configuration warning: {error}")

        if ENVIRONMENT == "production":
            raise RuntimeError(
                f"Invalid configuration in production environment. "
                f"Errors: {', '.join(errors)}"
            )

    logger.debug(f"Configuration validated (environment: {ENVIRONMENT})")


# Validate configuration on module import
validate_or_exit()
