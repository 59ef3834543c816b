"""
linquench Test Configuration and Fixtures

Provides:
- The shipped spec files and the processes they describe
- Precomputed variance profiles
- A single-thread replicate pool and per-test output directories
- Reset of the global config and pool after every test
"""

from pathlib import Path

import pytest

# Add project root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from linquench.config import LinquenchConfig, set_config
from linquench.counterexample import build_counterexample, innovation_spec
from linquench.process import CoefficientSeq, variance_profile
from linquench.sampler import ReplicatePool, shutdown_replicate_pool

SPEC_DIR = Path(__file__).parent.parent / "specs"


# =============================================================================
# PROCESSES
# =============================================================================

@pytest.fixture
def iid_coefficients() -> CoefficientSeq:
    """f = e."""
    return CoefficientSeq.of([1.0])


@pytest.fixture
def geometric_coefficients() -> CoefficientSeq:
    """Bounded partial sums converging to 15/8."""
    return CoefficientSeq.of([1.0, 0.5, 0.25, 0.125])


@pytest.fixture
def coboundary_coefficients() -> CoefficientSeq:
    """f = e - e o T^{-1}: sigma_bar_n stays at 1."""
    return CoefficientSeq.of([1.0, -1.0])


@pytest.fixture
def failure_spec():
    """Two blocks and two towers with a schedule that validates."""
    return build_counterexample(K=2, V=[4, 16], N=[128, 512], kappa=[4.0, 4.0])


@pytest.fixture
def demo_spec():
    """Three blocks on three small towers."""
    return build_counterexample(K=3, V=[16, 64, 256], N=[1, 4, 16])


@pytest.fixture
def trends_spec():
    """The demo blocks with raw gamma_k."""
    return build_counterexample(K=3, V=[16, 64, 256], N=[1, 4, 16], renormalize=False)


@pytest.fixture
def demo_innovation(demo_spec):
    return innovation_spec(demo_spec)


@pytest.fixture
def iid_profile(iid_coefficients):
    return variance_profile(iid_coefficients, 1000)


# =============================================================================
# RUNTIME
# =============================================================================

@pytest.fixture
def single_pool():
    """Inline pool: chunks run on the calling thread."""
    pool = ReplicatePool(threads=1, chunk_size=256)
    yield pool
    pool.shutdown()


@pytest.fixture
def spec_dir() -> Path:
    return SPEC_DIR


@pytest.fixture
def out_dir(tmp_path) -> Path:
    """Per-test output directory; not created, so tests can check it stays absent."""
    return tmp_path / "out"


@pytest.fixture(autouse=True)
def reset_globals():
    yield
    set_config(LinquenchConfig())
    shutdown_replicate_pool()


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: acceptance-scale Monte Carlo runs (minutes)")
    config.addinivalue_line("markers", "integration: drives the command line end to end")
