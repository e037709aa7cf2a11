import json
from pathlib import Path

import numpy as np
import pytest

from magnomech.model import SystemParams
from magnomech.presets import base_params
from magnomech.steadystate import solve_steady_state
from magnomech.dynamics import build_drift_diffusion
from magnomech.lyapunov import solve_lyapunov

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden():
    with open(GOLDEN_DIR / "materials.json", "r", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture(scope="session")
def base():
    """Preset base operating point (Δ1 = Δ2 = −ω_b, held Δ_m = ω_b, ξ = 0)."""
    return base_params()


@pytest.fixture(scope="session")
def base_state(base):
    return solve_steady_state(base)


@pytest.fixture(scope="session")
def base_cm(base, base_state):
    dd = build_drift_diffusion(base, base_state)
    return solve_lyapunov(dd.M, dd.D)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def decoupled():
    """Γ = ξ = G_mb = 0, frequencies in units of ω_b."""
    return SystemParams(omega_b=1.0, kappa_1=0.1, kappa_2=0.2, kappa_m=0.3, gamma_b=0.01,
                        delta_1=-1.0, delta_2=0.5, delta_m0=1.5, eps_m=1.0, eps_c=2.0)
