import math

import numpy as np
import pytest

from heunrabi.heun import PhysicalParams

# values quoted for f = 1/2, nu = 1
REF_R = -0.924176
REF_ALPHA = -1.75978


@pytest.fixture
def ref_params():
    return PhysicalParams(0.5, 1.0)


def closed_pp(z, nu):
    """eta_0(z; 1/2, 1/2) at f = 0: cos(nu * arcsin(sqrt z))."""
    return math.cos(nu * math.asin(math.sqrt(z)))


def closed_mp(z, nu):
    """eta_0(z; -1/2, 1/2) at f = 0: sin(nu * arcsin(sqrt z)) / (nu sqrt z)."""
    if z == 0:
        return 1.0
    return math.sin(nu * math.asin(math.sqrt(z))) / (nu * math.sqrt(z))


def free_propagator(tau, nu):
    """U(tau, 0) for f = 0: cos(nu tau/2) - i sin(nu tau/2) sigma_x."""
    c, s = math.cos(0.5 * nu * tau), math.sin(0.5 * nu * tau)
    return np.array([[c, -1j * s], [-1j * s, c]])


def random_simplex_points(n, seed, omega_min=3 / 128):
    """(f, nu) for uniform points of the simplex omega0 + omega + F = 1 with omega > omega_min."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        w0, w, F = rng.dirichlet([1.0, 1.0, 1.0])
        if w > omega_min:
            out.append(PhysicalParams(F / w, w0 / w))
    return out
