"""Python front end for the robin C++ core.

Inputs are plain dicts and lists; results come back as dicts decoded from the
core's JSON output.
"""

import json

from . import _robin
from ._robin import RobinError

__all__ = [
    "RobinError",
    "green_solve",
    "robin_function",
    "robin_hessian",
    "variation",
    "levi",
    "torus_from_tuple",
    "torus_foliation",
    "torus_classify",
    "lie_closure",
    "lie_tangent",
    "lie_grassmann",
    "lie_flag",
    "lie_hopf",
    "run_cli",
]


def _enc(obj):
    return "" if obj is None else json.dumps(obj)


def green_solve(domain, grid=32, pole=(), c=None):
    """Green function on a gridded domain; returns lambda, residual and grid stats."""
    return json.loads(_robin.green_solve(_enc(domain), grid, list(pole), _enc(c)))


def robin_function(domain, poles, grid=32, c=None, csv=False):
    """Lambda at several poles on one grid, as a list of samples or CSV text."""
    out = _robin.robin_function(_enc(domain), grid, [list(p) for p in poles], _enc(c), csv)
    return out if csv else json.loads(out)


def robin_hessian(domain, pole=(), grid=32, c=None, h_t=0.0, tol_eig=1e-2):
    """Complex Hessian of -Lambda at the pole with eigenpairs."""
    return json.loads(_robin.robin_hessian(_enc(domain), grid, list(pole), _enc(c), h_t, tol_eig))


def variation(family, t0=0j, check="second", grid=32, h_t=0.0, stencil=3, dgdt="shape", lattice=3):
    """First or second variation of lambda, or a subharmonicity scan."""
    return json.loads(_robin.variation(_enc(family), complex(t0), check, grid, h_t, stencil, dgdt, lattice))


def levi(family, x, t=0j, chart=None):
    """k1, k2, K2, W and the Hodge residual at a boundary point."""
    return json.loads(_robin.levi(_enc(chart), _enc(family), complex(t), list(x)))


def torus_from_tuple(tuple6):
    return json.loads(_robin.torus_from_tuple(list(tuple6)))


def torus_foliation(tuple6, sigma=None):
    return json.loads(_robin.torus_foliation(list(tuple6), sigma))


def torus_classify(a, b, height=50):
    return json.loads(_robin.torus_classify(a, b, height))


def lie_closure(n, gens, base="flag"):
    return json.loads(_robin.lie_closure(n, base, _enc(gens)))


def lie_tangent(n, matrix, conjugate=None):
    return json.loads(_robin.lie_tangent(n, _enc(matrix), _enc(conjugate)))


def lie_grassmann(p, q, K=None, matrix=None):
    return json.loads(_robin.lie_grassmann(p, q, K, _enc(matrix)))


def lie_flag(n, samples=50, seed=17):
    return json.loads(_robin.lie_flag(n, samples, seed))


def lie_hopf(n):
    return json.loads(_robin.lie_hopf(n))


def run_cli(*args):
    """Runs the command-line grammar in process; returns (exit code, stdout, stderr)."""
    return _robin.run_cli([str(a) for a in args])
