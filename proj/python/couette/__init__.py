"""Plane Couette flow mode solvers, resolvent norms and sweeps.

The command wrappers return the same JSON record the CLI writes, parsed into
dicts. Output files go to ``out_dir`` when given, otherwise to a scratch
directory that is removed afterwards.
"""

import json
import tempfile
from contextlib import contextmanager

from . import _core
from ._core import (
    CouetteError,
    EndpointViolation,
    InvalidArgument,
    MeshTooCoarse,
    SizingError,
    default_k_max,
    forcing_presets,
    global_norm,
    mode_gain,
    theorem1_bound,
    theorem1_radius,
)

__all__ = [
    "CouetteError",
    "EndpointViolation",
    "InvalidArgument",
    "MeshTooCoarse",
    "SizingError",
    "default_k_max",
    "eigs",
    "forcing_presets",
    "global_norm",
    "mode_gain",
    "solve",
    "sweep_delta",
    "sweep_resolvent",
    "theorem1_bound",
    "theorem1_radius",
    "verify",
]


@contextmanager
def _output_dir(out_dir):
    if out_dir is not None:
        yield str(out_dir)
        return
    with tempfile.TemporaryDirectory(prefix="couette-") as tmp:
        yield tmp


def solve(k, xi, reynolds, re_s=0.0, forcing="sin", forcing_file=None, nodes=64, rel_tol=1e-6, out_dir=None):
    with _output_dir(out_dir) as out:
        text = _core.solve_json(k, re_s, xi, reynolds, forcing, forcing_file, nodes, rel_tol, out)
    return json.loads(text)


def sweep_delta(r_list, target="delta1", xi_points=16, rel_tol=1e-6, refine=True, out_dir=None):
    with _output_dir(out_dir) as out:
        text = _core.sweep_delta_json(target, list(r_list), xi_points, rel_tol, refine, out)
    return json.loads(text)


def sweep_resolvent(r_list, xi_points=16, nodes=64, k_max=0, refine=True, out_dir=None):
    with _output_dir(out_dir) as out:
        text = _core.sweep_resolvent_json(list(r_list), xi_points, nodes, k_max, refine, out)
    return json.loads(text)


def eigs(k, r_list, nodes=96, refined_nodes=0, out_dir=None):
    with _output_dir(out_dir) as out:
        text = _core.eigs_json(k, list(r_list), nodes, refined_nodes, out)
    return json.loads(text)


def verify(suites=(), tolerance_scale=1.0, seed=20240611, out_dir=None):
    with _output_dir(out_dir) as out:
        text = _core.verify_json(list(suites), tolerance_scale, seed, out)
    return json.loads(text)
