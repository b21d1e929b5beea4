# SPDX-License-Identifier: Apache-2.0
"""Polarization-aware rotatable antenna simulation and optimization."""

import json

from ._polara import (
    coverage_heatmap,
    default_config_json,
    eta_fixed,
    eta_rot,
    eta_star,
    gain_ratio_db,
    generate_scene,
    geodesic_from_z,
    optimal_rotation_los,
    project_so3,
    Scene,
    solve,
    sweep_csv,
    verify,
)


def config_json(**overrides):
    """Default experiment JSON with top-level keys replaced."""
    cfg = json.loads(default_config_json())
    cfg.update(overrides)
    return json.dumps(cfg)


__all__ = [
    "Scene",
    "config_json",
    "coverage_heatmap",
    "default_config_json",
    "eta_fixed",
    "eta_rot",
    "eta_star",
    "gain_ratio_db",
    "generate_scene",
    "geodesic_from_z",
    "optimal_rotation_los",
    "project_so3",
    "solve",
    "sweep_csv",
    "verify",
]
