"""
Named experiment presets and JSON config loading
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import ValidationError

from curvkit.config.constants import (
    NOISE_LEVELS,
    POINCARE_BANDWIDTH,
    R_MAX,
    DensitySource,
    DistanceMode,
    KernelType,
    ManifoldTag,
    geodesic_k_for,
)
from curvkit.exceptions import ConfigError
from curvkit.models.experiment import ExperimentConfig


def build_config(**fields: Any) -> ExperimentConfig:
    """Validate config fields, turning pydantic errors into ConfigError"""
    try:
        return ExperimentConfig(**fields)
    except ValidationError as error:
        raise ConfigError(f"invalid experiment config: {error}") from error


def _surface(name: str, manifold: ManifoldTag, mode: DistanceMode, **extra: Any) -> Dict[str, Any]:
    fields = {
        'name': name,
        'manifold': manifold,
        'distance_mode': mode,
        'r_max': R_MAX[manifold],
    }
    if mode == DistanceMode.GRAPH:
        fields['geodesic_k'] = geodesic_k_for(extra.get('manifold_dimension', 2))
    fields.update(extra)
    return fields


def _preset_fields() -> Dict[str, Dict[str, Any]]:
    presets = {}

    # Constant-curvature surfaces
    for mode in (DistanceMode.EXACT, DistanceMode.GRAPH):
        presets[f'sphere2-{mode.value}'] = _surface(f'sphere2-{mode.value}', ManifoldTag.SPHERE, mode)
        presets[f'euclidean-disk-{mode.value}'] = _surface(
            f'euclidean-disk-{mode.value}', ManifoldTag.EUCLIDEAN_DISK, mode
        )
    presets['poincare-disk-exact'] = _surface(
        'poincare-disk-exact', ManifoldTag.POINCARE_DISK, DistanceMode.EXACT,
        bandwidth=POINCARE_BANDWIDTH, leave_one_out=True,
    )

    # Higher-dimensional spheres use the biweight kernel
    for n in (3, 5, 7):
        for mode in (DistanceMode.EXACT, DistanceMode.GRAPH):
            name = f'sphere{n}-{mode.value}'
            presets[name] = _surface(
                name, ManifoldTag.SPHERE, mode, manifold_dimension=n, kernel=KernelType.BIWEIGHT
            )

    # Non-constant curvature: graph geodesics with a Gaussian kernel
    presets['torus'] = _surface('torus', ManifoldTag.TORUS, DistanceMode.GRAPH, kernel=KernelType.GAUSSIAN)
    presets['hyperboloid'] = _surface(
        'hyperboloid', ManifoldTag.HYPERBOLOID, DistanceMode.GRAPH, kernel=KernelType.GAUSSIAN
    )

    # Noisy spheres: graph geodesics, density from Euclidean distances
    for sigma in NOISE_LEVELS:
        name = f'sphere2-noise-{sigma:g}'
        presets[name] = _surface(
            name, ManifoldTag.SPHERE, DistanceMode.GRAPH,
            noise_sigma=sigma,
            kernel=KernelType.GAUSSIAN,
            density_source=DensitySource.EUCLIDEAN,
        )
    return presets


PRESETS: Dict[str, Dict[str, Any]] = _preset_fields()


def list_presets() -> List[str]:
    return list(PRESETS)


def preset(name: str, **overrides: Any) -> ExperimentConfig:
    """
    Build a preset config

    Args:
        name: Preset name, see list_presets()
        **overrides: Field overrides such as count, seed or kernel

    Returns:
        Validated ExperimentConfig
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset '{name}'; available: {', '.join(PRESETS)}")
    fields = dict(PRESETS[name])
    fields.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(**fields)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read a versioned JSON experiment config"""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except FileNotFoundError as error:
        raise ConfigError(f"config file not found: {path}") from error
    except json.JSONDecodeError as error:
        raise ConfigError(f"{path}: invalid JSON: {error}") from error
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return build_config(**data)


def resolve_config(reference: str, **overrides: Any) -> ExperimentConfig:
    """A preset name or a path to a JSON config"""
    if reference in PRESETS:
        return preset(reference, **overrides)
    config = load_config(reference)
    if overrides:
        fields = config.model_dump()
        fields.update({k: v for k, v in overrides.items() if v is not None})
        config = build_config(**fields)
    return config
