"""
Full-size acceptance runs, one preset group at a time
Run with: pytest -m slow test_acceptance.py
"""

import pytest

from curvkit.config.presets import list_presets
from curvkit.services.acceptance_service import (
    DIMENSION_PRESETS,
    EXACT_SURFACES,
    GRAPH_SURFACES,
    HIGHER_SPHERES,
    NOISY_SPHERES,
    AcceptanceService,
    acceptance_suite,
)

pytestmark = pytest.mark.slow


def describe(report):
    return '; '.join(f"{r.name} [{r.preset}] {r.measured} {r.error or ''}" for r in report.failures)


@pytest.mark.parametrize('criterion, presets', [
    ('constant-curvature-exact', list(EXACT_SURFACES)),
    ('constant-curvature-graph', list(GRAPH_SURFACES)),
    ('higher-spheres', list(HIGHER_SPHERES)),
    ('non-constant-curvature', ['torus', 'hyperboloid']),
    ('noisy-sphere', NOISY_SPHERES),
    ('dimension', DIMENSION_PRESETS),
], ids=lambda value: value if isinstance(value, str) else None)
def test_preset_group_passes(isolated_env, criterion, presets):
    report = acceptance_suite(presets)
    scored = [r for r in report.results if r.name == criterion]
    assert {r.preset for r in scored} == set(presets)
    assert report.passed, describe(report)


def test_graph_presets_run_and_pass(isolated_env):
    graph_presets = [name for name in list_presets() if name.endswith('-graph')]
    assert set(GRAPH_SURFACES) <= set(graph_presets)
    report = acceptance_suite(graph_presets)
    # only the surfaces carry a graph criterion; the higher spheres are scored on exact distances
    assert {r.preset for r in report.results} == set(GRAPH_SURFACES)
    assert report.passed, describe(report)


def test_poincare_disk_median_is_near_minus_two(isolated_env):
    service = AcceptanceService()
    report = service.run(['poincare-disk-exact'])
    assert report.passed, describe(report)

    result = service.results['poincare-disk-exact']
    assert result.config.leave_one_out
    assert abs(result.summary.median + 2.0) <= 0.75
