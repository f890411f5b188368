"""Shared fixtures: cached lattice states and random-graph helpers."""

import warnings
from functools import lru_cache

import numpy as np
import pytest

import gausstopo as gt
from gausstopo import engine


@lru_cache(maxsize=None)
def _surface_state(rows, cols, log_s, boundary="torus"):
    spec = gt.LatticeSpec(rows, cols, boundary, log_s)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        graph = gt.surface_code_graph_analytic(spec)
    return spec, engine.covariance_from_graph(graph)


@lru_cache(maxsize=None)
def _cluster_state(rows, cols, log_s, boundary="torus"):
    spec = gt.LatticeSpec(rows, cols, boundary, log_s)
    return spec, engine.covariance_from_graph(gt.cluster_graph(spec))


@pytest.fixture(scope="session")
def surface_state():
    """Factory: (spec, covariance) of the analytic surface-code state."""
    return _surface_state


@pytest.fixture(scope="session")
def cluster_state():
    """Factory: (spec, covariance) of the cluster state."""
    return _cluster_state


def random_graph(rng, n=None, max_modes=12):
    """Random well-conditioned Gaussian pure-state graph."""
    if n is None:
        n = int(rng.integers(2, max_modes + 1))
    v = rng.standard_normal((n, n))
    v = 0.5 * (v + v.T)
    m = rng.standard_normal((n, n))
    u = m @ m.T + 0.5 * np.eye(n)
    return engine.GaussGraph(v, u)


def star_pipeline_graph(s):
    """3-mode network from measuring p on the hub of a 4-mode star."""
    adj = np.zeros((4, 4))
    adj[0, 1:] = 1.0
    adj[1:, 0] = 1.0
    hub = engine.GaussGraph(adj, s ** -2 * np.eye(4))
    return engine.measure_p(hub, 0)
