"""Random test points: Gaussian vectors and points in or on a cone."""

from __future__ import annotations

import numpy as np

from .cones import ConeSpec, dual_cone
from .projection import project

__all__ = ["gaussian", "cone_point", "cone_boundary_point", "mixed_vector", "rng_from"]


def rng_from(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def gaussian(rng, n):
    return rng.standard_normal(n)


def cone_boundary_point(K, rng):
    """Nonnegative combination of at most two generators (or a boundary ray)."""
    G = K.generators
    if G is not None:
        k = int(rng.integers(1, 3))
        idx = rng.choice(G.shape[0], size=min(k, G.shape[0]), replace=False)
        return rng.exponential(size=idx.size) @ G[idx]
    if K.kind == "lorentz":
        u = rng.standard_normal(K.dim - 1)
        return np.concatenate([u, [np.linalg.norm(u)]])
    # halfspace cone: projections of Gaussian points land on faces or inside
    return project(K, rng.standard_normal(K.dim)).point


def cone_point(K, rng):
    """A point of ``K``; interior with positive probability."""
    G = K.generators
    if G is not None:
        return rng.exponential(size=G.shape[0]) @ G
    if K.kind == "lorentz":
        u = rng.standard_normal(K.dim - 1)
        return np.concatenate([u, [np.linalg.norm(u) + rng.exponential()]])
    return project(K, rng.standard_normal(K.dim)).point


def mixed_vector(K, rng, boundary_rate=0.25):
    """Gaussian vector, or with probability ``boundary_rate`` a point on the
    boundary of ``K`` or of ``-K`` (boundary cases stress minimality)."""
    r = rng.random()
    if r < boundary_rate / 2:
        return cone_boundary_point(K, rng)
    if r < boundary_rate:
        return -cone_boundary_point(K, rng)
    return gaussian(rng, K.dim)


def interior_dual_sample(K, rng):
    """Random point in the interior of ``dual_cone(K)``."""
    from .cones import interior_dual_direction

    c = interior_dual_direction(K)
    D = dual_cone(K).generators
    if D is not None:
        c = c + rng.exponential(size=D.shape[0]) @ (D / np.linalg.norm(D, axis=1, keepdims=True))
    elif K.kind == "lorentz":
        v = rng.standard_normal(K.dim - 1)
        c = c + np.concatenate([0.5 * v / max(np.linalg.norm(v), 1e-12), [0.0]])
    return c / np.linalg.norm(c)
