"""
Sparse symmetric and bipartite linear algebra: degree trimming, top
eigen/singular subspaces, projections, subspace angles and spectral norms.
"""

from .matrices import BipartiteSparse, SparseSym, trim_bipartite, trim_high_degree
from .subspace import Subspace, project, subspace_angle
from .eigen import DEFAULT_TOL, spectral_norm, top_eigenspace, top_left_singular_space

__all__ = [
    'BipartiteSparse',
    'SparseSym',
    'trim_bipartite',
    'trim_high_degree',
    'Subspace',
    'project',
    'subspace_angle',
    'DEFAULT_TOL',
    'spectral_norm',
    'top_eigenspace',
    'top_left_singular_space',
]
