"""
Breadth-first walks, coupled explorations and the drift of the walk
"""

from .drift import DriftSweep, RootBracketError, RootScaling, drift_sweep, phi_varphi, root_s, root_scaling
from .walk import (
    START_MINUS,
    START_VERTEX1,
    ExploredComponent,
    HittingCheck,
    WalkTrace,
    explore_from_vertex1,
    explore_minus,
    hitting_mass_check,
    positive_excursions,
    sample_walk,
)

__all__ = [
    'DriftSweep',
    'ExploredComponent',
    'HittingCheck',
    'RootBracketError',
    'RootScaling',
    'START_MINUS',
    'START_VERTEX1',
    'WalkTrace',
    'drift_sweep',
    'explore_from_vertex1',
    'explore_minus',
    'hitting_mass_check',
    'phi_varphi',
    'positive_excursions',
    'root_s',
    'root_scaling',
    'sample_walk',
]
