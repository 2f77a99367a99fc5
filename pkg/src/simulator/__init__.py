"""
Simulator module for the coded matrix multiplication toolkit.

This module simulates heterogeneous workers running their task lists and
reports when the master can decode.

Modules:
- costs: SpeedProfile, CostModel and TaskCosts
- timeline: Timeline simulation, time to decode and sweep comparisons
"""

from .costs import COST_MODELS, SimulationError, SpeedProfile, TaskCosts, CostModel
from .timeline import (SWEEP_COLUMNS, Timeline, DecodeTime, SimulationCase, simulate_timeline,
                       simulate_poly_timeline, time_to_decode, poly_time_to_decode, run_case,
                       compare_overall)

__all__ = ['COST_MODELS', 'SimulationError', 'SpeedProfile', 'TaskCosts', 'CostModel',
           'SWEEP_COLUMNS', 'Timeline', 'DecodeTime', 'SimulationCase', 'simulate_timeline',
           'simulate_poly_timeline', 'time_to_decode', 'poly_time_to_decode', 'run_case',
           'compare_overall']
