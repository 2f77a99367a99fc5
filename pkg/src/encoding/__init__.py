"""
Encoding module for the coded matrix multiplication toolkit.

This module builds the worker assignment plan and materializes the encoded
blocks each worker multiplies.

Modules:
- plan: Class decomposition, worker task lists and appearance sets
- payloads: Per-worker encoded A and B blocks
- plan_file: YAML plan files
"""

from .plan import (UNCODED, CODED, ClassDecomposition, ATask, BSpec, WorkerPlan, EncodingPlan,
                   AppearanceIndex, decompose_classes, worker_groups, build_plan, appearance_sets)
from .payloads import WorkerPayload, PayloadEncoder, encode_blocks
from .plan_file import (PlanFileError, save_plan, load_plan, dump_plan, plan_to_dict,
                        plan_from_dict)

__all__ = ['UNCODED', 'CODED', 'ClassDecomposition', 'ATask', 'BSpec', 'WorkerPlan',
           'EncodingPlan', 'AppearanceIndex', 'decompose_classes', 'worker_groups', 'build_plan',
           'appearance_sets', 'WorkerPayload', 'PayloadEncoder', 'encode_blocks',
           'PlanFileError', 'save_plan', 'load_plan', 'dump_plan', 'plan_to_dict',
           'plan_from_dict']
