"""
Plan Files

YAML serialization of EncodingPlan. Keys keep a stable order and floats are
written with 17 significant digits, so a plan saved and loaded again is
identical and repeated saves are byte-identical.

Loading re-derives and re-validates the scheme parameters but keeps the
stored tasks as written, so hand-edited plans can be checked by the verifiers.
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from ..scheme import SchemeError, SchemeParams, derive_params
from .plan import (TASK_KINDS, ATask, BSpec, EncodingPlan, WorkerPlan, worker_groups)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
HEADER = "# coded matrix multiplication plan\n"


class PlanFileError(ValueError):
    """Raised when a plan file is malformed or inconsistent with its parameters."""


class _PlanDumper(yaml.SafeDumper):
    pass


def _represent_float(dumper: yaml.SafeDumper, value: float) -> yaml.ScalarNode:
    if not math.isfinite(value):
        # .inf, -.inf and .nan, which YAML loaders read back as floats
        return dumper.represent_float(value)
    text = format(value, '.17g')
    if '.' not in text and 'n' not in text:
        if 'e' in text:
            mantissa, exponent = text.split('e')
            text = f"{mantissa}.0e{exponent}"
        else:
            text += '.0'
    return dumper.represent_scalar('tag:yaml.org,2002:float', text)


_PlanDumper.add_representer(float, _represent_float)


def plan_to_dict(plan: EncodingPlan) -> Dict[str, Any]:
    """Plain-dict form of a plan with a stable key order."""
    scheme, derived = plan.scheme, plan.derived
    workers = []
    for worker in plan.workers:
        workers.append({
            'worker': worker.worker,
            'a_tasks': [
                {
                    'location': location,
                    'kind': task.kind,
                    'class': task.class_id,
                    'support': list(task.support),
                    'coefficients': [float(c) for c in task.coefficients],
                }
                for location, task in enumerate(worker.a_tasks)
            ],
            'b': {
                'type': worker.b.type_id,
                'support': list(worker.b.support),
                'coefficients': [float(c) for c in worker.b.coefficients],
            },
        })
    return {
        'format_version': FORMAT_VERSION,
        'params': {
            'n': scheme.n, 'k_a': scheme.k_a, 'k_b': scheme.k_b, 'x': scheme.x,
            'seed': scheme.seed, 'zeta_override': scheme.zeta_override,
        },
        'derived': {
            'delta_a': derived.delta_a, 'delta': derived.delta, 'ell': derived.ell,
            'p': derived.p, 'ell_c': derived.ell_c, 'c': derived.c, 's_m': derived.s_m,
            'y': derived.y, 'zeta': derived.zeta, 'tau': derived.tau,
        },
        'lambdas': list(plan.lambdas),
        'groups': [list(g) for g in plan.groups],
        'workers': workers,
    }


def dump_plan(plan: EncodingPlan) -> str:
    body = yaml.dump(plan_to_dict(plan), Dumper=_PlanDumper, sort_keys=False,
                     default_flow_style=None, width=120)
    return HEADER + body


def save_plan(plan: EncodingPlan, path: Union[str, Path]) -> Path:
    """
    Write a plan file.

    Args:
        plan (EncodingPlan): plan to store
        path: destination .yaml path

    Returns:
        Path: the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_plan(plan), encoding='utf-8')
    logger.info(f"Plan saved to {path}")
    return path


def _require(mapping: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(mapping, dict) or key not in mapping:
        raise PlanFileError(f"missing '{key}' in {where}")
    return mapping[key]


def _parse_task(entry: Dict[str, Any], where: str, delta_a: int) -> ATask:
    kind = _require(entry, 'kind', where)
    if kind not in TASK_KINDS:
        raise PlanFileError(f"unknown task kind {kind!r} in {where}")
    support = tuple(int(i) for i in _require(entry, 'support', where))
    coefficients = tuple(float(c) for c in _require(entry, 'coefficients', where))
    if not support or len(support) != len(coefficients):
        raise PlanFileError(f"support/coefficient lengths differ in {where}")
    if any(not 0 <= i < delta_a for i in support):
        raise PlanFileError(f"support index out of range [0, {delta_a}) in {where}")
    return ATask(kind=kind, class_id=int(_require(entry, 'class', where)),
                 support=support, coefficients=coefficients)


def plan_from_dict(data: Dict[str, Any]) -> EncodingPlan:
    """
    Rebuild a plan from its dict form.

    Raises:
        PlanFileError: on structural problems or illegal parameters
    """
    if _require(data, 'format_version', 'plan') != FORMAT_VERSION:
        raise PlanFileError(f"unsupported plan format version {data['format_version']!r}")
    raw = _require(data, 'params', 'plan')
    try:
        scheme = SchemeParams(n=raw['n'], k_a=raw['k_a'], k_b=raw['k_b'], x=raw.get('x', 0),
                              seed=raw.get('seed', 0), zeta_override=raw.get('zeta_override'))
        derived = derive_params(scheme)
    except (KeyError, SchemeError) as e:
        raise PlanFileError(f"invalid plan parameters: {e}") from e

    entries = _require(data, 'workers', 'plan')
    if len(entries) != derived.n:
        raise PlanFileError(f"plan lists {len(entries)} workers, parameters need {derived.n}")

    workers = []
    for index, entry in enumerate(entries):
        where = f"worker {index}"
        if _require(entry, 'worker', where) != index:
            raise PlanFileError(f"worker entries out of order at position {index}")
        raw_tasks = _require(entry, 'a_tasks', where)
        if len(raw_tasks) != derived.ell:
            raise PlanFileError(f"{where} has {len(raw_tasks)} A tasks, expected {derived.ell}")
        tasks = tuple(_parse_task(t, f"{where} location {loc}", derived.delta_a)
                      for loc, t in enumerate(raw_tasks))
        raw_b = _require(entry, 'b', where)
        b_support = tuple(int(j) for j in _require(raw_b, 'support', where))
        b_coefficients = tuple(float(c) for c in _require(raw_b, 'coefficients', where))
        if len(b_support) != len(b_coefficients) or any(not 0 <= j < derived.k_b for j in b_support):
            raise PlanFileError(f"invalid B block in {where}")
        workers.append(WorkerPlan(worker=index, a_tasks=tasks,
                                  b=BSpec(type_id=int(_require(raw_b, 'type', where)),
                                          support=b_support, coefficients=b_coefficients)))

    lambdas = tuple(int(v) for v in data.get('lambdas', [0] * derived.ell))
    return EncodingPlan(scheme=scheme, derived=derived, workers=tuple(workers),
                        lambdas=lambdas, groups=worker_groups(derived))


def load_plan(path: Union[str, Path]) -> EncodingPlan:
    """
    Read a plan file written by save_plan (or edited by hand).

    Raises:
        FileNotFoundError: if the file does not exist
        PlanFileError: if the contents are malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Plan file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as e:
        raise PlanFileError(f"cannot parse {path}: {e}") from e
    plan = plan_from_dict(data)
    logger.info(f"Loaded plan for n={plan.n} from {path}")
    return plan
