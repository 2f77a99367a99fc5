"""
Sparsity Cost Model

Expected per-worker computation of the scheme against a dense-coded
baseline (every encoded block a combination of all k_a A blocks and all k_b
B blocks) when every input entry is non-zero with probability density.

A linear combination of w blocks has density 1 - (1 - density)^w; the
first-order estimate min(1, w * density) is used for the headline ratio,
which for small densities is

    zeta (p + (k_a - y) ell_c) / (Delta_A k_b)  =  (zeta / n)(1 + s_m / k_b)  at x = 0.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from ..scheme import DerivedParams

logger = logging.getLogger(__name__)

DENSITY_MODELS = ('linear', 'exact')


def predicted_density(weight: int, density: float, model: str = 'exact') -> float:
    """
    Density of a random combination of weight blocks of the given density.

    Args:
        weight (int): number of combined blocks
        density (float): non-zero probability of each input entry
        model (str): 'exact' for 1 - (1 - density)^weight, 'linear' for
            min(1, weight * density)

    Returns:
        float: predicted density in [0, 1]
    """
    if model not in DENSITY_MODELS:
        raise ValueError(f"unknown density model {model!r}; expected one of {DENSITY_MODELS}")
    if model == 'linear':
        return min(1.0, weight * density)
    return 1.0 - (1.0 - density) ** weight


@dataclass(frozen=True)
class SparsityCostReport:
    """
    Expected flop counts of one worker.

    Block costs are for a single A_i^T B_j product of a t x (r / Delta_A)
    A block and a t x (w / k_b) B block; worker costs sum the ell products
    of a worker (one product for the baseline, whose blocks are k_a times
    wider).

    Attributes:
        ratio: small-density cost ratio, proposed over baseline
        closed_form: (zeta / n)(1 + s_m / k_b), equal to ratio when x = 0
        density: input density
        model: density model used for the flop estimates
        uncoded_block_cost: uncoded A block times coded B block
        coded_block_cost: coded A block times coded B block
        proposed_worker_cost: all ell products of one worker
        baseline_worker_cost: the single dense-coded product
    """
    ratio: Fraction
    closed_form: Fraction
    density: float
    model: str
    uncoded_block_cost: float
    coded_block_cost: float
    proposed_worker_cost: float
    baseline_worker_cost: float

    @property
    def speedup(self) -> float:
        return self.baseline_worker_cost / self.proposed_worker_cost

    def to_dict(self) -> dict:
        return {
            'ratio': str(self.ratio), 'ratio_value': float(self.ratio),
            'closed_form': str(self.closed_form), 'density': self.density,
            'density_model': self.model,
            'uncoded_block_cost': self.uncoded_block_cost,
            'coded_block_cost': self.coded_block_cost,
            'proposed_worker_cost': self.proposed_worker_cost,
            'baseline_worker_cost': self.baseline_worker_cost,
            'speedup': self.speedup,
        }


def cost_ratio(derived: DerivedParams) -> Fraction:
    """zeta (p + (k_a - y) ell_c) / (Delta_A k_b) as an exact fraction."""
    return Fraction(derived.zeta * (derived.p + derived.coded_weight_a * derived.ell_c),
                    derived.delta_a * derived.k_b)


def sparsity_cost_model(derived: DerivedParams, density: float, rows: int = 1,
                        a_cols: int = 1, b_cols: int = 1, model: str = 'exact') -> SparsityCostReport:
    """
    Compare expected per-worker flops of the scheme and a dense-coded baseline.

    A product of a t x a block of density d_a with a t x b block of density
    d_b costs about 2 t a b d_a d_b flops.

    Args:
        derived (DerivedParams): derived scheme quantities
        density (float): input density in (0, 1]
        rows (int): t, the common row count of A and B
        a_cols (int): r, columns of A
        b_cols (int): w, columns of B
        model (str): density model for the flop estimates

    Returns:
        SparsityCostReport: headline ratio and flop estimates

    Raises:
        ValueError: if density is outside (0, 1]
    """
    if not 0.0 < density <= 1.0:
        raise ValueError(f"density must lie in (0, 1], got {density}")

    block = 2.0 * rows * (a_cols / derived.delta_a) * (b_cols / derived.k_b)
    b_density = predicted_density(derived.zeta, density, model)
    uncoded = block * density * b_density
    coded = block * predicted_density(derived.coded_weight_a, density, model) * b_density
    proposed = derived.p * uncoded + derived.ell_c * coded

    # baseline blocks span Delta_A / k_a = ell A blocks
    baseline = (block * derived.ell * predicted_density(derived.k_a, density, model)
                * predicted_density(derived.k_b, density, model))

    report = SparsityCostReport(
        ratio=cost_ratio(derived),
        closed_form=Fraction(derived.zeta, derived.n) * (1 + Fraction(derived.s_m, derived.k_b)),
        density=density, model=model,
        uncoded_block_cost=uncoded, coded_block_cost=coded,
        proposed_worker_cost=proposed, baseline_worker_cost=baseline)
    logger.debug(f"Sparsity cost ratio {report.ratio} at density {density}")
    return report
