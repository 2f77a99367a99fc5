"""
Scheme Parameters

Validates user parameters and derives every scalar quantity the encoding
algorithm needs: straggler margins, partition counts, class/group sizes,
coding weights and the recovery threshold.

All functions here are pure and operate on frozen value types, so they can
be called concurrently from any thread.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

logger = logging.getLogger(__name__)

# Anything larger is rejected; no deployment needs more workers or blocks
MAX_PARAMETER = 10 ** 6
INT64_MAX = 2 ** 63 - 1


class SchemeError(ValueError):
    """Raised when scheme parameters are illegal."""


@dataclass(frozen=True)
class SchemeParams:
    """
    User-facing scheme parameters.

    Attributes:
        n: number of worker nodes
        k_a: inverse storage fraction for A (each worker stores 1/k_a of A)
        k_b: inverse storage fraction for B; k_b = 1 is the matrix-vector case
        x: straggler-resilience relaxation, s = s_m - x stragglers tolerated
        seed: 64-bit seed for the coefficient generator
        zeta_override: force the B encoding weight (analysis of weaker codes only)
    """
    n: int
    k_a: int
    k_b: int
    x: int = 0
    seed: int = 0
    zeta_override: Optional[int] = None


@dataclass(frozen=True)
class DerivedParams:
    """Every scalar quantity of the encoding algorithm, derived from SchemeParams."""
    n: int
    k_a: int
    k_b: int
    x: int
    s_m: int
    s: int
    y: int
    delta_a: int
    delta_b: int
    delta: int
    p: int
    ell: int
    ell_c: int
    c: int
    omega: int
    zeta: int
    tau: int
    sigma: int

    @property
    def coded_weight_a(self) -> int:
        """Number of A submatrices combined in a coded A block."""
        return self.k_a - self.y

    @property
    def unknowns_per_class(self) -> int:
        return self.k_a * self.k_b

    @property
    def block_shift(self) -> int:
        """Shift of the uncoded window between consecutive workers (Delta_A / n)."""
        return self.delta_a // self.n


def minimal_zeta(k_b: int, omega: int) -> int:
    """
    Smallest B weight that keeps every k_b x k_b submatrix of R_i full rank.

    Args:
        k_b (int): number of B block-columns
        omega (int): type-window parameter 1 + ceil(s_m / k_b)

    Returns:
        int: max over m in 1..k_b of 1 + m - ceil(m / omega)
    """
    return max(1 + m - _ceil_div(m, omega) for m in range(1, k_b + 1))


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check_int(name: str, value: int, minimum: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise SchemeError(f"{name} must be >= {minimum}, got {value}")
    if value > MAX_PARAMETER:
        raise SchemeError(f"{name}={value} exceeds the supported maximum {MAX_PARAMETER}")


def derive_params(params: SchemeParams) -> DerivedParams:
    """
    Validate the scheme parameters and derive all scalar quantities.

    Args:
        params (SchemeParams): user parameters

    Returns:
        DerivedParams: fully populated, self-consistent derived quantities

    Raises:
        SchemeError: if n <= k_a * k_b ("no straggler margin"), if x lies
            outside [0, s_m - 1] ("degenerate relaxation"), or if any value is
            out of the supported range
    """
    _check_int('n', params.n, 1)
    _check_int('k_a', params.k_a, 1)
    _check_int('k_b', params.k_b, 1)
    _check_int('x', params.x, 0)
    if isinstance(params.seed, bool) or not isinstance(params.seed, int) or not 0 <= params.seed < 2 ** 64:
        raise SchemeError(f"seed must be a 64-bit unsigned integer, got {params.seed!r}")

    n, k_a, k_b, x = params.n, params.k_a, params.k_b, params.x

    if n <= k_a * k_b:
        raise SchemeError(f"no straggler margin: n={n} must exceed k_a*k_b={k_a * k_b}")
    s_m = n - k_a * k_b

    if not 0 <= x <= s_m - 1:
        raise SchemeError(f"degenerate relaxation: x={x} must lie in [0, {s_m - 1}]")

    delta_a = math.lcm(n, k_a)
    delta_b = k_b
    delta = delta_a * delta_b
    if delta > INT64_MAX:
        raise SchemeError(f"Delta={delta} overflows 64-bit integers")

    c = math.gcd(n, k_a)
    ell = delta_a // k_a
    p = delta // n
    ell_c = ell - p
    omega = 1 + _ceil_div(s_m, k_b)
    zeta = 1 + k_b - _ceil_div(k_b, omega)
    y = (k_a * x) // s_m

    if params.zeta_override is not None:
        if not 1 <= params.zeta_override <= k_b:
            raise SchemeError(f"zeta_override={params.zeta_override} must lie in [1, {k_b}]")
        if params.zeta_override < zeta:
            logger.warning(f"B weight overridden to {params.zeta_override} below the "
                           f"resilient minimum {zeta}; full rank of R_i is not guaranteed")
        zeta = params.zeta_override

    derived = DerivedParams(
        n=n, k_a=k_a, k_b=k_b, x=x,
        s_m=s_m, s=s_m - x, y=y,
        delta_a=delta_a, delta_b=delta_b, delta=delta,
        p=p, ell=ell, ell_c=ell_c, c=c,
        omega=omega, zeta=zeta,
        tau=k_a * k_b + x,
        sigma=k_b + s_m,
    )

    # Exact-division audit; these follow from lcm/gcd arithmetic
    assert n * p == delta and ell * c == n and c * ell_c == s_m, derived

    logger.debug(f"Derived parameters: {derived}")
    return derived
