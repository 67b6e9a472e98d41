import random
from typing import Any, Dict, Optional

from sympy import Rational, Symbol, fraction

from jetframe._core.errors import DivisionByZero, SamplingExhausted
from jetframe._core.settings.loader import setting
from jetframe._core.utils.sampling import random_rational
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.kernel import eval_rational, normalize, ordered_symbols
from jetframe.expr_kernel.symbols import sort_key


def find_nonzero_witness(
    e: Any,
    assumptions: Optional[AssumptionSet] = None,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
    bound: Optional[int] = None,
    max_draws: Optional[int] = None,
) -> Optional[Dict[Symbol, Rational]]:
    """
    Look for a rational point where ``e`` does not vanish.

    Points are drawn with numerators and denominators bounded by ``bound``;
    points violating an assumption, or where the denominator of ``e``
    vanishes, are resampled.

    Args:
        e: Expression to test.
        assumptions (Optional[AssumptionSet]): Branch conditions the points
            must satisfy.
        seed (Optional[int]): Seed of the sampler, defaults to the ``seed``
            setting.
        trials (Optional[int]): Number of valid points to try, defaults to
            the ``zero_test_trials`` setting.
        bound (Optional[int]): Height bound, defaults to ``sample_bound``.
        max_draws (Optional[int]): Draw budget, defaults to ``sample_draws``.

    Returns:
        Optional[Dict[Symbol, Rational]]: The witness point, or None when
        every valid point evaluated to zero.

    Raises:
        ValueError: If ``trials`` < 1.
        SamplingExhausted: If too few valid points were found.
    """
    assumptions = assumptions or AssumptionSet()
    trials = int(setting("zero_test_trials", trials))
    if trials < 1:
        raise ValueError("trials must be >= 1")
    bound = int(setting("sample_bound", bound))
    max_draws = int(setting("sample_draws", max_draws))

    expr = normalize(e)
    if expr == 0:
        return None
    numerator, denominator = fraction(expr)
    symbols = ordered_symbols(expr)
    extra = sorted(assumptions.symbols() - set(symbols), key=sort_key)
    symbols += extra
    rng = random.Random(int(setting("seed", seed)))

    valid = 0
    draws = 0
    while valid < trials:
        if draws >= max_draws:
            raise SamplingExhausted(draws)
        draws += 1
        point = {s: random_rational(rng, bound) for s in symbols}
        if not assumptions.holds_at(point):
            continue
        try:
            if eval_rational(denominator, point) == 0:
                continue
            value = eval_rational(numerator, point)
        except DivisionByZero:
            continue
        valid += 1
        if value != 0:
            return point
    return None


def is_zero(
    e: Any,
    assumptions: Optional[AssumptionSet] = None,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
) -> bool:
    """
    Probabilistic zero test with one-sided error.

    A False answer is certain (a witness exists, see
    :func:`find_nonzero_witness`); a True answer fails with probability
    bounded by degree / sample_bound per trial.
    """
    return find_nonzero_witness(e, assumptions, seed, trials) is None
