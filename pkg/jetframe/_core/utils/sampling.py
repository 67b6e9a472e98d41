import random
from typing import List

from sympy import Rational


def random_rational(rng: random.Random, bound: int) -> Rational:
    """Draw p/q with |p| <= bound and 1 <= q <= bound."""
    numerator = rng.randint(-bound, bound)
    denominator = rng.randint(1, bound)
    return Rational(numerator, denominator)


def random_nonzero_rational(rng: random.Random, bound: int) -> Rational:
    value = random_rational(rng, bound)
    while value == 0:
        value = random_rational(rng, bound)
    return value


def random_vector(rng: random.Random, size: int, bound: int) -> List[Rational]:
    return [random_rational(rng, bound) for _ in range(size)]
