from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import Iterator, Sequence, Tuple


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Symmetric derivative multi-index: one count per variable."""

    counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts):
            raise ValueError(f"Negative count in multi-index {self.counts}")

    @classmethod
    def zero(cls, size: int) -> "MultiIndex":
        return cls((0,) * size)

    @classmethod
    def unit(cls, size: int, i: int) -> "MultiIndex":
        return cls.zero(size).bump(i)

    @classmethod
    def from_names(cls, names: Sequence[str], variables: Sequence[str]) -> "MultiIndex":
        counts = [0] * len(variables)
        for name in names:
            counts[list(variables).index(name)] += 1
        return cls(tuple(counts))

    @property
    def size(self) -> int:
        return len(self.counts)

    @property
    def order(self) -> int:
        return sum(self.counts)

    def bump(self, i: int, by: int = 1) -> "MultiIndex":
        counts = list(self.counts)
        counts[i] += by
        return MultiIndex(tuple(counts))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a - b for a, b in zip(self.counts, other.counts)))

    def divides(self, other: "MultiIndex") -> bool:
        """Componentwise ``self <= other``."""
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def factorial(self) -> int:
        result = 1
        for c in self.counts:
            result *= factorial(c)
        return result

    def last(self) -> int:
        """Position of the last nonzero count."""
        for i in range(self.size - 1, -1, -1):
            if self.counts[i]:
                return i
        raise ValueError("The empty multi-index has no last position")

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.counts) if c)

    def head(self, k: int) -> "MultiIndex":
        return MultiIndex(self.counts[:k])

    def tail(self, k: int) -> "MultiIndex":
        return MultiIndex(self.counts[k:])

    def join(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self.counts + other.counts)

    def names(self, variables: Sequence[str]) -> Tuple[str, ...]:
        return tuple(v for v, c in zip(variables, self.counts) for _ in range(c))

    def splits(self) -> Iterator[Tuple["MultiIndex", "MultiIndex"]]:
        """All pairs (B, C) with B + C = self."""
        for b in product(*(range(c + 1) for c in self.counts)):
            low = MultiIndex(tuple(b))
            yield low, self - low

    @staticmethod
    def of_order(size: int, order: int) -> Iterator["MultiIndex"]:
        """Multi-indices of exactly ``order``, in decreasing lexicographic order."""
        if size == 0:
            if order == 0:
                yield MultiIndex(())
            return
        for first in range(order, -1, -1):
            for rest in MultiIndex.of_order(size - 1, order - first):
                yield MultiIndex((first,) + rest.counts)

    @staticmethod
    def up_to(size: int, order: int) -> Iterator["MultiIndex"]:
        for k in range(order + 1):
            yield from MultiIndex.of_order(size, k)
