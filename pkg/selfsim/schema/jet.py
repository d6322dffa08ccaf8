from dataclasses import dataclass
from typing import Any, Tuple

import math


def _pair_index(i: int, j: int, n: int) -> int:
    # Upper-triangle packing: (0,0), (0,1), ..., (0,n-1), (1,1), ...
    if i > j:
        i, j = j, i
    return i * n - i * (i - 1) // 2 + (j - i)


@dataclass(frozen=True)
class Jet2:
    """Value, first partials and second partials of a scalar field at one point.

    Mixed partials are stored once per unordered pair, so symmetry holds by
    construction. Entries may be floats or mpmath numbers.
    """
    variables: Tuple[str, ...]
    value: Any
    d1: Tuple[Any, ...]
    d2: Tuple[Any, ...]

    def __post_init__(self):
        n = len(self.variables)
        if n not in (1, 2):
            raise ValueError(f"Jets carry one or two variables, got {n}")
        if len(self.d1) != n:
            raise ValueError(f"Expected {n} first partials, got {len(self.d1)}")
        if len(self.d2) != n * (n + 1) // 2:
            raise ValueError(f"Expected {n * (n + 1) // 2} second partials, got {len(self.d2)}")

    @classmethod
    def of_two(cls, variables, value, da, db, daa, dab, dbb):
        return cls(tuple(variables), value, (da, db), (daa, dab, dbb))

    @classmethod
    def of_one(cls, variable, value, da, daa):
        return cls((variable,), value, (da,), (daa,))

    @classmethod
    def zero(cls, variables=("t", "x")):
        n = len(variables)
        return cls(tuple(variables), 0.0, (0.0,) * n, (0.0,) * (n * (n + 1) // 2))

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise ValueError(f"Unknown variable {var} for jet in {self.variables}")

    def first(self, var: str):
        return self.d1[self._index(var)]

    def second(self, var_a: str, var_b: str):
        n = len(self.variables)
        return self.d2[_pair_index(self._index(var_a), self._index(var_b), n)]

    # Positional access for two-variable jets, (a, b) in declaration order
    @property
    def a(self):
        return self.d1[0]

    @property
    def b(self):
        return self.d1[1]

    @property
    def aa(self):
        return self.d2[0]

    @property
    def ab(self):
        return self.d2[1]

    @property
    def bb(self):
        return self.d2[2]

    def negated(self) -> "Jet2":
        return Jet2(self.variables, -self.value, tuple(-d for d in self.d1), tuple(-d for d in self.d2))

    def renamed(self, variables) -> "Jet2":
        return Jet2(tuple(variables), self.value, self.d1, self.d2)

    def as_float(self) -> "Jet2":
        return Jet2(
            self.variables,
            float(self.value),
            tuple(float(d) for d in self.d1),
            tuple(float(d) for d in self.d2),
        )

    def entries(self) -> Tuple[Any, ...]:
        return (self.value,) + self.d1 + self.d2

    def is_finite(self) -> bool:
        return all(math.isfinite(float(e)) for e in self.entries())
