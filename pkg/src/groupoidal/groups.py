"""Small group structures used as arrow labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import StructuralError


@dataclass(eq=False)
class GroupTable:
    """Finite group given by a Cayley table on 0..n-1."""

    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        self.table = tuple(tuple(int(v) for v in row) for row in self.table)
        n = len(self.table)
        if n == 0 or any(len(r) != n for r in self.table):
            raise StructuralError("group table must be square and nonempty")
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise StructuralError("group table rows must be permutations")
        units = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if len(units) != 1:
            raise StructuralError("group table has no two-sided unit")
        self._unit = units[0]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise StructuralError("group table is not associative", {"triple": [a, b, c]})
        self._inv = tuple(next(y for y in range(n) if self.table[x][y] == self._unit) for x in range(n))

    @classmethod
    def cyclic(cls, n: int) -> "GroupTable":
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)),
                   tuple(str(a) for a in range(n)))

    @classmethod
    def trivial(cls) -> "GroupTable":
        return cls(((0,),), ("e",))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def unit(self) -> int:
        return self._unit

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(range(self.order))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def is_subgroup(self, subset: Sequence[int]) -> bool:
        sub = set(subset)
        if self.unit not in sub:
            return False
        return all(self.mul(a, b) in sub for a in sub for b in sub) and all(self.inv(a) in sub for a in sub)

    def is_automorphism(self, sigma: Sequence[int]) -> bool:
        sigma = list(sigma)
        if sorted(sigma) != list(range(self.order)):
            return False
        return all(sigma[self.mul(a, b)] == self.mul(sigma[a], sigma[b])
                   for a in range(self.order) for b in range(self.order))

    def name(self, a: int) -> str:
        return self.names[a] if self.names else str(a)


class Integers:
    """The additive group of integers as a label structure."""

    unit = 0

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a


@dataclass(frozen=True)
class Lattice:
    """The additive group Z^d with tuple labels."""

    d: int

    @property
    def unit(self) -> tuple[int, ...]:
        return (0,) * self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)
