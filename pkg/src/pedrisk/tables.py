"""Dense value tables over small sets of 4-state genotype variables.

These tables are the working currency of the inference engine: potentials,
forward/backward messages and clique beliefs are all ``GenotypeTable`` values.
Each table carries a running ``log_scale`` so that long products can be
rescaled to unit maximum without losing the overall magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GENOTYPES = ("00", "01", "10", "11")  # first digit: paternal allele
GENOTYPE_INDEX = {g: i for i, g in enumerate(GENOTYPES)}
N_GENOTYPES = 4


@dataclass(frozen=True)
class GenotypeTable:
    """Nonnegative value table over the joint genotypes of ``scope``.

    ``values`` has shape ``(4,) * len(scope)``, axis order matching ``scope``.
    The represented table is ``values * exp(log_scale)``.
    """

    scope: tuple[str, ...]
    values: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (N_GENOTYPES,) * len(self.scope):
            raise ValueError(
                f"values shape {vals.shape} does not match scope {self.scope}"
            )
        if len(set(self.scope)) != len(self.scope):
            raise ValueError(f"duplicate variable in scope {self.scope}")
        object.__setattr__(self, "scope", tuple(self.scope))
        object.__setattr__(self, "values", vals)

    @classmethod
    def ones(cls, scope=()) -> "GenotypeTable":
        scope = tuple(scope)
        return cls(scope, np.ones((N_GENOTYPES,) * len(scope)))

    @classmethod
    def from_mapping(cls, var: str, mapping) -> "GenotypeTable":
        """Single-variable table from a genotype -> value mapping."""
        vec = np.array([float(mapping.get(g, 0.0)) for g in GENOTYPES])
        return cls((var,), vec)

    def _expanded(self, target_scope: tuple[str, ...]) -> np.ndarray:
        """Values broadcast to the axes of ``target_scope`` (a superset)."""
        positions = [v for v in target_scope if v in self.scope]
        perm = [self.scope.index(v) for v in positions]
        arr = np.transpose(self.values, perm)
        shape = tuple(N_GENOTYPES if v in self.scope else 1 for v in target_scope)
        return arr.reshape(shape)

    def product(self, other: "GenotypeTable") -> "GenotypeTable":
        scope = self.scope + tuple(v for v in other.scope if v not in self.scope)
        vals = self._expanded(scope) * other._expanded(scope)
        return GenotypeTable(scope, vals, self.log_scale + other.log_scale)

    def marginalize(self, keep) -> "GenotypeTable":
        """Sum out every variable not in ``keep``; result axes follow ``keep``."""
        keep = tuple(keep)
        missing = [v for v in keep if v not in self.scope]
        if missing:
            raise ValueError(f"variables {missing} not in scope {self.scope}")
        drop_axes = tuple(i for i, v in enumerate(self.scope) if v not in keep)
        vals = self.values.sum(axis=drop_axes) if drop_axes else self.values
        kept_order = tuple(v for v in self.scope if v in keep)
        out = GenotypeTable(kept_order, vals, self.log_scale)
        return out.transpose(keep) if kept_order != keep else out

    def transpose(self, scope) -> "GenotypeTable":
        scope = tuple(scope)
        if set(scope) != set(self.scope):
            raise ValueError("transpose must keep the same variables")
        perm = [self.scope.index(v) for v in scope]
        return GenotypeTable(scope, np.transpose(self.values, perm), self.log_scale)

    def rescaled(self) -> "GenotypeTable":
        """Scale the peak entry to 1, folding the factor into ``log_scale``."""
        m = float(self.values.max()) if self.values.size else 0.0
        if m <= 0.0 or m == 1.0:
            return self
        return GenotypeTable(self.scope, self.values / m, self.log_scale + math.log(m))

    def total(self) -> float:
        """Plain sum of entries, ignoring ``log_scale``."""
        return float(self.values.sum())

    def log_total(self) -> float:
        """log of the represented table's sum (``-inf`` for an all-zero table)."""
        s = float(self.values.sum())
        if s <= 0.0:
            return -math.inf
        return math.log(s) + self.log_scale

    def normalized(self) -> "GenotypeTable":
        s = float(self.values.sum())
        if s <= 0.0:
            raise ZeroDivisionError("cannot normalize an all-zero table")
        return GenotypeTable(self.scope, self.values / s, 0.0)

    def to_mapping(self) -> dict[str, float]:
        if len(self.scope) != 1:
            raise ValueError("to_mapping requires a single-variable table")
        return {g: float(self.values[i]) for i, g in enumerate(GENOTYPES)}


def product_of(tables, scope_hint=()) -> GenotypeTable:
    """Product of an iterable of tables over at least ``scope_hint``."""
    result = GenotypeTable.ones(tuple(scope_hint))
    for t in tables:
        result = result.product(t)
    return result
