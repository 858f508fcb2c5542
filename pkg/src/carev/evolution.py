"""Ground-truth engine: one evolution step and exhaustive reversibility.

Everything here is independent of the graph deciders; the test suite
plays the two against each other.
"""

from __future__ import annotations

import numpy as np

from ._backend import kernels
from .core import LocalRule
from .errors import BudgetError, InvalidArgumentError, InvalidStateError

#: Largest admitted p**n for exhaustive enumeration.
DEFAULT_ORACLE_BUDGET = 1 << 24


def as_configuration(cells, rule: LocalRule) -> np.ndarray:
    """Validate and convert a cell sequence for the given rule."""
    config = np.asarray(list(cells), dtype=np.int64)
    if config.ndim != 1 or config.size < 1:
        raise InvalidArgumentError("configuration must hold at least one cell")
    if config.min() < 0 or config.max() >= rule.p:
        raise InvalidStateError(
            f"cell state outside alphabet of size {rule.p}"
        )
    return config


def evolve_null(rule: LocalRule, config) -> np.ndarray:
    """One synchronous step under null boundary conditions.

    Cell i of the result is the rule applied to the window
    ``config[i-r_l : i+r_r]`` where cells outside the lattice read 0.
    """
    cells = as_configuration(config, rule)
    r_l, r_r = rule.neighborhood.r_l, rule.neighborhood.r_r
    n = cells.size
    padded = np.zeros(n + r_l + r_r, dtype=np.int64)
    padded[r_l:r_l + n] = cells
    nbidx = np.zeros(n, dtype=np.int64)
    for j in range(rule.k):
        nbidx *= rule.p
        nbidx += padded[j:j + n]
    return rule.table_array()[nbidx]


def _check_budget(rule: LocalRule, n: int, budget: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"cell count must be >= 1, got {n}")
    if rule.p**n > budget:
        raise BudgetError(
            f"p**n = {rule.p}**{n} exceeds enumeration budget {budget}"
        )


def brute_force_reversible(rule: LocalRule, n: int,
                           budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """True iff the null-boundary step is injective on all p**n
    configurations of n cells (equivalently bijective).

    Enumerates every configuration in ascending index order, tracking
    image indices in a presence bitset; the first repeated image ends
    the scan.
    """
    _check_budget(rule, n, budget)
    return bool(kernels().oracle_is_reversible(
        rule.table_array(), rule.p, rule.neighborhood.r_l,
        rule.neighborhood.r_r, n,
    ))


def count_preimages(rule: LocalRule, config,
                    budget: int = DEFAULT_ORACLE_BUDGET) -> int:
    """Number of configurations evolving to `config` in one step."""
    cells = as_configuration(config, rule)
    _check_budget(rule, cells.size, budget)
    image_index = 0
    for d in cells:
        image_index = image_index * rule.p + int(d)
    return int(kernels().count_preimages_exhaustive(
        rule.table_array(), rule.p, rule.neighborhood.r_l,
        rule.neighborhood.r_r, image_index, cells.size,
    ))
