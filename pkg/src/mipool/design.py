"""Full-rank reference coding of model effects.

Shared by the repeated-measures model and the imputer so categorical
predictors enter both with the same parameterization.  Effects are
names like ``"Gender"`` or products like ``"Age*Gender"``; categorical
factors contribute one indicator per non-reference level, where the
reference is the lexicographically last level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ModelSpecError, RankError

__all__ = ["Design", "effect_design", "parse_effect"]


def parse_effect(effect: str) -> tuple[str, ...]:
    """Split an effect expression into its factor tokens."""
    tokens = tuple(t.strip() for t in effect.split("*"))
    if not tokens or any(not t for t in tokens):
        raise ModelSpecError(f"malformed effect expression {effect!r}")
    return tokens


@dataclass(frozen=True)
class Design:
    """Long-format design matrix with an effect-to-columns map."""

    matrix: np.ndarray
    column_names: tuple[str, ...]
    effect_columns: dict[str, tuple[int, ...]]

    @property
    def n_columns(self) -> int:
        return self.matrix.shape[1]


def _factor_columns(name: str, values: np.ndarray) -> list[tuple[str, np.ndarray]]:
    if np.issubdtype(values.dtype, np.number):
        return [(name, values.astype(float))]
    levels = sorted({str(v) for v in values})
    if len(levels) < 2:
        raise ModelSpecError(f"factor {name!r} has a single level {levels!r}")
    as_str = np.array([str(v) for v in values])
    # reference = lexicographically last level
    return [(f"{name}[{lv}]", (as_str == lv).astype(float)) for lv in levels[:-1]]


def effect_design(columns: Mapping[str, np.ndarray],
                  effects: Sequence[str]) -> Design:
    """Build a full-rank design with an intercept from named columns.

    Raises ModelSpecError for unknown factors and RankError when the
    assembled matrix is rank deficient.
    """
    sizes = {len(np.asarray(v)) for v in columns.values()}
    if len(sizes) > 1:
        raise ModelSpecError(f"columns differ in length: {sorted(sizes)}")
    n = sizes.pop() if sizes else 0
    built: list[np.ndarray] = [np.ones(n)]
    names: list[str] = ["Intercept"]
    effect_cols: dict[str, tuple[int, ...]] = {"Intercept": (0,)}
    for effect in effects:
        tokens = parse_effect(effect)
        for token in tokens:
            if token not in columns:
                raise ModelSpecError(
                    f"effect {effect!r} references unknown factor {token!r}")
        parts = [_factor_columns(t, np.asarray(columns[t])) for t in tokens]
        combos: list[tuple[str, np.ndarray]] = parts[0]
        for extra in parts[1:]:
            combos = [(f"{n1}*{n2}", c1 * c2) for n1, c1 in combos for n2, c2 in extra]
        idx = []
        for name, col in combos:
            idx.append(len(built))
            built.append(col)
            names.append(name)
        effect_cols[effect] = tuple(idx)
    matrix = np.column_stack(built)
    if np.linalg.matrix_rank(matrix) < matrix.shape[1]:
        raise RankError(
            f"design for effects {list(effects)!r} is rank deficient "
            f"({matrix.shape[1]} columns)")
    return Design(matrix=matrix, column_names=tuple(names),
                  effect_columns=effect_cols)
