"""Categorical indicator encoding."""

from typing import List, Tuple

import numpy as np

from core.exceptions import DesignError


def encoded_categories(levels: int, overparameterize: bool) -> List[int]:
    """Categories that receive an indicator column (category 0 is the reference)."""
    return list(range(levels)) if overparameterize else list(range(1, levels))


def encode_categorical(
    column: np.ndarray,
    levels: int,
    overparameterize: bool = False,
    check_empty: bool = True,
) -> np.ndarray:
    """Encode integer codes as indicator columns.

    Args:
        column: Codes in ``[0, levels - 1]``.
        levels: Number of categories m.
        overparameterize: Emit m columns instead of m - 1.
        check_empty: Reject categories with no observation.

    Returns:
        np.ndarray: n x (m - 1) or n x m indicator block.

    Raises:
        DesignError: A code is out of range or a category is unobserved.
    """
    codes = np.asarray(column).astype(np.int64)
    if codes.size and (codes.min() < 0 or codes.max() > levels - 1):
        raise DesignError(f"code out of range [0, {levels - 1}]")
    if check_empty:
        counts = np.bincount(codes, minlength=levels)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            raise DesignError(f"empty category {int(empty[0])}")
    categories = encoded_categories(levels, overparameterize)
    return (codes[:, None] == np.array(categories)[None, :]).astype(float)


def indicator_pairs(
    column: np.ndarray, levels: int, overparameterize: bool, check_empty: bool = True
) -> List[Tuple[int, np.ndarray]]:
    """Indicator columns paired with the category they indicate."""
    block = encode_categorical(column, levels, overparameterize, check_empty)
    return list(zip(encoded_categories(levels, overparameterize), block.T))
