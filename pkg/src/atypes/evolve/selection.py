"""Exponentially weighted parent and survivor selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["SelectionConfig", "selection_weights", "draw_index", "select_parent", "select_victim"]


@dataclass(frozen=True)
class SelectionConfig:
    # 8 turns a 0.1 fitness gap into odds of about 2.2
    kappa: float = 8.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise ValueError("kappa must be finite and > 0")


def selection_weights(fitnesses: Sequence[float], kappa: float, sign: float) -> np.ndarray:
    """Normalised probabilities proportional to ``exp(sign * kappa * f)``."""
    f = np.asarray(fitnesses, dtype=float)
    z = sign * kappa * f
    w = np.exp(z - z.max())
    return w / w.sum()


def draw_index(fitnesses, kappa: float, sign: float, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to ``exp(sign * kappa * f)``."""
    f = np.asarray(fitnesses, dtype=float)
    if f.size == 0:
        raise ValueError("population is empty")
    z = sign * kappa * f
    cum = np.cumsum(np.exp(z - z.max()))
    # inverse-CDF draw; u * total < total keeps the index in range
    return int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))


def _draw(population, cfg: SelectionConfig, rng: np.random.Generator, sign: float) -> int:
    return draw_index([c.best_fitness for c in population], cfg.kappa, sign, rng)


def select_parent(population, cfg: SelectionConfig, rng: np.random.Generator) -> int:
    """Index of a parent; fitter (lower fitness) members are likelier."""
    return _draw(population, cfg, rng, -1.0)


def select_victim(population, cfg: SelectionConfig, rng: np.random.Generator) -> int:
    """Index of a member to delete; less fit members are likelier."""
    return _draw(population, cfg, rng, +1.0)
