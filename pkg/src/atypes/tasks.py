"""Concept functions, training sets and exactness checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .graph import AType
from .sim import as_sequence, run, simulate_batch

__all__ = [
    "DomainError",
    "ConceptFunction",
    "identity",
    "multiplexer",
    "carry",
    "columnwise",
    "clamped_function",
    "columnwise_identity",
    "xor",
    "make_concept",
    "apply",
    "TrainingExample",
    "TrainingSet",
    "training_set",
    "verify_exact",
    "CLAMPED_OUTPUT_LENGTH",
    "EXACT_HORIZON",
    "EXACT_SEQUENCE_LENGTH",
]

CLAMPED_OUTPUT_LENGTH = 3
MAX_CLAMPED_EXAMPLES = 100
SEQUENTIAL_INPUT_LENGTH = 50
EXACT_HORIZON = 1000
EXACT_SEQUENCE_LENGTH = 10_000


class DomainError(ValueError):
    """Input outside the domain on which the concept is defined."""


@dataclass(frozen=True)
class ConceptFunction:
    kind: str
    n: int
    input_dim: int
    output_dim: int
    mode: str
    base: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False, repr=False)
    name: str = ""

    @property
    def clamped(self) -> bool:
        return self.mode == "clamped"

    @property
    def label(self) -> str:
        return self.name or f"{self.kind}({self.n})"

    @property
    def selector_bits(self) -> int:
        return math.ceil(math.log2(self.n)) if self.kind == "multiplexer" and self.n > 1 else 0

    def domain_size(self) -> int:
        if self.kind == "multiplexer":
            return self.n * 2**self.n
        return 2**self.input_dim

    def domain_vector(self, index: int) -> np.ndarray:
        """The ``index``-th in-domain input vector (clamped concepts)."""
        if self.kind == "multiplexer":
            sel, data = divmod(index, 2**self.n)
            return np.array(_bits(sel, self.selector_bits) + _bits(data, self.n), np.uint8)
        return np.array(_bits(index, self.input_dim), np.uint8)


def _bits(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def identity(n: int) -> ConceptFunction:
    return ConceptFunction("identity", n, n, n, "clamped")


def multiplexer(n: int) -> ConceptFunction:
    """Selector pins (most significant first) followed by data pins x_0..x_{n-1}."""
    k = math.ceil(math.log2(n)) if n > 1 else 0
    return ConceptFunction("multiplexer", n, n + k, 1, "clamped")


def carry(n: int) -> ConceptFunction:
    return ConceptFunction("carry", n, 1, n, "sequential")


def columnwise(
    func: Callable[[np.ndarray], np.ndarray], input_dim: int, output_dim: int, name: str = "columnwise"
) -> ConceptFunction:
    """Termwise lift of ``func``, which maps an ``(l, input_dim)`` array to ``(l, output_dim)``."""
    return ConceptFunction("columnwise", input_dim, input_dim, output_dim, "sequential", func, name)


def _xor(x: np.ndarray) -> np.ndarray:
    return (x[:, :1] ^ x[:, 1:2]).astype(np.uint8)


def _ident(x: np.ndarray) -> np.ndarray:
    return x.copy()


def clamped_function(
    func: Callable[[np.ndarray], np.ndarray], input_dim: int, output_dim: int, name: str = "boolean"
) -> ConceptFunction:
    """A Boolean function evaluated in clamped mode; ``func`` acts row-wise like for :func:`columnwise`."""
    return ConceptFunction("boolean", input_dim, input_dim, output_dim, "clamped", func, name)


def xor() -> ConceptFunction:
    return columnwise(_xor, 2, 1, "xor")


def columnwise_identity(n: int = 1) -> ConceptFunction:
    return columnwise(_ident, n, n, f"columnwise-identity({n})")


def make_concept(task: str, n: int) -> ConceptFunction:
    factories = {"identity": identity, "multiplexer": multiplexer, "carry": carry}
    try:
        return factories[task](n)
    except KeyError:
        raise ValueError(f"unknown task {task!r}; expected one of {sorted(factories)}") from None


def _mux_rows(concept: ConceptFunction, x: np.ndarray) -> np.ndarray:
    k = concept.selector_bits
    weights = 1 << np.arange(k - 1, -1, -1)
    sel = (x[:, :k].astype(np.int64) * weights).sum(axis=1) if k else np.zeros(len(x), np.int64)
    if (sel >= concept.n).any():
        bad = int(sel[sel >= concept.n][0])
        raise DomainError(f"selector value {bad} is out of range for {concept.n}-multiplexer")
    return x[np.arange(len(x)), k + sel].reshape(-1, 1).astype(np.uint8)


def apply(concept: ConceptFunction, inputs, out_len: int | None = None) -> np.ndarray:
    """Evaluate a concept on an input sequence.

    Clamped concepts act termwise; when given a single vector and ``out_len``
    the result is that vector's image repeated ``out_len`` times.
    """
    x = as_sequence(inputs, concept.input_dim)
    if concept.kind == "carry":
        n = concept.n
        if len(x) < n:
            raise DomainError(f"{n}-carry needs at least {n} input vectors, got {len(x)}")
        bits = x[:, 0]
        windows = np.lib.stride_tricks.sliding_window_view(bits, n)
        return np.ascontiguousarray(windows, dtype=np.uint8)
    if concept.kind == "identity":
        y = x.copy()
    elif concept.kind == "multiplexer":
        y = _mux_rows(concept, x)
    elif concept.kind in ("columnwise", "boolean"):
        y = np.asarray(concept.base(x), np.uint8).reshape(len(x), concept.output_dim)
    else:
        raise ValueError(f"unknown concept kind {concept.kind!r}")
    if out_len is not None:
        if len(y) != 1:
            raise ValueError("out_len only applies to a single clamped vector")
        y = np.repeat(y, out_len, axis=0)
    return y


@dataclass(frozen=True)
class TrainingExample:
    input: np.ndarray
    expected: np.ndarray


@dataclass(frozen=True)
class TrainingSet:
    concept: ConceptFunction
    examples: tuple[TrainingExample, ...]

    def __post_init__(self) -> None:
        if not self.examples:
            raise ValueError("a training set needs at least one example")
        shapes = {(e.input.shape, e.expected.shape) for e in self.examples}
        if len(shapes) != 1:
            raise ValueError("training examples must share input and output shapes")

    def __len__(self) -> int:
        return len(self.examples)

    @cached_property
    def inputs(self) -> np.ndarray:
        """Stacked inputs, shape ``(examples, input_length, input_dim)``."""
        return np.stack([e.input for e in self.examples])

    @cached_property
    def targets(self) -> np.ndarray:
        """Stacked expected outputs, shape ``(examples, output_length, output_dim)``."""
        return np.stack([e.expected for e in self.examples])

    @property
    def output_length(self) -> int:
        return self.examples[0].expected.shape[0]


def training_set(
    concept: ConceptFunction,
    rng: np.random.Generator,
    *,
    output_length: int = CLAMPED_OUTPUT_LENGTH,
    max_examples: int = MAX_CLAMPED_EXAMPLES,
    sequence_length: int = SEQUENTIAL_INPUT_LENGTH,
) -> TrainingSet:
    """Clamped concepts: every in-domain vector, or ``max_examples`` of them
    sampled without replacement when the domain is larger.  Sequential
    concepts: one random input sequence of ``sequence_length`` vectors.
    """
    if concept.clamped:
        total = concept.domain_size()
        if total > max_examples:
            idx = np.sort(rng.choice(total, size=max_examples, replace=False))
        else:
            idx = np.arange(total)
        examples = []
        for i in idx.tolist():
            x = concept.domain_vector(i).reshape(1, -1)
            examples.append(TrainingExample(x, apply(concept, x, output_length)))
        return TrainingSet(concept, tuple(examples))
    x = rng.integers(0, 2, size=(sequence_length, concept.input_dim), dtype=np.uint8)
    return TrainingSet(concept, (TrainingExample(x, apply(concept, x)),))


def verify_exact(
    atype: AType,
    concept: ConceptFunction,
    rng: np.random.Generator,
    *,
    horizon: int = EXACT_HORIZON,
    sequence_length: int = EXACT_SEQUENCE_LENGTH,
) -> bool:
    """Long-run exactness check.

    Clamped: for every in-domain vector the output stays equal to the
    concept's value for ``horizon`` moments from the delay.  Sequential: a
    fresh random input of ``sequence_length`` vectors is mapped exactly.
    """
    g = atype.graph
    if g.input_dim != concept.input_dim or g.output_dim != concept.output_dim:
        return False
    if concept.clamped:
        xs = np.stack([concept.domain_vector(i) for i in range(concept.domain_size())])
        expected = apply(concept, xs)
        # chunk to bound memory on large domains
        for start in range(0, len(xs), 256):
            chunk = xs[start : start + 256, None, :]
            out = simulate_batch(g, chunk, atype.delay + horizon)[:, atype.delay :, :]
            if not (out == expected[start : start + 256, None, :]).all():
                return False
        return True
    x = rng.integers(0, 2, size=(sequence_length, concept.input_dim), dtype=np.uint8)
    expected = apply(concept, x)
    return bool(np.array_equal(run(atype, x, len(expected)), expected))
