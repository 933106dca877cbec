"""Dense truncated free tensor algebra over R^d.

Elements carry one flat coefficient array per level: level k holds the d**k
coefficients of words of length k over the letters 1..d, stored in row-major
multi-index order, so the word (i1, ..., ik) sits at flat index
(i1-1)*d**(k-1) + ... + (ik-1).  Level 0 is a single scalar.

The truncated product keeps levels 0..depth and discards the rest.  The
exponential, logarithm and geometric-series inverse are exact in the
truncated algebra because their arguments have no level-0 part, so every
series below terminates after `depth` multiplications.

Values are immutable after construction (the level arrays are marked
read-only) and all operations are pure functions, which makes sharing
tensors across threads safe.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "TruncatedTensor",
    "GroupTensor",
    "unit",
    "zero",
    "as_group",
    "add",
    "sub",
    "scale",
    "mul",
    "exp",
    "log",
    "inverse_psi",
    "project",
    "level_norm",
    "product_metric",
    "phi_contraction",
    "max_coefficient_difference",
    "word_index",
    "shuffle_words",
    "shuffle_pairing",
    "tensor_to_dict",
    "tensor_from_dict",
    "tensor_to_json",
    "tensor_from_json",
]


def _frozen_levels(dim, depth, levels):
    if dim < 1:
        raise ValueError(f"dim must be at least 1, got {dim}")
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    if len(levels) != depth + 1:
        raise ValueError(f"expected {depth + 1} levels, got {len(levels)}")
    out = []
    for k, lvl in enumerate(levels):
        arr = np.array(lvl, dtype=float).reshape(-1)
        if arr.size != dim**k:
            raise ValueError(f"level {k} must hold {dim**k} coefficients, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"level {k} contains non-finite coefficients")
        arr.setflags(write=False)
        out.append(arr)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class TruncatedTensor:
    """Tensor-algebra element truncated at `depth` over R^dim."""

    dim: int
    depth: int
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", _frozen_levels(self.dim, self.depth, self.levels))

    @property
    def scalar(self) -> float:
        """Level-0 coefficient."""
        return float(self.levels[0][0])

    def level(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.depth:
            raise ValueError(f"level {k} outside 0..{self.depth}")
        return self.levels[k]

    def coefficient(self, word) -> float:
        """Coefficient of a word, given as an iterable of letters in 1..dim."""
        word = tuple(int(a) for a in word)
        if len(word) > self.depth:
            raise ValueError(f"word of length {len(word)} exceeds depth {self.depth}")
        return float(self.levels[len(word)][word_index(word, self.dim)])

    # Small amount of operator sugar; the module-level functions are the API.
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1.0)


@dataclass(frozen=True, eq=False)
class GroupTensor(TruncatedTensor):
    """Truncated tensor whose level-0 coefficient is exactly 1.

    Signatures and segment exponentials are constructed as GroupTensor.
    Full group-likeness (the shuffle relations) is a property of the values,
    verified on demand by signature_engine.check_group_like.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.levels[0][0] != 1.0:
            raise ValueError("group tensor requires level-0 coefficient exactly 1")


def _unit_levels(dim, depth):
    return [np.ones(1)] + [np.zeros(dim**k) for k in range(1, depth + 1)]


def unit(dim: int, depth: int) -> GroupTensor:
    """Multiplicative unit: 1 at level 0, zero elsewhere."""
    return GroupTensor(dim, depth, _unit_levels(dim, depth))


def zero(dim: int, depth: int) -> TruncatedTensor:
    return TruncatedTensor(dim, depth, [np.zeros(dim**k) for k in range(depth + 1)])


def as_group(x: TruncatedTensor) -> GroupTensor:
    return GroupTensor(x.dim, x.depth, x.levels)


def _check_match(x, y):
    if x.dim != y.dim or x.depth != y.depth:
        raise ValueError(
            f"shape mismatch: ({x.dim}, depth {x.depth}) vs ({y.dim}, depth {y.depth})"
        )


def add(x: TruncatedTensor, y: TruncatedTensor) -> TruncatedTensor:
    _check_match(x, y)
    return TruncatedTensor(x.dim, x.depth, [a + b for a, b in zip(x.levels, y.levels)])


def sub(x: TruncatedTensor, y: TruncatedTensor) -> TruncatedTensor:
    _check_match(x, y)
    return TruncatedTensor(x.dim, x.depth, [a - b for a, b in zip(x.levels, y.levels)])


def scale(x: TruncatedTensor, c: float) -> TruncatedTensor:
    c = float(c)
    return TruncatedTensor(x.dim, x.depth, [c * a for a in x.levels])


def mul(x: TruncatedTensor, y: TruncatedTensor) -> TruncatedTensor:
    """Truncated tensor product: level k of the result is sum over i+j=k of
    x_i tensor y_j; levels above the common depth are discarded."""
    _check_match(x, y)
    d, depth = x.dim, x.depth
    out = [np.zeros(d**k) for k in range(depth + 1)]
    for i in range(depth + 1):
        xi = x.levels[i]
        for j in range(depth + 1 - i):
            out[i + j] = out[i + j] + np.multiply.outer(xi, y.levels[j]).reshape(-1)
    return TruncatedTensor(d, depth, out)


def exp(x: TruncatedTensor) -> TruncatedTensor:
    """Truncated exponential series; requires a vanishing level-0 part."""
    if x.scalar != 0.0:
        raise ValueError("exp requires level-0 coefficient exactly 0")
    one = TruncatedTensor(x.dim, x.depth, _unit_levels(x.dim, x.depth))
    acc = one
    # Horner form of sum_{n=0}^{depth} x^n / n!
    for n in range(x.depth, 0, -1):
        acc = add(one, scale(mul(x, acc), 1.0 / n))
    return acc


def log(x: TruncatedTensor) -> TruncatedTensor:
    """Truncated logarithm series; requires level-0 coefficient exactly 1."""
    if x.scalar != 1.0:
        raise ValueError("log requires level-0 coefficient exactly 1")
    one = TruncatedTensor(x.dim, x.depth, _unit_levels(x.dim, x.depth))
    z = sub(x, one)
    acc = z
    p = z
    for n in range(2, x.depth + 1):
        p = mul(p, z)
        acc = add(acc, scale(p, (-1.0) ** (n + 1) / n))
    return acc


def inverse_psi(x: TruncatedTensor) -> TruncatedTensor:
    """Multiplicative inverse via the terminating geometric series.

    Writing x = 1 + a with a supported on levels >= 1, the inverse is
    1 + sum_{n>=1} (-a)^n, and (-a)^n vanishes below level n, so the sum
    stops at n = depth.  On signatures this realises reversal: applying it
    to the signature of a path gives the signature of the reversed path.
    """
    if x.scalar != 1.0:
        raise ValueError("inverse requires level-0 coefficient exactly 1")
    one = TruncatedTensor(x.dim, x.depth, _unit_levels(x.dim, x.depth))
    z = sub(one, x)
    acc = one
    p = one
    for _ in range(x.depth):
        p = mul(p, z)
        acc = add(acc, p)
    return acc


def project(x: TruncatedTensor, n: int):
    """Copy of x truncated at depth n (n at most x.depth)."""
    if not 0 <= n <= x.depth:
        raise ValueError(f"projection depth {n} outside 0..{x.depth}")
    return type(x)(x.dim, n, x.levels[: n + 1])


def level_norm(x: TruncatedTensor, k: int) -> float:
    """Euclidean (Hilbert-Schmidt) norm of level k."""
    if not 0 <= k <= x.depth:
        raise ValueError(f"level {k} outside 0..{x.depth}")
    return float(np.linalg.norm(x.levels[k]))


def product_metric(x: TruncatedTensor, y: TruncatedTensor) -> float:
    """Levelwise metric sum_k 2**-k * min(1, ||x_k - y_k||).

    Metrises levelwise (product-topology style) convergence on the truncated
    algebra; requires matching dim and depth.
    """
    _check_match(x, y)
    total = 0.0
    for k in range(x.depth + 1):
        total += 0.5**k * min(1.0, float(np.linalg.norm(x.levels[k] - y.levels[k])))
    return total


def phi_contraction(x: TruncatedTensor, n: int) -> float:
    """Contract level 2n with Euclidean deltas on adjacent index pairs.

    Pairs (1,2), (3,4), ..., (2n-1, 2n) are each contracted with the identity
    matrix, i.e. the word coefficient at (i1, ..., i_2n) contributes when
    i1=i2, i3=i4, and so on.  Linear in x; requires 2n <= depth.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if 2 * n > x.depth:
        raise ValueError(f"level {2 * n} outside 0..{x.depth}")
    if n == 0:
        return x.scalar
    d = x.dim
    pair_trace = np.eye(d).reshape(-1)
    arr = x.levels[2 * n]
    for _ in range(n):
        # leading index pair varies slowest in row-major order
        arr = pair_trace @ arr.reshape(d * d, -1)
    return float(arr[0])


def max_coefficient_difference(x: TruncatedTensor, y: TruncatedTensor) -> float:
    _check_match(x, y)
    return max(
        float(np.max(np.abs(a - b))) if a.size else 0.0 for a, b in zip(x.levels, y.levels)
    )


def word_index(word, dim: int) -> int:
    """Row-major flat index of a word over letters 1..dim."""
    idx = 0
    for letter in word:
        if not 1 <= letter <= dim:
            raise ValueError(f"letter {letter} outside 1..{dim}")
        idx = idx * dim + (letter - 1)
    return idx


@lru_cache(maxsize=None)
def _shuffle_cached(u, w):
    if not u:
        return ((w, 1),)
    if not w:
        return ((u, 1),)
    out = {}
    for word, m in _shuffle_cached(u[:-1], w):
        key = word + (u[-1],)
        out[key] = out.get(key, 0) + m
    for word, m in _shuffle_cached(u, w[:-1]):
        key = word + (w[-1],)
        out[key] = out.get(key, 0) + m
    return tuple(out.items())


def shuffle_words(u, w) -> dict:
    """Shuffle product of two words as a dict word -> multiplicity."""
    return dict(_shuffle_cached(tuple(int(a) for a in u), tuple(int(a) for a in w)))


def shuffle_pairing(x: TruncatedTensor, u, w):
    """Both sides of the shuffle identity for words u, w against x.

    Returns (<x, u shuffle w>, <x, u> * <x, w>).  The two agree, up to
    rounding, exactly when x behaves group-like on this pair.  Requires
    len(u) + len(w) <= depth.
    """
    u = tuple(int(a) for a in u)
    w = tuple(int(a) for a in w)
    if len(u) + len(w) > x.depth:
        raise ValueError(f"combined word length {len(u) + len(w)} exceeds depth {x.depth}")
    lhs = 0.0
    for word, m in _shuffle_cached(u, w):
        lhs += m * x.coefficient(word)
    rhs = x.coefficient(u) * x.coefficient(w)
    return float(lhs), float(rhs)


def tensor_to_dict(x: TruncatedTensor) -> dict:
    return {"dim": x.dim, "depth": x.depth, "levels": [lvl.tolist() for lvl in x.levels]}


def tensor_from_dict(data: dict) -> TruncatedTensor:
    try:
        dim = int(data["dim"])
        depth = int(data["depth"])
        levels = data["levels"]
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"malformed tensor record: {err}") from None
    return TruncatedTensor(dim, depth, levels)


def tensor_to_json(x: TruncatedTensor) -> str:
    # repr-based float serialisation round-trips every double exactly
    return json.dumps(tensor_to_dict(x), allow_nan=False, sort_keys=True)


def tensor_from_json(text: str) -> TruncatedTensor:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"malformed tensor JSON: {err}") from None
    return tensor_from_dict(data)
