"""Extremal constructions, Latin-square factorizations and random corpora."""

from __future__ import annotations

from dataclasses import dataclass

from rainbow.core import Instance
from rainbow.rng import PortableRng


def drisko_instance(n: int) -> Instance:
    """The cycle on ``2n`` vertices with both perfect matchings repeated ``n - 1`` times.

    Classes ``0 .. n-2`` are ``{(a_i, b_i)}`` and classes ``n-1 .. 2n-3`` are
    ``{(a_{i+1 mod n}, b_i)}``. The largest rainbow matching has ``n - 1``
    edges although there are ``2n - 2`` classes of size ``n``.
    """
    if n < 2:
        raise ValueError(f"drisko_instance needs n >= 2, got {n}")
    straight = [(i, i) for i in range(n)]
    shifted = [((i + 1) % n, i) for i in range(n)]
    return Instance.bipartite(n, n, n, [straight] * (n - 1) + [shifted] * (n - 1))


def remark_general_instance(n: int) -> Instance:
    """General multigraph on ``2n`` vertices with ``2n - 1`` classes and no full rainbow matching.

    Vertices are ``0 .. 2n-1`` (the 1-based labels shifted down by one).
    Classes ``0 .. n-2`` are ``{01, 23, ...}``, classes ``n-1 .. 2n-3`` are
    ``{12, 34, ..., (2n-1)0}`` and the last class is
    ``{02, 13, 46, 57, ...}``. The pattern of the last class pairs vertices
    in blocks of four, so ``n`` must be even.
    """
    if n < 2 or n % 2:
        raise ValueError(
            f"remark_general_instance needs an even n >= 2 (2n must be a multiple of 4), got {n}"
        )
    m = 2 * n
    even_pairs = [(2 * i, 2 * i + 1) for i in range(n)]
    odd_pairs = [tuple(sorted((2 * i + 1, (2 * i + 2) % m))) for i in range(n)]
    last = [(0, 2), (1, 3)]
    for i in range(1, n // 2):
        last += [(4 * i, 4 * i + 2), (4 * i + 1, 4 * i + 3)]
    return Instance.general(n, m, [even_pairs] * (n - 1) + [odd_pairs] * (n - 1) + [last])


def cyclic_factorization(n: int) -> Instance:
    """The cyclic Latin square of order ``n`` as a 1-factorization of ``K_{n,n}``.

    Class ``c`` is ``{(a_i, b_{i+c mod n})}``; a full rainbow matching is a
    transversal of the square, which exists exactly when ``n`` is odd.
    """
    if n < 1:
        raise ValueError(f"cyclic_factorization needs n >= 1, got {n}")
    return Instance.bipartite(
        n, n, n, [[(i, (i + c) % n) for i in range(n)] for c in range(n)]
    )


@dataclass(frozen=True)
class RandomModel:
    n: int
    N: int
    side_a: int
    side_b: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1 or self.N < 1:
            raise ValueError("n and N must be positive")
        if self.side_a < self.n or self.side_b < self.n:
            raise ValueError("side sizes must be at least n")

    @classmethod
    def square(cls, n: int, N: int, seed: int = 0) -> RandomModel:
        return cls(n, N, n, n, seed)


def random_instance(model: RandomModel, rng: PortableRng | None = None) -> Instance:
    """Independent uniform size-``n`` matchings, one per class.

    Each class draws ``n`` distinct A-vertices and ``n`` distinct B-vertices
    and pairs the sorted A-draw with the sorted B-draw through a uniform
    permutation. Edges are listed by ascending A-index.
    """
    rng = rng or PortableRng(model.seed)
    classes = []
    for _ in range(model.N):
        a_side = sorted(rng.sample(model.side_a, model.n))
        b_side = sorted(rng.sample(model.side_b, model.n))
        perm = rng.permutation(model.n)
        classes.append([(a_side[i], b_side[perm[i]]) for i in range(model.n)])
    return Instance.bipartite(model.n, model.side_a, model.side_b, classes)
