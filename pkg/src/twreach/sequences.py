"""Universal sequences and index-addressable leaf schedules.

The universal sequence of order s is <1> for s=0 and otherwise the order-(s-1)
sequence, then <2^s>, then the order-(s-1) sequence again. A leaf schedule
Lseq(t, d) interleaves the schedules of t's children according to the
universal sequence of order log2 d; it is addressed by index without ever
being materialized.
"""
from __future__ import annotations

from math import comb
from typing import Iterator

from .decomp import BalancedTD


def _check_pow2(d: int) -> int:
    if d < 1 or d & (d - 1):
        raise ValueError(f"{d} is not a positive power of 2")
    return d.bit_length() - 1


def useq_length(s: int) -> int:
    return (1 << (s + 1)) - 1


def useq_element(s: int, k: int) -> int:
    """k-th (1-based) element of the order-s universal sequence, by descent."""
    if s < 0:
        raise ValueError("order must be non-negative")
    if not 1 <= k <= useq_length(s):
        raise ValueError(f"index {k} out of range for order {s}")
    while True:
        mid = 1 << s
        if k == mid:
            return 1 << s
        if k > mid:
            k -= mid
        s -= 1


def useq_counts(s: int, i: int) -> int:
    """Number of occurrences of 2^i in the order-s sequence: 2^(s-i)."""
    if not 0 <= i <= s:
        raise ValueError(f"exponent {i} out of range for order {s}")
    return 1 << (s - i)


def useq_stream(s: int) -> Iterator[int]:
    for k in range(1, useq_length(s) + 1):
        yield useq_element(s, k)


def dominating_subsequence(s: int, demands: list[int]) -> list[int] | None:
    """Greedy left-to-right domination of `demands` by sequence elements.

    Returns strictly increasing 1-based indices with element >= demand, or
    None when the greedy scan fails. Guaranteed to succeed whenever the
    demands sum to at most 2^s.
    """
    out = []
    j = 0
    for k in range(1, useq_length(s) + 1):
        if j == len(demands):
            break
        if useq_element(s, k) >= demands[j]:
            out.append(k)
            j += 1
    return out if j == len(demands) else None


def lseq_length(h: int, d: int) -> int:
    """Closed-form schedule length for a complete tree of height h: 2^h * d * C(h+log2 d, log2 d).

    Exact for complete binary trees; an upper bound otherwise.
    """
    if h < 0:
        raise ValueError("height must be non-negative")
    logd = _check_pow2(d)
    return (1 << h) * d * comb(h + logd, logd)


class LeafSeq:
    """Virtual leaf schedule over a subtree of a balanced decomposition.

    Lengths are computed structurally per node so that single-child nodes
    (possible after binarization) contribute an empty missing-child block.
    """

    def __init__(self, tree: BalancedTD, t: int, d: int):
        _check_pow2(d)
        if t not in tree.bags:
            raise ValueError(f"unknown node id {t}")
        self.tree = tree
        self.t = t
        self.d = d
        self._len_cache: dict[tuple[int, int], int] = {}

    def block_length(self, t: int, d: int) -> int:
        key = (t, d)
        hit = self._len_cache.get(key)
        if hit is not None:
            return hit
        kids = self.tree.children(t)
        if not kids:
            total = d
        else:
            left = kids[0]
            right = kids[1] if len(kids) > 1 else None
            total = 0
            logd = d.bit_length() - 1
            for k in range(1, useq_length(logd) + 1):
                c = useq_element(logd, k)
                total += self.block_length(left, c)
                if right is not None:
                    total += self.block_length(right, c)
        self._len_cache[key] = total
        return total

    def __len__(self) -> int:
        return self.block_length(self.t, self.d)

    def element(self, r: int) -> int:
        """Leaf node id at 1-based index r, by recurrence descent."""
        if not 1 <= r <= len(self):
            raise ValueError(f"index {r} out of range")
        t, d = self.t, self.d
        while self.tree.children(t):
            kids = self.tree.children(t)
            left = kids[0]
            right = kids[1] if len(kids) > 1 else None
            logd = d.bit_length() - 1
            for k in range(1, useq_length(logd) + 1):
                c = useq_element(logd, k)
                ll = self.block_length(left, c)
                if r <= ll:
                    t, d = left, c
                    break
                r -= ll
                if right is not None:
                    lr = self.block_length(right, c)
                    if r <= lr:
                        t, d = right, c
                        break
                    r -= lr
            else:  # pragma: no cover - lengths guarantee descent
                raise AssertionError("index arithmetic out of bounds")
        return t

    def __iter__(self) -> Iterator[int]:
        """Stream leaves in order without materializing the schedule."""
        yield from self._iter_block(self.t, self.d)

    def _iter_block(self, t: int, d: int) -> Iterator[int]:
        kids = self.tree.children(t)
        if not kids:
            for _ in range(d):
                yield t
            return
        left = kids[0]
        right = kids[1] if len(kids) > 1 else None
        logd = d.bit_length() - 1
        for k in range(1, useq_length(logd) + 1):
            c = useq_element(logd, k)
            yield from self._iter_block(left, c)
            if right is not None:
                yield from self._iter_block(right, c)

    def materialize(self) -> list[int]:
        return list(self)


def lseq_length_tree(tree: BalancedTD, t: int, d: int) -> int:
    return LeafSeq(tree, t, d).block_length(t, d)


def lseq_element(tree: BalancedTD, t: int, d: int, r: int) -> int:
    return LeafSeq(tree, t, d).element(r)
