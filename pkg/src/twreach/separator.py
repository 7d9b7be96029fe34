"""Balanced vertex separators of a target set, found among decomposition bags.

A set S is a balanced separator of U when every component of the graph minus S
holds at most |U|/2 members of U. For any valid decomposition some bag
qualifies, and its size is bounded by width+1. Comparisons use exact integer
arithmetic (2*count <= |U|).
"""
from __future__ import annotations

from dataclasses import dataclass

from .decomp import TreeDecomp
from .graph import DiGraph, VertexSet, vset


@dataclass(frozen=True)
class SeparatorResult:
    bag_node: int
    separator: VertexSet
    target_size: int


def is_balanced_separator(g: DiGraph, s, u) -> bool:
    """True iff every component of g minus s has at most |u|/2 vertices of u."""
    uset = set(u)
    if not uset:
        return True
    limit = len(uset)  # compare 2*count <= limit
    gone = bytearray(g.n + 1)
    for v in s:
        gone[v] = 1
    seen = bytearray(g.n + 1)
    adj = g.und_adj
    for start in range(1, g.n + 1):
        if gone[start] or seen[start]:
            continue
        count = 1 if start in uset else 0
        seen[start] = 1
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not gone[y] and not seen[y]:
                    seen[y] = 1
                    if y in uset:
                        count += 1
                        if 2 * count > limit:
                            return False
                    stack.append(y)
        if 2 * count > limit:
            return False
    return True


def sep(g: DiGraph, t: TreeDecomp, u) -> SeparatorResult:
    """First bag (ascending node id) that balanced-separates u.

    Deterministic tie-breaking matters: the recursive decomposition is defined
    in terms of this exact choice.
    """
    uset = vset(u)
    for node in sorted(t.bags):
        bag = t.bag(node)
        if is_balanced_separator(g, bag, uset):
            return SeparatorResult(node, bag, len(uset))
    raise RuntimeError("no bag separates the target set; decomposition is invalid")
