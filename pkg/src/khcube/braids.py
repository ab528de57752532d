"""Braid words and their closures as planar diagrams.

A braid word is a list of nonzero integers: letter +i crosses strands at
positions i, i+1 with the left strand passing under; letter -i is the
inverse crossing.  Strands run upward; the closure joins each strand's
top back to its bottom.  Under the engine's sign rule a positive letter
yields a negative crossing, so positive braid words produce diagrams
whose homology tables sit in nonnegative (h, q) degrees.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .diagram import PlanarDiagram
from .errors import MalformedPD

__all__ = ["braid_closure"]


def braid_closure(word: Sequence[int], strands: Optional[int] = None,
                  basepoint: Optional[int] = None) -> PlanarDiagram:
    """Close a braid word into a planar diagram.

    strands defaults to the smallest count carrying the word; strands
    not used by any letter close into crossing-free circles.
    """
    word = list(word)
    if any(not isinstance(x, int) or x == 0 for x in word):
        raise MalformedPD("braid letters must be nonzero integers")
    need = max((abs(x) + 1 for x in word), default=1)
    k = need if strands is None else int(strands)
    if k < need:
        raise MalformedPD(f"word needs at least {need} strands, got {k}")

    cur = list(range(1, k + 1))
    touched = [False] * k
    next_arc = k + 1
    crossings: List[tuple] = []
    for letter in word:
        i = abs(letter)
        sw, se = cur[i - 1], cur[i]
        nw, ne = next_arc, next_arc + 1
        next_arc += 2
        if letter > 0:
            # left strand under: tuple counterclockwise from its in-arc
            crossings.append((sw, se, ne, nw))
        else:
            crossings.append((se, ne, nw, sw))
        cur[i - 1], cur[i] = nw, ne
        touched[i - 1] = touched[i] = True

    # Close up: the top arc at each position is the bottom arc.
    parent = list(range(next_arc))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for pos in range(k):
        ra, rb = find(pos + 1), find(cur[pos])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    free_circles = sum(1 for pos in range(k) if not touched[pos])
    used = sorted({find(a) for x in crossings for a in x})
    relabel = {r: i + 1 for i, r in enumerate(used)}
    xs = [tuple(relabel[find(a)] for a in x) for x in crossings]
    return PlanarDiagram.build(xs, free_circles=free_circles,
                               basepoint=basepoint)
