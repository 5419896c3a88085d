"""Canonical form for eventually periodic sequences.

Shared by the index-set algebra (boolean values) and the sequence
descriptors (arbitrary values). The canonical form has the shortest cycle
and the shortest preperiod, so two descriptions of the same sequence
compare equal structurally.
"""

from __future__ import annotations

from typing import Sequence


def minimize(pre: Sequence, cycle: Sequence) -> tuple[tuple, tuple]:
    """Return (pre, cycle) with minimal cycle length, then minimal preperiod.

    Shrinking the preperiod by one element rotates the cycle right by one,
    which keeps the unrolled sequence identical.
    """
    if not cycle:
        raise ValueError("cycle must be nonempty")
    p = len(cycle)
    cyc = list(cycle)
    for d in range(1, p + 1):
        if p % d == 0 and list(cycle) == list(cycle[:d]) * (p // d):
            cyc = list(cycle[:d])
            break
    head = list(pre)
    while head and head[-1] == cyc[-1]:
        head.pop()
        cyc.insert(0, cyc.pop())
    return tuple(head), tuple(cyc)


def unrolled(pre: Sequence, cycle: Sequence, n: int):
    """Value at position n of the sequence described by (pre, cycle)."""
    if n < len(pre):
        return pre[n]
    return cycle[(n - len(pre)) % len(cycle)]
