"""Merge transition SWAPs with a circuit block on the same qubit pair."""

from __future__ import annotations

from .router import RoutedProgram


def dress_swaps(rp: RoutedProgram) -> RoutedProgram:
    """Return a copy of ``rp`` with every mergeable SWAP dressed.

    For the SWAP on physical ``(a, b)`` leaving map ``i``, the earliest
    not-yet-merged block on the logical pair sitting at ``(a, b)`` is pulled
    out of its gate set and merged; the dressed unitary applies the block
    first, then the exchange. Map bookkeeping is unchanged.
    """
    stages = [s.copy() for s in rp.stages]
    where: dict[int, int] = {}
    for i, s in enumerate(stages):
        for b in s.blocks:
            where[b] = i
    by_pair: dict[tuple[int, int], list[int]] = {}
    for i, blk in enumerate(rp.blocks):
        by_pair.setdefault(blk.pair, []).append(i)

    consumed = {s.swap_block for s in stages if s.swap_block is not None}
    dressed = len(consumed)
    for i, s in enumerate(stages):
        if s.swap is None or s.swap_block is not None:
            continue
        u, v = (rp.maps[i].inverse[p] for p in s.swap)
        if u < 0 or v < 0:
            continue
        pool = [b for b in by_pair.get((min(u, v), max(u, v)), ()) if b not in consumed]
        if not pool:
            continue
        b = pool[0]
        stages[where[b]].blocks.remove(b)
        s.swap_block = b
        s.dressable = True
        consumed.add(b)
        dressed += 1
    return RoutedProgram(
        rp.blocks, rp.maps, stages, rp.topo, rp.swaps_inserted, dressed, rp.trace
    )
