"""Bipartite maximum matching by augmenting paths, with a Hall-violator witness."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence


def maximum_matching(
    left: Sequence[str],
    right: Sequence[str],
    adj: Mapping[str, Sequence[str]],
) -> dict[str, str]:
    """Maximum matching of left vertices to right vertices.

    Deterministic: left vertices are processed in order, neighbors tried in
    the order given by adj. Returns a left -> right mapping.
    """
    match_right: dict[str, str] = {}

    def augment(x: str, seen: set[str]) -> bool:
        for y in adj.get(x, ()):
            if y in seen:
                continue
            seen.add(y)
            if y not in match_right or augment(match_right[y], seen):
                match_right[y] = x
                return True
        return False

    for x in left:
        augment(x, set())
    return {x: y for y, x in match_right.items()}


def hall_violator(
    left: Sequence[str],
    matching: Mapping[str, str],
    adj: Mapping[str, Sequence[str]],
) -> Optional[frozenset[str]]:
    """A deficiency witness for an incomplete matching.

    Returns the set of left vertices reachable by alternating paths from
    the first unmatched left vertex; its neighborhood has size strictly
    smaller than the set. Returns None if the matching covers all of left.
    """
    unmatched = [x for x in left if x not in matching]
    if not unmatched:
        return None
    match_right = {y: x for x, y in matching.items()}
    frontier = [unmatched[0]]
    reach_left = {unmatched[0]}
    reach_right: set[str] = set()
    while frontier:
        x = frontier.pop()
        for y in adj.get(x, ()):
            if y in reach_right:
                continue
            reach_right.add(y)
            # y is matched, otherwise the path would augment the matching
            x2 = match_right[y]
            if x2 not in reach_left:
                reach_left.add(x2)
                frontier.append(x2)
    return frozenset(reach_left)
