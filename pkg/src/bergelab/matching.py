"""Incremental bipartite matching between path steps and covering edges.

Augmenting-path (Kuhn) matcher specialised for the solvers: left vertices
are the consecutive pairs of a candidate vertex order, right vertices are
hyperedge ids.  Keeping a maximum matching incrementally turns Hall's
condition into a cheap exact pruning oracle: a new pair is feasible iff
one augmenting path exists.
"""

from __future__ import annotations

from typing import Optional, Sequence


class StepEdgeMatcher:
    """Maintains a perfect-on-the-left matching under push/pop of steps."""

    def __init__(self) -> None:
        self.candidates: list[Sequence[int]] = []
        self.match_of_step: list[int] = []
        self.step_of_edge: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.candidates)

    def push(self, edge_ids: Sequence[int]) -> bool:
        """Add a step that must be assigned one of ``edge_ids``.

        Returns True and keeps every step matched if an augmenting path
        exists; otherwise leaves the matcher unchanged and returns False.
        """
        step = len(self.candidates)
        self.candidates.append(edge_ids)
        self.match_of_step.append(-1)
        if self._augment(step, set()):
            return True
        self.candidates.pop()
        self.match_of_step.pop()
        return False

    def pop(self) -> None:
        """Remove the most recent step, freeing its matched edge."""
        step = len(self.candidates) - 1
        eid = self.match_of_step[step]
        if eid != -1:
            del self.step_of_edge[eid]
        self.candidates.pop()
        self.match_of_step.pop()

    def assignment(self) -> list[int]:
        return list(self.match_of_step)

    def _augment(self, step: int, banned: set[int]) -> bool:
        for eid in self.candidates[step]:
            if eid in banned:
                continue
            banned.add(eid)
            holder = self.step_of_edge.get(eid)
            if holder is None or self._augment(holder, banned):
                self.step_of_edge[eid] = step
                self.match_of_step[step] = eid
                return True
        return False


def distinct_assignment(candidate_lists: Sequence[Sequence[int]]) -> Optional[list[int]]:
    """One-shot system of distinct representatives, or None if impossible."""
    matcher = StepEdgeMatcher()
    for cands in candidate_lists:
        if not matcher.push(cands):
            return None
    return matcher.assignment()
