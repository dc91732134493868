"""Classical tree edit distance (insert / delete / relabel).

``ted_distance`` is the Zhang-Shasha keyroot dynamic program.
``ted_bruteforce`` enumerates every valid edit mapping and is only meant as
a test oracle for tiny trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .opt import OperatorTree, OptNode


class SizeLimit(ValueError):
    pass


@dataclass(frozen=True)
class UnitCostModel:
    insert: float = 1
    delete: float = 1
    relabel: float = 1

    def __post_init__(self):
        if min(self.insert, self.delete, self.relabel) < 0:
            raise ValueError("edit costs must be non-negative")

    def relabel_cost(self, a: str, b: str) -> float:
        return 0 if a == b else self.relabel


@dataclass(frozen=True)
class EditOp:
    """One step of an edit script.  ``node_id`` names the affected node for
    delete and relabel; ``label`` and ``position`` describe inserts and the
    new label of a relabel."""

    kind: str  # insert | delete | relabel
    cost: float = 1
    node_id: Optional[int] = None
    label: Optional[str] = None
    position: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("insert", "delete", "relabel"):
            raise ValueError(f"unknown edit kind {self.kind!r}")
        if self.cost < 0:
            raise ValueError("edit cost must be non-negative")


UNIT = UnitCostModel()


def _postorder(root: OptNode, labels: Optional[Sequence[str]] = None):
    """Postorder label list and leftmost-leaf indices.

    ``labels`` optionally overrides node labels, indexed by preorder id."""
    out_labels: list[str] = []
    lml: list[int] = []
    stack = [(root, False)]
    first_leaf: dict[int, int] = {}
    while stack:
        n, done = stack.pop()
        if not done:
            stack.append((n, True))
            stack.extend((c, False) for c in reversed(n.children))
            continue
        idx = len(out_labels)
        out_labels.append(labels[n.node_id] if labels is not None else n.label)
        lml.append(first_leaf[id(n.children[0])] if n.children else idx)
        first_leaf[id(n)] = lml[idx]
    return out_labels, lml


def _keyroots(lml: list[int]) -> list[int]:
    last = {}
    for i, l in enumerate(lml):
        last[l] = i
    return sorted(last.values())


def zhang_shasha(
    t1: OperatorTree,
    t2: OperatorTree,
    cost: UnitCostModel = UNIT,
    labels1: Optional[Sequence[str]] = None,
    labels2: Optional[Sequence[str]] = None,
) -> float:
    l1, lml1 = _postorder(t1.root, labels1)
    l2, lml2 = _postorder(t2.root, labels2)
    n, m = len(l1), len(l2)
    ins, dele = cost.insert, cost.delete
    td = [[0.0] * m for _ in range(n)]

    for i in _keyroots(lml1):
        for j in _keyroots(lml2):
            li, lj = lml1[i], lml2[j]
            rows, cols = i - li + 2, j - lj + 2
            fd = [[0.0] * cols for _ in range(rows)]
            for x in range(1, rows):
                fd[x][0] = fd[x - 1][0] + dele
            for y in range(1, cols):
                fd[0][y] = fd[0][y - 1] + ins
            for x in range(1, rows):
                a = li + x - 1
                for y in range(1, cols):
                    b = lj + y - 1
                    if lml1[a] == li and lml2[b] == lj:
                        v = min(
                            fd[x - 1][y] + dele,
                            fd[x][y - 1] + ins,
                            fd[x - 1][y - 1] + cost.relabel_cost(l1[a], l2[b]),
                        )
                        fd[x][y] = v
                        td[a][b] = v
                    else:
                        p, q = lml1[a] - li, lml2[b] - lj
                        fd[x][y] = min(
                            fd[x - 1][y] + dele,
                            fd[x][y - 1] + ins,
                            fd[p][q] + td[a][b],
                        )
    return td[n - 1][m - 1]


def ted_distance(t1: OperatorTree, t2: OperatorTree, cost: UnitCostModel = UNIT) -> float:
    return zhang_shasha(t1, t2, cost)


def _ancestry(tree: OperatorTree) -> list[set[int]]:
    """For each preorder id, the set of its proper descendants."""
    desc = [set() for _ in range(tree.size)]
    for n in reversed(tree.nodes):
        for c in n.children:
            desc[n.node_id].add(c.node_id)
            desc[n.node_id] |= desc[c.node_id]
    return desc


def ted_bruteforce(t1: OperatorTree, t2: OperatorTree, cost: UnitCostModel = UNIT, limit: int = 6) -> float:
    """Minimum cost over all valid mappings (one-to-one, preserving ancestry
    and preorder).  Exponential; refuses trees above ``limit`` nodes."""
    if t1.size > limit or t2.size > limit:
        raise SizeLimit(f"brute force limited to {limit} nodes, got {t1.size} and {t2.size}")
    lab1 = [n.label for n in t1.nodes]
    lab2 = [n.label for n in t2.nodes]
    d1, d2 = _ancestry(t1), _ancestry(t2)
    n, m = t1.size, t2.size
    best = n * cost.delete + m * cost.insert
    pairs: list[tuple[int, int]] = []

    def consistent(a: int, b: int) -> bool:
        for c, d in pairs:
            # c < a and d < b hold by construction
            if (a in d1[c]) != (b in d2[d]):
                return False
        return True

    def search(a: int, min_b: int, relabels: float):
        nonlocal best
        if a == n:
            k = len(pairs)
            total = relabels + (n - k) * cost.delete + (m - k) * cost.insert
            best = min(best, total)
            return
        search(a + 1, min_b, relabels)
        for b in range(min_b, m):
            if consistent(a, b):
                pairs.append((a, b))
                search(a + 1, b + 1, relabels + cost.relabel_cost(lab1[a], lab2[b]))
                pairs.pop()

    search(0, 0, 0.0)
    return best
