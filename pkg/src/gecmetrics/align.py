"""Token-level Levenshtein alignment and the edit lattice built on top of it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

MATCH = "match"
SUBSTITUTE = "substitute"
INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class LevMatrix:
    source: tuple
    target: tuple
    cells: tuple  # rows of ints, (len(source)+1) x (len(target)+1)

    @property
    def shape(self):
        return len(self.cells), len(self.cells[0])

    @property
    def distance(self):
        return self.cells[-1][-1]

    def __getitem__(self, ij):
        i, j = ij
        return self.cells[i][j]


@dataclass(frozen=True)
class AtomicOp:
    kind: str
    start: tuple  # (i, j) cell
    end: tuple

    @property
    def changed(self):
        return self.kind != MATCH


@dataclass(frozen=True)
class LatticeEdge:
    start: tuple
    end: tuple
    source: tuple
    target: tuple
    cost: int
    ops: int = 1

    @property
    def changed(self):
        return self.source != self.target

    @property
    def src_span(self):
        return (self.start[0], self.end[0])

    def label(self):
        src = " ".join(self.source) or "∅"
        tgt = " ".join(self.target) or "∅"
        if not self.changed:
            return src
        return f"{src} / {tgt}"


@dataclass(frozen=True)
class EditLattice:
    source: tuple
    target: tuple
    vertices: tuple  # topologically sorted cells
    edges: tuple
    max_unchanged: int

    @property
    def terminal(self):
        return (len(self.source), len(self.target))

    def edge(self, start, end):
        for e in self.edges:
            if e.start == start and e.end == end:
                return e
        raise KeyError((start, end))

    def out_edges(self):
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.start].append(e)
        return out

    def dump(self):
        """Edge list in the ``i,j -> k,l : "src / tgt" (cost)`` layout."""
        lines = []
        for e in self.edges:
            lines.append(f'{e.start[0]},{e.start[1]} -> {e.end[0]},{e.end[1]} : '
                         f'"{e.label()}" ({e.cost})')
        return "\n".join(lines)


def lev_matrix(source, target):
    source, target = tuple(source), tuple(target)
    rows = [list(range(len(target) + 1))]
    for i, s in enumerate(source, start=1):
        prev = rows[-1]
        row = [i]
        for j, t in enumerate(target, start=1):
            row.append(min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + (s != t)))
        rows.append(row)
    return LevMatrix(source, target, tuple(tuple(r) for r in rows))


def distance(source, target):
    return lev_matrix(source, target).distance


def _predecessors(m, i, j):
    d = m.cells
    here = d[i][j]
    if i > 0 and j > 0:
        same = m.source[i - 1] == m.target[j - 1]
        if d[i - 1][j - 1] + (not same) == here:
            yield AtomicOp(MATCH if same else SUBSTITUTE, (i - 1, j - 1), (i, j))
    if i > 0 and d[i - 1][j] + 1 == here:
        yield AtomicOp(DELETE, (i - 1, j), (i, j))
    if j > 0 and d[i][j - 1] + 1 == here:
        yield AtomicOp(INSERT, (i, j - 1), (i, j))


def minimal_ops(m):
    """Breadth-first walk back from the bottom-right cell.

    Returns every atomic operation lying on some minimal edit path.
    """
    end = (len(m.source), len(m.target))
    seen = {end}
    queue = deque([end])
    ops = []
    while queue:
        cell = queue.popleft()
        for op in _predecessors(m, *cell):
            ops.append(op)
            if op.start not in seen:
                seen.add(op.start)
                queue.append(op.start)
    return ops


def shortest_path_cells(m):
    """Cells lying on at least one minimal path from (0, 0) to the corner."""
    cells = {(len(m.source), len(m.target))}
    cells.update(op.start for op in minimal_ops(m))
    return cells


def _topo_key(cell):
    return (cell[0] + cell[1], cell[0])


def build_lattice(source, target, max_unchanged=2):
    """Build the edit lattice of ``source`` -> ``target``.

    Besides the atomic operations, a transitive edge joins two vertices
    whenever some chain of consecutive operations between them changes at
    least one token and keeps at most ``max_unchanged`` tokens unchanged.
    Its cost is the number of atomic operations in the cheapest such chain.
    Runs of matches alone are never merged.
    """
    if max_unchanged < 0:
        raise ValueError("max_unchanged must be >= 0")
    source, target = tuple(source), tuple(target)
    m = lev_matrix(source, target)
    atomic = minimal_ops(m)
    vertices = sorted({(0, 0), (len(source), len(target))}
                      | {op.start for op in atomic} | {op.end for op in atomic},
                      key=_topo_key)
    succ = {v: [] for v in vertices}
    for op in atomic:
        succ[op.start].append(op)

    costs = {(op.start, op.end): 1 for op in atomic}
    for idx, v in enumerate(vertices):
        # per cell: (unchanged kept, any change) -> fewest ops on a chain from v
        states = {v: {(0, False): 0}}
        for w in vertices[idx:]:
            here = states.pop(w, None)
            if here is None:
                if not states:
                    break
                continue
            for (kept, changed), n_ops in here.items():
                if changed and n_ops >= 2:
                    pair = (v, w)
                    if n_ops < costs.get(pair, n_ops + 1):
                        costs[pair] = n_ops
                for op in succ[w]:
                    nk = kept + (not op.changed)
                    if nk > max_unchanged:
                        continue
                    key = (nk, changed or op.changed)
                    nxt = states.setdefault(op.end, {})
                    if n_ops + 1 < nxt.get(key, n_ops + 2):
                        nxt[key] = n_ops + 1

    edges = []
    for (a, b), c in costs.items():
        edges.append(LatticeEdge(a, b, source[a[0]:b[0]], target[a[1]:b[1]], c, c))
    edges.sort(key=lambda e: (_topo_key(e.start), _topo_key(e.end)))
    return EditLattice(source, target, tuple(vertices), tuple(edges), max_unchanged)
