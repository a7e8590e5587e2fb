"""Exact graph edit distance by depth-first branch and bound.

Source nodes are assigned in descending-degree order, each to an unused
target node or to epsilon (deletion). A partial mapping is pruned when its
cost so far plus a label-multiset bound on the unmapped remainder cannot
beat the incumbent. The incumbent starts at the assignment upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import BoundConfig, _assignment_ub_int
from .costs import CostModel, EditMapping, IntCosts
from .graph import LabeledGraph
from .lsap import hungarian_duals

DEFAULT_MAX_NODES = 16
# refinement used for the incumbent seeding the exact search
SEED_CONFIG = BoundConfig(refine_iterations=2)
# unplaced source nodes needed before a search node pays for an assignment bound
REMAINDER_LSAP_MIN = 3


class GedTooLarge(RuntimeError):
    """Raised when a graph exceeds the exact-search node cap."""


@dataclass
class SearchCounter:
    expanded: int = 0
    lsap_calls: int = 0


class _Search:
    """Mutable DFS state over a scaled-integer cost model.

    The remainder bound sums label-multiset costs over independent groups:
    unplaced source nodes vs unused target nodes; for every placed source
    node, its edges into the unplaced part vs its image's edges into the
    unused part; and edges inside the unplaced part vs edges inside the
    unused part. No edge can be matched across groups, so the sum is
    admissible.
    """

    def __init__(self, g1: LabeledGraph, g2: LabeledGraph, ic: IntCosts, counter: SearchCounter | None):
        self.ic = ic
        self.counter = counter
        n1, n2 = g1.node_count, g2.node_count
        self.n1, self.n2 = n1, n2

        labels = {}
        for lab in g1.node_labels + g2.node_labels:
            labels.setdefault(lab, len(labels))
        elabels = {}
        for _, _, lab in g1.edges + g2.edges:
            elabels.setdefault(lab, len(elabels))
        self.nl1 = [labels[x] for x in g1.node_labels]
        self.nl2 = [labels[x] for x in g2.node_labels]
        self.adj1 = [{w: elabels[x] for w, x in a.items()} for a in g1.adjacency]
        self.adj2 = [{k: elabels[x] for k, x in a.items()} for a in g2.adjacency]
        EL = self.EL = max(len(elabels), 1)

        deg = g1.degrees
        self.order = sorted(range(n1), key=lambda u: (-deg[u], u))
        pos = [0] * n1
        for d, u in enumerate(self.order):
            pos[u] = d
        self.pos = pos

        # per depth d: labels of unplaced source nodes and of edges among them
        self.rest_nodes1 = []
        self.inner1 = []
        for d in range(n1 + 1):
            nc = [0] * len(labels)
            for u in self.order[d:]:
                nc[self.nl1[u]] += 1
            ec = [0] * EL
            for u, v, lab in g1.edges:
                if pos[u] >= d and pos[v] >= d:
                    ec[elabels[lab]] += 1
            self.rest_nodes1.append((nc, sum(nc)))
            self.inner1.append((ec, sum(ec)))

        self.rest_nodes2 = [0] * len(labels)
        for x in self.nl2:
            self.rest_nodes2[x] += 1
        self.open_nodes2 = n2
        self.inner2 = [0] * EL
        for _, _, lab in g2.edges:
            self.inner2[elabels[lab]] += 1
        self.inner2_total = g2.edge_count

        self.cross1 = [[0] * EL for _ in range(n1)]
        self.cross1_total = [0] * n1
        self.cross2 = [[0] * EL for _ in range(n2)]
        self.cross2_total = [0] * n2
        self.anchor_cost = [0] * n1
        self.anchor_sum = 0
        self.zero = [0] * EL

        self.phi = [None] * n1
        self.psi = [-1] * n2

    @staticmethod
    def _mset(a, na, b, nb, sub, ins, dele):
        common = 0
        for x, y in zip(a, b):
            common += x if x < y else y
        if na > nb:
            return sub * (nb - common) + dele * (na - nb)
        return sub * (na - common) + ins * (nb - na)

    def root_bound(self) -> int:
        ic = self.ic
        nc, nn = self.rest_nodes1[0]
        ec, ne = self.inner1[0]
        return self._mset(nc, nn, self.rest_nodes2, self.open_nodes2, ic.node_sub, ic.node_ins, ic.node_del) + self._mset(
            ec, ne, self.inner2, self.inner2_total, ic.edge_sub, ic.edge_ins, ic.edge_del
        )

    def _anchor(self, w, d1, d2):
        """Anchor bound of placed node ``w`` after removing label counts ``d1``/``d2``."""
        ic = self.ic
        a = list(self.cross1[w])
        na = self.cross1_total[w]
        for lab in d1:
            a[lab] -= 1
        na -= len(d1)
        k = self.phi[w]
        if k is None:
            b, nb = self.zero, 0
        else:
            b = list(self.cross2[k])
            nb = self.cross2_total[k]
            for lab in d2:
                b[lab] -= 1
            nb -= len(d2)
        return self._mset(a, na, b, nb, ic.edge_sub, ic.edge_ins, ic.edge_del)

    def _children(self, d: int, g: int):
        """Candidate placements of source node ``order[d]``, best bound first.

        Items are ``(f, target, step_cost)``;
        target ``n2`` stands for deletion.
        """
        ic = self.ic
        EL = self.EL
        u = self.order[d]
        pos, phi, psi = self.pos, self.phi, self.psi
        adj1u = self.adj1[u]
        lab_u = self.nl1[u]
        nc1, nn1 = self.rest_nodes1[d + 1]
        in1, nin1 = self.inner1[d + 1]
        rn2 = self.rest_nodes2
        on2 = self.open_nodes2
        in2, nin2 = self.inner2, self.inner2_total
        mset = self._mset
        es, ei, ed = ic.edge_sub, ic.edge_ins, ic.edge_del

        placed = []
        x1 = [0] * EL
        for w, lab in adj1u.items():
            if pos[w] < d:
                placed.append((w, lab))
            else:
                x1[lab] += 1
        nx1 = sum(x1)
        # anchors losing an edge to u regardless of where u goes
        d1_of = {}
        for w, lab in placed:
            d1_of.setdefault(w, []).append(lab)
        base_sum = self.anchor_sum
        base_delta = 0
        for w, labs in d1_of.items():
            base_delta += self._anchor(w, labs, ()) - self.anchor_cost[w]

        out = []
        for j in range(self.n2):
            if psi[j] >= 0:
                continue
            step = ic.node_sub if self.nl2[j] != lab_u else 0
            adj2j = self.adj2[j]
            for w, lab in placed:
                k = phi[w]
                if k is None:
                    step += ed
                else:
                    lab2 = adj2j.get(k)
                    if lab2 is None:
                        step += ed
                    elif lab2 != lab:
                        step += es
            x2 = [0] * EL
            d2_of = {}
            for k, lab2 in adj2j.items():
                w = psi[k]
                if w >= 0:
                    d2_of.setdefault(w, []).append(lab2)
                    if w not in adj1u:
                        step += ei
                else:
                    x2[lab2] += 1
            nx2 = sum(x2)
            delta = base_delta
            for w, labs in d2_of.items():
                d1 = d1_of.get(w, ())
                delta += self._anchor(w, d1, labs) - self._anchor(w, d1, ())
            new_anchor = mset(x1, nx1, x2, nx2, es, ei, ed)
            anchors = base_sum + delta + new_anchor

            rn2[self.nl2[j]] -= 1
            h_nodes = mset(nc1, nn1, rn2, on2 - 1, ic.node_sub, ic.node_ins, ic.node_del)
            rn2[self.nl2[j]] += 1
            for lab in range(EL):
                in2[lab] -= x2[lab]
            h_inner = mset(in1, nin1, in2, nin2 - nx2, es, ei, ed)
            for lab in range(EL):
                in2[lab] += x2[lab]
            out.append((g + step + h_nodes + anchors + h_inner, j, step))

        step = ic.node_del + ed * len(placed)
        h = (
            mset(nc1, nn1, rn2, on2, ic.node_sub, ic.node_ins, ic.node_del)
            + base_sum
            + base_delta
            + ed * nx1
            + mset(in1, nin1, in2, nin2, es, ei, ed)
        )
        out.append((g + step + h, self.n2, step))
        out.sort()
        return out

    def _apply(self, d, u, j):
        """Place source node ``u`` on target ``j`` (None = delete). Returns an undo record."""
        pos, psi = self.pos, self.psi
        self.phi[u] = j
        touched = set()
        c1 = [0] * self.EL
        for w, lab in self.adj1[u].items():
            if pos[w] < d:
                self.cross1[w][lab] -= 1
                self.cross1_total[w] -= 1
                touched.add(w)
            else:
                c1[lab] += 1
        self.cross1[u] = c1
        self.cross1_total[u] = sum(c1)
        moved = None
        if j is not None:
            psi[j] = u
            self.rest_nodes2[self.nl2[j]] -= 1
            self.open_nodes2 -= 1
            c2 = [0] * self.EL
            for k, lab in self.adj2[j].items():
                w = psi[k]
                if w >= 0 and k != j:
                    self.cross2[k][lab] -= 1
                    self.cross2_total[k] -= 1
                    touched.add(w)
                elif k != j:
                    c2[lab] += 1
            self.cross2[j] = c2
            self.cross2_total[j] = sum(c2)
            for lab in range(self.EL):
                self.inner2[lab] -= c2[lab]
            self.inner2_total -= self.cross2_total[j]
            moved = c2
        old = [(w, self.anchor_cost[w]) for w in touched]
        for w in touched:
            new = self._anchor(w, (), ())
            self.anchor_sum += new - self.anchor_cost[w]
            self.anchor_cost[w] = new
        own = self._anchor(u, (), ())
        self.anchor_cost[u] = own
        self.anchor_sum += own
        return old, moved

    def _undo(self, d, u, j, record):
        old, moved = record
        pos, psi = self.pos, self.psi
        self.anchor_sum -= self.anchor_cost[u]
        self.anchor_cost[u] = 0
        for w, cost in old:
            self.anchor_sum += cost - self.anchor_cost[w]
            self.anchor_cost[w] = cost
        for w, lab in self.adj1[u].items():
            if pos[w] < d:
                self.cross1[w][lab] += 1
                self.cross1_total[w] += 1
        if j is not None:
            for k, lab in self.adj2[j].items():
                if psi[k] >= 0 and k != j:
                    self.cross2[k][lab] += 1
                    self.cross2_total[k] += 1
            for lab in range(self.EL):
                self.inner2[lab] += moved[lab]
            self.inner2_total += sum(moved)
            self.rest_nodes2[self.nl2[j]] += 1
            self.open_nodes2 += 1
            psi[j] = -1
        self.phi[u] = None

    def remainder_bound2(self, d: int) -> tuple[int, dict]:
        """Twice an assignment lower bound on the cost of completing the current state.

        Also returns, per unused target ``j``, how much the bound rises when
        source node ``order[d]`` is forced onto ``j`` (from the dual
        potentials), which bounds each child without solving it.

        Unplaced source nodes are matched to unused target nodes or epsilon.
        Edges to the placed part are priced exactly for each pairing, since
        their far ends are already fixed; edges inside the unplaced part are
        split half to each endpoint and priced by label multisets.
        """
        ic = self.ic
        pos, psi = self.pos, self.psi
        es, ei, ed = ic.edge_sub, ic.edge_ins, ic.edge_del
        rows = self.order[d:]
        cols = [j for j in range(self.n2) if psi[j] < 0]
        nr, nc = len(rows), len(cols)
        EL = self.EL
        mset = self._mset

        row_info = []
        for x in rows:
            anchored = {}
            inner = [0] * EL
            for w, lab in self.adj1[x].items():
                if pos[w] < d:
                    anchored[w] = lab
                else:
                    inner[lab] += 1
            row_info.append((anchored, inner, sum(inner)))
        col_info = []
        for y in cols:
            anchored = {}
            inner = [0] * EL
            for k, lab in self.adj2[y].items():
                w = psi[k]
                if w >= 0:
                    anchored[w] = lab
                else:
                    inner[lab] += 1
            col_info.append((anchored, inner, sum(inner)))

        # Folded form of the epsilon-padded problem: pairing x with y saves
        # del(x) + ins(y) - c(x, y); a pair that saves nothing is left unmatched.
        nl1, nl2 = self.nl1, self.nl2
        dels = [2 * (ic.node_del + ed * len(a1)) + ed * n_in1 for a1, _, n_in1 in row_info]
        inss = [2 * (ic.node_ins + ei * len(a2)) + ei * n_in2 for a2, _, n_in2 in col_info]
        size = nr if nr > nc else nc
        matrix = []
        for x, (a1, in1, n_in1), dx in zip(rows, row_info, dels):
            row = [0] * size
            lab_x = nl1[x]
            for c, (y, (a2, in2, n_in2)) in enumerate(zip(cols, col_info)):
                cost = ic.node_sub if nl2[y] != lab_x else 0
                for w, lab in a1.items():
                    lab2 = a2.get(w)
                    if lab2 is None:
                        cost += ed
                    elif lab2 != lab:
                        cost += es
                for w in a2:
                    if w not in a1:
                        cost += ei
                gain = 2 * cost + mset(in1, n_in1, in2, n_in2, es, ei, ed) - dx - inss[c]
                if gain < 0:
                    row[c] = gain
            matrix.append(row)
        for _ in range(size - nr):
            matrix.append([0] * size)
        if self.counter is not None:
            self.counter.lsap_calls += 1
        base = sum(dels) + sum(inss)
        if not size:
            return base, {}
        assignment, row_pot, col_pot = hungarian_duals(matrix)
        total = base + sum(matrix[r][c] for r, c in enumerate(assignment))
        # extra cost of sending the next source node to each target
        first, r0 = matrix[0], row_pot[0]
        forced = {y: first[c] - r0 - col_pot[c] for c, y in enumerate(cols)}
        return total, forced

    def run(self, limit: int, inclusive: bool):
        """Find a complete mapping of cost below ``limit`` (or at most, if ``inclusive``).

        With ``inclusive`` the search stops at the first hit (threshold test);
        otherwise it keeps tightening ``limit`` to the best cost found.
        Returns ``(cost, node_map)`` of the best hit, or ``None``.
        """
        best = None
        counter = self.counter
        n1, n2 = self.n1, self.n2

        def dfs(d, g):
            nonlocal best, limit
            if d == n1:
                # everything left in the target is inserted; the bound was exact here
                total = (
                    g
                    + self.ic.node_ins * self.open_nodes2
                    + self.anchor_sum
                    + self.ic.edge_ins * self.inner2_total
                )
                best = (total, list(self.phi))
                if not inclusive:
                    limit = total
                return inclusive
            forced = None
            if n1 - d >= REMAINDER_LSAP_MIN:
                rem2, forced = self.remainder_bound2(d)
                bound2 = 2 * g + rem2
                if bound2 > 2 * limit or (bound2 == 2 * limit and not inclusive):
                    return False
            u = self.order[d]
            for f, j, step in self._children(d, g):
                if f > limit or (f == limit and not inclusive):
                    break
                if forced is not None and j < n2:
                    f2 = bound2 + forced[j]
                    if f2 > 2 * limit or (f2 == 2 * limit and not inclusive):
                        continue
                if counter is not None:
                    counter.expanded += 1
                target = j if j < n2 else None
                record = self._apply(d, u, target)
                done = dfs(d + 1, g + step)
                self._undo(d, u, target, record)
                if done:
                    return True
            return False

        dfs(0, 0)
        return best


def _check_size(g1: LabeledGraph, g2: LabeledGraph, max_nodes: int) -> None:
    big = max(g1.node_count, g2.node_count)
    if big > max_nodes:
        raise GedTooLarge(f"graph with {big} nodes exceeds exact-GED cap of {max_nodes}; use bounds instead")


def _seed(g1, g2, ic, counter):
    if counter is not None:
        counter.lsap_calls += 1
    return _assignment_ub_int(g1, g2, ic, SEED_CONFIG.refine_iterations)


def exact_ged(
    g1: LabeledGraph,
    g2: LabeledGraph,
    cost: CostModel = CostModel(),
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    counter: SearchCounter | None = None,
) -> tuple[Fraction, EditMapping]:
    """Exact GED and an optimal edit mapping from ``g1`` to ``g2``."""
    _check_size(g1, g2, max_nodes)
    ic = cost.scaled()
    seed_cost, seed_map = _seed(g1, g2, ic, counter)
    search = _Search(g1, g2, ic, counter)
    best_cost, best_map = seed_cost, seed_map
    if seed_cost > search.root_bound():
        found = search.run(seed_cost, inclusive=False)
        if found is not None:
            best_cost, best_map = found
    return Fraction(best_cost, ic.scale), EditMapping(tuple(best_map), g2.node_count)


def ged_within(
    g1: LabeledGraph,
    g2: LabeledGraph,
    threshold,
    cost: CostModel = CostModel(),
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    counter: SearchCounter | None = None,
) -> bool:
    """True iff the exact GED of the pair is at most ``threshold``.

    Explores a subset of the mappings :func:`exact_ged` explores: it uses
    the same incumbent and order, prunes at the threshold, and stops at the
    first mapping within it.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    _check_size(g1, g2, max_nodes)
    ic = cost.scaled()
    seed_cost, _ = _seed(g1, g2, ic, counter)
    limit = Fraction(threshold) * ic.scale
    if seed_cost <= limit:
        return True
    search = _Search(g1, g2, ic, counter)
    if search.root_bound() > limit:
        return False
    # costs are integers in scaled units, so cost <= limit iff cost <= floor(limit)
    return search.run(limit.numerator // limit.denominator, inclusive=True) is not None
