"""Seeded property suites shared by ``selftest`` and the acceptance tests.

Each suite returns a :class:`CheckReport` listing every violated case, so a
caller can print one summary line or fail with the offending instances.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import assignment_ub, branch_lb, label_multiset_lb
from .cmt import CmtConfig, build, range_query, verify_suspected
from .costs import CostModel
from .exact import SearchCounter, exact_ged, ged_within
from .graph import perturb_graph, random_collection, random_graph
from .lsap import solve_lsap
from .metric import EuclideanMetric, EuclideanPoint, GedMetric
from .search import filter_verify_scan, linear_distances


@dataclass
class CheckReport:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def summary(self) -> str:
        text = f"{self.name}: {self.cases} cases, {len(self.failures)} violations"
        if self.failures:
            text += f" (first: {self.failures[0]})"
        return text

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.summary()}"


class _BoundCache(GedMetric):
    """GED metric that memoizes pair bounds by graph id pair.

    Bounds are a pure function of the two graphs, so sharing them between
    the tree, the baseline and several radii changes no answer set.
    """

    def __init__(self, base: GedMetric):
        super().__init__(base.cost, base.config, base.max_nodes)
        self._memo = {}

    def bounds(self, a, b, stats=None):
        key = (a.id, b.id)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = super().bounds(a, b)
        if stats is not None:
            stats.bound_calls += 1
            stats.lsap_calls += 2
        return hit


def oracle_equivalence(
    datasets: int = 50,
    size: int = 100,
    nodes: tuple[int, int] = (4, 10),
    queries: int = 10,
    radii=(1, 2, 3, 5),
    seed: int = 0,
    metric: GedMetric | None = None,
    cmt_config: CmtConfig = CmtConfig(),
    progress=None,
) -> CheckReport:
    """Tree + verification, filter-verify and a linear exact scan must agree.

    Even-numbered queries are database graphs moved by up to three edits,
    odd-numbered ones are fresh random graphs.
    """
    report = CheckReport("oracle equivalence (cmt / filter-verify / linear scan)")
    base = metric or GedMetric()
    rng = random.Random(seed)
    for k in range(datasets):
        m = _BoundCache(base)
        db = random_collection(rng.getrandbits(63), size, nodes)
        tree = build(db.graphs, m, cmt_config)
        for qi in range(queries):
            if qi % 2 == 0:
                q = perturb_graph(db[rng.randrange(size)], rng.getrandbits(63), rng.randint(0, 3), graph_id=f"q{qi}")
            else:
                q = random_graph(rng.getrandbits(63), nodes, graph_id=f"q{qi}")
            dist = linear_distances(db, q, m)
            for r in radii:
                report.cases += 1
                truth = frozenset(gid for gid, d in dist.items() if d <= r)
                via_tree = verify_suspected(range_query(tree, q, r, m), q, r, m).answers
                via_scan, _ = filter_verify_scan(db, q, r, m)
                if not via_tree == via_scan == truth:
                    report.fail(
                        f"dataset {k} query {qi} radius {r}: cmt {sorted(via_tree)} "
                        f"filter-verify {sorted(via_scan)} truth {sorted(truth)}"
                    )
        if progress:
            progress(f"dataset {k + 1}/{datasets} done")
    return report


def _pair(rng: random.Random, max_nodes: int, name: str = "g"):
    density = rng.choice((0.2, 0.4, 0.6))
    return random_graph(rng.getrandbits(63), (0, max_nodes), edge_density=density, graph_id=name)


def bound_sandwich(pairs: int = 1000, max_nodes: int = 8, seed: int = 0, cost: CostModel = CostModel()) -> CheckReport:
    """``label_multiset_lb`` and ``branch_lb`` below, ``assignment_ub`` above the exact GED."""
    report = CheckReport("bound sandwich")
    rng = random.Random(seed)
    for k in range(pairs):
        g1, g2 = _pair(rng, max_nodes, "a"), _pair(rng, max_nodes, "b")
        report.cases += 1
        d, _ = exact_ged(g1, g2, cost)
        lm, br = label_multiset_lb(g1, g2, cost), branch_lb(g1, g2, cost)
        ub, _ = assignment_ub(g1, g2, cost)
        if not (lm <= d and br <= d and ub >= d):
            report.fail(f"pair {k}: multiset {lm}, branch {br}, exact {d}, assignment {ub}")
    return report


def metric_axioms(triples: int = 300, max_nodes: int = 6, seed: int = 0) -> CheckReport:
    """Symmetry and triangle inequality of exact GED under unit costs."""
    report = CheckReport("metric axioms")
    rng = random.Random(seed)
    for k in range(triples):
        a, b, c = (_pair(rng, max_nodes, name) for name in "abc")
        report.cases += 1
        ab, _ = exact_ged(a, b)
        ba, _ = exact_ged(b, a)
        bc, _ = exact_ged(b, c)
        ac, _ = exact_ged(a, c)
        if ab != ba:
            report.fail(f"triple {k}: d(a,b)={ab} but d(b,a)={ba}")
        if ac > ab + bc:
            report.fail(f"triple {k}: d(a,c)={ac} > d(a,b)+d(b,c)={ab + bc}")
        aa, _ = exact_ged(a, a)
        if aa != 0:
            report.fail(f"triple {k}: d(a,a)={aa}")
    return report


def lsap_exactness(matrices: int = 200, max_n: int = 7, seed: int = 0) -> CheckReport:
    """``solve_lsap`` against the minimum over every permutation."""
    report = CheckReport("LSAP exactness")
    rng = random.Random(seed)
    for k in range(matrices):
        n = rng.randint(1, max_n)
        if k % 3 == 2:
            cost = [[Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        else:
            hi = rng.choice((3, 20, 1000))
            cost = [[rng.randint(0, hi) for _ in range(n)] for _ in range(n)]
        report.cases += 1
        _, total = solve_lsap(cost)
        best = min(sum(cost[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))
        if total != best:
            report.fail(f"matrix {k} (n={n}): solve_lsap {total}, brute force {best}")
    return report


def euclidean_debug(points: int = 1000, queries: int = 20, seed: int = 0, radii=(0.05, 0.1, 0.2)) -> CheckReport:
    """Euclidean tree with exact bounds and with artificially loosened bounds."""
    report = CheckReport("euclidean debug path")
    rng = random.Random(seed)
    pts = [EuclideanPoint(f"p{i}", (rng.random(), rng.random())) for i in range(points)]
    qs = [EuclideanPoint(f"q{i}", (rng.random(), rng.random())) for i in range(queries)]
    for fuzz in (0, 0.5):
        m = EuclideanMetric(2, fuzz)
        tree = build(pts, m, CmtConfig(pivot_seed=seed))
        for q in qs:
            dist = {p.id: m.exact(q, p) for p in pts}
            for r in radii:
                report.cases += 1
                truth = frozenset(pid for pid, d in dist.items() if d <= r)
                res = range_query(tree, q, r, m)
                final = verify_suspected(res, q, r, m).answers
                where = f"fuzz {fuzz} query {q.id} radius {r}"
                if fuzz == 0 and (res.suspected or res.confirmed != truth):
                    report.fail(f"{where}: {len(res.suspected)} suspected, confirmed matches truth: {res.confirmed == truth}")
                if not (res.confirmed <= truth <= res.confirmed | res.suspected):
                    report.fail(f"{where}: confirmed/suspected do not bracket the truth")
                if final != truth:
                    report.fail(f"{where}: verified answers differ from the truth")
    return report


def threshold_consistency(pairs: int = 500, max_nodes: int = 7, taus=(0, 1, 2, 3, 5), seed: int = 0) -> CheckReport:
    """``ged_within`` agrees with the exact value and never expands more search nodes."""
    report = CheckReport("threshold verification")
    rng = random.Random(seed)
    for k in range(pairs):
        g1, g2 = _pair(rng, max_nodes, "a"), _pair(rng, max_nodes, "b")
        full = SearchCounter()
        d, _ = exact_ged(g1, g2, counter=full)
        for tau in taus:
            report.cases += 1
            bounded = SearchCounter()
            got = ged_within(g1, g2, tau, counter=bounded)
            if got != (d <= tau):
                report.fail(f"pair {k} tau {tau}: ged_within {got}, exact {d}")
            if bounded.expanded > full.expanded:
                report.fail(f"pair {k} tau {tau}: expanded {bounded.expanded} > unbounded {full.expanded}")
    return report
