# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Lower-bound constructions: the trees T_k, the metrics M_k, and an
interactive adversary that builds its input while watching a strategy run.

M_k joins an origin ``p0`` to N_k - 1 pendant spokes of length 1 + sqrt(2)
and to every vertex of N_k + 1 disjoint copies of T_k by unit edges.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from module_utils.engine import SimOptions, WAKE, positions_at, ratio, simulate
from module_utils.errors import CountMismatch, KTooLarge, NoEmptyCopy
from module_utils.instance import Instance, RobotSpec, to_dict
from module_utils.metric import EPS, Point, build_metric, distance

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2)
SPOKE_LENGTH = 1 + SQRT2
ORIGIN = "p0"
MAX_K = 3

CASE_PATIENT = "case1"
CASE_SPOKES = "case2"


def tree_size(k):
    """N_k: 1, 2, then N_{k+1} = N_k ** 2 + 1."""
    if k < 0:
        raise KTooLarge("k must be non-negative, got %r" % (k,))
    if k == 0:
        return 1
    size = 2
    for _ in range(k - 1):
        size = size * size + 1
    return size


@dataclass(frozen=True)
class TreeSpec(object):
    """T_k with nodes numbered breadth first from the root (node 0).

    ``parents[i]`` is -1 for the root, ``lengths[i]`` the length of the edge
    from node i to its parent, ``layers[i]`` its depth.
    """

    k: int
    parents: tuple
    lengths: tuple
    layers: tuple

    @property
    def size(self):
        return len(self.parents)

    @property
    def children(self):
        kids = [[] for _ in self.parents]
        for node, parent in enumerate(self.parents):
            if parent >= 0:
                kids[parent].append(node)
        return tuple(tuple(c) for c in kids)

    @property
    def layer_counts(self):
        counts = [0] * (max(self.layers) + 1)
        for layer in self.layers:
            counts[layer] += 1
        return tuple(counts)

    @property
    def cumulative_counts(self):
        """x_i, the number of nodes in layers 0..i."""
        return tuple(int(x) for x in np.cumsum(self.layer_counts))

    def edges(self):
        """``(parent, child, length)`` for every tree edge."""
        return [
            (parent, node, self.lengths[node])
            for node, parent in enumerate(self.parents)
            if parent >= 0
        ]

    def root_path_length(self, node):
        total = 0.0
        while self.parents[node] >= 0:
            total += self.lengths[node]
            node = self.parents[node]
        return total

    def leaves(self):
        return [n for n, kids in enumerate(self.children) if not kids]


def _grow(k):
    """Nested T_k as ``(children, lengths)`` pairs, root first."""
    if k == 0:
        return ([], [])
    if k == 1:
        return ([([], [])], [1.0])
    smaller = _grow(k - 1)
    copies = [_scaled(smaller, 0.5) for _ in range(tree_size(k - 1))]
    return (copies, [0.5] * len(copies))


def _scaled(tree, factor):
    kids, lengths = tree
    return ([_scaled(c, factor) for c in kids], [length * factor for length in lengths])


def build_tree(k):
    """Builds T_k.

    :param k: Level, 0 <= k <= 3
    :type k: int
    :rtype: TreeSpec
    :raises KTooLarge: for k > 3 (N_4 = 677 nodes per copy)
    """
    if not 0 <= k <= MAX_K:
        raise KTooLarge(
            "k=%r outside 0..%d; T_%r would have %s nodes"
            % (k, MAX_K, k, tree_size(k) if k >= 0 else "no")
        )
    parents, lengths, layers = [-1], [0.0], [0]
    queue = [(0, _grow(k))]
    while queue:
        node, (kids, kid_lengths) = queue.pop(0)
        for child, length in zip(kids, kid_lengths):
            parents.append(node)
            lengths.append(length)
            layers.append(layers[node] + 1)
            queue.append((len(parents) - 1, child))
    tree = TreeSpec(k, tuple(parents), tuple(lengths), tuple(layers))
    assert tree.size == tree_size(k)
    return tree


@dataclass(frozen=True)
class LowerBoundMetric(object):
    k: int
    tree: TreeSpec
    metric: object
    origin: str
    spokes: tuple
    spoke_edges: tuple
    copies: tuple
    copy_edges: tuple

    @property
    def copy_roots(self):
        return tuple(c[0] for c in self.copies)

    def copy_of(self, point):
        """Index of the copy whose vertices or edges contain ``point``."""
        for index, (vertices, edges) in enumerate(zip(self.copies, self.copy_edges)):
            if point.vertex in vertices or point.edge in edges:
                return index
        return None

    def on_spoke(self, point):
        return point.vertex in self.spokes or point.edge in self.spoke_edges


def _copy_vertex(copy, node):
    return "t%d.%d" % (copy, node)


def build_metric_k(k):
    """Builds M_k for 1 <= k <= 3.

    Edge indices: spokes first, then per copy its tree edges followed by its
    unit links to the origin.

    :rtype: LowerBoundMetric
    :raises KTooLarge: outside 1..3
    """
    if not 1 <= k <= MAX_K:
        raise KTooLarge("M_k is built for 1 <= k <= %d, got %r" % (MAX_K, k))
    tree = build_tree(k)
    n = tree.size
    spokes = tuple("spoke%d" % i for i in range(1, n))
    vertices = [ORIGIN] + list(spokes)
    edges = [(ORIGIN, s, SPOKE_LENGTH) for s in spokes]
    spoke_edges = tuple(range(len(edges)))

    copies, copy_edges = [], []
    for c in range(n + 1):
        names = tuple(_copy_vertex(c, node) for node in range(n))
        vertices.extend(names)
        first = len(edges)
        edges.extend(
            (names[parent], names[child], length)
            for parent, child, length in tree.edges()
        )
        edges.extend((ORIGIN, name, 1.0) for name in names)
        copies.append(names)
        copy_edges.append(frozenset(range(first, len(edges))))

    metric = build_metric(vertices, edges)
    logger.debug(
        "M_%d: %d vertices, %d edges", k, len(metric.vertices), len(metric.edges)
    )
    return LowerBoundMetric(
        k, tree, metric, ORIGIN, spokes, spoke_edges, tuple(copies), tuple(copy_edges)
    )


def request_count(tree, node):
    """Frozen robots placed at ``node``: the root gets its down-degree,
    other internal nodes max(d - 1, 1), leaves 1."""
    degree = len(tree.children[node])
    if degree == 0:
        return 1
    if tree.parents[node] < 0:
        return degree
    return max(degree - 1, 1)


def sigma_requests(copy, tree, release, first_id=0):
    """Frozen robots released on one tree copy.

    :param copy: Vertex ids of the copy, indexed by tree node
    :type copy: tuple
    :param tree: The tree the copy was built from
    :type tree: TreeSpec
    :param release: Release time of every request
    :type release: float
    :param first_id: Id given to the first request
    :type first_id: int
    :rtype: list
    """
    robots = []
    for node, vertex in enumerate(copy):
        for _ in range(request_count(tree, node)):
            robots.append(
                RobotSpec(first_id + len(robots), Point.at(vertex), release, False)
            )
    return robots


def r_bound(k):
    """R_k = 1 + sqrt(2) - (sqrt(2) - 1) ** (k + 1)."""
    return 1 + SQRT2 - (SQRT2 - 1) ** (k + 1)


def r_bound_recurrence(k):
    """R_k by iterating R_{k+1} = R_k + sqrt(2) * (1 - R_k * (sqrt(2) - 1))
    from R_0 = 2."""
    value = 2.0
    for _ in range(k):
        value = value + SQRT2 * (1 - value * (SQRT2 - 1))
    return value


@dataclass(frozen=True)
class CountReport(object):
    layers_checked: tuple
    excess: dict = field(default_factory=dict)


def robot_count_check(tree):
    """Checks that robots on layers 0..i-1 match the node count of layer i.

    Robots are counted with d - 1 at non-root internal nodes. Layers where
    the request rule's max(d - 1, 1) floor places extra robots are reported
    in ``excess`` (layer -> extra robots).

    :rtype: CountReport
    :raises CountMismatch: naming the first layer that disagrees
    """
    children = tree.children
    counts = tree.layer_counts
    below = 0
    checked = []
    excess = {}
    for layer in range(len(counts) - 1):
        for node in range(tree.size):
            if tree.layers[node] != layer:
                continue
            degree = len(children[node])
            if layer == 0:
                below += degree
            elif degree:
                below += degree - 1
                if degree == 1:
                    excess[layer] = excess.get(layer, 0) + 1
        if below != counts[layer + 1]:
            raise CountMismatch(
                "layers 0..%d hold %d robots but layer %d has %d nodes"
                % (layer, below, layer + 1, counts[layer + 1]),
                layer + 1,
            )
        checked.append(layer + 1)
    return CountReport(tuple(checked), excess)


def free_robots(metric, positions, t, origin=ORIGIN):
    """Number of robots farther than t(sqrt(2) - 1) from the origin.

    :param positions: Positions of the unfrozen robots
    :type positions: dict
    """
    radius = t * (SQRT2 - 1)
    home = Point.at(origin)
    return sum(
        1
        for point in positions.values()
        if distance(metric, home, point) > radius + EPS
    )


@dataclass(frozen=True)
class AdversaryOptions(object):
    dt: float = 1e-3
    max_time: float = 100.0


@dataclass
class AdversaryReport(object):
    k: int
    instance: object
    trace: object
    case: str
    t_star: float
    certified_opt: float
    achieved_ratio: float
    r_bound: float
    copy: int
    free_count: int
    strategy: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "k": self.k,
            "strategy": self.strategy,
            "case": self.case,
            "t_star": self.t_star,
            "certified_opt": self.certified_opt,
            "makespan": self.trace.makespan,
            "achieved_ratio": self.achieved_ratio,
            "r_bound": self.r_bound,
            "copy": self.copy,
            "free_robots": self.free_count,
            "instance": to_dict(self.instance),
        }


def _empty_copy(lower, positions):
    occupied = {lower.copy_of(p) for p in positions.values()}
    for index in range(len(lower.copies)):
        if index not in occupied:
            return index
    raise NoEmptyCopy("every tree copy has a robot on it at t=1")


def _monitor_times(trace, dt):
    end = SPOKE_LENGTH
    grid = np.arange(2.0, end, dt)
    events = [e.time for e in trace.events if 2.0 <= e.time <= end]
    return sorted(set(float(t) for t in grid) | set(events))


def _unfrozen_at(trace, positions, t):
    woken = {e.robot for e in trace.events if e.kind == WAKE and e.time <= t}
    return {
        rid: point
        for rid, point in positions.items()
        if rid in woken or trace.instance.robot(rid).active
    }


def run_adversary(k, strategy_factory, opts=None):
    """Plays the adversary against fresh strategies from ``strategy_factory``.

    The strategy only ever sees releases up to the current time, so each
    phase is replayed on a longer input and the earlier phases repeat
    exactly: a probe to t=1 picks the empty tree copy, a monitored run up to
    1 + sqrt(2) decides whether spoke requests are released, and a final run
    plays the realized input to completion.

    :param k: Level of the construction, 1 <= k <= 3
    :type k: int
    :param strategy_factory: Zero-argument callable returning a new strategy
    :type strategy_factory: callable
    :param opts: Sampling step and time horizon
    :type opts: AdversaryOptions
    :rtype: AdversaryReport
    :raises HorizonExceeded: if the strategy never finishes
    """
    opts = opts or AdversaryOptions()
    lower = build_metric_k(k)
    n = lower.tree.size
    starters = tuple(RobotSpec(i, Point.at(ORIGIN), 0.0, True) for i in range(n))

    probe = simulate(
        Instance(lower.metric, starters),
        strategy_factory(),
        SimOptions(max_time=opts.max_time, stop_at=1.0),
    )
    copy = _empty_copy(lower, positions_at(probe, 1.0))
    requests = sigma_requests(lower.copies[copy], lower.tree, 1.0, first_id=n)
    logger.info("k=%d: releasing %d requests on copy %d", k, len(requests), copy)
    inst = Instance(lower.metric, starters + tuple(requests))

    monitor = simulate(
        inst,
        strategy_factory(),
        SimOptions(max_time=opts.max_time, stop_at=SPOKE_LENGTH),
    )
    t_star, free_count = None, None
    for t in _monitor_times(monitor, opts.dt):
        if t > monitor.end_time:
            break
        unfrozen = _unfrozen_at(monitor, positions_at(monitor, t), t)
        radius = t * (SQRT2 - 1)
        near = sum(
            1
            for point in unfrozen.values()
            if lower.on_spoke(point)
            or distance(lower.metric, Point.at(ORIGIN), point) <= radius + EPS
        )
        free_count = free_robots(lower.metric, unfrozen, t)
        if near <= n - 2:
            t_star = t
            break

    if t_star is None:
        case, certified = CASE_PATIENT, 1.0
    else:
        case, certified = CASE_SPOKES, t_star
        first = n + len(requests)
        spoke_requests = [
            RobotSpec(
                first + i, lower.metric.point_on_edge(edge, t_star), t_star, False
            )
            for i, edge in enumerate(lower.spoke_edges)
        ]
        inst = inst.with_robots(spoke_requests)
        logger.info("k=%d: trigger at t*=%.9f, %d spoke requests", k, t_star, n - 1)

    strategy = strategy_factory()
    trace = simulate(inst, strategy, SimOptions(max_time=opts.max_time))
    report = AdversaryReport(
        k=k,
        instance=inst,
        trace=trace,
        case=case,
        t_star=t_star,
        certified_opt=certified,
        achieved_ratio=ratio(trace, certified),
        r_bound=r_bound(k),
        copy=copy,
        free_count=free_count,
        strategy=strategy.describe(),
    )
    logger.info(
        "k=%d %s: %s, ratio %.9f vs R_k %.9f",
        k,
        strategy.name,
        case,
        report.achieved_ratio,
        report.r_bound,
    )
    return report
