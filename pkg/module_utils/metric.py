# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Continuous metric spaces induced by positively weighted graphs.

Points live on vertices or in edge interiors. Travel is allowed along edge
interiors at unit speed, so every distance is realised by a path (the space is
strongly connected by construction).
"""

import logging
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from module_utils.errors import (
    DisconnectedGraph,
    ElapsedOutOfRange,
    InvalidPoint,
    MetricError,
    NonpositiveEdgeLength,
    UnknownVertex,
)

logger = logging.getLogger(__name__)

# absolute tolerance for every float comparison in the package
EPS = 1e-9


@dataclass(frozen=True)
class Edge(object):
    index: int
    u: str
    v: str
    length: float


@dataclass(frozen=True)
class Point(object):
    """A vertex, or an edge plus an offset measured from the edge's ``u`` end.

    Use :meth:`MetricSpace.point_on_edge` to build edge points; it normalizes
    offsets at either end to the vertex form. Edge points sitting on a vertex
    are rejected by :meth:`MetricSpace.check_point`, so every valid point has
    exactly one representation.
    """

    vertex: str = None
    edge: int = None
    offset: float = 0.0

    @classmethod
    def at(cls, vertex):
        return cls(vertex=vertex)

    @property
    def is_vertex(self):
        return self.vertex is not None

    def label(self):
        """Text form used in CSV exports: ``p0`` or ``edge#3@0.500000000``."""
        if self.is_vertex:
            return str(self.vertex)
        return "edge#%d@%.9f" % (self.edge, self.offset)


def edge_point(edge, offset):
    """Point at ``offset`` from ``edge.u``, normalized to a vertex at the ends.

    :param edge: Edge the point lies on
    :type edge: Edge
    :param offset: Distance from ``edge.u`` along the edge
    :type offset: float
    :return: Normalized point
    :rtype: Point
    """
    if offset <= EPS:
        return Point(vertex=edge.u)
    if offset >= edge.length - EPS:
        return Point(vertex=edge.v)
    return Point(edge=edge.index, offset=float(offset))


@dataclass(frozen=True)
class Segment(object):
    """Unit-speed traversal of one edge from offset ``start`` to ``end``."""

    edge: Edge
    start: float
    end: float

    @property
    def length(self):
        return abs(self.end - self.start)

    @property
    def direction(self):
        return 1.0 if self.end >= self.start else -1.0


@dataclass(frozen=True)
class PathPlan(object):
    """Geodesic realised at unit speed.

    ``waypoints[0]`` is the start, ``waypoints[-1]`` the destination and every
    further waypoint closes one segment.
    """

    waypoints: tuple
    segments: tuple
    total_length: float

    @property
    def first(self):
        return self.waypoints[0]

    @property
    def last(self):
        return self.waypoints[-1]


class MetricSpace(object):
    """Immutable metric induced by a connected, positively weighted graph.

    Vertex-pair distances are computed eagerly; point distances combine them
    with offsets along edges. Parallel edges are allowed and edges are
    identified by their index.
    """

    def __init__(self, vertices, edges, graph, dist):
        self._vertices = tuple(vertices)
        self._edges = tuple(edges)
        self._index = {v: i for i, v in enumerate(self._vertices)}
        self._graph = graph
        self._dist = dist
        self._dist.setflags(write=False)

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return self._edges

    @property
    def graph(self):
        return self._graph

    @property
    def dist_table(self):
        return self._dist

    def index(self, vertex):
        try:
            return self._index[vertex]
        except KeyError:
            raise UnknownVertex("unknown vertex %r" % (vertex,))

    def vertex_distance(self, u, v):
        return float(self._dist[self.index(u), self.index(v)])

    def edge(self, index):
        if not isinstance(index, int) or not 0 <= index < len(self._edges):
            raise InvalidPoint("unknown edge index %r" % (index,))
        return self._edges[index]

    def point_on_edge(self, index, offset):
        """Builds a normalized point ``offset`` along edge ``index``.

        :raises InvalidPoint: if the edge is unknown or the offset falls
            outside ``[0, length]``
        """
        edge = self.edge(index)
        if not -EPS <= offset <= edge.length + EPS:
            raise InvalidPoint(
                "offset %r outside edge %d of length %r"
                % (offset, index, edge.length)
            )
        return edge_point(edge, offset)

    def check_point(self, point):
        if point.vertex is not None:
            if point.edge is not None:
                raise InvalidPoint("point has both a vertex and an edge")
            if point.vertex not in self._index:
                raise InvalidPoint("unknown vertex %r" % (point.vertex,))
            return point
        if point.edge is None:
            raise InvalidPoint("point has neither a vertex nor an edge")
        normalized = self.point_on_edge(point.edge, point.offset)
        if normalized != point:
            raise InvalidPoint(
                "offset %r on edge %d is vertex %r, use the vertex form"
                % (point.offset, point.edge, normalized.vertex)
            )
        return point

    def anchors(self, point):
        """Ways to leave ``point`` through a vertex.

        :return: tuples ``(vertex index, cost to reach it, its offset on the
            point's edge)``; the offset is None for vertex points
        :rtype: tuple
        """
        if point.vertex is not None:
            return ((self._index[point.vertex], 0.0, None),)
        edge = self._edges[point.edge]
        return (
            (self._index[edge.u], point.offset, 0.0),
            (self._index[edge.v], edge.length - point.offset, edge.length),
        )

    def shortest_edge(self, u, v):
        """Shortest of the (possibly parallel) edges joining ``u`` and ``v``."""
        data = self._graph[u][v]
        best = min(data.values(), key=lambda d: (d["length"], d["index"]))
        return self._edges[best["index"]]

    def to_fragment(self):
        return {
            "vertices": list(self._vertices),
            "edges": [
                {"u": e.u, "v": e.v, "length": e.length} for e in self._edges
            ],
        }


def build_metric(vertices, edges):
    """Builds and validates the metric induced by a weighted graph.

    :param vertices: Vertex ids
    :type vertices: list
    :param edges: ``(u, v, length)`` triples; list order defines edge indices
    :type edges: list
    :return: The induced metric space
    :rtype: MetricSpace
    :raises DisconnectedGraph: if the graph has more than one component
    :raises NonpositiveEdgeLength: if an edge length is not a positive number
    :raises UnknownVertex: if an edge endpoint is not a vertex
    """
    vertices = list(vertices)
    if not vertices:
        raise MetricError("a metric needs at least one vertex")
    if len(set(vertices)) != len(vertices):
        raise MetricError("duplicate vertex ids")

    graph = nx.MultiGraph()
    graph.add_nodes_from(vertices)
    built = []
    for index, (u, v, length) in enumerate(edges):
        for end in (u, v):
            if end not in graph:
                raise UnknownVertex(
                    "edge %d references unknown vertex %r" % (index, end)
                )
        length = float(length)
        if not math.isfinite(length) or length <= 0:
            raise NonpositiveEdgeLength(
                "edge %d (%s, %s) has length %r" % (index, u, v, length)
            )
        graph.add_edge(u, v, key=index, length=length, index=index)
        built.append(Edge(index, u, v, length))

    if not nx.is_connected(graph):
        raise DisconnectedGraph(
            "graph has %d components" % nx.number_connected_components(graph)
        )

    index = {v: i for i, v in enumerate(vertices)}
    dist = np.zeros((len(vertices), len(vertices)))
    for source, lengths in nx.all_pairs_dijkstra_path_length(
        graph, weight="length"
    ):
        row = index[source]
        for target, d in lengths.items():
            dist[row, index[target]] = d
    logger.debug(
        "built metric with %d vertices and %d edges", len(vertices), len(built)
    )
    return MetricSpace(vertices, built, graph, dist)


def _best_route(m, a, b):
    """Cheapest way from ``a`` to ``b``: the direct same-edge move or an
    ``(anchor of a, anchor of b)`` pair joined through the vertex table."""
    best = None
    if a.edge is not None and a.edge == b.edge:
        best = (abs(a.offset - b.offset), None, None)
    for anchor_a in m.anchors(a):
        for anchor_b in m.anchors(b):
            cost = (
                anchor_a[1]
                + m.dist_table[anchor_a[0], anchor_b[0]]
                + anchor_b[1]
            )
            if best is None or cost < best[0]:
                best = (float(cost), anchor_a, anchor_b)
    return best


def distance(m, a, b):
    """Length of a shortest path between two points.

    :param m: Metric space
    :type m: MetricSpace
    :param a: First point
    :type a: Point
    :param b: Second point
    :type b: Point
    :return: Distance
    :rtype: float
    :raises InvalidPoint: if either point is not a point of ``m``
    """
    m.check_point(a)
    m.check_point(b)
    if a == b:
        return 0.0
    return _best_route(m, a, b)[0]


def shortest_path(m, a, b):
    """Unit-speed geodesic from ``a`` to ``b``.

    :return: Plan whose ``total_length`` equals ``distance(m, a, b)``
    :rtype: PathPlan
    :raises InvalidPoint: if either point is not a point of ``m``
    """
    m.check_point(a)
    m.check_point(b)
    if a == b:
        return PathPlan((a,), (), 0.0)

    _, anchor_a, anchor_b = _best_route(m, a, b)
    segments = []
    if anchor_a is None:
        segments.append(Segment(m.edges[a.edge], a.offset, b.offset))
    else:
        if anchor_a[2] is not None:
            segments.append(Segment(m.edges[a.edge], a.offset, anchor_a[2]))
        route = nx.dijkstra_path(
            m.graph,
            m.vertices[anchor_a[0]],
            m.vertices[anchor_b[0]],
            weight="length",
        )
        for here, there in zip(route, route[1:]):
            edge = m.shortest_edge(here, there)
            if edge.u == here:
                segments.append(Segment(edge, 0.0, edge.length))
            else:
                segments.append(Segment(edge, edge.length, 0.0))
        if anchor_b[2] is not None:
            segments.append(Segment(m.edges[b.edge], anchor_b[2], b.offset))

    segments = [s for s in segments if s.length > 0.0]
    waypoints = [a] + [edge_point(s.edge, s.end) for s in segments]
    waypoints[-1] = b
    total = math.fsum(s.length for s in segments)
    return PathPlan(tuple(waypoints), tuple(segments), total)


def position_along(plan, elapsed):
    """Point reached after travelling ``elapsed`` along ``plan``.

    :raises ElapsedOutOfRange: if ``elapsed`` is outside
        ``[0, plan.total_length]``
    """
    if elapsed < -EPS or elapsed > plan.total_length + EPS:
        raise ElapsedOutOfRange(
            "elapsed %r outside [0, %r]" % (elapsed, plan.total_length)
        )
    if elapsed >= plan.total_length:
        return plan.last
    remaining = max(elapsed, 0.0)
    for segment in plan.segments:
        if remaining <= segment.length:
            return edge_point(
                segment.edge, segment.start + segment.direction * remaining
            )
        remaining -= segment.length
    return plan.last


def _segment_contact(segment, target, tol, min_travel=0.0):
    if target.vertex is not None:
        offsets = [
            offset
            for offset, end in (
                (0.0, segment.edge.u),
                (segment.edge.length, segment.edge.v),
            )
            if end == target.vertex
        ]
    elif target.edge == segment.edge.index:
        offsets = [target.offset]
    else:
        return None

    hit = None
    for offset in offsets:
        travel = segment.direction * (offset - segment.start)
        travel = min(max(travel, 0.0), segment.length)
        reached = segment.start + segment.direction * travel
        if abs(reached - offset) > tol or travel < min_travel:
            continue
        if hit is None or travel < hit:
            hit = travel
    return hit


def crossing_time(plan, depart, target, tol, after=None):
    """Earliest absolute time a mover on ``plan`` touches ``target``.

    The mover leaves at ``depart`` and travels at unit speed. Contact is the
    closest approach along a traversed edge, provided it is within ``tol``.

    :param after: When given, only contacts strictly later than this time
        are reported
    :type after: float
    :return: Contact time, or None if the plan never comes within ``tol``
    :rtype: float
    """
    if not plan.segments:
        if plan.first == target and (after is None or depart > after):
            return depart
        return None
    travelled = 0.0
    for segment in plan.segments:
        floor = 0.0
        if after is not None:
            floor = after - depart - travelled
            if floor >= segment.length:
                travelled += segment.length
                continue
        hit = _segment_contact(segment, target, tol, floor)
        if hit is not None and (after is None or depart + travelled + hit > after):
            return depart + travelled + hit
        travelled += segment.length
    return None


def is_isomorphic(a, b, rel_tol=1e-9):
    """Whether two metrics come from the same weighted multigraph, up to
    vertex names."""
    match = nx.algorithms.isomorphism.numerical_multiedge_match(
        "length", 1.0, rtol=rel_tol
    )
    return nx.is_isomorphic(a.graph, b.graph, edge_match=match)
