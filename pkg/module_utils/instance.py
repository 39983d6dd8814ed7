# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Time-dependent freeze-tag instances: robots with homes, release times and
an initially-active flag, over an embedded metric."""

import json
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from module_utils.errors import (
    ActiveWithPositiveRelease,
    DuplicateRobotId,
    InvalidHome,
    InvalidInstance,
    InvalidPoint,
    NoActiveRobot,
    ParseError,
    SchemaError,
    UnsortedReleases,
)
from module_utils.metric import Point, build_metric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RobotSpec(object):
    id: int
    home: Point
    release: float
    active: bool = False


@dataclass(frozen=True)
class Instance(object):
    """A TDFT input: robots sorted by release, active robots first."""

    metric: object
    robots: tuple

    @property
    def active_robots(self):
        return tuple(r for r in self.robots if r.active)

    @property
    def frozen_robots(self):
        return tuple(r for r in self.robots if not r.active)

    @property
    def last_release(self):
        return max((r.release for r in self.robots), default=0.0)

    def robot(self, robot_id):
        for r in self.robots:
            if r.id == robot_id:
                return r
        raise KeyError(robot_id)

    def with_robots(self, extra):
        """Copy of the instance with ``extra`` robots appended."""
        return Instance(self.metric, self.robots + tuple(extra))


def validate(inst):
    """Confirms every instance invariant.

    :param inst: Instance to check
    :type inst: Instance
    :raises InvalidHome: if a home is not a point of the metric
    :raises DuplicateRobotId: if two robots share an id
    :raises ActiveWithPositiveRelease: if an active robot has release > 0
    :raises NoActiveRobot: if no robot starts active
    :raises UnsortedReleases: if releases decrease or an active robot follows
        a frozen one
    """
    seen = set()
    for r in inst.robots:
        try:
            inst.metric.check_point(r.home)
        except InvalidPoint as err:
            raise InvalidHome("robot %s: %s" % (r.id, err))
        if r.id in seen:
            raise DuplicateRobotId("robot id %s used twice" % r.id)
        seen.add(r.id)
        if not r.release >= 0.0 or r.release == float("inf"):
            raise InvalidInstance(
                "robot %s has release %r" % (r.id, r.release)
            )
        if r.active and r.release > 0.0:
            raise ActiveWithPositiveRelease(
                "active robot %s has release %r" % (r.id, r.release)
            )

    if not any(r.active for r in inst.robots):
        raise NoActiveRobot("instance has no initially active robot")

    previous = None
    for r in inst.robots:
        if previous is not None:
            if r.release < previous.release:
                raise UnsortedReleases(
                    "robot %s released at %r after robot %s at %r"
                    % (r.id, r.release, previous.id, previous.release)
                )
            if r.active and not previous.active:
                raise UnsortedReleases(
                    "active robot %s listed after frozen robot %s"
                    % (r.id, previous.id)
                )
        previous = r
    return True


def truncate(inst, time):
    """The instance restricted to robots released by ``time``."""
    return Instance(
        inst.metric, tuple(r for r in inst.robots if r.release <= time)
    )


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EdgeModel(_Model):
    u: str
    v: str
    length: float


class GraphModel(_Model):
    vertices: List[str]
    edges: List[EdgeModel] = []


class EdgeRefModel(_Model):
    index: int
    offset: float


class PointModel(_Model):
    vertex: Optional[str] = None
    edge: Optional[EdgeRefModel] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.vertex is None) == (self.edge is None):
            raise ValueError("point needs exactly one of 'vertex' or 'edge'")
        return self


class RobotModel(_Model):
    id: int
    point: PointModel
    release: float = 0.0
    active: bool = False


class InstanceModel(_Model):
    metric: GraphModel
    robots: List[RobotModel]


def _raise_validation(err):
    first = err.errors()[0]
    if first["type"] == "json_invalid":
        raise ParseError("invalid JSON: %s" % first["msg"])
    path = ".".join(str(part) for part in first["loc"])
    raise SchemaError(first["msg"], path=path)


def metric_from_fragment(fragment):
    """Builds a metric from a parsed graph fragment model."""
    return build_metric(
        fragment.vertices, [(e.u, e.v, e.length) for e in fragment.edges]
    )


def load_metric(text):
    """Parses a graph JSON fragment into a metric space.

    :raises ParseError: if the text is not JSON
    :raises SchemaError: if the document does not match the graph schema
    """
    try:
        fragment = GraphModel.model_validate_json(text)
    except ValidationError as err:
        _raise_validation(err)
    return metric_from_fragment(fragment)


def _home(metric, model, robot_id):
    try:
        if model.vertex is not None:
            return metric.check_point(Point.at(model.vertex))
        return metric.point_on_edge(model.edge.index, model.edge.offset)
    except InvalidPoint as err:
        raise InvalidHome("robot %s: %s" % (robot_id, err))


def load(text):
    """Parses and validates an instance document.

    :param text: Instance JSON
    :type text: str
    :return: Validated instance
    :rtype: Instance
    :raises ParseError: if the text is not JSON
    :raises SchemaError: if the document does not match the instance schema
    """
    try:
        model = InstanceModel.model_validate_json(text)
    except ValidationError as err:
        _raise_validation(err)
    metric = metric_from_fragment(model.metric)
    robots = tuple(
        RobotSpec(r.id, _home(metric, r.point, r.id), r.release, r.active)
        for r in model.robots
    )
    inst = Instance(metric, robots)
    validate(inst)
    return inst


def point_to_dict(point):
    if point.is_vertex:
        return {"vertex": point.vertex}
    return {"edge": {"index": point.edge, "offset": point.offset}}


def to_dict(inst):
    return {
        "metric": inst.metric.to_fragment(),
        "robots": [
            {
                "id": r.id,
                "point": point_to_dict(r.home),
                "release": r.release,
                "active": r.active,
            }
            for r in inst.robots
        ],
    }


def save(inst):
    """Canonical JSON text for ``inst``."""
    return json.dumps(to_dict(inst), indent=2)


def read_instance(path):
    try:
        with open(path) as stream:
            text = stream.read()
    except (IOError, OSError) as err:
        raise ParseError("cannot read %s: %s" % (path, err))
    return load(text)


def write_instance(inst, path):
    with open(path, "w") as stream:
        stream.write(save(inst))
        stream.write("\n")


def _random_length(rng):
    return round(float(rng.uniform(0.5, 2.0)), 3)


def _random_point(rng, metric):
    if rng.random() < 0.5:
        return Point.at(metric.vertices[int(rng.integers(len(metric.vertices)))])
    edge = metric.edges[int(rng.integers(len(metric.edges)))]
    offset = round(float(rng.uniform(0.1, 0.9)) * edge.length, 3)
    return metric.point_on_edge(edge.index, offset)


def random_instance(
    seed, max_vertices=6, max_frozen=5, max_release=3.0, max_active=2
):
    """Seeded random instance over a random connected graph.

    A random spanning tree guarantees connectivity; a few extra (possibly
    parallel) edges are added on top. Homes are vertices or edge interiors.

    :param seed: Anything accepted by ``numpy.random.default_rng``
    :return: Validated instance with at least one frozen robot
    :rtype: Instance
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_vertices + 1))
    vertices = ["v%d" % i for i in range(n)]
    edges = [
        (vertices[int(rng.integers(0, i))], vertices[i], _random_length(rng))
        for i in range(1, n)
    ]
    for _ in range(int(rng.integers(0, n))):
        u, v = rng.choice(n, size=2, replace=False)
        edges.append((vertices[int(u)], vertices[int(v)], _random_length(rng)))
    metric = build_metric(vertices, edges)

    n_active = int(rng.integers(1, max_active + 1))
    n_frozen = int(rng.integers(1, max_frozen + 1))
    releases = sorted(
        round(float(rng.uniform(0.0, max_release)), 3) for _ in range(n_frozen)
    )
    robots = [
        RobotSpec(i, _random_point(rng, metric), 0.0, True)
        for i in range(n_active)
    ]
    robots.extend(
        RobotSpec(n_active + j, _random_point(rng, metric), release, False)
        for j, release in enumerate(releases)
    )
    inst = Instance(metric, tuple(robots))
    validate(inst)
    return inst


def random_suite(seed, count, **kwargs):
    """``count`` independent random instances derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [random_instance(child, **kwargs) for child in children]
