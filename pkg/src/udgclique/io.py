"""JSON serialization.  Rationals are always ``[numerator, denominator]``."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .generators import Instance
from .model import (Certificate, CertificateReason, CliquePartition, InstanceError, PointSet,
                    UdgGraph, build_udg)

INSTANCE_FORMAT = "udgclique/instance"
CERTIFICATE_FORMAT = "udgclique/certificate"
SCHEMA_VERSION = 1


def rat(x: Fraction) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def unrat(pair) -> Fraction:
    if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, int) for v in pair)):
        raise InstanceError(f"expected [numerator, denominator], got {pair!r}")
    if pair[1] <= 0:
        raise InstanceError(f"denominator must be positive in {pair!r}")
    return Fraction(pair[0], pair[1])


def jsonable(obj: Any) -> Any:
    """Recursively turn Fractions into pairs and tuples/sets into lists."""
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj)]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def graph_to_json(g: UdgGraph) -> dict:
    out = {"n": g.n, "edges": [[u, v, *rat(g.sqlen[(u, v)])] for u, v in g.edges]}
    if g.weights is not None:
        out["weights"] = [rat(w) for w in g.weights]
    return out


def instance_to_json(inst: Instance) -> dict:
    out: dict[str, Any] = {"format": INSTANCE_FORMAT, "version": SCHEMA_VERSION, "n": inst.n}
    if inst.points is not None:
        out["points"] = [[*rat(x), *rat(y)] for x, y in inst.points.points]
    else:
        out["edges"] = graph_to_json(inst.graph)["edges"]
    if inst.weights is not None:
        out["weights"] = [rat(w) for w in inst.weights]
    if inst.meta:
        out["meta"] = inst.meta
    return out


def instance_from_json(data: dict) -> Instance:
    if data.get("format", INSTANCE_FORMAT) != INSTANCE_FORMAT:
        raise InstanceError(f"not an instance file: format={data.get('format')!r}")
    weights = None
    if data.get("weights") is not None:
        weights = tuple(unrat(w) for w in data["weights"])
    meta = data.get("meta", {})
    if data.get("points") is not None:
        pts = []
        for row in data["points"]:
            if len(row) != 4:
                raise InstanceError(f"point row must be [xn, xd, yn, yd], got {row!r}")
            pts.append((unrat(row[0:2]), unrat(row[2:4])))
        ps = PointSet(tuple(pts), weights)
        g = build_udg(ps)
        if data.get("edges") is not None:
            given = {(min(u, v), max(u, v)): Fraction(a, b) for u, v, a, b in data["edges"]}
            if given != dict(g.sqlen):
                raise InstanceError("explicit edges disagree with the point realization")
        return Instance(ps, g, meta)
    if data.get("edges") is None:
        raise InstanceError("instance needs 'points' or 'edges'")
    n = data.get("n")
    if not isinstance(n, int) or n < 0:
        raise InstanceError("metric-only instance needs integer 'n'")
    table = {}
    for row in data["edges"]:
        if len(row) != 4:
            raise InstanceError(f"edge row must be [u, v, num, den], got {row!r}")
        u, v = int(row[0]), int(row[1])
        table[(min(u, v), max(u, v))] = unrat(list(row[2:4]))
    return Instance(None, UdgGraph.from_edges(n, table, weights), meta)


def instance_digest(inst: Instance) -> str:
    body = instance_to_json(inst)
    body.pop("meta", None)
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def partition_to_json(p: CliquePartition) -> list[list[int]]:
    return p.as_lists()


def partition_from_json(data) -> CliquePartition:
    if isinstance(data, dict):
        data = data["partition"]
    return CliquePartition([[int(v) for v in block] for block in data])


def certificate_to_json(cert: Certificate) -> dict:
    inst = graph_to_json(cert.graph)
    inst.update(format=INSTANCE_FORMAT, version=SCHEMA_VERSION)
    return {
        "format": CERTIFICATE_FORMAT,
        "version": SCHEMA_VERSION,
        "reason": cert.reason.value,
        "vertices": list(cert.vertices),
        "instance": inst,
        "context": jsonable(dict(cert.context)),
    }


def certificate_from_json(data: dict) -> Certificate:
    if data.get("format") != CERTIFICATE_FORMAT:
        raise InstanceError("not a certificate file")
    inst = instance_from_json(data["instance"])
    ctx = {}
    for k, v in data.get("context", {}).items():
        ctx[k] = unrat(v) if (isinstance(v, list) and len(v) == 2 and k in _RATIONAL_CONTEXT) else v
    return Certificate(CertificateReason(data["reason"]), tuple(data["vertices"]), inst.graph, ctx)


_RATIONAL_CONTEXT = {"epsilon", "gamma"}


def load_json(path: str | Path):
    with open(path) as fh:
        return json.load(fh)


def save_json(path: str | Path, obj) -> None:
    Path(path).write_text(dumps(obj))


def load_instance(path: str | Path) -> Instance:
    return instance_from_json(load_json(path))


def save_instance(path: str | Path, inst: Instance) -> None:
    save_json(path, instance_to_json(inst))
