"""Line-delimited JSON trace files.

Line 1 is a header object; every following line is one trace, a JSON array
of ``[node, time]`` pairs. Floats are written with Python's shortest
round-trip repr, so ``load(save(ts)) == ts`` bit for bit. See
``docs/formats.md`` for the grammar.
"""
from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np

from .cascade import CascadeParams, TraceSet
from .errors import ParameterError, ParseError, ValidationError, VersionError

FORMAT = "traceinfer-traces"
VERSION = 1


def _header(ts: TraceSet) -> dict:
    p = ts.params
    return {
        "format": FORMAT,
        "version": VERSION,
        "lambda": p.lam,
        "p": p.p,
        "n": ts.n,
        "count": len(ts),
        "source": p.source,
        "graph_id": ts.graph_id,
    }


def dump(ts: TraceSet, fh) -> None:
    fh.write(json.dumps(_header(ts), allow_nan=False) + "\n")
    nodes = ts.nodes.tolist()
    times = ts.times.tolist()
    off = ts.offsets.tolist()
    for i in range(len(ts)):
        a, b = off[i], off[i + 1]
        fh.write(json.dumps([[nodes[j], times[j]] for j in range(a, b)], allow_nan=False,
                            separators=(",", ":")))
        fh.write("\n")


def dumps(ts: TraceSet) -> str:
    buf = io.StringIO()
    dump(ts, buf)
    return buf.getvalue()


def save(ts: TraceSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump(ts, fh)


def _check_header(h) -> tuple[CascadeParams, int, int, str | None]:
    if not isinstance(h, dict) or h.get("format") != FORMAT:
        raise ParseError(f"not a {FORMAT} file", line=1)
    if h.get("version") != VERSION:
        raise VersionError(f"unsupported trace file version {h.get('version')!r} (expected {VERSION})")
    try:
        lam, p, n, count = float(h["lambda"]), float(h["p"]), h["n"], h["count"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"incomplete header: {exc}", line=1) from None
    if not isinstance(n, int) or n < 0 or not isinstance(count, int) or count < 0:
        raise ParseError("header n and count must be non-negative integers", line=1)
    source = h.get("source")
    try:
        params = CascadeParams(lam, p, source)
    except ParameterError as exc:
        raise ValidationError(str(exc), line=1) from None
    return params, n, count, h.get("graph_id")


def loads(text: str) -> TraceSet:
    return _parse(text.splitlines())


def load(path: str | Path) -> TraceSet:
    with open(path, encoding="utf-8") as fh:
        return _parse(fh.read().splitlines())


def _parse(lines: list[str]) -> TraceSet:
    if not lines:
        raise ParseError("empty trace file", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header: {exc.msg}", line=1) from None
    params, n, count, graph_id = _check_header(header)
    body = lines[1:]
    if len(body) != count:
        raise ValidationError(f"header announces {count} traces, file has {len(body)}", line=1)
    nodes: list[int] = []
    times: list[float] = []
    offsets = [0]
    for lineno, line in enumerate(body, start=2):
        try:
            events = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed trace: {exc.msg}", line=lineno) from None
        if not isinstance(events, list) or not events:
            raise ParseError("trace must be a non-empty array of [node, time] pairs", line=lineno)
        prev = -math.inf
        seen = set()
        for k, ev in enumerate(events):
            if (not isinstance(ev, list) or len(ev) != 2 or not isinstance(ev[0], int)
                    or isinstance(ev[0], bool) or not isinstance(ev[1], (int, float))):
                raise ParseError(f"event {k} is not a [node, time] pair", line=lineno)
            v, t = ev[0], float(ev[1])
            if v < 0 or v >= n:
                raise ValidationError(f"node id {v} outside 0..{n - 1}", line=lineno)
            if v in seen:
                raise ValidationError(f"node {v} appears twice", line=lineno)
            if not math.isfinite(t):
                raise ValidationError("non-finite time", line=lineno)
            if k == 0 and t != 0.0:
                raise ValidationError("source time must be 0", line=lineno)
            if t <= prev:
                raise ValidationError(f"time {t!r} does not increase (previous {prev!r})", line=lineno)
            seen.add(v)
            prev = t
            nodes.append(v)
            times.append(t)
        offsets.append(len(nodes))
    if params.source is not None:
        starts = [nodes[o] for o in offsets[:-1]]
        bad = [i for i, s in enumerate(starts) if s != params.source]
        if bad:
            raise ValidationError(f"trace source differs from fixed source {params.source}", line=bad[0] + 2)
    return TraceSet(params, n, np.array(nodes, dtype=np.int64), np.array(times, dtype=np.float64),
                    np.array(offsets, dtype=np.int64), graph_id)
