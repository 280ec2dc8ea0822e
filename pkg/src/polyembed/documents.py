"""JSON documents for losses, surrogates and link artifacts.

Every number is written as a string ``"num/den"`` (or an integer string) so
that no downstream tool can silently turn it into a float.  Documents carry
``"format": 1``.  Reading rejects JSON numbers where a rational is expected.
"""
from __future__ import annotations

import json
from pathlib import Path

from .discrete import DiscreteLoss
from .errors import ParseError
from .geometry import Polyhedron
from .rational import Q, fmt
from .surrogate import OptimalSetFamily, PolyhedralLoss

__all__ = [
    "FORMAT",
    "dump_discrete",
    "dump_surrogate",
    "dump_link",
    "load_document",
    "dumps",
    "loads",
    "read",
    "write",
]

FORMAT = 1


def _rat(x) -> str:
    return fmt(x)


def _parse_rat(x, where: str):
    if not isinstance(x, str):
        raise ParseError(f"{where}: rationals must be strings, got {type(x).__name__}")
    try:
        return Q(x)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _parse_rats(xs, where: str) -> tuple:
    if not isinstance(xs, list):
        raise ParseError(f"{where}: expected a list")
    return tuple(_parse_rat(x, where) for x in xs)


def _field(doc: dict, key: str, kind=None):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return v


def dump_discrete(loss: DiscreteLoss) -> dict:
    return {
        "format": FORMAT,
        "kind": "discrete",
        "outcomes": list(loss.outcomes),
        "reports": [{"name": r, "loss": [_rat(x) for x in row]} for r, row in zip(loss.reports, loss.matrix)],
    }


def dump_surrogate(L: PolyhedralLoss) -> dict:
    return {
        "format": FORMAT,
        "kind": "surrogate",
        "dim": L.dim,
        "outcomes": list(L.outcomes),
        "pieces": [[{"slope": [_rat(x) for x in a], "offset": _rat(c)} for a, c in plist] for plist in L.pieces],
    }


def _dump_polyhedron(P: Polyhedron) -> dict:
    return {
        "inequalities": [[_rat(x) for x in a] + [_rat(b)] for a, b in P.inequalities],
        "equalities": [[_rat(x) for x in a] + [_rat(b)] for a, b in P.equalities],
    }


def _load_polyhedron(doc: dict, dim: int) -> Polyhedron:
    rows = {}
    for key in ("inequalities", "equalities"):
        out = []
        for row in _field(doc, key, list):
            vals = _parse_rats(row, key)
            if len(vals) != dim + 1:
                raise ParseError(f"{key}: row of length {len(vals)}, expected {dim + 1}")
            out.append((vals[:-1], vals[-1]))
        rows[key] = out
    return Polyhedron(dim, rows["inequalities"], rows["equalities"])


def dump_link(art) -> dict:
    """The link artifact: surrogate, optimal sets with their report sets, norm and radius."""
    return {
        "format": FORMAT,
        "kind": "link",
        "surrogate": dump_surrogate(art.surrogate),
        "reports": list(art.reports),
        "mode": art.mode,
        "norm": art.norm,
        "epsilon": _rat(art.epsilon),
        "epsilon_max": None if art.epsilon_max is None else ("inf" if art.epsilon_max == float("inf") else _rat(art.epsilon_max)),
        "members": [
            dict(_dump_polyhedron(U), reports=[r for r in art.reports if r in R])
            for U, R in zip(art.family.members, art.report_sets)
        ],
    }


def _load_discrete(doc: dict) -> DiscreteLoss:
    outcomes = _field(doc, "outcomes", list)
    names, rows = [], []
    for entry in _field(doc, "reports", list):
        if not isinstance(entry, dict):
            raise ParseError("each report must be an object with 'name' and 'loss'")
        names.append(str(_field(entry, "name")))
        rows.append(_parse_rats(_field(entry, "loss", list), f"report {names[-1]!r}"))
    try:
        return DiscreteLoss(outcomes, names, rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _load_surrogate(doc: dict) -> PolyhedralLoss:
    dim = _field(doc, "dim", int)
    outcomes = _field(doc, "outcomes", list)
    pieces = []
    for plist in _field(doc, "pieces", list):
        cur = []
        for piece in plist:
            cur.append((_parse_rats(_field(piece, "slope", list), "slope"), _parse_rat(_field(piece, "offset"), "offset")))
        pieces.append(cur)
    try:
        return PolyhedralLoss(dim, outcomes, pieces)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _load_link(doc: dict):
    from .links import LinkArtifact

    L = _load_surrogate(_field(doc, "surrogate", dict))
    reports = tuple(_field(doc, "reports", list))
    members, sets = [], []
    for m in _field(doc, "members", list):
        members.append(_load_polyhedron(m, L.dim))
        sets.append(frozenset(_field(m, "reports", list)))
    norm = _field(doc, "norm", str)
    if norm not in ("inf", "l1"):
        raise ParseError(f"unknown norm {norm!r}")
    eps = _parse_rat(_field(doc, "epsilon"), "epsilon")
    raw = doc.get("epsilon_max")
    eps_max = None if raw is None else (float("inf") if raw == "inf" else _parse_rat(raw, "epsilon_max"))
    family = OptimalSetFamily(tuple(members), (), None, L)
    art = LinkArtifact(L, None, family, reports, tuple(sets), _field(doc, "mode", str), norm, None, eps_max, (), None)
    return art.with_epsilon(eps)


_LOADERS = {"discrete": _load_discrete, "surrogate": _load_surrogate, "link": _load_link}


def load_document(doc):
    if not isinstance(doc, dict):
        raise ParseError("a document must be a JSON object")
    if doc.get("format") != FORMAT:
        raise ParseError(f"unsupported document format {doc.get('format')!r}")
    kind = doc.get("kind")
    if kind not in _LOADERS:
        raise ParseError(f"unknown document kind {kind!r}")
    return _LOADERS[kind](doc)


def _dump_any(obj) -> dict:
    if isinstance(obj, DiscreteLoss):
        return dump_discrete(obj)
    if isinstance(obj, PolyhedralLoss):
        return dump_surrogate(obj)
    return dump_link(obj)


def dumps(obj) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_dump_any(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return load_document(doc)


def read(path):
    return loads(Path(path).read_text(encoding="utf-8"))


def write(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
