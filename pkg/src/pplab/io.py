"""Reading and writing objects and maps.

Simplicial sets use a line-oriented text format::

    sset
    dim 0 count 3
    dim 1 count 2
      0: [;1] [;0]
      1: [;2] [;1]
    end

Each k-simplex line lists its k+1 faces d_0 .. d_k as ``[word; id]``, where
``word`` is a strictly decreasing list of degeneracy indices applied to the
nondegenerate simplex ``id`` of dimension k-1-len(word).  Maps are written as
``arrow``, ``source`` <sset>, ``target`` <sset>, ``images``, then one line
``dim k: [word; id] ...`` per degree, and ``end``.  Finite-set maps are a
single line ``finset-map <dom> <cod>: <table>``.  Chain complexes are JSON.
Every integer in JSON output is a decimal string.
"""
from __future__ import annotations

import hashlib
import json
import re

import numpy as np

from .chain.complexes import ChainComplexFP, ChainMap, FPAbelianGroup
from .core.errors import ParseError, StructuralError
from .core.finset import FinSet, FinSetMap
from .core.verdict import jsonable
from .sset.simplicial import SimplicialMap, SSet, theta_of_word, word_of

_FACE = re.compile(r"\[\s*([0-9,\s]*)\s*;\s*(\d+)\s*\]")


# ---------------------------------------------------------------------------
# simplicial sets
# ---------------------------------------------------------------------------
def _fmt_simplex(s) -> str:
    theta, _, i = s
    return "[" + ",".join(map(str, word_of(theta))) + ";" + str(i) + "]"


def sset_to_text(X: SSet) -> str:
    lines = ["sset"]
    for k, c in enumerate(X.counts):
        lines.append(f"dim {k} count {c}")
        if k:
            for i, fs in enumerate(X.faces[k]):
                lines.append(f"  {i}: " + " ".join(_fmt_simplex(s) for s in fs))
    lines.append("end")
    return "\n".join(lines) + "\n"


class _Lines:
    def __init__(self, text: str, first_line: int = 1):
        self.items = []
        for no, raw in enumerate(text.splitlines(), start=first_line):
            line = raw.split("#", 1)[0].rstrip()
            if line.strip():
                self.items.append((no, line))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def next(self, what: str):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 1
            raise ParseError(f"unexpected end of input, expected {what}", last)
        item = self.items[self.pos]
        self.pos += 1
        return item


def _parse_simplices(text: str, no: int, start_col: int, expect: int | None, degree: int):
    out = []
    pos = 0
    body = text
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        m = _FACE.match(body, pos)
        if not m:
            raise ParseError(f"expected [word; id], found {body[pos:pos + 12]!r}", no, start_col + pos + 1)
        word_s, ident = m.group(1), int(m.group(2))
        word = tuple(int(w) for w in word_s.replace(",", " ").split())
        d = degree - len(word)
        if d < 0:
            raise ParseError(f"degeneracy word {list(word)} too long for degree {degree}", no, start_col + pos + 1)
        try:
            theta = theta_of_word(word, d)
        except StructuralError as exc:
            raise ParseError(str(exc), no, start_col + pos + 1) from None
        out.append((theta, d, ident))
        pos = m.end()
    if expect is not None and len(out) != expect:
        raise ParseError(f"expected {expect} entries, found {len(out)}", no)
    return out


def _parse_sset_body(lines: _Lines) -> SSet:
    no, head = lines.next("'sset'")
    if head.strip() != "sset":
        raise ParseError(f"expected 'sset', found {head.strip()!r}", no)
    faces = []
    where = {}
    while True:
        no, line = lines.next("'dim' or 'end'")
        s = line.strip()
        if s == "end":
            break
        m = re.fullmatch(r"dim\s+(\d+)\s+count\s+(\d+)", s)
        if not m:
            raise ParseError(f"expected 'dim K count C', found {s!r}", no)
        k, c = int(m.group(1)), int(m.group(2))
        if k != len(faces):
            raise ParseError(f"dimension blocks must be consecutive, expected {len(faces)}", no)
        level = []
        for i in range(c if k else 0):
            lno, row = lines.next(f"simplex {i} of dimension {k}")
            rm = re.match(r"\s*(\d+)\s*:", row)
            if not rm or int(rm.group(1)) != i:
                raise ParseError(f"expected simplex id {i}", lno)
            level.append(tuple(_parse_simplices(row[rm.end():], lno, rm.end(), k + 1, k - 1)))
            where[(k, i)] = lno
        faces.append(level if k else [()] * c)
    for k in range(1, len(faces)):
        for n, fs in enumerate(faces[k]):
            for _, d, i in fs:
                if i >= len(faces[d]):
                    raise ParseError(f"face refers to missing simplex {i} in dimension {d}", where[(k, n)])
    try:
        return SSet(faces)
    except StructuralError as exc:
        raise ParseError(f"invalid simplicial set: {exc}") from None


def parse_sset(text: str) -> SSet:
    lines = _Lines(text)
    X = _parse_sset_body(lines)
    if lines.peek()[0] is not None:
        raise ParseError("trailing content after 'end'", lines.peek()[0])
    return X


def sset_map_to_text(f: SimplicialMap) -> str:
    out = ["arrow", "source", sset_to_text(f.dom).rstrip(), "target", sset_to_text(f.cod).rstrip(), "images"]
    for k, level in enumerate(f.images):
        out.append(f"dim {k}: " + " ".join(_fmt_simplex(s) for s in level))
    out.append("end")
    return "\n".join(out) + "\n"


def parse_arrow(text: str):
    """A simplicial map or a finite-set map."""
    lines = _Lines(text)
    no, head = lines.next("'arrow' or 'finset-map'")
    if head.strip().startswith("finset-map"):
        m = re.fullmatch(r"finset-map\s+(\d+)\s+(\d+)\s*:\s*([\d\s]*)", head.strip())
        if not m:
            raise ParseError("expected 'finset-map DOM COD: t0 t1 ...'", no)
        dom, cod = int(m.group(1)), int(m.group(2))
        table = tuple(int(x) for x in m.group(3).split())
        try:
            return FinSetMap(FinSet(dom), FinSet(cod), table)
        except StructuralError as exc:
            raise ParseError(str(exc), no) from None
    if head.strip() != "arrow":
        raise ParseError(f"expected 'arrow', found {head.strip()!r}", no)
    for word in ("source",):
        no, s = lines.next(word)
        if s.strip() != word:
            raise ParseError(f"expected {word!r}", no)
    dom = _parse_sset_body(lines)
    no, s = lines.next("'target'")
    if s.strip() != "target":
        raise ParseError("expected 'target'", no)
    cod = _parse_sset_body(lines)
    no, s = lines.next("'images'")
    if s.strip() != "images":
        raise ParseError("expected 'images'", no)
    images = []
    while True:
        no, line = lines.next("'dim' or 'end'")
        if line.strip() == "end":
            break
        m = re.match(r"\s*dim\s+(\d+)\s*:", line)
        if not m or int(m.group(1)) != len(images):
            raise ParseError(f"expected 'dim {len(images)}:'", no)
        k = len(images)
        images.append(_parse_simplices(line[m.end():], no, m.end(), dom.count(k), k))
    if len(images) != len(dom.counts):
        raise ParseError(f"images given for {len(images)} degrees, source has {len(dom.counts)}", no)
    try:
        return SimplicialMap(dom, cod, images)
    except StructuralError as exc:
        raise ParseError(f"invalid simplicial map: {exc}", no) from None


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------
def complex_to_json(C: ChainComplexFP) -> dict:
    return {
        "lo": str(C.lo),
        "hi": str(C.hi),
        "generators": {str(k): str(C.gens(k)) for k in C.degrees},
        "relations": {str(k): _mat(C.rel(k)) for k in C.degrees},
        "differentials": {str(k): _mat(C.d(k)) for k in C.degrees if k > C.lo},
    }


def _mat(M) -> list:
    M = np.asarray(M, dtype=object)
    return [[str(int(x)) for x in row] for row in M.reshape(M.shape[0], -1)] if M.size else [[] for _ in range(M.shape[0])]


def _int(x, where):
    try:
        return int(x)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: expected an integer, found {x!r}") from None


def complex_from_json(data) -> ChainComplexFP:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    try:
        gens = {_int(k, "degree"): _int(v, f"generators[{k}]") for k, v in data["generators"].items()}
        groups = {}
        for k, g in gens.items():
            rel = data.get("relations", {}).get(str(k))
            if rel and any(rel):
                M = np.array([[_int(x, f"relations[{k}]") for x in row] for row in rel], dtype=object).reshape(g, -1)
            else:
                M = None
            groups[k] = FPAbelianGroup(g, M)
        diffs = {}
        for k, rows in data.get("differentials", {}).items():
            k = _int(k, "degree")
            M = np.array([[_int(x, f"differentials[{k}]") for x in row] for row in rows], dtype=object)
            diffs[k] = M.reshape(gens.get(k - 1, 0), gens.get(k, 0))
        return ChainComplexFP(groups, diffs)
    except (KeyError, AttributeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed chain complex: {exc}") from None


# ---------------------------------------------------------------------------
# generic JSON views
# ---------------------------------------------------------------------------
def object_to_json(X) -> dict:
    if isinstance(X, FinSet):
        return {"kind": "finset", "size": str(X.size)}
    if isinstance(X, SSet):
        return {"kind": "sset", "counts": [str(c) for c in X.counts], "text": sset_to_text(X)}
    if isinstance(X, ChainComplexFP):
        return {"kind": "chain", **complex_to_json(X)}
    raise StructuralError(f"cannot serialize {type(X).__name__}")


def map_to_json(f) -> dict:
    if isinstance(f, FinSetMap):
        return {"kind": "finset", "dom": str(f.dom.size), "cod": str(f.cod.size), "table": [str(x) for x in f.table]}
    if isinstance(f, SimplicialMap):
        return {
            "kind": "sset",
            "dom_counts": [str(c) for c in f.dom.counts],
            "cod_counts": [str(c) for c in f.cod.counts],
            "images": [[_fmt_simplex(s) for s in level] for level in f.images],
        }
    if isinstance(f, ChainMap):
        return {"kind": "chain", "mats": {str(k): _mat(f.mat(k)) for k in f.dom.degrees}}
    raise StructuralError(f"cannot serialize {type(f).__name__}")


def object_digest(X) -> dict:
    data = json.dumps(jsonable(object_to_json(X)), sort_keys=True)
    out = {"sha256": hashlib.sha256(data.encode()).hexdigest()}
    if isinstance(X, SSet):
        out["counts"] = [str(c) for c in X.counts]
    elif isinstance(X, FinSet):
        out["size"] = str(X.size)
    return out


def dumps(data) -> str:
    """Canonical JSON text: sorted keys, integers as strings, trailing newline."""
    return json.dumps(jsonable(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
