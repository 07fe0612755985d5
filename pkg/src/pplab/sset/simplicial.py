"""Finitely generated simplicial sets in Eilenberg–Zilber normal form.

A simplex of degree n is a triple ``(theta, d, i)``: ``theta`` is a monotone
surjection [n] -> [d] stored as a tuple of length n+1, and ``(d, i)`` names the
i-th nondegenerate d-simplex.  Nondegenerate simplices carry the identity
surjection.  The degeneracy word of ``theta`` is the strictly decreasing list
of positions j with theta(j) = theta(j+1).
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

from ..core.errors import StructuralError

Simplex = tuple  # (theta, d, i)


def ident(d: int) -> tuple:
    return tuple(range(d + 1))


def nondeg(d: int, i: int) -> Simplex:
    return (ident(d), d, i)


def face_op(n: int, j: int) -> tuple:
    """δ_j: [n-1] -> [n], skipping j."""
    return tuple(v if v < j else v + 1 for v in range(n))


def degeneracy_op(n: int, j: int) -> tuple:
    """σ_j: [n+1] -> [n], hitting j twice."""
    return tuple(v if v <= j else v - 1 for v in range(n + 2))


def compose_ops(a: Sequence[int], b: Sequence[int]) -> tuple:
    """a∘b for monotone maps stored as tuples."""
    return tuple(a[x] for x in b)


def word_of(theta: Sequence[int]) -> tuple:
    return tuple(j for j in reversed(range(len(theta) - 1)) if theta[j] == theta[j + 1])


def theta_of_word(word: Sequence[int], d: int) -> tuple:
    word = list(word)
    if any(a <= b for a, b in zip(word, word[1:])):
        raise StructuralError(f"degeneracy word {word} is not strictly decreasing")
    n = d + len(word)
    if word and (word[-1] < 0 or word[0] >= n):
        raise StructuralError(f"degeneracy word {word} out of range for degree {n}")
    rep = set(word)
    theta = [0]
    for j in range(n):
        theta.append(theta[-1] + (0 if j in rep else 1))
    return tuple(theta)


def surjections(n: int, d: int):
    """All monotone surjections [n] -> [d], lexicographically."""
    out = []
    for jumps in itertools.combinations(range(n), d):
        js = set(jumps)
        theta = [0]
        for v in range(n):
            theta.append(theta[-1] + (1 if v in js else 0))
        out.append(tuple(theta))
    return sorted(out)


def _is_surjection(theta, d) -> bool:
    return bool(theta) and theta[0] == 0 and theta[-1] == d and all(b - a in (0, 1) for a, b in zip(theta, theta[1:]))


class SSet:
    """Nondegenerate simplices per degree with their faces.

    ``faces[k][i]`` is the tuple of the k+1 faces of the i-th nondegenerate
    k-simplex (empty for vertices).  ``labels`` are optional display names.
    """

    def __init__(self, faces: Sequence[Sequence[Sequence[Simplex]]], labels=None, check: bool = True):
        faces = [tuple(tuple(tuple(s) for s in fs) for fs in level) for level in faces]
        while faces and not faces[-1]:
            faces.pop()
        self.faces: tuple = tuple(tuple(tuple((tuple(t), d, i) for t, d, i in fs) for fs in level) for level in faces)
        self.counts = tuple(len(level) for level in self.faces)
        self.labels = labels
        self._memo: dict = {}
        if check:
            self.check()

    @property
    def engine(self):
        from .engine import SSET

        return SSET

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def count(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def cells(self):
        """All nondegenerate simplices as (k, i)."""
        return [(k, i) for k, c in enumerate(self.counts) for i in range(c)]

    def n_cells(self) -> int:
        return sum(self.counts)

    def label(self, k: int, i: int):
        if self.labels is None:
            return (k, i)
        return self.labels[k][i]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts))

    # -- simplicial operators ----------------------------------------------
    def act(self, alpha: Sequence[int], s: Simplex) -> Simplex:
        """alpha^*(s) for a monotone alpha: [m] -> [n], n = degree of s."""
        theta, d, i = s
        if len(theta) == 0:
            raise StructuralError("malformed simplex")
        comp = tuple(theta[a] for a in alpha)
        return self._restrict(comp, d, i)

    def _restrict(self, comp: tuple, d: int, i: int) -> Simplex:
        key = (comp, d, i)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        image = set(comp)
        if len(image) == d + 1:
            out = (comp, d, i)
        else:
            j = next(v for v in range(d + 1) if v not in image)
            t1, d1, i1 = self.faces[d][i][j]
            comp1 = tuple(v - (v > j) for v in comp)
            out = self._restrict(tuple(t1[v] for v in comp1), d1, i1)
        self._memo[key] = out
        return out

    def face(self, j: int, s: Simplex) -> Simplex:
        theta, d, i = s
        if theta == ident(d):
            return self.faces[d][i][j]
        return self.act(face_op(len(theta) - 1, j), s)

    def degeneracy(self, j: int, s: Simplex) -> Simplex:
        return self.act(degeneracy_op(len(s[0]) - 1, j), s)

    def all_simplices(self, k: int) -> list:
        """Every k-simplex, degenerate ones included, in a fixed order."""
        key = ("all", k)
        hit = self._memo.get(key)
        if hit is None:
            hit = [(theta, d, i) for d in range(min(k, self.dim) + 1) for theta in surjections(k, d) for i in range(self.count(d))]
            self._memo[key] = hit
        return hit

    def simplex_index(self, k: int) -> dict:
        key = ("index", k)
        hit = self._memo.get(key)
        if hit is None:
            hit = {s: n for n, s in enumerate(self.all_simplices(k))}
            self._memo[key] = hit
        return hit

    def vertices_of(self, s: Simplex) -> tuple:
        """Vertex indices of a simplex, in order."""
        n = len(s[0]) - 1
        return tuple(self.act((v,), s)[2] for v in range(n + 1))

    # -- validation ---------------------------------------------------------
    def check(self) -> None:
        if self.counts and self.counts[0] == 0 and any(self.counts):
            raise StructuralError("simplices without vertices")
        for k, level in enumerate(self.faces):
            for i, fs in enumerate(level):
                if len(fs) != (k + 1 if k else 0):
                    raise StructuralError(f"simplex ({k},{i}) has {len(fs)} faces, expected {k + 1 if k else 0}")
                for j, (theta, d, t) in enumerate(fs):
                    if len(theta) != k or not _is_surjection(theta, d) or d >= k or not 0 <= t < self.count(d):
                        raise StructuralError(f"face {j} of ({k},{i}) is malformed: {(theta, d, t)}")
        for k in range(2, len(self.faces)):
            for i in range(self.counts[k]):
                x = nondeg(k, i)
                for a in range(k + 1):
                    for b in range(a + 1, k + 1):
                        lhs = self.face(a, self.face(b, x))
                        rhs = self.face(b - 1, self.face(a, x))
                        if lhs != rhs:
                            raise StructuralError(f"simplicial identity d{a}d{b} = d{b - 1}d{a} fails on ({k},{i})")

    def check_identities_upto(self, top: int) -> None:
        """All simplicial identities on every simplex of degree <= ``top``,
        degenerate ones included."""
        for n in range(0, top + 1):
            for x in self.all_simplices(n):
                for j in range(n + 1 if n >= 2 else 0):
                    for i in range(j):
                        if self.face(i, self.face(j, x)) != self.face(j - 1, self.face(i, x)):
                            raise StructuralError(f"d{i}d{j} = d{j - 1}d{i} fails on {x}")
                for j in range(n + 1):
                    sx = self.degeneracy(j, x)
                    for i in range(n + 2):
                        if i < j:
                            expect = self.degeneracy(j - 1, self.face(i, x))
                        elif i in (j, j + 1):
                            expect = x
                        else:
                            expect = self.degeneracy(j, self.face(i - 1, x))
                        if self.face(i, sx) != expect:
                            raise StructuralError(f"d{i}s{j} identity fails on {x}")
                    for i in range(j + 1):
                        if self.degeneracy(i, sx) != self.degeneracy(j + 1, self.degeneracy(i, x)):
                            raise StructuralError(f"s{i}s{j} = s{j + 1}s{i} fails on {x}")

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        return self is other or (isinstance(other, SSet) and self.faces == other.faces)

    @cached_property
    def _hash(self):
        return hash(self.faces)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SSet(counts={self.counts})"


class SimplicialMap:
    """``images[k][i]`` is the image of the i-th nondegenerate k-simplex."""

    def __init__(self, dom: SSet, cod: SSet, images: Sequence[Sequence[Simplex]], check: bool = True):
        self.dom = dom
        self.cod = cod
        imgs = [tuple((tuple(t), d, i) for t, d, i in level) for level in images]
        while len(imgs) < len(dom.counts):
            imgs.append(())
        self.images = tuple(imgs[: len(dom.counts)])
        if check:
            self.check()

    @property
    def engine(self):
        from .engine import SSET

        return SSET

    def __call__(self, s: Simplex) -> Simplex:
        # images are normal forms over nondegenerate simplices, so the
        # composite surjection is already normal
        theta, d, i = s
        t2, d2, j = self.images[d][i]
        return (tuple(t2[v] for v in theta), d2, j)

    def check(self) -> None:
        dom, cod = self.dom, self.cod
        for k, c in enumerate(dom.counts):
            if len(self.images[k]) != c:
                raise StructuralError(f"map lists {len(self.images[k])} images in degree {k}, expected {c}")
            for i, (theta, d, t) in enumerate(self.images[k]):
                if len(theta) != k + 1 or not _is_surjection(theta, d) or not 0 <= t < cod.count(d):
                    raise StructuralError(f"image of ({k},{i}) is not a {k}-simplex of the codomain")
        for k in range(1, len(dom.counts)):
            for i in range(dom.counts[k]):
                y = self.images[k][i]
                for j in range(k + 1):
                    if self(dom.faces[k][i][j]) != cod.face(j, y):
                        raise StructuralError(f"map does not commute with face {j} on ({k},{i})")

    def is_nondegenerate_injective(self) -> bool:
        seen = set()
        for k, level in enumerate(self.images):
            for theta, d, i in level:
                if d != k or (d, i) in seen:
                    return False
                seen.add((d, i))
        return True

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialMap)
            and self.images == other.images
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"SimplicialMap({self.dom!r} -> {self.cod!r})"


def identity_map(X: SSet) -> SimplicialMap:
    return SimplicialMap(X, X, [[nondeg(k, i) for i in range(c)] for k, c in enumerate(X.counts)], check=False)


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    if not f.cod == g.dom:
        raise StructuralError("cannot compose: codomain and domain differ")
    gi = g.images
    images = []
    for level in f.images:
        row = []
        for theta, d, i in level:
            t2, d2, j = gi[d][i]
            row.append((tuple(t2[v] for v in theta), d2, j))
        images.append(row)
    return SimplicialMap(f.dom, g.cod, images, check=False)


def sset_from_vertex_lists(simplices: dict[int, list[tuple]], labels=True) -> SSet:
    """Build an ordered simplicial complex from vertex tuples per degree.

    Every face of a listed simplex must be listed.  Vertices are numbered by
    their position in ``simplices[0]``.
    """
    dims = sorted(simplices)
    top = dims[-1] if dims else -1
    index = []
    for k in range(top + 1):
        index.append({tuple(s): i for i, s in enumerate(simplices.get(k, []))})
    faces = []
    for k in range(top + 1):
        level = []
        for s in simplices.get(k, []):
            if k == 0:
                level.append(())
                continue
            fs = []
            for j in range(k + 1):
                t = tuple(s[:j]) + tuple(s[j + 1 :])
                if t not in index[k - 1]:
                    raise StructuralError(f"face {t} of {s} is missing")
                fs.append((ident(k - 1), k - 1, index[k - 1][t]))
            level.append(tuple(fs))
        faces.append(level)
    lab = [list(map(tuple, simplices.get(k, []))) for k in range(top + 1)] if labels else None
    return SSet(faces, labels=lab)
