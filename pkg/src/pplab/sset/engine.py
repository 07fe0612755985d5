"""Simplicial sets as an engine (cartesian monoidal structure)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..core.engine import Coequalizer, Coinvariants, Coproduct, Engine
from ..core.errors import EngineMismatch, StructuralError
from ..core.finset import quotient_labels
from .simplicial import SimplicialMap, SSet, compose, compose_ops, ident, identity_map, nondeg


@lru_cache(maxsize=None)
def lattice_paths(dims: tuple) -> tuple:
    """Strictly increasing lattice paths from 0 to ``dims``, as per-coordinate
    vertex sequences (one monotone surjection per coordinate)."""
    r = len(dims)
    out = []

    def walk(point, path):
        if point == dims:
            out.append(tuple(tuple(p[j] for p in path) for j in range(r)))
            return
        free = [j for j in range(r) if point[j] < dims[j]]
        for size in range(1, len(free) + 1):
            for step in itertools.combinations(free, size):
                nxt = tuple(point[j] + (j in step) for j in range(r))
                walk(nxt, path + [nxt])

    start = tuple(0 for _ in dims)
    walk(start, [start])
    return tuple(sorted(out))


@dataclass
class ProductData:
    factors: tuple
    comps: tuple  # degree -> tuple of component tuples
    lookup: dict  # component tuple -> index within its degree

    def element(self, comps) -> tuple:
        """Normal form (theta, k, idx) of the product simplex with these components."""
        comps = tuple(comps)
        hit = self.lookup.get(comps)
        if hit is not None:
            return (ident(len(comps[0][0]) - 1), len(comps[0][0]) - 1, hit)
        thetas = [c[0] for c in comps]
        n = len(thetas[0]) - 1
        cols = list(zip(*thetas))
        sigma = [0]
        for v in range(n):
            sigma.append(sigma[-1] + (cols[v] != cols[v + 1]))
        k = sigma[-1]
        keep = [v for v in range(n + 1) if v == 0 or sigma[v] != sigma[v - 1]]
        reduced = tuple((tuple(t[v] for v in keep), d, i) for t, d, i in comps)
        return (tuple(sigma), k, self.lookup[reduced])


def _build_product(factors) -> tuple[SSet, ProductData]:
    per_degree: dict[int, list] = {}
    for cells in itertools.product(*(X.cells() for X in factors)):
        dims = tuple(k for k, _ in cells)
        for thetas in lattice_paths(dims):
            k = len(thetas[0]) - 1
            per_degree.setdefault(k, []).append(tuple((t, d, i) for t, (d, i) in zip(thetas, cells)))
    top = max(per_degree) if per_degree else -1
    comps = tuple(tuple(sorted(per_degree.get(k, []))) for k in range(top + 1))
    lookup = {c: i for level in comps for i, c in enumerate(level)}
    data = ProductData(tuple(factors), comps, lookup)
    faces = []
    for k, level in enumerate(comps):
        row = []
        for c in level:
            if k == 0:
                row.append(())
                continue
            row.append(
                tuple(
                    data.element(tuple(X._restrict(t[:j] + t[j + 1 :], d, i) for X, (t, d, i) in zip(factors, c)))
                    for j in range(k + 1)
                )
            )
        faces.append(row)
    return SSet(faces, check=False), data


_CACHE_LIMIT = 4096


class SSetEngine(Engine):
    name = "sset"

    def __init__(self):
        self._products = {}
        self._tensor_maps = {}

    def _check(self, *xs):
        for x in xs:
            if not isinstance(x, (SSet, SimplicialMap)):
                raise EngineMismatch(f"sset engine got {type(x).__name__}")

    # -- category -----------------------------------------------------------
    def identity(self, X):
        return identity_map(X)

    def compose(self, g, f):
        self._check(g, f)
        return compose(g, f)

    def equal(self, f, g):
        self._check(f, g)
        return f == g

    def same_object(self, X, Y):
        return X == Y

    def is_mono(self, f):
        return f.is_nondegenerate_injective()

    def is_iso(self, f):
        return self.is_mono(f) and f.dom.counts == f.cod.counts

    def inverse(self, f):
        if not self.is_iso(f):
            raise StructuralError("map is not invertible")
        images = []
        for k, level in enumerate(f.images):
            row = [None] * f.cod.count(k)
            for i, (_, _, j) in enumerate(level):
                row[j] = nondeg(k, i)
            images.append(row)
        return SimplicialMap(f.cod, f.dom, images, check=False)

    def find_isomorphism(self, X, Y):
        return find_isomorphism(X, Y)

    # -- colimits -----------------------------------------------------------
    def initial(self):
        return SSet([])

    def initial_map(self, X):
        return SimplicialMap(self.initial(), X, [], check=False)

    def coproduct(self, objs):
        objs = list(objs)
        self._check(*objs)
        top = max((X.dim for X in objs), default=-1)
        offsets = [[0] * (top + 1)]
        for X in objs:
            offsets.append([offsets[-1][k] + X.count(k) for k in range(top + 1)])
        faces = [[] for _ in range(top + 1)]
        for n, X in enumerate(objs):
            off = offsets[n]
            for k, level in enumerate(X.faces):
                for fs in level:
                    faces[k].append(tuple((t, d, i + off[d]) for t, d, i in fs))
        S = SSet(faces, check=False)
        legs = [
            SimplicialMap(X, S, [[nondeg(k, i + offsets[n][k]) for i in range(c)] for k, c in enumerate(X.counts)], check=False)
            for n, X in enumerate(objs)
        ]
        return Coproduct(self, objs, S, legs, data=offsets)

    def copair(self, coprod, maps, target):
        for f, X in zip(maps, coprod.objs):
            if not (f.dom == X and f.cod == target):
                raise StructuralError("copairing maps do not match the summands")
        S = coprod.obj
        images = [[] for _ in S.counts]
        for f in maps:
            for k, level in enumerate(f.images):
                images[k].extend(level)
        return SimplicialMap(S, target, images, check=False)

    def coequalizer(self, f, g):
        self._check(f, g)
        if not (f.dom == g.dom and f.cod == g.cod):
            raise StructuralError("coequalizer needs a parallel pair")
        Q, proj, reps = _coequalize_nondegenerate(f, g)
        return Coequalizer(self, f, g, Q, proj, reps)

    def coequalizer_factor(self, coeq, h):
        reps = coeq.data
        return SimplicialMap(coeq.obj, h.cod, [[h.images[k][i] for i in level] for k, level in enumerate(reps)], check=False)

    def coinvariants(self, action):
        """Orbits of nondegenerate simplices (the action is by automorphisms)."""
        X = action.obj
        orbit = []
        reps = []
        for k, c in enumerate(X.counts):
            pairs = []
            for m in action.maps:
                for i in range(c):
                    theta, d, j = m.images[k][i]
                    if d != k:
                        raise StructuralError("group element does not act by an automorphism")
                    pairs.append((i, j))
            lab, n = quotient_labels(c, pairs)
            orbit.append(lab)
            first = {}
            for i, o in enumerate(lab):
                first.setdefault(o, i)
            reps.append([first[o] for o in range(n)])
        faces = [
            [tuple((t, d, orbit[d][i]) for t, d, i in X.faces[k][r]) for r in reps[k]] for k in range(len(reps))
        ]
        Q = SSet(faces, check=False)
        proj = SimplicialMap(X, Q, [[nondeg(k, o) for o in orbit[k]] for k in range(len(orbit))], check=False)

        def factor(h):
            return SimplicialMap(Q, h.cod, [[h.images[k][r] for r in reps[k]] for k in range(len(reps))], check=False)

        return Coinvariants(self, action, Q, proj, factor)

    def acts_freely(self, action):
        return not fixed_cells(action)

    # -- monoidal -----------------------------------------------------------
    def unit(self):
        return SSet([[()]])

    def product_data(self, objs) -> ProductData:
        self.tensor(objs)
        return self._products[tuple(objs)][2]

    def tensor(self, objs):
        objs = list(objs)
        self._check(*objs)
        if len(objs) == 1:
            return objs[0]
        if not objs:
            return self.unit()
        key = tuple(objs)
        hit = self._products.get(key)
        if hit is None:
            P, data = _build_product(objs)
            hit = (tuple(objs), P, data)
            if len(self._products) > _CACHE_LIMIT:
                self._products.clear()
            self._products[key] = hit
        return hit[1]

    def tensor_maps(self, maps):
        self._check(*maps)
        if len(maps) == 1:
            return maps[0]
        if not maps:
            return self.identity(self.unit())
        key = tuple(maps)
        hit = self._tensor_maps.get(key)
        if hit is not None:
            return hit
        dom = self.tensor([f.dom for f in maps])
        cod = self.tensor([f.cod for f in maps])
        dd = self.product_data([f.dom for f in maps])
        cd = self.product_data([f.cod for f in maps])
        images = [[cd.element(tuple(f(s) for f, s in zip(maps, c))) for c in level] for level in dd.comps]
        out = SimplicialMap(dom, cod, images, check=False)
        if len(self._tensor_maps) > _CACHE_LIMIT:
            self._tensor_maps.clear()
        self._tensor_maps[key] = out
        return out

    def permute(self, objs, perm):
        objs = list(objs)
        if len(objs) == 1:
            return self.identity(objs[0])
        target = [None] * len(objs)
        for i, p in enumerate(perm):
            target[p] = objs[i]
        dom, cod = self.tensor(objs), self.tensor(target)
        dd, cd = self.product_data(objs), self.product_data(target)
        images = []
        for level in dd.comps:
            row = []
            for c in level:
                out = [None] * len(c)
                for i, p in enumerate(perm):
                    out[p] = c[i]
                row.append(cd.element(out))
            images.append(row)
        return SimplicialMap(dom, cod, images, check=False)

    def flatten(self, groups):
        groups = [list(g) for g in groups]
        inner = [self.tensor(g) for g in groups]
        dom = self.tensor(inner)
        flat = [X for g in groups for X in g]
        cod = self.tensor(flat)
        inner_data = [self.product_data(g) if len(g) > 1 else None for g in groups]
        if len(inner) == 1:
            dom_comps = [[(nondeg(k, i),) for i in range(c)] for k, c in enumerate(dom.counts)]
        else:
            dom_comps = self.product_data(inner).comps
        cd = self.product_data(flat) if len(flat) > 1 else None
        images = []
        for level in dom_comps:
            row = []
            for c in level:
                parts = []
                for (theta, d, i), data in zip(c, inner_data):
                    if data is None:
                        parts.append((theta, d, i))
                    else:
                        parts.extend((compose_ops(t, theta), dj, ij) for t, dj, ij in data.comps[d][i])
                row.append(cd.element(parts) if cd else parts[0])
            images.append(row)
        return SimplicialMap(dom, cod, images, check=False)

    def projection(self, objs, i):
        objs = list(objs)
        if len(objs) == 1:
            return self.identity(objs[0])
        P = self.tensor(objs)
        data = self.product_data(objs)
        return SimplicialMap(P, objs[i], [[c[i] for c in level] for level in data.comps], check=False)

    def pairing(self, maps):
        """(f_1, ..., f_r): Z -> X_1 × ... × X_r."""
        if len(maps) == 1:
            return maps[0]
        dom = maps[0].dom
        cod = self.tensor([f.cod for f in maps])
        cd = self.product_data([f.cod for f in maps])
        images = [[cd.element(tuple(f(nondeg(k, i)) for f in maps)) for i in range(c)] for k, c in enumerate(dom.counts)]
        return SimplicialMap(dom, cod, images, check=False)

    # -- mono-mode hooks ----------------------------------------------------
    def image_cells(self, f):
        return {(d, i) for level in f.images for _, d, i in level}

    def subobject(self, X, cells):
        return subobject(X, cells)

    def lift(self, h, m):
        inv = self.preimage_table(m)
        try:
            images = [[(t, d, inv[(d, i)][1]) for t, d, i in level] for level in h.images]
        except KeyError:
            raise StructuralError("map does not factor through the subobject") from None
        return SimplicialMap(h.dom, m.dom, images, check=False)

    def cell_image(self, f, cell):
        """Image of a nondegenerate cell, or None when it lands on a degenerate simplex."""
        theta, d, i = f.images[cell[0]][cell[1]]
        return (d, i) if d == cell[0] else None

    def preimage_table(self, mono):
        return {(d, i): (k, j) for k, level in enumerate(mono.images) for j, (_, d, i) in enumerate(level)}

    def eval_cell(self, f, cell):
        k, i = cell
        return f.images[k][i]

    def assemble(self, dom, cod, images):
        return SimplicialMap(dom, cod, [[images[(k, i)] for i in range(c)] for k, c in enumerate(dom.counts)], check=False)

    def cells(self, X):
        return X.cells()


def _coequalize_nondegenerate(f: SimplicialMap, g: SimplicialMap):
    """Coequalizer built degree by degree from the nondegenerate simplices of
    the common source only.  Identifications of degenerate simplices are
    already decided by the lower degrees, so a degenerate image is replaced
    by its normal form in the partial quotient."""
    X, A = f.cod, f.dom
    nf = []  # degree -> X nondegenerate index -> normal form in the quotient
    reps = []
    faces = []

    def lower(s):
        theta, d, i = s
        t2, d2, j = nf[d][i]
        return (tuple(t2[v] for v in theta), d2, j)

    for k in range(X.dim + 1):
        c = X.count(k)
        tokens = {}

        def node(s):
            if s[1] == k:
                return s[2]
            return tokens.setdefault(lower(s), c + len(tokens))

        pairs = [(node(f.images[k][a]), node(g.images[k][a])) for a in range(A.count(k))]
        lab, _ = quotient_labels(c + len(tokens), pairs)
        collapsed = {}
        for tok, at in tokens.items():
            prev = collapsed.setdefault(lab[at], tok)
            if prev != tok:
                raise StructuralError(f"inconsistent identification of degenerate simplices in degree {k}")
        row = []
        rep = []
        new_index = {}
        for i in range(c):
            cls = lab[i]
            if cls in collapsed:
                row.append(collapsed[cls])
                continue
            if cls not in new_index:
                new_index[cls] = len(rep)
                rep.append(i)
            row.append(nondeg(k, new_index[cls]))
        nf.append(row)
        reps.append(rep)
        faces.append([()] * len(rep) if k == 0 else [tuple(lower(fc) for fc in X.faces[k][i]) for i in rep])
    while faces and not faces[-1]:
        faces.pop()
    Q = SSet(faces, check=False)
    proj = SimplicialMap(X, Q, nf, check=False)
    return Q, proj, reps


def coequalizer_by_all_simplices(f: SimplicialMap, g: SimplicialMap):
    """Reference coequalizer relating every simplex, degenerate or not."""
    X, A = f.cod, f.dom
    labels = []
    for k in range(X.dim + 1):
        idx = X.simplex_index(k)
        pairs = [(idx[f(a)], idx[g(a)]) for a in A.all_simplices(k)]
        labels.append(quotient_labels(len(idx), pairs))
    return _quotient(SSET, X, labels, lambda Q, proj, data: Coequalizer(SSET, f, g, Q, proj, data))


def _quotient(engine, X: SSet, labels, make):
    """Renormalize a degreewise quotient of all simplices of X up to dim X."""
    top = X.dim
    nf = []  # degree -> class -> normal form in the quotient
    reps = []  # degree -> new nondegenerate index -> X index
    faces = []
    for k in range(top + 1):
        lab, ncls = labels[k]
        simp = X.all_simplices(k)
        degenerate_member = {}
        for n, (theta, d, i) in enumerate(simp):
            if d < k:
                degenerate_member.setdefault(lab[n], (theta, d, i))
        new_index = {}
        rep = []
        for n, (theta, d, i) in enumerate(simp):
            c = lab[n]
            if d == k and c not in degenerate_member and c not in new_index:
                new_index[c] = len(rep)
                rep.append(i)
        idx_prev = X.simplex_index(k - 1) if k else None
        row = [None] * ncls
        for c in range(ncls):
            if c in new_index:
                row[c] = (ident(k), k, new_index[c])
            else:
                theta, d, i = degenerate_member[c]
                t2, d2, i2 = nf[d][labels[d][0][X.simplex_index(d)[nondeg(d, i)]]]
                row[c] = (compose_ops(t2, theta), d2, i2)
        nf.append(row)
        reps.append(rep)
        if k == 0:
            faces.append([() for _ in rep])
        else:
            lab_prev = labels[k - 1][0]
            faces.append(
                [tuple(nf[k - 1][lab_prev[idx_prev[fc]]] for fc in X.faces[k][i]) for i in rep]
            )
    Q = SSet(faces, check=False)
    images = []
    for k in range(top + 1):
        idx = X.simplex_index(k)
        images.append([nf[k][labels[k][0][idx[nondeg(k, i)]]] for i in range(X.count(k))])
    proj = SimplicialMap(X, Q, images, check=False)
    return make(Q, proj, reps)


def fixed_cells(action) -> list:
    """(group element, cell) pairs where a nontrivial element fixes a nondegenerate simplex."""
    out = []
    for g, m in enumerate(action.maps):
        if g == action.group.identity:
            continue
        for k, level in enumerate(m.images):
            for i, s in enumerate(level):
                if s == nondeg(k, i):
                    out.append((g, (k, i)))
    return out


def closure(X: SSet, cells) -> set:
    """Smallest subcomplex containing the given nondegenerate cells."""
    out = set()
    stack = list(cells)
    while stack:
        k, i = stack.pop()
        if (k, i) in out:
            continue
        out.add((k, i))
        for _, d, j in X.faces[k][i] if k else ():
            stack.append((d, j))
    return out


def subobject(X: SSet, cells):
    """The subcomplex on ``cells`` (must be face-closed) with its inclusion."""
    cells = set(cells)
    if closure(X, cells) != cells:
        raise StructuralError("cell set is not closed under faces")
    per = [sorted(i for k, i in cells if k == kk) for kk in range(X.dim + 1)]
    new = [{i: n for n, i in enumerate(level)} for level in per]
    faces = [[tuple((t, d, new[d][j]) for t, d, j in X.faces[k][i]) for i in level] for k, level in enumerate(per)]
    labels = [[X.labels[k][i] for i in level] for k, level in enumerate(per)] if X.labels else None
    S = SSet(faces, labels=labels, check=False)
    incl = SimplicialMap(S, X, [[nondeg(k, i) for i in level] for k, level in enumerate(per)], check=False)
    return S, incl


def image(f: SimplicialMap):
    return subobject(f.cod, SSET.image_cells(f))


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------
def _refined_colors(X: SSet, Y: SSet, xmark=None, ymark=None):
    both = [X, Y]
    marks = [xmark or {}, ymark or {}]
    cofaces = []
    for Z in both:
        co = {c: [] for c in Z.cells()}
        for k in range(1, Z.dim + 1):
            for i in range(Z.count(k)):
                for j, (_, d, t) in enumerate(Z.faces[k][i]):
                    co[(d, t)].append((j, (k, i)))
        cofaces.append(co)
    color = [
        {(k, i): (k, tuple((t, d) for t, d, _ in Z.faces[k][i]), repr(mk.get((k, i)))) for k, i in Z.cells()}
        for Z, mk in zip(both, marks)
    ]
    n_colors = -1
    while True:
        sigs = []
        for Z, col, co in zip(both, color, cofaces):
            sigs.append(
                {
                    c: (
                        col[c],
                        tuple(col[(d, t)] for _, d, t in (Z.faces[c[0]][c[1]] if c[0] else ())),
                        tuple(sorted((j, col[x]) for j, x in co[c])),
                    )
                    for c in Z.cells()
                }
            )
        palette = {s: n for n, s in enumerate(sorted(set(sigs[0].values()) | set(sigs[1].values()), key=repr))}
        color = [{c: palette[s] for c, s in sig.items()} for sig in sigs]
        if len(palette) == n_colors:
            return color
        n_colors = len(palette)


def iter_isomorphisms(X: SSet, Y: SSet, xmark=None, ymark=None):
    """Backtracking enumeration of isomorphisms X -> Y carrying each cell of
    X to a cell of Y with the same mark."""
    if X.counts != Y.counts:
        return
    cx, cy = _refined_colors(X, Y, xmark, ymark)
    if sorted(cx.values()) != sorted(cy.values()):
        return
    by_color = {}
    for c in Y.cells():
        by_color.setdefault(cy[c], []).append(c)
    order = sorted(X.cells(), key=lambda c: (-c[0], c[1]))

    def propagate(x, y, assign, used):
        stack = [(x, y)]
        while stack:
            a, b = stack.pop()
            if a in assign:
                if assign[a] != b:
                    return False
                continue
            if b in used or cx[a] != cy[b]:
                return False
            assign[a] = b
            used.add(b)
            k = a[0]
            if k:
                for fa, fb in zip(X.faces[k][a[1]], Y.faces[k][b[1]]):
                    if fa[0] != fb[0] or fa[1] != fb[1]:
                        return False
                    stack.append(((fa[1], fa[2]), (fb[1], fb[2])))
        return True

    def search(pos, assign, used):
        while pos < len(order) and order[pos] in assign:
            pos += 1
        if pos == len(order):
            yield assign
            return
        x = order[pos]
        for y in by_color[cx[x]]:
            if y in used:
                continue
            a2, u2 = dict(assign), set(used)
            if propagate(x, y, a2, u2):
                yield from search(pos + 1, a2, u2)

    for found in search(0, {}, set()):
        images = [[nondeg(k, found[(k, i)][1]) for i in range(c)] for k, c in enumerate(X.counts)]
        yield SimplicialMap(X, Y, images, check=True)


def find_isomorphism(X: SSet, Y: SSet, xmark=None, ymark=None):
    """An isomorphism X -> Y, or None."""
    if X == Y and not xmark and not ymark:
        return identity_map(X)
    return next(iter_isomorphisms(X, Y, xmark, ymark), None)


def arrow_isomorphism(f: SimplicialMap, g: SimplicialMap, limit: int = 5000):
    """A pair (a, b) of isomorphisms with g∘a = b∘f, or None."""
    if f.dom.counts != g.dom.counts or f.cod.counts != g.cod.counts:
        return None
    if SSET.is_mono(f) and SSET.is_mono(g):
        fm = {c: True for c in SSET.image_cells(f)}
        gm = {c: True for c in SSET.image_cells(g)}
        b = find_isomorphism(f.cod, g.cod, fm, gm)
        if b is None:
            return None
        a = SSET.lift(SSET.compose(b, f), g)
        return a, b
    for n, b in enumerate(iter_isomorphisms(f.cod, g.cod)):
        if n >= limit:
            break
        bf = SSET.compose(b, f)
        xm = {(k, i): bf.images[k][i] for k, i in f.dom.cells()}
        ym = {(k, i): g.images[k][i] for k, i in g.dom.cells()}
        a = find_isomorphism(f.dom, g.dom, xm, ym)
        if a is not None:
            return a, b
    return None


SSET = SSetEngine()
