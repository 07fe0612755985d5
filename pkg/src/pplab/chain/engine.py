"""Chain complexes of finitely presented abelian groups as an engine.

Tensor generators in total degree n are tuples ((p_1, a_1), ..., (p_r, a_r))
with a_i a generator of the i-th factor in degree p_i, ordered
lexicographically.  Signs follow the Koszul rule.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass


from ..core.engine import Coequalizer, Coinvariants, Coproduct, Engine
from ..core.errors import EngineMismatch, StructuralError
from .complexes import ChainComplexFP, ChainMap, FPAbelianGroup, complex_homology, hstack
from .snf import matmul, zeros


@dataclass
class TensorLayout:
    factors: tuple
    gens: dict  # degree -> list of generator tuples
    index: dict  # generator tuple -> position within its degree


def _factor_gens(C: ChainComplexFP):
    return [(p, a) for p in C.degrees for a in range(C.gens(p))]


class ChainEngine(Engine):
    name = "chain"

    def __init__(self):
        self._tensors = {}

    def _check(self, *xs):
        for x in xs:
            if not isinstance(x, (ChainComplexFP, ChainMap)):
                raise EngineMismatch(f"chain engine got {type(x).__name__}")

    # -- category -----------------------------------------------------------
    def identity(self, X):
        return ChainMap(X, X, {k: _eye(X.gens(k)) for k in X.degrees}, check=False)

    def compose(self, g, f):
        self._check(g, f)
        if not self.same_object(f.cod, g.dom):
            raise StructuralError("cannot compose chain maps with mismatched ends")
        return ChainMap(f.dom, g.cod, {k: matmul(g.mat(k), f.mat(k)) for k in f.dom.degrees}, check=False)

    def equal(self, f, g):
        self._check(f, g)
        if not (self.same_object(f.dom, g.dom) and self.same_object(f.cod, g.cod)):
            return False
        return all(f.cod.group(k).in_relations(f.mat(k) - g.mat(k)) for k in f.dom.degrees)

    def same_object(self, X, Y):
        return X == Y

    def _kernel_trivial(self, f, k) -> bool:
        from .complexes import _kernel_basis

        g = f.dom.gens(k)
        if g == 0:
            return True
        M = hstack([f.mat(k), f.cod.rel(k)], f.cod.gens(k))
        K = _kernel_basis(M)[:g, :]
        return f.dom.group(k).in_relations(K)

    def _surjective(self, f, k) -> bool:
        n = f.cod.gens(k)
        if n == 0:
            return True
        M = hstack([f.mat(k), f.cod.rel(k)], n)
        if M.shape[1] == 0:
            return False
        return FPAbelianGroup(n, M).is_zero()

    def is_mono(self, f):
        return all(self._kernel_trivial(f, k) for k in f.dom.degrees)

    def is_epi(self, f):
        return all(self._surjective(f, k) for k in f.cod.degrees)

    def is_iso(self, f):
        return self.is_mono(f) and self.is_epi(f)

    def find_isomorphism(self, X, Y, budget: int = 200_000):
        """Search among degreewise signed permutations of generators.

        This is a restricted search: isomorphisms that are not signed
        permutations on generators are not found.
        """
        if self.same_object(X, Y):
            return self.identity(X)
        degrees = sorted(set(X.degrees) | set(Y.degrees))
        if any(X.gens(k) != Y.gens(k) for k in degrees):
            return None
        if any(X.group(k).invariants != Y.group(k).invariants for k in degrees):
            return None
        total = math.prod(math.factorial(X.gens(k)) * 2 ** X.gens(k) for k in degrees)
        if total > budget:
            raise StructuralError(f"isomorphism search space {total} exceeds budget {budget}")

        def signed_perms(n):
            for p in itertools.permutations(range(n)):
                for signs in itertools.product((1, -1), repeat=n):
                    m = zeros(n, n)
                    for i, j in enumerate(p):
                        m[j, i] = signs[i]
                    yield m

        for mats in itertools.product(*(list(signed_perms(X.gens(k))) for k in degrees)):
            try:
                f = ChainMap(X, Y, dict(zip(degrees, mats)))
            except StructuralError:
                continue
            if self.is_iso(f):
                return f
        return None

    # -- colimits -----------------------------------------------------------
    def initial(self):
        return ChainComplexFP({})

    def initial_map(self, X):
        return ChainMap(self.initial(), X, {}, check=False)

    def coproduct(self, objs):
        objs = list(objs)
        self._check(*objs)
        degrees = sorted(set().union(*(set(X.degrees) for X in objs))) if objs else []
        offsets = {k: [0] for k in degrees}
        for X in objs:
            for k in degrees:
                offsets[k].append(offsets[k][-1] + X.gens(k))
        groups = {}
        diffs = {}
        for k in degrees:
            n = offsets[k][-1]
            rels = []
            for i, X in enumerate(objs):
                r = zeros(n, X.rel(k).shape[1])
                r[offsets[k][i] : offsets[k][i + 1], :] = X.rel(k)
                rels.append(r)
            groups[k] = FPAbelianGroup(n, hstack(rels, n))
            if k - 1 in offsets:
                d = zeros(offsets[k - 1][-1], n)
                for i, X in enumerate(objs):
                    d[offsets[k - 1][i] : offsets[k - 1][i + 1], offsets[k][i] : offsets[k][i + 1]] = X.d(k)
                diffs[k] = d
        S = ChainComplexFP(groups, diffs, check=False)
        legs = []
        for i, X in enumerate(objs):
            mats = {}
            for k in X.degrees:
                m = zeros(S.gens(k), X.gens(k))
                m[offsets[k][i] : offsets[k][i + 1], :] = _eye(X.gens(k))
                mats[k] = m
            legs.append(ChainMap(X, S, mats, check=False))
        return Coproduct(self, objs, S, legs, data=offsets)

    def copair(self, coprod, maps, target):
        S = coprod.obj
        mats = {}
        for k in S.degrees:
            blocks = [f.mat(k) for f in maps]
            mats[k] = hstack(blocks, target.gens(k)) if blocks else zeros(target.gens(k), 0)
        for f, X in zip(maps, coprod.objs):
            if not (self.same_object(f.dom, X) and self.same_object(f.cod, target)):
                raise StructuralError("copairing maps do not match the summands")
        return ChainMap(S, target, mats, check=False)

    def _with_relations(self, X, extra):
        groups = {k: FPAbelianGroup(X.gens(k), hstack([X.rel(k)] + extra.get(k, []), X.gens(k))) for k in X.degrees}
        return ChainComplexFP(groups, {k: X.d(k) for k in X.degrees}, check=False)

    def coequalizer(self, f, g):
        self._check(f, g)
        if not (self.same_object(f.dom, g.dom) and self.same_object(f.cod, g.cod)):
            raise StructuralError("coequalizer needs a parallel pair")
        X = f.cod
        Q = self._with_relations(X, {k: [f.mat(k) - g.mat(k)] for k in X.degrees})
        proj = ChainMap(X, Q, {k: _eye(X.gens(k)) for k in X.degrees}, check=False)
        return Coequalizer(self, f, g, Q, proj)

    def coequalizer_factor(self, coeq, h):
        return ChainMap(coeq.obj, h.cod, h.mats, check=False)

    def coinvariants(self, action):
        X = action.obj
        extra = {k: [m.mat(k) - _eye(X.gens(k)) for m in action.maps] for k in X.degrees}
        Q = self._with_relations(X, extra)
        proj = ChainMap(X, Q, {k: _eye(X.gens(k)) for k in X.degrees}, check=False)
        return Coinvariants(self, action, Q, proj, lambda h: ChainMap(Q, h.cod, h.mats, check=False))

    # -- monoidal -----------------------------------------------------------
    def unit(self):
        return ChainComplexFP({0: FPAbelianGroup(1)})

    def layout(self, objs) -> TensorLayout:
        key = tuple(id(X) for X in objs)
        hit = self._tensors.get(key)
        if hit is None:
            hit = self._build_tensor(list(objs))
            self._tensors[key] = hit
        return hit[1]

    def tensor(self, objs):
        objs = list(objs)
        self._check(*objs)
        if len(objs) == 1:
            return objs[0]
        if not objs:
            return self.unit()
        key = tuple(id(X) for X in objs)
        hit = self._tensors.get(key)
        if hit is None:
            hit = self._build_tensor(objs)
            self._tensors[key] = hit
        return hit[0]

    def _build_tensor(self, objs):
        gens = {}
        for combo in itertools.product(*(_factor_gens(X) for X in objs)):
            gens.setdefault(sum(p for p, _ in combo), []).append(combo)
        for k in gens:
            gens[k].sort()
        index = {g: i for k in gens for i, g in enumerate(gens[k])}
        layout = TensorLayout(tuple(objs), gens, index)
        groups = {}
        diffs = {}
        for n, gl in gens.items():
            rels = []
            for pos, X in enumerate(objs):
                others = [_factor_gens(Y) for Y in objs]
                for p in X.degrees:
                    R = X.rel(p)
                    if R.shape[1] == 0:
                        continue
                    for rest in itertools.product(*(others[:pos] + [[None]] + others[pos + 1 :])):
                        if sum(q for j, (q, _) in enumerate(rest) if j != pos) + p != n:
                            continue
                        for c in range(R.shape[1]):
                            col = [0] * len(gl)
                            for b in range(X.gens(p)):
                                if R[b, c]:
                                    g = rest[:pos] + ((p, b),) + rest[pos + 1 :]
                                    col[index[g]] += R[b, c]
                            rels.append(col)
            rel = zeros(len(gl), len(rels))
            for j, col in enumerate(rels):
                for i, x in enumerate(col):
                    rel[i, j] = x
            groups[n] = FPAbelianGroup(len(gl), rel)
            if n - 1 in gens:
                d = zeros(len(gens[n - 1]), len(gl))
                for j, g in enumerate(gl):
                    sign = 1
                    for pos, (p, a) in enumerate(g):
                        if p - 1 in objs[pos].degrees:
                            dX = objs[pos].d(p)
                            for b in range(objs[pos].gens(p - 1)):
                                if dX[b, a]:
                                    h = g[:pos] + ((p - 1, b),) + g[pos + 1 :]
                                    d[index[h], j] += sign * dX[b, a]
                        if p % 2:
                            sign = -sign
                diffs[n] = d
        return ChainComplexFP(groups, diffs, check=True), layout

    def tensor_maps(self, maps):
        self._check(*maps)
        if len(maps) == 1:
            return maps[0]
        dom = self.tensor([f.dom for f in maps])
        cod = self.tensor([f.cod for f in maps])
        if not maps:
            return self.identity(dom)
        ld = self.layout([f.dom for f in maps])
        lc = self.layout([f.cod for f in maps])
        mats = {}
        for n, gl in ld.gens.items():
            m = zeros(cod.gens(n), len(gl))
            for j, g in enumerate(gl):
                columns = []
                for f, (p, a) in zip(maps, g):
                    F = f.mat(p)
                    columns.append([((p, b), F[b, a]) for b in range(f.cod.gens(p)) if F[b, a]])
                for combo in itertools.product(*columns):
                    coef = 1
                    for _, c in combo:
                        coef *= c
                    m[lc.index[tuple(x for x, _ in combo)], j] += coef
            mats[n] = m
        return ChainMap(dom, cod, mats, check=False)

    def permute(self, objs, perm):
        objs = list(objs)
        if len(objs) == 1:
            return self.identity(objs[0])
        target = [None] * len(objs)
        for i, p in enumerate(perm):
            target[p] = objs[i]
        dom, cod = self.tensor(objs), self.tensor(target)
        ld, lc = self.layout(objs), self.layout(target)
        mats = {}
        for n, gl in ld.gens.items():
            m = zeros(cod.gens(n), len(gl))
            for j, g in enumerate(gl):
                out = [None] * len(g)
                for i, p in enumerate(perm):
                    out[p] = g[i]
                m[lc.index[tuple(out)], j] = koszul_sign([d for d, _ in g], perm)
            mats[n] = m
        return ChainMap(dom, cod, mats, check=False)

    def flatten(self, groups):
        groups = [list(g) for g in groups]
        inner = [self.tensor(g) for g in groups]
        dom = self.tensor(inner)
        flat_objs = [X for g in groups for X in g]
        cod = self.tensor(flat_objs)
        if len(inner) == 1:
            ld_gens = {n: [((n, a),) for a in range(dom.gens(n))] for n in dom.degrees}
        else:
            ld_gens = self.layout(inner).gens
        inner_layouts = [self.layout(g) if len(g) > 1 else None for g in groups]
        lc_index = self.layout(flat_objs).index if len(flat_objs) > 1 else None
        mats = {}
        for n, gl in ld_gens.items():
            m = zeros(cod.gens(n), len(gl))
            for j, g in enumerate(gl):
                parts = []
                for (p, a), lay in zip(g, inner_layouts):
                    parts.extend(lay.gens[p][a] if lay else ((p, a),))
                row = lc_index[tuple(parts)] if lc_index is not None else parts[0][1]
                m[row, j] = 1
            mats[n] = m
        return ChainMap(dom, cod, mats, check=False)

    def homology(self, X):
        return complex_homology(X)


def koszul_sign(degrees, perm) -> int:
    """Sign of moving factor i (of the given degree) to position perm[i]."""
    s = 1
    r = len(degrees)
    for i in range(r):
        for j in range(i + 1, r):
            if perm[i] > perm[j] and degrees[i] % 2 and degrees[j] % 2:
                s = -s
    return s


def _eye(n):
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


CHAIN = ChainEngine()


def tensor_complex(C: ChainComplexFP, D: ChainComplexFP) -> ChainComplexFP:
    return CHAIN.tensor([C, D])


def sign_action_power(C: ChainComplexFP, n: int):
    """Σn acting on C^{⊗n} by place permutation with Koszul signs."""
    from ..core.actions import GroupAction
    from ..core.groups import symmetric_group

    G = symmetric_group(n)
    objs = [C] * n
    return GroupAction(G, CHAIN.tensor(objs), [CHAIN.permute(objs, p) for p in G.elements], check=False)


def chain_coinvariants(action) -> ChainComplexFP:
    for m in action.maps:
        m.check()
    Q = CHAIN.coinvariants(action).obj
    Q.check()
    return Q
