"""Objects and arrows with a finite group action; coinvariants and induction."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .engine import Coinvariants, Engine, engine_of
from .errors import EquivarianceError, StructuralError
from .groups import FinGroup, Subgroup


class GroupAction:
    """A left action g ↦ maps[g] of ``group`` on ``obj`` by automorphisms."""

    def __init__(self, group: FinGroup, obj, maps: Sequence, check: bool = True):
        self.group = group
        self.obj = obj
        self.maps = tuple(maps)
        if len(self.maps) != group.order:
            raise StructuralError("one automorphism per group element expected")
        if check:
            self.check()

    @property
    def engine(self) -> Engine:
        return engine_of(self.obj)

    def check(self) -> None:
        e = self.engine
        G = self.group
        if not e.equal(self.maps[G.identity], e.identity(self.obj)):
            raise StructuralError("identity element does not act trivially")
        for a in G:
            for b in G:
                if not e.equal(self.maps[G.mult[a][b]], e.compose(self.maps[a], self.maps[b])):
                    raise StructuralError(f"action is not multiplicative at ({a}, {b})")

    def is_free(self) -> bool:
        return self.engine.acts_freely(self)

    def restrict(self, sub: Subgroup) -> "GroupAction":
        if sub.group != self.group:
            raise StructuralError("subgroup of a different group")
        return GroupAction(sub.sub, self.obj, [self.maps[g] for g in sub.embedding], check=False)


def trivial_action(group: FinGroup, obj) -> GroupAction:
    ident = engine_of(obj).identity(obj)
    return GroupAction(group, obj, [ident] * group.order, check=False)


def tensor_action(actions: Sequence[GroupAction]) -> GroupAction:
    """Diagonal action on the tensor product."""
    G = actions[0].group
    if any(a.group != G for a in actions):
        raise StructuralError("diagonal action needs a common group")
    e = engine_of(actions[0].obj)
    obj = e.tensor([a.obj for a in actions])
    return GroupAction(G, obj, [e.tensor_maps([a.maps[g] for a in actions]) for g in G], check=False)


def permutation_action(group: FinGroup, objs: Sequence) -> GroupAction:
    """Place-permutation action on ⊗objs; each element must preserve the object list."""
    e = engine_of(objs[0])
    maps = []
    for perm in group.elements:
        if any(not e.same_object(objs[perm[i]], objs[i]) for i in range(len(objs))):
            raise StructuralError("permutation mixes different tensor factors")
        maps.append(e.permute(objs, perm))
    return GroupAction(group, e.tensor(objs), maps, check=False)


@dataclass
class EquivariantArrow:
    arrow: Any
    dom_action: GroupAction
    cod_action: GroupAction
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.dom_action.group != self.cod_action.group:
            raise StructuralError("domain and codomain acted on by different groups")
        if self.check:
            self.verify()

    @property
    def group(self) -> FinGroup:
        return self.dom_action.group

    @property
    def engine(self) -> Engine:
        return engine_of(self.arrow)

    def verify(self) -> None:
        e = self.engine
        f = self.arrow
        for g in self.group:
            if not e.equal(e.compose(f, self.dom_action.maps[g]), e.compose(self.cod_action.maps[g], f)):
                raise EquivarianceError(f"arrow is not equivariant at group element {g}")


def trivially_acted(arrow, group: FinGroup) -> EquivariantArrow:
    return EquivariantArrow(arrow, trivial_action(group, arrow.dom), trivial_action(group, arrow.cod), check=False)


def coinvariants(action: GroupAction) -> Coinvariants:
    """X_G with its projection (coequalizer of ⊔_g X ⇉ X)."""
    return action.engine.coinvariants(action)


@dataclass
class QuotientArrow:
    arrow: Any
    dom: Coinvariants
    cod: Coinvariants


def arrow_coinvariants(eq: EquivariantArrow) -> QuotientArrow:
    e = eq.engine
    qd = coinvariants(eq.dom_action)
    qc = coinvariants(eq.cod_action)
    return QuotientArrow(qd.factor(e.compose(qc.proj, eq.arrow)), qd, qc)


# ---------------------------------------------------------------------------
# induction G ·_H X
# ---------------------------------------------------------------------------
@dataclass
class Induced:
    action: GroupAction  # G acting on G·_H X
    free: Any  # Coproduct G·X
    quotient: Coinvariants  # (G·X)_H
    sub: Subgroup
    source: GroupAction  # the H-object X


def induce(sub: Subgroup, X: GroupAction) -> Induced:
    """G·_H X := (G·X)_H, H acting on the right of G and on the left of X."""
    G, H = sub.group, sub.sub
    if X.group != H:
        raise StructuralError("X must carry an action of the subgroup")
    e = X.engine
    free = e.coproduct([X.obj] * G.order)
    # h acts by (g, x) -> (g·h^{-1}, h·x)
    h_maps = []
    for h in H:
        gh_inv = sub.embedding[H.inv[h]]
        h_maps.append(
            free.factor({g: e.compose(free.legs[G.mult[g][gh_inv]], X.maps[h]) for g in G}, target=free.obj)
        )
    right = GroupAction(H, free.obj, h_maps, check=False)
    q = e.coinvariants(right)
    g_maps = []
    for a in G:
        left = free.factor({g: free.legs[G.mult[a][g]] for g in G}, target=free.obj)
        g_maps.append(q.factor(e.compose(q.proj, left)))
    return Induced(GroupAction(G, q.obj, g_maps, check=False), free, q, sub, X)


def coset_comparison(ind: Induced):
    """The map (G/H)·X -> G·_H X sending the copy of a coset to the copy of its
    least representative; an isomorphism whenever the construction is sound."""
    e = ind.source.engine
    cosets = ind.sub.left_cosets
    target = e.coproduct([ind.source.obj] * len(cosets))
    return target, target.factor(
        {c: e.compose(ind.quotient.proj, ind.free.legs[coset[0]]) for c, coset in enumerate(cosets)},
        target=ind.quotient.obj,
    )


def induce_arrow(sub: Subgroup, arrow: EquivariantArrow) -> tuple[EquivariantArrow, Induced, Induced]:
    """G·_H applied to an H-equivariant arrow."""
    e = arrow.engine
    d = induce(sub, arrow.dom_action)
    c = induce(sub, arrow.cod_action)
    G = sub.group
    mid = d.free.factor({g: e.compose(c.free.legs[g], arrow.arrow) for g in G}, target=c.free.obj)
    f = d.quotient.factor(e.compose(c.quotient.proj, mid))
    return EquivariantArrow(f, d.action, c.action, check=False), d, c
