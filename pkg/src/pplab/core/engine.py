"""The engine contract and colimits built from coproducts and coequalizers.

An engine is a symmetric monoidal, finitely cocomplete category whose
morphism equality is decidable.  Every finite colimit here is reduced to one
coproduct followed by one coequalizer.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from typing import Any, Hashable, Mapping, Sequence

from .errors import EngineMismatch, NotCoequalizing, StructuralError


class Engine(ABC):
    name: str = "abstract"

    # -- category structure -------------------------------------------------
    @abstractmethod
    def identity(self, X): ...

    @abstractmethod
    def compose(self, g, f):
        """g∘f."""

    @abstractmethod
    def equal(self, f, g) -> bool: ...

    @abstractmethod
    def is_mono(self, f) -> bool: ...

    @abstractmethod
    def is_iso(self, f) -> bool: ...

    @abstractmethod
    def find_isomorphism(self, X, Y): ...

    @abstractmethod
    def same_object(self, X, Y) -> bool: ...

    # -- colimits -----------------------------------------------------------
    @abstractmethod
    def initial(self): ...

    @abstractmethod
    def initial_map(self, X): ...

    @abstractmethod
    def coproduct(self, objs: Sequence) -> "Coproduct": ...

    @abstractmethod
    def coequalizer(self, f, g) -> "Coequalizer": ...

    # -- monoidal structure -------------------------------------------------
    @abstractmethod
    def unit(self): ...

    @abstractmethod
    def tensor(self, objs: Sequence): ...

    @abstractmethod
    def tensor_maps(self, maps: Sequence): ...

    @abstractmethod
    def permute(self, objs: Sequence, perm: Sequence[int]):
        """Iso ⊗objs -> ⊗objs', moving factor i to position perm[i]."""

    @abstractmethod
    def flatten(self, groups: Sequence[Sequence]):
        """Iso ⊗_i(⊗_j X_ij) -> ⊗_{ij} X_ij (grouping removed, order kept)."""

    # -- derived ------------------------------------------------------------
    def symmetry(self, X, Y):
        return self.permute([X, Y], (1, 0))

    def pushout(self, f, g) -> "PosetColimit":
        """Pushout of the span X <-f- A -g-> Y, legs keyed 'a', 'x', 'y'."""
        if not self.same_object(f.dom, g.dom):
            raise StructuralError("pushout needs a span with a common source")
        d = DiagramOnPoset(
            {"a": f.dom, "x": f.cod, "y": g.cod},
            {("a", "x"): f, ("a", "y"): g},
        )
        return poset_colimit(d, self, check=False)

    def coinvariants(self, action) -> "Coinvariants":
        return generic_coinvariants(self, action)

    def acts_freely(self, action) -> bool:
        raise NotImplementedError(f"{self.name} engine cannot test freeness")


def engine_of(x) -> Engine:
    eng = getattr(x, "engine", None)
    if eng is None:
        raise EngineMismatch(f"{type(x).__name__} carries no engine")
    return eng


def common_engine(xs) -> Engine:
    engines = {id(engine_of(x)): engine_of(x) for x in xs}
    if len(engines) != 1:
        raise EngineMismatch("objects come from different engines")
    return next(iter(engines.values()))


# ---------------------------------------------------------------------------
# colimit cocones
# ---------------------------------------------------------------------------
class Colimit:
    """A colimiting cocone: ``obj``, ``legs`` and the induced-map operation."""

    engine: Engine
    obj: Any
    legs: Mapping[Hashable, Any]

    def factor(self, maps: Mapping[Hashable, Any]):
        raise NotImplementedError

    def tensor_left(self, L) -> tuple["Colimit", Any]:
        """Colimit of L⊗(diagram) together with the comparison map into L⊗obj."""
        raise NotImplementedError


class Coproduct(Colimit):
    def __init__(self, engine, objs, obj, legs, data=None):
        self.engine = engine
        self.objs = tuple(objs)
        self.obj = obj
        self.legs = dict(enumerate(legs))
        self.data = data

    def factor(self, maps, target=None):
        maps = [maps[i] for i in range(len(self.objs))]
        if target is None:
            if not maps:
                raise StructuralError("empty coproduct needs an explicit target")
            target = maps[0].cod
        return self.engine.copair(self, maps, target)

    def tensor_left(self, L):
        e = self.engine
        new = e.coproduct([e.tensor([L, X]) for X in self.objs])
        idL = e.identity(L)
        comp = new.factor({i: e.tensor_maps([idL, self.legs[i]]) for i in self.legs})
        return new, comp


class Coequalizer(Colimit):
    def __init__(self, engine, f, g, obj, proj, data=None):
        self.engine = engine
        self.f, self.g = f, g
        self.obj = obj
        self.proj = proj
        self.legs = {None: proj}
        self.data = data

    def factor(self, maps):
        h = maps[None] if isinstance(maps, Mapping) else maps
        e = self.engine
        if not e.equal(e.compose(h, self.f), e.compose(h, self.g)):
            raise NotCoequalizing("map does not coequalize the parallel pair")
        return e.coequalizer_factor(self, h)

    def tensor_left(self, L):
        e = self.engine
        idL = e.identity(L)
        new = e.coequalizer(e.tensor_maps([idL, self.f]), e.tensor_maps([idL, self.g]))
        return new, new.factor(e.tensor_maps([idL, self.proj]))


class Coinvariants(Colimit):
    """X_G with projection; ``factor`` demands G-invariance."""

    def __init__(self, engine, action, obj, proj, factor_fn):
        self.engine = engine
        self.action = action
        self.obj = obj
        self.proj = proj
        self.legs = {None: proj}
        self._factor = factor_fn

    def factor(self, maps):
        from .errors import EquivarianceError

        h = maps[None] if isinstance(maps, Mapping) else maps
        e = self.engine
        for g in self.action.group:
            if not e.equal(e.compose(h, self.action.maps[g]), h):
                raise EquivarianceError(f"map is not invariant under group element {g}")
        return self._factor(h)

    def tensor_left(self, L):
        from .actions import GroupAction

        e = self.engine
        idL = e.identity(L)
        act = GroupAction(
            self.action.group,
            e.tensor([L, self.action.obj]),
            tuple(e.tensor_maps([idL, m]) for m in self.action.maps),
            check=False,
        )
        new = e.coinvariants(act)
        return new, new.factor(e.tensor_maps([idL, self.proj]))


def generic_coinvariants(engine: Engine, action) -> Coinvariants:
    """Coequalizer of ⊔_g X ⇉ X (codiagonal versus the action maps)."""
    X = action.obj
    cop = engine.coproduct([X] * action.group.order)
    target = engine.identity(X)
    codiag = cop.factor({g: target for g in action.group}, target=X)
    act = cop.factor({g: action.maps[g] for g in action.group}, target=X)
    coeq = engine.coequalizer(codiag, act)
    return Coinvariants(engine, action, coeq.obj, coeq.proj, lambda h: coeq.engine.coequalizer_factor(coeq, h))


# ---------------------------------------------------------------------------
# diagrams on finite posets
# ---------------------------------------------------------------------------
class DiagramOnPoset:
    """Objects on poset elements and maps on generating relations x < y.

    The order is the reflexive-transitive closure of the generating relations.
    """

    def __init__(self, objects: Mapping[Hashable, Any], arrows: Mapping[tuple, Any]):
        self.objects = dict(objects)
        self.arrows = dict(arrows)
        for (x, y), f in self.arrows.items():
            if x not in self.objects or y not in self.objects:
                raise StructuralError(f"arrow {x}->{y} has an unknown endpoint")
        self.up = {x: [] for x in self.objects}
        self.down = {x: [] for x in self.objects}
        for x, y in self.arrows:
            self.up[x].append(y)
            self.down[y].append(x)

    @property
    def elements(self):
        return list(self.objects)

    def topological_order(self):
        indeg = {x: len(self.down[x]) for x in self.objects}
        queue = deque(x for x in self.objects if indeg[x] == 0)
        out = []
        while queue:
            x = queue.popleft()
            out.append(x)
            for y in self.up[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    queue.append(y)
        if len(out) != len(self.objects):
            raise StructuralError("generating relations contain a cycle")
        return out

    def check(self, engine: Engine) -> None:
        """Exhaustive functoriality: every path between two elements has one composite."""
        for (x, y), f in self.arrows.items():
            if not (engine.same_object(f.dom, self.objects[x]) and engine.same_object(f.cod, self.objects[y])):
                raise StructuralError(f"arrow {x}->{y} has wrong domain or codomain")
        order = self.topological_order()
        for x in order:
            comp = {x: engine.identity(self.objects[x])}
            for z in order:
                if z == x:
                    continue
                cands = [(y, engine.compose(self.arrows[(y, z)], comp[y])) for y in self.down[z] if y in comp]
                if not cands:
                    continue
                y0, first = cands[0]
                for y, other in cands[1:]:
                    if not engine.equal(first, other):
                        raise StructuralError(f"labeling not functorial on ({x}, {y0}|{y}, {z})")
                comp[z] = first


class PosetColimit(Colimit):
    def __init__(self, engine, diagram, coprod, coeq):
        self.engine = engine
        self.diagram = diagram
        self.keys = list(diagram.objects)
        self._coprod = coprod
        self._coeq = coeq
        self.obj = coeq.obj
        self.legs = {x: engine.compose(coeq.proj, coprod.legs[i]) for i, x in enumerate(self.keys)}

    def _complete(self, maps):
        """Fill in maps for elements that were not given, by pushing up a relation."""
        maps = dict(maps)
        d = self.diagram
        for x in reversed(d.topological_order()):
            if x in maps:
                continue
            for y in d.up[x]:
                if y in maps:
                    maps[x] = self.engine.compose(maps[y], d.arrows[(x, y)])
                    break
            else:
                raise StructuralError(f"no map given at or above {x}")
        return maps

    def factor(self, maps):
        maps = self._complete(maps)
        h = self._coprod.factor({i: maps[x] for i, x in enumerate(self.keys)})
        return self._coeq.factor(h)

    def tensor_left(self, L):
        e = self.engine
        idL = e.identity(L)
        d = self.diagram
        nd = DiagramOnPoset(
            {x: e.tensor([L, X]) for x, X in d.objects.items()},
            {k: e.tensor_maps([idL, f]) for k, f in d.arrows.items()},
        )
        new = poset_colimit(nd, e, check=False)
        comp = new.factor({x: e.tensor_maps([idL, self.legs[x]]) for x in self.keys})
        return new, comp


def poset_colimit(diagram: DiagramOnPoset, engine: Engine, check: bool = True) -> PosetColimit:
    """Colimit as the coequalizer of ⊔_{x<y} D(x) ⇉ ⊔_x D(x)."""
    if check:
        diagram.check(engine)
    keys = list(diagram.objects)
    pos = {x: i for i, x in enumerate(keys)}
    coprod = engine.coproduct([diagram.objects[x] for x in keys])
    rels = list(diagram.arrows)
    src = engine.coproduct([diagram.objects[x] for x, _ in rels])
    left = src.factor({i: coprod.legs[pos[x]] for i, (x, _) in enumerate(rels)}, target=coprod.obj)
    right = src.factor(
        {i: engine.compose(coprod.legs[pos[y]], diagram.arrows[(x, y)]) for i, (x, y) in enumerate(rels)},
        target=coprod.obj,
    )
    coeq = engine.coequalizer(left, right)
    return PosetColimit(engine, diagram, coprod, coeq)


def cocone_commutes(colim: PosetColimit) -> bool:
    e = colim.engine
    d = colim.diagram
    return all(
        e.equal(colim.legs[x], e.compose(colim.legs[y], f)) for (x, y), f in d.arrows.items()
    )


# ---------------------------------------------------------------------------
# unions of subobjects (mono mode)
# ---------------------------------------------------------------------------
class UnionColimit(Colimit):
    """Colimit of a diagram of subobjects, realized as their union.

    ``members`` maps keys to monos into ``ambient``; the diagram must be closed
    under intersections for this to be the colimit (true for the cube-shaped
    diagrams built from monos here).  ``factor`` only consults maximal members.
    """

    def __init__(self, engine, ambient, members: Mapping[Hashable, Any], maximal=None):
        self.engine = engine
        self.ambient = ambient
        self.members = dict(members)
        self.maximal = list(maximal) if maximal is not None else list(self.members)
        cells = set()
        for k in self.maximal:
            cells |= engine.image_cells(self.members[k])
        self.cells = frozenset(cells)
        self.obj, self.inclusion = engine.subobject(ambient, self.cells)
        self.legs = {k: engine.lift(m, self.inclusion) for k, m in self.members.items()}

    def factor(self, maps):
        e = self.engine
        owner = {}
        pre = {}
        for k in self.maximal:
            table = e.preimage_table(self.members[k])
            for cell, src in table.items():
                if cell not in owner:
                    owner[cell] = k
                    pre[cell] = src
        target = maps[self.maximal[0]].cod
        amb_cells = e.preimage_table(self.inclusion)  # ambient cell -> union cell
        images = {}
        for amb_cell, ucell in amb_cells.items():
            k = owner[amb_cell]
            images[ucell] = e.eval_cell(maps[k], pre[amb_cell])
        out = e.assemble(self.obj, target, images)
        for k in self.maximal:
            if not e.equal(e.compose(out, self.legs[k]), maps[k]):
                raise NotCoequalizing(f"maps disagree on overlaps (member {k})")
        return out

    def tensor_left(self, L):
        e = self.engine
        idL = e.identity(L)
        new = UnionColimit(
            e,
            e.tensor([L, self.ambient]),
            {k: e.tensor_maps([idL, m]) for k, m in self.members.items()},
            self.maximal,
        )
        comp = new.factor({k: e.tensor_maps([idL, self.legs[k]]) for k in self.maximal})
        return new, comp
