"""Pushout products of arrows, their powers with place-permutation actions,
and the equivariant quotients (y ⊞ s^{⊞n})_Σ and (Y ⊗ s^{⊞n})_Σ.

Corners of the cube are 0/1 tuples; a 1 in position i selects the codomain
of the i-th arrow.  For monomorphisms in finset/sset the punctured-cube
colimit is realized as a union of subobjects of the full tensor codomain;
otherwise it is computed abstractly from a coproduct and a coequalizer.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

from .core.actions import EquivariantArrow, GroupAction, QuotientArrow, arrow_coinvariants
from .core.engine import Colimit, DiagramOnPoset, UnionColimit, common_engine, poset_colimit
from .core.errors import EquivarianceError, StructuralError
from .core.groups import FinGroup, multi_symmetric_group


class MultiIndex(tuple):
    """(n_1, ..., n_e), nonnegative and not all zero."""

    def __new__(cls, values):
        if isinstance(values, int):
            values = (values,)
        values = tuple(int(v) for v in values)
        if not values or any(v < 0 for v in values) or sum(values) == 0:
            raise StructuralError(f"multi-index {values} must be nonempty, nonnegative and not all zero")
        return super().__new__(cls, values)

    def __le__(self, other):
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    @property
    def total(self) -> int:
        return sum(self)

    def __repr__(self):
        return f"MultiIndex{tuple(self)}"


@dataclass
class ArrowSquare:
    """A map of arrows source -> target: target∘top == bottom∘source."""

    source: Any
    target: Any
    top: Any
    bottom: Any
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.check and not self.commutes():
            raise StructuralError("square does not commute")

    @property
    def engine(self):
        return common_engine([self.source, self.target])

    def commutes(self) -> bool:
        e = self.engine
        return e.equal(e.compose(self.target, self.top), e.compose(self.bottom, self.source))


def identity_square(f) -> ArrowSquare:
    e = f.engine
    return ArrowSquare(f, f, e.identity(f.dom), e.identity(f.cod), check=False)


class SingleCocone(Colimit):
    """The colimit of a one-object diagram."""

    def __init__(self, engine, key, obj):
        self.engine = engine
        self.obj = obj
        self.legs = {key: engine.identity(obj)}
        self._key = key

    def factor(self, maps):
        return maps[self._key]

    def tensor_left(self, L):
        e = self.engine
        new = SingleCocone(e, self._key, e.tensor([L, self.obj]))
        return new, e.identity(new.obj)


@dataclass
class PPResult:
    arrow: Any
    colimit: Colimit
    corners: dict  # corner -> object
    to_cod: dict  # corner -> map into the tensor codomain
    factors: tuple
    mode: str
    action: EquivariantArrow | None = None

    @property
    def dom(self):
        return self.arrow.dom

    @property
    def cod(self):
        return self.arrow.cod

    @property
    def engine(self):
        return self.arrow.engine


def corners_of(n: int):
    return [S for S in itertools.product((0, 1), repeat=n) if not all(S)]


def use_mono_mode(engine, arrows) -> bool:
    return hasattr(engine, "image_cells") and all(engine.is_mono(f) for f in arrows)


def pp_family(fs: Sequence, mode: str | None = None) -> PPResult:
    """Punctured-cube pushout product of a nonempty family of arrows."""
    fs = list(fs)
    if not fs:
        raise StructuralError("pushout product of an empty family")
    e = common_engine(fs)
    if mode is None:
        mode = "mono" if use_mono_mode(e, fs) else "abstract"
    elif mode == "mono" and not use_mono_mode(e, fs):
        raise StructuralError("mono mode needs monomorphisms in a subobject-capable engine")
    n = len(fs)
    if n == 1:
        f = fs[0]
        col = SingleCocone(e, (0,), f.dom)
        return PPResult(f, col, {(0,): f.dom}, {(0,): f}, (f,), mode)
    cod = e.tensor([f.cod for f in fs])
    corners = {}
    to_cod = {}
    for S in corners_of(n):
        corners[S] = e.tensor([f.cod if s else f.dom for f, s in zip(fs, S)])
        to_cod[S] = e.tensor_maps([e.identity(f.cod) if s else f for f, s in zip(fs, S)])
    if mode == "mono":
        maximal = [S for S in corners if sum(S) == n - 1]
        col = UnionColimit(e, cod, to_cod, maximal)
        arrow = col.inclusion
    else:
        arrows = {}
        for S in corners:
            for i in range(n):
                if S[i] == 0:
                    T = S[:i] + (1,) + S[i + 1 :]
                    if T in corners:
                        arrows[(S, T)] = e.tensor_maps(
                            [fs[j] if j == i else e.identity(fs[j].cod if S[j] else fs[j].dom) for j in range(n)]
                        )
        col = poset_colimit(DiagramOnPoset(corners, arrows), e, check=False)
        arrow = col.factor(to_cod)
    return PPResult(arrow, col, corners, to_cod, tuple(fs), mode)


def pp(f, g, mode: str | None = None) -> PPResult:
    return pp_family([f, g], mode)


def permute_corner(S, perm):
    out = [None] * len(S)
    for i, p in enumerate(perm):
        out[p] = S[i]
    return tuple(out)


def _corner_objs(res: PPResult, S):
    return [f.cod if s else f.dom for f, s in zip(res.factors, S)]


def place_permutation_action(res: PPResult, group: FinGroup) -> EquivariantArrow:
    """Action of a group of permutations preserving the family by placement."""
    e = res.engine
    n = len(res.factors)
    for perm in group.elements:
        for i in range(n):
            if res.factors[perm[i]] is not res.factors[i] and not (
                e.equal(res.factors[perm[i]], res.factors[i])
            ):
                raise StructuralError("permutation mixes different arrows of the family")
    cod_maps = []
    dom_maps = []
    ys = [f.cod for f in res.factors]
    for perm in group.elements:
        cod_maps.append(e.permute(ys, perm))
        if n == 1:
            dom_maps.append(e.identity(res.dom))
            continue
        legs = {}
        for S in res.corners:
            T = permute_corner(S, perm)
            legs[S] = e.compose(res.colimit.legs[T], e.permute(_corner_objs(res, S), perm))
        dom_maps.append(res.colimit.factor(legs))
    return EquivariantArrow(
        res.arrow,
        GroupAction(group, res.dom, dom_maps, check=False),
        GroupAction(group, res.cod, cod_maps, check=False),
        check=False,
    )


def pp_power(f, n: int, mode: str | None = None) -> PPResult:
    if n < 1:
        raise StructuralError("pushout powers need n >= 1")
    return pp_multi([f], MultiIndex((n,)), mode)


def flat_family(family: Sequence, n: MultiIndex) -> list:
    if len(family) != len(n):
        raise StructuralError(f"family of length {len(family)} does not match multi-index {tuple(n)}")
    return [f for f, k in zip(family, n) for _ in range(k)]


def pp_multi(family: Sequence, n, mode: str | None = None) -> PPResult:
    """v_1^{⊞n_1} ⊞ ... ⊞ v_e^{⊞n_e} with the blockwise place-permutation action."""
    n = MultiIndex(n)
    res = pp_family(flat_family(family, n), mode)
    res.action = place_permutation_action(res, multi_symmetric_group(n))
    return res


def pp_map(squares: Sequence[ArrowSquare], source: PPResult | None = None, target: PPResult | None = None) -> ArrowSquare:
    """The square pp(sources) -> pp(targets) induced by a family of squares."""
    e = common_engine([q.source for q in squares])
    source = source or pp_family([q.source for q in squares])
    target = target or pp_family([q.target for q in squares])
    bottom = e.tensor_maps([q.bottom for q in squares])
    if len(squares) == 1:
        top = squares[0].top
    else:
        legs = {}
        for S in source.corners:
            m = e.tensor_maps([q.bottom if s else q.top for q, s in zip(squares, S)])
            legs[S] = e.compose(target.colimit.legs[S], m)
        top = source.colimit.factor(legs)
    return ArrowSquare(source.arrow, target.arrow, top, bottom)


# ---------------------------------------------------------------------------
# equivariant quotients
# ---------------------------------------------------------------------------
@dataclass
class CoinvPPResult:
    arrow: Any
    quotient: QuotientArrow
    product: PPResult
    power: PPResult
    equivariant: EquivariantArrow


def diagonal_pp_action(res: PPResult, eqs: Sequence[EquivariantArrow]) -> EquivariantArrow:
    """Diagonal action on pp(eqs) from actions of one group on each arrow."""
    e = res.engine
    G = eqs[0].group
    if any(q.group != G for q in eqs):
        raise EquivarianceError("diagonal action needs a common group")
    dom_maps, cod_maps = [], []
    for g in G:
        cod_maps.append(e.tensor_maps([q.cod_action.maps[g] for q in eqs]))
        legs = {}
        for S in res.corners:
            m = e.tensor_maps([(q.cod_action if s else q.dom_action).maps[g] for q, s in zip(eqs, S)])
            legs[S] = e.compose(res.colimit.legs[S], m)
        dom_maps.append(res.colimit.factor(legs))
    return EquivariantArrow(
        res.arrow,
        GroupAction(G, res.dom, dom_maps, check=False),
        GroupAction(G, res.cod, cod_maps, check=False),
        check=False,
    )


def coinv_pp(y: EquivariantArrow, family: Sequence, n, mode: str | None = None) -> CoinvPPResult:
    """(y ⊞ s^{⊞n})_{Σn} with Σn acting diagonally."""
    n = MultiIndex(n)
    G = multi_symmetric_group(n)
    if y.group != G:
        raise EquivarianceError(f"y is acted on by {y.group.name}, expected {G.name}")
    y.verify()
    power = pp_multi(family, n, mode)
    prod = pp_family([y.arrow, power.arrow], mode)
    eq = diagonal_pp_action(prod, [y, power.action])
    q = arrow_coinvariants(eq)
    return CoinvPPResult(q.arrow, q, prod, power, eq)


@dataclass
class TensorCoinvResult:
    arrow: Any
    quotient: QuotientArrow
    power: PPResult
    equivariant: EquivariantArrow


def tensor_coinv(Yact: GroupAction, family: Sequence, n, mode: str | None = None) -> TensorCoinvResult:
    """(Y ⊗ s^{⊞n})_{Σn} with Σn acting diagonally."""
    n = MultiIndex(n)
    G = multi_symmetric_group(n)
    if Yact.group != G:
        raise EquivarianceError(f"Y is acted on by {Yact.group.name}, expected {G.name}")
    e = Yact.engine
    power = pp_multi(family, n, mode)
    s = power.action
    idY = e.identity(Yact.obj)
    arrow = e.tensor_maps([idY, power.arrow])
    eq = EquivariantArrow(
        arrow,
        GroupAction(G, arrow.dom, [e.tensor_maps([Yact.maps[g], s.dom_action.maps[g]]) for g in G], check=False),
        GroupAction(G, arrow.cod, [e.tensor_maps([Yact.maps[g], s.cod_action.maps[g]]) for g in G], check=False),
        check=False,
    )
    q = arrow_coinvariants(eq)
    return TensorCoinvResult(q.arrow, q, power, eq)


# ---------------------------------------------------------------------------
# predicates on squares
# ---------------------------------------------------------------------------
def square_pushout(sq: ArrowSquare):
    """Pushout of target.dom <-top- source.dom -source-> source.cod and the
    comparison map into target.cod."""
    e = sq.engine
    po = e.pushout(sq.top, sq.source)
    comp = po.factor({"x": sq.target, "y": sq.bottom})
    return po, comp


def is_cocartesian(sq: ArrowSquare) -> bool:
    e = sq.engine
    if hasattr(e, "cell_image") and e.is_mono(sq.source):
        return _cocartesian_along_mono(sq)
    _, comp = square_pushout(sq)
    return e.is_iso(comp)


def _cocartesian_along_mono(sq: ArrowSquare) -> bool:
    # The pushout of a mono A ↪ B along A -> C has cells C ⊔ (B \ A), so the
    # square is a pushout iff these land bijectively on the cells of D.
    e = sq.engine
    inside = e.image_cells(sq.source)
    hit = set()
    for cell in e.cells(sq.target.dom):
        y = e.cell_image(sq.target, cell)
        if y is None or y in hit:
            return False
        hit.add(y)
    for cell in e.cells(sq.source.cod):
        if cell in inside:
            continue
        y = e.cell_image(sq.bottom, cell)
        if y is None or y in hit:
            return False
        hit.add(y)
    return len(hit) == len(list(e.cells(sq.target.cod)))


def is_cocartesian_generic(sq: ArrowSquare) -> bool:
    """The same test through an explicitly computed pushout."""
    e = sq.engine
    _, comp = square_pushout(sq)
    return e.is_iso(comp)


def is_arrow_cofibration(sq: ArrowSquare) -> bool:
    """Top map mono and the map from the pushout corner to target.cod mono."""
    e = sq.engine
    if not e.is_mono(sq.top):
        return False
    _, comp = square_pushout(sq)
    return e.is_mono(comp)


def arrows_isomorphic(f, g) -> bool:
    """Is there a pair of isomorphisms (a, b) with g∘a = b∘f?"""
    e = common_engine([f, g])
    if e.name == "finset":
        if e.is_mono(f) and e.is_mono(g):
            return f.dom.size == g.dom.size and f.cod.size == g.cod.size
        return _finset_arrows_isomorphic(f, g)
    if e.name == "sset":
        from .sset.engine import arrow_isomorphism

        return arrow_isomorphism(f, g) is not None
    a = e.find_isomorphism(f.dom, g.dom)
    b = e.find_isomorphism(f.cod, g.cod)
    return a is not None and b is not None and e.equal(e.compose(g, a), e.compose(b, f))


def _finset_arrows_isomorphic(f, g) -> bool:
    # fibre-size profiles classify maps of finite sets up to isomorphism
    def profile(h):
        sizes = [0] * h.cod.size
        for y in h.table:
            sizes[y] += 1
        return sorted(sizes), h.dom.size

    return profile(f) == profile(g)
