"""Morphisms out of pasting categories and the standard generating family.

A morphism is stored by its values on the generating cells only; values
on composite members are derived through the stored witness
decompositions and memoized.  The standard generators (end inclusions,
projections, connections, half inclusions, middle collapse) are built
directly from their dimension-0/1/2 base cases; ``tensor`` implements
the product of morphisms and is asserted to reproduce the indexed
families.
"""

from __future__ import annotations

from . import shapes
from .pasting import ATOM, COMPOSE, InconsistencyError, MCategory, built, product_member
from .shapes import MINUS, PLUS, SIGNS, PathProduct, cube, double_shape


class Hom:
    """A homomorphism from a pasting category into any omega view.

    ``values`` lists the image of each generating cell, aligned with the
    canonical cell order of the source shape.
    """

    __slots__ = ("source", "target", "values", "_memo", "_hash")

    def __init__(self, source: MCategory, target, values):
        self.source = source
        self.target = target
        self.values = tuple(values)
        self._memo: dict = {}
        self._hash = hash((source.shape.lengths, id(target), self.values))

    def __eq__(self, other):
        return (isinstance(other, Hom)
                and self.source.shape.lengths == other.source.shape.lengths
                and self.target is other.target
                and self.values == other.values)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Hom({self.source.shape.format() or 'pt'}->*, {len(self.values)} cells)"

    def value_on_cell(self, cell):
        return self.values[self.source.cell_pos[cell]]

    def __call__(self, member: int):
        """Value on an arbitrary member, via its witness decomposition."""
        got = self._memo.get(member)
        if got is None:
            witness = self.source.witnesses[member]
            if witness[0] == ATOM:
                got = self.value_on_cell(witness[1])
            else:
                _, left, right, p = witness
                got = self.target.compose(self(left), self(right), p)
            self._memo[member] = got
        return got

    def then(self, outer: "Hom") -> "Hom":
        """Composite morphism: first self, then outer (targets a view)."""
        if (not isinstance(self.target, MCategory)
                or outer.source.shape.lengths != self.target.shape.lengths):
            raise InconsistencyError("composition shape mismatch")
        return Hom(self.source, outer.target,
                   [outer(v) for v in self.values])

    def validate(self, check_witness_pairs: bool = False) -> "Hom":
        """Assert the morphism laws on the full finite source table."""
        src, tgt = self.source, self.target
        for x in src.elements():
            fx = self(x)
            for p in range(src.max_dim + 1):
                for sign in SIGNS:
                    want = self(src.face(x, sign, p))
                    if tgt.face(fx, sign, p) != want:
                        raise InconsistencyError(
                            f"morphism breaks face level {p} on {src.describe(x)}")
        for (x, y, p), z in src.comp.items():
            if not tgt.composable(self(x), self(y), p):
                raise InconsistencyError(
                    f"morphism breaks composability at level {p}")
            if tgt.compose(self(x), self(y), p) != self(z):
                raise InconsistencyError(
                    f"morphism breaks composition at level {p}")
        if check_witness_pairs:
            for (x, y, p), z in src.comp.items():
                alt = tgt.compose(self(x), self(y), p)
                if alt != self(z):
                    raise InconsistencyError("witness evaluation disagreement")
        return self


def identity(cat: MCategory) -> Hom:
    return Hom(cat, cat, [cat.atom(c) for c in cat.cell_list])


def tensor(f: Hom, g: Hom) -> Hom:
    """The product morphism, acting factorwise on product cells."""
    fs, gs = f.source, g.source
    ft, gt = f.target, g.target
    source = built(fs.shape.times(gs.shape))
    target = built(ft.shape.times(gt.shape))
    k = fs.shape.arity
    values = []
    for cell in source.cell_list:
        fv = f.value_on_cell(cell[:k])
        gv = g.value_on_cell(cell[k:])
        values.append(product_member(ft, fv, gt, gv, target))
    return Hom(source, target, values)


def tensor_chain(homs) -> Hom:
    out = None
    for h in homs:
        out = h if out is None else tensor(out, h)
    if out is None:
        return identity(built(cube(0)))
    return out


def _direct(source: MCategory, target: MCategory, cell_image) -> Hom:
    return Hom(source, target, [cell_image(c) for c in source.cell_list])


def std_face(i: int, sign: int, n: int) -> Hom:
    """End inclusion in slot i: the cube face morphism into dimension n."""
    if not 1 <= i <= n:
        raise ValueError(f"face slot {i} out of range for dimension {n}")
    source, target = built(cube(n - 1)), built(cube(n))
    v = 0 if sign == MINUS else 2
    return _direct(source, target,
                   lambda c: target.atom(c[:i - 1] + (v,) + c[i - 1:]))


def std_degen(i: int, n: int) -> Hom:
    """Projection collapsing slot i: the degeneracy morphism."""
    if not 1 <= i <= n:
        raise ValueError(f"degeneracy slot {i} out of range for dimension {n}")
    source, target = built(cube(n)), built(cube(n - 1))
    return _direct(source, target,
                   lambda c: target.atom(c[:i - 1] + c[i:]))


def std_conn(i: int, sign: int, n: int) -> Hom:
    """Connection morphism folding slots i, i+1 together (max/min)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"connection slot {i} out of range for dimension {n}")
    source, target = built(cube(n)), built(cube(n - 1))
    pick = max if sign == MINUS else min
    return _direct(source, target,
                   lambda c: target.atom(c[:i - 1] + (pick(c[i - 1], c[i]),) + c[i + 1:]))


def std_iota(i: int, sign: int, n: int) -> Hom:
    """Half inclusion of the cube into the doubled shape at slot i."""
    if not 1 <= i <= n:
        raise ValueError(f"slot {i} out of range for dimension {n}")
    source, target = built(cube(n)), built(double_shape(n, i))
    shift = 0 if sign == MINUS else 2
    return _direct(source, target,
                   lambda c: target.atom(c[:i - 1] + (c[i - 1] + shift,) + c[i:]))


def std_mu(i: int, n: int) -> Hom:
    """Middle collapse: send slot i's edge across the doubled shape."""
    if not 1 <= i <= n:
        raise ValueError(f"slot {i} out of range for dimension {n}")
    source, target = built(cube(n)), built(double_shape(n, i))

    def image(c):
        v = c[i - 1]
        if v == 0:
            return target.atom(c[:i - 1] + (0,) + c[i:])
        if v == 2:
            return target.atom(c[:i - 1] + (4,) + c[i:])
        span = shapes.closure([c[:i - 1] + (1,) + c[i:], c[:i - 1] + (3,) + c[i:]])
        return target.member_with_cells(span)

    return _direct(source, target, image)


def globe_members(mcat: MCategory) -> list[int]:
    """The 2n+1 members of the globe inside a cube's pasting category."""
    top = mcat.top()
    out = [top]
    for p in range(mcat.max_dim - 1, -1, -1):
        out.append(mcat.face(top, MINUS, p))
        out.append(mcat.face(top, PLUS, p))
    if len(set(out)) != 2 * mcat.max_dim + 1:
        raise InconsistencyError("globe members are not distinct")
    return out


def fold_morphism_closed(n: int) -> Hom:
    """The idempotent folding endomorphism of the n-cube, closed form.

    The top cell is fixed; any other cell goes to the face of the top
    member at the level set by its rightmost vertex coordinate.
    """
    cat = built(cube(n))
    top = cat.top()

    def image(cell):
        for pos in range(n - 1, -1, -1):
            v = cell[pos]
            if v % 2 == 0:
                p = n - 1 - pos
                return cat.face(top, MINUS if v == 0 else PLUS, p)
        return top

    return _direct(cat, cat, image)


def fold_morphism_chain(n: int, psi_base: Hom | None = None) -> Hom:
    """The folding endomorphism as the operational chain of basic folds.

    ``psi_base`` is the dimension-2 fold read off the nerve (computed on
    demand); higher folds are its tensor translates, composed in the
    order that mirrors operator application on nerve elements.
    """
    cat = built(cube(n))
    if n < 2:
        return identity(cat)
    if psi_base is None:
        from .folding import base_fold_morphism
        psi_base = base_fold_morphism()

    def psi_hat(i: int) -> Hom:
        return tensor_chain(
            [identity(built(cube(i - 1))), psi_base, identity(built(cube(n - i - 1)))])

    def Psi_hat(r: int) -> Hom:
        # underlying morphism of the r-th stage: slot r-1 first, slot 1 last
        out = identity(cat)
        for i in range(r - 1, 0, -1):
            out = out.then(psi_hat(i))
        return out

    out = identity(cat)
    for r in range(1, n + 1):
        out = out.then(Psi_hat(r))
    return out


def phi_check(n: int) -> Hom:
    """Cross-check the two constructions of the cube folding morphism.

    Returns the closed-form morphism after asserting it equals the
    operational chain and that its image is exactly the globe.
    """
    closed = fold_morphism_closed(n)
    chain = fold_morphism_chain(n)
    if closed.values != chain.values:
        raise InconsistencyError(
            f"fold morphism mismatch in dimension {n}: closed form vs chain")
    cat = closed.source
    image = sorted({closed(x) for x in cat.elements()})
    if image != sorted(globe_members(cat)):
        raise InconsistencyError(f"fold image in dimension {n} is not the globe")
    return closed
