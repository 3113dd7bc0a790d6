"""The cubical nerve of a finite globular table.

Grade n holds every homomorphism from the n-cube's pasting category
into the target, found by backtracking over cells in dimension order
with exact boundary pruning.  The cubical operations act by
precomposition with the standard morphisms; binary composition first
amalgamates the two cubes over the doubled shape and then collapses the
middle edge.
"""

from __future__ import annotations

from .morphisms import Hom, std_conn, std_degen, std_face, std_mu
from .pasting import ATOM, MCategory, built
from .shapes import MINUS, PLUS, cube, double_shape


class EnumerationOverflow(RuntimeError):
    """More homomorphisms than the configured cap; carries the partial count."""

    def __init__(self, cap: int, partial: int):
        super().__init__(f"enumeration overflow: more than {cap} homomorphisms "
                         f"(stopped at {partial})")
        self.cap = cap
        self.partial = partial


class GradeBoundError(RuntimeError):
    """An operation would leave the materialized grade range."""


class NotComposableError(ValueError):
    pass


def _candidate_index(X, q: int):
    """Elements of dimension <= q keyed by their two level-(q-1) faces."""
    cache = getattr(X, "_hom_candidate_index", None)
    if cache is None:
        cache = {}
        try:
            X._hom_candidate_index = cache
        except AttributeError:
            pass
    if q not in cache:
        index: dict = {}
        for e in X.elements():
            if X.dim(e) <= q:
                key = (X.face(e, MINUS, q - 1), X.face(e, PLUS, q - 1))
                index.setdefault(key, []).append(e)
        cache[q] = index
    return cache[q]


def enumerate_homs(shape, X, cap: int | None = None) -> list[Hom]:
    """All homomorphisms from the shape's pasting category into X.

    Deterministic: cells are filled in dimension-then-lexicographic
    order and candidates are tried in the target's canonical order.
    Raises EnumerationOverflow rather than silently truncating.
    """
    src = built(shape) if not isinstance(shape, MCategory) else shape
    cells = src.cell_list
    order = sorted(range(len(cells)),
                   key=lambda i: (len([v for v in cells[i] if v % 2 == 1]), cells[i]))
    depth_of = {cells[pos]: k for k, pos in enumerate(order)}
    # a member's value is fixed once its deepest supporting cell is assigned
    ready = [max(depth_of[c] for c in src.keys[m]) for m in src.elements()]
    dim0 = [e for e in X.elements() if X.dim(e) == 0]
    face_members = {}
    for i, cell in enumerate(cells):
        q = sum(1 for v in cell if v % 2 == 1)
        if q >= 1:
            atom = src.atom(cell)
            face_members[i] = (q, src.face(atom, MINUS, q - 1),
                               src.face(atom, PLUS, q - 1))

    assign: list = [None] * len(cells)
    memo: dict = {}
    added: list[list] = [[] for _ in order]
    out: list[Hom] = []

    def evaluate(member: int):
        got = memo.get(member)
        if got is None:
            witness = src.witnesses[member]
            if witness[0] == ATOM:
                got = assign[src.cell_pos[witness[1]]]
            else:
                _, left, right, p = witness
                got = X.compose(evaluate(left), evaluate(right), p)
            memo[member] = got
            added[ready[member]].append(member)
        return got

    def extend(k: int):
        if k == len(order):
            out.append(Hom(src, X, assign))
            if cap is not None and len(out) > cap:
                raise EnumerationOverflow(cap, len(out))
            return
        pos = order[k]
        if pos not in face_members:
            options = dim0
        else:
            q, neg, pos_face = face_members[pos]
            options = _candidate_index(X, q).get((evaluate(neg), evaluate(pos_face)), ())
        for e in options:
            assign[pos] = e
            extend(k + 1)
            # drop evaluations that depended on this candidate
            for member in added[k]:
                del memo[member]
            added[k].clear()
        assign[pos] = None

    extend(0)
    return out


class NerveCategory:
    """Cubical category with connections: the nerve of a globular table.

    Implements the cubical view protocol: ``elements(n)``, ``grade``,
    ``face``, ``degen``, ``conn``, ``compose``, ``composable`` plus
    grade bookkeeping.  Operations are memoized; elements are immutable.
    """

    def __init__(self, X, kmax: int | None = None, cap: int | None = None,
                 title: str = ""):
        self.target = X
        self.kmax = X.max_dim + 1 if kmax is None else kmax
        self.grades = [enumerate_homs(cube(n), X, cap) for n in range(self.kmax + 1)]
        self._pos = [{h: i for i, h in enumerate(g)} for g in self.grades]
        self._cache: dict = {}
        self.title = title or f"nerve(kmax={self.kmax})"

    # cubical view protocol

    def has_grade(self, n: int) -> bool:
        return 0 <= n <= self.kmax

    def elements(self, n: int) -> list[Hom]:
        if not self.has_grade(n):
            raise GradeBoundError(f"grade {n} beyond kmax={self.kmax}")
        return self.grades[n]

    def grade(self, x: Hom) -> int:
        return x.source.shape.arity

    def face(self, x: Hom, sign: int, i: int) -> Hom:
        n = self.grade(x)
        if not 1 <= i <= n:
            raise ValueError(f"face index {i} out of range in grade {n}")
        key = ("d", sign, i, x)
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = std_face(i, sign, n).then(x)
        return got

    def degen(self, x: Hom, i: int) -> Hom:
        n = self.grade(x)
        if not 1 <= i <= n + 1:
            raise ValueError(f"degeneracy index {i} out of range in grade {n}")
        if n + 1 > self.kmax:
            raise GradeBoundError(f"degeneracy leaves grade range at kmax={self.kmax}")
        key = ("e", 0, i, x)
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = std_degen(i, n + 1).then(x)
        return got

    def conn(self, x: Hom, sign: int, i: int) -> Hom:
        n = self.grade(x)
        if not 1 <= i <= n:
            raise ValueError(f"connection index {i} out of range in grade {n}")
        if n + 1 > self.kmax:
            raise GradeBoundError(f"connection leaves grade range at kmax={self.kmax}")
        key = ("g", sign, i, x)
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = std_conn(i, sign, n + 1).then(x)
        return got

    def amalgamate(self, x: Hom, y: Hom, i: int) -> Hom:
        """The unique hom on the doubled shape restricting to x and y."""
        n = self.grade(x)
        if self.face(x, PLUS, i) != self.face(y, MINUS, i):
            raise NotComposableError(f"not composable in direction {i}")
        dcat = built(double_shape(n, i))
        values = []
        for cell in dcat.cell_list:
            v = cell[i - 1]
            if v <= 2:
                values.append(x.value_on_cell(cell[:i - 1] + (v,) + cell[i:]))
            else:
                values.append(y.value_on_cell(cell[:i - 1] + (v - 2,) + cell[i:]))
        return Hom(dcat, self.target, values)

    def compose(self, x: Hom, y: Hom, i: int) -> Hom:
        key = ("c", i, x, y)
        got = self._cache.get(key)
        if got is None:
            joined = self.amalgamate(x, y, i)
            got = std_mu(i, self.grade(x)).then(joined)
            self._cache[key] = got
        return got

    def composable(self, x: Hom, y: Hom, i: int) -> bool:
        return (self.grade(x) == self.grade(y)
                and self.face(x, PLUS, i) == self.face(y, MINUS, i))

    def composable_pairs(self, n: int, i: int):
        """All composable pairs in grade n, direction i, canonical order."""
        by_minus: dict = {}
        for y in self.elements(n):
            by_minus.setdefault(self.face(y, MINUS, i), []).append(y)
        pairs = []
        for x in self.elements(n):
            for y in by_minus.get(self.face(x, PLUS, i), ()):
                pairs.append((x, y))
        return pairs

    def position(self, x: Hom) -> int:
        return self._pos[self.grade(x)][x]

    def describe(self, x: Hom) -> str:
        n = self.grade(x)
        pos = self._pos[n].get(x)
        tag = f"#{pos}" if pos is not None else "(derived)"
        return f"g{n}{tag}"

    def sort_key(self, x: Hom):
        return (self.grade(x), x.values)


def nerve(X, kmax: int | None = None, cap: int | None = None,
          title: str = "") -> NerveCategory:
    """Build the cubical nerve of a finite globular table."""
    return NerveCategory(X, kmax=kmax, cap=cap, title=title)
