"""The finite pasting category of a product-of-paths shape.

Members are downward-closed cell sets; composition at any level is set
union, defined exactly when the facing boundaries agree.  The table is
built by seeding one atom per cell (faces from the product face
formula) and saturating under binary composition until fixpoint,
keyed by underlying set throughout.

Every consumer of a finite globular table works against the small
"omega view" protocol implemented here and by the folded-part category:
``elements()``, ``dim(x)``, ``face(x, sign, p)``, ``compose(x, y, p)``,
``composable(x, y, p)``, ``max_dim``, ``sort_key(x)``, ``describe(x)``.
"""

from __future__ import annotations

from . import shapes
from .reports import Report
from .shapes import MINUS, PLUS, SIGNS, PathProduct

ATOM = "atom"
COMPOSE = "compose"


class InconsistencyError(RuntimeError):
    """Presentation inconsistency: one set, two disagreeing face tables."""


class NotComposableError(ValueError):
    pass


class _BuildRec:
    __slots__ = ("key", "enc", "dim", "faces", "witness")

    def __init__(self, key, enc, dim, faces, witness):
        self.key = key          # frozenset of cells
        self.enc = enc          # sorted tuple of cells (canonical encoding)
        self.dim = dim
        self.faces = faces      # list over p < dim of (neg key, pos key)
        self.witness = witness

    def face(self, sign: int, p: int):
        if p >= self.dim:
            return self.key
        return self.faces[p][0 if sign == MINUS else 1]


class MCategory:
    """Fully materialized pasting category of one shape."""

    def __init__(self, shape: PathProduct, keys, dims, faces, witnesses, comp, atoms):
        self.shape = shape
        self.keys = keys            # member id -> sorted tuple of cells
        self.key_index = {frozenset(k): i for i, k in enumerate(keys)}
        self.dims = dims
        self.faces = faces          # member id -> tuple over p < dim of (neg id, pos id)
        self.witnesses = witnesses  # member id -> (ATOM, cell) | (COMPOSE, l, r, p)
        self.comp = comp            # (x, y, p) -> z, for p < arity
        self.atoms = atoms          # cell -> member id
        self.max_dim = max(dims) if dims else 0
        self.cell_list = shape.cells()
        self.cell_pos = {c: i for i, c in enumerate(self.cell_list)}
        self._comp_by_level = None

    # omega view protocol

    def elements(self):
        return range(len(self.keys))

    def dim(self, x: int) -> int:
        return self.dims[x]

    def face(self, x: int, sign: int, p: int) -> int:
        if p >= self.dims[x]:
            return x
        return self.faces[x][p][0 if sign == MINUS else 1]

    def composable(self, x: int, y: int, p: int) -> bool:
        if p >= self.shape.arity:
            return x == y
        return (x, y, p) in self.comp

    def compose(self, x: int, y: int, p: int) -> int:
        if p >= self.shape.arity:
            if x == y:
                return x
            raise NotComposableError(f"not composable at level {p}")
        try:
            return self.comp[(x, y, p)]
        except KeyError:
            raise NotComposableError(f"not composable at level {p}") from None

    def sort_key(self, x: int):
        return self.keys[x]

    def composites(self, p: int):
        if self._comp_by_level is None:
            by_level = {}
            for (x, y, q), z in self.comp.items():
                by_level.setdefault(q, []).append((x, y, z))
            self._comp_by_level = by_level
        return self._comp_by_level.get(p, ())

    def describe(self, x: int) -> str:
        return "{" + " ".join(shapes.format_cell(c) for c in self.keys[x]) + "}"

    # lookups

    def __len__(self) -> int:
        return len(self.keys)

    def member_with_cells(self, cells) -> int:
        key = frozenset(cells)
        try:
            return self.key_index[key]
        except KeyError:
            raise KeyError(f"no member with cell set {sorted(key)!r}") from None

    def atom(self, cell) -> int:
        return self.atoms[cell]

    def top(self) -> int:
        """The member carried by the whole complex."""
        return self.member_with_cells(self.shape.cells())

    def elements_of_dim_le(self, q: int):
        return [x for x in self.elements() if self.dims[x] <= q]


def _composite_faces(xrec: _BuildRec, yrec: _BuildRec, p: int):
    zkey = xrec.key | yrec.key
    maxd = max(xrec.dim, yrec.dim)
    faces = []
    for q in range(maxd):
        if q == p:
            faces.append((xrec.face(MINUS, p), yrec.face(PLUS, p)))
        else:
            faces.append((xrec.face(MINUS, q) | yrec.face(MINUS, q),
                          xrec.face(PLUS, q) | yrec.face(PLUS, q)))
    dim = maxd
    while dim > 0 and faces[dim - 1] == (zkey, zkey):
        dim -= 1
    return zkey, dim, faces[:dim]


def build_m(shape: PathProduct) -> MCategory:
    """Materialize the pasting category of a shape by saturation."""
    arity = shape.arity
    records: dict[frozenset, _BuildRec] = {}
    order: list[frozenset] = []
    comp: dict[tuple[frozenset, frozenset, int], frozenset] = {}
    # composability indexes per level: boundary key -> member keys, insertion order
    by_minus: list[dict] = [dict() for _ in range(arity)]
    by_plus: list[dict] = [dict() for _ in range(arity)]

    def add(rec: _BuildRec):
        records[rec.key] = rec
        order.append(rec.key)
        for p in range(arity):
            by_minus[p].setdefault(rec.face(MINUS, p), []).append(rec.key)
            by_plus[p].setdefault(rec.face(PLUS, p), []).append(rec.key)

    for cell in shape.cells():
        dim = shapes.cell_dim(cell)
        faces = [(shapes.cell_face(cell, MINUS, p), shapes.cell_face(cell, PLUS, p))
                 for p in range(dim)]
        key = shapes.closure([cell])
        add(_BuildRec(key, tuple(sorted(key)), dim, faces, (ATOM, cell)))

    def try_compose(xkey, ykey, p):
        if (xkey, ykey, p) in comp:
            return
        xrec, yrec = records[xkey], records[ykey]
        zkey, dim, faces = _composite_faces(xrec, yrec, p)
        comp[(xkey, ykey, p)] = zkey
        if zkey in records:
            zrec = records[zkey]
            if zrec.dim != dim or zrec.faces != faces:
                raise InconsistencyError(
                    f"presentation inconsistency: {sorted(zkey)!r} has two "
                    f"decompositions with different face tables")
            return
        add(_BuildRec(zkey, tuple(sorted(zkey)), dim, faces,
                      (COMPOSE, xkey, ykey, p)))

    cursor = 0
    while cursor < len(order):
        mkey = order[cursor]
        cursor += 1
        mrec = records[mkey]
        for p in range(arity):
            for ykey in list(by_minus[p].get(mrec.face(PLUS, p), ())):
                try_compose(mkey, ykey, p)
            for xkey in list(by_plus[p].get(mrec.face(MINUS, p), ())):
                try_compose(xkey, mkey, p)

    # canonical member order, independent of discovery order
    final = sorted(records.values(), key=lambda rec: rec.enc)
    ids = {rec.key: i for i, rec in enumerate(final)}

    def face_id(key):
        if key not in ids:
            raise InconsistencyError(
                f"face set {sorted(key)!r} was never reached by composition")
        return ids[key]

    keys = [rec.enc for rec in final]
    dims = [rec.dim for rec in final]
    faces = [tuple((face_id(neg), face_id(pos)) for neg, pos in rec.faces)
             for rec in final]
    witnesses = []
    atoms = {}
    for i, rec in enumerate(final):
        if rec.witness[0] == ATOM:
            witnesses.append(rec.witness)
            atoms[rec.witness[1]] = i
        else:
            _, lkey, rkey, p = rec.witness
            witnesses.append((COMPOSE, ids[lkey], ids[rkey], p))
    comp_ids = {(ids[x], ids[y], p): ids[z] for (x, y, p), z in comp.items()}
    return MCategory(shape, keys, dims, faces, witnesses, comp_ids, atoms)


_CACHE: dict[tuple[int, ...], MCategory] = {}


def built(shape: PathProduct) -> MCategory:
    """Process-wide cache of built tables (they are immutable)."""
    got = _CACHE.get(shape.lengths)
    if got is None:
        got = _CACHE[shape.lengths] = build_m(shape)
    return got


def product_member(xcat: MCategory, x: int, ycat: MCategory, y: int,
                   target: MCategory) -> int:
    """The member of the product shape carried by a product of members.

    The level-p faces of the result are asserted against the product
    face formula before returning.
    """
    cells = frozenset(s + t for s in xcat.keys[x] for t in ycat.keys[y])
    try:
        z = target.member_with_cells(cells)
    except KeyError:
        raise InconsistencyError(
            f"product of {xcat.describe(x)} and {ycat.describe(y)} "
            f"is not a member of M({target.shape.format()})") from None
    for p in range(target.dim(z)):
        for sign in SIGNS:
            expect = set()
            for i in range(p + 1):
                xs = xcat.keys[xcat.face(x, sign, i)]
                ysign = sign if i % 2 == 0 else -sign
                ys = ycat.keys[ycat.face(y, ysign, p - i)]
                expect.update(s + t for s in xs for t in ys)
            if frozenset(expect) != frozenset(target.keys[target.face(z, sign, p)]):
                raise InconsistencyError(
                    f"product face formula fails for {target.describe(z)} "
                    f"at level {p}")
    return z


def _sign_name(sign: int) -> str:
    return "-" if sign == MINUS else "+"


def check_omega_axioms(view, report: Report | None = None) -> Report:
    """Exhaustively audit the globular category axioms on a finite table.

    Works against the omega view protocol; violations are data in the
    returned report, not exceptions.
    """
    if report is None:
        report = Report(f"omega axioms: {getattr(view, 'title', view.__class__.__name__)}")
    elems = list(view.elements())
    maxd = view.max_dim
    levels = range(maxd)

    def show(x):
        return view.describe(x)

    # (vii) dimension is the least level where both faces fix the element
    it = report.item("1.1.vii.dimension")
    for x in elems:
        d = view.dim(x)
        for p in range(maxd + 2):
            fixed = view.face(x, MINUS, p) == x and view.face(x, PLUS, p) == x
            it.check(fixed == (p >= d), lambda x=x, p=p: f"dim({show(x)}) vs level {p}")

    # (ii) face of face
    it = report.item("1.1.ii.face_face")
    for x in elems:
        for p in range(maxd + 1):
            for a in SIGNS:
                fx = view.face(x, a, p)
                for q in range(maxd + 1):
                    for b in SIGNS:
                        want = view.face(x, b, q) if q < p else fx
                        it.check(view.face(fx, b, q) == want,
                                 lambda x=x, p=p, q=q, a=a, b=b:
                                 f"d^{_sign_name(b)}_{q} d^{_sign_name(a)}_{p} {show(x)}")

    # per-level composable-pair join, reused below
    def level_pairs(p):
        by_plus: dict = {}
        for x in elems:
            by_plus.setdefault(view.face(x, PLUS, p), []).append(x)
        for y in elems:
            for x in by_plus.get(view.face(y, MINUS, p), ()):
                yield x, y

    # (i) composability is exactly boundary agreement
    it = report.item("1.1.i.domain")
    for p in levels:
        for x, y in level_pairs(p):
            it.check(view.composable(x, y, p),
                     lambda x=x, y=y, p=p: f"{show(x)} #_{p} {show(y)} should be defined")
        if hasattr(view, "composites"):
            for x, y, _ in view.composites(p):
                it.check(view.face(x, PLUS, p) == view.face(y, MINUS, p),
                         lambda x=x, y=y, p=p:
                         f"{show(x)} #_{p} {show(y)} defined without matching boundary")
        else:
            for x in elems:
                for y in elems:
                    if view.composable(x, y, p):
                        it.check(view.face(x, PLUS, p) == view.face(y, MINUS, p),
                                 lambda x=x, y=y, p=p:
                                 f"{show(x)} #_{p} {show(y)} defined without "
                                 f"matching boundary")

    comp: dict[int, dict] = {p: {} for p in levels}
    for p in levels:
        for x, y in level_pairs(p):
            if view.composable(x, y, p):
                comp[p][(x, y)] = view.compose(x, y, p)

    # (iii) faces of a composite
    it = report.item("1.1.iii.comp_faces")
    for p in levels:
        for (x, y), z in comp[p].items():
            it.check(view.face(z, MINUS, p) == view.face(x, MINUS, p),
                     lambda x=x, y=y, p=p: f"d^-_{p}({show(x)} #_{p} {show(y)})")
            it.check(view.face(z, PLUS, p) == view.face(y, PLUS, p),
                     lambda x=x, y=y, p=p: f"d^+_{p}({show(x)} #_{p} {show(y)})")
            for q in range(maxd + 1):
                if q == p:
                    continue
                for b in SIGNS:
                    ok = (view.composable(view.face(x, b, q), view.face(y, b, q), p)
                          and view.compose(view.face(x, b, q), view.face(y, b, q), p)
                          == view.face(z, b, q))
                    it.check(ok, lambda x=x, y=y, p=p, q=q, b=b:
                             f"d^{_sign_name(b)}_{q}({show(x)} #_{p} {show(y)})")

    # (iv) boundaries are identities
    it = report.item("1.1.iv.identities")
    for x in elems:
        for p in levels:
            lo, hi = view.face(x, MINUS, p), view.face(x, PLUS, p)
            ok = (view.composable(lo, x, p) and view.compose(lo, x, p) == x
                  and view.composable(x, hi, p) and view.compose(x, hi, p) == x)
            it.check(ok, lambda x=x, p=p: f"identity law at level {p} for {show(x)}")

    # (v) associativity
    it = report.item("1.1.v.associativity")
    for p in levels:
        by_first: dict = {}
        for (y, w), u in comp[p].items():
            by_first.setdefault(y, []).append((w, u))
        for (x, y), z in comp[p].items():
            for w, u in by_first.get(y, ()):
                ok = (view.composable(z, w, p) and view.composable(x, u, p)
                      and view.compose(z, w, p) == view.compose(x, u, p))
                it.check(ok, lambda x=x, y=y, w=w, p=p:
                         f"({show(x)} #_{p} {show(y)}) #_{p} {show(w)}")

    # (vi) interchange
    it = report.item("1.1.vi.interchange")
    for p in levels:
        for q in levels:
            if p == q:
                continue
            by_first_q: dict = {}
            for (a, b), u in comp[q].items():
                by_first_q.setdefault(a, []).append(b)
            by_first_p: dict = {}
            for (a, b), u in comp[p].items():
                by_first_p.setdefault(a, []).append(b)
            for (x, y), z in comp[p].items():
                for xp in by_first_q.get(x, ()):
                    for yp in by_first_p.get(xp, ()):
                        if (y, yp) not in comp[q]:
                            continue
                        zp = comp[p][(xp, yp)]
                        lhs_ok = view.composable(z, zp, q)
                        rhs_ok = (view.composable(comp[q][(x, xp)], comp[q][(y, yp)], p))
                        ok = (lhs_ok and rhs_ok
                              and view.compose(z, zp, q)
                              == view.compose(comp[q][(x, xp)], comp[q][(y, yp)], p))
                        it.check(ok, lambda x=x, y=y, xp=xp, yp=yp, p=p, q=q:
                                 f"interchange #_{p}/#_{q} at {show(x)},{show(y)},"
                                 f"{show(xp)},{show(yp)}")
    return report
