"""Products of directed paths: shapes, cells, face structure.

A shape is a finite product of directed paths; factor i is the path
[0, n_i] with n_i >= 1 (the empty product is the point).  Cells are
encoded in interval coordinates: in each factor, the vertex {m} is the
even number 2m and the edge [m-1, m] is the odd number 2m-1.  A cell is
a plain tuple of such coordinates, one per factor, and its dimension is
the number of odd entries.  Lexicographic order on these tuples is the
canonical order used everywhere (member keys, search order, reports).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

MINUS = -1
PLUS = 1
SIGNS = (MINUS, PLUS)

Cell = tuple  # tuple[int, ...], one interval coordinate per factor


class ShapeError(ValueError):
    """Invalid shape or cell literal."""


@dataclass(frozen=True)
class PathProduct:
    """A product of directed paths, given by the tuple of path lengths."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        for n in self.lengths:
            if not isinstance(n, int) or n < 1:
                raise ShapeError(f"path lengths must be >= 1, got {self.lengths!r}")

    @property
    def arity(self) -> int:
        return len(self.lengths)

    def cell_count(self) -> int:
        count = 1
        for n in self.lengths:
            count *= 2 * n + 1
        return count

    def cells(self) -> list[Cell]:
        """All cells in canonical (lexicographic) order."""
        ranges = [range(2 * n + 1) for n in self.lengths]
        return [tuple(c) for c in product(*ranges)]

    def contains(self, cell: Cell) -> bool:
        if len(cell) != self.arity:
            return False
        return all(0 <= v <= 2 * n for v, n in zip(cell, self.lengths))

    def times(self, other: "PathProduct") -> "PathProduct":
        return PathProduct(self.lengths + other.lengths)

    def format(self) -> str:
        return "x".join(str(n) for n in self.lengths)

    @staticmethod
    def parse(text: str) -> "PathProduct":
        """Parse the shape grammar "n1xn2x...xnk"; "" is the empty product."""
        text = text.strip()
        if text == "":
            return PathProduct(())
        try:
            lengths = tuple(int(part) for part in text.split("x"))
        except ValueError:
            raise ShapeError(f"bad shape literal {text!r}") from None
        return PathProduct(lengths)


def cube(n: int) -> PathProduct:
    """The n-fold product of unit paths (the point for n = 0)."""
    return PathProduct((1,) * n)


def double_shape(n: int, i: int) -> PathProduct:
    """The n-factor shape with a length-2 path in slot i (1-based)."""
    if not 1 <= i <= n:
        raise ShapeError(f"slot {i} out of range for {n} factors")
    return PathProduct((1,) * (i - 1) + (2,) + (1,) * (n - i))


def cell_dim(cell: Cell) -> int:
    return sum(1 for v in cell if v % 2 == 1)


def format_cell(cell: Cell) -> str:
    return "(" + ",".join(str(v) for v in cell) + ")"


def parse_cell(text: str) -> Cell:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ShapeError(f"bad cell literal {text!r}")
    body = text[1:-1].strip()
    if body == "":
        return ()
    try:
        return tuple(int(part) for part in body.split(","))
    except ValueError:
        raise ShapeError(f"bad cell literal {text!r}") from None


def signed_faces(cell: Cell, sign: int) -> frozenset[Cell]:
    """Codimension-1 faces of a cell carrying the given sign.

    Counting odd entries left to right, the j-th edge factor sends its
    lower-end replacement to the negative side for odd j and to the
    positive side for even j, and symmetrically for the upper end.
    """
    if cell_dim(cell) == 0:
        raise ShapeError(f"cell {cell!r} has no faces")
    faces = []
    j = 0
    for pos, v in enumerate(cell):
        if v % 2 == 0:
            continue
        j += 1
        # replacement sign that lands on the negative side alternates -,+,-,...
        negative_end = MINUS if j % 2 == 1 else PLUS
        end = negative_end if sign == MINUS else -negative_end
        faces.append(cell[:pos] + (v + end,) + cell[pos + 1:])
    return frozenset(faces)


def cell_faces(cell: Cell) -> frozenset[Cell]:
    """All codimension-1 faces (both endpoint replacements of each edge)."""
    faces = []
    for pos, v in enumerate(cell):
        if v % 2 == 1:
            faces.append(cell[:pos] + (v - 1,) + cell[pos + 1:])
            faces.append(cell[:pos] + (v + 1,) + cell[pos + 1:])
    return frozenset(faces)


def closure(cells) -> frozenset[Cell]:
    """Downward closure of a set of cells under taking faces."""
    seen = set(cells)
    stack = list(seen)
    while stack:
        cell = stack.pop()
        for face in cell_faces(cell):
            if face not in seen:
                seen.add(face)
                stack.append(face)
    return frozenset(seen)


def is_closed(cells) -> bool:
    cells = set(cells)
    return all(face in cells for cell in cells for face in cell_faces(cell))


def _interval_face(v: int, sign: int, p: int) -> frozenset[Cell]:
    # single path factor: vertex 2m is its own face at every level
    if v % 2 == 0:
        return frozenset({(v,)})
    if p >= 1:
        return frozenset({(v - 1,), (v,), (v + 1,)})
    return frozenset({(v - 1,)}) if sign == MINUS else frozenset({(v + 1,)})


def cell_face(cell: Cell, sign: int, p: int) -> frozenset[Cell]:
    """Underlying set of the level-p face of a cell, as a closed subcomplex.

    Computed by iterating the binary product face formula
    d^a_p(x*y) = union over i of d^a_i(x) * d^{(-)^i a}_{p-i}(y)
    over the factors; for p >= dim the closure of the cell comes out.
    """
    if p < 0:
        raise ShapeError(f"face level must be >= 0, got {p}")
    if len(cell) == 0:
        return frozenset({()})
    if len(cell) == 1:
        return _interval_face(cell[0], sign, p)
    head, rest = cell[0], cell[1:]
    out = set()
    for i in range(p + 1):
        head_part = _interval_face(head, sign, i)
        rest_sign = sign if i % 2 == 0 else -sign
        rest_part = cell_face(rest, rest_sign, p - i)
        for (hv,) in head_part:
            for r in rest_part:
                out.add((hv,) + r)
    return frozenset(out)
