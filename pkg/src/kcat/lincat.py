"""
Finite-dimensional vector spaces as the 2-category K.

1-cells are ordered strings of named spaces, 2-cells are exact sparse
linear maps between their tensor products. Horizontal composition is the
Kronecker product, vertical composition is matrix composition. String
diagrams are evaluated as a list of layers, each layer one cell applied at
a leg offset with identities on the remaining strands.
"""

import logging
import time
from collections import defaultdict
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF, QQ

from kcat.errors import ParseError, ScalarModeMismatch, ShapeMismatch, TypeMismatch
from kcat.reports import CheckReport, Witness

logger = logging.getLogger(__name__)

# Above this fill ratio vcomp switches to dense numpy object arrays
DENSE_FILL_THRESHOLD = 0.5
UNIT_NAME = "I"

Index = Tuple[int, ...]
Entry = Tuple[Index, Index]


def make_field(spec: str = "q"):
    """
    Build the scalar field for a session.

    Args:
        spec: "q" for exact rationals or "fp:<prime>" for a prime field

    Returns:
        A sympy polys domain (QQ or GF(p))
    """
    spec = spec.strip().lower()
    if spec in ("q", "qq"):
        return QQ
    if spec.startswith("fp:"):
        try:
            p = int(spec[3:])
        except ValueError:
            raise ValueError(f"bad prime in field spec {spec!r}")
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        return GF(p, symmetric=False)
    raise ValueError(f"unknown field spec {spec!r}")


def field_label(field) -> str:
    """Inverse of make_field."""
    if field == QQ:
        return "q"
    return f"fp:{field.mod}"


def field_characteristic(field) -> int:
    return 0 if field == QQ else int(field.mod)


def parse_rational(text: str) -> Fraction:
    """Read an exact literal "p" or "p/q"; zero denominators are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"bad rational literal {text!r}")
    if d == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def to_scalar(field, value: Any):
    """Convert an int, Fraction, "p/q" string or domain element into ``field``."""
    if isinstance(value, str):
        value = parse_rational(value)
    if isinstance(value, (bool, np.bool_)):
        value = int(value)
    if isinstance(value, (int, np.integer)):
        return field(int(value))
    if isinstance(value, Fraction):
        den = value.denominator
        if field != QQ and den % field.mod == 0:
            raise ZeroDivisionError(f"{value} has no image in {field}")
        return field(value.numerator) / field(den)
    if field.of_type(value):
        return value
    raise TypeError(f"cannot read {value!r} as a scalar of {field}")


def scalar_str(field, value) -> str:
    """Exact text form of a scalar: "p/q" or "p"."""
    return str(field.to_sympy(value))


class Space:
    """A named finite-dimensional space: a 1-cell of K."""

    def __init__(self, name: str, dim: int):
        if dim < 0:
            raise ValueError(f"space {name} has negative dimension {dim}")
        if name == UNIT_NAME and dim != 1:
            raise ValueError("the unit space I must have dimension 1")
        self._name = name
        self._dim = int(dim)

    @property
    def name(self) -> str:
        """Get the space id."""
        return self._name

    @property
    def dim(self) -> int:
        """Get the dimension."""
        return self._dim

    @property
    def is_unit(self) -> bool:
        """Check whether this is the reserved unit space."""
        return self._name == UNIT_NAME

    def __eq__(self, other) -> bool:
        return isinstance(other, Space) and other._name == self._name and other._dim == self._dim

    def __hash__(self) -> int:
        return hash((self._name, self._dim))

    def __repr__(self) -> str:
        return f"{self._name}:{self._dim}"


UNIT = Space(UNIT_NAME, 1)

# Ordered string of legs; () is the unit 1-cell
CellType = Tuple[Space, ...]


def cell_type(legs: Iterable[Space]) -> CellType:
    """Normalize a leg list; unit legs are dropped since I is the empty string."""
    return tuple(s for s in legs if not s.is_unit)


def dims_of(t: CellType) -> Tuple[int, ...]:
    return tuple(s.dim for s in t)


def total_dim(t: CellType) -> int:
    return int(np.prod(dims_of(t), dtype=np.int64))


def type_str(t: CellType) -> str:
    return "[" + ",".join(s.name for s in t) + "]"


def basis(t: CellType) -> Iterator[Index]:
    """All multi-indices of a cell type in lexicographic order."""
    for idx in np.ndindex(*dims_of(t)):
        yield tuple(int(i) for i in idx)


def _flat(idx: Index, dims: Tuple[int, ...]) -> int:
    if not dims:
        return 0
    return int(np.ravel_multi_index(idx, dims))


def _unflat(n: int, dims: Tuple[int, ...]) -> Index:
    if not dims:
        return ()
    return tuple(int(i) for i in np.unravel_index(n, dims))


class TwoCell:
    """
    An exact linear map between tensor products of named spaces.

    Entries are stored sparsely as {(row, col): scalar} where ``row`` indexes
    the codomain legs and ``col`` the domain legs. Zero entries are never
    stored.
    """

    def __init__(self, dom: Iterable[Space], cod: Iterable[Space],
                 entries: Optional[Mapping[Entry, Any]] = None, field=QQ,
                 name: Optional[str] = None):
        self._dom = cell_type(dom)
        self._cod = cell_type(cod)
        self._field = field
        self._name = name
        ddims, cdims = dims_of(self._dom), dims_of(self._cod)
        data: Dict[Entry, Any] = {}
        for (row, col), value in (entries or {}).items():
            row = tuple(int(i) for i in row)
            col = tuple(int(i) for i in col)
            if not _in_bounds(row, cdims) or not _in_bounds(col, ddims):
                raise ShapeMismatch(
                    f"entry {row}<-{col} out of bounds for {type_str(self._dom)}->{type_str(self._cod)}")
            v = to_scalar(field, value)
            if v:
                data[(row, col)] = v
        self._data = data

    @classmethod
    def _raw(cls, dom: CellType, cod: CellType, data: Dict[Entry, Any], field,
             name: Optional[str] = None) -> 'TwoCell':
        # Trusted constructor: data is already clean and typed
        cell = cls.__new__(cls)
        cell._dom = dom
        cell._cod = cod
        cell._field = field
        cell._name = name
        cell._data = data
        return cell

    @property
    def dom(self) -> CellType:
        """Get the domain legs."""
        return self._dom

    @property
    def cod(self) -> CellType:
        """Get the codomain legs."""
        return self._cod

    @property
    def field(self):
        """Get the scalar field."""
        return self._field

    @property
    def name(self) -> Optional[str]:
        """Get the optional display name."""
        return self._name

    @property
    def entries(self) -> Mapping[Entry, Any]:
        """Get a read-only view of the nonzero entries."""
        return MappingProxyType(self._data)

    @property
    def nnz(self) -> int:
        """Get the number of stored entries."""
        return len(self._data)

    @property
    def shape(self) -> Tuple[int, int]:
        """Get (total codomain dim, total domain dim)."""
        return total_dim(self._cod), total_dim(self._dom)

    @property
    def fill(self) -> float:
        """Get the ratio of stored entries to matrix size."""
        rows, cols = self.shape
        return 0.0 if rows * cols == 0 else len(self._data) / (rows * cols)

    def get(self, row: Index, col: Index):
        return self._data.get((tuple(row), tuple(col)), self._field.zero)

    def sorted_entries(self) -> List[Tuple[Entry, Any]]:
        return sorted(self._data.items())

    def named(self, name: str) -> 'TwoCell':
        return TwoCell._raw(self._dom, self._cod, self._data, self._field, name)

    def scaled(self, factor: Any) -> 'TwoCell':
        c = to_scalar(self._field, factor)
        data = {k: v * c for k, v in self._data.items()} if c else {}
        return TwoCell._raw(self._dom, self._cod, data, self._field, self._name)

    def plus(self, other: 'TwoCell') -> 'TwoCell':
        _check_same_field(self, other)
        if self._dom != other._dom or self._cod != other._cod:
            raise TypeMismatch(f"cannot add {self.signature()} and {other.signature()}")
        data = dict(self._data)
        for k, v in other._data.items():
            s = data.get(k, self._field.zero) + v
            if s:
                data[k] = s
            else:
                data.pop(k, None)
        return TwoCell._raw(self._dom, self._cod, data, self._field, self._name)

    def perturbed(self, row: Index, col: Index, delta: Any = 1) -> 'TwoCell':
        """Copy with one entry shifted by ``delta``; used for fault injection."""
        bump = TwoCell(self._dom, self._cod, {(row, col): delta}, self._field)
        return self.plus(bump)

    def to_dense(self) -> np.ndarray:
        """Dense object-dtype matrix of field elements (rows = codomain)."""
        rows, cols = self.shape
        out = np.full((rows, cols), self._field.zero, dtype=object)
        cd, dd = dims_of(self._cod), dims_of(self._dom)
        for (row, col), v in self._data.items():
            out[_flat(row, cd), _flat(col, dd)] = v
        return out

    @classmethod
    def from_dense(cls, dom: CellType, cod: CellType, matrix: np.ndarray, field,
                   name: Optional[str] = None) -> 'TwoCell':
        cd, dd = dims_of(cod), dims_of(dom)
        data = {}
        for (i, j), v in np.ndenumerate(matrix):
            v = to_scalar(field, v)
            if v:
                data[(_unflat(i, cd), _unflat(j, dd))] = v
        return cls._raw(tuple(dom), tuple(cod), data, field, name)

    def signature(self) -> str:
        label = self._name or "cell"
        return f"{label}: {type_str(self._dom)}->{type_str(self._cod)}"

    def __repr__(self) -> str:
        return f"TwoCell({self.signature()}, nnz={len(self._data)})"


def _in_bounds(idx: Index, dims: Tuple[int, ...]) -> bool:
    return len(idx) == len(dims) and all(0 <= i < d for i, d in zip(idx, dims))


def _check_same_field(*cells: TwoCell) -> None:
    fields = {c.field for c in cells}
    if len(fields) > 1:
        raise ScalarModeMismatch(f"mixed scalar fields: {sorted(str(f) for f in fields)}")


def identity(t: Iterable[Space], field=QQ) -> TwoCell:
    """The identity 2-cell on a cell type."""
    t = cell_type(t)
    one = field.one
    data = {(idx, idx): one for idx in basis(t)}
    return TwoCell._raw(t, t, data, field, "id" + type_str(t))


def hcomp(f: TwoCell, g: TwoCell, *more: TwoCell) -> TwoCell:
    """Horizontal composition f x g: Kronecker product, f's legs on the left."""
    _check_same_field(f, g, *more)
    out = {}
    for (r1, c1), v1 in f._data.items():
        for (r2, c2), v2 in g._data.items():
            out[(r1 + r2, c1 + c2)] = v1 * v2
    result = TwoCell._raw(f.dom + g.dom, f.cod + g.cod, out, f.field)
    for h in more:
        result = hcomp(result, h)
    return result


def vcomp(f: TwoCell, g: TwoCell) -> TwoCell:
    """Vertical composition f o g (g applied first)."""
    _check_same_field(f, g)
    if g.cod != f.dom:
        raise TypeMismatch(f"cannot compose {f.signature()} after {g.signature()}")
    if f.fill > DENSE_FILL_THRESHOLD and g.fill > DENSE_FILL_THRESHOLD:
        product = np.dot(f.to_dense(), g.to_dense()) if f.shape[1] else \
            np.full((f.shape[0], g.shape[1]), f.field.zero, dtype=object)
        return TwoCell.from_dense(g.dom, f.cod, product, f.field)
    return apply_at(g, f, 0)


def swap(x: Space, y: Space, field=QQ) -> TwoCell:
    """The symmetry of Vect: x (x) y -> y (x) x, (i, j) -> (j, i)."""
    dom = cell_type((x, y))
    if x.is_unit or y.is_unit:
        return identity(dom, field).named(f"swap[{x.name},{y.name}]")
    one = field.one
    data = {((j, i), (i, j)): one for i in range(x.dim) for j in range(y.dim)}
    return TwoCell._raw(dom, (y, x), data, field, f"swap[{x.name},{y.name}]")


def relabel(cell: TwoCell, dom: Iterable[Space], cod: Iterable[Space]) -> TwoCell:
    """Reinterpret a cell on differently named legs of the same dimensions."""
    dom, cod = cell_type(dom), cell_type(cod)
    if dims_of(dom) != dims_of(cell.dom) or dims_of(cod) != dims_of(cell.cod):
        raise ShapeMismatch(f"relabel of {cell.signature()} changes dimensions")
    return TwoCell._raw(dom, cod, dict(cell._data), cell.field, cell.name)


def equal(f: TwoCell, g: TwoCell, axiom_id: str = "equal") -> CheckReport:
    """
    Compare two cells entrywise.

    Returns:
        A passing report, or a failing one whose witness is the first
        differing (row, col) pair in lexicographic order.
    """
    start = time.perf_counter()
    if f.field != g.field:
        return CheckReport(axiom_id, Witness("ScalarModeMismatch"), time.perf_counter() - start)
    if f.dom != g.dom or f.cod != g.cod:
        logger.debug(f"[{axiom_id}] shape mismatch {f.signature()} vs {g.signature()}")
        return CheckReport(axiom_id, Witness("ShapeMismatch"), time.perf_counter() - start)
    a, b = f._data, g._data
    diff = [k for k in a.keys() | b.keys() if a.get(k) != b.get(k)]
    if not diff:
        return CheckReport(axiom_id, None, time.perf_counter() - start)
    row, col = min(diff)
    zero = f.field.zero
    witness = Witness("EntryMismatch", row, col,
                      scalar_str(f.field, a.get((row, col), zero)),
                      scalar_str(f.field, b.get((row, col), zero)))
    logger.debug(f"[{axiom_id}] fails: {witness!r}")
    return CheckReport(axiom_id, witness, time.perf_counter() - start)


# A diagram layer: a cell applied at a leg offset of the running codomain
Layer = Tuple[TwoCell, int]


def apply_at(state: TwoCell, cell: TwoCell, offset: int) -> TwoCell:
    """
    Post-compose ``state`` with ``cell`` acting on codomain legs
    offset..offset+len(cell.dom), identities elsewhere.
    """
    _check_same_field(state, cell)
    n = len(cell.dom)
    if offset < 0 or offset + n > len(state.cod) or state.cod[offset:offset + n] != cell.dom:
        raise TypeMismatch(
            f"cannot apply {cell.signature()} at leg {offset} of {type_str(state.cod)}")
    by_col = defaultdict(list)
    for (r, c), w in cell._data.items():
        by_col[c].append((r, w))
    zero = state.field.zero
    out: Dict[Entry, Any] = {}
    for (row, col), v in state._data.items():
        hits = by_col.get(row[offset:offset + n])
        if not hits:
            continue
        prefix, suffix = row[:offset], row[offset + n:]
        for r, w in hits:
            key = (prefix + r + suffix, col)
            out[key] = out.get(key, zero) + w * v
    new_cod = state.cod[:offset] + cell.cod + state.cod[offset + n:]
    return TwoCell._raw(state.dom, new_cod, {k: v for k, v in out.items() if v}, state.field)


def run_layers(dom: Iterable[Space], layers: Sequence[Layer], field=QQ,
               start: Optional[TwoCell] = None) -> TwoCell:
    """Evaluate a string diagram given as layers, top (domain) to bottom."""
    state = start if start is not None else identity(cell_type(dom), field)
    for cell, offset in layers:
        state = apply_at(state, cell, offset)
    return state


def whisker(cell: TwoCell, left: Iterable[Space] = (), right: Iterable[Space] = ()) -> TwoCell:
    """id_left x cell x id_right."""
    left, right = cell_type(left), cell_type(right)
    return run_layers(left + cell.dom + right, [(cell, len(left))], cell.field)


def mirror_cell(cell: TwoCell) -> TwoCell:
    """Reverse the order of tensor factors on both boundaries."""
    data = {(r[::-1], c[::-1]): v for (r, c), v in cell._data.items()}
    return TwoCell._raw(cell.dom[::-1], cell.cod[::-1], data, cell.field, cell.name)


def mirror_layers(dom: CellType, layers: Sequence[Layer]) -> Tuple[CellType, List[Layer]]:
    """Layer table of the mirror image of a diagram."""
    width = len(dom)
    out = []
    for cell, offset in layers:
        n = len(cell.dom)
        out.append((mirror_cell(cell), width - offset - n))
        width += len(cell.cod) - n
    return dom[::-1], out


class Braiding:
    """
    Table of the distributive laws tau_{X,Y}: XY -> YX between named spaces.

    Pairs missing from the table fall back to the flip of Vect unless
    ``flip_fallback`` is off, in which case a lookup miss is a TypeMismatch.
    """

    def __init__(self, cells: Optional[Mapping[Tuple[str, str], TwoCell]] = None,
                 field=QQ, flip_fallback: bool = True):
        self._cells = dict(cells or {})
        self._field = field
        self._flip_fallback = flip_fallback

    @property
    def field(self):
        """Get the scalar field."""
        return self._field

    @property
    def cells(self) -> Mapping[Tuple[str, str], TwoCell]:
        """Get the explicitly stored tau cells."""
        return MappingProxyType(self._cells)

    def with_cell(self, x: Space, y: Space, cell: TwoCell) -> 'Braiding':
        cells = dict(self._cells)
        cells[(x.name, y.name)] = cell
        return Braiding(cells, self._field, self._flip_fallback)

    def get(self, x: Space, y: Space) -> TwoCell:
        cell = self._cells.get((x.name, y.name))
        if cell is not None:
            return cell
        if not self._flip_fallback:
            raise TypeMismatch(f"no tau_{{{x.name},{y.name}}} in braiding table")
        return swap(x, y, self._field)

    def past(self, x: Space, legs: CellType) -> TwoCell:
        """tau_{x, Y1..Yn}: move x rightwards past every leg."""
        layers = [(self.get(x, y), i) for i, y in enumerate(legs)]
        return run_layers((x,) + tuple(legs), layers, self._field)

    def back(self, legs: CellType, y: Space) -> TwoCell:
        """tau_{X1..Xn, y}: move y leftwards past every leg."""
        n = len(legs)
        layers = [(self.get(legs[i], y), i) for i in range(n - 1, -1, -1)]
        return run_layers(tuple(legs) + (y,), layers, self._field)

    def cross(self, a: CellType, b: CellType) -> TwoCell:
        """tau_{A,B} for strings: [a..., b...] -> [b..., a...]."""
        layers = []
        for i in range(len(a) - 1, -1, -1):
            for j in range(len(b)):
                layers.append((self.get(a[i], b[j]), i + j))
        return run_layers(tuple(a) + tuple(b), layers, self._field)

    def permute(self, legs: CellType, order: Sequence[int]) -> List[Layer]:
        """
        Layers reordering ``legs`` so that position t ends up holding
        legs[order[t]]. Legs are pulled leftwards into place one at a time.
        """
        current = list(range(len(legs)))
        layers = []
        for t, want in enumerate(order):
            p = current.index(want)
            while p > t:
                left, right = legs[current[p - 1]], legs[current[p]]
                layers.append((self.get(left, right), p - 1))
                current[p - 1], current[p] = current[p], current[p - 1]
                p -= 1
        return layers

    def interleave(self, a: CellType, b: CellType) -> List[Layer]:
        """Layers taking a1..an b1..bn to a1 b1 a2 b2 ... an bn."""
        n = len(a)
        if len(b) != n:
            raise TypeMismatch("interleave needs strings of equal length")
        order = [k for i in range(n) for k in (i, n + i)]
        return self.permute(tuple(a) + tuple(b), order)

    def deinterleave(self, a: CellType, b: CellType) -> List[Layer]:
        """Layers taking a1 b1 ... an bn to a1..an b1..bn."""
        n = len(a)
        if len(b) != n:
            raise TypeMismatch("deinterleave needs strings of equal length")
        legs = tuple(s for pair in zip(a, b) for s in pair)
        order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
        return self.permute(legs, order)
