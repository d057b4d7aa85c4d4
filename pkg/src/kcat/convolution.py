"""
Convolution algebras K(A)(D, C).

An element is a 2-cell D -> C where D is a string of comonads and C a
string of monads. The product comultiplies the domain, applies both
elements side by side and multiplies the codomain; strings of several
(co)monads are combined through a braiding table.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from kcat.errors import ContextMismatch
from kcat.lincat import (Braiding, CellType, Layer, TwoCell, basis, hcomp, run_layers, type_str)
from kcat.structures import ComonadDesc, MonadDesc

logger = logging.getLogger(__name__)


def _block_order(lengths: Sequence[int]) -> Tuple[List[int], List[int]]:
    """
    Leg orders for a string of blocks C1..Cn doubled.

    Returns (split, merged): ``split`` takes C1 C1 C2 C2 ... to C1..Cn C1..Cn,
    ``merged`` takes C1..Cn C1..Cn to C1 C1 C2 C2 ...
    """
    total = sum(lengths)
    first, second, merged = [], [], []
    pos = 0
    for n in lengths:
        first.extend(range(pos, pos + n))
        second.extend(range(pos + n, pos + 2 * n))
        pos += 2 * n
    split = first + second
    offset = 0
    for n in lengths:
        merged.extend(range(offset, offset + n))
        merged.extend(range(total + offset, total + offset + n))
        offset += n
    return split, merged


def _same_cell(a: TwoCell, b: TwoCell) -> bool:
    return a is b or (a.dom == b.dom and a.cod == b.cod and a.entries == b.entries)


class ConvolutionContext:
    """The comonads on the domain, the monads on the codomain and the braiding between them."""

    def __init__(self, comonads: Sequence[ComonadDesc] = (), monads: Sequence[MonadDesc] = (),
                 braiding: Optional[Braiding] = None, field=None):
        self._comonads = tuple(comonads)
        self._monads = tuple(monads)
        if field is None:
            descs = self._comonads + self._monads
            if not descs:
                raise ContextMismatch("a context without (co)monads needs an explicit field")
            field = descs[0].field
        self._field = field
        self._braiding = braiding if braiding is not None else Braiding(field=field)

    @property
    def comonads(self) -> Tuple[ComonadDesc, ...]:
        """Get the domain comonads."""
        return self._comonads

    @property
    def monads(self) -> Tuple[MonadDesc, ...]:
        """Get the codomain monads."""
        return self._monads

    @property
    def braiding(self) -> Braiding:
        """Get the braiding used to combine several (co)monads."""
        return self._braiding

    @property
    def field(self):
        """Get the scalar field."""
        return self._field

    @property
    def dom(self) -> CellType:
        return tuple(leg for c in self._comonads for leg in c.carrier)

    @property
    def cod(self) -> CellType:
        return tuple(leg for m in self._monads for leg in m.carrier)

    def comultiplication(self) -> TwoCell:
        """D -> D D: every comonad comultiplied, copies sorted into two strings."""
        layers: List[Layer] = []
        offset = 0
        for c in self._comonads:
            layers.append((c.delta, offset))
            offset += 2 * len(c.carrier)
        doubled = tuple(leg for c in self._comonads for leg in c.carrier + c.carrier)
        split, _ = _block_order([len(c.carrier) for c in self._comonads])
        layers.extend(self._braiding.permute(doubled, split))
        return run_layers(self.dom, layers, self._field)

    def multiplication(self) -> TwoCell:
        """C C -> C: copies paired up through the braiding, then every monad multiplies."""
        cod = self.cod
        _, merged = _block_order([len(m.carrier) for m in self._monads])
        layers = list(self._braiding.permute(cod + cod, merged))
        offset = 0
        for m in self._monads:
            layers.append((m.mu, offset))
            offset += len(m.carrier)
        return run_layers(cod + cod, layers, self._field)

    def unit_cell(self) -> TwoCell:
        """The convolution unit: counits on the domain, units on the codomain."""
        layers: List[Layer] = [(c.eps, 0) for c in self._comonads]
        offset = 0
        for m in self._monads:
            layers.append((m.eta, offset))
            offset += len(m.carrier)
        return run_layers(self.dom, layers, self._field)

    def matches(self, other: 'ConvolutionContext') -> bool:
        if self is other:
            return True
        if len(self._comonads) != len(other._comonads) or len(self._monads) != len(other._monads):
            return False
        for a, b in zip(self._comonads, other._comonads):
            if not (_same_cell(a.delta, b.delta) and _same_cell(a.eps, b.eps)):
                return False
        for a, b in zip(self._monads, other._monads):
            if not (_same_cell(a.mu, b.mu) and _same_cell(a.eta, b.eta)):
                return False
        return self._field == other._field

    def __repr__(self) -> str:
        return f"ConvolutionContext({type_str(self.dom)} -> {type_str(self.cod)})"


class ConvolutionElement:
    """A 2-cell viewed inside a convolution algebra."""

    def __init__(self, cell: TwoCell, context: ConvolutionContext):
        if cell.dom != context.dom or cell.cod != context.cod:
            raise ContextMismatch(f"{cell.signature()} does not live in {context!r}")
        self._cell = cell
        self._context = context

    @property
    def cell(self) -> TwoCell:
        """Get the underlying 2-cell."""
        return self._cell

    @property
    def context(self) -> ConvolutionContext:
        """Get the convolution algebra this element lives in."""
        return self._context

    def __mul__(self, other: 'ConvolutionElement') -> 'ConvolutionElement':
        return convolution_product(self, other)

    def __repr__(self) -> str:
        return f"ConvolutionElement({self._cell.signature()})"


def convolution_unit(context: ConvolutionContext) -> ConvolutionElement:
    return ConvolutionElement(context.unit_cell(), context)


def _product_cell(context: ConvolutionContext, f: TwoCell, g: TwoCell,
                  delta: Optional[TwoCell] = None, mu: Optional[TwoCell] = None) -> TwoCell:
    delta = delta if delta is not None else context.comultiplication()
    mu = mu if mu is not None else context.multiplication()
    layers = [(delta, 0), (hcomp(f, g), 0), (mu, 0)]
    return run_layers(context.dom, layers, context.field)


def convolution_product(f: ConvolutionElement, g: ConvolutionElement) -> ConvolutionElement:
    """
    f * g = mu_C o (f x g) o Delta_D.

    Raises:
        ContextMismatch: when f and g live in different convolution algebras
    """
    if not f.context.matches(g.context):
        raise ContextMismatch(f"{f.context!r} and {g.context!r} differ")
    return ConvolutionElement(_product_cell(f.context, f.cell, g.cell), f.context)


def convolution_invert_diagnosed(f: ConvolutionElement) -> Tuple[Optional[ConvolutionElement], str]:
    """
    Solve g * f = 1 by exact elimination, then check f * g = 1.

    Returns:
        (inverse, "two-sided") on success, otherwise (None, reason) with
        reason "no left inverse" or "one-sided"
    """
    ctx = f.context
    field = ctx.field
    dom, cod = ctx.dom, ctx.cod
    unknowns = [(r, c) for r in basis(cod) for c in basis(dom)]
    row_of = {key: i for i, key in enumerate(unknowns)}
    n = len(unknowns)
    if n == 0:
        return ConvolutionElement(TwoCell._raw(dom, cod, {}, field), ctx), "two-sided"
    zero = field.zero
    delta, mu = ctx.comultiplication(), ctx.multiplication()
    columns = []
    # g * f is linear in g: one column per elementary cell
    for key in unknowns:
        e = TwoCell._raw(dom, cod, {key: field.one}, field)
        column = [zero] * n
        for entry, v in _product_cell(ctx, e, f.cell, delta, mu).entries.items():
            column[row_of[entry]] = v
        columns.append(column)
    target = [zero] * n
    for entry, v in ctx.unit_cell().entries.items():
        target[row_of[entry]] = v
    rows = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(n)]
    augmented = DomainMatrix(rows, (n, n + 1), field)
    reduced, pivots = augmented.rref()
    if n in pivots:
        logger.info(f"{f!r} has no left convolution inverse")
        return None, "no left inverse"
    table = reduced.to_ddm()
    solution = {}
    for i, p in enumerate(pivots):
        v = table[i][n]
        if v:
            solution[unknowns[p]] = v
    g = ConvolutionElement(TwoCell._raw(dom, cod, solution, field), ctx)
    check = _product_cell(ctx, f.cell, g.cell, delta, mu)
    if dict(check.entries) != dict(ctx.unit_cell().entries):
        logger.info(f"{f!r} has a left convolution inverse that is not a right inverse")
        return None, "one-sided"
    return g, "two-sided"


def convolution_invert(f: ConvolutionElement) -> Optional[ConvolutionElement]:
    """Two-sided convolution inverse of ``f``, or None."""
    inverse, _ = convolution_invert_diagnosed(f)
    return inverse


def power_context(comonad_or_monad, times: int, braiding: Optional[Braiding] = None,
                  on_domain: bool = True) -> ConvolutionContext:
    """Context with ``times`` copies of one (co)monad on one side and nothing on the other."""
    if on_domain:
        return ConvolutionContext([comonad_or_monad] * times, [], braiding, comonad_or_monad.field)
    return ConvolutionContext([], [comonad_or_monad] * times, braiding, comonad_or_monad.field)
