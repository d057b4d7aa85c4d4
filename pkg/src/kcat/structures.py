"""
Typed descriptors bundling the 2-cells of each structure.

Descriptors only fix shapes; whether the bundled cells satisfy their laws
is decided by the checkers in kcat.axioms. Every descriptor lists its cells
with the boundaries it expects through ``shape_table``.
"""

from dataclasses import dataclass, fields, is_dataclass, replace
from enum import Enum
from typing import FrozenSet, Iterator, List, Optional, Tuple

from kcat.errors import UnknownRole
from kcat.lincat import (CellType, Space, TwoCell, cell_type, identity, mirror_cell, run_layers,
                         type_str)
from kcat.reports import CheckReport, Witness


class DistKind(Enum):
    """Which (co)monad structure a distributive law is compatible with."""
    LEFT_MONADIC = "left-monadic"
    RIGHT_MONADIC = "right-monadic"
    LEFT_COMONADIC = "left-comonadic"
    RIGHT_COMONADIC = "right-comonadic"

    @classmethod
    def parse(cls, text: str) -> 'DistKind':
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValueError(f"unknown distributive law kind {text!r}")


ALL_KINDS = frozenset(DistKind)


class Side(Enum):
    """Which side a module, comodule or YD structure acts from."""
    LEFT = "left"
    RIGHT = "right"

    def flipped(self) -> 'Side':
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


# (role, cell, expected dom, expected cod)
ShapeRow = Tuple[str, TwoCell, CellType, CellType]


def _legs(x) -> CellType:
    return (x,) if isinstance(x, Space) else cell_type(x)


@dataclass(frozen=True)
class MonadDesc:
    """An associative unital algebra (carrier, mu, eta)."""

    carrier: CellType
    mu: TwoCell
    eta: TwoCell
    name: Optional[str] = None

    @classmethod
    def on(cls, carrier, mu: TwoCell, eta: TwoCell, name: Optional[str] = None) -> 'MonadDesc':
        return cls(_legs(carrier), mu, eta, name)

    @property
    def field(self):
        return self.mu.field

    def shape_table(self) -> List[ShapeRow]:
        c = self.carrier
        return [("mu", self.mu, c + c, c), ("eta", self.eta, (), c)]


@dataclass(frozen=True)
class ComonadDesc:
    """A coassociative counital coalgebra (carrier, delta, eps)."""

    carrier: CellType
    delta: TwoCell
    eps: TwoCell
    name: Optional[str] = None

    @classmethod
    def on(cls, carrier, delta: TwoCell, eps: TwoCell, name: Optional[str] = None) -> 'ComonadDesc':
        return cls(_legs(carrier), delta, eps, name)

    @property
    def field(self):
        return self.delta.field

    def shape_table(self) -> List[ShapeRow]:
        c = self.carrier
        return [("delta", self.delta, c, c + c), ("eps", self.eps, c, ())]


@dataclass(frozen=True)
class DistLaw:
    """A 2-cell over.under -> under.over with its declared kinds."""

    over: CellType
    under: CellType
    cell: TwoCell
    kinds: FrozenSet[DistKind] = ALL_KINDS
    name: Optional[str] = None

    @classmethod
    def on(cls, over, under, cell: TwoCell, kinds=ALL_KINDS, name: Optional[str] = None) -> 'DistLaw':
        return cls(_legs(over), _legs(under), cell, frozenset(kinds), name)

    @property
    def field(self):
        return self.cell.field

    def shape_table(self) -> List[ShapeRow]:
        return [(self.name or "tau", self.cell, self.over + self.under, self.under + self.over)]


@dataclass(frozen=True)
class ModuleDesc:
    """
    A module over a monad on ``acting``.

    Left: acting.carrier -> carrier. Right: carrier.acting -> carrier.
    """

    acting: CellType
    carrier: CellType
    action: TwoCell
    side: Side = Side.LEFT
    name: Optional[str] = None

    def shape_table(self) -> List[ShapeRow]:
        dom = self.acting + self.carrier if self.side is Side.LEFT else self.carrier + self.acting
        return [("action", self.action, dom, self.carrier)]


@dataclass(frozen=True)
class ComoduleDesc:
    """
    A comodule over a comonad on ``acting``.

    Left: carrier -> acting.carrier. Right: carrier -> carrier.acting.
    """

    acting: CellType
    carrier: CellType
    coaction: TwoCell
    side: Side = Side.LEFT
    name: Optional[str] = None

    def shape_table(self) -> List[ShapeRow]:
        cod = self.acting + self.carrier if self.side is Side.LEFT else self.carrier + self.acting
        return [("coaction", self.coaction, self.carrier, cod)]


@dataclass(frozen=True)
class TambaraModuleDesc:
    """
    A left Tambara module (X, tau_{B,X}, nu) over the monad ``base``.

    ``tau_bb`` is the law used to move B past B in the naturality square;
    absent means the flip of Vect.
    """

    base: MonadDesc
    x: CellType
    tau: DistLaw
    nu: ModuleDesc
    tau_bb: Optional[DistLaw] = None
    name: Optional[str] = None

    def shape_table(self) -> List[ShapeRow]:
        b = self.base.carrier
        rows = self.base.shape_table() + [
            ("tau", self.tau.cell, b + self.x, self.x + b),
            ("nu", self.nu.action, b + self.x, self.x),
        ]
        if self.tau_bb is not None:
            rows.append(("tau_bb", self.tau_bb.cell, b + b, b + b))
        return rows


@dataclass(frozen=True)
class QuasiBimonadDesc:
    """A quasi-bimonad (F, mu, eta, Delta, eps, tau_FF, Phi, Phi^-1)."""

    monad: MonadDesc
    comonad: ComonadDesc
    tau_ff: DistLaw
    phi: TwoCell
    phi_inv: Optional[TwoCell] = None
    name: Optional[str] = None

    @property
    def carrier(self) -> CellType:
        return self.monad.carrier

    @property
    def field(self):
        return self.monad.field

    def shape_table(self) -> List[ShapeRow]:
        f = self.carrier
        rows = self.monad.shape_table() + self.comonad.shape_table() + [
            ("tau_ff", self.tau_ff.cell, f + f, f + f),
            ("phi", self.phi, (), f + f + f),
        ]
        if self.phi_inv is not None:
            rows.append(("phi_inv", self.phi_inv, (), f + f + f))
        return rows


@dataclass(frozen=True)
class CoquasiBimonadDesc:
    """A coquasi-bimonad (F, mu, eta, Delta, eps, tau_FF, omega, omega^-1)."""

    monad: MonadDesc
    comonad: ComonadDesc
    tau_ff: DistLaw
    omega: TwoCell
    omega_inv: Optional[TwoCell] = None
    name: Optional[str] = None

    @property
    def carrier(self) -> CellType:
        return self.monad.carrier

    @property
    def field(self):
        return self.monad.field

    def shape_table(self) -> List[ShapeRow]:
        f = self.carrier
        rows = self.monad.shape_table() + self.comonad.shape_table() + [
            ("tau_ff", self.tau_ff.cell, f + f, f + f),
            ("omega", self.omega, f + f + f, ()),
        ]
        if self.omega_inv is not None:
            rows.append(("omega_inv", self.omega_inv, f + f + f, ()))
        return rows


@dataclass(frozen=True)
class BimonadDesc:
    """A bimonad (F, mu, eta, Delta, eps) whose compatibility runs through lambda: FF -> FF."""

    monad: MonadDesc
    comonad: ComonadDesc
    lam: DistLaw
    name: Optional[str] = None

    @property
    def carrier(self) -> CellType:
        return self.monad.carrier

    @property
    def field(self):
        return self.monad.field

    def shape_table(self) -> List[ShapeRow]:
        f = self.carrier
        return self.monad.shape_table() + self.comonad.shape_table() + [
            ("lambda", self.lam.cell, f + f, f + f)]


@dataclass(frozen=True)
class SweedlerDatum:
    """
    A Sweedler Hopf datum (B, F, psi_{B,F}, mu_M, eta_M, eps_F, beta).

    The weak action and the 2-cocycle sigma are derived from the data.
    ``beta`` defaults to the identity on FFF.
    """

    b: MonadDesc
    f: Space
    psi: DistLaw
    mu_m: TwoCell
    eta_m: TwoCell
    eps_f: TwoCell
    beta: Optional[TwoCell] = None
    name: Optional[str] = None

    @property
    def field(self):
        return self.b.field

    @property
    def f_legs(self) -> CellType:
        return _legs(self.f)

    @property
    def beta_cell(self) -> TwoCell:
        f = self.f_legs
        return self.beta if self.beta is not None else identity(f + f + f, self.field)

    @property
    def weak_action(self) -> TwoCell:
        """B.F -> B: psi followed by eps_F on the F leg."""
        b = self.b.carrier
        return run_layers(b + self.f_legs, [(self.psi.cell, 0), (self.eps_f, 0)], self.field)

    @property
    def sigma(self) -> TwoCell:
        """F.F -> B: mu_M followed by eps_F."""
        f = self.f_legs
        return run_layers(f + f, [(self.mu_m, 0), (self.eps_f, 0)], self.field)

    def shape_table(self) -> List[ShapeRow]:
        b, f = self.b.carrier, self.f_legs
        return self.b.shape_table() + [
            ("psi", self.psi.cell, b + f, f + b),
            ("mu_M", self.mu_m, f + f, f + b),
            ("eta_M", self.eta_m, (), f + b),
            ("eps_F", self.eps_f, f, ()),
            ("beta", self.beta_cell, f + f + f, f + f + f),
        ]


@dataclass(frozen=True)
class HausserNillDatum:
    """
    A Hausser-Nill datum (B, F, psi_{B,F}, Delta_M, eps_M, eta_F, beta).

    The coaction lambda: B -> F.B and the cocycle Phi_lambda: I -> F.F.B are
    derived. ``beta`` defaults to the identity on FFF.
    """

    b: MonadDesc
    f: Space
    psi: DistLaw
    delta_m: TwoCell
    eps_m: TwoCell
    eta_f: TwoCell
    beta: Optional[TwoCell] = None
    name: Optional[str] = None

    @property
    def field(self):
        return self.b.field

    @property
    def f_legs(self) -> CellType:
        return _legs(self.f)

    @property
    def beta_cell(self) -> TwoCell:
        f = self.f_legs
        return self.beta if self.beta is not None else identity(f + f + f, self.field)

    @property
    def coaction(self) -> TwoCell:
        """B -> F.B: insert eta_F on the right then apply psi."""
        b = self.b.carrier
        return run_layers(b, [(self.eta_f, len(b)), (self.psi.cell, 0)], self.field)

    @property
    def phi_lambda(self) -> TwoCell:
        """I -> F.F.B: Delta_M applied to eta_F."""
        return run_layers((), [(self.eta_f, 0), (self.delta_m, 0)], self.field)

    def shape_table(self) -> List[ShapeRow]:
        b, f = self.b.carrier, self.f_legs
        return self.b.shape_table() + [
            ("psi", self.psi.cell, b + f, f + b),
            ("Delta_M", self.delta_m, f, f + f + b),
            ("eps_M", self.eps_m, f, b),
            ("eta_F", self.eta_f, (), f),
            ("beta", self.beta_cell, f + f + f, f + f + f),
        ]


@dataclass(frozen=True)
class YDModuleDesc:
    """
    A Yetter-Drinfel'd module (X, psi_{F,X}, phi_{X,F}) over a bimonad.

    On the left side psi: F.X -> X.F and phi: X.F -> F.X; the right side is
    the leg-reversed mirror.
    """

    bimonad: BimonadDesc
    x: CellType
    psi_fx: DistLaw
    phi_xf: DistLaw
    side: Side = Side.LEFT
    name: Optional[str] = None

    @property
    def field(self):
        return self.bimonad.field

    @property
    def action(self) -> TwoCell:
        """F.X -> X: psi then eps_F; the right side mirrors the left formula."""
        if self.side is Side.RIGHT:
            return mirror_cell(mirror(self).action)
        x = self.x
        return run_layers(self.bimonad.carrier + x,
                          [(self.psi_fx.cell, 0), (self.bimonad.comonad.eps, len(x))], self.field)

    @property
    def coaction(self) -> TwoCell:
        """X -> F.X: eta_F then phi; the right side mirrors the left formula."""
        if self.side is Side.RIGHT:
            return mirror_cell(mirror(self).coaction)
        x = self.x
        return run_layers(x, [(self.bimonad.monad.eta, len(x)), (self.phi_xf.cell, 0)], self.field)

    def shape_table(self) -> List[ShapeRow]:
        f, x = self.bimonad.carrier, self.x
        if self.side is Side.LEFT:
            psi_io, phi_io = (f + x, x + f), (x + f, f + x)
        else:
            psi_io, phi_io = (x + f, f + x), (f + x, x + f)
        return self.bimonad.shape_table() + [
            ("psi", self.psi_fx.cell) + psi_io,
            ("phi", self.phi_xf.cell) + phi_io,
        ]


@dataclass(frozen=True)
class RelativeModuleDesc:
    """
    A relative (F,B)-module: a B-module and F-comodule on ``m`` whose
    structures commute through psi_{B,F}.
    """

    b: MonadDesc
    f: ComonadDesc
    psi_bf: DistLaw
    m: CellType
    action: TwoCell
    coaction: TwoCell
    side: Side = Side.LEFT
    name: Optional[str] = None

    @property
    def field(self):
        return self.b.field

    def shape_table(self) -> List[ShapeRow]:
        b, f, m = self.b.carrier, self.f.carrier, self.m
        if self.side is Side.LEFT:
            act_dom, coact_cod, psi_io = b + m, f + m, (b + f, f + b)
        else:
            act_dom, coact_cod, psi_io = m + b, m + f, (f + b, b + f)
        return self.b.shape_table() + self.f.shape_table() + [
            ("psi", self.psi_bf.cell) + psi_io,
            ("action", self.action, act_dom, m),
            ("coaction", self.coaction, m, coact_cod),
        ]


def validate_shapes(desc) -> CheckReport:
    """
    Check every bundled cell against the boundary the descriptor declares.

    Returns:
        A passing report, or a ShapeMismatch report naming the first bad role
    """
    for role, cell, dom, cod in desc.shape_table():
        if cell.dom != cell_type(dom) or cell.cod != cell_type(cod):
            expected = f"{type_str(cell_type(dom))}->{type_str(cell_type(cod))}"
            actual = f"{type_str(cell.dom)}->{type_str(cell.cod)}"
            return CheckReport("shapes", Witness("ShapeMismatch", lhs=f"{role} {actual}", rhs=expected))
    return CheckReport("shapes")


@dataclass(frozen=True)
class QBObject:
    """
    A 1-cell (X, tau_{F,X}) of QB(K)(F) together with its F-action.

    tau: F.X -> X.F, action: F.X -> X.
    """

    name: str
    legs: CellType
    tau: TwoCell
    action: TwoCell

    @property
    def width(self) -> int:
        return len(self.legs)


@dataclass(frozen=True)
class ComoduleObject:
    """
    A right F-comodule (X, rho) over a coquasi-bimonad with tau_{F,X}: F.X -> X.F.

    The tau is used to move coefficients of later factors past earlier ones.
    """

    name: str
    legs: CellType
    tau: TwoCell
    coaction: TwoCell

    @property
    def width(self) -> int:
        return len(self.legs)


@dataclass(frozen=True)
class EMObject:
    """
    An object of the acting category: a 1-cell X with psi_{B,X}: B.X -> X.B.

    ``tau_bx`` is the underlying flip-style law; ``coaction`` (right, X -> X.F)
    and ``action`` (left, F.X -> X) are carried when the object comes from a
    coquasi or quasi setting. ``tau_fx`` moves F past X.
    """

    name: str
    legs: CellType
    psi: TwoCell
    tau_bx: Optional[TwoCell] = None
    tau_fx: Optional[TwoCell] = None
    coaction: Optional[TwoCell] = None
    action: Optional[TwoCell] = None

    @property
    def width(self) -> int:
        return len(self.legs)

    @property
    def is_unit(self) -> bool:
        return not self.legs


_KIND_MIRROR = {
    DistKind.LEFT_MONADIC: DistKind.RIGHT_MONADIC,
    DistKind.RIGHT_MONADIC: DistKind.LEFT_MONADIC,
    DistKind.LEFT_COMONADIC: DistKind.RIGHT_COMONADIC,
    DistKind.RIGHT_COMONADIC: DistKind.LEFT_COMONADIC,
}


def mirror(desc):
    """
    Reverse the tensor order of every bundled cell.

    Left and right sides swap, as do left and right (co)monadic kinds;
    a distributive law over.under -> under.over becomes one with the roles
    of over and under exchanged. mirror(mirror(d)) equals d.
    """
    if isinstance(desc, TwoCell):
        return mirror_cell(desc)
    if isinstance(desc, Side):
        return desc.flipped()
    if isinstance(desc, DistKind):
        return _KIND_MIRROR[desc]
    if isinstance(desc, frozenset):
        return frozenset(mirror(k) for k in desc)
    if isinstance(desc, tuple) and all(isinstance(s, Space) for s in desc):
        return desc[::-1]
    if isinstance(desc, DistLaw):
        return DistLaw(desc.under[::-1], desc.over[::-1], mirror_cell(desc.cell),
                       mirror(desc.kinds), desc.name)
    if is_dataclass(desc):
        return replace(desc, **{f.name: mirror(getattr(desc, f.name)) for f in fields(desc)})
    return desc


def structurally_equal(a, b) -> bool:
    """Field-by-field comparison that compares 2-cells by boundary and entries."""
    if isinstance(a, TwoCell) or isinstance(b, TwoCell):
        return (isinstance(a, TwoCell) and isinstance(b, TwoCell) and a.field == b.field
                and a.dom == b.dom and a.cod == b.cod and dict(a.entries) == dict(b.entries))
    if is_dataclass(a) and not isinstance(a, type):
        return type(a) is type(b) and all(
            structurally_equal(getattr(a, f.name), getattr(b, f.name)) for f in fields(a))
    return a == b


def cells_of(desc, prefix: str = "") -> Iterator[Tuple[str, TwoCell]]:
    """Every 2-cell bundled in a descriptor, keyed by its dotted field path."""
    if isinstance(desc, TwoCell):
        yield prefix, desc
    elif is_dataclass(desc) and not isinstance(desc, type):
        for f in fields(desc):
            yield from cells_of(getattr(desc, f.name), f"{prefix}.{f.name}" if prefix else f.name)


def replace_cell(desc, path: str, cell: TwoCell):
    """A copy of ``desc`` with the 2-cell at ``path`` (as named by cells_of) swapped for ``cell``."""
    if not path:
        if not isinstance(desc, TwoCell):
            raise UnknownRole(f"{type(desc).__name__} is not a 2-cell")
        return cell
    head, _, rest = path.partition(".")
    if not is_dataclass(desc) or head not in {f.name for f in fields(desc)}:
        raise UnknownRole(f"no field {head!r} on {type(desc).__name__}")
    return replace(desc, **{head: replace_cell(getattr(desc, head), rest, cell)})
