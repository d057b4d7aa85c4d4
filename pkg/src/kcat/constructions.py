"""
Derived 2-cells and derived structures.

Every construction is written as a layer table: a list of (cell, offset)
pairs read top (domain) to bottom (codomain). ``LAYER_TABLES`` keeps a
printable copy of each table for reference.

Nothing here verifies its own preconditions; feed the outputs to the
checkers in kcat.axioms.
"""

import logging
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

# convolution operations are part of this module's surface
from kcat.convolution import (  # noqa: F401
    ConvolutionContext, ConvolutionElement, convolution_invert, convolution_invert_diagnosed,
    convolution_product, convolution_unit)
from kcat.errors import MissingInverse, ShapeMismatch
from kcat.lincat import (UNIT_NAME, Braiding, CellType, Layer, Space, TwoCell, identity,
                         run_layers, type_str)
from kcat.structures import (BimonadDesc, ComoduleDesc, ComonadDesc, CoquasiBimonadDesc, DistKind,
                             DistLaw, EMObject, HausserNillDatum, ModuleDesc, MonadDesc, QBObject,
                             ComoduleObject, QuasiBimonadDesc, RelativeModuleDesc, Side,
                             SweedlerDatum, TambaraModuleDesc, YDModuleDesc, mirror)

logger = logging.getLogger(__name__)

# construction -> layer table, cells written by role, offsets symbolic
LAYER_TABLES: Dict[str, List[Tuple[str, str]]] = {
    'monad_on_BB.mu': [('tau_BB', 'nb'), ('mu_B', '0'), ('mu_B', 'nb')],
    'monad_on_BB.eta': [('eta_B', '0'), ('eta_B', 'nb')],
    'wreath_product_monad.mu': [('psi', 'nf'), ('mu_B', '2nf'), ('mu_M', '0'), ('mu_B', 'nf')],
    'tensor_tambara.nu': [('Delta_B', '0'), ('tau_BX', 'nb'), ('nu_X', '0'), ('nu_Y', 'nx')],
    'module_on_XM': [('psi_BX', '0'), ('nu_M', 'nx')],
    'comodule_on_XM': [('lambda_M', 'nx'), ('phi_XF', '0')],
    'alpha_quasi': [('Phi', '0'), ('tau_FX', '2'), ('tau_FX', '1'), ('tau_FY', 'nx+2'),
                    ('nu_X', '0'), ('nu_Y', 'nx'), ('nu_Z', 'nx+ny')],
    'alpha_coquasi': [('rho_X', '0'), ('rho_Y', 'nx+1'), ('rho_Z', 'nx+ny+2'), ('tau_FY', 'nx'),
                      ('tau_FZ', 'nx+ny+1'), ('tau_FZ', 'nx+ny'), ('omega', 'nx+ny+nz')],
    'psi_from_coaction': [('rho_X', 'nb'), ('tau_BX', '0'), ('act', 'nx')],
    'psi_from_action': [('lambda_B', '0'), ('tau_BX', 'nf'), ('nu_X', '0')],
    'yd_from_tau.lambda': [('Delta', '0'), ('tau_FF', '1'), ('mu', '0')],
    'yd_from_tau.psi': [('Delta', '0'), ('tau_FX', '1'), ('nu', '0')],
    'yd_from_tau.phi': [('l', '0'), ('tau_XF', '1'), ('mu', '0')],
    'rho_from_sigma': [('rho_X', '0'), ('rho_Y', 'nx+1'), ('tau_FY', 'nx'), ('sigma', 'nx+ny')],
    'rho_from_philambda': [('Phi_lambda', '0'), ('tau_BX', '2'), ('tau_FX', '1'),
                           ('tau_BY', 'nx+2'), ('nu_X', '0'), ('nu_Y', 'nx')],
    'r_from_rho': [('rho', '0'), ('nu_M', 'nx+ny')],
    'rho_from_r': [('eta_B', 'nx+ny'), ('r', '0')],
    'sweedler.mu_M': [('Delta_FF', '0'), ('mu', '0'), ('sigma', '1')],
    'sweedler.beta': [('Delta_FFF', '0'), ('omega_inv', '0')],
    'hn.Delta_M': [('Phi_lambda', '0'), ('tau_BF', '2'), ('Delta', '2'), ('tau_FF', '1'),
                   ('mu', '0'), ('mu', '1')],
    'hn.beta': [('Phi_inv', '3'), ('mu_FFF', '0')],
}


def _cell(x) -> TwoCell:
    return x.cell if isinstance(x, DistLaw) else x


def _carrier_braiding(q) -> Braiding:
    """Braiding holding tau_FF of a (co)quasi-bimonad."""
    legs = q.carrier
    braid = Braiding(field=q.field)
    if len(legs) == 1:
        braid = braid.with_cell(legs[0], legs[0], q.tau_ff.cell)
    return braid


def composite_name(*names: str) -> str:
    """Name of a tensor product of objects; the unit disappears."""
    kept = [n for n in names if n != UNIT_NAME]
    return "".join(kept) if kept else UNIT_NAME


# ---------------------------------------------------------------------------
# monads on composites


def monad_on_BB(b: MonadDesc, tau_bb: DistLaw) -> MonadDesc:
    """The composition monad B.B with multiplication through tau_{B,B}."""
    bl, nb = b.carrier, len(b.carrier)
    field = b.field
    mu = run_layers(bl * 4, [(_cell(tau_bb), nb), (b.mu, 0), (b.mu, nb)], field)
    eta = run_layers((), [(b.eta, 0), (b.eta, nb)], field)
    name = f"{b.name}{b.name}" if b.name else None
    return MonadDesc(bl + bl, mu.named("mu"), eta.named("eta"), name)


def wreath_product_monad(s: SweedlerDatum) -> MonadDesc:
    """
    The crossed product monad on F.B of a Sweedler datum.

    Multiplication: F B F B -> F F B B (psi) -> F B B (mu_M, mu_B) -> F B.
    Associativity is not implied by the data shapes; check it.
    """
    f, b = s.f_legs, s.b.carrier
    if not f:
        return s.b
    nf = len(f)
    layers = [(s.psi.cell, nf), (s.b.mu, 2 * nf), (s.mu_m, 0), (s.b.mu, nf)]
    mu = run_layers(f + b + f + b, layers, s.field)
    return MonadDesc(f + b, mu.named("mu"), s.eta_m.named("eta"), s.name or "crossed product")


# ---------------------------------------------------------------------------
# Tambara and quasi-bimonad objects


def tensor_tambara(x: TambaraModuleDesc, y: TambaraModuleDesc, delta_b: TwoCell) -> TambaraModuleDesc:
    """X.Y as a Tambara module: tau_{B,XY} moves B past X then Y, B acts through Delta_B."""
    b = x.base
    bl, nb = b.carrier, len(b.carrier)
    field = b.field
    xl, yl = x.x, y.x
    nx = len(xl)
    tau = run_layers(bl + xl + yl, [(x.tau.cell, 0), (y.tau.cell, nx)], field)
    action = run_layers(bl + xl + yl, [(delta_b, 0), (x.tau.cell, nb), (x.nu.action, 0),
                                       (y.nu.action, nx)], field)
    xy = xl + yl
    name = composite_name(x.name or UNIT_NAME, y.name or UNIT_NAME)
    return TambaraModuleDesc(b, xy, DistLaw.on(bl, xy, tau, x.tau.kinds, "tau"),
                             ModuleDesc(bl, xy, action, Side.LEFT, "nu"), x.tau_bb, name)


def module_on_XM(psi_bx, m_action: TwoCell) -> TwoCell:
    """B.X.M -> X.M: psi_{B,X} then the action on M."""
    psi = _cell(psi_bx)
    nx = len(psi.cod) - len(m_action.dom) + len(m_action.cod)
    return run_layers(psi.dom + m_action.cod, [(psi, 0), (m_action, nx)], psi.field)


def comodule_on_XM(phi_xf, m_coaction: TwoCell) -> TwoCell:
    """X.M -> F.X.M: the coaction on M then phi_{X,F}."""
    phi = _cell(phi_xf)
    nf = len(m_coaction.cod) - len(m_coaction.dom)
    x = phi.dom[:len(phi.dom) - nf]
    return run_layers(x + m_coaction.dom, [(m_coaction, len(x)), (phi, 0)], phi.field)


def qb_triple_action(x: QBObject, y: QBObject, z: QBObject, offset: int = 0) -> List[Layer]:
    """
    Layers for the diagonal action F.F.F.X.Y.Z -> X.Y.Z: the second and
    third F move past X, the third past Y, then each acts on its object.
    """
    c = len(x.tau.dom) - x.width
    nx, ny = x.width, y.width
    return [(x.tau, offset + 2 * c), (x.tau, offset + c), (y.tau, offset + nx + 2 * c),
            (x.action, offset), (y.action, offset + nx), (z.action, offset + nx + ny)]


def tau_past_object(f: Space, objects: Sequence, field) -> TwoCell:
    """tau_{F, X1...Xn}: F moved past every object in turn."""
    legs: CellType = ()
    layers: List[Layer] = []
    for obj in objects:
        layers.append((obj.tau, len(legs)))
        legs = legs + obj.legs
    return run_layers((f,) + legs, layers, field)


def unit_qb_object(q: QuasiBimonadDesc) -> QBObject:
    """The unit object: F acts on I through eps."""
    return QBObject(UNIT_NAME, (), identity(q.carrier, q.field), q.comonad.eps)


def regular_qb_object(q: QuasiBimonadDesc, name: Optional[str] = None) -> QBObject:
    """F acting on itself by left multiplication, moved by tau_FF."""
    f = q.carrier
    return QBObject(name or f[0].name, f, q.tau_ff.cell, q.monad.mu)


def tensor_qb_objects(x: QBObject, y: QBObject, q: QuasiBimonadDesc) -> QBObject:
    """X.Y with tau_{F,XY} and the action through Delta."""
    f = q.carrier
    c, nx = len(f), x.width
    field = q.field
    legs = x.legs + y.legs
    tau = run_layers(f + legs, [(x.tau, 0), (y.tau, nx)], field)
    action = run_layers(f + legs, [(q.comonad.delta, 0), (x.tau, c), (x.action, 0),
                                   (y.action, nx)], field)
    return QBObject(composite_name(x.name, y.name), legs, tau, action)


def _alpha_quasi_with(q: QuasiBimonadDesc, phi: TwoCell, x: QBObject, y: QBObject,
                      z: QBObject) -> TwoCell:
    legs = x.legs + y.legs + z.legs
    return run_layers(legs, [(phi, 0)] + qb_triple_action(x, y, z, 0), q.field)


def alpha_quasi(q: QuasiBimonadDesc, x: QBObject, y: QBObject, z: QBObject) -> TwoCell:
    """The associativity constraint (XY)Z -> X(YZ): Phi acting diagonally."""
    return _alpha_quasi_with(q, q.phi, x, y, z).named("alpha")


def alpha_quasi_inverse(q: QuasiBimonadDesc, x: QBObject, y: QBObject, z: QBObject) -> TwoCell:
    """
    Inverse of alpha_quasi: Phi^-1 acting diagonally.

    Raises:
        MissingInverse: when phi_inv is absent
    """
    if q.phi_inv is None:
        raise MissingInverse("alpha inverse needs Phi^-1")
    return _alpha_quasi_with(q, q.phi_inv, x, y, z).named("alpha_inv")


def alpha_quasi_family(q: QuasiBimonadDesc, objects: Sequence[QBObject]) -> Dict[Tuple[CellType, ...], TwoCell]:
    """
    alpha_{X,Y,Z} keyed by leg tuples over every triple needed by the
    pentagon on ``objects``: base triples and triples with one tensor pair.
    The unit object is always included.
    """
    objects = [unit_qb_object(q)] + list(objects)
    pool = {o.legs: o for o in objects}
    for a in objects:
        for b in objects:
            t = tensor_qb_objects(a, b, q)
            pool.setdefault(t.legs, t)
    family = {}
    for a in pool.values():
        for b in pool.values():
            for c in pool.values():
                family[(a.legs, b.legs, c.legs)] = alpha_quasi(q, a, b, c)
    return family


# ---------------------------------------------------------------------------
# comodule objects over a coquasi-bimonad


def unit_comodule_object(q: CoquasiBimonadDesc) -> ComoduleObject:
    return ComoduleObject(UNIT_NAME, (), identity(q.carrier, q.field), q.monad.eta)


def regular_comodule_object(q: CoquasiBimonadDesc, name: Optional[str] = None) -> ComoduleObject:
    """F coacting on itself by Delta."""
    f = q.carrier
    return ComoduleObject(name or f[0].name, f, q.tau_ff.cell, q.comonad.delta)


def tensor_comodule_objects(x: ComoduleObject, y: ComoduleObject,
                            q: CoquasiBimonadDesc) -> ComoduleObject:
    """X.Y coacting by x0 y0 (x1 y1)."""
    f = q.carrier
    c, nx, ny = len(f), x.width, y.width
    field = q.field
    legs = x.legs + y.legs
    tau = run_layers(f + legs, [(x.tau, 0), (y.tau, nx)], field)
    coaction = run_layers(legs, [(x.coaction, 0), (y.coaction, nx + c), (y.tau, nx),
                                 (q.monad.mu, nx + ny)], field)
    return ComoduleObject(composite_name(x.name, y.name), legs, tau, coaction)


def _alpha_coquasi_with(q: CoquasiBimonadDesc, omega: TwoCell, x: ComoduleObject,
                        y: ComoduleObject, z: ComoduleObject) -> TwoCell:
    c = len(q.carrier)
    nx, ny, nz = x.width, y.width, z.width
    layers = [(x.coaction, 0), (y.coaction, nx + c), (z.coaction, nx + ny + 2 * c),
              (y.tau, nx), (z.tau, nx + ny + c), (z.tau, nx + ny), (omega, nx + ny + nz)]
    return run_layers(x.legs + y.legs + z.legs, layers, q.field)


def alpha_coquasi(q: CoquasiBimonadDesc, x: ComoduleObject, y: ComoduleObject,
                  z: ComoduleObject) -> TwoCell:
    """The associativity constraint of right comodules: x0 y0 z0 omega(x1, y1, z1)."""
    return _alpha_coquasi_with(q, q.omega, x, y, z).named("alpha")


def alpha_coquasi_inverse(q: CoquasiBimonadDesc, x: ComoduleObject, y: ComoduleObject,
                          z: ComoduleObject) -> TwoCell:
    """
    Raises:
        MissingInverse: when omega_inv is absent
    """
    if q.omega_inv is None:
        raise MissingInverse("alpha inverse needs omega^-1")
    return _alpha_coquasi_with(q, q.omega_inv, x, y, z).named("alpha_inv")


def alpha_coquasi_family(q: CoquasiBimonadDesc,
                         objects: Sequence[ComoduleObject]) -> Dict[Tuple[CellType, ...], TwoCell]:
    objects = [unit_comodule_object(q)] + list(objects)
    pool = {o.legs: o for o in objects}
    for a in objects:
        for b in objects:
            t = tensor_comodule_objects(a, b, q)
            pool.setdefault(t.legs, t)
    family = {}
    for a in pool.values():
        for b in pool.values():
            for c in pool.values():
                family[(a.legs, b.legs, c.legs)] = alpha_coquasi(q, a, b, c)
    return family


# ---------------------------------------------------------------------------
# distributive laws psi_{B,X}


def psi_from_coaction(tau_bx: DistLaw, coaction: TwoCell, rm_action_on_b: TwoCell) -> DistLaw:
    """
    psi_{B,X}: B.X -> X.B from a right F-coaction on X and a right F-action on B:
    b x -> x0 (b . x1).
    """
    b, x = tau_bx.over, tau_bx.under
    layers = [(coaction, len(b)), (tau_bx.cell, 0), (rm_action_on_b, len(x))]
    cell = run_layers(b + x, layers, tau_bx.field)
    return DistLaw.on(b, x, cell.named("psi"), {DistKind.LEFT_MONADIC}, "psi")


def psi_from_action(tau_bx: DistLaw, lcm_coaction_on_b: TwoCell, action: TwoCell) -> DistLaw:
    """
    psi_{B,X}: B.X -> X.B from a left F-coaction on B and a left F-action on X:
    b x -> (b_{-1} . x) b_0.
    """
    b, x = tau_bx.over, tau_bx.under
    nf = len(lcm_coaction_on_b.cod) - len(b)
    layers = [(lcm_coaction_on_b, 0), (tau_bx.cell, nf), (action, 0)]
    cell = run_layers(b + x, layers, tau_bx.field)
    return DistLaw.on(b, x, cell.named("psi"), {DistKind.LEFT_MONADIC}, "psi")


def em_object_from_coaction(name: str, tau_bx: DistLaw, tau_fx: TwoCell, coaction: TwoCell,
                            rm_action_on_b: TwoCell) -> EMObject:
    """An object of the Sweedler-type acting category: X with its right F-coaction."""
    psi = psi_from_coaction(tau_bx, coaction, rm_action_on_b)
    return EMObject(name, tau_bx.under, psi.cell, tau_bx.cell, tau_fx, coaction=coaction)


def em_object_from_action(name: str, tau_bx: DistLaw, tau_fx: TwoCell, action: TwoCell,
                          lcm_coaction_on_b: TwoCell) -> EMObject:
    """An object of the Hausser-Nill-type acting category: X with its left F-action."""
    psi = psi_from_action(tau_bx, lcm_coaction_on_b, action)
    return EMObject(name, tau_bx.under, psi.cell, tau_bx.cell, tau_fx, action=action)


def em_unit_object(b_legs: CellType, field) -> EMObject:
    return EMObject(UNIT_NAME, (), identity(b_legs, field))


def tensor_em_objects(x: EMObject, y: EMObject, b_legs: CellType, field,
                      mu_f: Optional[TwoCell] = None,
                      delta_f: Optional[TwoCell] = None) -> EMObject:
    """
    X.Y in the acting category, psi_{B,XY} = psi_{B,X} then psi_{B,Y}.

    The right coaction is formed when both factors carry one and ``mu_f`` is
    given; the left action likewise with ``delta_f``.
    """
    if x.is_unit:
        return y
    if y.is_unit:
        return x
    nx = x.width
    legs = x.legs + y.legs
    psi = run_layers(b_legs + legs, [(x.psi, 0), (y.psi, nx)], field)
    tau_bx = tau_fx = coaction = action = None
    if x.tau_bx is not None and y.tau_bx is not None:
        tau_bx = run_layers(b_legs + legs, [(x.tau_bx, 0), (y.tau_bx, nx)], field)
    if x.tau_fx is not None and y.tau_fx is not None:
        f = x.tau_fx.dom[:len(x.tau_fx.dom) - nx]
        tau_fx = run_layers(f + legs, [(x.tau_fx, 0), (y.tau_fx, nx)], field)
        c = len(f)
        if mu_f is not None and x.coaction is not None and y.coaction is not None:
            coaction = run_layers(legs, [(x.coaction, 0), (y.coaction, nx + c), (y.tau_fx, nx),
                                         (mu_f, nx + y.width)], field)
        if delta_f is not None and x.action is not None and y.action is not None:
            action = run_layers(f + legs, [(delta_f, 0), (x.tau_fx, c), (x.action, 0),
                                           (y.action, nx)], field)
    return EMObject(composite_name(x.name, y.name), legs, psi, tau_bx, tau_fx, coaction, action)


def em_comodule_object(x: EMObject) -> ComoduleObject:
    return ComoduleObject(x.name, x.legs, x.tau_fx, x.coaction)


def em_qb_object(x: EMObject) -> QBObject:
    return QBObject(x.name, x.legs, x.tau_fx, x.action)


# ---------------------------------------------------------------------------
# Yetter-Drinfel'd modules


def _yd_left(monad: MonadDesc, comonad: ComonadDesc, tau_ff: TwoCell, tau_fx: TwoCell,
             tau_xf: TwoCell, action: TwoCell, coaction: TwoCell,
             name: Optional[str]) -> YDModuleDesc:
    f = monad.carrier
    c = len(f)
    x = action.cod
    field = monad.field
    lam = run_layers(f + f, [(comonad.delta, 0), (tau_ff, c), (monad.mu, 0)], field)
    psi = run_layers(f + x, [(comonad.delta, 0), (tau_fx, c), (action, 0)], field)
    phi = run_layers(x + f, [(coaction, 0), (tau_xf, c), (monad.mu, 0)], field)
    bimonad = BimonadDesc(monad, comonad, DistLaw.on(f, f, lam.named("lambda"), name="lambda"))
    return YDModuleDesc(bimonad, x,
                        DistLaw.on(f, x, psi.named("psi"), {DistKind.LEFT_MONADIC}, "psi"),
                        DistLaw.on(x, f, phi.named("phi"), {DistKind.RIGHT_COMONADIC}, "phi"),
                        Side.LEFT, name)


def yd_from_tau(monad: MonadDesc, comonad: ComonadDesc, tau_ff, tau_fx, tau_xf,
                action: TwoCell, coaction: TwoCell, side: Side = Side.LEFT,
                name: Optional[str] = None) -> YDModuleDesc:
    """
    A YD module from flip-style laws, a module action and a comodule coaction.

    Left: lambda = (mu)(tau_FF)(Delta), psi_{F,X} = (nu)(tau_FX)(Delta),
    phi_{X,F} = (mu)(tau_XF)(l). On the right side every input is given in
    its right-handed form (action X.F -> X, coaction X -> X.F, tau_fx:
    X.F -> F.X, tau_xf: F.X -> X.F) and the result is the mirror of the
    left construction on the mirrored inputs.
    """
    if side is Side.LEFT:
        return _yd_left(monad, comonad, _cell(tau_ff), _cell(tau_fx), _cell(tau_xf), action,
                        coaction, name)
    left = _yd_left(mirror(monad), mirror(comonad), mirror(_cell(tau_ff)), mirror(_cell(tau_fx)),
                    mirror(_cell(tau_xf)), mirror(action), mirror(coaction), name)
    return mirror(left)


def tensor_yd(y1: YDModuleDesc, y2: YDModuleDesc) -> YDModuleDesc:
    """X.Y with psi_{F,XY} through X then Y and phi_{XY,F} through Y then X."""
    if y1.side is Side.RIGHT:
        return mirror(tensor_yd(mirror(y2), mirror(y1)))
    bm = y1.bimonad
    f = bm.carrier
    x, y = y1.x, y2.x
    nx = len(x)
    field = y1.field
    psi = run_layers(f + x + y, [(y1.psi_fx.cell, 0), (y2.psi_fx.cell, nx)], field)
    phi = run_layers(x + y + f, [(y2.phi_xf.cell, nx), (y1.phi_xf.cell, 0)], field)
    name = composite_name(y1.name or UNIT_NAME, y2.name or UNIT_NAME)
    return YDModuleDesc(bm, x + y,
                        DistLaw.on(f, x + y, psi.named("psi"), {DistKind.LEFT_MONADIC}, "psi"),
                        DistLaw.on(x + y, f, phi.named("phi"), {DistKind.RIGHT_COMONADIC}, "phi"),
                        Side.LEFT, name)


# ---------------------------------------------------------------------------
# Eilenberg-Moore 2-cocycles


def _unit_insertion(x: EMObject, y: EMObject, b_eta: TwoCell, field) -> TwoCell:
    legs = x.legs + y.legs
    return run_layers(legs, [(b_eta, len(legs))], field)


def rho_from_sigma(sigma: TwoCell, x: EMObject, y: EMObject, b_eta: Optional[TwoCell] = None) -> TwoCell:
    """
    rho_{X,Y}: X.Y -> X.Y.B, x y -> x0 y0 sigma(x1, y1).

    A unit factor gives the unit insertion; pass ``b_eta`` for that case.
    """
    field = sigma.field
    if x.is_unit or y.is_unit:
        if b_eta is None:
            raise ShapeMismatch("rho with a unit factor needs eta_B")
        return _unit_insertion(x, y, b_eta, field)
    c = len(sigma.dom) // 2
    nx, ny = x.width, y.width
    layers = [(x.coaction, 0), (y.coaction, nx + c), (y.tau_fx, nx), (sigma, nx + ny)]
    return run_layers(x.legs + y.legs, layers, field).named("rho")


def rho_from_philambda(phi_lambda: TwoCell, x: EMObject, y: EMObject,
                       b_eta: Optional[TwoCell] = None) -> TwoCell:
    """
    rho_{X,Y}: X.Y -> X.Y.B, x y -> (P1 . x) (P2 . y) P3 for Phi_lambda = P1 P2 P3.
    """
    field = phi_lambda.field
    if x.is_unit or y.is_unit:
        if b_eta is None:
            raise ShapeMismatch("rho with a unit factor needs eta_B")
        return _unit_insertion(x, y, b_eta, field)
    nx = x.width
    c = len(x.tau_fx.dom) - nx
    layers = [(phi_lambda, 0), (x.tau_bx, 2 * c), (x.tau_fx, c), (y.tau_bx, nx + 2 * c),
              (x.action, 0), (y.action, nx)]
    return run_layers(x.legs + y.legs, layers, field).named("rho")


def r_from_rho(rho_xy: TwoCell, m_action: TwoCell) -> TwoCell:
    """
    r_{X,Y,M}: X.Y.M -> X.Y.M, rho followed by the action on M.

    Raises:
        ShapeMismatch: when rho is not of the form XY -> XYB
    """
    xy = rho_xy.dom
    b = m_action.dom[:len(m_action.dom) - len(m_action.cod)]
    if rho_xy.cod != xy + b:
        raise ShapeMismatch(f"rho must be {type_str(xy)}->{type_str(xy + b)}, "
                            f"got {rho_xy.signature()}")
    return run_layers(xy + m_action.cod, [(rho_xy, 0), (m_action, len(xy))],
                      rho_xy.field).named("r")


def rho_from_r(r_xyb: TwoCell, eta_b: TwoCell) -> TwoCell:
    """rho_{X,Y} = r_{X,Y,B} (id_XY x eta_B)."""
    b = eta_b.cod
    xy = r_xyb.dom[:len(r_xyb.dom) - len(b)]
    if r_xyb.dom != xy + b or r_xyb.cod != r_xyb.dom:
        raise ShapeMismatch(f"r must be an endomorphism of XYB, got {r_xyb.signature()}")
    return run_layers(xy, [(eta_b, len(xy)), (r_xyb, 0)], r_xyb.field).named("rho")


@dataclass(frozen=True)
class CocycleFamily:
    """
    A family rho_{X,Y} with its inverse over a finite set of objects.

    ``rho`` and ``rho_inv`` accept composites formed by tensor_em_objects;
    ``alpha`` is the associativity constraint of the acting category.
    """

    objects: Tuple[EMObject, ...]
    rho: Callable[[EMObject, EMObject], TwoCell]
    rho_inv: Optional[Callable[[EMObject, EMObject], TwoCell]]
    alpha: Optional[Callable[[EMObject, EMObject, EMObject], TwoCell]] = None
    registry: Mapping[str, EMObject] = dc_field(default_factory=dict)


def _registry(objects: Sequence[EMObject], b_legs: CellType, field, mu_f=None,
              delta_f=None) -> Dict[str, EMObject]:
    reg = {o.name: o for o in objects}
    for x in objects:
        for y in objects:
            xy = tensor_em_objects(x, y, b_legs, field, mu_f, delta_f)
            reg.setdefault(xy.name, xy)
    return reg


def _resolved(reg: Mapping[str, EMObject], build: Callable):
    def cell(x: EMObject, y: EMObject) -> TwoCell:
        return build(reg.get(x.name, x), reg.get(y.name, y))
    return cell


def _zero_like(cell: TwoCell) -> TwoCell:
    return TwoCell(cell.dom, cell.cod, {}, cell.field)


def cocycle_cells_sigma(sigma: TwoCell, q: CoquasiBimonadDesc, b: MonadDesc,
                        objects: Sequence[EMObject], sigma_inv: Optional[TwoCell] = None,
                        with_alpha: bool = True) -> CocycleFamily:
    """
    The family rho_{X,Y} = x0 y0 sigma(x1, y1) with its inverse from sigma^-1.

    When sigma^-1 is not supplied it is computed in the convolution algebra
    K(FF, B); a sigma without inverse gets the zero family as its inverse so
    that the vertical-composition identity reports the failure.
    """
    field = b.field
    if sigma_inv is None:
        ctx = ConvolutionContext([q.comonad, q.comonad], [b], _carrier_braiding(q), field)
        inverse, reason = convolution_invert_diagnosed(ConvolutionElement(sigma, ctx))
        if inverse is None:
            logger.warning(f"sigma has no convolution inverse ({reason})")
            sigma_inv = _zero_like(sigma)
        else:
            sigma_inv = inverse.cell
    reg = _registry(objects, b.carrier, field, mu_f=q.monad.mu)
    rho = _resolved(reg, lambda x, y: rho_from_sigma(sigma, x, y, b.eta))
    rho_inv = _resolved(reg, lambda x, y: rho_from_sigma(sigma_inv, x, y, b.eta))
    alpha = None
    if with_alpha:
        unit = unit_comodule_object(q)

        def comodule(o: EMObject) -> ComoduleObject:
            return unit if o.is_unit else em_comodule_object(reg.get(o.name, o))

        def alpha(x, y, z):
            return alpha_coquasi(q, comodule(x), comodule(y), comodule(z))
    return CocycleFamily(tuple(objects), rho, rho_inv, alpha, reg)


def cocycle_cells_philambda(phi_lambda: TwoCell, q: QuasiBimonadDesc, b: MonadDesc,
                            objects: Sequence[EMObject],
                            phi_lambda_inv: Optional[TwoCell] = None,
                            with_alpha: bool = True) -> CocycleFamily:
    """
    The family rho_{X,Y} = (P1 . x)(P2 . y) P3 with its inverse from
    Phi_lambda^-1, computed in K(I, FFB) when not supplied.
    """
    field = b.field
    if phi_lambda_inv is None:
        ctx = ConvolutionContext([], [q.monad, q.monad, b], _carrier_braiding(q), field)
        inverse, reason = convolution_invert_diagnosed(ConvolutionElement(phi_lambda, ctx))
        if inverse is None:
            logger.warning(f"Phi_lambda has no convolution inverse ({reason})")
            phi_lambda_inv = _zero_like(phi_lambda)
        else:
            phi_lambda_inv = inverse.cell
    reg = _registry(objects, b.carrier, field, delta_f=q.comonad.delta)
    rho = _resolved(reg, lambda x, y: rho_from_philambda(phi_lambda, x, y, b.eta))
    rho_inv = _resolved(reg, lambda x, y: rho_from_philambda(phi_lambda_inv, x, y, b.eta))
    alpha = None
    if with_alpha:
        unit = unit_qb_object(q)

        def qb(o: EMObject) -> QBObject:
            return unit if o.is_unit else em_qb_object(reg.get(o.name, o))

        def alpha(x, y, z):
            return alpha_quasi(q, qb(x), qb(y), qb(z))
    return CocycleFamily(tuple(objects), rho, rho_inv, alpha, reg)


# ---------------------------------------------------------------------------
# Sweedler and Hausser-Nill data from (co)quasi-bimonads


def sweedler_datum_from_coquasi(q: CoquasiBimonadDesc, b: MonadDesc, tau_bf: DistLaw,
                                action: TwoCell, sigma: TwoCell,
                                name: Optional[str] = None) -> SweedlerDatum:
    """
    The Sweedler datum of a right F-module monad B with a cocycle sigma:
    psi_{B,F}(b f) = f1 (b . f2), mu_M(a, b) = a1 b1 sigma(a2, b2),
    eta_M = eta_F eta_B and beta = omega^-1(a1, b1, c1) a2 b2 c2.

    Raises:
        MissingInverse: when omega_inv is absent
    """
    if q.omega_inv is None:
        raise MissingInverse("the Sweedler datum of a coquasi-bimonad needs omega^-1")
    f = q.carrier
    field = q.field
    braid = _carrier_braiding(q)
    psi = psi_from_coaction(tau_bf, q.comonad.delta, action)
    split2 = ConvolutionContext([q.comonad] * 2, [], braid, field).comultiplication()
    split3 = ConvolutionContext([q.comonad] * 3, [], braid, field).comultiplication()
    c = len(f)
    mu_m = run_layers(f + f, [(split2, 0), (q.monad.mu, 0), (sigma, c)], field)
    eta_m = run_layers((), [(q.monad.eta, 0), (b.eta, c)], field)
    beta = run_layers(f * 3, [(split3, 0), (q.omega_inv, 0)], field)
    logger.debug(f"Sweedler datum over {type_str(f)} with B = {type_str(b.carrier)}")
    return SweedlerDatum(b, f[0] if f else Space(UNIT_NAME, 1), psi, mu_m.named("mu_M"),
                         eta_m.named("eta_M"), q.comonad.eps, beta.named("beta"), name)


def hn_datum_from_quasi(q: QuasiBimonadDesc, b: MonadDesc, tau_bf: DistLaw, phi_lambda: TwoCell,
                        coaction: TwoCell, name: Optional[str] = None) -> HausserNillDatum:
    """
    The Hausser-Nill datum of a left F-comodule monad B (coaction
    lambda_B: B -> F.B) with cocycle Phi_lambda: psi_{B,F}(b f) = (b_{-1} f) b_0,
    Delta_M(a) = Phi_lambda (a1 a2 1), eps_M = eta_B eps_F and beta the
    right multiplication by Phi^-1.

    Raises:
        MissingInverse: when phi_inv is absent
    """
    if q.phi_inv is None:
        raise MissingInverse("the Hausser-Nill datum of a quasi-bimonad needs Phi^-1")
    f = q.carrier
    c = len(f)
    field = q.field
    psi = psi_from_action(tau_bf, coaction, q.monad.mu)
    delta_m = run_layers(f, [(phi_lambda, 0), (tau_bf.cell, 2 * c), (q.comonad.delta, 2 * c),
                             (q.tau_ff.cell, c), (q.monad.mu, 0), (q.monad.mu, c)], field)
    eps_m = run_layers(f, [(q.comonad.eps, 0), (b.eta, 0)], field)
    mult3 = ConvolutionContext([], [q.monad] * 3, _carrier_braiding(q), field).multiplication()
    beta = run_layers(f * 3, [(q.phi_inv, 3 * c), (mult3, 0)], field)
    return HausserNillDatum(b, f[0], psi, delta_m.named("Delta_M"), eps_m.named("eps_M"),
                            q.monad.eta, beta.named("beta"), name)


# ---------------------------------------------------------------------------
# category actions


@dataclass(frozen=True)
class ActionBundle:
    """
    The action of an object X on a B-module M: the module structure on X.M,
    an optional comodule structure, and the constraint cells against the
    listed partner objects (rho_bar and r keyed by partner name, alpha by
    the pair of partner names).
    """

    x_name: str
    module: ModuleDesc
    comodule: Optional[ComoduleDesc] = None
    rho_bar: Mapping[str, TwoCell] = dc_field(default_factory=dict)
    r: Mapping[str, TwoCell] = dc_field(default_factory=dict)
    alpha: Mapping[Tuple[str, str], TwoCell] = dc_field(default_factory=dict)


AlphaProvider = Optional[Callable[[EMObject, EMObject, EMObject], Optional[TwoCell]]]


def _act(x: EMObject, m: ModuleDesc, rho: Callable[[EMObject, EMObject], TwoCell],
         partners: Sequence[EMObject], alpha: AlphaProvider = None) -> ActionBundle:
    if x.is_unit:
        return ActionBundle(x.name, m)
    action = module_on_XM(x.psi, m.action)
    module = ModuleDesc(m.acting, x.legs + m.carrier, action.named("action"), Side.LEFT,
                        composite_name(x.name, m.name or "M"))
    rho_bar, r, alphas = {}, {}, {}
    for y in partners:
        cell = rho(x, y)
        rho_bar[y.name] = cell
        r[y.name] = r_from_rho(cell, m.action)
    if alpha is not None:
        for y, z in product(partners, repeat=2):
            cell = alpha(x, y, z)
            if cell is not None:
                alphas[(y.name, z.name)] = cell
    return ActionBundle(x.name, module, None, rho_bar, r, alphas)


def act_sch(x: EMObject, m: ModuleDesc, sigma: TwoCell, b_eta: TwoCell,
            partners: Sequence[EMObject] = (), alpha: AlphaProvider = None) -> ActionBundle:
    """X acting on M through psi_{B,X}, constraints from sigma and, when given, alpha."""
    return _act(x, m, lambda a, c: rho_from_sigma(sigma, a, c, b_eta), partners, alpha)


def act_martin(x: EMObject, m: ModuleDesc, phi_lambda: TwoCell, b_eta: TwoCell,
               partners: Sequence[EMObject] = (), alpha: AlphaProvider = None) -> ActionBundle:
    """X acting on M through psi_{B,X}, constraints from Phi_lambda and, when given, alpha."""
    return _act(x, m, lambda a, c: rho_from_philambda(phi_lambda, a, c, b_eta), partners, alpha)


def act_yd(y: YDModuleDesc, psi_bx: DistLaw, m: RelativeModuleDesc) -> RelativeModuleDesc:
    """
    X.M as a relative (F,B)-module: B acts through psi_{B,X}, F coacts through phi_{X,F}.
    A right-sided YD module acts from the right on a right relative module.
    """
    if not y.x:
        return m
    if y.side is Side.RIGHT:
        return mirror(act_yd(mirror(y), mirror(psi_bx), mirror(m)))
    action = module_on_XM(psi_bx, m.action)
    coaction = comodule_on_XM(y.phi_xf, m.coaction)
    name = composite_name(y.name or "X", m.name or "M")
    return RelativeModuleDesc(m.b, m.f, m.psi_bf, y.x + m.m, action.named("action"),
                              coaction.named("coaction"), Side.LEFT, name)
