"""
Axiom checkers.

Every checker turns a descriptor into a list of named equations between
layer tables, evaluates both sides exactly and compares them entrywise.
All equations of a suite are evaluated even after a failure; reports come
back in declaration order whatever the number of workers.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from itertools import product
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from kcat.constructions import (em_unit_object, qb_triple_action, tau_past_object, tensor_em_objects)
from kcat.convolution import ConvolutionContext, ConvolutionElement, convolution_invert_diagnosed
from kcat.errors import KindUnsupported, MissingEntry, MissingInverse, ScalarModeMismatch, \
    ShapeMismatch, TypeMismatch
from kcat.lincat import (Braiding, CellType, Layer, Space, TwoCell, equal, hcomp, identity,
                         mirror_cell, run_layers, type_str)
from kcat.reports import AxiomSuiteReport, CheckReport, Witness
from kcat.structures import (BimonadDesc, ComoduleDesc,
                             ComonadDesc, CoquasiBimonadDesc, DistKind, DistLaw, EMObject,
                             HausserNillDatum, ModuleDesc, MonadDesc, QBObject, QuasiBimonadDesc,
                             RelativeModuleDesc, Side, SweedlerDatum, TambaraModuleDesc,
                             YDModuleDesc, mirror, validate_shapes)

logger = logging.getLogger(__name__)

CellPair = Tuple[TwoCell, TwoCell]
Law = Callable[[], CheckReport]


def _failed(axiom_id: str, exc: Exception, start: float, domain: Optional[str] = None) -> CheckReport:
    return CheckReport(axiom_id, Witness(type(exc).__name__, lhs=str(exc)),
                       time.perf_counter() - start, domain)


def _compare(axiom_id: str, build: Callable[[], CellPair], mirrored: bool,
             domain: Optional[str] = None) -> CheckReport:
    start = time.perf_counter()
    try:
        lhs, rhs = build()
    except (TypeMismatch, ScalarModeMismatch) as exc:
        return _failed(axiom_id, exc, start, domain)
    if mirrored:
        lhs, rhs = mirror_cell(lhs), mirror_cell(rhs)
    report = equal(lhs, rhs, axiom_id)
    return report.renamed(axiom_id, time.perf_counter() - start, domain)


def _compare_family(axiom_id: str, builds: Sequence[Callable[[], CellPair]], mirrored: bool,
                    domain: str) -> CheckReport:
    start = time.perf_counter()
    for build in builds:
        report = _compare(axiom_id, build, mirrored, domain)
        if not report.passed:
            return report.renamed(axiom_id, time.perf_counter() - start, domain)
    return CheckReport(axiom_id, None, time.perf_counter() - start, domain)


class _Suite:
    """Named equations collected lazily and evaluated together."""

    def __init__(self, field, mirrored: bool = False):
        self._field = field
        self._mirrored = mirrored
        self._laws: List[Law] = []

    @property
    def field(self):
        return self._field

    def layers(self, axiom_id: str, dom: Iterable[Space], lhs: Sequence[Layer],
               rhs: Sequence[Layer]) -> None:
        """Both sides given as layer tables over the same domain."""
        dom = tuple(dom)
        field = self._field
        self.cells(axiom_id, lambda: (run_layers(dom, lhs, field), run_layers(dom, rhs, field)))

    def cells(self, axiom_id: str, build: Callable[[], CellPair]) -> None:
        self._laws.append(partial(_compare, axiom_id, build, self._mirrored))

    def family(self, axiom_id: str, builds: Sequence[Callable[[], CellPair]], domain: str) -> None:
        self._laws.append(partial(_compare_family, axiom_id, list(builds), self._mirrored, domain))

    def run(self, workers: int = 1) -> AxiomSuiteReport:
        logger.debug(f"evaluating {len(self._laws)} equations on {max(workers, 1)} worker(s)")
        if workers <= 1 or len(self._laws) < 2:
            return [law() for law in self._laws]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda law: law(), self._laws))


def _require_shapes(desc) -> None:
    report = validate_shapes(desc)
    if not report.passed:
        w = report.witness
        raise ShapeMismatch(f"{w.lhs}, expected {w.rhs}")


def _single_leg(carrier: CellType, what: str) -> Space:
    if len(carrier) != 1:
        raise ShapeMismatch(f"{what} must live on a single space, got {type_str(carrier)}")
    return carrier[0]


def _tagged(prefix: str, name: str) -> str:
    return f"{prefix} {name}" if prefix else name


# ---------------------------------------------------------------------------
# monads, comonads, distributive laws, modules


def _monad_laws(suite: _Suite, m: MonadDesc, prefix: str = "") -> None:
    c = len(m.carrier)
    b = m.carrier
    suite.layers(_tagged(prefix, "mu assoc"), b + b + b,
                 [(m.mu, 0), (m.mu, 0)], [(m.mu, c), (m.mu, 0)])
    suite.layers(_tagged(prefix, "mu unit (left)"), b, [(m.eta, 0), (m.mu, 0)], [])
    suite.layers(_tagged(prefix, "mu unit (right)"), b, [(m.eta, c), (m.mu, 0)], [])


def _comonad_counit_laws(suite: _Suite, d: ComonadDesc, prefix: str = "") -> None:
    c = len(d.carrier)
    suite.layers(_tagged(prefix, "eps counit (left)"), d.carrier, [(d.delta, 0), (d.eps, 0)], [])
    suite.layers(_tagged(prefix, "eps counit (right)"), d.carrier, [(d.delta, 0), (d.eps, c)], [])


def _comonad_laws(suite: _Suite, d: ComonadDesc, prefix: str = "") -> None:
    c = len(d.carrier)
    f = d.carrier
    suite.layers(_tagged(prefix, "delta coassoc"), f,
                 [(d.delta, 0), (d.delta, 0)], [(d.delta, 0), (d.delta, c)])
    _comonad_counit_laws(suite, d, prefix)


def check_monad(m: MonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """Associativity and both unit laws of (B, mu, eta)."""
    _require_shapes(m)
    suite = _Suite(m.field)
    _monad_laws(suite, m)
    return suite.run(workers)


def check_comonad(d: ComonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """Coassociativity and both counit laws of (F, Delta, eps)."""
    _require_shapes(d)
    suite = _Suite(d.field)
    _comonad_laws(suite, d)
    return suite.run(workers)


def _dist_kind_laws(suite: _Suite, d: TwoCell, over: CellType, under: CellType, kind: DistKind,
                    structure, prefix: str) -> None:
    na, nx = len(over), len(under)
    a, x = over, under
    label = _tagged(prefix, kind.value)
    if kind in (DistKind.LEFT_MONADIC, DistKind.RIGHT_MONADIC):
        if not isinstance(structure, MonadDesc):
            raise KindUnsupported(f"{kind.value} needs a monad, got {type(structure).__name__}")
    elif not isinstance(structure, ComonadDesc):
        raise KindUnsupported(f"{kind.value} needs a comonad, got {type(structure).__name__}")
    if kind is DistKind.LEFT_MONADIC:
        mu, eta = structure.mu, structure.eta
        suite.layers(label, a + a + x, [(mu, 0), (d, 0)], [(d, na), (d, 0), (mu, nx)])
        suite.layers(label + " unit", x, [(eta, 0), (d, 0)], [(eta, nx)])
    elif kind is DistKind.RIGHT_MONADIC:
        mu, eta = structure.mu, structure.eta
        suite.layers(label, a + x + x, [(mu, na), (d, 0)], [(d, 0), (d, nx), (mu, 0)])
        suite.layers(label + " unit", a, [(eta, na), (d, 0)], [(eta, 0)])
    elif kind is DistKind.LEFT_COMONADIC:
        delta, eps = structure.delta, structure.eps
        suite.layers(label, a + x, [(d, 0), (delta, nx)], [(delta, 0), (d, na), (d, 0)])
        suite.layers(label + " counit", a + x, [(d, 0), (eps, nx)], [(eps, 0)])
    else:
        delta, eps = structure.delta, structure.eps
        suite.layers(label, a + x, [(d, 0), (delta, 0)], [(delta, na), (d, 0), (d, nx)])
        suite.layers(label + " counit", a + x, [(d, 0), (eps, 0)], [(eps, na)])


def _dist_laws(suite: _Suite, d: DistLaw, over, under, kinds: Iterable[DistKind],
               prefix: str = "") -> None:
    for kind in sorted(kinds, key=lambda k: k.value):
        structure = over if kind in (DistKind.LEFT_MONADIC, DistKind.LEFT_COMONADIC) else under
        _dist_kind_laws(suite, d.cell, d.over, d.under, kind, structure, prefix)


def check_dist_law(d: DistLaw, over: Union[MonadDesc, ComonadDesc, None],
                   under: Union[MonadDesc, ComonadDesc, None],
                   kind: Optional[DistKind] = None, workers: int = 1) -> AxiomSuiteReport:
    """
    Check d: A.X -> X.A against the (co)monad on A (left kinds) or X (right kinds).

    Args:
        d: the distributive law
        over: structure on A, the leg entering on the left
        under: structure on X, the leg entering on the right
        kind: one kind, or None for every kind d declares

    Raises:
        KindUnsupported: when the kind needs a structure that was not given
    """
    _require_shapes(d)
    suite = _Suite(d.field)
    kinds = [kind] if kind is not None else list(d.kinds)
    _dist_laws(suite, d, over, under, kinds, d.name or "")
    return suite.run(workers)


def _module_laws(suite: _Suite, m: ModuleDesc, monad: MonadDesc, prefix: str = "") -> None:
    nu, a, c = m.action, len(m.acting), len(m.carrier)
    if m.side is Side.LEFT:
        suite.layers(_tagged(prefix, "module assoc"), m.acting + m.acting + m.carrier,
                     [(monad.mu, 0), (nu, 0)], [(nu, a), (nu, 0)])
        suite.layers(_tagged(prefix, "module unit"), m.carrier, [(monad.eta, 0), (nu, 0)], [])
    else:
        suite.layers(_tagged(prefix, "module assoc"), m.carrier + m.acting + m.acting,
                     [(monad.mu, c), (nu, 0)], [(nu, 0), (nu, 0)])
        suite.layers(_tagged(prefix, "module unit"), m.carrier, [(monad.eta, c), (nu, 0)], [])


def _comodule_laws(suite: _Suite, m: ComoduleDesc, comonad: ComonadDesc, prefix: str = "") -> None:
    rho, a, c = m.coaction, len(m.acting), len(m.carrier)
    if m.side is Side.LEFT:
        suite.layers(_tagged(prefix, "comodule coassoc"), m.carrier,
                     [(rho, 0), (rho, a)], [(rho, 0), (comonad.delta, 0)])
        suite.layers(_tagged(prefix, "comodule counit"), m.carrier, [(rho, 0), (comonad.eps, 0)], [])
    else:
        suite.layers(_tagged(prefix, "comodule coassoc"), m.carrier,
                     [(rho, 0), (rho, 0)], [(rho, 0), (comonad.delta, c)])
        suite.layers(_tagged(prefix, "comodule counit"), m.carrier, [(rho, 0), (comonad.eps, c)], [])


def check_module(m: ModuleDesc, monad: MonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """Associativity and unit of a left or right module."""
    _require_shapes(m)
    suite = _Suite(monad.field)
    _module_laws(suite, m, monad)
    return suite.run(workers)


def check_comodule(m: ComoduleDesc, comonad: ComonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """Coassociativity and counit of a left or right comodule."""
    _require_shapes(m)
    suite = _Suite(comonad.field)
    _comodule_laws(suite, m, comonad)
    return suite.run(workers)


def check_tambara(t: TambaraModuleDesc, workers: int = 1) -> AxiomSuiteReport:
    """Module laws, tau_{B,X} left monadic, and naturality of tau w.r.t. the action."""
    _require_shapes(t)
    field = t.base.field
    suite = _Suite(field)
    b, x = t.base.carrier, t.x
    _module_laws(suite, t.nu, t.base)
    _dist_kind_laws(suite, t.tau.cell, b, x, DistKind.LEFT_MONADIC, t.base, "tau")
    tau_bb = t.tau_bb.cell if t.tau_bb is not None else Braiding(field=field).cross(b, b)
    nb = len(b)
    suite.layers("nat lm", b + b + x, [(t.nu.action, nb), (t.tau.cell, 0)],
                 [(tau_bb, 0), (t.tau.cell, nb), (t.nu.action, 0)])
    return suite.run(workers)


def _ybe_pair(t12: TwoCell, t13: TwoCell, t23: TwoCell, legs: Tuple[CellType, CellType, CellType],
              field) -> CellPair:
    a, b, c = legs
    dom = a + b + c
    lhs = run_layers(dom, [(t23, len(a)), (t13, 0), (t12, len(c))], field)
    rhs = run_layers(dom, [(t12, 0), (t13, len(b)), (t23, 0)], field)
    return lhs, rhs


def _as_legs(x) -> CellType:
    return (x,) if isinstance(x, Space) else tuple(x)


def check_yang_baxter(t12: TwoCell, t13: TwoCell, t23: TwoCell, legs,
                      axiom_id: str = "YBE") -> CheckReport:
    """
    Braid relation on A.B.C for t12: AB->BA, t13: AC->CA, t23: BC->CB.

    The two sides are t12 t13 t23 (C moved left first) and t23 t13 t12.
    """
    legs = tuple(_as_legs(l) for l in legs)
    return _compare(axiom_id, lambda: _ybe_pair(t12, t13, t23, legs, t12.field), False)


def check_left_linear(z: TwoCell, src_action: TwoCell, dst_action: TwoCell,
                      axiom_id: str = "left linear") -> CheckReport:
    """z: X -> Y commutes with left actions B.X -> X and B.Y -> Y."""
    nb = len(src_action.dom) - len(z.dom)
    acting = src_action.dom[:nb]

    def build() -> CellPair:
        dom = acting + z.dom
        lhs = run_layers(dom, [(src_action, 0), (z, 0)], z.field)
        rhs = run_layers(dom, [(z, nb), (dst_action, 0)], z.field)
        return lhs, rhs

    return _compare(axiom_id, build, False)


# ---------------------------------------------------------------------------
# bialgebras, quasi- and coquasi-bimonads


def _ff_braiding(f: Space, tau_ff: TwoCell) -> Braiding:
    return Braiding({(f.name, f.name): tau_ff}, tau_ff.field)


def _bialgebra_compat_laws(suite: _Suite, monad: MonadDesc, comonad: ComonadDesc,
                           tau_ff: TwoCell) -> None:
    f = _single_leg(monad.carrier, "bialgebra carrier")
    ff = (f, f)
    mu, eta, delta, eps = monad.mu, monad.eta, comonad.delta, comonad.eps
    braid = _ff_braiding(f, tau_ff)
    suite.layers("Delta mult", ff, [(mu, 0), (delta, 0)],
                 [(delta, 0), (delta, 2)] + braid.interleave(ff, ff) + [(mu, 0), (mu, 1)])
    suite.layers("Delta unit", (), [(eta, 0), (delta, 0)], [(eta, 0), (eta, 1)])
    suite.layers("eps mult", ff, [(mu, 0), (eps, 0)], [(eps, 0), (eps, 0)])
    suite.layers("eps unit", (), [(eta, 0), (eps, 0)], [])


def check_bialgebra(monad: MonadDesc, comonad: ComonadDesc, tau_ff: DistLaw,
                    workers: int = 1) -> AxiomSuiteReport:
    """Ordinary bialgebra axioms with Delta multiplicative through tau_FF."""
    for desc in (monad, comonad, tau_ff):
        _require_shapes(desc)
    suite = _Suite(monad.field)
    _monad_laws(suite, monad)
    _comonad_laws(suite, comonad)
    _dist_laws(suite, tau_ff, monad, monad, [DistKind.LEFT_MONADIC, DistKind.RIGHT_MONADIC], "tau_FF")
    _dist_laws(suite, tau_ff, comonad, comonad,
               [DistKind.LEFT_COMONADIC, DistKind.RIGHT_COMONADIC], "tau_FF")
    _bialgebra_compat_laws(suite, monad, comonad, tau_ff.cell)
    return suite.run(workers)


def _power_context(q, times: int, on_domain: bool) -> ConvolutionContext:
    f = _single_leg(q.carrier, "carrier")
    braid = _ff_braiding(f, q.tau_ff.cell)
    if on_domain:
        return ConvolutionContext([q.comonad] * times, [], braid, q.field)
    return ConvolutionContext([], [q.monad] * times, braid, q.field)


def _conv(ctx: ConvolutionContext, *cells: TwoCell) -> TwoCell:
    """Iterated convolution product, left to right."""
    delta, mu = ctx.comultiplication(), ctx.multiplication()
    result = cells[0]
    for cell in cells[1:]:
        result = run_layers(ctx.dom, [(delta, 0), (hcomp(result, cell), 0), (mu, 0)], ctx.field)
    return result


def _inverse_laws(suite: _Suite, label: str, ctx: ConvolutionContext, x: TwoCell,
                  x_inv: TwoCell) -> None:
    suite.cells(f"{label} invertible (left)", lambda: (_conv(ctx, x_inv, x), ctx.unit_cell()))
    suite.cells(f"{label} invertible (right)", lambda: (_conv(ctx, x, x_inv), ctx.unit_cell()))


def check_quasi_bimonad(q: QuasiBimonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """
    Quasi-bimonad axioms: monad laws, counit laws, tau_FF laws, Delta and eps
    multiplicative, quasi coassociativity, the 3-cocycle condition on Phi,
    normalization, naturality of tau_{F,I} w.r.t. Phi and invertibility.

    Raises:
        MissingInverse: when phi_inv is absent
    """
    _require_shapes(q)
    if q.phi_inv is None:
        raise MissingInverse("quasi-bimonad needs an explicit Phi inverse")
    f = _single_leg(q.carrier, "quasi-bimonad carrier")
    field = q.field
    mu, eta, delta, eps, phi, tau = (q.monad.mu, q.monad.eta, q.comonad.delta, q.comonad.eps,
                                     q.phi, q.tau_ff.cell)
    suite = _Suite(field)
    _monad_laws(suite, q.monad)
    _comonad_counit_laws(suite, q.comonad)
    _dist_laws(suite, q.tau_ff, q.monad, q.monad,
               [DistKind.LEFT_MONADIC, DistKind.RIGHT_MONADIC], "tau_FF")
    _dist_laws(suite, q.tau_ff, q.comonad, q.comonad,
               [DistKind.LEFT_COMONADIC, DistKind.RIGHT_COMONADIC], "tau_FF")
    _bialgebra_compat_laws(suite, q.monad, q.comonad, tau)
    suite.layers("Phi normalized", (), [(phi, 0), (eps, 1)], [(eta, 0), (eta, 1)])

    ctx3 = _power_context(q, 3, on_domain=False)
    ctx4 = _power_context(q, 4, on_domain=False)

    def quasi_coass() -> CellPair:
        mult = ctx3.multiplication()
        lhs = run_layers((f,), [(phi, 0), (delta, 3), (delta, 3), (mult, 0)], field)
        rhs = run_layers((f,), [(delta, 0), (delta, 1), (phi, 3), (mult, 0)], field)
        return lhs, rhs

    def three_cocycle() -> CellPair:
        one_phi = run_layers((), [(eta, 0), (phi, 1)], field)
        mid = run_layers((), [(phi, 0), (delta, 1)], field)
        phi_one = run_layers((), [(phi, 0), (eta, 3)], field)
        right = run_layers((), [(phi, 0), (delta, 2)], field)
        left = run_layers((), [(phi, 0), (delta, 0)], field)
        return _conv(ctx4, one_phi, mid, phi_one), _conv(ctx4, right, left)

    suite.cells("quasi coass.", quasi_coass)
    suite.cells("3-coc. cond.", three_cocycle)
    suite.layers("Phi nat new", (f,), [(phi, 1), (tau, 0), (tau, 1), (tau, 2)], [(phi, 0)])
    _inverse_laws(suite, "Phi", ctx3, phi, q.phi_inv)
    return suite.run(workers)


def check_coquasi_bimonad(q: CoquasiBimonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """
    Coquasi-bimonad axioms: comonad laws, unit laws, tau_FF laws, Delta and
    eps multiplicative, quasi associativity, the 3-cocycle condition on
    omega, normalization, naturality of tau_{F,I} w.r.t. omega and
    invertibility.

    Raises:
        MissingInverse: when omega_inv is absent
    """
    _require_shapes(q)
    if q.omega_inv is None:
        raise MissingInverse("coquasi-bimonad needs an explicit omega inverse")
    f = _single_leg(q.carrier, "coquasi-bimonad carrier")
    field = q.field
    mu, eta, delta, eps, omega, tau = (q.monad.mu, q.monad.eta, q.comonad.delta, q.comonad.eps,
                                       q.omega, q.tau_ff.cell)
    suite = _Suite(field)
    _comonad_laws(suite, q.comonad)
    suite.layers("mu unit (left)", (f,), [(eta, 0), (mu, 0)], [])
    suite.layers("mu unit (right)", (f,), [(eta, 1), (mu, 0)], [])
    _dist_laws(suite, q.tau_ff, q.monad, q.monad,
               [DistKind.LEFT_MONADIC, DistKind.RIGHT_MONADIC], "tau_FF")
    _dist_laws(suite, q.tau_ff, q.comonad, q.comonad,
               [DistKind.LEFT_COMONADIC, DistKind.RIGHT_COMONADIC], "tau_FF")
    _bialgebra_compat_laws(suite, q.monad, q.comonad, tau)
    suite.layers("omega normalized", (f, f), [(eta, 1), (omega, 0)], [(eps, 0), (eps, 0)])

    ctx3 = _power_context(q, 3, on_domain=True)
    ctx4 = _power_context(q, 4, on_domain=True)
    fff = (f, f, f)

    def quasi_assoc() -> CellPair:
        split = ctx3.comultiplication()
        lhs = run_layers(fff, [(split, 0), (omega, 0), (mu, 0), (mu, 0)], field)
        rhs = run_layers(fff, [(split, 0), (mu, 1), (mu, 0), (omega, 1)], field)
        return lhs, rhs

    def three_cocycle() -> CellPair:
        ffff = (f, f, f, f)
        eps_omega = run_layers(ffff, [(eps, 0), (omega, 0)], field)
        mid = run_layers(ffff, [(mu, 1), (omega, 0)], field)
        omega_eps = run_layers(ffff, [(omega, 0), (eps, 0)], field)
        right = run_layers(ffff, [(mu, 2), (omega, 0)], field)
        left = run_layers(ffff, [(mu, 0), (omega, 0)], field)
        return _conv(ctx4, eps_omega, mid, omega_eps), _conv(ctx4, right, left)

    suite.cells("quasi assoc", quasi_assoc)
    suite.cells("omega 3-cocycle", three_cocycle)
    suite.layers("dual cond", (f, f, f, f), [(omega, 0)],
                 [(tau, 2), (tau, 1), (tau, 0), (omega, 1)])
    _inverse_laws(suite, "omega", ctx3, omega, q.omega_inv)
    return suite.run(workers)


def check_qb_one_cell(x: CellType, tau_fx: DistLaw, q: QuasiBimonadDesc,
                      workers: int = 1) -> AxiomSuiteReport:
    """
    tau_{F,X} as a 1-cell of QB(K)(F): monadic and comonadic distributive
    law, natural w.r.t. Phi, and the Yang-Baxter equation on F.F.X.
    """
    _require_shapes(tau_fx)
    x = _as_legs(x)
    f = _single_leg(q.carrier, "quasi-bimonad carrier")
    tau = tau_fx.cell
    suite = _Suite(q.field)
    _dist_kind_laws(suite, tau, (f,), x, DistKind.LEFT_MONADIC, q.monad, "monadic d.l.")
    _dist_kind_laws(suite, tau, (f,), x, DistKind.LEFT_COMONADIC, q.comonad, "comonadic d.l.")
    suite.layers("Phi nat", x, [(q.phi, 0), (tau, 2), (tau, 1), (tau, 0)], [(q.phi, len(x))])
    suite.cells("YBE BBX", lambda: _ybe_pair(q.tau_ff.cell, tau, tau, ((f,), (f,), x), q.field))
    return suite.run(workers)


def check_fff_rules(q: QuasiBimonadDesc, x: QBObject, y: QBObject, z: QBObject,
                    workers: int = 1) -> AxiomSuiteReport:
    """
    The diagonal action of F.F.F on X.Y.Z is a module action and commutes
    with tau_{F,FFF} and tau_{F,XYZ}.
    """
    f = _single_leg(q.carrier, "quasi-bimonad carrier")
    field = q.field
    eta = q.monad.eta
    legs = x.legs + y.legs + z.legs
    act = run_layers((f, f, f) + legs, qb_triple_action(x, y, z, 0), field)
    mult = _power_context(q, 3, on_domain=False).multiplication()
    tau_f_fff = _ff_braiding(f, q.tau_ff.cell).past(f, (f, f, f))
    tau_f_xyz = tau_past_object(f, [x, y, z], field)
    suite = _Suite(field)
    suite.layers("FF module rule", (f,) * 6 + legs, [(act, 3), (act, 0)], [(mult, 0), (act, 0)])
    suite.layers("FF module rule unit", legs, [(eta, 0), (eta, 1), (eta, 2), (act, 0)], [])
    suite.layers("nat FFF", (f,) * 4 + legs, [(tau_f_fff, 0), (tau_f_xyz, 3), (act, 0)],
                 [(act, 1), (tau_f_xyz, 0)])
    return suite.run(workers)


# ---------------------------------------------------------------------------
# Sweedler and Hausser-Nill data


def check_sweedler_datum(s: SweedlerDatum, comonad: Optional[ComonadDesc] = None,
                         braiding: Optional[Braiding] = None, workers: int = 1) -> AxiomSuiteReport:
    """
    Module monad, twisted action and 2-cocycle axioms of a Sweedler datum.

    When the comonad on F is given, sigma is also checked for a two-sided
    convolution inverse in K(FF, B).
    """
    _require_shapes(s)
    field = s.field
    b, f = s.b.carrier, s.f_legs
    nb, nf = len(b), len(f)
    mu_b, eta_b = s.b.mu, s.b.eta
    psi, act, sigma = s.psi.cell, s.weak_action, s.sigma
    suite = _Suite(field)
    suite.layers("F mod alg", b + b + f, [(psi, nb), (act, 0), (mu_b, 0)], [(mu_b, 0), (act, 0)])
    suite.layers("F mod alg unit", f, [(eta_b, 0), (act, 0)], [(s.eps_f, 0), (eta_b, 0)])
    suite.layers("weak action", b + f + f, [(psi, 0), (psi, nf), (sigma, 0), (mu_b, 0)],
                 [(s.mu_m, nb), (act, 0), (mu_b, 0)])
    suite.layers("weak action unity", b, [(s.eta_m, 0), (s.eps_f, 0), (mu_b, 0)],
                 [(s.eta_m, nb), (act, 0), (mu_b, 0)])
    suite.layers("2-cocycle condition", f + f + f,
                 [(s.beta_cell, 0), (s.mu_m, nf), (sigma, 0), (mu_b, 0)],
                 [(s.mu_m, 0), (psi, nf), (sigma, 0), (mu_b, 0)])
    counit_unit = [(s.eps_f, 0), (eta_b, 0)]
    suite.layers("normalized 2-cocycle (left)", f,
                 [(s.eta_m, 0), (psi, nf), (sigma, 0), (mu_b, 0)], counit_unit)
    suite.layers("normalized 2-cocycle (right)", f,
                 [(s.eta_m, nf), (sigma, 0), (mu_b, 0)], counit_unit)
    if comonad is not None:
        ctx = ConvolutionContext([comonad, comonad], [s.b], braiding, field)
        suite.cells("sigma invertible", lambda: _invertible_pair(ctx, sigma))
    return suite.run(workers)


def _invertible_pair(ctx: ConvolutionContext, x: TwoCell) -> CellPair:
    inverse, reason = convolution_invert_diagnosed(ConvolutionElement(x, ctx))
    if inverse is None:
        raise TypeMismatch(f"no two-sided convolution inverse ({reason})")
    return _conv(ctx, inverse.cell, x), ctx.unit_cell()


def check_hn_datum(h: HausserNillDatum, f_monad: Optional[MonadDesc] = None,
                   braiding: Optional[Braiding] = None, workers: int = 1) -> AxiomSuiteReport:
    """
    Comodule monad, quasi coaction and cocycle axioms of a Hausser-Nill datum.

    When the monad on F is given, Phi_lambda is also checked for a two-sided
    convolution inverse in K(I, FFB).
    """
    _require_shapes(h)
    field = h.field
    b, f = h.b.carrier, h.f_legs
    nb, nf = len(b), len(f)
    mu_b, eta_b = h.b.mu, h.b.eta
    psi, lam, phi_l = h.psi.cell, h.coaction, h.phi_lambda
    suite = _Suite(field)
    suite.layers("F comod alg", b + b, [(lam, nb), (psi, 0), (mu_b, nf)], [(mu_b, 0), (lam, 0)])
    suite.layers("F comod alg unit", (), [(eta_b, 0), (lam, 0)], [(h.eta_f, 0), (eta_b, nf)])
    suite.layers("quasi coaction", b, [(lam, 0), (h.delta_m, 0), (mu_b, 2 * nf)],
                 [(phi_l, nb), (psi, 0), (psi, nf), (mu_b, 2 * nf)])
    suite.layers("quasi coaction counity", b, [(lam, 0), (h.eps_m, 0), (mu_b, 0)],
                 [(h.eta_f, nb), (h.eps_m, nb), (mu_b, 0)])
    suite.layers("3-cocycle cond fi-lambda", (),
                 [(phi_l, 0), (h.delta_m, 0), (psi, 2 * nf), (mu_b, 3 * nf), (h.beta_cell, 0)],
                 [(phi_l, 0), (h.delta_m, nf), (mu_b, 3 * nf)])
    unit_unit = [(h.eta_f, 0), (eta_b, nf)]
    suite.layers("normalized 3-cocycle fi-lambda (left)", (),
                 [(phi_l, 0), (h.eps_m, 0), (psi, 0), (mu_b, nf)], unit_unit)
    suite.layers("normalized 3-cocycle fi-lambda (right)", (),
                 [(phi_l, 0), (h.eps_m, nf), (mu_b, nf)], unit_unit)
    if f_monad is not None:
        ctx = ConvolutionContext([], [f_monad, f_monad, h.b], braiding, field)
        suite.cells("Phi_lambda invertible", lambda: _invertible_pair(ctx, phi_l))
    return suite.run(workers)


# ---------------------------------------------------------------------------
# cocycle families


Key = Tuple[CellType, ...]


def _family_cell(family: Mapping[Key, TwoCell], key: Key) -> TwoCell:
    try:
        return family[key]
    except KeyError:
        raise MissingEntry(f"no cell for ({', '.join(type_str(k) for k in key)})")


def _domain_label(objects: Sequence[CellType]) -> str:
    return "objects " + " ".join(type_str(o) for o in objects)


def check_k_cocycle(family: Mapping[Key, TwoCell], order: int, objects: Sequence[CellType],
                    normalized: bool = False, morphisms: Sequence[TwoCell] = (),
                    inverse_form: bool = False, workers: int = 1) -> AxiomSuiteReport:
    """
    The 2- or 3-cocycle condition in K over every tuple drawn from ``objects``.

    Args:
        family: cells keyed by tuples of cell types, e.g. (X, Y) -> rho_{X,Y}
        order: 2 or 3
        objects: the finite quantification domain
        normalized: also require unit entries to be identities
        morphisms: 2-cells between listed objects for the naturality check (order 2)
        inverse_form: check the condition satisfied by an inverse family instead

    Raises:
        MissingEntry: when the family lacks a needed tuple
    """
    if order not in (2, 3):
        raise ValueError("cocycle order must be 2 or 3")
    objects = [tuple(o) for o in objects]
    if not objects:
        raise MissingEntry("cocycle check needs at least one object")
    field = next(iter(family.values())).field if family else None
    if field is None:
        raise MissingEntry("empty cocycle family")
    domain = _domain_label(objects)
    suite = _Suite(field)
    builds = []
    if order == 2:
        for x, y, z in product(objects, repeat=3):
            r_yz, r_x_yz = _family_cell(family, (y, z)), _family_cell(family, (x, y + z))
            r_xy, r_xy_z = _family_cell(family, (x, y)), _family_cell(family, (x + y, z))
            dom = x + y + z
            if inverse_form:
                lhs = [(r_yz, len(x)), (r_x_yz, 0)]
                rhs = [(r_xy, 0), (r_xy_z, 0)]
            else:
                lhs = [(r_x_yz, 0), (r_yz, len(x))]
                rhs = [(r_xy_z, 0), (r_xy, 0)]
            builds.append(partial(_layer_pair, dom, lhs, rhs, field))
        suite.family("2-coc" if inverse_form else "inv 2-coc", builds, domain)
        if morphisms:
            suite.family("natural", _naturality_builds(family, morphisms, objects, field), domain)
    else:
        for x, y, z, w in product(objects, repeat=4):
            lhs = [(_family_cell(family, (x, y, z)), 0),
                   (_family_cell(family, (x, y + z, w)), 0),
                   (_family_cell(family, (y, z, w)), len(x))]
            rhs = [(_family_cell(family, (x + y, z, w)), 0),
                   (_family_cell(family, (x, y, z + w)), 0)]
            builds.append(partial(_layer_pair, x + y + z + w, lhs, rhs, field))
        suite.family("3-coc", builds, domain)
    if normalized:
        unit_builds = []
        for x in objects:
            keys = [((), x), (x, ())] if order == 2 else \
                [((), x, y) for y in objects] + [(x, (), y) for y in objects] + [(x, y, ()) for y in objects]
            for key in keys:
                cell = _family_cell(family, key)
                unit_builds.append(partial(_cell_pair, cell, identity(cell.dom, field)))
        suite.family("normalized", unit_builds, domain)
    return suite.run(workers)


def _layer_pair(dom: CellType, lhs: Sequence[Layer], rhs: Sequence[Layer], field) -> CellPair:
    return run_layers(dom, lhs, field), run_layers(dom, rhs, field)


def _cell_pair(a: TwoCell, b: TwoCell) -> CellPair:
    return a, b


def _naturality_builds(family, morphisms, objects, field):
    arrows = list(morphisms) + [identity(o, field) for o in objects]
    builds = []
    for zeta, xi in product(arrows, repeat=2):
        if (zeta.dom, xi.dom) not in family or (zeta.cod, xi.cod) not in family:
            continue
        src, dst = family[(zeta.dom, xi.dom)], family[(zeta.cod, xi.cod)]
        lhs = [(src, 0), (zeta, 0), (xi, len(zeta.cod))]
        rhs = [(zeta, 0), (xi, len(zeta.cod)), (dst, 0)]
        builds.append(partial(_layer_pair, zeta.dom + xi.dom, lhs, rhs, field))
    return builds


RhoSource = Union[Mapping[Tuple[str, str], TwoCell], Callable[[EMObject, EMObject], TwoCell]]
AlphaSource = Optional[Callable[[EMObject, EMObject, EMObject], Optional[TwoCell]]]


def _rho(source: RhoSource, x: EMObject, y: EMObject) -> TwoCell:
    try:
        if callable(source):
            return source(x, y)
        return source[(x.name, y.name)]
    except KeyError:
        raise MissingEntry(f"no rho cell for ({x.name}, {y.name})")


def check_em_cocycle_family(objects: Sequence[EMObject], b: MonadDesc, rho: RhoSource,
                            rho_inv: Optional[RhoSource] = None,
                            morphism_gens: Sequence[Tuple[EMObject, EMObject, TwoCell]] = (),
                            alpha: AlphaSource = None, workers: int = 1) -> AxiomSuiteReport:
    """
    The Eilenberg-Moore 2-cocycle identities for rho_{X,Y}: X.Y -> X.Y.B over
    all pairs and triples of ``objects``.

    Args:
        objects: finite quantification domain; composites are formed with
            tensor_em_objects and looked up by concatenated names
        b: the monad B
        rho: cells keyed by (name, name) or a callable on two objects
        rho_inv: the inverse family; required for the invertibility check
        morphism_gens: (source, target, zeta) triples of B-linear 2-cells
        alpha: associativity constraint of the acting category, identity when None

    Raises:
        MissingEntry: when rho lacks a required pair
        MissingInverse: when rho_inv is absent
    """
    if rho_inv is None:
        raise MissingInverse("the EM cocycle family needs its inverse family")
    objects = list(objects)
    field = b.field
    bl, nb = b.carrier, len(b.carrier)
    mu, eta = b.mu, b.eta
    domain = "objects " + " ".join(o.name for o in objects)
    pairs = list(product(objects, repeat=2))
    triples = list(product(objects, repeat=3))
    suite = _Suite(field)

    arrows = list(morphism_gens) + [(o, o, identity(o.legs, field)) for o in objects]
    natur = []
    for (x, x2, zeta), (y, y2, xi) in product(arrows, repeat=2):
        src, dst = _rho(rho, x, y), _rho(rho, x2, y2)
        lhs = [(src, 0), (zeta, 0), (xi, x2.width)]
        rhs = [(zeta, 0), (xi, x2.width), (dst, 0)]
        natur.append(partial(_layer_pair, x.legs + y.legs, lhs, rhs, field))
    suite.family("natur", natur, domain)

    vert = []
    for x, y in pairs:
        r, r_inv = _rho(rho, x, y), _rho(rho_inv, x, y)
        n = x.width + y.width
        unit = [(eta, n)]
        vert.append(partial(_layer_pair, x.legs + y.legs, [(r, 0), (r_inv, 0), (mu, n)], unit, field))
        vert.append(partial(_layer_pair, x.legs + y.legs, [(r_inv, 0), (r, 0), (mu, n)], unit, field))
    suite.family("vert comp M", vert, domain)

    linear = []
    for x, y in pairs:
        r = _rho(rho, x, y)
        n, nx = x.width + y.width, x.width
        lhs = [(x.psi, 0), (y.psi, nx), (r, 0), (mu, n)]
        rhs = [(r, nb), (x.psi, 0), (y.psi, nx), (mu, n)]
        linear.append(partial(_layer_pair, bl + x.legs + y.legs, lhs, rhs, field))
    suite.family("2-cells EM^M", linear, domain)

    pentagon, pentagon_r = [], []
    for x, y, z in triples:
        xy, yz = tensor_em_objects(x, y, bl, field), tensor_em_objects(y, z, bl, field)
        n = x.width + y.width + z.width
        legs = x.legs + y.legs + z.legs
        a_cell = alpha(x, y, z) if alpha is not None else None
        top = [(a_cell, 0)] if a_cell is not None else []
        r_xy_z, r_x_y = _rho(rho, xy, z), _rho(rho, x, y)
        r_x_yz, r_y_z = _rho(rho, x, yz), _rho(rho, y, z)
        lhs = [(r_xy_z, 0), (r_x_y, 0), (z.psi, x.width + y.width), (mu, n)]
        rhs = top + [(r_x_yz, 0), (r_y_z, x.width), (mu, n)]
        pentagon.append(partial(_layer_pair, legs, lhs, rhs, field))
        # r-form with M = B acting on itself by mu
        nu_zm = run_layers(bl + z.legs + bl, [(z.psi, 0), (mu, z.width)], field)
        r_lhs = [(r_xy_z, 0), (mu, n), (r_x_y, 0), (nu_zm, x.width + y.width)]
        r_rhs = top + [(r_x_yz, 0), (mu, n), (r_y_z, x.width), (mu, n)]
        pentagon_r.append(partial(_layer_pair, legs + bl, r_lhs, r_rhs, field))
    suite.family("monad law ro", pentagon, domain)
    suite.family("monad law ro new", pentagon_r, domain)

    unit = em_unit_object(bl, field)
    normal = []
    for x in objects:
        expected = run_layers(x.legs, [(eta, x.width)], field)
        normal.append(partial(_cell_pair, _rho(rho, x, unit), expected))
        normal.append(partial(_cell_pair, _rho(rho, unit, x), expected))
    suite.family("normalized in EM", normal, domain)
    return suite.run(workers)


# ---------------------------------------------------------------------------
# bimonads, Yetter-Drinfel'd and relative modules


def _bimonad_laws(suite: _Suite, bm: BimonadDesc) -> None:
    f = bm.carrier
    c = len(f)
    mu, eta, delta, eps, lam = bm.monad.mu, bm.monad.eta, bm.comonad.delta, bm.comonad.eps, bm.lam.cell
    _monad_laws(suite, bm.monad)
    _comonad_laws(suite, bm.comonad)
    suite.layers("Delta mult", f + f, [(mu, 0), (delta, 0)], [(delta, c), (lam, 0), (mu, c)])
    suite.layers("Delta unit", (), [(eta, 0), (delta, 0)], [(eta, 0), (eta, c)])
    suite.layers("eps mult", f + f, [(mu, 0), (eps, 0)], [(eps, 0), (eps, 0)])
    suite.layers("eps unit", (), [(eta, 0), (eps, 0)], [])
    _dist_kind_laws(suite, lam, f, f, DistKind.LEFT_MONADIC, bm.monad, "lambda")
    _dist_kind_laws(suite, lam, f, f, DistKind.RIGHT_COMONADIC, bm.comonad, "lambda")


def check_bimonad(bm: BimonadDesc, workers: int = 1) -> AxiomSuiteReport:
    """Monad and comonad laws, their compatibility through lambda, and lambda's distributive laws."""
    _require_shapes(bm)
    suite = _Suite(bm.field)
    _bimonad_laws(suite, bm)
    return suite.run(workers)


def check_yd(y: YDModuleDesc, strong: bool = True, workers: int = 1) -> AxiomSuiteReport:
    """
    Yetter-Drinfel'd module axioms: the bimonad, psi left monadic, phi right
    comonadic and the YD condition; with ``strong`` also the psi-lambda-phi
    exchange. Right-sided modules are checked through their mirror image and
    report witnesses in their own leg order.
    """
    _require_shapes(y)
    mirrored = y.side is Side.RIGHT
    if mirrored:
        y = mirror(y)
    bm = y.bimonad
    f, x = bm.carrier, y.x
    c, nx = len(f), len(x)
    psi, phi, lam = y.psi_fx.cell, y.phi_xf.cell, bm.lam.cell
    suite = _Suite(y.field, mirrored)
    _bimonad_laws(suite, bm)
    _dist_kind_laws(suite, psi, f, x, DistKind.LEFT_MONADIC, bm.monad, "psi")
    _dist_kind_laws(suite, phi, x, f, DistKind.RIGHT_COMONADIC, bm.comonad, "phi")
    eta, eps = bm.monad.eta, bm.comonad.eps
    suite.layers("YD condition", f + x,
                 [(psi, 0), (eta, nx + c), (lam, nx), (phi, 0), (eps, nx + c)],
                 [(y.coaction, c), (lam, 0), (y.action, c)])
    if strong:
        suite.layers("psi-lambda-phi", f + x + f, [(psi, 0), (lam, nx), (phi, 0)],
                     [(phi, c), (lam, 0), (psi, c)])
    return suite.run(workers)


def check_relative(r: RelativeModuleDesc, workers: int = 1) -> AxiomSuiteReport:
    """Module and comodule laws of a relative (F,B)-module and their compatibility through psi_{B,F}."""
    _require_shapes(r)
    mirrored = r.side is Side.RIGHT
    if mirrored:
        r = mirror(r)
    b, f, m = r.b.carrier, r.f.carrier, r.m
    suite = _Suite(r.field, mirrored)
    _module_laws(suite, ModuleDesc(b, m, r.action), r.b)
    _comodule_laws(suite, ComoduleDesc(f, m, r.coaction), r.f)
    suite.layers("relative compat", b + m, [(r.action, 0), (r.coaction, 0)],
                 [(r.coaction, len(b)), (r.psi_bf.cell, 0), (r.action, len(f))])
    return suite.run(workers)
