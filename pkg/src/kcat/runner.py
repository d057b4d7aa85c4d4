"""
Suite selection and the check/derive/act pipelines behind the command line.

Suites are looked up by id; ``auto`` picks every suite applicable to a
descriptor's type. Results are plain lists of ``SuiteRun`` so that text and
structured output render the same data.
"""

import json
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from kcat.axioms import (check_bimonad, check_comonad, check_coquasi_bimonad, check_em_cocycle_family,
                         check_fff_rules, check_hn_datum, check_k_cocycle, check_module, check_monad,
                         check_quasi_bimonad, check_relative, check_sweedler_datum, check_tambara,
                         check_yd)
from kcat.constructions import (LAYER_TABLES, act_martin, act_sch, act_yd, alpha_coquasi,
                                alpha_coquasi_family, alpha_coquasi_inverse, alpha_quasi,
                                alpha_quasi_family, alpha_quasi_inverse, cocycle_cells_philambda,
                                cocycle_cells_sigma, em_object_from_action, em_object_from_coaction,
                                em_unit_object, monad_on_BB, regular_comodule_object,
                                regular_qb_object, tensor_yd, unit_comodule_object, unit_qb_object,
                                wreath_product_monad)
from kcat.errors import KCatError, UnknownRole
from kcat.lincat import UNIT_NAME, Entry, swap, type_str
from kcat.reports import AxiomSuiteReport, suite_passed
from kcat.structures import (BimonadDesc, ComonadDesc, CoquasiBimonadDesc, DistLaw,
                             HausserNillDatum, ModuleDesc, MonadDesc, QuasiBimonadDesc,
                             RelativeModuleDesc, Side, SweedlerDatum, TambaraModuleDesc,
                             YDModuleDesc, cells_of, mirror, replace_cell)
from kcat.zoo import (perturbations, self_relative, self_sweedler_datum, trivial_coquasi,
                      trivial_right_action, trivial_sigma)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteRun:
    """One suite evaluated on one named structure."""

    structure: str
    suite: str
    reports: Tuple

    @property
    def passed(self) -> bool:
        return suite_passed(list(self.reports))


# ---------------------------------------------------------------------------
# suites


def _objects_quasi(q: QuasiBimonadDesc, names: Optional[Sequence[str]]):
    names = list(names) if names else [q.carrier[0].name]
    out = []
    for n in names:
        if n == UNIT_NAME:
            out.append(unit_qb_object(q))
        elif n == q.carrier[0].name:
            out.append(regular_qb_object(q))
        else:
            raise UnknownRole(f"unknown object {n!r}; use {UNIT_NAME} or {q.carrier[0].name}")
    return out


def _objects_coquasi(q: CoquasiBimonadDesc, names: Optional[Sequence[str]]):
    names = list(names) if names else [q.carrier[0].name]
    out = []
    for n in names:
        if n == UNIT_NAME:
            out.append(unit_comodule_object(q))
        elif n == q.carrier[0].name:
            out.append(regular_comodule_object(q))
        else:
            raise UnknownRole(f"unknown object {n!r}; use {UNIT_NAME} or {q.carrier[0].name}")
    return out


def _pentagon(desc, objects, workers) -> AxiomSuiteReport:
    if isinstance(desc, QuasiBimonadDesc):
        objs = _objects_quasi(desc, objects)
        family = alpha_quasi_family(desc, objs)
    else:
        objs = _objects_coquasi(desc, objects)
        family = alpha_coquasi_family(desc, objs)
    return check_k_cocycle(family, 3, [o.legs for o in objs], normalized=True, workers=workers)


def _fff(q: QuasiBimonadDesc, objects, workers) -> AxiomSuiteReport:
    objs = _objects_quasi(q, objects)
    x = objs[0]
    y = objs[1] if len(objs) > 1 else x
    z = objs[2] if len(objs) > 2 else y
    return check_fff_rules(q, x, y, z, workers)


def _wreath(s: SweedlerDatum, objects, workers) -> AxiomSuiteReport:
    return check_monad(wreath_product_monad(s), workers)


# suite id -> (accepted types, runner(desc, objects, workers))
SUITES: Dict[str, Tuple[tuple, Callable]] = {
    'monad': ((MonadDesc,), lambda d, o, w: check_monad(d, w)),
    'comonad': ((ComonadDesc,), lambda d, o, w: check_comonad(d, w)),
    'bimonad': ((BimonadDesc,), lambda d, o, w: check_bimonad(d, w)),
    'quasi-bimonad': ((QuasiBimonadDesc,), lambda d, o, w: check_quasi_bimonad(d, w)),
    'coquasi-bimonad': ((CoquasiBimonadDesc,), lambda d, o, w: check_coquasi_bimonad(d, w)),
    'pentagon': ((QuasiBimonadDesc, CoquasiBimonadDesc), _pentagon),
    'fff': ((QuasiBimonadDesc,), _fff),
    'tambara': ((TambaraModuleDesc,), lambda d, o, w: check_tambara(d, w)),
    'sweedler': ((SweedlerDatum,), lambda d, o, w: check_sweedler_datum(d, workers=w)),
    'wreath': ((SweedlerDatum,), _wreath),
    'hausser-nill': ((HausserNillDatum,), lambda d, o, w: check_hn_datum(d, workers=w)),
    'yd': ((YDModuleDesc,), lambda d, o, w: check_yd(d, True, w)),
    'yd-plain': ((YDModuleDesc,), lambda d, o, w: check_yd(d, False, w)),
    'relative': ((RelativeModuleDesc,), lambda d, o, w: check_relative(d, w)),
}

# suites chosen by --suite auto, per descriptor type
AUTO_SUITES = {
    MonadDesc: ('monad',),
    ComonadDesc: ('comonad',),
    BimonadDesc: ('bimonad',),
    QuasiBimonadDesc: ('quasi-bimonad',),
    CoquasiBimonadDesc: ('coquasi-bimonad',),
    TambaraModuleDesc: ('tambara',),
    SweedlerDatum: ('sweedler',),
    HausserNillDatum: ('hausser-nill',),
    YDModuleDesc: ('yd',),
    RelativeModuleDesc: ('relative',),
}


def applicable_suites(desc) -> Tuple[str, ...]:
    return AUTO_SUITES.get(type(desc), ())


def run_suite(descs: Mapping[str, object], selector: Optional[str] = None,
              objects: Optional[Sequence[str]] = None, workers: int = 1) -> List[SuiteRun]:
    """
    Run the selected suite (or every applicable one) on each structure.

    Raises:
        UnknownRole: for an unknown suite id, or one that fits none of the structures
    """
    runs = []
    auto = selector in (None, "", "auto")
    if not auto and selector not in SUITES:
        raise UnknownRole(f"unknown suite {selector!r}; known: {', '.join(sorted(SUITES))}")
    for name in descs:
        desc = descs[name]
        ids = applicable_suites(desc) if auto else (
            (selector,) if isinstance(desc, SUITES[selector][0]) else ())
        for suite_id in ids:
            logger.info(f"running {suite_id} on {name}")
            reports = SUITES[suite_id][1](desc, objects, workers)
            runs.append(SuiteRun(name, suite_id, tuple(reports)))
    if not runs and not auto:
        raise UnknownRole(f"suite {selector!r} applies to none of {', '.join(descs) or 'nothing'}")
    return runs


def all_passed(runs: Sequence[SuiteRun]) -> bool:
    return all(r.passed for r in runs)


# ---------------------------------------------------------------------------
# derivations


def _derive_crossed_product(name: str, s: SweedlerDatum):
    return {f"{name}.crossed": wreath_product_monad(s)}, {}


def _derive_monad_on_bb(name: str, d):
    monad = d.monad if isinstance(d, (BimonadDesc, QuasiBimonadDesc, CoquasiBimonadDesc)) else d
    b = monad.carrier[0]
    tau = DistLaw.on(b, b, swap(b, b, monad.field), name="tau_BB")
    return {f"{name}.BB": monad_on_BB(monad, tau)}, {}


def _derive_alpha(name: str, q):
    if isinstance(q, QuasiBimonadDesc):
        x = regular_qb_object(q)
        cells = {"alpha": alpha_quasi(q, x, x, x), "alpha_inv": alpha_quasi_inverse(q, x, x, x)}
    else:
        x = regular_comodule_object(q)
        cells = {"alpha": alpha_coquasi(q, x, x, x), "alpha_inv": alpha_coquasi_inverse(q, x, x, x)}
    return {name: q}, cells


def _derive_tensor_yd(name: str, y: YDModuleDesc):
    return {f"{name}.tensor": tensor_yd(y, y)}, {}


def _derive_mirror(name: str, d):
    return {f"{name}.mirror": mirror(d)}, {}


def _derive_sweedler(name: str, d):
    q = d if isinstance(d, CoquasiBimonadDesc) else trivial_coquasi(d.monad, d.comonad)
    return {f"{name}.sweedler": self_sweedler_datum(q)}, {}


def _derive_hn(name: str, q: QuasiBimonadDesc):
    return {f"{name}.hn": self_relative(q)}, {}


@dataclass(frozen=True)
class Derivation:
    """A construction the command line can run: input types, precondition suite, builder."""

    accepts: tuple
    pre_suite: Optional[str]
    build: Callable
    layers: Tuple[str, ...]


DERIVATIONS: Dict[str, Derivation] = {
    'crossed-product': Derivation((SweedlerDatum,), 'sweedler', _derive_crossed_product,
                                  ('wreath_product_monad.mu',)),
    'monad-on-bb': Derivation((MonadDesc, BimonadDesc), None, _derive_monad_on_bb,
                              ('monad_on_BB.mu', 'monad_on_BB.eta')),
    'alpha': Derivation((QuasiBimonadDesc, CoquasiBimonadDesc), None, _derive_alpha,
                        ('alpha_quasi', 'alpha_coquasi')),
    'tensor-yd': Derivation((YDModuleDesc,), 'yd', _derive_tensor_yd, ()),
    'mirror': Derivation((MonadDesc, ComonadDesc, BimonadDesc, YDModuleDesc, RelativeModuleDesc,
                          ModuleDesc, TambaraModuleDesc), None, _derive_mirror, ()),
    'sweedler-datum': Derivation((CoquasiBimonadDesc, BimonadDesc), None, _derive_sweedler,
                                 ('sweedler.mu_M', 'sweedler.beta', 'psi_from_coaction')),
    'hn-datum': Derivation((QuasiBimonadDesc,), 'quasi-bimonad', _derive_hn,
                           ('hn.Delta_M', 'hn.beta', 'psi_from_action')),
}


def provenance(construction: str) -> List[str]:
    """Comment lines naming the construction and its layer tables."""
    lines = [f"derived by {construction}"]
    for key in DERIVATIONS[construction].layers:
        table = " ; ".join(f"{cell}@{offset}" for cell, offset in LAYER_TABLES[key])
        lines.append(f"{key}: {table}")
    return lines


def derive(construction: str, descs: Mapping[str, object], verify_pre: bool = True,
           workers: int = 1):
    """
    Run a construction on every fitting structure.

    Returns:
        (structures, cells, pre_runs); structures is empty when a
        precondition suite failed

    Raises:
        UnknownRole: unknown construction or no fitting input
    """
    if construction not in DERIVATIONS:
        raise UnknownRole(f"unknown construction {construction!r}; known: {', '.join(sorted(DERIVATIONS))}")
    spec = DERIVATIONS[construction]
    inputs = {n: d for n, d in descs.items() if isinstance(d, spec.accepts)}
    if not inputs:
        raise UnknownRole(f"{construction} needs one of {', '.join(t.__name__ for t in spec.accepts)}")
    pre_runs: List[SuiteRun] = []
    if verify_pre:
        for n, d in inputs.items():
            suite_id = spec.pre_suite or (applicable_suites(d) or (None,))[0]
            if suite_id is not None:
                pre_runs.append(SuiteRun(n, suite_id, tuple(SUITES[suite_id][1](d, None, workers))))
        if not all_passed(pre_runs):
            return {}, {}, pre_runs
    structures, cells = {}, {}
    for n, d in inputs.items():
        s, c = spec.build(n, d)
        structures.update(s)
        cells.update({f"{n}.{k}": v for k, v in c.items()})
    return structures, cells, pre_runs


# ---------------------------------------------------------------------------
# category actions


def _as_coquasi(d) -> CoquasiBimonadDesc:
    return d if isinstance(d, CoquasiBimonadDesc) else trivial_coquasi(d.monad, d.comonad)


def _regular_module(b: MonadDesc) -> ModuleDesc:
    return ModuleDesc(b.carrier, b.carrier, b.mu, Side.LEFT, "B")


def _act_yd(name: str, y: YDModuleDesc, workers: int, descs) -> List[SuiteRun]:
    left = mirror(y) if y.side is Side.RIGHT else y
    m = self_relative(left.bimonad)
    result = act_yd(left, left.psi_fx, m)
    if y.side is Side.RIGHT:
        result = mirror(result)
    return [SuiteRun(f"{name} acting on {m.name}", 'relative',
                     tuple(check_relative(result, workers)))]


def _partner(f_legs, descs: Mapping[str, object], kinds: tuple, what: str):
    """The structure on F that a datum over F needs, found among the other inputs."""
    for d in descs.values():
        if isinstance(d, kinds) and d.carrier == f_legs:
            return d
    raise UnknownRole(f"{what} over {type_str(f_legs)} needs its "
                      f"{' or '.join(k.__name__ for k in kinds)} among the inputs")


def _tau_bf(q, b: MonadDesc) -> DistLaw:
    f = q.carrier
    cell = q.tau_ff.cell if b.carrier == f else swap(b.carrier[0], f[0], q.field)
    return DistLaw.on(b.carrier, f, cell, name="tau_BF")


def _sch_inputs(d, descs):
    """(F as a coquasi-bimonad, B, sigma, right action of F on B) for a datum or a bare F."""
    if isinstance(d, SweedlerDatum):
        partner = _partner(d.f_legs, descs, (CoquasiBimonadDesc, BimonadDesc), "a Sweedler datum")
        q = _as_coquasi(partner)
        return q, d.b, d.sigma, d.weak_action
    q = _as_coquasi(d)
    return q, q.monad, trivial_sigma(q, q.monad), trivial_right_action(q, q.monad)


def _act_sch(name: str, d, workers: int, descs) -> List[SuiteRun]:
    q, b, sigma, action = _sch_inputs(d, descs)
    f = q.carrier
    x = em_object_from_coaction(f[0].name, _tau_bf(q, b), q.tau_ff.cell, q.comonad.delta, action)
    objects = [em_unit_object(b.carrier, q.field), x]
    family = cocycle_cells_sigma(sigma, q, b, objects)
    runs = [SuiteRun(name, 'em-cocycle', tuple(check_em_cocycle_family(
        objects, b, family.rho, family.rho_inv, alpha=family.alpha, workers=workers)))]
    bundle = act_sch(x, _regular_module(b), sigma, b.eta, [x], family.alpha)
    runs.append(SuiteRun(f"{x.name} acting on B", 'module',
                         tuple(check_module(bundle.module, b, workers))))
    return runs


def _martin_inputs(d, descs):
    """(F, B, Phi_lambda) for a Hausser-Nill datum or a bare quasi-bimonad."""
    if isinstance(d, HausserNillDatum):
        q = _partner(d.f_legs, descs, (QuasiBimonadDesc,), "a Hausser-Nill datum")
        return q, d.b, d.phi_lambda
    return d, d.monad, d.phi


def _act_martin(name: str, d, workers: int, descs) -> List[SuiteRun]:
    q, b, phi_lambda = _martin_inputs(d, descs)
    f = q.carrier
    x = em_object_from_action(f[0].name, _tau_bf(q, b), q.tau_ff.cell, q.monad.mu, q.comonad.delta)
    objects = [em_unit_object(b.carrier, q.field), x]
    family = cocycle_cells_philambda(phi_lambda, q, b, objects)
    runs = [SuiteRun(name, 'em-cocycle', tuple(check_em_cocycle_family(
        objects, b, family.rho, family.rho_inv, alpha=family.alpha, workers=workers)))]
    bundle = act_martin(x, _regular_module(b), phi_lambda, b.eta, [x], family.alpha)
    runs.append(SuiteRun(f"{x.name} acting on B", 'module',
                         tuple(check_module(bundle.module, b, workers))))
    return runs


def _pre_yd(name: str, y: YDModuleDesc, workers: int, descs) -> List[SuiteRun]:
    return [SuiteRun(name, 'yd', tuple(check_yd(y, True, workers)))]


def _pre_sch(name: str, d, workers: int, descs) -> List[SuiteRun]:
    s = d if isinstance(d, SweedlerDatum) else self_sweedler_datum(_as_coquasi(d))
    return [SuiteRun(name, 'sweedler', tuple(check_sweedler_datum(s, workers=workers)))]


def _pre_martin(name: str, d, workers: int, descs) -> List[SuiteRun]:
    h = d if isinstance(d, HausserNillDatum) else self_relative(d)
    return [SuiteRun(name, 'hausser-nill', tuple(check_hn_datum(h, workers=workers)))]


# act kind -> (accepted types, precondition, pipeline)
ACTIONS = {
    'yd': ((YDModuleDesc,), _pre_yd, _act_yd),
    'sch': ((CoquasiBimonadDesc, BimonadDesc, SweedlerDatum), _pre_sch, _act_sch),
    'martin': ((QuasiBimonadDesc, HausserNillDatum), _pre_martin, _act_martin),
}


def act(kind: str, descs: Mapping[str, object], verify_pre: bool = True,
        workers: int = 1) -> List[SuiteRun]:
    """
    Build the category action of each fitting structure and check it.

    A Sweedler or Hausser-Nill datum acts with its own sigma or Phi_lambda
    and needs the structure on F among the inputs; a bare F acts through
    the datum of F over itself. Precondition suites run first unless
    ``verify_pre`` is off; their runs are returned too, and a failing
    precondition skips that structure.
    """
    if kind not in ACTIONS:
        raise UnknownRole(f"unknown action {kind!r}; known: {', '.join(sorted(ACTIONS))}")
    accepts, precondition, pipeline = ACTIONS[kind]
    inputs = {n: d for n, d in descs.items() if isinstance(d, accepts)}
    if not inputs:
        raise UnknownRole(f"action {kind} needs one of {', '.join(t.__name__ for t in accepts)}")
    runs: List[SuiteRun] = []
    for n, d in inputs.items():
        if verify_pre:
            pre = precondition(n, d, workers, descs)
            runs.extend(pre)
            if not all_passed(pre):
                logger.warning(f"precondition failed for {n}; skipping the {kind} action")
                continue
        runs.extend(pipeline(n, d, workers, descs))
    return runs


# ---------------------------------------------------------------------------
# fault injection


def fault_sweep(desc, suite_ids: Sequence[str], objects: Optional[Sequence[str]] = None,
                skip: Sequence[str] = (), delta=1, workers: int = 1) -> List[Tuple[str, Entry]]:
    """
    Perturb every entry of every bundled 2-cell by ``delta``, one at a time,
    and rerun the given suites.

    A perturbation is detected when some suite fails or refuses the data.
    Cells whose path starts with one of ``skip`` are left alone.

    Returns:
        the undetected perturbations as (cell path, (row, col))
    """
    for suite_id in suite_ids:
        if suite_id not in SUITES:
            raise UnknownRole(f"unknown suite {suite_id!r}; known: {', '.join(sorted(SUITES))}")
    undetected = []
    for path, cell in cells_of(desc):
        if any(path == s or path.startswith(s + ".") for s in skip):
            continue
        count = 0
        for entry, changed in perturbations(cell, delta):
            variant = replace_cell(desc, path, changed)
            try:
                detected = not all(suite_passed(SUITES[s][1](variant, objects, workers))
                                   for s in suite_ids)
            except KCatError as e:
                logger.debug(f"{path} at {entry}: {e}")
                detected = True
            if not detected:
                undetected.append((path, entry))
            count += 1
        logger.info(f"fault sweep: {count} perturbations of {path}")
    return undetected


# ---------------------------------------------------------------------------
# rendering


def runs_to_dict(runs: Sequence[SuiteRun], timings: bool = False) -> Dict:
    return {
        'passed': all_passed(runs),
        'runs': [{
            'structure': r.structure,
            'suite': r.suite,
            'passed': r.passed,
            'axioms': [c.to_dict(timings) for c in r.reports],
        } for r in runs],
    }


def render_json(runs: Sequence[SuiteRun], timings: bool = False) -> str:
    return json.dumps(runs_to_dict(runs, timings), indent=2)


def render_text(data: Dict) -> str:
    """Human-readable report from the structured form."""
    lines = []
    for run in data['runs']:
        mark = "PASS" if run['passed'] else "FAIL"
        lines.append(f"[{mark}] {run['suite']} on {run['structure']}")
        for ax in run['axioms']:
            line = f"  {'ok  ' if ax['verdict'] == 'pass' else 'FAIL'} {ax['axiom']}"
            if ax.get('domain'):
                line += f" over {ax['domain']}"
            if 'elapsed' in ax:
                line += f" ({ax['elapsed']:.3f}s)"
            w = ax.get('witness')
            if w:
                line += f"\n       {w['reason']}"
                if w['row'] is not None:
                    line += f" at {tuple(w['row'])} <- {tuple(w['col'])}"
                if w['lhs'] is not None or w['rhs'] is not None:
                    line += f": lhs={w['lhs']} rhs={w['rhs']}"
            lines.append(line)
    lines.append("all passed" if data['passed'] else "some axioms FAILED")
    return "\n".join(lines)
