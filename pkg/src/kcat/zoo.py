"""
Built-in instances: group algebras, (co)quasi-bialgebras on kZ/2,
Sweedler's four dimensional Hopf algebra and the canonical YD and relative
modules built from them.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ

from kcat.constructions import hn_datum_from_quasi, sweedler_datum_from_coquasi, yd_from_tau
from kcat.errors import ScalarModeMismatch, UnknownRole
from kcat.lincat import (Space, TwoCell, basis, field_characteristic, run_layers, swap, to_scalar)
from kcat.structures import (BimonadDesc, ComonadDesc, CoquasiBimonadDesc, DistLaw, MonadDesc,
                             QuasiBimonadDesc, RelativeModuleDesc, Side, SweedlerDatum,
                             YDModuleDesc)

logger = logging.getLogger(__name__)


class GroupTable:
    """
    A finite group as a multiplication table of element indices.

    The table is checked for associativity, a two-sided identity and
    inverses when the object is built.
    """

    def __init__(self, name: str, table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None):
        self._name = name
        self._table = np.array(table, dtype=int)
        n = self._table.shape[0]
        if self._table.shape != (n, n) or n == 0:
            raise ValueError(f"group {name}: table must be square and non-empty")
        if self._table.min() < 0 or self._table.max() >= n:
            raise ValueError(f"group {name}: table entries out of range")
        self._labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self._identity = self._find_identity()
        self._inverse = self._find_inverses()
        self._check_associative()

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            if all(self._table[e, g] == g and self._table[g, e] == g for g in range(n)):
                return e
        raise ValueError(f"group {self._name}: no identity element")

    def _find_inverses(self) -> Tuple[int, ...]:
        inverses = []
        for g in range(self.order):
            hits = [h for h in range(self.order)
                    if self._table[g, h] == self._identity and self._table[h, g] == self._identity]
            if not hits:
                raise ValueError(f"group {self._name}: element {self._labels[g]} has no inverse")
            inverses.append(hits[0])
        return tuple(inverses)

    def _check_associative(self) -> None:
        t = self._table
        # (ab)c and a(bc) over all triples at once
        left = t[t[:, :, None], np.arange(self.order)[None, None, :]]
        right = t[np.arange(self.order)[:, None, None], t[None, :, :]]
        if not np.array_equal(left, right):
            a, b, c = np.argwhere(left != right)[0]
            raise ValueError(f"group {self._name}: not associative at "
                             f"({self._labels[a]}, {self._labels[b]}, {self._labels[c]})")

    @property
    def name(self) -> str:
        """Get the group name."""
        return self._name

    @property
    def order(self) -> int:
        """Get the number of elements."""
        return self._table.shape[0]

    @property
    def identity(self) -> int:
        """Get the index of the identity element."""
        return self._identity

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    def mul(self, g: int, h: int) -> int:
        return int(self._table[g, h])

    def inverse(self, g: int) -> int:
        return self._inverse[g]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._table, self._table.T))

    def __repr__(self) -> str:
        return f"GroupTable({self._name}, order={self.order})"


def cyclic_group(n: int) -> GroupTable:
    return GroupTable(f"Z{n}", [[(i + j) % n for j in range(n)] for i in range(n)])


def klein_group() -> GroupTable:
    return GroupTable("Z2xZ2", [[i ^ j for j in range(4)] for i in range(4)],
                      ["e", "a", "b", "ab"])


def _permutation_group(name: str, generators: Sequence[Tuple[int, ...]]) -> GroupTable:
    """Closure of the generators under composition, identity first."""
    n = len(generators[0])
    ident = tuple(range(n))
    elements = [ident]
    frontier = [ident]
    while frontier:
        fresh = []
        for p in frontier:
            for s in generators:
                q = tuple(p[s[i]] for i in range(n))
                if q not in elements and q not in fresh:
                    fresh.append(q)
        elements.extend(fresh)
        frontier = fresh
    index = {p: i for i, p in enumerate(elements)}
    table = [[index[tuple(a[b[i]] for i in range(n))] for b in elements] for a in elements]
    return GroupTable(name, table, ["".join(map(str, p)) for p in elements])


def symmetric_group_3() -> GroupTable:
    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[i]] for i in range(3))] for b in perms] for a in perms]
    return GroupTable("S3", table, ["".join(map(str, p)) for p in perms])


def dihedral_group_4() -> GroupTable:
    return _permutation_group("D4", [(1, 2, 3, 0), (0, 3, 2, 1)])


def quaternion_group() -> GroupTable:
    # elements (sign, unit) with units 1, i, j, k
    elements = [(s, u) for s in (1, -1) for u in range(4)]
    index = {e: i for i, e in enumerate(elements)}

    def unit_mul(u: int, v: int) -> Tuple[int, int]:
        if u == 0:
            return 1, v
        if v == 0:
            return 1, u
        if u == v:
            return -1, 0
        return (1 if (u, v) in ((1, 2), (2, 3), (3, 1)) else -1), 6 - u - v

    table = []
    for s1, u1 in elements:
        row = []
        for s2, u2 in elements:
            sign, w = unit_mul(u1, u2)
            row.append(index[(s1 * s2 * sign, w)])
        table.append(row)
    labels = [("" if s == 1 else "-") + "1ijk"[u] for s, u in elements]
    return GroupTable("Q8", table, labels)


GROUPS: Dict[str, Callable[[], GroupTable]] = {
    'Z2': lambda: cyclic_group(2),
    'Z3': lambda: cyclic_group(3),
    'Z4': lambda: cyclic_group(4),
    'Z2xZ2': klein_group,
    'S3': symmetric_group_3,
    'D4': dihedral_group_4,
    'Q8': quaternion_group,
}


# ---------------------------------------------------------------------------
# algebras


def group_algebra(g: GroupTable, field=QQ, space_name: str = "F") -> Tuple[MonadDesc, ComonadDesc]:
    """kG with the group multiplication and every element group-like."""
    f = Space(space_name, g.order)
    n = g.order
    mu = TwoCell((f, f), (f,), {((g.mul(a, b),), (a, b)): 1 for a in range(n) for b in range(n)},
                 field, "mu")
    eta = TwoCell((), (f,), {((g.identity,), ()): 1}, field, "eta")
    delta = TwoCell((f,), (f, f), {((a, a), (a,)): 1 for a in range(n)}, field, "Delta")
    eps = TwoCell((f,), (), {((), (a,)): 1 for a in range(n)}, field, "eps")
    return MonadDesc((f,), mu, eta, f"k{g.name}"), ComonadDesc((f,), delta, eps, f"k{g.name}")


def flip_bimonad(monad: MonadDesc, comonad: ComonadDesc, name: Optional[str] = None) -> BimonadDesc:
    """A bialgebra in Vect as a bimonad: lambda(a b) = a1 b a2 with the flip."""
    f = monad.carrier
    c = len(f)
    tau = swap(f[0], f[0], monad.field)
    lam = run_layers(f + f, [(comonad.delta, 0), (tau, c), (monad.mu, 0)], monad.field)
    return BimonadDesc(monad, comonad, DistLaw.on(f, f, lam.named("lambda"), name="lambda"),
                       name or monad.name)


def _require_two_invertible(field) -> None:
    if field_characteristic(field) == 2:
        raise ScalarModeMismatch("the idempotent basis of kZ/2 needs 2 invertible")


def _z2_phi(phase: int, field) -> TwoCell:
    """sum omega(a,b,c) p_a p_b p_c rewritten in the group basis, p_a = (1 + (-1)^a g)/2."""
    f = Space("F", 2)
    entries = {}
    for i, j, k in product(range(2), repeat=3):
        total = Fraction(0)
        for a, b, c in product(range(2), repeat=3):
            omega = phase ** (a * b * c)
            total += Fraction(omega * (-1) ** (a * i + b * j + c * k), 8)
        entries[((i, j, k), ())] = to_scalar(field, total)
    return TwoCell((), (f, f, f), entries, field, "Phi")


def z2_quasi(phase: int = -1, field=QQ) -> QuasiBimonadDesc:
    """
    kZ/2 with the associator of the group 3-cocycle omega(a,b,c) = phase^(abc).

    Raises:
        ScalarModeMismatch: over a field of characteristic 2
    """
    if phase not in (1, -1):
        raise ValueError("phase must be +1 or -1")
    _require_two_invertible(field)
    monad, comonad = group_algebra(cyclic_group(2), field)
    f = monad.carrier[0]
    phi = _z2_phi(phase, field)
    # omega takes values +-1, so Phi is its own inverse
    name = f"z2_quasi({phase:+d})"
    return QuasiBimonadDesc(monad, comonad, DistLaw.on(f, f, swap(f, f, field), name="tau_FF"),
                            phi, phi.named("Phi_inv"), name)


def z2_coquasi(phase: int = -1, field=QQ) -> CoquasiBimonadDesc:
    """kZ/2 with the reassociator omega(g^a, g^b, g^c) = phase^(abc)."""
    if phase not in (1, -1):
        raise ValueError("phase must be +1 or -1")
    monad, comonad = group_algebra(cyclic_group(2), field)
    f = monad.carrier[0]
    omega = TwoCell((f, f, f), (), {((), abc): phase ** (abc[0] * abc[1] * abc[2])
                                    for abc in product(range(2), repeat=3)}, field, "omega")
    name = f"z2_coquasi({phase:+d})"
    return CoquasiBimonadDesc(monad, comonad, DistLaw.on(f, f, swap(f, f, field), name="tau_FF"),
                              omega, omega.named("omega_inv"), name)


def trivial_coquasi(monad: MonadDesc, comonad: ComonadDesc) -> CoquasiBimonadDesc:
    """A bialgebra seen as a coquasi-bialgebra with omega = eps eps eps."""
    f = monad.carrier
    field = monad.field
    eps3 = run_layers(f * 3, [(comonad.eps, 0)] * 3, field).named("omega")
    return CoquasiBimonadDesc(monad, comonad, DistLaw.on(f, f, swap(f[0], f[0], field), name="tau_FF"),
                              eps3, eps3.named("omega_inv"), monad.name)


def trivial_quasi(monad: MonadDesc, comonad: ComonadDesc) -> QuasiBimonadDesc:
    """A bialgebra seen as a quasi-bialgebra with Phi = 1 1 1."""
    f = monad.carrier
    field = monad.field
    one3 = run_layers((), [(monad.eta, 0)] * 3, field).named("Phi")
    return QuasiBimonadDesc(monad, comonad, DistLaw.on(f, f, swap(f[0], f[0], field), name="tau_FF"),
                            one3, one3.named("Phi_inv"), monad.name)


# basis 1, g, x, gx as g^a x^b with index a + 2b
_H4_LABELS = ("1", "g", "x", "gx")


def _h4_index(a: int, b: int) -> int:
    return a % 2 + 2 * b


def sweedler_h4(field=QQ, space_name: str = "F") -> Tuple[MonadDesc, ComonadDesc, TwoCell]:
    """
    Sweedler's Hopf algebra: g^2 = 1, x^2 = 0, xg = -gx, Delta g = g g,
    Delta x = x 1 + g x, with its antipode S(g) = g, S(x) = -gx.
    """
    f = Space(space_name, 4)
    mu, delta, eps = {}, {}, {}
    for a, b, c, d in product(range(2), repeat=4):
        if b + d < 2:
            # g^a x^b g^c x^d = (-1)^(bc) g^(a+c) x^(b+d)
            mu[((_h4_index(a + c, b + d),), (_h4_index(a, b), _h4_index(c, d)))] = (-1) ** (b * c)
    for a in range(2):
        delta[((_h4_index(a, 0), _h4_index(a, 0)), (_h4_index(a, 0),))] = 1
        delta[((_h4_index(a, 1), _h4_index(a, 0)), (_h4_index(a, 1),))] = 1
        delta[((_h4_index(a + 1, 0), _h4_index(a, 1)), (_h4_index(a, 1),))] = 1
        eps[((), (_h4_index(a, 0),))] = 1
    antipode = {((0,), (0,)): 1, ((1,), (1,)): 1, ((3,), (2,)): -1, ((2,), (3,)): 1}
    monad = MonadDesc((f,), TwoCell((f, f), (f,), mu, field, "mu"),
                      TwoCell((), (f,), {((0,), ()): 1}, field, "eta"), "H4")
    comonad = ComonadDesc((f,), TwoCell((f,), (f, f), delta, field, "Delta"),
                          TwoCell((f,), (), eps, field, "eps"), "H4")
    return monad, comonad, TwoCell((f,), (f,), antipode, field, "S")


def h4_bimonad(field=QQ) -> BimonadDesc:
    monad, comonad, _ = sweedler_h4(field)
    return flip_bimonad(monad, comonad, "H4")


def conjugation_yd(g: GroupTable, field=QQ, trivial_action: bool = False,
                   side: Side = Side.LEFT) -> YDModuleDesc:
    """
    kG acting on X = kG by conjugation and coacting by k -> k k, all laws flips.

    ``trivial_action`` replaces conjugation by h.k = eps(h) k.
    """
    monad, comonad = group_algebra(g, field)
    f = monad.carrier[0]
    x = Space("X", g.order)
    n = g.order
    name = f"conj({g.name})"
    if side is Side.LEFT:
        if trivial_action:
            act = {((k,), (h, k)): 1 for h in range(n) for k in range(n)}
        else:
            act = {((g.mul(g.mul(h, k), g.inverse(h)),), (h, k)): 1 for h in range(n) for k in range(n)}
        action = TwoCell((f, x), (x,), act, field, "action")
        coaction = TwoCell((x,), (f, x), {((k, k), (k,)): 1 for k in range(n)}, field, "coaction")
        return yd_from_tau(monad, comonad, swap(f, f, field), swap(f, x, field), swap(x, f, field),
                           action, coaction, Side.LEFT, name)
    # right conjugation k.h = h^-1 k h
    if trivial_action:
        ract = {((k,), (k, h)): 1 for h in range(n) for k in range(n)}
    else:
        ract = {((g.mul(g.mul(g.inverse(h), k), h),), (k, h)): 1 for h in range(n) for k in range(n)}
    action = TwoCell((x, f), (x,), ract, field, "action")
    coaction = TwoCell((x,), (x, f), {((k, k), (k,)): 1 for k in range(n)}, field, "coaction")
    return yd_from_tau(monad, comonad, swap(f, f, field), swap(x, f, field), swap(f, x, field),
                       action, coaction, Side.RIGHT, name)


def self_relative(source, field=None):
    """
    F over itself.

    A bimonad gives the relative module (F, mu, Delta) with psi_{B,F} = lambda;
    a quasi-bimonad gives the Hausser-Nill datum with B = F, lambda_B = Delta
    and Phi_lambda = Phi.
    """
    if isinstance(source, BimonadDesc):
        bm = source
        return RelativeModuleDesc(bm.monad, bm.comonad, bm.lam, bm.carrier, bm.monad.mu,
                                  bm.comonad.delta, Side.LEFT, f"{bm.name or 'F'} over itself")
    if isinstance(source, QuasiBimonadDesc):
        q = source
        f = q.carrier
        tau_bf = DistLaw.on(f, f, q.tau_ff.cell, name="tau_BF")
        return hn_datum_from_quasi(q, q.monad, tau_bf, q.phi, q.comonad.delta,
                                   f"{q.name or 'F'} over itself")
    raise UnknownRole(f"no self-relative structure for {type(source).__name__}")


def trivial_sigma(q, b: MonadDesc) -> TwoCell:
    """sigma(a, b) = eps(a) eps(b) 1_B."""
    f = q.carrier
    return run_layers(f + f, [(q.comonad.eps, 0), (q.comonad.eps, 0), (b.eta, 0)], q.field).named("sigma")


def trivial_right_action(q, b: MonadDesc) -> TwoCell:
    """b . f = eps(f) b."""
    return run_layers(b.carrier + q.carrier, [(q.comonad.eps, len(b.carrier))], q.field).named("act")


def adjoint_right_action(q, antipode: TwoCell) -> TwoCell:
    """b . h = S(h1) b h2 on B = F."""
    f = q.carrier
    if len(f) != 1:
        raise UnknownRole("adjoint action needs a single-leg carrier")
    layers = [(q.comonad.delta, 1), (swap(f[0], f[0], q.field), 0), (antipode, 0),
              (q.monad.mu, 0), (q.monad.mu, 0)]
    return run_layers(f + f, layers, q.field).named("act")


def self_sweedler_datum(q: CoquasiBimonadDesc, sigma: Optional[TwoCell] = None,
                        action: Optional[TwoCell] = None, name: Optional[str] = None) -> SweedlerDatum:
    """
    The Sweedler datum with B = F.

    Defaults: trivial sigma and the trivial right action, which gives the tensor algebra.
    """
    b = q.monad
    f = q.carrier
    tau_bf = DistLaw.on(f, f, q.tau_ff.cell, name="tau_BF")
    sigma = sigma if sigma is not None else trivial_sigma(q, b)
    action = action if action is not None else trivial_right_action(q, b)
    return sweedler_datum_from_coquasi(q, b, tau_bf, action, sigma, name or f"{q.name or 'F'} smash")


def z2_bicharacter_sigma(q, b: MonadDesc, field=QQ) -> TwoCell:
    """sigma(g^a, g^b) = (-1)^(ab) 1_B on kZ/2."""
    f = q.carrier[0]
    one = b.eta.sorted_entries()[0][0][0]
    entries = {(one, (a, c)): (-1) ** (a * c) for a in range(2) for c in range(2)}
    return TwoCell((f, f), b.carrier, entries, field, "sigma")


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class ZooEntry:
    """A named instance: how to build it and which suites it is expected to pass."""

    name: str
    description: str
    build: Callable[..., Dict[str, object]]
    suites: Tuple[str, ...]
    takes_phase: bool = False


def _group_entry(gname: str) -> ZooEntry:
    def build(field=QQ):
        monad, comonad = group_algebra(GROUPS[gname](), field)
        return {f"k{gname}": flip_bimonad(monad, comonad)}
    return ZooEntry(f"k{gname}", f"group bialgebra of {gname}", build, ("bimonad",))


def _z2_quasi_entry(field=QQ, phase: int = -1):
    return {"z2_quasi": z2_quasi(phase, field)}


def _z2_coquasi_entry(field=QQ, phase: int = -1):
    return {"z2_coquasi": z2_coquasi(phase, field)}


def _h4_entry(field=QQ):
    return {"H4": h4_bimonad(field)}


def _h4_smash_entry(field=QQ):
    monad, comonad, antipode = sweedler_h4(field)
    q = trivial_coquasi(monad, comonad)
    return {"H4_smash": self_sweedler_datum(q, action=adjoint_right_action(q, antipode))}


def _h4_relative_entry(field=QQ):
    return {"H4_relative": self_relative(h4_bimonad(field))}


def _s3_yd_entry(field=QQ):
    return {"S3_yd": conjugation_yd(symmetric_group_3(), field)}


def _z2_hn_entry(field=QQ, phase: int = -1):
    return {"z2_hn": self_relative(z2_quasi(phase, field))}


ZOO: Dict[str, ZooEntry] = {e.name: e for e in [
    *(_group_entry(g) for g in GROUPS),
    ZooEntry("z2_quasi", "kZ/2 quasi-bialgebra, Phi from phase^(abc)", _z2_quasi_entry,
             ("quasi-bimonad", "pentagon", "fff"), True),
    ZooEntry("z2_coquasi", "kZ/2 coquasi-bialgebra, omega = phase^(abc)", _z2_coquasi_entry,
             ("coquasi-bimonad", "pentagon"), True),
    ZooEntry("h4", "Sweedler's 4-dimensional Hopf algebra", _h4_entry, ("bimonad",)),
    ZooEntry("h4-smash", "H4 smash product, adjoint action and trivial sigma", _h4_smash_entry,
             ("sweedler",)),
    ZooEntry("h4-relative", "H4 as a relative module over itself", _h4_relative_entry,
             ("relative",)),
    ZooEntry("s3-yd", "kS3 conjugation Yetter-Drinfel'd module", _s3_yd_entry, ("yd",)),
    ZooEntry("z2-hn", "Hausser-Nill datum of kZ/2 quasi over itself", _z2_hn_entry,
             ("hausser-nill",), True),
]}

_ZOO_REF = re.compile(r"^(?P<name>[A-Za-z0-9_\-]+)(?:\((?P<arg>[+-]?\d+)\))?$")


def zoo_names() -> List[str]:
    return sorted(ZOO)


def build_instance(ref: str, field=QQ) -> Dict[str, object]:
    """
    Build a zoo instance from a reference such as ``h4`` or ``z2_quasi(-1)``.

    Raises:
        UnknownRole: for an unknown name or a parameter the instance does not take
    """
    m = _ZOO_REF.match(ref.strip())
    if m is None or m.group('name') not in ZOO:
        raise UnknownRole(f"no zoo instance {ref!r}; known: {', '.join(zoo_names())}")
    entry = ZOO[m.group('name')]
    arg = m.group('arg')
    if arg is not None and not entry.takes_phase:
        raise UnknownRole(f"zoo instance {entry.name} takes no parameter")
    logger.debug(f"building zoo instance {ref} over {field}")
    if entry.takes_phase:
        return entry.build(field=field, phase=int(arg) if arg is not None else -1)
    return entry.build(field=field)


# ---------------------------------------------------------------------------
# fault injection


def perturbations(cell: TwoCell, delta=1):
    """Every single-entry perturbation of ``cell``, one basis pair at a time."""
    for row in basis(cell.cod):
        for col in basis(cell.dom):
            yield (row, col), cell.perturbed(row, col, delta)


def corrupt_phi(q: QuasiBimonadDesc, sign_flip_at=((0, 0, 0), ())) -> QuasiBimonadDesc:
    """Flip the sign of one entry of Phi, leaving Phi^-1 as it was."""
    row, col = sign_flip_at
    v = q.phi.get(row, col)
    phi = q.phi.perturbed(row, col, -2 * v).named("Phi")
    return QuasiBimonadDesc(q.monad, q.comonad, q.tau_ff, phi, q.phi_inv, q.name)
