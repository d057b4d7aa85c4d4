#!/usr/bin/env python3
"""
Test script for the axiom checkers on known-good and fault-injected structures.
"""

import sys
import os
from dataclasses import replace
from itertools import product
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

import pytest

from kcat.axioms import (check_bialgebra, check_bimonad, check_comodule, check_comonad,
                         check_coquasi_bimonad, check_dist_law, check_fff_rules, check_hn_datum,
                         check_k_cocycle, check_left_linear, check_module, check_monad,
                         check_qb_one_cell, check_quasi_bimonad, check_relative,
                         check_sweedler_datum, check_tambara, check_yang_baxter, check_yd)
from kcat.constructions import (alpha_quasi_family, em_object_from_coaction, em_unit_object,
                                r_from_rho, regular_qb_object, rho_from_sigma, tensor_em_objects,
                                tensor_tambara)
from kcat.errors import KindUnsupported, MissingEntry, MissingInverse, ShapeMismatch
from kcat.lincat import Space, TwoCell, equal, hcomp, identity, swap
from kcat.reports import failed_ids, suite_passed
from kcat.structures import (ComoduleDesc, DistKind, DistLaw, ModuleDesc, Side, TambaraModuleDesc,
                             mirror)
from kcat.zoo import (GROUPS, conjugation_yd, corrupt_phi, cyclic_group, flip_bimonad, group_algebra,
                      h4_bimonad, self_relative, self_sweedler_datum, sweedler_h4,
                      symmetric_group_3, trivial_coquasi, trivial_right_action, trivial_sigma,
                      z2_bicharacter_sigma, z2_coquasi, z2_quasi)


def test_group_bialgebras():
    """Test that every group bialgebra passes the bimonad suite."""
    print("Testing group bialgebras...")

    for name, build in GROUPS.items():
        monad, comonad = group_algebra(build())
        assert suite_passed(check_monad(monad)), name
        assert suite_passed(check_comonad(comonad)), name
        assert suite_passed(check_bimonad(flip_bimonad(monad, comonad))), name

    print("✓ Group bialgebra tests passed!")


def test_monad_failure_witness():
    """Test that a broken multiplication is reported with a witness."""
    print("Testing monad failure witnesses...")

    monad, _ = group_algebra(cyclic_group(3))
    broken = replace(monad, mu=monad.mu.perturbed((0,), (0, 0), 1))
    reports = check_monad(broken)
    assert not suite_passed(reports)
    assert "mu unit (left)" in failed_ids(reports)
    bad = [r for r in reports if not r.passed][0]
    assert bad.witness.reason == "EntryMismatch"
    assert bad.witness.lhs != bad.witness.rhs

    print("✓ Monad failure witness tests passed!")


def test_shape_errors_raise():
    """Test that mis-shaped descriptors are rejected before checking."""
    print("Testing shape errors...")

    monad, _ = group_algebra(cyclic_group(2))
    with pytest.raises(ShapeMismatch):
        check_monad(replace(monad, mu=identity(monad.carrier)))

    print("✓ Shape error tests passed!")


def test_h4():
    """Test Sweedler's Hopf algebra as a bimonad and over itself."""
    print("Testing H4...")

    h4 = h4_bimonad()
    assert suite_passed(check_bimonad(h4))
    assert suite_passed(check_relative(self_relative(h4)))
    regular = ModuleDesc(h4.carrier, h4.carrier, h4.monad.mu, Side.LEFT)
    assert suite_passed(check_module(regular, h4.monad))

    print("✓ H4 tests passed!")


def test_quasi_bimonad():
    """Test the kZ/2 quasi-bialgebra and its sign-flipped corruption."""
    print("Testing quasi-bimonads...")

    for phase in (1, -1):
        assert suite_passed(check_quasi_bimonad(z2_quasi(phase)))

    q = z2_quasi(-1)
    broken = corrupt_phi(q)
    failed = failed_ids(check_quasi_bimonad(broken))
    assert "3-coc. cond." in failed
    assert "Phi normalized" in failed

    with pytest.raises(MissingInverse):
        check_quasi_bimonad(replace(q, phi_inv=None))

    print("✓ Quasi-bimonad tests passed!")


def test_pentagon_bridge():
    """Test that a corrupted Phi breaks the pentagon of its module category."""
    print("Testing pentagon of the associator...")

    q = z2_quasi(-1)
    x = regular_qb_object(q)
    assert suite_passed(check_k_cocycle(alpha_quasi_family(q, [x]), 3, [x.legs], normalized=True))

    broken = corrupt_phi(q)
    y = regular_qb_object(broken)
    failed = failed_ids(check_k_cocycle(alpha_quasi_family(broken, [y]), 3, [y.legs]))
    assert "3-coc" in failed

    with pytest.raises(MissingEntry):
        check_k_cocycle({}, 3, [x.legs])
    with pytest.raises(ValueError):
        check_k_cocycle(alpha_quasi_family(q, [x]), 4, [x.legs])

    print("✓ Pentagon tests passed!")


def test_two_cocycle_in_K():
    """Test the 2-cocycle condition, its inverse form and naturality on families over F."""
    print("Testing 2-cocycles in K...")

    monad, comonad, antipode = sweedler_h4()
    f = monad.carrier[0]
    pairs = [((), (f,)), ((f,), ()), ((f,), (f,)), ((f,), (f, f)), ((f, f), (f,))]
    ident = {(a, b): identity(a + b) for a, b in pairs}
    reports = check_k_cocycle(ident, 2, [(f,)], normalized=True, morphisms=[antipode])
    assert suite_passed(reports)
    assert [r.axiom_id for r in reports] == ["inv 2-coc", "natural", "normalized"]
    assert suite_passed(check_k_cocycle(ident, 2, [(f,)], inverse_form=True))
    assert check_k_cocycle(ident, 2, [(f,)], inverse_form=True)[0].axiom_id == "2-coc"

    # a constant rescaling of rho_{F,F} alone cancels; one of rho_{F,FF} does not
    scaled = dict(ident)
    scaled[((f,), (f,))] = ident[((f,), (f,))].scaled(2)
    assert suite_passed(check_k_cocycle(scaled, 2, [(f,)]))
    scaled = dict(ident)
    scaled[((f,), (f, f))] = ident[((f,), (f, f))].scaled(2)
    assert "inv 2-coc" in failed_ids(check_k_cocycle(scaled, 2, [(f,)]))
    assert "2-coc" in failed_ids(check_k_cocycle(scaled, 2, [(f,)], inverse_form=True))

    # projection onto 1 on the first leg does not commute with 1 <- g
    project = TwoCell((f,), (f,), {((0,), (0,)): 1})
    lower = TwoCell((f,), (f,), {((0,), (1,)): 1})
    twisted = dict(ident)
    twisted[((f,), (f,))] = hcomp(project, identity((f,)))
    assert "natural" not in failed_ids(check_k_cocycle(twisted, 2, [(f,)], morphisms=[antipode]))
    assert "natural" in failed_ids(check_k_cocycle(twisted, 2, [(f,)], morphisms=[lower]))

    # rho_sigma of trivial sigma on H4, pushed through the trivial module eps
    q = trivial_coquasi(monad, comonad)
    tau_bf = DistLaw.on((f,), (f,), q.tau_ff.cell, name="tau_BF")
    x = em_object_from_coaction("F", tau_bf, q.tau_ff.cell, comonad.delta,
                                trivial_right_action(q, monad))
    unit = em_unit_object(monad.carrier, q.field)
    xx = tensor_em_objects(x, x, q.carrier, q.field, mu_f=monad.mu)
    sigma = trivial_sigma(q, monad)
    family = {(a.legs, b.legs): r_from_rho(rho_from_sigma(sigma, a, b, monad.eta), comonad.eps)
              for a, b in product([unit, x, xx], repeat=2)}
    assert suite_passed(check_k_cocycle(family, 2, [x.legs], normalized=True))
    assert all(equal(cell, identity(cell.dom)).passed for cell in family.values())

    with pytest.raises(MissingEntry):
        check_k_cocycle({((f,), (f,)): identity((f, f))}, 2, [(f,)])

    print("✓ 2-cocycle tests passed!")


def test_coquasi_bimonad():
    """Test the kZ/2 coquasi-bialgebra."""
    print("Testing coquasi-bimonads...")

    for phase in (1, -1):
        assert suite_passed(check_coquasi_bimonad(z2_coquasi(phase)))
    q = z2_coquasi(-1)
    with pytest.raises(MissingInverse):
        check_coquasi_bimonad(replace(q, omega_inv=None))
    bad = replace(q, omega=q.omega.perturbed((), (1, 1, 1), 2))
    assert not suite_passed(check_coquasi_bimonad(bad))

    print("✓ Coquasi-bimonad tests passed!")


def test_sweedler_datum():
    """Test Sweedler data with trivial and bicharacter cocycles."""
    print("Testing Sweedler data...")

    h4 = h4_bimonad()
    s = self_sweedler_datum(trivial_coquasi(h4.monad, h4.comonad))
    assert suite_passed(check_sweedler_datum(s, comonad=h4.comonad))

    monad, comonad = group_algebra(cyclic_group(2))
    q = trivial_coquasi(monad, comonad)
    sigma = z2_bicharacter_sigma(q, monad)
    twisted = self_sweedler_datum(q, sigma)
    assert suite_passed(check_sweedler_datum(twisted, comonad=comonad))

    # sigma(1, g) = 2 breaks the left normalization
    bumped = sigma.perturbed((0,), (0, 1), 1)
    failed = failed_ids(check_sweedler_datum(self_sweedler_datum(q, bumped)))
    assert "normalized 2-cocycle (left)" in failed

    print("✓ Sweedler datum tests passed!")


def test_hausser_nill_datum():
    """Test the Hausser-Nill datum of the kZ/2 quasi-bialgebra over itself."""
    print("Testing Hausser-Nill data...")

    q = z2_quasi(-1)
    h = self_relative(q)
    assert suite_passed(check_hn_datum(h, f_monad=q.monad))
    assert suite_passed(check_hn_datum(self_relative(z2_quasi(1))))

    print("✓ Hausser-Nill datum tests passed!")


def test_yetter_drinfeld():
    """Test the conjugation YD module of S3 on both sides."""
    print("Testing Yetter-Drinfel'd modules...")

    y = conjugation_yd(symmetric_group_3())
    assert suite_passed(check_yd(y, strong=True))
    assert suite_passed(check_yd(mirror(y), strong=True))
    right = conjugation_yd(symmetric_group_3(), side=Side.RIGHT)
    assert right.side is Side.RIGHT
    assert suite_passed(check_yd(right, strong=True))

    print("✓ Yetter-Drinfel'd tests passed!")


def test_parallel_reports_identical():
    """Test that worker count does not change reports."""
    print("Testing parallel determinism...")

    q = z2_quasi(-1)
    serial = [r.to_dict(timings=False) for r in check_quasi_bimonad(corrupt_phi(q), workers=1)]
    threaded = [r.to_dict(timings=False) for r in check_quasi_bimonad(corrupt_phi(q), workers=4)]
    assert serial == threaded

    print("✓ Parallel determinism tests passed!")


def test_distributive_laws():
    """Test the four kinds of distributive law on the flip and two failures."""
    print("Testing distributive laws...")

    monad, comonad = group_algebra(cyclic_group(2))
    f = monad.carrier[0]
    flip = DistLaw.on(f, f, swap(f, f))
    for kind in (DistKind.LEFT_MONADIC, DistKind.RIGHT_MONADIC):
        assert suite_passed(check_dist_law(flip, monad, monad, kind))
    for kind in (DistKind.LEFT_COMONADIC, DistKind.RIGHT_COMONADIC):
        assert suite_passed(check_dist_law(flip, comonad, comonad, kind))

    zero = DistLaw.on(f, f, TwoCell((f, f), (f, f), {}))
    assert not suite_passed(check_dist_law(zero, monad, monad, DistKind.LEFT_MONADIC))

    s3, _ = group_algebra(symmetric_group_3())
    b = s3.carrier[0]
    ident = DistLaw.on(b, b, identity((b, b)))
    assert not suite_passed(check_dist_law(ident, s3, s3, DistKind.LEFT_MONADIC))

    with pytest.raises(KindUnsupported):
        check_dist_law(flip, monad, monad, DistKind.LEFT_COMONADIC)

    print("✓ Distributive law tests passed!")


def test_comodules_and_bialgebras():
    """Test regular comodules and the plain bialgebra suite."""
    print("Testing comodules and bialgebras...")

    monad, comonad = group_algebra(symmetric_group_3())
    f = comonad.carrier
    for side in (Side.LEFT, Side.RIGHT):
        regular = ComoduleDesc(f, f, comonad.delta, side)
        assert suite_passed(check_comodule(regular, comonad))
    flip = DistLaw.on(f, f, swap(f[0], f[0]))
    assert suite_passed(check_bialgebra(monad, comonad, flip))

    h_monad, h_comonad, _ = sweedler_h4()
    h = h_monad.carrier[0]
    assert suite_passed(check_bialgebra(h_monad, h_comonad, DistLaw.on(h, h, swap(h, h))))

    print("✓ Comodule and bialgebra tests passed!")


def test_tambara_modules():
    """Test Tambara modules over kZ/2 and kS3 and their tensor product."""
    print("Testing Tambara modules...")

    for group in (cyclic_group(2), symmetric_group_3()):
        monad, comonad = group_algebra(group)
        b = monad.carrier
        t = TambaraModuleDesc(monad, b, DistLaw.on(b, b, swap(b[0], b[0])),
                              ModuleDesc(b, b, monad.mu, Side.LEFT), name="B")
        assert suite_passed(check_tambara(t))
        tt = tensor_tambara(t, t, comonad.delta)
        assert tt.x == b + b
        assert suite_passed(check_tambara(tt))

    # Delta(h) = h h + e e for the element with index 1
    bad_delta = comonad.delta.perturbed((0, 0), (1,), 1)
    bad = tensor_tambara(t, t, bad_delta)
    assert not suite_passed(check_module(bad.nu, monad))

    doubled = replace(t, tau=replace(t.tau, cell=t.tau.cell.scaled(2)))
    assert not suite_passed(check_tambara(doubled))

    print("✓ Tambara module tests passed!")


def test_yang_baxter_and_linearity():
    """Test the braid relation and left linearity."""
    print("Testing Yang-Baxter and linearity checks...")

    a, b, c = Space("A", 2), Space("B", 3), Space("C", 2)
    assert check_yang_baxter(swap(a, b), swap(a, c), swap(b, c), (a, b, c)).passed
    # e1 e0 -> e0 e1 + e1 e1 is not a braiding
    r = swap(a, a).perturbed((1, 1), (1, 0), 1)
    assert not check_yang_baxter(r, r, r, (a, a, a)).passed

    monad, _ = group_algebra(cyclic_group(2))
    f = monad.carrier
    assert check_left_linear(identity(f), monad.mu, monad.mu).passed
    projection = TwoCell(f, f, {((0,), (0,)): 1})
    assert not check_left_linear(projection, monad.mu, monad.mu).passed

    print("✓ Yang-Baxter and linearity tests passed!")


def test_qb_one_cells_and_fff():
    """Test the flip as a 1-cell of QB(K) and the FFF rules."""
    print("Testing QB(K) 1-cells...")

    q = z2_quasi(-1)
    f = q.carrier[0]
    assert suite_passed(check_qb_one_cell((f,), DistLaw.on(f, f, swap(f, f)), q))
    scaled = DistLaw.on(f, f, swap(f, f).scaled(2))
    assert not suite_passed(check_qb_one_cell((f,), scaled, q))

    x = regular_qb_object(q)
    reports = check_fff_rules(q, x, x, x)
    assert suite_passed(reports)
    assert [r.axiom_id for r in reports] == ["FF module rule", "FF module rule unit", "nat FFF"]

    print("✓ QB(K) 1-cell tests passed!")


if __name__ == "__main__":
    print("Running Axiom Checker Tests...\n")

    try:
        test_group_bialgebras()
        test_monad_failure_witness()
        test_shape_errors_raise()
        test_h4()
        test_quasi_bimonad()
        test_pentagon_bridge()
        test_two_cocycle_in_K()
        test_coquasi_bimonad()
        test_sweedler_datum()
        test_hausser_nill_datum()
        test_yetter_drinfeld()
        test_parallel_reports_identical()
        test_distributive_laws()
        test_comodules_and_bialgebras()
        test_tambara_modules()
        test_yang_baxter_and_linearity()
        test_qb_one_cells_and_fff()

        print("\n🎉 All axiom checker tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
