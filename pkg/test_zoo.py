#!/usr/bin/env python3
"""
Test script for the built-in instances and fault injection.
"""

import sys
import os
from dataclasses import replace
from itertools import product
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

import pytest
from sympy import QQ

from kcat.axioms import check_bimonad, check_yd
from kcat.errors import ScalarModeMismatch, UnknownRole
from kcat.lincat import TwoCell, equal, hcomp, make_field
from kcat.reports import failed_ids, suite_passed
from kcat.runner import all_passed, fault_sweep, run_suite
from kcat.structures import cells_of, replace_cell
from kcat.zoo import (GROUPS, ZOO, GroupTable, build_instance, cyclic_group, flip_bimonad,
                      conjugation_yd, group_algebra, perturbations, symmetric_group_3, z2_coquasi,
                      z2_quasi, zoo_names)


def test_group_tables():
    """Test group orders and the table checks."""
    print("Testing group tables...")

    orders = {name: build().order for name, build in GROUPS.items()}
    assert orders == {'Z2': 2, 'Z3': 3, 'Z4': 4, 'Z2xZ2': 4, 'S3': 6, 'D4': 8, 'Q8': 8}
    assert not symmetric_group_3().is_abelian()
    assert not GROUPS['Q8']().is_abelian()
    assert cyclic_group(4).is_abelian()

    g = symmetric_group_3()
    for a in range(g.order):
        assert g.mul(a, g.inverse(a)) == g.identity

    # a loop with x.x = e on five elements cannot be associative
    loop = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    with pytest.raises(ValueError):
        GroupTable("loop", loop)
    with pytest.raises(ValueError):
        GroupTable("no inverse", [[0, 1], [1, 1]])

    print("✓ Group table tests passed!")


def test_z2_phi_entries():
    """Test the associator of kZ/2 in the group basis."""
    print("Testing kZ/2 associator entries...")

    phi = z2_quasi(-1).phi
    assert phi.get((0, 0, 0), ()) == QQ(3, 4)
    assert phi.get((1, 0, 0), ()) == QQ(1, 4)
    assert phi.get((0, 1, 1), ()) == QQ(-1, 4)
    assert phi.get((1, 1, 1), ()) == QQ(1, 4)

    trivial = z2_quasi(1).phi
    assert trivial.get((0, 0, 0), ()) == QQ.one
    assert trivial.nnz == 1

    with pytest.raises(ScalarModeMismatch):
        z2_quasi(-1, make_field("fp:2"))
    with pytest.raises(ValueError):
        z2_quasi(3)

    print("✓ kZ/2 associator tests passed!")


def test_build_instance_refs():
    """Test zoo references with and without parameters."""
    print("Testing zoo references...")

    assert "h4" in zoo_names()
    assert zoo_names() == sorted(zoo_names())
    built = build_instance("z2_quasi(+1)")
    assert built["z2_quasi"].name == "z2_quasi(+1)"
    assert build_instance("z2_quasi")["z2_quasi"].name == "z2_quasi(-1)"
    gf3 = make_field("fp:3")
    assert build_instance("kS3", gf3)["kS3"].field == gf3

    with pytest.raises(UnknownRole):
        build_instance("nope")
    with pytest.raises(UnknownRole):
        build_instance("h4(1)")

    print("✓ Zoo reference tests passed!")


def test_every_entry_passes_its_suites():
    """Test each registered instance against the suites it advertises."""
    print("Testing the zoo against its suites...")

    for name, entry in ZOO.items():
        descs = entry.build()
        for suite_id in entry.suites:
            runs = run_suite(descs, suite_id)
            assert runs, (name, suite_id)
            assert all_passed(runs), (name, suite_id)

    print("✓ Zoo suite tests passed!")


def test_fault_injection_kZ2():
    """Test that every single-entry change to kZ/2 is detected."""
    print("Testing fault injection on kZ/2...")

    monad, comonad = group_algebra(cyclic_group(2))
    assert suite_passed(check_bimonad(flip_bimonad(monad, comonad)))
    assert len(list(perturbations(monad.mu))) == 8

    variants = []
    for _, mu in perturbations(monad.mu):
        variants.append((replace(monad, mu=mu), comonad))
    for _, eta in perturbations(monad.eta):
        variants.append((replace(monad, eta=eta), comonad))
    for _, delta in perturbations(comonad.delta):
        variants.append((monad, replace(comonad, delta=delta)))
    for _, eps in perturbations(comonad.eps):
        variants.append((monad, replace(comonad, eps=eps)))
    assert len(variants) == 8 + 2 + 8 + 2

    for m, c in variants:
        assert not suite_passed(check_bimonad(flip_bimonad(m, c)))

    print("✓ Fault injection tests passed!")


def test_fault_sweep_over_the_zoo():
    """Test that single-entry changes to the small instances are caught by their suites."""
    print("Testing fault sweeps over the zoo...")

    for name in ["kZ3", "kZ4", "kZ2xZ2", "h4", "z2_quasi", "z2_coquasi", "h4-relative"]:
        entry = ZOO[name]
        (desc,) = entry.build().values()
        assert fault_sweep(desc, entry.suites) == [], name

    # Phi and Phi^-1 are both swept on the quasi instance
    paths = {path for path, _ in cells_of(ZOO["z2_quasi"].build()["z2_quasi"])}
    assert {"phi", "phi_inv", "tau_ff.cell", "monad.mu", "comonad.delta"} <= paths

    # the Hausser-Nill equations are homogeneous in eta_F
    hn = ZOO["z2-hn"].build()["z2_hn"]
    missed = fault_sweep(hn, ZOO["z2-hn"].suites)
    assert {path for path, _ in missed} == {"eta_f"}
    assert len(missed) == 2

    # mu_M is only seen through sigma = (id eps_F) mu_M
    smash = ZOO["h4-smash"].build()["H4_smash"]
    missed = fault_sweep(smash, ZOO["h4-smash"].suites, skip=("beta",))
    assert ("mu_m", ((2, 2), (1, 1))) in missed
    x_x = replace_cell(smash, "mu_m", smash.mu_m.perturbed((2, 2), (1, 1), 1))
    assert all_passed(run_suite({"H4_smash": x_x}, "sweedler"))

    with pytest.raises(UnknownRole):
        fault_sweep(hn, ["nope"])
    with pytest.raises(UnknownRole):
        replace_cell(hn, "no_such_cell", hn.eta_f)

    print("✓ Zoo fault sweep tests passed!")


def test_z2_cocycle_brute_force():
    """Test omega(a,b,c) = (-1)^(abc) against the 3-cocycle identity and Phi against a character sum."""
    print("Testing the kZ/2 3-cocycle by brute force...")

    omega = z2_coquasi(-1).omega

    def w(a, b, c):
        return omega.get((), (a % 2, b % 2, c % 2))

    for a, b, c, d in product(range(2), repeat=4):
        assert w(b, c, d) * w(a, b + c, d) * w(a, b, c) == w(a + b, c, d) * w(a, b, c + d), (a, b, c, d)
    assert w(1, 1, 1) == QQ(-1)

    # Phi = sum omega(a,b,c) p_a p_b p_c with the idempotents p_a = (1 + (-1)^a g)/2
    q = z2_quasi(-1)
    f = q.carrier[0]
    idempotents = [TwoCell((), (f,), {((0,), ()): QQ(1, 2), ((1,), ()): QQ((-1) ** a, 2)})
                   for a in range(2)]
    phi = TwoCell((), (f, f, f), {})
    for a, b, c in product(range(2), repeat=3):
        term = hcomp(idempotents[a], idempotents[b], idempotents[c])
        phi = phi.plus(term.scaled((-1) ** (a * b * c)))
    assert equal(phi, q.phi).passed
    assert not equal(phi, z2_quasi(1).phi).passed

    print("✓ kZ/2 3-cocycle brute force tests passed!")


def test_yd_with_trivial_action():
    """Test that a trivial action is YD exactly when conjugation is trivial."""
    print("Testing YD modules with trivial action...")

    assert suite_passed(check_yd(conjugation_yd(cyclic_group(3), trivial_action=True)))
    assert suite_passed(check_yd(conjugation_yd(cyclic_group(3))))

    broken = check_yd(conjugation_yd(symmetric_group_3(), trivial_action=True))
    assert "YD condition" in failed_ids(broken)

    print("✓ Trivial action YD tests passed!")


if __name__ == "__main__":
    print("Running Zoo Tests...\n")

    try:
        test_group_tables()
        test_z2_phi_entries()
        test_build_instance_refs()
        test_every_entry_passes_its_suites()
        test_fault_injection_kZ2()
        test_fault_sweep_over_the_zoo()
        test_z2_cocycle_brute_force()
        test_yd_with_trivial_action()

        print("\n🎉 All zoo tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
