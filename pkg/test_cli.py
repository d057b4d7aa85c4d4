#!/usr/bin/env python3
"""
Test script for the kcat command line: exit codes, derive, act, zoo and reports.
"""

import sys
import os
import json
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

import pytest

from main import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, main
from kcat.constructions import hn_datum_from_quasi, sweedler_datum_from_coquasi
from kcat.errors import UnknownRole
from kcat.runner import act
from kcat.structure_io import emit
from kcat.structures import DistLaw
from kcat.zoo import corrupt_phi, trivial_right_action, trivial_sigma, z2_coquasi, z2_quasi


def test_check_exit_codes(tmp_path):
    """Test pass, fail and bad-input exit codes."""
    print("Testing check exit codes...")

    assert main(['check', 'zoo:z2_quasi(-1)']) == EXIT_PASS
    assert main(['check', '--suite', 'pentagon', '--objects', 'I,F', 'zoo:z2_quasi(-1)']) == EXIT_PASS

    broken = os.path.join(str(tmp_path), "broken.kcat")
    emit({"z2": corrupt_phi(z2_quasi(-1))}, broken)
    assert main(['check', broken]) == EXIT_FAIL

    assert main(['check', os.path.join(str(tmp_path), "missing.kcat")]) == EXIT_INPUT
    assert main(['check', 'zoo:nope']) == EXIT_INPUT
    assert main(['check', '--suite', 'yd', 'zoo:h4']) == EXIT_INPUT
    assert main(['check', 'zoo:h4', 'zoo:h4']) == EXIT_INPUT
    assert main(['--field', 'fp:2', 'check', 'zoo:z2_quasi']) == EXIT_INPUT
    with pytest.raises(SystemExit):
        main(['frobnicate'])

    print("✓ Check exit code tests passed!")


def test_derive_then_check(tmp_path):
    """Test that a derived crossed product passes the monad suite."""
    print("Testing derive...")

    out = os.path.join(str(tmp_path), "smash.kcat")
    assert main(['-o', out, 'derive', 'crossed-product', 'zoo:h4-smash']) == EXIT_PASS
    with open(out, encoding='utf-8') as fh:
        text = fh.read()
    assert text.startswith("# derived by crossed-product")
    assert "structure monad H4_smash.crossed" in text
    assert main(['check', out]) == EXIT_PASS

    alpha = os.path.join(str(tmp_path), "alpha.kcat")
    assert main(['-o', alpha, 'derive', 'alpha', '--quasi', 'zoo:z2_quasi(-1)']) == EXIT_PASS
    with open(alpha, encoding='utf-8') as fh:
        assert "cell z2_quasi.alpha_inv" in fh.read()

    bad = os.path.join(str(tmp_path), "bad.kcat")
    emit({"z2": corrupt_phi(z2_quasi(-1))}, bad)
    assert main(['derive', 'hn-datum', bad]) == EXIT_FAIL

    print("✓ Derive tests passed!")


def test_act():
    """Test the three category actions end to end."""
    print("Testing act...")

    assert main(['act', 'sch', 'zoo:h4']) == EXIT_PASS
    assert main(['act', 'martin', 'zoo:z2_quasi(-1)']) == EXIT_PASS
    assert main(['act', 'yd', 'zoo:s3-yd']) == EXIT_PASS
    assert main(['act', 'martin', 'zoo:h4']) == EXIT_INPUT

    print("✓ Act tests passed!")


def test_act_with_datum():
    """Test that a datum acts with its own sigma or Phi_lambda."""
    print("Testing act on Sweedler and Hausser-Nill data...")

    assert main(['act', 'sch', 'zoo:h4', 'zoo:h4-smash']) == EXIT_PASS
    assert main(['act', 'martin', 'zoo:z2_quasi(-1)', 'zoo:z2-hn']) == EXIT_PASS
    # the datum alone lacks the structure on F
    assert main(['act', 'sch', 'zoo:h4-smash']) == EXIT_INPUT

    q = z2_quasi(-1)
    f = q.carrier
    tau_bf = DistLaw.on(f, f, q.tau_ff.cell, name="tau_BF")
    flat = hn_datum_from_quasi(q, q.monad, tau_bf, z2_quasi(1).phi, q.comonad.delta)
    runs = act('martin', {"F": q, "flat": flat}, verify_pre=False)
    by_name = {(r.structure, r.suite): r.passed for r in runs}
    assert by_name[("F", 'em-cocycle')]
    assert not by_name[("flat", 'em-cocycle')]
    # with the precondition on, the flat datum is skipped after its failing suite
    runs = act('martin', {"F": q, "flat": flat})
    assert [(r.structure, r.suite) for r in runs if not r.passed] == [("flat", 'hausser-nill')]

    p = z2_coquasi(1)
    g = p.carrier
    doubled = trivial_sigma(p, p.monad).perturbed((0,), (0, 1), 1)
    s = sweedler_datum_from_coquasi(p, p.monad, DistLaw.on(g, g, p.tau_ff.cell),
                                    trivial_right_action(p, p.monad), doubled)
    runs = act('sch', {"F": p, "doubled": s}, verify_pre=False)
    by_name = {(r.structure, r.suite): r.passed for r in runs}
    assert by_name[("F", 'em-cocycle')]
    assert not by_name[("doubled", 'em-cocycle')]

    with pytest.raises(UnknownRole):
        act('sch', {"doubled": s}, verify_pre=False)

    print("✓ Datum act tests passed!")


def test_zoo_commands(tmp_path, capsys):
    """Test listing and emitting built-in instances."""
    print("Testing zoo commands...")

    assert main(['zoo', 'list']) == EXIT_PASS
    listing = capsys.readouterr().out
    assert "h4" in listing and "z2_quasi(phase)" in listing

    out = os.path.join(str(tmp_path), "s3.kcat")
    assert main(['-o', out, 'zoo', 'emit', 's3-yd']) == EXIT_PASS
    assert main(['check', out]) == EXIT_PASS

    print("✓ Zoo command tests passed!")


def test_structured_report(tmp_path, capsys):
    """Test structured output and rendering it back as text."""
    print("Testing structured reports...")

    report = os.path.join(str(tmp_path), "report.json")
    assert main(['--format', 'structured', '--timings', '-o', report, 'check', 'zoo:h4']) == EXIT_PASS
    with open(report, encoding='utf-8') as fh:
        data = json.load(fh)
    assert data['passed'] is True
    assert data['runs'][0]['suite'] == 'bimonad'
    assert all(ax['verdict'] == 'pass' for ax in data['runs'][0]['axioms'])
    assert all('elapsed' in ax for ax in data['runs'][0]['axioms'])

    capsys.readouterr()
    assert main(['report', report]) == EXIT_PASS
    assert "[PASS] bimonad on H4" in capsys.readouterr().out

    failing = os.path.join(str(tmp_path), "failing.json")
    broken = os.path.join(str(tmp_path), "broken.kcat")
    emit({"z2": corrupt_phi(z2_quasi(-1))}, broken)
    assert main(['--format', 'structured', '-o', failing, 'check', broken]) == EXIT_FAIL
    assert main(['report', failing]) == EXIT_FAIL

    not_a_report = os.path.join(str(tmp_path), "other.json")
    with open(not_a_report, 'w', encoding='utf-8') as fh:
        json.dump({"hello": 1}, fh)
    assert main(['report', not_a_report]) == EXIT_INPUT

    print("✓ Structured report tests passed!")


if __name__ == "__main__":
    print("Running Command Line Tests...\n")
    print("These tests use pytest fixtures; run them with: python -m pytest test_cli.py")
    sys.exit(pytest.main([__file__, "-q"]))
