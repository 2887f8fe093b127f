import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "padicasai.cli"]


def run(*args):
    return subprocess.run(CMD + list(args), capture_output=True, text=True)


def test_zeta_unramified_normalized():
    r = run("--prime", "3", "zeta", "--phi", "builtin:unramified", "--g", "identity", "--normalize")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["normalized"]["terms"] == {"0,0": "1"}


def test_zeta_specialized():
    r = run(
        "--prime", "3", "--satake", "2,3",
        "zeta", "--phi", "builtin:unramified", "--normalize",
    )
    assert r.returncode == 0
    assert json.loads(r.stdout)["normalized_value"] == "1"


def test_euler_poly_and_satake_roundtrip():
    r = run("--prime", "5", "euler-poly", "--kind", "asai_inert")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    at1 = doc["at_one"]
    r2 = run("--prime", "5", "satake", "--elem", json.dumps(at1))
    assert r2.returncode == 0


def test_delta1_verify():
    r = run("--prime", "5", "delta1-verify", "--case", "inert")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["A_s_equals_one"] is True


def test_gstar_factor_delta1():
    r = run("--prime", "3", "gstar-factor", "--case", "split")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["certificate"]["verified"] is True


def test_hilbert_check_builtin():
    r = run("--prime", "3", "hilbert-check", "--form", "builtin:synthetic_w2", "--ell", "5")
    assert r.returncode == 0
    assert json.loads(r.stdout)["member"] is True


def test_vector_serialization_roundtrip(tmp_path):
    from fractions import Fraction

    from padicasai.exactnum import QuadCtx
    from padicasai.heckemod import TestVector, generator_vector
    from padicasai.padicgrp import Mat2
    from padicasai.whitzeta import SchwartzFn

    ctx = QuadCtx.make(3)
    vec = TestVector(
        ctx,
        "inert",
        "K[p]",
        [(SchwartzFn.phi_p2(3), Mat2.n_b(1, ctx), Fraction(-2, 3))],
        star=False,
    )
    path = tmp_path / "vec.json"
    path.write_text(json.dumps(vec.to_json()))
    r = run("--prime", "3", "certify", "--vector", str(path), "--part", "2")
    assert r.returncode == 0
    assert json.loads(r.stdout)["certificate"]["verified"] is True


def test_input_error_exit_code():
    r = run("--prime", "4", "euler-poly", "--kind", "asai_inert")
    assert r.returncode == 2
    r2 = run("--prime", "3", "hilbert-check", "--form", "missing.json", "--ell", "5")
    assert r2.returncode == 2


def test_precision_overflow_exit_code(tmp_path):
    # a deep cell forces a refinement level above a tiny cap
    phi = {"level": 2, "cells": [{"c": ["0", "1"], "coef": "1"}]}
    r = run(
        "--prime", "3", "--precision-cap", "2",
        "zeta", "--phi", json.dumps(phi), "--g", "n:1/27",
    )
    assert r.returncode == 3


def test_verify_suite_subset_deterministic():
    # identical configuration and seed: byte-identical stdout
    r1 = run("--prime", "3", "--seed", "1", "verify-suite", "--only", "1,4,7,10")
    r2 = run("--prime", "3", "--seed", "1", "verify-suite", "--only", "1,4,7,10")
    assert r1.returncode == 0
    assert json.loads(r1.stdout)["all_ok"] is True
    assert r1.stdout == r2.stdout


def test_verify_suite_workers_independent():
    r1 = run("--prime", "3", "verify-suite", "--only", "1,10")
    r2 = run("--prime", "3", "--workers", "2", "verify-suite", "--only", "1,10")
    assert r1.stdout == r2.stdout
