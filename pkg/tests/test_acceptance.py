"""Acceptance gate: one test per criterion, exact tolerances, wall-clock
budgets from the stated limits.  Each test prints its own PASS/FAIL line so
a -s run reads as a checklist; under plain pytest the verbose test names
serve the same purpose.
"""

import json
import subprocess
import sys
import time

from treewedge.suites import RunConfig, run_suite

CONFIG = RunConfig()  # anchors w, w*2, w^2, w^2+w, w^3 and naturals <= 64


def _criterion(number, name, suite_names, limit_seconds):
    t0 = time.time()
    reports = [run_suite(s, CONFIG) for s in suite_names]
    elapsed = time.time() - t0
    ok = all(r["pass"] for r in reports)
    in_time = elapsed < limit_seconds
    status = "PASS" if ok and in_time else "FAIL"
    print(f"{status} criterion {number} ({name}): {elapsed:.1f}s of {limit_seconds}s budget")
    for r in reports:
        for prop in r["properties"]:
            if not prop["passed"]:
                print(f"      failed property: {r['suite']}::{prop['name']}")
    assert ok, f"criterion {number} has failing properties"
    assert in_time, f"criterion {number} took {elapsed:.1f}s (budget {limit_seconds}s)"


def test_criterion_1_coherence_suite():
    _criterion(1, "coherence", ["coherence"], 10)


def test_criterion_2_delta_bound_suite():
    _criterion(2, "delta bound", ["delta-x"], 10)


def test_criterion_3_closure_suites():
    _criterion(3, "tree closures", ["tree-closure"], 30)


def test_criterion_4_wedge_equivalence():
    _criterion(4, "wedge safety", ["wedge-safe"], 10)


def test_criterion_5_finite_oracle():
    # ternary height 4 has 7^13 bounded rules; the suite runs every class it
    # can exhaust and a seeded sample there, reported as such
    _criterion(5, "finite oracle", ["wedge-oracle"], 60)


def test_criterion_6_sorgenfrey_suite():
    _criterion(6, "order topology", ["sorgenfrey"], 30)


def test_criterion_7_forcing_suites():
    _criterion(7, "forcing", ["forcing-ccc", "forcing-density"], 60)


def test_criterion_8_deterministic_reports(tmp_path):
    t0 = time.time()
    paths = []
    for run in range(2):
        path = tmp_path / f"run{run}.json"
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "treewedge",
                "--suite",
                "forcing-density",
                "--seed",
                "11",
                "--trials",
                "120",
                "--json",
                str(path),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        paths.append(path)
    identical = paths[0].read_bytes() == paths[1].read_bytes()
    # and the in-process route over every registered suite
    small = RunConfig(trials=60, oracle_sample=500)
    for name in ("coherence", "delta-x", "wedge-oracle", "sorgenfrey", "forcing-ccc"):
        first = json.dumps(run_suite(name, small), sort_keys=True)
        second = json.dumps(run_suite(name, small), sort_keys=True)
        identical = identical and first == second
    elapsed = time.time() - t0
    print(f"{'PASS' if identical else 'FAIL'} criterion 8 (determinism): {elapsed:.1f}s")
    assert identical
