"""The eight acceptance criteria.

Each test records its observed outcome with the ``acceptance`` fixture; the
terminal summary then prints one PASS/FAIL line per criterion.  Run with

    pytest tests/test_acceptance.py
"""
import math

import pytest

from pplab.checkers import (
    bsigma_homology,
    build_power_contraction,
    chain_counterexample_report,
    check_projective_cofibration,
    check_symmetric_flat_instance,
    check_symmetrizable,
    check_symmetroidal_instance,
    esigma_homology,
    esigma_to_point,
    interval_complex,
    standard_y_arrows,
    strict_vs_homotopy_pushout,
)
from pplab.chain import CHAIN, complex_homology, sign_action_power
from pplab.cli import SuiteConfig, run_suite
from pplab.core import all_subgroups
from pplab.laws import small_groups
from pplab.sset import SSET, cell_inclusion, circle, simplex, vertex_map
from pplab.sset.homology import is_homology_iso
from pplab.sset.homotopy import verify_homotopy


def _verdicts(report):
    return [(inst["inputs"], v) for inst in report["instances"] for v in inst["verdicts"]]


# 1 -----------------------------------------------------------------------------
def test_criterion_1_filtration_replay(acceptance):
    doc = run_suite(SuiteConfig("filtration"))
    per_n = {}
    bad = []
    for rep in doc["reports"]:
        eng = rep["suite"].split("-")[1]
        for inputs, v in _verdicts(rep):
            n = tuple(int(x) for x in inputs["n"])
            per_n.setdefault((eng, n), set()).add(inputs["index"])
            expected = math.prod(a + 1 for a in n) - (1 if v["claim"] == "filtration-kappa" else 0)
            w = v["witnesses"]
            if not (v["pass"] and int(w["steps"]) == expected == int(w["expected_steps"])):
                bad.append((rep["suite"], inputs["n"], inputs["index"], v["claim"]))
    enough = all(len(per_n.get((eng, n), ())) >= need for eng, need in (("finset", 25), ("sset", 5)) for n in [(1,), (2,), (3,), (1, 1), (2, 1)])
    acceptance(1, enough and not bad, f"{len(bad)} failing certificates")
    assert enough
    assert not bad, bad[:5]


# 2 -----------------------------------------------------------------------------
def test_criterion_2_chain_counterexample(acceptance):
    rep = chain_counterexample_report()
    A = interval_complex()
    sq = CHAIN.tensor([A, A])
    Q = CHAIN.coinvariants(sign_action_power(A, 2)).obj
    h = complex_homology(Q)
    groups = [str(Q.group(k)) for k in (2, 1, 0)]
    homology = [str(h[k]) for k in (0, 1, 2)]
    ok = (
        rep.passed
        and sq.d(2).tolist() == [[1], [-1]]
        and sq.d(1).tolist() == [[1, 1]]
        and groups == ["Z/2", "Z", "Z"]
        and homology == ["0", "0", "Z/2"]
    )
    acceptance(2, ok, f"groups {groups}, homology {homology}")
    assert ok


# 3 -----------------------------------------------------------------------------
def test_criterion_3_bsigma(acceptance):
    b = bsigma_homology(2, 6, 5)
    e = esigma_homology(2, 6, 5)
    # the coinvariant of EΣ2 -> pt against ∅ -> pt is BΣ2 -> pt, not a homology iso
    flat = check_symmetric_flat_instance(esigma_to_point(2, 6), [SSET.initial_map(simplex(0))], (2,), 5)
    ok = b == ["Z", "Z/2", "0", "Z/2", "0", "Z/2"] and e == ["Z", "0", "0", "0", "0", "0"] and not flat.passed
    acceptance(3, ok, f"BΣ2 {b}, EΣ2 {e}")
    assert ok


# 4 -----------------------------------------------------------------------------
def test_criterion_4_power_cofibration(acceptance):
    f = cell_inclusion("boundary", 1)
    v = check_projective_cofibration(f, 2)
    fixed = v.witnesses.get("fixed", {})
    k, idx = fixed.get("cell", (None, None))
    edge = ((0, 1), 1, 0)
    data = SSET.product_data([simplex(1), simplex(1)])
    diagonal = k == 1 and data.comps[1][idx] == (edge, edge)
    sym = check_symmetrizable(f, 2)
    ok = not v.passed and diagonal and v.witnesses["fixed_count"] == 1 and sym.passed
    acceptance(4, ok, f"witness {fixed}")
    assert ok


# 5 -----------------------------------------------------------------------------
HORNS = [(m, k) for m in (1, 2) for k in range(m + 1)]
SWAP_DEFECT = (
    "y folds two points onto one, so it is not a monomorphism; the source "
    "quotient keeps both triangles of the square while the target quotient "
    "identifies them, and the quotient map is not mono"
)


def _symmetroidal_cases():
    for name in ("empty-to-point", "boundary-1-trivial", "swap-points"):
        for m, k in HORNS:
            marks = [pytest.mark.xfail(strict=True, reason=SWAP_DEFECT)] if name == "swap-points" else []
            yield pytest.param(name, m, k, marks=marks, id=f"{name}-horn{m}{k}")


@pytest.mark.parametrize("y_name,m,k", list(_symmetroidal_cases()))
def test_criterion_5_symmetroidal(acceptance, y_name, m, k):
    y = standard_y_arrows()[y_name]
    horn = cell_inclusion("horn", m, k)
    v = check_symmetroidal_instance(y, [horn], (2,), acyclic=True)
    mono = v.witnesses["mono"]["pass"]
    contraction = build_power_contraction(y, [(m, k)], (2,))
    homotopy = verify_homotopy(contraction.witness).passed
    homology = is_homology_iso(contraction.quotient_arrow, contraction.quotient_arrow.cod.dim).passed
    ok = mono and homotopy and homology and v.passed
    acceptance(5, ok, f"{y_name} with horn ({m},{k}): mono={mono} homotopy={homotopy} homology={homology}")
    assert ok


# 6 -----------------------------------------------------------------------------
REQUIRED_LAWS = {
    "pp-of-monos-is-mono",
    "pp-symmetry",
    "pp-associativity-left",
    "pp-associativity-right",
    "pp-preserves-pushout",
    "pp-composition",
}


def test_criterion_6_pp_laws(acceptance):
    doc = run_suite(SuiteConfig("pp-laws"))
    ok = True
    for rep in doc["reports"]:
        verdicts = _verdicts(rep)
        claims = {v["claim"] for _, v in verdicts}
        need = REQUIRED_LAWS | ({"discrete-embedding"} if rep["suite"].endswith("finset") else set())
        failures = [v["claim"] for _, v in verdicts if not v["pass"]]
        part = len(rep["instances"]) == 100 and need <= claims and not failures
        acceptance(6, part, f"{rep['suite']}: {len(failures)} failures")
        ok = ok and part
    assert ok


# 7 -----------------------------------------------------------------------------
def test_criterion_7_strict_vs_homotopy(acceptance):
    pt = simplex(0)
    to_pt = vertex_map(pt, 0, circle())
    circle_span = strict_vs_homotopy_pushout(to_pt, to_pt, 2)
    b = cell_inclusion("boundary", 1)
    along_cofibration = strict_vs_homotopy_pushout(b, vertex_map(pt, 0, b.dom), 2)
    ok = (
        circle_span.witnesses["strict"][2] == "0"
        and circle_span.witnesses["homotopy"][2] == "Z"
        and along_cofibration.passed
    )
    acceptance(7, ok, f"circle span {circle_span.witnesses}")
    assert ok


# 8 -----------------------------------------------------------------------------
def test_criterion_8_engine_invariants(acceptance):
    doc = run_suite(SuiteConfig("engine-invariants"))
    [rep] = doc["reports"]
    verdicts = _verdicts(rep)
    failures = [v["claim"] for _, v in verdicts if not v["pass"]]
    induction_cases = sum(1 for inputs, _ in verdicts if inputs["kind"] == "induction")
    all_pairs = sum(len(all_subgroups(G)) for G in small_groups())
    ok = len(rep["instances"]) >= 200 and not failures and induction_cases == all_pairs
    acceptance(8, ok, f"{len(rep['instances'])} cases, {len(failures)} failures")
    assert ok
