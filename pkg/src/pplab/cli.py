"""Command line entry point.

    pplab run --suite NAME [--engine E] [--seed S] [--max-cells C] [--n 2,1] [--upto U] [--count K] [--out PATH] [--json]
    pplab compute {homology,pp-power,coinv,certificate} INPUT... [--n 2,1] [--upto U] [--engine E] [--out PATH]

INPUT is a file in one of the text formats of ``pplab.io`` or a standard
name: ``simplex:M``, ``boundary:M``, ``horn:M:K``, ``circle``, ``point`` for
simplicial sets; ``boundary-inclusion:M``, ``horn-inclusion:M:K``,
``empty:M`` (∅ -> Δ^M) and ``collapse:M`` (Δ^M -> Δ^0) for arrows.

Exit status: 0 when every verdict passes, 1 when one fails or a
computation is structurally impossible, 2 on usage errors, 3 on parse errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .chain.complexes import complex_homology
from .checkers import (
    CheckReport,
    bsigma_homology,
    chain_counterexample_report,
    check_projective_cofibration,
    check_symmetric_flat_instance,
    check_symmetric_h_instance,
    check_symmetrizable,
    check_symmetroidal_instance,
    esigma_homology,
    esigma_to_point,
    standard_y_arrows,
    strict_vs_homotopy_pushout,
)
from .core.actions import arrow_coinvariants, trivial_action, trivially_acted
from .core.errors import ParseError, StructuralError
from .core.finset import FINSET
from .core.groups import multi_symmetric_group
from .core.verdict import Verdict
from .filtration import decompose_composite_power, decompose_kappa, verify_certificate
from .generators import random_injective_chain, random_sset_chain, random_sset_mono
from .io import complex_from_json, dumps, map_to_json, object_digest, object_to_json, parse_arrow, parse_sset
from .laws import engine_invariant_instances, pp_law_instance
from .pushout import MultiIndex, pp_power
from .sset.cells import boundary, cell_inclusion, circle, horn, simplex, vertex_map
from .sset.engine import SSET, fixed_cells
from .sset.homology import homology_strings

SUITES = (
    "filtration",
    "pp-laws",
    "symmetroidal",
    "sym-flat",
    "bsigma",
    "chain-counterexample",
    "projective-cofib",
    "strict-vs-hopushout",
    "engine-invariants",
)
COMMANDS = ("homology", "pp-power", "coinv", "certificate")
DEFAULT_FILTRATION_NS = ((1,), (2,), (3,), (1, 1), (2, 1))


class UsageError(Exception):
    """Bad configuration or input names; reported with usage text."""


@dataclass
class SuiteConfig:
    suite: str
    engine: str | None = None
    seed: int = 0
    max_cells: int | None = None
    n: tuple | None = None
    upto: int | None = None
    count: int | None = None
    out: str | None = None
    json: bool = False

    def __post_init__(self):
        if self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        for name in ("max_cells", "upto", "count"):
            v = getattr(self, name)
            if v is not None and v <= 0 and not (name == "upto" and v == 0):
                raise UsageError(f"--{name.replace('_', '-')} must be positive")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("json")
        return d


def expect(v: Verdict, expected: bool) -> Verdict:
    """Wrap a verdict whose reproduced outcome is a known failure or success."""
    return Verdict(
        f"{v.claim}:expected-{'pass' if expected else 'fail'}",
        v.passed == expected,
        list(v.flags),
        {"observed": v.to_json()},
    )


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------
def _engines(cfg, default=("finset", "sset")):
    if cfg.engine is None:
        return list(default)
    if cfg.engine not in default:
        raise UsageError(f"suite {cfg.suite} supports engines {', '.join(default)}")
    return [cfg.engine]


def _suite_filtration(cfg: SuiteConfig) -> list[CheckReport]:
    reports = []
    ns = [cfg.n] if cfg.n else list(DEFAULT_FILTRATION_NS)
    for eng in _engines(cfg):
        rng = random.Random(cfg.seed)
        rep = CheckReport(f"filtration-{eng}", cfg.seed)
        count = cfg.count or (25 if eng == "finset" else 5)
        for n in ns:
            for i in range(count):
                if eng == "finset":
                    pairs = [random_injective_chain(rng, cfg.max_cells or 3) for _ in n]
                else:
                    pairs = [random_sset_chain(rng, cfg.max_cells or 10, 2) for _ in n]
                v0 = [a for a, _ in pairs]
                v1 = [b for _, b in pairs]
                inputs = {"n": list(n), "index": i, "v0": [_describe(f) for f in v0], "v1": [_describe(f) for f in v1]}
                rep.add(inputs, [
                    verify_certificate(decompose_composite_power(v0, v1, n)),
                    verify_certificate(decompose_kappa(v0, v1, n)),
                ])
        reports.append(rep)
    return reports


def _suite_pp_laws(cfg):
    reports = []
    for eng in _engines(cfg):
        rng = random.Random(cfg.seed)
        rep = CheckReport(f"pp-laws-{eng}", cfg.seed)
        for i in range(cfg.count or 100):
            inputs, verdicts = pp_law_instance(eng, rng)
            rep.add({"index": i, **inputs}, verdicts)
        reports.append(rep)
    return reports


def _horns(max_m=2):
    return [(m, k) for m in range(1, max_m + 1) for k in range(m + 1)]


def _suite_symmetroidal(cfg):
    _only_sset(cfg)
    _only_n(cfg, (2,))
    rep = CheckReport("symmetroidal", cfg.seed)
    for name, y in standard_y_arrows().items():
        for m, k in _horns():
            v = check_symmetroidal_instance(y, [cell_inclusion("horn", m, k)], (2,), acyclic=True)
            rep.add({"y": name, "horn": [m, k], "n": [2]}, [v])
    return [rep]


def _suite_sym_flat(cfg):
    _only_sset(cfg)
    _only_n(cfg, (2,))
    upto = cfg.upto if cfg.upto is not None else 4
    G = multi_symmetric_group((2,))
    pt = simplex(0)
    empty = SSET.initial_map(pt)
    rep = CheckReport("sym-flat", cfg.seed)
    y_id = trivially_acted(SSET.identity(pt), G)
    rep.add({"y": "identity-point", "s": "empty-to-point", "n": [2]}, [check_symmetric_flat_instance(y_id, [empty], (2,), upto)])
    y_e = esigma_to_point(2, upto + 2)
    v = check_symmetric_flat_instance(y_e, [empty], (2,), upto)
    rep.add({"y": f"esigma-skeleton-{upto + 2}-to-point", "s": "empty-to-point", "n": [2]}, [expect(v, False)])
    Y = trivial_action(G, pt)
    h = check_symmetric_h_instance(Y, [cell_inclusion("boundary", 1)], (2,), seed=cfg.seed, samples=10)
    rep.add({"Y": "unit", "s": "boundary-inclusion:1", "n": [2], "samples": 10}, [h])
    return [rep]


def _suite_bsigma(cfg):
    _only_sset(cfg)
    n = cfg.n[0] if cfg.n else 2
    if cfg.n and len(cfg.n) != 1:
        raise UsageError("bsigma takes a single n")
    upto = cfg.upto if cfg.upto is not None else 5
    N = upto + 1
    table = bsigma_homology(n, N, upto)
    stable = bsigma_homology(n, N + 1, upto) == table
    acyclic = esigma_homology(n, N, upto)
    verdicts = [
        Verdict("bsigma-truncation-stable", stable, [], {"N": N, "table": table}),
        Verdict("esigma-reduced-acyclic", acyclic == ["Z"] + ["0"] * upto, [], {"table": acyclic}),
    ]
    golden = _bsigma_golden(n, upto)
    if golden is not None:
        verdicts.append(Verdict("bsigma-homology", table == golden, [], {"table": table, "expected": golden}))
    rep = CheckReport("bsigma", cfg.seed)
    rep.add({"n": n, "N": N, "upto": upto}, verdicts)
    return [rep]


def _bsigma_golden(n, upto):
    if n == 1:
        return ["Z"] + ["0"] * upto
    if n == 2:
        return ["Z"] + ["Z/2" if k % 2 else "0" for k in range(1, upto + 1)]
    return None


def _suite_chain(cfg):
    if cfg.engine not in (None, "chain"):
        raise UsageError("chain-counterexample runs on the chain engine")
    return [chain_counterexample_report()]


def _suite_projective(cfg):
    _only_sset(cfg)
    rep = CheckReport("projective-cofib", cfg.seed)
    b = cell_inclusion("boundary", 1)
    v = check_projective_cofibration(b, 2)
    diagonal = v.witnesses.get("fixed", {}).get("vertices") == [0, 3] and v.witnesses.get("fixed_count") == 1
    rep.add({"f": "boundary-inclusion:1", "n": 2}, [
        expect(v, False),
        Verdict("witness-is-diagonal-edge", diagonal, [], {"fixed": v.witnesses.get("fixed")}),
        check_symmetrizable(b, 2),
    ])
    pt = simplex(0)
    rep.add({"f": "empty:0", "n": 1}, [check_projective_cofibration(SSET.initial_map(pt), 1)])
    two = SSET.coproduct([pt, pt]).obj
    # the place-permutation action fixes the two diagonal points of the square
    rep.add({"f": "empty-to-two-points", "n": 2}, [expect(check_projective_cofibration(SSET.initial_map(two), 2), False)])
    rng = random.Random(cfg.seed)
    for i in range(cfg.count or 20):
        f = random_sset_mono(rng, cfg.max_cells or 6, 2)
        p = check_projective_cofibration(f, 2)
        s = check_symmetrizable(f, 2)
        implied = Verdict("power-implies-symmetrizable", (not p.passed) or s.passed, [], {"projective": p.passed, "symmetrizable": s.passed})
        rep.add({"index": i, "f": _describe(f), "n": 2}, [implied])
    return [rep]


def _suite_strict(cfg):
    _only_sset(cfg)
    upto = cfg.upto if cfg.upto is not None else 2
    pt = simplex(0)
    c = circle()
    rep = CheckReport("strict-vs-hopushout", cfg.seed)
    to_pt = vertex_map(pt, 0, c)
    rep.add({"span": "point <- circle -> point"}, [expect(strict_vs_homotopy_pushout(to_pt, to_pt, upto), False)])
    b = cell_inclusion("boundary", 1)
    rep.add({"span": "interval <- boundary -> point"}, [strict_vs_homotopy_pushout(b, vertex_map(pt, 0, b.dom), upto)])
    X = simplex(1)
    rep.add({"span": "identities of the interval"}, [strict_vs_homotopy_pushout(SSET.identity(X), SSET.identity(X), upto)])
    return [rep]


def _suite_invariants(cfg):
    rep = CheckReport("engine-invariants", cfg.seed)
    for inputs, verdicts in engine_invariant_instances(random.Random(cfg.seed), cfg.count or 200):
        rep.add(inputs, verdicts)
    return [rep]


def _only_sset(cfg):
    if cfg.engine not in (None, "sset"):
        raise UsageError(f"suite {cfg.suite} runs on the sset engine")


def _only_n(cfg, n):
    if cfg.n is not None and tuple(cfg.n) != n:
        raise UsageError(f"suite {cfg.suite} is defined for n = {','.join(map(str, n))}")


_RUNNERS = {
    "filtration": _suite_filtration,
    "pp-laws": _suite_pp_laws,
    "symmetroidal": _suite_symmetroidal,
    "sym-flat": _suite_sym_flat,
    "bsigma": _suite_bsigma,
    "chain-counterexample": _suite_chain,
    "projective-cofib": _suite_projective,
    "strict-vs-hopushout": _suite_strict,
    "engine-invariants": _suite_invariants,
}


def run_suite(cfg: SuiteConfig) -> dict:
    reports = _RUNNERS[cfg.suite](cfg)
    return {
        "tool": "pplab",
        "version": __version__,
        "config": cfg.echo(),
        "reports": [r.to_json() for r in reports],
        "pass": all(r.passed for r in reports),
    }


def _describe(f) -> str:
    if hasattr(f, "table"):
        return f"finset {f.dom.size}->{f.cod.size} {list(f.table)}"
    return f"sset {list(f.dom.counts)}->{list(f.cod.counts)}"


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------
def _name_args(spec, count, usage):
    parts = spec.split(":")
    try:
        vals = [int(p) for p in parts[1:]]
    except ValueError:
        raise UsageError(f"malformed input name {spec!r}, expected {usage}") from None
    if len(vals) != count:
        raise UsageError(f"malformed input name {spec!r}, expected {usage}")
    return vals


def load_object(spec: str):
    head = spec.split(":")[0]
    if head == "simplex":
        return simplex(*_name_args(spec, 1, "simplex:M"))
    if head == "boundary":
        return boundary(*_name_args(spec, 1, "boundary:M"))
    if head == "horn":
        return horn(*_name_args(spec, 2, "horn:M:K"))
    if spec == "circle":
        return circle()
    if spec == "point":
        return simplex(0)
    return parse_sset(_read(spec))


def load_arrow(spec: str):
    head = spec.split(":")[0]
    if head == "boundary-inclusion":
        return cell_inclusion("boundary", *_name_args(spec, 1, "boundary-inclusion:M"))
    if head == "horn-inclusion":
        return cell_inclusion("horn", *_name_args(spec, 2, "horn-inclusion:M:K"))
    if head == "empty":
        return SSET.initial_map(simplex(*_name_args(spec, 1, "empty:M")))
    if head == "collapse":
        return vertex_map(simplex(0), 0, simplex(*_name_args(spec, 1, "collapse:M")))
    return parse_arrow(_read(spec))


def _read(path):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such input file or standard name: {path}")
    return p.read_text()


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------
def compute(cmd: str, inputs: list[str], n=None, upto=None, engine=None, kappa=False) -> dict:
    if cmd == "homology":
        _arity(cmd, inputs, 1)
        if engine == "chain" or inputs[0].endswith(".json"):
            C = complex_from_json(_read(inputs[0]))
            groups = complex_homology(C)
            return {"kind": "homology", "engine": "chain", "homology": {str(k): str(g) for k, g in sorted(groups.items())}}
        X = load_object(inputs[0])
        top = upto if upto is not None else max(X.dim, 0)
        return {"kind": "homology", "engine": "sset", "homology": homology_strings(X, top)}
    if cmd in ("pp-power", "coinv"):
        _arity(cmd, inputs, 1)
        f = load_arrow(inputs[0])
        k = _single_n(n)
        res = pp_power(f, k)
        if cmd == "pp-power":
            return _pp_digest(res, k)
        q = arrow_coinvariants(res.action)
        return {
            "kind": "coinvariants",
            "n": str(k),
            "dom": object_to_json(q.arrow.dom),
            "cod": object_to_json(q.arrow.cod),
            "arrow": map_to_json(q.arrow),
            "mono": q.arrow.engine.is_mono(q.arrow),
        }
    if cmd == "certificate":
        if not inputs:
            raise UsageError("certificate needs one arrow, or pairs v0 v1 per block")
        mi = MultiIndex(n or (1,))
        arrows = [load_arrow(s) for s in inputs]
        if len(arrows) == 1:
            v1 = arrows[0]
            v0 = v1.engine.initial_map(v1.dom)
            pairs = [(v0, v1)] * len(mi)
        elif len(arrows) == 2:
            pairs = [(arrows[0], arrows[1])] * len(mi)
        elif len(arrows) == 2 * len(mi):
            pairs = [(arrows[2 * i], arrows[2 * i + 1]) for i in range(len(mi))]
        else:
            raise UsageError("certificate needs one arrow, one pair v0 v1, or one pair per block of n")
        v0 = [a for a, _ in pairs]
        v1 = [b for _, b in pairs]
        cert = (decompose_kappa if kappa else decompose_composite_power)(v0, v1, mi)
        return {"kind": "certificate", "certificate": cert.to_json(), "verdict": verify_certificate(cert).to_json()}
    raise UsageError(f"unknown command {cmd!r}")


def _arity(cmd, inputs, k):
    if len(inputs) != k:
        raise UsageError(f"{cmd} takes {k} input")


def _single_n(n):
    if n is None:
        return 2
    if len(n) != 1:
        raise UsageError("this command takes a single n")
    return n[0]


def _pp_digest(res, n) -> dict:
    e = res.engine
    out = {
        "kind": "pp-power",
        "n": str(n),
        "mode": res.mode,
        "dom": object_digest(res.dom),
        "cod": object_digest(res.cod),
        "mono": e.is_mono(res.arrow),
    }
    if e is SSET and e.is_mono(res.arrow):
        inside = e.image_cells(res.arrow)
        G = res.action.group
        fixed = []
        for g, cell in fixed_cells(res.action.cod_action):
            if cell not in inside:
                fixed.append({"group_element": list(G.elements[g]), "cell": list(cell), "vertices": list(res.cod.vertices_of((tuple(range(cell[0] + 1)), cell[0], cell[1])))})
        out["fixed_cells_outside_image"] = fixed
    elif e is FINSET:
        out["table"] = [str(x) for x in res.arrow.table]
    return out


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------
def _multi_index(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(","))
        MultiIndex(vals)
    except (ValueError, StructuralError):
        raise argparse.ArgumentTypeError(f"expected a comma-separated multi-index like 2,1, got {text!r}") from None
    return vals


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pplab", description="Pushout products, symmetric powers and their quotients, computed exactly.")
    p.add_argument("--version", action="version", version=f"pplab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a verification suite")
    run.add_argument("--suite", required=True, choices=SUITES)
    run.add_argument("--engine", choices=("finset", "sset", "chain"))
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--max-cells", type=_positive, dest="max_cells")
    run.add_argument("--n", type=_multi_index)
    run.add_argument("--upto", type=_positive)
    run.add_argument("--count", type=_positive, help="instances per engine and multi-index")
    run.add_argument("--out", help="write the JSON report here")
    run.add_argument("--json", action="store_true", help="print the JSON report")
    comp = sub.add_parser("compute", help="compute an object and print it as JSON")
    comp.add_argument("what", choices=COMMANDS)
    comp.add_argument("inputs", nargs="*")
    comp.add_argument("--engine", choices=("finset", "sset", "chain"))
    comp.add_argument("--n", type=_multi_index)
    comp.add_argument("--upto", type=_positive)
    comp.add_argument("--kappa", action="store_true", help="certificate for the map out of the kappa start")
    comp.add_argument("--out")
    comp.add_argument("--json", action="store_true")
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _summary(doc: dict) -> str:
    lines = []
    for rep in doc["reports"]:
        verdicts = [v for inst in rep["instances"] for v in inst["verdicts"]]
        failed = [v for v in verdicts if not v["pass"]]
        status = "PASS" if rep["pass"] else "FAIL"
        lines.append(f"{status} {rep['suite']}: {len(rep['instances'])} instances, {len(verdicts)} verdicts, {len(failed)} failed")
        for inst in rep["instances"]:
            for v in inst["verdicts"]:
                if not v["pass"]:
                    lines.append(f"  fail {v['claim']} on {json.dumps(inst['inputs'], sort_keys=True)}")
    lines.append("PASS" if doc["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            try:
                cfg = SuiteConfig(args.suite, args.engine, args.seed, args.max_cells, args.n, args.upto, args.count, args.out, args.json)
                doc = run_suite(cfg)
            except UsageError as exc:
                parser.error(str(exc))
            text = dumps(doc)
            if args.out:
                Path(args.out).write_text(text)
            sys.stdout.write(text if args.json else _summary(doc))
            return 0 if doc["pass"] else 1
        try:
            data = compute(args.what, args.inputs, args.n, args.upto, args.engine, args.kappa)
        except UsageError as exc:
            parser.error(str(exc))
        _emit(dumps(data), args.out)
        return 0
    except ParseError as exc:
        sys.stderr.write(f"pplab: parse error: {exc}\n")
        return 3
    except StructuralError as exc:
        sys.stderr.write(f"pplab: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
