import pytest

ACCEPTANCE_TITLES = {
    1: "filtration certificates replay (finset and sset)",
    2: "chain complex counterexample groups and homology",
    3: "BΣ2 homology versus acyclic EΣ2",
    4: "boundary square is not a projective cofibration, but is symmetrizable",
    5: "symmetroidal instances for all horns with m <= 2",
    6: "pushout-product laws, 100 instances per engine",
    7: "strict versus homotopy pushouts",
    8: "engine invariants over at least 200 seeded cases",
}

_results: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def acceptance():
    """Record the observed outcome of one acceptance criterion (or one part of it)."""

    def record(number: int, ok: bool, detail: str = ""):
        _results.setdefault(number, []).append((bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in ACCEPTANCE_TITLES.items():
        parts = _results.get(number)
        if parts is None:
            terminalreporter.write_line(f"criterion {number}: NOT RUN  {title}")
            continue
        ok = all(p for p, _ in parts)
        failed = [d for p, d in parts if not p]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} ({len(parts) - len(failed)}/{len(parts)} parts)"
        terminalreporter.write_line(line)
        for d in failed:
            terminalreporter.write_line(f"    failed part: {d}")
