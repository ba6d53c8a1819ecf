"""Shared test plumbing: puts the oracle helpers on the path and prints the
acceptance summary (one PASS/FAIL line per criterion) at the end of a run."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "sub-motif growth law, 50 trials, n=6, l=20, rel 1e-10, < 5 s",
    2: "bias-corrected averages constant, rel 1e-10",
    3: "ideal motifs A-D score <= 1e-12",
    4: "shift/common-curve invariance <= 1e-12, scaling rel 1e-10, 100 instances",
    5: "no acolyte pair in any post-cut fragment, 2001 points, l=41, < 60 s",
    6: "sigma=0.5 recovery: median correct 8, median extra 0, each >= 7 correct, <= 1 extra",
    7: "sigma=2 recovery: median correct >= 5 per motif",
    8: "recommendation examples: elbow, argmin fallback, singleton",
    9: "pipeline outputs byte-identical across thread counts",
    10: "fmsr equals naive double centering within 1e-12, 200 inputs",
}

_outcomes: dict[int, str] = {}
_notes: dict[int, list[str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not (rep.when == "call" or rep.failed or rep.skipped):
        return
    n = marker.args[0]
    state = "FAIL" if rep.failed else "SKIP" if rep.skipped else "PASS"
    previous = _outcomes.get(n)
    if previous == "FAIL" or (previous == "SKIP" and state == "PASS"):
        return
    _outcomes[n] = state


@pytest.fixture
def note(request):
    """Attach a short measurement to the acceptance summary line."""
    marker = request.node.get_closest_marker("acceptance")

    def add(text: str) -> None:
        _notes.setdefault(marker.args[0], []).append(text)

    return add


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        state = _outcomes.get(n, "NOT RUN")
        extra = "; ".join(_notes.get(n, []))
        tr.write_line(f"[{state:^7}] {n:>2}. {title}" + (f"  ({extra})" if extra else ""))
