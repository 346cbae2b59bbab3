"""Shared pytest wiring.

Collects the outcome of every acceptance-criterion test and prints one
``ACCEPTANCE <n> PASS|FAIL`` line per criterion in the terminal summary, so
a plain ``pytest`` run always shows the gate verdict explicitly.
"""

import re

_CRITERION_RE = re.compile(r"test_criterion_(\d+)")
_outcomes = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    match = _CRITERION_RE.search(report.nodeid)
    if match is None:
        return
    n = int(match.group(1))
    # Setup errors and call failures both count as FAIL; skip counts as FAIL
    # too, because a criterion that did not run did not pass.
    if report.when == "call":
        _outcomes[n] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _outcomes[n] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        verdict = "PASS" if _outcomes[n] == "passed" else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {n} {verdict}")
