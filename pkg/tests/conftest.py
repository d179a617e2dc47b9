from collections import OrderedDict

import pytest

# criterion number -> list of (check name, passed, detail)
ACCEPTANCE = OrderedDict()

TITLES = {
    1: "analytic state matches exact reduced state",
    2: "Hamiltonian spectrum matches polaron levels",
    3: "g2 low and high temperature limits",
    4: "Wigner branch structure",
    5: "QFI two-peak structure",
    6: "closed-form QFI matches Gaussian pipeline",
    7: "position CFI behaviour",
    8: "resonator vs qubit probe QFI",
    9: "p-quadrature kurtosis vanishes",
    10: "error propagation ordering and oracle",
    11: "multimode g2",
    12: "randomized property suite",
}


@pytest.fixture
def record():
    def _record(criterion, check, passed, detail=""):
        ACCEPTANCE.setdefault(criterion, []).append((check, bool(passed), detail))
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[crit]
        ok = all(p for _, p, _ in checks)
        tr.write_line(f"criterion {crit:>2}: {'PASS' if ok else 'FAIL'}  {TITLES.get(crit, '')}")
        for name, passed, detail in checks:
            mark = "ok  " if passed else "FAIL"
            tr.write_line(f"    [{mark}] {name}: {detail}")
