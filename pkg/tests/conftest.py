from collections import defaultdict

import pytest

_RESULTS = defaultdict(list)

TITLES = {
    1: "closed form vs implicit root",
    2: "Coulomb / scalar / equal-mixing reductions",
    3: "shape invariance",
    4: "ladder eigenfunctions",
    5: "intertwining and (c, d) invariance",
    6: "ladder commutator",
    7: "finite-difference oracle agreement",
    8: "a^2 consistency",
    9: "CLI determinism and exit codes",
}


class AcceptanceLog:
    def record(self, criterion: int, ok: bool, detail: str) -> bool:
        _RESULTS[criterion].append((bool(ok), detail))
        return bool(ok)


@pytest.fixture
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(TITLES):
        entries = _RESULTS.get(k)
        if not entries:
            terminalreporter.write_line(f"[{k}] NOT RUN  {TITLES[k]}")
            continue
        ok = all(e[0] for e in entries)
        failed = "; ".join(d for good, d in entries if not good)
        tail = f"  ({failed})" if failed else ""
        terminalreporter.write_line(f"[{k}] {'PASS' if ok else 'FAIL'}  {TITLES[k]}{tail}")
