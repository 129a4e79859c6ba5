import re
import time
from collections import defaultdict

RUNTIME_BUDGET = 30.0
_CRITERION = re.compile(r"test_criterion_(\d+)_([a-z0-9_]+)")
_results: dict[int, list] = defaultdict(list)
_names: dict[int, str] = {}
_start = time.perf_counter()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        num = int(m.group(1))
        _names[num] = m.group(2).replace("_", " ")
        param = report.nodeid.split("[", 1)[1][:-1] if "[" in report.nodeid else ""
        _results[num].append((param, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    elapsed = time.perf_counter() - _start
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_results):
        runs = _results[num]
        failed = [p or "-" for p, outcome in runs if outcome != "passed"]
        note = ""
        ok = not failed
        if num == 10:
            # Criterion 10 also bounds the runtime of the whole session.
            note = f" (session {elapsed:.1f}s, budget {RUNTIME_BUDGET:.0f}s)"
            ok = ok and elapsed < RUNTIME_BUDGET
        status = "PASS" if ok else "FAIL"
        detail = f"  failing: {', '.join(failed)}" if failed else ""
        tr.write_line(f"{status} criterion {num:2d}: {_names[num]} [{len(runs) - len(failed)}/{len(runs)}]{note}{detail}")
