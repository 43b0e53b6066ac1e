from itertools import combinations, product

import numpy as np
import pytest


def brute_shift_outputs(x, K1, K2, P=None):
    """Every word of the output length that satisfies the three shift-channel conditions."""
    x = tuple(x)
    P = max(x + (1,)) if P is None else P
    n_out = len(x) + K2 - K1
    xi = [i + 1 for i, s in enumerate(x) if s]
    xt = [s for s in x if s]
    found = set()
    for z in product(range(P + 1), repeat=n_out):
        zt = [s for s in z if s]
        if zt != xt:
            continue
        # output index t (0-based) is cell t + 1 + K1
        zj = [t + 1 + K1 for t, s in enumerate(z) if s]
        if all(K1 <= j - i <= K2 for i, j in zip(xi, zj)):
            found.add(z)
    return found


def brute_queue_outputs(x, K):
    """Every output allowed by the three queue-channel conditions, lengths n..(K+1)n."""
    x = tuple(x)
    n = len(x)
    xi = [i + 1 for i, s in enumerate(x) if s]
    xt = [s for s in x if s]
    found = set()
    for n_out in range(n, (K + 1) * max(n, 1) + 1):
        for js in combinations(range(1, n_out + 1), len(xt)):
            if n_out > n and (not js or js[-1] != n_out):
                continue
            prev = 0
            ok = True
            for i, j in zip(xi, js):
                if not 0 <= j - max(i, prev + 1) <= K:
                    ok = False
                    break
                prev = j
            if ok:
                z = [0] * n_out
                for j, t in zip(js, xt):
                    z[j - 1] = t
                found.add(tuple(z))
    return found


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance summary ----------------------------------------------------------------

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or report.failed or report.skipped:
        prev = _criteria.get(number)
        passed = report.passed and (prev is None or prev[1])
        if report.when == "call" or not passed:
            _criteria[number] = (title, passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed, duration = _criteria[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {title}  ({duration:.2f} s)")
