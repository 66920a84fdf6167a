"""Shared oracles and instance builders.

The oracles deliberately avoid the package's own Cholesky machinery:
det_cofactor is exact-by-construction recursion for tiny matrices, and
mi_by_logdet goes through LU-based slogdet, so agreement between a
package value and an oracle value is evidence, not circularity.
"""

import math

import numpy as np

from miplace import ObservationModel, build_covariance, random_spd


def det_cofactor(m) -> float:
    """Determinant by cofactor expansion along the first row.

    Exponential cost; intended as an independent oracle for n <= 6.
    """
    a = [[float(x) for x in row] for row in np.asarray(m)]
    n = len(a)
    if n == 1:
        return a[0][0]
    total = 0.0
    for col in range(n):
        minor = [row[:col] + row[col + 1 :] for row in a[1:]]
        total += ((-1.0) ** col) * a[0][col] * det_cofactor(minor)
    return total


def mi_by_logdet(entries, sigma2: float, indices) -> float:
    """Objective oracle: 0.5 * ln det(S_AA + sigma2 I) - (s/2) ln sigma2,
    with the determinant from LU-based slogdet."""
    idx = list(indices)
    if not idx:
        return 0.0
    entries = np.asarray(entries, dtype=np.float64)
    sub = entries[np.ix_(idx, idx)] + sigma2 * np.eye(len(idx))
    sign, logabs = np.linalg.slogdet(sub)
    assert sign > 0
    return 0.5 * (logabs - len(idx) * math.log(sigma2))


def spd_model(n: int, seed: int, sigma2: float = 1.0) -> ObservationModel:
    return ObservationModel(random_spd(n, seed=seed), sigma2)


def exchangeable_model(sigma2: float = 1.0) -> ObservationModel:
    """The 2-node desk instance with covariance [[2,1],[1,2]]."""
    cov = build_covariance(np.array([[2.0, 1.0], [1.0, 2.0]]))
    return ObservationModel(cov, sigma2)


_acceptance_verdicts = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    import test_acceptance

    text = test_acceptance.CRITERION_LINES.get(name)
    if text:
        verdict = "PASS" if report.passed else "FAIL"
        _acceptance_verdicts.append(f"{verdict} {text}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_verdicts:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_verdicts:
            terminalreporter.write_line(line)
