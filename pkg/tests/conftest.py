import numpy as np
import pytest

from hermitia import exterior
from hermitia.lie_hermitian import catalog


def d2_max(S):
    """Largest coefficient of d(d phi_i) or d(d phibar_i) over all basis covectors."""
    basis = exterior.basis_differentials(S)
    return max((exterior.differential(f, S, basis).max_abs() for f in basis), default=0.0)


@pytest.fixture
def iwasawa():
    return catalog("iwasawa")


@pytest.fixture
def kt():
    return catalog("kodaira_thurston")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per criterion

_ACCEPTANCE = pytest.StashKey[list]()


class _Criterion:
    def __init__(self, lines, number, title):
        self.lines, self.number, self.title = lines, number, title
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        line = f"[{status}] criterion {self.number}: {self.title}" + (f" ({self.detail})" if self.detail else "")
        if exc_type is not None and exc is not None:
            line += f" -- {exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        self.lines.append(line)
        print(line)
        return False


@pytest.fixture
def criterion(request):
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])
    return lambda number, title: _Criterion(lines, number, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
