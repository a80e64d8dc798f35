from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from toystab.algebra import CheckVector, PauliObservable, ToyObservable


@st.composite
def check_vectors(draw, n=None, max_n=4):
    n = n if n is not None else draw(st.integers(1, max_n))
    return CheckVector(n, draw(st.integers(0, (1 << n) - 1)), draw(st.integers(0, (1 << n) - 1)))


@st.composite
def toy_observables(draw, n=None, max_n=4):
    return ToyObservable(draw(check_vectors(n, max_n)), draw(st.sampled_from([1, -1])))


@st.composite
def pauli_observables(draw, n=None, max_n=4):
    return PauliObservable(draw(check_vectors(n, max_n)), draw(st.integers(0, 3)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Dense matrices as an independent reference for the Pauli algebra.
_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(g: PauliObservable) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for letter in g.cv.letters():
        m = np.kron(m, _PAULI[letter])
    return (1j) ** g.phase_ipow * m


# Single-system toy diagonals over ontic labels 1..4.
_TOY_DIAG = {
    "I": np.array([1, 1, 1, 1]),
    "X": np.array([1, -1, 1, -1]),
    "Y": np.array([1, -1, -1, 1]),
    "Z": np.array([1, 1, -1, -1]),
}


def toy_diagonal(g: ToyObservable) -> np.ndarray:
    """Diagonal over ontic indices (system 1 is the least significant digit)."""
    d = np.ones(1, dtype=int)
    for letter in g.cv.letters():
        d = np.kron(_TOY_DIAG[letter], d)
    return g.sign * d


# One summary line per acceptance criterion, taken from the test outcome.
_CRITERIA: dict[int, dict] = {}


def _criterion_number(name: str) -> int | None:
    parts = name.split("_")
    if len(parts) > 2 and parts[:2] == ["test", "criterion"] and parts[2].isdigit():
        return int(parts[2])
    return None


@pytest.fixture
def detail(request):
    """Call with a short string describing what was measured."""
    number = _criterion_number(request.node.name)

    def note(text: str) -> None:
        _CRITERIA.setdefault(number, {})["detail"] = text
        print(f"criterion {number}: {text}")

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    number = _criterion_number(item.name)
    if number is None or rep.when != "call":
        return
    _CRITERIA.setdefault(number, {})["ok"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        info = _CRITERIA[number]
        status = "PASS" if info.get("ok") else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {info.get('detail', '')}")
