import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA_DIR = Path(__file__).parent / "data"
MNIST_IMAGES = DATA_DIR / "mnist4k-images-idx3-ubyte.gz"
MNIST_LABELS = DATA_DIR / "mnist4k-labels-idx1-ubyte.gz"

_acceptance = {}


@pytest.fixture(scope="session")
def mnist_tasks():
    from spiral.data import load_mnist, make_binary_tasks

    return make_binary_tasks(load_mnist(MNIST_IMAGES, MNIST_LABELS))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = "PASS" if report.passed else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]:7s} {name}")
