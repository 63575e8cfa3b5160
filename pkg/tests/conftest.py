import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="also run the desk-scale acceptance simulations",
    )
    parser.addoption(
        "--desk-seconds",
        type=float,
        default=10.0,
        help="time limit for a desk-scale run of 100000 steps, raise it on slow machines",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale simulation, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
