# Copyright hweno-solver contributors. All Rights Reserved.

import pytest


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--integ",
        action="store_true",
        default=False,
        help="run the accuracy and robustness studies marked 'integ'",
    )
    parser.addoption(
        "--full-scale",
        action="store_true",
        default=False,
        help="also run the table points beyond desk scale, marked 'full_scale' (hours)",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list) -> None:
    skips = []
    if not config.getoption("--integ"):
        skips.append(("integ", pytest.mark.skip(reason="needs --integ")))
    if not config.getoption("--full-scale"):
        skips.append(("full_scale", pytest.mark.skip(reason="needs --full-scale")))
    for item in items:
        for keyword, marker in skips:
            if keyword in item.keywords:
                item.add_marker(marker)
