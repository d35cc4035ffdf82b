"""The ten acceptance criteria, each printed as one PASS/FAIL line."""

import pytest

from relpres.selftest import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, *_ in CRITERIA], ids=[name.replace(" ", "_") for _, name, *_ in CRITERIA])
def test_acceptance_criterion(number, capsys):
    result = run_criterion(number, seed=0)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
