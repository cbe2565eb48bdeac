"""Exhaustive checks too slow for the default run; enable with BROUWER_SLOW=1."""
import os

import pytest

from brouwer.corpus import all_formulas
from brouwer.prover import prove_int, prove_positive
from brouwer.reduction import wajsberg_reduce

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(os.environ.get("BROUWER_SLOW") != "1", reason="set BROUWER_SLOW=1"),
]


def test_wajsberg_all_positive_formulas_up_to_five_connectives():
    bad = [f for f in all_formulas(5, ("p", "q"), bottom=False)
           if prove_int(f, countermodel=False).status
           is not prove_positive(wajsberg_reduce(f), countermodel=False).status]
    assert not bad


def test_wajsberg_all_formulas_up_to_four_connectives_with_bottom():
    bad = [f for f in all_formulas(4, ("p", "q"))
           if prove_int(f, countermodel=False).status
           is not prove_positive(wajsberg_reduce(f), countermodel=False).status]
    assert not bad
