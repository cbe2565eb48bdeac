import pytest
from hypothesis import strategies as st

from brouwer.algebra import load_catalog
from brouwer.formula import BOTTOM, And, Impl, Or, Var


def formulas(variables=("p", "q", "r"), bottom=True, max_leaves=12):
    leaves = st.sampled_from([Var(v) for v in variables])
    if bottom:
        leaves = leaves | st.just(BOTTOM)
    return st.recursive(
        leaves,
        lambda kids: st.builds(And, kids, kids) | st.builds(Or, kids, kids)
        | st.builds(Impl, kids, kids),
        max_leaves=max_leaves,
    )


@pytest.fixture(scope="session")
def cat():
    return load_catalog()
