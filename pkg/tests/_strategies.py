from hypothesis import strategies as st

from dillonlab.vbf import from_truth_table


def tables(max_n=6, max_m=8, min_n=1):
    """Random (n, m)-functions as truth tables."""
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.integers(1, max_m).flatmap(
            lambda m: st.lists(st.integers(0, (1 << m) - 1), min_size=1 << n, max_size=1 << n).map(
                lambda t: from_truth_table(n, m, t))))
