"""Hypothesis strategies shared by the tests."""

from hypothesis import strategies as st

from wonderful.space import FALSE, POINT, TRUE, UNKNOWN, atom, product, proj_bundle

tristates = st.sampled_from([TRUE, FALSE, UNKNOWN])


def spaces(max_leaves=6):
    leaf = st.one_of(
        st.just(POINT),
        st.builds(lambda d, o, h: atom(f"A{d}", d, o, h), st.integers(1, 3), tristates, tristates),
    )

    def extend(children):
        return st.one_of(
            st.builds(product, children, children),
            st.builds(proj_bundle, children, st.integers(1, 3)),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)
