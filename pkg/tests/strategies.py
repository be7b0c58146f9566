from fractions import Fraction

from hypothesis import strategies as st

from epwkit.fields import GF, QQ

FIELDS = [GF(3), GF(5), GF(7), GF(11), GF(13), GF(49), QQ]
fields = st.sampled_from(FIELDS)
prime_fields = st.sampled_from([F for F in FIELDS if F.kind == "prime"])


def elements(F):
    if F.kind == "prime":
        return st.integers(0, F.p - 1)
    if F.kind == "prime_square":
        p = F.p
        return st.tuples(st.integers(0, p - 1), st.integers(0, p - 1))
    return st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def vectors(F, n):
    return st.lists(elements(F), min_size=n, max_size=n)


def nonzero_vectors(F, n):
    return vectors(F, n).filter(lambda v: any(not F.is_zero(x) for x in v))


def matrices(F, r, c):
    return st.lists(vectors(F, c), min_size=r, max_size=r)
