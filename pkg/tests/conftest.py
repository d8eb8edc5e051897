import pytest
from hypothesis import HealthCheck, settings, strategies as st

from lfed.polyring import PolyRing
from lfed.scalar import field

settings.register_profile(
    "lfed",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("lfed")

CONDUCTORS = (1, 3, 4, 5, 8, 12)


def rationals(max_num=9, max_den=5):
    return st.builds(lambda p, q: (p, q), st.integers(-max_num, max_num), st.integers(1, max_den))


@st.composite
def scalars(draw, N=None, nonzero=False):
    N = N if N is not None else draw(st.sampled_from(CONDUCTORS))
    K = field(N)
    coords = []
    for _ in range(K.degree):
        p, q = draw(rationals())
        coords.append(K.rational(p, q))
    out = K.zero
    z = K.one
    for c in coords:
        out = out + c * z
        z = z * K.z
    if nonzero and out.is_zero():
        out = K.one
    return out


@st.composite
def polynomials(draw, ring, max_degree=3, max_terms=4, rational=False):
    K = ring.field
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [0] * ring.n
        budget = draw(st.integers(0, max_degree))
        for _ in range(budget):
            exps[draw(st.integers(0, ring.n - 1))] += 1
        if rational or K.degree == 1:
            p, q = draw(rationals())
            c = K.rational(p, q)
        else:
            c = draw(scalars(K.N))
        terms[tuple(exps)] = terms.get(tuple(exps), K.zero) + c
    return ring.from_terms(terms.items())


@pytest.fixture
def zeta3_ring():
    return PolyRing(2, field(3))


def dense_in_image(mapping, q):
    """Independent membership oracle for degree-preserving maps and homogeneous q.

    Builds the matrix of the map on V_e with sympy over Q(zeta_N) and
    compares ranks with and without q appended.
    """
    import sympy
    from sympy.polys.matrices import DomainMatrix

    from lfed.polyring import monomials_of_degree

    ring = mapping.ring
    N = ring.field.N
    dom = sympy.QQ.algebraic_field(sympy.exp(2 * sympy.pi * sympy.I / N)) if ring.field.degree > 1 else sympy.QQ
    gen = dom.from_sympy(sympy.exp(2 * sympy.pi * sympy.I / N)) if ring.field.degree > 1 else None

    def conv(c):
        out = dom.zero
        for i, x in enumerate(c.coords):
            term = dom.convert(sympy.Rational(int(x.numerator), int(x.denominator)))
            out += term * gen ** i if gen is not None else term
        return out

    e = q.degree()
    mons = list(monomials_of_degree(ring.n, e))
    index = {m: i for i, m in enumerate(mons)}
    cols = []
    for m in mons:
        col = [dom.zero] * len(mons)
        for mm, c in mapping(ring.monomial(m)).terms.items():
            col[index[mm]] = conv(c)
        cols.append(col)
    qcol = [dom.zero] * len(mons)
    for mm, c in q.terms.items():
        qcol[index[mm]] = conv(c)

    def rank(columns):
        rows = [[col[i] for col in columns] for i in range(len(mons))]
        return DomainMatrix(rows, (len(mons), len(columns)), dom).rank()

    return rank(cols) == rank(cols + [qcol])
