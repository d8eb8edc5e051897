import sympy
from hypothesis import given, settings, strategies as st

from lfed.image import (
    IN,
    NOT_FOUND,
    NOT_IN,
    Echelon,
    compare_images,
    default_slack,
    ideal_slice_test,
    image_basis,
    member,
)
from lfed.maps import Derivation, EDerivation, Endomorphism, PolyAutomorphism, conjugate
from lfed.polyring import PolyRing, grlex_key, monomials_of_degree
from lfed.scalar import field

from conftest import polynomials

R2 = PolyRing(2)
R3 = PolyRing(3)
Z3 = field(3)
R2z = PolyRing(2, Z3)


def jordan(ring, lam):
    x1, x2 = ring.gens()[:2]
    return EDerivation.from_images(ring, [x1.scalar_mul(lam) + x2, x2.scalar_mul(lam)])


def linear_endo(ring, A):
    return Endomorphism.from_matrix(ring, A)


def integer_matrices(n):
    return st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)


def dense_rank(mapping, e):
    """Rank and nullity of the map on V_e from a sympy matrix (rational maps only)."""
    ring = mapping.ring
    mons = list(monomials_of_degree(ring.n, e))
    index = {m: i for i, m in enumerate(mons)}
    M = sympy.zeros(len(mons), len(mons))
    for j, m in enumerate(mons):
        for mm, c in mapping(ring.monomial(m)).terms.items():
            M[index[mm], j] = sympy.Rational(int(c.coords[0].numerator), int(c.coords[0].denominator))
    r = M.rank()
    return r, len(M.nullspace())


# -- examples --------------------------------------------------------------------

def test_zero_map_has_empty_image():
    delta = EDerivation(Endomorphism.identity(R2))
    basis = image_basis(delta, 4)
    assert all(basis.dimension(e) == 0 for e in range(5))


def test_jordan_two_degree_one_full():
    basis = image_basis(jordan(R2, 2), 1)
    x1, x2 = R2.gens()
    assert basis.bases[1] == [x1, x2]
    assert basis.dimension(0) == 0


def test_zeta3_degree_three_misses_cube():
    delta = jordan(R2z, Z3.z)
    basis = image_basis(delta, 3)
    assert basis.dimension(3) == 3
    x1, x2 = R2z.gens()
    assert member(delta, x1 ** 3).status == NOT_IN
    v = member(delta, x1 ** 2 * x2)
    assert v.status == IN and delta(v.witness) == x1 ** 2 * x2
    v = member(delta, R2z.zero)
    assert v.status == IN and v.witness == R2z.zero


def test_ideal_slice_examples():
    x1, x2 = R2.gens()
    assert ideal_slice_test(jordan(R2, 2), [x1, x2], 6).passed
    affine = EDerivation.from_images(R2, [x1 + x2 + 1, x2])
    rep = ideal_slice_test(affine, [x2 + 1], 5)
    assert rep.passed and not rep.exact
    zero = EDerivation(Endomorphism.identity(R2))
    rep = ideal_slice_test(zero, [x1], 3)
    assert not rep.passed and rep.first_failure == 1


def test_compare_examples():
    R = PolyRing(3)
    x1, x2, x3 = R.gens()
    delta = EDerivation.from_images(R, [x1 + x2, x2 + x3, x3])
    half = R.field.rational(1, 2)
    D = Derivation(R, [x2 - x3.scalar_mul(half), x3, R.zero])
    assert compare_images(delta, delta, 3).passed
    assert compare_images(delta, D, 5).passed
    rep = compare_images(delta, EDerivation(Endomorphism.identity(R)), 3)
    assert not rep.passed and rep.first_failure == 1


def test_affine_verdict_is_three_valued():
    x1, x2 = R2.gens()
    delta = EDerivation.from_images(R2, [x1 + x2 ** 2, x2])
    v = member(delta, x1 ** 2, d=2)
    assert v.status in (IN, NOT_FOUND)
    assert default_slack(delta) == 4
    assert default_slack(jordan(R2z, Z3.z)) == 12


# -- properties ------------------------------------------------------------------

@settings(max_examples=100)
@given(integer_matrices(3), st.integers(1, 3))
def test_rank_nullity_against_dense_oracle(A, e):
    delta = EDerivation(linear_endo(R3, A))
    basis = image_basis(delta, e)
    rank, nullity = dense_rank(delta, e)
    assert basis.dimension(e) == rank
    assert rank + nullity == len(list(monomials_of_degree(3, e)))


@settings(max_examples=100)
@given(integer_matrices(2), polynomials(R2, max_degree=4, max_terms=4))
def test_image_of_p_is_member(A, p):
    delta = EDerivation(linear_endo(R2, A))
    q = delta(p)
    v = member(delta, q, d=max(p.degree(), 0))
    assert v.status == IN
    assert delta(v.witness) == q


@given(integer_matrices(2), st.integers(1, 4))
def test_bases_are_reduced_echelon(A, d):
    delta = EDerivation(linear_endo(R2, A))
    basis = image_basis(delta, d)
    for e in range(d + 1):
        rows = basis.bases[e]
        pivots = [max(r.terms, key=grlex_key) for r in rows]
        assert [grlex_key(p) for p in pivots] == sorted((grlex_key(p) for p in pivots), reverse=True)
        for r, p in zip(rows, pivots):
            assert r.coefficient(p) == 1
            for other in rows:
                if other is not r:
                    assert not other.coefficient(p)


@given(st.lists(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-3, 3),
                                max_size=4), max_size=5), st.randoms())
def test_echelon_insertion_order_independent(vecs, rnd):
    K = field(1)
    vecs = [{m: K(c) for m, c in v.items() if c} for v in vecs]
    a, b = Echelon(track=False), Echelon(track=False)
    for v in vecs:
        a.add(v)
    shuffled = list(vecs)
    rnd.shuffle(shuffled)
    for v in shuffled:
        b.add(v)
    assert a.rows == b.rows
    for p, row in a.rows.items():
        residue, _ = a.reduce(row)
        assert not residue


@given(integer_matrices(2), st.sampled_from([[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 0], [1, 1]]]),
       st.integers(1, 3))
def test_conjugation_covariance(A, T, e):
    delta = EDerivation(linear_endo(R2, A))
    sigma = PolyAutomorphism.linear(R2, T)
    conj = conjugate(delta, sigma)
    mapped = Echelon(track=False)
    for row in image_basis(delta, e).bases[e]:
        mapped.add({m: c for m, c in sigma.inverse(row).terms.items()})
    direct = Echelon(track=False)
    for row in image_basis(conj, e).bases[e]:
        direct.add(dict(row.terms))
    assert mapped.rows == direct.rows


@given(integer_matrices(2))
def test_derivation_rank_nullity(A):
    x1, x2 = R2.gens()
    D = Derivation(R2, [x1 * A[0][0] + x2 * A[0][1], x1 * A[1][0] + x2 * A[1][1]])
    basis = image_basis(D, 3)
    for e in range(4):
        rank, nullity = dense_rank(D, e)
        assert basis.dimension(e) == rank
