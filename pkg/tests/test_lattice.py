import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from latticeiv import linalg
from latticeiv.errors import LatticeError
from latticeiv.k3 import k3_context
from latticeiv.lattice import (
    IntLattice,
    LatticeMap,
    determinant,
    direct_sum,
    discriminant_group,
    eichler_transvection,
    identity_map,
    inner,
    is_isometry,
    is_primitive,
    is_saturated,
    isotropic_quotient,
    k3_lattice,
    k3_vector,
    make_standard,
    orthogonal_complement,
    parse_lattice_name,
    plane_transvection,
    rescale,
    saturate,
    signature,
    signature_of_matrix,
    small_rank_isometric,
    sublattice,
    zero_lattice,
)

from strategies import symmetric_matrices

U = make_standard("U")
UU = direct_sum(U, U)


def sympy_signature(gram):
    """Inertia via Descartes' rule on the characteristic polynomial.

    Exact for symmetric matrices, whose eigenvalues are all real.
    """
    x = sympy.symbols("x")
    coeffs = sympy.Poly(sympy.Matrix(gram).charpoly(x).as_expr(), x).all_coeffs()
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    null = len(gram) - (len(coeffs) - 1)

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(a != b for a, b in zip(signs, signs[1:]))

    pos = changes(coeffs)
    deg = len(coeffs) - 1
    neg = changes([c * (-1) ** (deg - i) for i, c in enumerate(coeffs)])
    return pos, neg, null


class TestStandard:
    def test_u(self):
        assert U.gram == ((0, 1), (1, 0))

    def test_i_rank_one(self):
        assert make_standard("I", 2 - 2 * 4).gram == ((-6,),)

    def test_e8_negative(self):
        e8 = make_standard("E", 8, -1)
        assert e8.rank == 8 and determinant(e8) == 1
        assert signature(e8).as_tuple() == (0, 8, 0)

    def test_bad_parameters(self):
        with pytest.raises(LatticeError):
            make_standard("E", 9)
        with pytest.raises(LatticeError):
            make_standard("I", 0)
        with pytest.raises(LatticeError):
            make_standard("Leech")

    def test_bad_grams(self):
        with pytest.raises(LatticeError):
            IntLattice([[1, 0], [0, 2]])
        with pytest.raises(LatticeError):
            IntLattice([[0, 1], [2, 0]])
        assert IntLattice([[1]], even=False).rank == 1

    def test_parse_names(self):
        assert parse_lattice_name("U(2)").gram == ((0, 2), (2, 0))
        assert parse_lattice_name("U+A1(-1)").gram == ((0, 1, 0), (1, 0, 0), (0, 0, -2))
        assert parse_lattice_name("K3").rank == 22
        with pytest.raises(LatticeError):
            parse_lattice_name("Z7")


class TestSumsAndScaling:
    def test_sum_shapes(self):
        assert UU.rank == 4 and UU.gram[2][3] == 1 and UU.gram[0][2] == 0
        assert k3_lattice().rank == 22
        assert direct_sum(U, zero_lattice()).gram == U.gram

    def test_rescale(self):
        assert rescale(U, 2).gram == ((0, 2), (2, 0))
        e8 = make_standard("E", 8)
        assert rescale(e8, -1).gram == make_standard("E", 8, -1).gram
        assert rescale(U, 1).gram == U.gram
        with pytest.raises(LatticeError):
            rescale(U, 0)

    @given(symmetric_matrices(n=st.integers(1, 3)), symmetric_matrices(n=st.integers(1, 3)))
    def test_det_multiplicative(self, a, b):
        A, B = IntLattice(a, even=False), IntLattice(b, even=False)
        assert determinant(direct_sum(A, B)) == determinant(A) * determinant(B)


class TestInvariants:
    def test_signatures(self):
        assert signature(U).as_tuple() == (1, 1, 0)
        assert signature(k3_lattice()).as_tuple() == sympy_signature(k3_lattice().gram) == (3, 19, 0)
        for g in (2, 5):
            assert signature(k3_context(g).lambda_g).as_tuple() == (2, 19, 0)

    def test_determinants(self):
        assert determinant(U) == -1
        assert determinant(k3_context(4).lambda_g) == -6
        assert determinant(zero_lattice()) == 1

    @given(symmetric_matrices(n=st.integers(1, 5)))
    def test_signature_matches_eigenvalues(self, m):
        s = signature_of_matrix(m)
        assert (s.positive, s.negative, s.null) == sympy_signature(m)
        assert s.positive + s.negative + s.null == len(m)
        if s.null == 0:
            assert (linalg.det(m) > 0) == (s.negative % 2 == 0)

    def test_discriminant_examples(self):
        assert discriminant_group(U).divisors == ()
        assert discriminant_group(make_standard("I", -6)).divisors == (6,)
        ctx = k3_context(3)
        f = k3_vector(f3=2, f2=1)
        span = sublattice(ctx.lattice, [ctx.h, f])
        assert discriminant_group(span).divisors == (2, 2)
        with pytest.raises(LatticeError):
            discriminant_group(IntLattice([[0, 0], [0, 0]]))

    @given(symmetric_matrices(n=st.integers(1, 5), entries=st.integers(-6, 6)))
    def test_discriminant_order_is_abs_det(self, m):
        L = IntLattice(m, even=False)
        if determinant(L) == 0:
            return
        assert discriminant_group(L).order == abs(determinant(L))

    def test_inner_examples(self):
        assert inner(U, (1, 0), (0, 1)) == 1
        ctx = k3_context(5)
        assert inner(ctx.lattice, ctx.h, ctx.h) == 8
        assert inner(ctx.lattice, ctx.h, k3_vector(f3=2, f2=1)) == 2
        with pytest.raises(LatticeError):
            inner(U, (1, 0, 0), (1, 0))


class TestSublattices:
    def test_complement_of_h(self):
        ctx = k3_context(3)
        basis = orthogonal_complement(ctx.lattice, [ctx.h])
        assert len(basis) == 21
        assert signature(sublattice(ctx.lattice, basis)).as_tuple() == (2, 19, 0)

    def test_complement_trivial_cases(self):
        assert len(orthogonal_complement(U, [])) == 2
        assert orthogonal_complement(U, [(1, 0)]) == [(1, 0)]

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=2))
    def test_complement_is_primitive(self, vs):
        basis = orthogonal_complement(UU, vs)
        assert saturate(UU, basis) == linalg.lattice_basis(basis) or not basis

    def test_saturate_examples(self):
        assert saturate(U, [(2, 0)]) == [(1, 0)]
        ctx = k3_context(2)
        hull = saturate(ctx.lattice, [ctx.h, k3_vector(e3=1, f3=-1)])
        assert linalg.solve(linalg.transpose([list(b) for b in hull]), list(k3_vector(e3=1))) is not None
        assert all(x.denominator == 1 for x in linalg.solve(linalg.transpose([list(b) for b in hull]), list(k3_vector(e3=1))))
        assert not is_saturated(ctx.lattice, [ctx.h, k3_vector(e3=1, f3=-1)])
        assert saturate(U, [(1, 0), (0, 1)]) == [(1, 0), (0, 1)]

    def test_primitive(self):
        ctx = k3_context(4)
        assert is_primitive(ctx.lattice, ctx.h)
        assert not is_primitive(ctx.lattice, k3_vector(f3=2))
        assert is_primitive(ctx.lattice, k3_vector(f2=1, f3=1))
        with pytest.raises(LatticeError):
            is_primitive(U, (0, 0))

    def test_isotropic_quotient_u_plus_a1(self):
        L = direct_sum(U, make_standard("A", 1, -1))
        q = isotropic_quotient(L, [(1, 0, 0)])
        assert q.lattice.gram == ((-2,),)
        assert q.coordinates((5, 0, 1)) == [1] or q.coordinates((5, 0, 1)) == [-1]
        with pytest.raises(LatticeError):
            isotropic_quotient(L, [(1, 1, 0)])


class TestTransvections:
    def test_eichler_example(self):
        m = eichler_transvection(UU, (1, 0, 0, 0), (0, 0, 1, 0))
        assert m((0, 1, 0, 0)) == (0, 1, 1, 0)
        assert is_isometry(m) and m.determinant() == 1

    def test_eichler_zero_f_is_identity(self):
        assert eichler_transvection(UU, (1, 0, 0, 0), (0, 0, 0, 0)).matrix == identity_map(UU).matrix

    def test_eichler_preconditions(self):
        with pytest.raises(LatticeError):
            eichler_transvection(UU, (1, 1, 0, 0), (0, 0, 1, 0))
        with pytest.raises(LatticeError):
            eichler_transvection(UU, (1, 0, 0, 0), (0, 1, 0, 0))
        L = direct_sum(U, IntLattice([[1]], even=False))
        with pytest.raises(LatticeError):
            eichler_transvection(L, (1, 0, 0), (0, 0, 1))

    def test_plane_transvection(self):
        e, f = (1, 0, 0, 0), (0, 0, 1, 0)
        m = plane_transvection(UU, e, f)
        assert is_isometry(m) and m(e) == e and m(f) == f
        assert plane_transvection(UU, e, e).matrix == identity_map(UU).matrix
        back = plane_transvection(UU, f, e)
        assert back.compose(m).matrix == identity_map(UU).matrix
        with pytest.raises(LatticeError):
            plane_transvection(UU, e, (0, 1, 0, 0))

    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.integers(-3, 3))
    def test_random_transvections_are_isometries(self, w, a):
        # L = U + U + A2(-1); e isotropic in the first U, f any vector orthogonal to it
        L = direct_sum(U, U, make_standard("A", 2, -1))
        e = (1, 0, 0, 0, 0, 0)
        f = (a, 0) + tuple(w[2:6])
        m = eichler_transvection(L, e, f)
        assert is_isometry(m) and m.determinant() == 1


class TestIsometrySearch:
    def test_triangle_gram(self):
        M = IntLattice([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        target = direct_sum(U, make_standard("I", -2))
        w = small_rank_isometric(M, target, 3)
        assert w is not None and is_isometry(w)

    def test_self_and_rejections(self):
        assert small_rank_isometric(U, U, 1) is not None
        assert small_rank_isometric(U, rescale(U, 2), 3) is None
        big = make_standard("A", 5)
        with pytest.raises(LatticeError):
            small_rank_isometric(big, big, 1)

    def test_is_isometry_examples(self):
        assert is_isometry(identity_map(U))
        assert not is_isometry(LatticeMap([[2, 0], [0, 2]], U, U))
        with pytest.raises(LatticeError):
            is_isometry(LatticeMap([[1, 0]], U, U))
