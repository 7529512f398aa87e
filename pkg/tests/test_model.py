import random
from fractions import Fraction

import pytest

from qcframe.gauss import gr
from qcframe.model import (Dual, G1Element, LieCoord, TemplateError,
                           commutes_with_j2, g1_compose, g1_inverse,
                           g1_lie_matrix, g1_to_matrix, grading_check,
                           jacobi_residual, maurer_cartan_check,
                           parabolic_member, preserves_pairing, random_coord,
                           random_g1, random_spn, validate_spn)
from qcframe.tensors import (IndexedTensor, StandardConstants, j_average,
                             random_tensor, slots, symmetrize)
from qcframe import coframe

I = gr(0, 1)


def _matmul(A, B):
    size = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(size)), gr(0))
             for j in range(size)] for i in range(size)]


def test_template_eta1_entry(model_for):
    m = model_for(1)
    M = m.to_matrix(LieCoord(1, {("eta", 1): gr(2)}))
    assert M[(m.w1, m.v1)] == I  # (i/2) * 2
    assert M[(m.w2, m.v2)] == -I
    assert len(M) == 2


def test_zero_round_trip(model_for):
    m = model_for(1)
    assert m.to_matrix(LieCoord(1)) == {}
    assert m.from_matrix({}).is_zero()


@pytest.mark.parametrize("n", [1, 2])
def test_matrix_round_trip_random(model_for, n):
    m = model_for(n)
    rng = random.Random(n)
    for _ in range(100):
        x = random_coord(rng, m)
        assert m.from_matrix(m.to_matrix(x)) == x


def test_from_matrix_rejects_off_template(model_for):
    m = model_for(1)
    M = m.to_matrix(LieCoord(1, {("eta", 1): gr(1)}))
    M[(0, 0)] = gr(7)  # breaks the phi0/phi1 block relations
    with pytest.raises(TemplateError):
        m.from_matrix(M)


def test_bracket_self_and_g_minus2_abelian(model_for):
    m = model_for(1)
    rng = random.Random(9)
    x = random_coord(rng, m)
    assert m.bracket(x, x).is_zero()
    e2, e3 = m.basis(("eta", 2)), m.basis(("eta", 3))
    assert m.bracket(e2, e3).is_zero()


def test_grading_additivity(model_for):
    assert grading_check(model_for(1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_jacobi_random(model_for, n):
    m = model_for(n)
    rng = random.Random(n + 100)
    for _ in range(10):
        a, b, c = (random_coord(rng, m) for _ in range(3))
        assert jacobi_residual(m, a, b, c).is_zero()


def test_killing_closed_examples(model_for):
    """The closed-form expression reproduces its own quoted values."""
    m = model_for(1)
    a = m.basis(("eta", 1))
    b = m.basis(("psi", 1))
    assert m.killing_closed(a, b) == gr(-10)  # -(4n+6) at n=1
    assert m.killing_closed(a, m.basis(("eta", 2))).is_zero()
    assert m.killing_closed(a, a).is_zero()


def test_killing_trace_symmetric_and_ad_invariant(model_for):
    m = model_for(1)
    rng = random.Random(4)
    for _ in range(10):
        a, b, x = (random_coord(rng, m) for _ in range(3))
        assert m.killing_trace(a, b) == m.killing_trace(b, a)
        lhs = m.killing_trace(m.bracket(x, a), b) + m.killing_trace(a, m.bracket(x, b))
        assert lhs.is_zero()


def test_killing_gram_nondegenerate(model_for):
    m = model_for(1)
    gram = m.killing_gram()
    # every basis vector pairs nontrivially with something
    for i in range(m.dim):
        assert any((i, j) in gram for j in range(m.dim))


def test_calibration_documents_discrepancies(model_for):
    m = model_for(1)
    cal = m.calibration()
    assert cal["blocks"]["phi0_phi0"]["match"] is True
    # the printed eta-psi, phi_s, theta-phi and Gamma coefficients all
    # differ from the ad-trace, which is uniformly -(2n+6)-proportional
    assert cal["blocks"]["eta_psi"]["match"] is False
    assert cal["blocks"]["eta_psi"]["trace_coefficient"] == "-8"
    assert cal["blocks"]["Gam_Gam"]["trace_coefficient"] == "-8"
    assert cal["blocks"]["theta_phiU"]["trace_coefficient"] == "-32"
    assert cal["full_match"] is False
    assert cal["gram_entry_mismatches"] > 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_trace_killing_uniform_coefficients(model_for, n):
    """The true Killing form has every block proportional to 2n+6."""
    m = model_for(n)
    c = 2 * n + 6
    assert m.killing_trace(m.basis(("eta", 1)), m.basis(("psi", 1))) == gr(-c)
    assert m.killing_trace(m.basis(("phi0",)), m.basis(("phi0",))) == gr(c)
    assert m.killing_trace(m.basis(("phi", 2)), m.basis(("phi", 2))) == gr(-c)
    assert m.killing_trace(m.basis(("Gam", 1, 1)),
                           m.basis(("Gam", 1 + n, 1 + n))) == gr(-c)


def test_dual_frames_duality(model_for):
    m = model_for(1)
    fr = m.dual_frames()
    for s in range(3):
        for t in range(3):
            want = gr(1 if s == t else 0)
            assert m.killing_trace(fr["E"][s], fr["Ehat"][t]) == want
    for a in range(2):
        for b in range(2):
            want = gr(1 if a == b else 0)
            assert m.killing_trace(fr["Z"][a], fr["Zhat"][b]) == want
            assert m.killing_trace(fr["Z"][a], fr["Zhatbar"][b]).is_zero()


def test_pairings_trace_vs_published(model_for):
    m = model_for(1)
    assert str(m.dual_frames()["psi_pairing"]) == "-1/8"
    assert str(m.dual_frames()["phi_pairing"]) == "-1/32"
    pf = m.dual_frames_published()
    assert str(pf["psi_pairing"]) == "-1/10"
    assert str(pf["phi_pairing"]) == "-1/36"


def test_killing_offdiag_dual_zero(model_for):
    m = model_for(1)
    fr = m.dual_frames()
    assert m.killing_trace(fr["E"][0], fr["Ehat"][1]).is_zero()


# -- G1 ---------------------------------------------------------------------


@pytest.fixture(scope="module")
def c1():
    return StandardConstants(1)


def test_g1_identity_neutral(c1):
    rng = random.Random(1)
    x = random_g1(rng, c1)
    e = G1Element.identity(1)
    assert g1_compose(x, e, c1) == x
    assert g1_compose(e, x, c1) == x


def test_g1_matrix_oracle(c1):
    rng = random.Random(2)
    for _ in range(25):
        x, y = random_g1(rng, c1), random_g1(rng, c1)
        assert g1_to_matrix(g1_compose(x, y, c1), c1) == \
            _matmul(g1_to_matrix(x, c1), g1_to_matrix(y, c1))


def test_g1_inverse_formula(c1):
    rng = random.Random(3)
    e = G1Element.identity(1)
    for _ in range(25):
        x = random_g1(rng, c1)
        xi = g1_inverse(x, c1)
        assert g1_compose(x, xi, c1) == e
        assert g1_compose(xi, x, c1) == e
        # the inverse U is the g-adjoint and the r-part is -U^{-1} r
        assert validate_spn(xi.U, c1)


def test_g1_associativity(c1):
    rng = random.Random(4)
    for _ in range(25):
        a, b, c = (random_g1(rng, c1) for _ in range(3))
        assert g1_compose(g1_compose(a, b, c1), c, c1) == \
            g1_compose(a, g1_compose(b, c, c1), c1)


def test_g1_rejects_non_spn(c1):
    U = [[gr(2), gr(0)], [gr(0), gr(1)]]
    with pytest.raises(ValueError):
        g1_to_matrix(G1Element(U, [gr(0)] * 2, [gr(0)] * 3), c1)


def test_g1_lie_rep_is_derivative(c1):
    """The algebra representation equals the exact dual-number
    derivative of the group representation along one-parameter
    families through the identity."""
    rng = random.Random(6)
    for _ in range(5):
        y = j_average(symmetrize(random_tensor(rng, 1, slots("ll"), 2)), c1)
        x_mat = [[gr(0)] * 2 for _ in range(2)]
        for (s, b), val in y.entries.items():
            for a in range(1, 3):
                coeff = c1.pi_up(a, s)
                if not coeff.is_zero():
                    x_mat[a - 1][b - 1] = x_mat[a - 1][b - 1] + coeff * val
        r0 = [gr(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(2)]
        lam0 = [gr(rng.randint(-2, 2)) for _ in range(3)]
        eps = Dual(gr(0), gr(1))
        U_eps = [[Dual.of(gr(1 if i == j else 0)) + eps * (2 * x_mat[i][j])
                  for j in range(2)] for i in range(2)]
        fam = G1Element(U_eps, [eps * v for v in r0], [eps * v for v in lam0])
        deriv = [[v.b for v in row]
                 for row in g1_to_matrix(fam, c1, check=False, ring=Dual.of)]
        gam = IndexedTensor(1, slots("ll"))
        for a in range(1, 3):
            for b in range(1, 3):
                acc = gr(0)
                for s in range(1, 3):
                    cp = c1.pi(a, s)
                    if not cp.is_zero():
                        acc = acc + cp * 2 * x_mat[s - 1][b - 1]
                gam.set((a, b), acc)
        rep = g1_lie_matrix(1, c1, gam, [-v for v in r0], [-v for v in lam0])
        assert deriv == rep


# -- parabolic ----------------------------------------------------------------


def test_parabolic_identity(c1):
    U = [[gr(1), gr(0)], [gr(0), gr(1)]]
    M = parabolic_member(gr(1), gr(0), U, [gr(0), gr(0)], [0, 0, 0], c1)
    size = len(M)
    for i in range(size):
        for j in range(size):
            assert M[i][j] == gr(1 if i == j else 0)


def test_parabolic_stabilizes_and_preserves(c1):
    rng = random.Random(12)
    U = random_spn(rng, c1)
    M = parabolic_member(gr(1, 1), gr(Fraction(-1, 2)), U,
                         [gr(1, -2), gr(Fraction(1, 3))], [2, -1, 5], c1)
    # v1, v2 map into span(v1, v2)
    for j in range(2):
        assert all(M[i][j].is_zero() for i in range(2, len(M)))
    assert preserves_pairing(M, c1)
    assert commutes_with_j2(M, c1)


def test_parabolic_rejects_singular_block(c1):
    U = [[gr(1), gr(0)], [gr(0), gr(1)]]
    with pytest.raises(ValueError):
        parabolic_member(gr(0), gr(0), U, [gr(0), gr(0)], [0, 0, 0], c1)


# -- Maurer-Cartan -------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2])
def test_maurer_cartan_consistency(n):
    rep = maurer_cartan_check(n)
    assert rep["mismatches"] == 0
    assert rep["basis_pairs"] > 0
