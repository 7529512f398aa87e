import json
from fractions import Fraction

import pytest

from qcframe.gauss import gr
from qcframe.heisenberg import (ChartForm, Poly7, alpha_forms,
                                chart_certificates, chart_from_json,
                                heisenberg_qc, integrability_residuals,
                                lex_coframe, reeb_fields)


@pytest.fixture(scope="module")
def qc():
    q = heisenberg_qc()
    reeb_fields(q)
    return q


def test_chart_form_d_squared_zero():
    x1, x2 = Poly7.coord(0), Poly7.coord(1)
    f = ChartForm.func(x1 * x1 * x2)
    assert f.d().d().is_zero()
    w = ChartForm.dx(0).scale(x2) + ChartForm.dx(3).scale(x1 * x2)
    assert w.d().d().is_zero()


def test_chart_wedge_antisymmetry():
    a, b = ChartForm.dx(0), ChartForm.dx(5)
    assert ((a ^ b) + (b ^ a)).is_zero()
    assert (a ^ a).is_zero()


def test_common_kernel_rank4(qc):
    assert qc.check_kernel()
    assert len(qc.frame) == 4


def test_quaternion_relations(qc):
    assert qc.check_quaternion_relations()


def test_contact_compatibility(qc):
    assert qc.check_compatibility()


def test_reeb_fields_are_t_derivatives(qc):
    for t, xi in enumerate(qc.reeb):
        assert set(xi) == {4 + t}
        assert xi[4 + t] == Poly7.const(1)


def test_reeb_duality_and_antisymmetry(qc):
    detas = [eta.d() for eta in qc.etas]
    for s in range(3):
        for t in range(3):
            val = qc.etas[s].eval_fields(qc.reeb[t])
            assert val == Poly7.const(1 if s == t else 0)
            for X in qc.frame:
                anti = (detas[s].eval_fields(qc.reeb[t], X)
                        + detas[t].eval_fields(qc.reeb[s], X))
                assert anti.is_zero()


def test_alpha_forms_vanish(qc):
    alpha = alpha_forms(qc)
    assert all(f.is_zero() for f in alpha.values())
    # skewness holds by construction
    for s in range(3):
        for t in range(3):
            assert (alpha[(s, t)] + alpha[(t, s)]).is_zero()


def test_integrability_residuals(qc):
    assert all(r.is_zero() for r in integrability_residuals(qc))


def test_lex_equations_close(qc):
    lex = lex_coframe(qc)
    assert all(f.is_zero() for f in lex["phi"])
    assert all(r.is_zero() for r in lex["residuals"])


def test_lex_theta_reproduces_deta1(qc):
    """The 2i g_{a b̄} theta^a ^ theta^{b̄} term alone equals d(eta1)."""
    lex = lex_coframe(qc)
    th = lex["theta"]
    thb = [
        ChartForm.dx(0) - ChartForm.dx(1).scale(gr(0, 1)),
        ChartForm.dx(2) - ChartForm.dx(3).scale(gr(0, 1)),
    ]
    acc = ChartForm()
    for a in range(2):
        acc = acc + (th[a] ^ thb[a]).scale(gr(0, 2))
    assert (qc.etas[0].d() - acc).is_zero()


def test_lex_gauge_rescaling(qc):
    lex = lex_coframe(qc, mu_root=Fraction(2))
    assert lex["mu"] == Fraction(4)
    assert all(r.is_zero() for r in lex["residuals"])
    lex = lex_coframe(qc, mu_root=Fraction(1, 3))
    assert all(r.is_zero() for r in lex["residuals"])


def test_full_certificate_pipeline():
    cert = chart_certificates(heisenberg_qc())
    assert cert == {
        "name": "heisenberg",
        "common_kernel": True,
        "quaternion_relations": True,
        "compatibility": True,
        "reeb": True,
        "alpha_all_zero": True,
        "integrability_residual_zero": True,
    }


def test_chart_json_round_trip(qc):
    """Serialize the Heisenberg chart through the input format and run
    the pipeline on the parsed copy."""
    def form_entries(form):
        out = []
        for mono, poly in form.terms.items():
            assert len(mono) == 1
            for expo, c in poly.terms.items():
                out.append([mono[0], str(c.re), str(c.im), list(expo)])
        return out

    def field_entries(v):
        out = []
        for ci, poly in v.items():
            for expo, c in poly.terms.items():
                out.append([ci, str(c.re), str(c.im), list(expo)])
        return out

    doc = {
        "name": "heisenberg-copy",
        "etas": [form_entries(eta) for eta in qc.etas],
        "frame": [field_entries(X) for X in qc.frame],
        "g": [[str(v) for v in row] for row in qc.g],
        "I": qc.I_mats,
    }
    qc2 = chart_from_json(json.loads(json.dumps(doc)))
    cert = chart_certificates(qc2)
    assert cert["common_kernel"] and cert["compatibility"]
    assert cert["alpha_all_zero"] and cert["integrability_residual_zero"]


def test_lex_rejects_non_flat_chart(qc):
    other = heisenberg_qc()
    other.name = "custom"
    with pytest.raises(ValueError):
        lex_coframe(other)
