"""Fixture integrity: every fixture a pipeline can re-derive is
cross-checked against that pipeline."""

import pytest

from picardfuchs.exact import AT_INFINITY
from picardfuchs.elliptic import functional_invariant, griffiths_pf
from picardfuchs.mirror import mirror_map, reciprocal_plus_constant
from picardfuchs.ode import pnf2
from picardfuchs.uniformdata import Fixture, UnknownFixture, fixture_names, load_fixture
from picardfuchs.uniformize import uniformization_check


class TestLoading:
    def test_names(self):
        assert set(fixture_names()) == {
            "lambda",
            "family-E",
            "family-E-pf",
            "modular-33",
            "j-qseries",
            "mirror-qseries",
            "psl2z-signature",
        }

    def test_unknown_raises(self):
        with pytest.raises(UnknownFixture):
            load_fixture("nope")

    def test_payload_types(self):
        fx = load_fixture("lambda")
        assert isinstance(fx, Fixture)
        assert fx.provenance

    def test_fresh_payloads(self):
        # fixtures are rebuilt per call; mutability cannot leak
        assert load_fixture("modular-33").payload == load_fixture("modular-33").payload


class TestCrossDerivation:
    def test_lambda_is_pnf_of_bundled_pf(self):
        lam = load_fixture("lambda").payload
        pf = load_fixture("family-E-pf").payload
        assert pnf2(pf) == lam

    def test_lambda_from_weierstrass_model(self):
        lam = load_fixture("lambda").payload
        W = load_fixture("family-E").payload
        assert pnf2(griffiths_pf(W)) == lam
        assert functional_invariant(W).to_text("s") == "s"

    def test_mirror_series_from_pipeline(self):
        pf = load_fixture("family-E-pf").payload
        golden = load_fixture("mirror-qseries").payload
        assert mirror_map(pf, AT_INFINITY, 4).same_series(golden)

    def test_j_series_from_pipeline(self):
        pf = load_fixture("family-E-pf").payload
        golden = load_fixture("j-qseries").payload
        zq = mirror_map(pf, AT_INFINITY, 6)
        assert reciprocal_plus_constant(zq, 0).same_series(golden)

    def test_signature_matches_lambda(self):
        lam = load_fixture("lambda").payload
        orb = load_fixture("psl2z-signature").payload
        report = uniformization_check(lam)
        analytic = {loc.describe(): w for loc, w in report.signature}
        assert analytic == {"0": 3, "1": 2, "inf": None}
        declared = {v.describe(): b for v, b in orb.elliptic_points}
        assert declared == {"0": 3, "1": 2}
        assert [v.describe() for v in orb.cusp_values] == ["inf"]
