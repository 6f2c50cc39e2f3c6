import numpy as np
import pytest

from liepower import groups
from liepower.groups import (
    NoMatrixModel,
    ParseError,
    UnsupportedFamily,
    membership_residual,
    parse_descriptor,
    sample_element,
)


class TestParser:
    def test_simple_families(self):
        d = parse_descriptor("SL(2,R)")
        assert d.family == "SL_R" and d.params == (2,)
        d = parse_descriptor("SO+(2,3)")
        assert d.family == "SO+" and d.params == (2, 3)
        d = parse_descriptor("Sp(2,R)")
        assert d.family == "Sp"

    def test_cover_grammar(self):
        d = parse_descriptor("quotient(universal(PSL(2,R)), 3)")
        assert d.is_cover and d.kernel_index == 3
        assert str(d.fundamental_group) == "Z"
        assert str(d.center_mod_kernel) == "Z/3"
        u = parse_descriptor("universal(PSL(2,R))")
        assert u.kernel_index == 0 and str(u.center_mod_kernel) == "Z"

    def test_whitespace_insensitive(self):
        assert parse_descriptor(" SL( 3 , R ) ") == parse_descriptor("SL(3,R)")

    def test_round_trip_on_catalog(self):
        for d in groups.catalog_descriptors():
            assert parse_descriptor(d.render()) == d
        for text in ["universal(PSL(2,R))", "quotient(universal(PSL(2,R)),5)"]:
            assert parse_descriptor(text).render() == text

    def test_parse_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_descriptor("SL(2,R")
        assert err.value.position == 6
        with pytest.raises(ParseError):
            parse_descriptor("SL(2,R) junk")

    def test_unsupported_families(self):
        for text in ["SL(9,R)", "SL(4,C)", "SU(3,1)", "SO+(4,2)", "Sp(4,R)",
                     "Sp(3,R)", "PSL(3,R)", "universal(SL(2,R))",
                     "quotient(universal(PSL(2,R)),0)" "XX(2,R)"]:
            with pytest.raises((UnsupportedFamily, ParseError)):
                parse_descriptor(text)


class TestMembership:
    def test_identity_everywhere(self):
        for d in groups.catalog_descriptors():
            n = d.matrix_size
            assert membership_residual(np.eye(n), d) < 1e-14

    def test_sl2_examples(self):
        d = parse_descriptor("SL(2,R)")
        assert abs(membership_residual(np.diag([2.0, 1.0]), d) - 1.0) < 1e-12
        th = 0.4
        R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        assert membership_residual(R, d) < 1e-12

    def test_so_plus_component_detected(self):
        d = parse_descriptor("SO+(2,1)")
        flip = np.diag([-1.0, 1.0, -1.0])  # in SO(2,1) but not the identity component
        assert abs(np.linalg.det(flip) - 1.0) < 1e-14
        assert membership_residual(flip, d) >= 1.0

    def test_su_form(self):
        d = parse_descriptor("SU(1,1)")
        g = np.array([[1.25, 0.75], [0.75, 1.25]])
        assert membership_residual(g, d) < 1e-12
        assert membership_residual(np.diag([2.0 + 0j, 0.5]), d) > 0.1


class TestSampler:
    def test_membership_contract(self):
        for name in ["SL(2,R)", "SL(3,C)", "SU(2,1)", "SO+(2,3)", "Sp(2,R)"]:
            d = parse_descriptor(name)
            for seed in range(5):
                g = sample_element(d, seed)
                assert membership_residual(g.matrix, d) < 1e-9

    def test_determinism(self):
        d = parse_descriptor("SU(2,1)")
        a = sample_element(d, 123).matrix
        b = sample_element(d, 123).matrix
        assert np.array_equal(a, b)

    def test_trace_reaches_rootless_region(self):
        # products of two exponentials reach trace < -2 in SL(2,R) with
        # positive frequency; a single exponential never does
        d = parse_descriptor("SL(2,R)")
        hits = sum(
            1 for seed in range(10000)
            if np.trace(sample_element(d, seed).matrix) < -2.0
        )
        assert hits > 0
        assert hits / 10000 > 0.05

    def test_cover_has_no_matrix_model(self):
        u = parse_descriptor("universal(PSL(2,R))")
        with pytest.raises(NoMatrixModel):
            sample_element(u, 0)
        with pytest.raises(NoMatrixModel):
            membership_residual(np.eye(3), u)


def test_catalog_is_stable_and_parseable():
    cat = groups.catalog_descriptors()
    assert len(cat) == len(set(cat))
    assert cat == groups.catalog_descriptors()
    names = [d.render() for d in cat]
    assert "SL(4,R)" in names and "SO+(0,5)" in names and "PSL(2,R)" in names
