"""Preset models, fixed submodels, document round trips, validation errors."""

import json
from fractions import Fraction

import pytest

from contact_index import oracle
from contact_index.catalog import (IDENTITY, ContactModel, FixedComponentData,
                                   ModelError, dump_model, fixed_submodel,
                                   load_model, model_from_document,
                                   model_to_document, preset_circle,
                                   preset_hopf_sphere, preset_prequantum_cpn,
                                   preset_weighted_s3, scaled_model)
from contact_index.forms import ChernRoot
from contact_index.scalars import ExactScalar


class TestCirclePreset:
    def test_structure(self):
        m = preset_circle()
        assert m.rank == 1 and m.ambient_n == 0
        assert m.torsion_support == [IDENTITY]
        (comp,) = m.components[IDENTITY]
        assert comp.dim_odd == 1 and comp.mu == 1

    def test_pairing_is_the_orbit_length(self):
        (comp,) = preset_circle().components[IDENTITY]
        # magnitude from the Stokes oracle at n = 0
        assert comp.pairing[()] * comp.pairing[()] == \
            oracle.ball_integral(0) * oracle.ball_integral(0)


class TestHopfPreset:
    def test_pairing_magnitude_matches_ball_integral(self):
        for n in (1, 2, 3):
            (comp,) = preset_hopf_sphere(n).components[IDENTITY]
            top = comp.pairing[(n,)]
            assert top * top == oracle.ball_integral(n) * oracle.ball_integral(n)

    def test_free_action_has_no_extra_torsion(self):
        m = preset_hopf_sphere(1)
        assert m.torsion_support == [IDENTITY]
        assert fixed_submodel(m, Fraction(1, 4)).components == {}

    def test_dimension_bookkeeping(self):
        for n in (1, 2, 3):
            m = preset_hopf_sphere(n)
            for comps in m.components.values():
                for c in comps:
                    assert c.k + len(c.normal) == m.ambient_n


class TestWeightedPreset:
    def test_unit_weights_reduce_to_the_round_sphere(self):
        assert preset_weighted_s3(1, 1).components == preset_hopf_sphere(1).components

    def test_non_coprime_weights_are_rejected(self):
        with pytest.raises(ModelError, match="coprime"):
            preset_weighted_s3(2, 4)

    def test_torsion_support(self):
        m = preset_weighted_s3(1, 2)
        assert m.torsion_support == [IDENTITY, Fraction(1, 2)]
        m = preset_weighted_s3(2, 3)
        assert m.torsion_support == [IDENTITY, Fraction(1, 2), Fraction(1, 3),
                                     Fraction(2, 3)]

    def test_circle_component_data(self):
        m = preset_weighted_s3(1, 2)
        (comp,) = m.components[Fraction(1, 2)]
        assert comp.dim_odd == 1
        assert comp.k + len(comp.normal) == m.ambient_n
        (root,) = comp.normal
        assert Fraction(root.eigenvalue_exponent) % 1 == Fraction(1, 2)
        assert comp.pairing[()] == ExactScalar.pi_power(1, 1)  # 2 pi / 2

    def test_dimension_bookkeeping_at_every_point(self):
        for a, b in ((1, 2), (2, 3), (3, 4)):
            m = preset_weighted_s3(a, b)
            for comps in m.components.values():
                for c in comps:
                    assert c.k + len(c.normal) == m.ambient_n


class TestFixedSubmodel:
    def test_identity_returns_the_model_itself(self):
        m = preset_hopf_sphere(1)
        sub = fixed_submodel(m, IDENTITY)
        assert sub.components[IDENTITY] == m.components[IDENTITY]

    def test_weighted_half_turn(self):
        sub = fixed_submodel(preset_weighted_s3(1, 2), Fraction(1, 2))
        (comp,) = sub.components[IDENTITY]
        assert comp.dim_odd == 1

    def test_empty_off_support(self):
        assert fixed_submodel(preset_hopf_sphere(1), Fraction(1, 4)).components == {}

    def test_idempotent(self):
        m = preset_weighted_s3(1, 2)
        once = fixed_submodel(m, Fraction(1, 2))
        twice = fixed_submodel(once, IDENTITY)
        assert once.components == twice.components


class TestPrequantumPreset:
    def test_structure(self):
        m = preset_prequantum_cpn(1)
        assert m.rank == 2 and len(m.fiber_families) == 2
        assert m.identity_model.components == preset_hopf_sphere(1).components
        sigmas = [f.sigma for f in m.fiber_families]
        assert sigmas == [0, 1]

    def test_fiber_dimension_bookkeeping(self):
        for n in (1, 2):
            m = preset_prequantum_cpn(n)
            for fam in m.fiber_families:
                assert fam.component.k + len(fam.component.normal) == n


class TestScaling:
    def test_moment_and_pairing_transform(self):
        m = preset_hopf_sphere(1)
        s = scaled_model(m, 3)
        (orig,) = m.components[IDENTITY]
        (comp,) = s.components[IDENTITY]
        assert comp.mu == 3
        assert comp.pairing[(1,)] == orig.pairing[(1,)] * ExactScalar.from_rational(9)
        third = ExactScalar.from_rational(Fraction(1, 3))
        assert comp.tangential[0].curvature[0] == orig.tangential[0].curvature[0] * third

    def test_nonpositive_factor_rejected(self):
        with pytest.raises(ModelError):
            scaled_model(preset_circle(), 0)


class TestDocuments:
    @pytest.mark.parametrize("model", [
        preset_circle(), preset_hopf_sphere(2), preset_weighted_s3(2, 3),
        preset_prequantum_cpn(1),
    ], ids=["circle", "hopf2", "weighted23", "prequantum1"])
    def test_round_trip(self, model, tmp_path):
        path = tmp_path / "model.json"
        dump_model(model, path)
        loaded = load_model(path)
        assert model_to_document(loaded) == model_to_document(model)

    def test_reserialization_is_canonical(self, tmp_path):
        path = tmp_path / "model.json"
        dump_model(preset_weighted_s3(2, 3), path)
        first = path.read_text()
        dump_model(load_model(path), path)
        assert path.read_text() == first

    def test_hand_written_five_sphere_equals_preset(self):
        i_text = ExactScalar.i().to_text()
        doc = {
            "rank": 1, "ambient_n": 2, "model_id": "hopf-2",
            "components": [{
                "at": "0/1", "dim": 5,
                "tangential_roots": [
                    {"curv": [i_text], "weight": 0, "eig": "0/1"}
                ] * 3,
                "normal_roots": [],
                "moment": {"mu": "1", "reeb_weight": 1},
                "pairing": [{"mono": [2], "value": "(8)*pi^3"}],
            }],
        }
        model = model_from_document(doc)
        assert model_to_document(model) == model_to_document(preset_hopf_sphere(2))

    def test_zero_moment_is_an_ellipticity_error(self):
        doc = {
            "rank": 1, "ambient_n": 0,
            "components": [{
                "at": "0/1", "dim": 1, "tangential_roots": [], "normal_roots": [],
                "moment": {"mu": "0", "reeb_weight": 1},
                "pairing": [{"mono": [], "value": "(2)*pi^1"}],
            }],
        }
        with pytest.raises(ModelError, match="ellipticity"):
            model_from_document(doc)

    def test_root_count_mismatch(self):
        doc = {
            "rank": 1, "ambient_n": 3,
            "components": [{
                "at": "0/1", "dim": 1, "tangential_roots": [], "normal_roots": [],
                "moment": {"mu": "1", "reeb_weight": 1},
                "pairing": [{"mono": [], "value": "(2)*pi^1"}],
            }],
        }
        with pytest.raises(ModelError, match="bookkeeping"):
            model_from_document(doc)

    def test_normal_eigenvalue_one_is_rejected(self):
        doc = {
            "rank": 1, "ambient_n": 1,
            "components": [
                {"at": "0/1", "dim": 3, "tangential_roots":
                    [{"curv": ["(1*z4^1)*pi^0"], "weight": 0, "eig": "0/1"}],
                 "normal_roots": [],
                 "moment": {"mu": "1", "reeb_weight": 1},
                 "pairing": [{"mono": [1], "value": "(4)*pi^2"}]},
                {"at": "1/2", "dim": 1, "tangential_roots": [],
                 "normal_roots": [{"curv": [], "weight": 2, "eig": "0/1"}],
                 "moment": {"mu": "1", "reeb_weight": 1},
                 "pairing": [{"mono": [], "value": "(1)*pi^1"}]},
            ],
        }
        with pytest.raises(ModelError, match="fixed-set mismatch"):
            model_from_document(doc)

    def test_malformed_rational_names_the_field(self):
        doc = {
            "rank": 1, "ambient_n": 0,
            "components": [{
                "at": "0/1", "dim": 1, "tangential_roots": [], "normal_roots": [],
                "moment": {"mu": "one half", "reeb_weight": 1},
                "pairing": [{"mono": [], "value": "(2)*pi^1"}],
            }],
        }
        with pytest.raises(ModelError, match=r"components\[0\].moment.mu"):
            model_from_document(doc)

    def test_floats_are_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({
            "rank": 1, "ambient_n": 0,
            "components": [{
                "at": "0/1", "dim": 1, "tangential_roots": [], "normal_roots": [],
                "moment": {"mu": 0.5, "reeb_weight": 1},
                "pairing": [{"mono": [], "value": "(2)*pi^1"}],
            }],
        }))
        with pytest.raises(ModelError, match="float"):
            load_model(path)

    def test_identity_must_be_present(self):
        with pytest.raises(ModelError, match="identity"):
            ContactModel(rank=1, ambient_n=0, model_id="m", components={}).validate()
