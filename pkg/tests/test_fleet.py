import json

import pytest

from chpricing import (
    CostSegment,
    Fleet,
    FleetValidationError,
    GeneratorType,
    builtin_fleet,
    dump_fleet,
    load_fleet,
)


def seg_pairs(gtype):
    return [(s.marginal_cost, s.capacity) for s in gtype.segments]


class TestBuiltinFixtures:
    def test_gribik_fields(self, gribik):
        assert [t.name for t in gribik.types] == ["A", "B", "C"]
        by_name = {t.name: t for t in gribik.types}
        assert by_name["A"].startup_cost == 0.0
        assert by_name["B"].startup_cost == 6000.0
        assert by_name["C"].startup_cost == 8000.0
        assert seg_pairs(by_name["A"]) == [(65.0, 100.0), (110.0, 100.0)]
        assert seg_pairs(by_name["B"]) == [(40.0, 100.0), (90.0, 100.0)]
        assert seg_pairs(by_name["C"]) == [(25.0, 100.0), (35.0, 100.0)]
        assert all(t.min_output == 0.0 for t in gribik.types)
        assert all(t.unit_count == 1 for t in gribik.types)
        assert gribik.total_capacity == 600.0

    def test_scarf_fields(self, scarf):
        by_name = {t.name: t for t in scarf.types}
        smoke, high, med = (by_name[n] for n in
                            ("Smokestack", "HighTech", "MedTech"))
        assert (smoke.startup_cost, high.startup_cost, med.startup_cost) == \
            (53.0, 30.0, 0.0)
        assert seg_pairs(smoke) == [(3.0, 16.0)]
        assert seg_pairs(high) == [(2.0, 7.0)]
        assert seg_pairs(med) == [(7.0, 6.0)]
        assert (smoke.unit_count, high.unit_count, med.unit_count) == (6, 5, 5)
        assert med.min_output == 2.0
        assert scarf.total_units == 16
        assert scarf.total_capacity == 161.0

    def test_max_output_is_segment_sum(self, gribik, scarf):
        for fleet in (gribik, scarf):
            for t in fleet.types:
                assert t.max_output == sum(s.capacity for s in t.segments)

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            builtin_fleet("enron")


class TestValidation:
    def test_segments_must_be_sorted(self):
        with pytest.raises(FleetValidationError, match="not sorted"):
            GeneratorType("X", 0.0, 0.0,
                          (CostSegment(110.0, 100.0), CostSegment(65.0, 100.0)))

    def test_min_output_above_capacity(self):
        with pytest.raises(FleetValidationError):
            GeneratorType("X", 0.0, 7.0, (CostSegment(7.0, 6.0),))

    def test_empty_segments(self):
        with pytest.raises(FleetValidationError):
            GeneratorType("X", 0.0, 0.0, ())

    def test_nonpositive_segment_capacity(self):
        with pytest.raises(FleetValidationError):
            CostSegment(10.0, 0.0)

    def test_negative_marginal_cost(self):
        with pytest.raises(FleetValidationError):
            CostSegment(-1.0, 10.0)

    def test_bad_unit_count(self):
        with pytest.raises(FleetValidationError):
            GeneratorType("X", 0.0, 0.0, (CostSegment(1.0, 1.0),), unit_count=0)

    def test_negative_startup(self):
        with pytest.raises(FleetValidationError):
            GeneratorType("X", -5.0, 0.0, (CostSegment(1.0, 1.0),))

    def test_empty_fleet(self):
        with pytest.raises(FleetValidationError):
            Fleet(())


class TestSerialization:
    @pytest.mark.parametrize("name", ["gribik", "scarf"])
    def test_round_trip(self, name):
        fleet = builtin_fleet(name)
        assert load_fleet(dump_fleet(fleet)) == fleet

    def test_load_unsorted_segments(self, gribik):
        doc = json.loads(dump_fleet(gribik))
        doc["types"][0]["segments"].reverse()
        with pytest.raises(FleetValidationError, match="not sorted"):
            load_fleet(json.dumps(doc))

    def test_load_min_above_capacity(self):
        doc = {"types": [{"name": "X", "startup_cost": 0.0, "min_output": 7.0,
                          "unit_count": 1,
                          "segments": [{"marginal_cost": 7.0, "capacity": 6.0}]}]}
        with pytest.raises(FleetValidationError, match="X"):
            load_fleet(json.dumps(doc))

    def test_load_missing_field(self):
        doc = {"types": [{"name": "X", "startup_cost": 0.0,
                          "segments": [{"marginal_cost": 1.0, "capacity": 1.0}]}]}
        with pytest.raises(FleetValidationError):
            load_fleet(json.dumps(doc))

    def test_load_not_json(self):
        with pytest.raises(FleetValidationError):
            load_fleet("types: nope")

    def test_load_missing_types_key(self):
        with pytest.raises(FleetValidationError):
            load_fleet(json.dumps({"fleet": []}))
