import numpy as np
import pytest

from caddie import course, fixtures
from caddie.course import InvariantViolation, ParseError, SurfaceCode


def make_text(rows, cell_size=40.0, pin=(100.0, 100.0), par=3):
    header = ('{"cell_size_in": %s, "pin": [%s, %s], "par": %d}'
              % (cell_size, pin[0], pin[1], par))
    return header + "\n" + "\n".join(rows) + "\n"


class TestParse:
    def test_all_green_with_center_pin(self):
        text = make_text(["GGG", "GGG", "GGG"], pin=(60.0, 60.0))
        raster = course.parse_hole(text)
        assert raster.rows == raster.cols == 3
        assert raster.tee is None
        assert raster.surface_at((1, 1)) == SurfaceCode.GREEN

    def test_pin_on_water_rejected(self):
        text = make_text(["GGG", "GWG", "GGG"], pin=(60.0, 60.0))
        with pytest.raises(InvariantViolation):
            course.parse_hole(text)

    def test_unknown_code_rejected(self):
        text = make_text(["GGG", "GZG", "GGG"], pin=(20.0, 20.0))
        with pytest.raises(InvariantViolation):
            course.parse_hole(text)

    def test_bad_cell_size_rejected(self):
        text = make_text(["GGG"], cell_size=10.0, pin=(20.0, 20.0))
        with pytest.raises(InvariantViolation):
            course.parse_hole(text)

    def test_ragged_rows_rejected(self):
        text = make_text(["GGG", "GG"], pin=(20.0, 20.0))
        with pytest.raises(ParseError):
            course.parse_hole(text)

    def test_bad_header_rejected(self):
        with pytest.raises(ParseError):
            course.parse_hole("not json\nGGG\n")

    def test_two_tees_rejected(self):
        text = make_text(["TGT"], pin=(60.0, 20.0))
        with pytest.raises(InvariantViolation):
            course.parse_hole(text)

    def test_bad_par_rejected(self):
        text = make_text(["GGG"], pin=(20.0, 20.0), par=6)
        with pytest.raises(InvariantViolation):
            course.parse_hole(text)

    def test_roundtrip_identity(self, par4_raster):
        again = course.parse_hole(course.serialize_hole(par4_raster))
        assert np.array_equal(again.grid, par4_raster.grid)
        assert again.tee == par4_raster.tee
        assert again.par == par4_raster.par
        assert again.cell_size == par4_raster.cell_size
        assert np.array_equal(again.pin, par4_raster.pin)

    def test_bundled_fixture_golden(self, par4_raster):
        text = fixtures.path(fixtures.PAR4_HOLE).read_text()
        assert course.serialize_hole(par4_raster) == text

    def test_point_cell_boundary_goes_up(self):
        text = make_text(["GGG", "GGG"], pin=(60.0, 60.0))
        raster = course.parse_hole(text)
        assert raster.point_cell((40.0, 40.0)) == (1, 1)
        assert raster.point_cell((39.999, 39.999)) == (0, 0)


class TestValidate:
    def test_corridor_accepted(self, corridor_raster):
        report = course.validate_hole(corridor_raster, n_directions=36)
        assert report.accepted
        assert report.unreachable == []
        assert report.tee_reaches_green

    def test_tree_ringed_pocket_listed(self):
        rows = ["OOOOOOO",
                "OTFFGGO",
                "OXXXGGO",
                "OXRXGGO",
                "OXXXGGO",
                "OOOOOOO"]
        text = make_text(rows, pin=(200.0, 60.0))
        raster = course.parse_hole(text)
        report = course.validate_hole(raster, n_directions=72)
        assert not report.accepted
        assert (3, 2) in report.unreachable
        assert len(report.unreachable) == 1

    def test_playable_border_rejected(self):
        rows = ["OOOOO",
                "OTFGO",
                "FFFGO",
                "OOOOO"]
        text = make_text(rows, pin=(140.0, 60.0))
        raster = course.parse_hole(text)
        report = course.validate_hole(raster, n_directions=36)
        assert not report.accepted
        assert (2, 0) in report.border_violations

    def test_missing_tee_not_accepted(self):
        text = make_text(["OOOO", "OFGO", "OOOO"], pin=(100.0, 60.0))
        raster = course.parse_hole(text)
        report = course.validate_hole(raster, n_directions=36)
        assert not report.accepted
        assert not report.tee_reaches_green

    def test_bundled_fixtures_accepted(self, par4_raster, water_raster):
        assert course.validate_hole(par4_raster, n_directions=60).accepted
        assert course.validate_hole(water_raster, n_directions=60).accepted

    def test_deterministic(self, corridor_raster):
        a = course.validate_hole(corridor_raster, n_directions=36)
        b = course.validate_hole(corridor_raster, n_directions=36)
        assert a == b
