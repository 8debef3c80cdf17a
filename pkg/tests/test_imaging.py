"""Grayscale conversion, ROI tiling and cropping."""
from fractions import Fraction

import numpy as np
import pytest

from patchscore.errors import EmptyMask, OutOfBounds
from patchscore.imaging import PatchRecord, crop, tile_roi, to_grayscale

from synth import save_png


def gray_oracle(r: int, g: int, b: int) -> int:
    """Exact luma: round half away from zero of 0.299 r + 0.587 g + 0.114 b."""
    value = Fraction(299, 1000) * r + Fraction(587, 1000) * g + Fraction(114, 1000) * b
    floor = value.numerator // value.denominator
    return floor + (1 if (value - floor) >= Fraction(1, 2) else 0)


def as_rgb(r, g, b):
    return np.array([[[r, g, b]]], dtype=np.uint8)


class TestToGrayscale:
    def test_white_maps_to_white(self):
        assert to_grayscale(as_rgb(255, 255, 255))[0, 0] == 255

    def test_black_maps_to_black(self):
        assert to_grayscale(as_rgb(0, 0, 0))[0, 0] == 0

    def test_pure_red(self):
        # 0.299 * 255 = 76.245 -> 76
        assert to_grayscale(as_rgb(255, 0, 0))[0, 0] == 76

    def test_gray_inputs_are_fixed_points(self):
        for g in range(256):
            assert to_grayscale(as_rgb(g, g, g))[0, 0] == g

    def test_matches_exact_oracle_on_random_triples(self):
        rng = np.random.default_rng(42)
        triples = rng.integers(0, 256, size=(2000, 3))
        got = to_grayscale(triples.reshape(1, -1, 3).astype(np.uint8))[0]
        for (r, g, b), value in zip(triples, got):
            assert value == gray_oracle(int(r), int(g), int(b))

    def test_preserves_shape(self):
        rng = np.random.default_rng(0)
        img = rng.integers(0, 256, size=(5, 9, 3), dtype=np.uint8)
        assert to_grayscale(img).shape == (5, 9)

    def test_rejects_non_rgb(self):
        with pytest.raises(ValueError):
            to_grayscale(np.zeros((4, 4), dtype=np.uint8))


def full_mask(h, w):
    return np.ones((h, w), dtype=bool)


class TestTileRoi:
    def test_exact_partition(self):
        origins = tile_roi(full_mask(64, 64), 32)
        assert origins == [(0, 0), (32, 0), (0, 32), (32, 32)]

    def test_side_larger_than_image(self):
        assert tile_roi(full_mask(64, 64), 256) == []

    def test_centered_square_mask(self):
        mask = np.zeros((100, 100), dtype=bool)
        mask[15:85, 15:85] = True
        assert tile_roi(mask, 32) == [(15, 15), (47, 15), (15, 47), (47, 47)]

    def test_full_mask_count(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            h, w = int(rng.integers(10, 200)), int(rng.integers(10, 200))
            side = int(rng.choice([32, 64, 128]))
            assert len(tile_roi(full_mask(h, w), side)) == (w // side) * (h // side)

    def test_empty_mask_raises(self):
        with pytest.raises(EmptyMask):
            tile_roi(np.zeros((50, 50), dtype=bool), 32)

    def test_cells_disjoint_and_in_bounds(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            h, w = int(rng.integers(33, 150)), int(rng.integers(33, 150))
            mask = rng.random((h, w)) < 0.6
            if not mask.any():
                continue
            side = 32
            origins = tile_roi(mask, side)
            seen = np.zeros((h, w), dtype=int)
            for x, y in origins:
                assert 0 <= x and 0 <= y and x + side <= w and y + side <= h
                seen[y : y + side, x : x + side] += 1
            assert seen.max() <= 1

    def test_coverage_threshold_against_brute_force(self):
        rng = np.random.default_rng(19)
        side = 32
        for _ in range(25):
            h, w = int(rng.integers(40, 130)), int(rng.integers(40, 130))
            mask = rng.random((h, w)) < rng.uniform(0.2, 0.8)
            if not mask.any():
                continue
            threshold = float(rng.uniform(0.05, 0.95))
            got = set(tile_roi(mask, side, threshold))
            ys, xs = np.nonzero(mask)
            x0, y0, x1, y1 = xs.min(), ys.min(), xs.max(), ys.max()
            expected = set()
            for y in range(y0, y1 + 1, side):
                for x in range(x0, x1 + 1, side):
                    if x + side > w or y + side > h:
                        continue
                    covered = sum(
                        mask[yy][xx]
                        for yy in range(y, y + side)
                        for xx in range(x, x + side)
                    )
                    if covered >= threshold * side * side:
                        expected.add((x, y))
            assert got == expected


class TestCrop:
    def test_identity_crop(self):
        rng = np.random.default_rng(5)
        img = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        assert np.array_equal(crop(img, (0, 0), 32), img)

    def test_ramp_corner(self):
        ramp = np.arange(16, dtype=np.uint8).reshape(4, 4)
        assert crop(ramp, (2, 2), 2).ravel().tolist() == [10, 11, 14, 15]

    def test_out_of_bounds(self):
        img = np.zeros((40, 40), dtype=np.uint8)
        with pytest.raises(OutOfBounds):
            crop(img, (39, 0), 32)

    def test_pixels_match_source(self):
        rng = np.random.default_rng(8)
        img = rng.integers(0, 256, size=(80, 60), dtype=np.uint8)
        for _ in range(50):
            x = int(rng.integers(0, 60 - 16))
            y = int(rng.integers(0, 80 - 16))
            patch = crop(img, (x, y), 16)
            i = int(rng.integers(0, 16))
            j = int(rng.integers(0, 16))
            assert patch[j, i] == img[y + j, x + i]

    def test_crop_is_a_copy(self):
        img = np.zeros((40, 40), dtype=np.uint8)
        patch = crop(img, (0, 0), 32)
        patch[0, 0] = 9
        assert img[0, 0] == 0


class TestPatchRecord:
    def test_patch_id_round_trips_fields(self):
        record = PatchRecord("img1", 32, 64, 32, 1)
        assert record.patch_id == "img1:32:32:64"

    def test_rejects_bad_side(self):
        with pytest.raises(ValueError):
            PatchRecord("img1", 0, 0, 33, 0)

    def test_rejects_out_of_range_scores(self):
        with pytest.raises(ValueError):
            PatchRecord("img1", 0, 0, 32, 0, entropy=9.0)
        with pytest.raises(ValueError):
            PatchRecord("img1", 0, 0, 32, 0, memd_mean=-1.0)

    def test_rejects_bad_split(self):
        with pytest.raises(ValueError):
            PatchRecord("img1", 0, 0, 32, 0, split="holdout")


class TestPngIo:
    def test_gray_round_trip(self, tmp_path):
        from patchscore.imaging import load_gray

        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, size=(20, 30), dtype=np.uint8)
        save_png(tmp_path / "g.png", img)
        assert np.array_equal(load_gray(tmp_path / "g.png"), img)

    def test_rgb_loads_via_bt601(self, tmp_path):
        from patchscore.imaging import load_gray, load_rgb

        rng = np.random.default_rng(4)
        img = rng.integers(0, 256, size=(12, 12, 3), dtype=np.uint8)
        save_png(tmp_path / "c.png", img)
        assert np.array_equal(load_rgb(tmp_path / "c.png"), img)
        assert np.array_equal(load_gray(tmp_path / "c.png"), to_grayscale(img))

    def test_mask_threshold(self, tmp_path):
        from patchscore.imaging import load_mask

        mask = np.array([[0, 127, 128, 255]], dtype=np.uint8)
        save_png(tmp_path / "m.png", mask)
        assert load_mask(tmp_path / "m.png").tolist() == [[False, False, True, True]]
