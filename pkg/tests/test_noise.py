import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmfbench.datasets import Dataset, synthesize_dataset
from nmfbench.noise import NoiseSpec, add_block_occlusion, add_salt_pepper, apply_noise


def flat_dataset(values: np.ndarray, height: int, width: int) -> Dataset:
    n = values.shape[1]
    return Dataset(X=values, labels=np.zeros(n, dtype=int), height=height, width=width)


class TestBlockOcclusion:
    def test_exact_block_area_small(self):
        X = np.full((16, 3), 0.25)
        ds = flat_dataset(X, 4, 4)
        spec = NoiseSpec(kind="block_occlusion", block_size=2, fill_value=0.5, seed=0)
        noisy, mask = add_block_occlusion(ds, spec)
        for j in range(3):
            assert mask[:, j].sum() == 4
            assert (noisy[mask[:, j], j] == 0.5).all()
            assert np.array_equal(noisy[~mask[:, j], j], X[~mask[:, j], j])

    def test_orl_scale_block(self):
        ds = synthesize_dataset(2, 3, 37, 30, seed=1)
        spec = NoiseSpec(kind="block_occlusion", block_size=10, fill_value=0.5, seed=0)
        noisy, mask = add_block_occlusion(ds, spec)
        assert (mask.sum(axis=0) == 100).all()

    def test_block_is_contiguous_square(self):
        ds = synthesize_dataset(1, 1, 8, 6, seed=3)
        spec = NoiseSpec(kind="block_occlusion", block_size=3, fill_value=0.0, seed=5)
        _, mask = add_block_occlusion(ds, spec)
        img_mask = mask[:, 0].reshape(8, 6)
        rows, cols = np.nonzero(img_mask)
        assert rows.max() - rows.min() == 2 and cols.max() - cols.min() == 2
        assert img_mask.sum() == 9

    def test_full_occlusion(self):
        ds = synthesize_dataset(1, 2, 5, 5, seed=0)
        spec = NoiseSpec(kind="block_occlusion", block_size=5, fill_value=0.7, seed=0)
        noisy, mask = add_block_occlusion(ds, spec)
        assert (noisy == 0.7).all() and mask.all()

    def test_block_too_large(self):
        ds = synthesize_dataset(1, 1, 4, 4, seed=0)
        spec = NoiseSpec(kind="block_occlusion", block_size=5, seed=0)
        with pytest.raises(ValueError):
            add_block_occlusion(ds, spec)

    def test_deterministic(self):
        ds = synthesize_dataset(2, 4, 9, 7, seed=2)
        spec = NoiseSpec(kind="block_occlusion", block_size=3, fill_value=0.5, seed=11)
        a = add_block_occlusion(ds, spec)
        b = add_block_occlusion(ds, spec)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_positions_vary_across_columns(self):
        ds = synthesize_dataset(1, 20, 10, 10, noise_scale=0.0, seed=0)
        spec = NoiseSpec(kind="block_occlusion", block_size=2, seed=4)
        _, mask = add_block_occlusion(ds, spec)
        patterns = {mask[:, j].tobytes() for j in range(20)}
        assert len(patterns) > 1


class TestSaltPepper:
    def test_exact_counts_on_1110_pixel_images(self):
        # 37*30 = 1110 pixels; 40% -> 444 corrupted, salt share 0.45 -> 200 salt
        ds = synthesize_dataset(1, 2, 37, 30, noise_scale=0.2, seed=7)
        spec = NoiseSpec(kind="salt_pepper", fraction=0.4, salt_ratio=0.45, seed=0)
        noisy, mask = add_salt_pepper(ds, spec)
        for j in range(2):
            col_mask = mask[:, j]
            assert col_mask.sum() == 444
            assert (noisy[col_mask, j] == 1.0).sum() == 200
            assert (noisy[col_mask, j] == 0.0).sum() == 244

    def test_zero_fraction_no_change(self):
        ds = synthesize_dataset(2, 2, 5, 4, seed=1)
        spec = NoiseSpec(kind="salt_pepper", fraction=0.0, salt_ratio=0.45, seed=0)
        noisy, mask = add_salt_pepper(ds, spec)
        assert np.array_equal(noisy, ds.X)
        assert not mask.any()

    def test_all_salt_saturates(self):
        ds = synthesize_dataset(1, 3, 5, 4, seed=1)
        spec = NoiseSpec(kind="salt_pepper", fraction=1.0, salt_ratio=1.0, seed=0)
        noisy, mask = add_salt_pepper(ds, spec)
        assert (noisy == 1.0).all() and mask.all()

    def test_stays_in_unit_interval(self):
        ds = synthesize_dataset(3, 5, 8, 8, noise_scale=0.5, seed=5)
        spec = NoiseSpec(kind="salt_pepper", fraction=0.3, salt_ratio=0.5, seed=2)
        noisy, _ = add_salt_pepper(ds, spec)
        assert noisy.min() >= 0.0 and noisy.max() <= 1.0

    def test_deterministic(self):
        ds = synthesize_dataset(2, 3, 6, 6, seed=8)
        spec = NoiseSpec(kind="salt_pepper", fraction=0.4, salt_ratio=0.45, seed=13)
        a = add_salt_pepper(ds, spec)
        b = add_salt_pepper(ds, spec)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    @settings(max_examples=25, deadline=None)
    @given(
        fraction=st.floats(0.0, 1.0),
        salt_ratio=st.floats(0.0, 1.0),
        seed=st.integers(0, 1000),
    )
    def test_exact_count_invariant(self, fraction, salt_ratio, seed):
        ds = synthesize_dataset(2, 3, 6, 5, noise_scale=0.3, seed=0)
        spec = NoiseSpec(kind="salt_pepper", fraction=fraction, salt_ratio=salt_ratio, seed=seed)
        noisy, mask = add_salt_pepper(ds, spec)
        m = ds.n_pixels
        expected = int(round(fraction * m))
        assert (mask.sum(axis=0) == expected).all()
        # differences only at masked positions, and in range
        assert np.array_equal(noisy[~mask], ds.X[~mask])
        assert noisy.min() >= 0.0 and noisy.max() <= 1.0


class TestApplyNoise:
    def test_none_kind_copies(self):
        ds = synthesize_dataset(2, 2, 4, 4, seed=0)
        noisy, mask = apply_noise(ds, NoiseSpec(kind="none"))
        assert np.array_equal(noisy, ds.X)
        assert noisy is not ds.X
        assert not mask.any()

    def test_dispatch(self):
        ds = synthesize_dataset(1, 2, 12, 12, seed=0)
        noisy, mask = apply_noise(ds, NoiseSpec(kind="block_occlusion", block_size=3, seed=1))
        assert mask.sum() == 9 * 2
        noisy, mask = apply_noise(ds, NoiseSpec(kind="salt_pepper", fraction=0.25, seed=1))
        assert mask.sum() == 2 * int(round(0.25 * 144))

    def test_unknown_kind_rejected_at_spec_construction(self):
        with pytest.raises(ValueError):
            NoiseSpec(kind="gaussian")

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 500))
    def test_corruption_differs_only_at_mask(self, seed):
        # interior values cannot collide with fill values (0.5) or salt/pepper
        rng = np.random.default_rng(seed)
        X = 0.05 + 0.3 * rng.random((36, 4))
        ds = flat_dataset(X, 6, 6)
        for spec in (
            NoiseSpec(kind="block_occlusion", block_size=2, fill_value=0.5, seed=seed),
            NoiseSpec(kind="salt_pepper", fraction=0.4, salt_ratio=0.45, seed=seed),
        ):
            noisy, mask = apply_noise(ds, spec)
            differs = noisy != ds.X
            assert np.array_equal(differs, mask)
