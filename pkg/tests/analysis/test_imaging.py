import numpy as np
import pytest

from lifelike_crypt.analysis.imaging import (
    GrayImage,
    decrypt_image,
    encrypt_image,
    histogram,
    is_power_of_two,
    load_pgm,
    pad_to_power_of_two,
    power_spectrum,
    save_pgm,
    spectrum_flatness,
    spectrum_to_image
)
from lifelike_crypt.cipher import CipherParams
from lifelike_crypt.exceptions import ImageError


def naive_power_spectrum(pixels: np.ndarray) -> np.ndarray:
    """Centered |DFT|^2 computed straight from the definition"""
    h, w = pixels.shape
    rows = np.arange(h)
    cols = np.arange(w)
    res = np.zeros((h, w))
    for u in range(h):
        for v in range(w):
            phase = np.exp(-2j * np.pi * (np.outer(rows, np.ones(w)) * u / h +
                                          np.outer(np.ones(h), cols) * v / w))
            res[(u + h // 2) % h, (v + w // 2) % w] = abs(np.sum(pixels * phase)) ** 2
    return res


@pytest.fixture
def gradient():
    """Smooth 256x256 test picture"""
    r, c = np.mgrid[0:256, 0:256]
    return GrayImage((r + c) // 2)


class TestGrayImage:
    def test_from_bytes__should_use_row_major_order(self):
        res = GrayImage.from_bytes(3, 2, bytes([1, 2, 3, 4, 5, 6]))

        assert (res.width, res.height) == (3, 2)
        assert res.pixels[1, 0] == 4
        assert res.to_bytes() == bytes([1, 2, 3, 4, 5, 6])

    def test_pixels__should_be_read_only(self):
        obj = GrayImage([[1, 2]])

        with pytest.raises(ValueError):
            obj.pixels[0, 0] = 5

    @pytest.mark.parametrize('width,height,data', ((2, 2, b'abc'), (0, 1, b''), (1, 1, b'ab')))
    def test_from_bytes__on_wrong_size__should_raise_error(self, width, height, data):
        with pytest.raises(ImageError):
            GrayImage.from_bytes(width, height, data)

    def test_eq__should_compare_pixels(self):
        assert GrayImage([[1, 2]]) == GrayImage([[1, 2]])
        assert GrayImage([[1, 2]]) != GrayImage([[1], [2]])
        assert GrayImage([[1, 2]]) != GrayImage([[1, 3]])


class TestPgm:
    def test_load_pgm__single_pixel__should_parse(self):
        res = load_pgm(b'P5\n1 1\n255\n\x7f')

        assert (res.width, res.height) == (1, 1)
        assert res.pixels[0, 0] == 0x7f

    def test_load_pgm__header_comments__should_be_skipped(self):
        res = load_pgm(b'P5\n# made by hand\n2 1\n# max\n255\n\x00\xff')

        assert res.to_bytes() == b'\x00\xff'

    def test_load_pgm__should_read_save_pgm_output(self, gradient):
        assert load_pgm(save_pgm(gradient)) == gradient

    def test_save_pgm__should_write_binary_header(self):
        assert save_pgm(GrayImage([[1, 2, 3]])) == b'P5\n3 1\n255\n\x01\x02\x03'

    @pytest.mark.parametrize('data', (
        b'P2\n1 1\n255\n127',
        b'P5\n1 1\n65535\n\x00\x7f',
        b'P5\n2 2\n255\n\x00\x00\x00',
        b'P5\n1 1\n255\n\x00\x00',
        b'P5\n1 1\n255',
        b'P5\n1\n',
        b'P5\nx 1\n255\n\x00',
        b'P5\n0 1\n255\n',
    ))
    def test_load_pgm__on_malformed_data__should_raise_error(self, data):
        with pytest.raises(ImageError):
            load_pgm(data)


class TestHistogram:
    def test_histogram__should_count_each_value(self):
        res = histogram(GrayImage([[0, 0, 255], [7, 0, 7]]))

        assert res.shape == (256, )
        assert res[0] == 3
        assert res[7] == 2
        assert res[255] == 1
        assert res.sum() == 6

    def test_histogram__gradient__should_count_all_pixels(self, gradient):
        assert histogram(gradient).sum() == 256 * 256


class TestPowerSpectrum:
    def test_power_spectrum__2x2__should_match_hand_computed_dft(self):
        # a b / c d with F00=a+b+c+d, F01=a-b+c-d, F10=a+b-c-d, F11=a-b-c+d
        image = GrayImage([[1, 2], [3, 4]])

        res = power_spectrum(image, subtract_mean=False)

        assert res.dc_index == (1, 1)
        np.testing.assert_allclose(res.magnitudes, [[0.0, 16.0], [4.0, 100.0]], atol=1e-9)

    @pytest.mark.parametrize('subtract_mean', (False, True))
    def test_power_spectrum__should_match_naive_dft(self, subtract_mean):
        pixels = np.random.default_rng(41).integers(0, 256, (8, 8))
        expect_input = pixels - pixels.mean() if subtract_mean else pixels

        res = power_spectrum(GrayImage(pixels), subtract_mean=subtract_mean)

        np.testing.assert_allclose(res.magnitudes, naive_power_spectrum(expect_input),
                                   rtol=1e-9, atol=1e-6)

    def test_power_spectrum__should_keep_energy(self):
        pixels = np.random.default_rng(42).integers(0, 256, (16, 32))

        res = power_spectrum(GrayImage(pixels), subtract_mean=False)

        expect = 16 * 32 * float(np.sum(pixels.astype(np.float64) ** 2))
        assert float(res.magnitudes.sum()) == pytest.approx(expect, rel=1e-12)

    def test_power_spectrum__should_not_depend_on_cyclic_shift(self):
        pixels = np.random.default_rng(43).integers(0, 256, (16, 16))

        a = power_spectrum(GrayImage(pixels))
        b = power_spectrum(GrayImage(np.roll(pixels, (3, 5), axis=(0, 1))))

        np.testing.assert_allclose(a.magnitudes, b.magnitudes, rtol=1e-9, atol=1e-6)

    def test_power_spectrum__constant_image__should_put_energy_to_dc(self):
        image = GrayImage(np.full((4, 8), 10))

        res = power_spectrum(image, subtract_mean=False)

        assert res.magnitudes[res.dc_index] == pytest.approx((10 * 32) ** 2)
        rest = res.magnitudes.copy()
        rest[res.dc_index] = 0
        np.testing.assert_allclose(rest, 0, atol=1e-9)

    def test_power_spectrum__mean_subtracted__should_zero_dc(self):
        pixels = np.random.default_rng(44).integers(0, 256, (8, 8))

        res = power_spectrum(GrayImage(pixels))

        assert res.magnitudes[res.dc_index] == pytest.approx(0, abs=1e-6)

    def test_power_spectrum__non_power_of_two__should_raise_error(self):
        with pytest.raises(ImageError):
            power_spectrum(GrayImage(np.zeros((6, 8))))

    def test_power_spectrum__pad__should_transform_padded_image(self):
        image = GrayImage(np.random.default_rng(45).integers(0, 256, (5, 6)))

        res = power_spectrum(image, pad=True)

        assert (res.height, res.width) == (8, 8)
        np.testing.assert_allclose(res.magnitudes,
                                   power_spectrum(pad_to_power_of_two(image)).magnitudes)

    @pytest.mark.parametrize('value,expect', ((1, True), (64, True), (0, False), (6, False)))
    def test_is_power_of_two(self, value, expect):
        assert is_power_of_two(value) is expect

    def test_pad_to_power_of_two__should_pad_right_and_bottom_with_zeros(self):
        res = pad_to_power_of_two(GrayImage([[1, 2, 3], [4, 5, 6], [7, 8, 9]]))

        assert res.pixels.tolist() == [[1, 2, 3, 0], [4, 5, 6, 0], [7, 8, 9, 0], [0, 0, 0, 0]]

    def test_spectrum_to_image__should_scale_peak_to_255(self):
        res = spectrum_to_image(power_spectrum(GrayImage([[1, 2], [3, 4]]), subtract_mean=False))

        assert res.pixels[1, 1] == 255
        assert res.pixels[0, 0] == 0


class TestFlatness:
    def test_spectrum_flatness__impulse__should_be_one(self):
        pixels = np.zeros((8, 8))
        pixels[2, 5] = 200

        res = spectrum_flatness(power_spectrum(GrayImage(pixels)))

        assert res.value == pytest.approx(1.0)
        assert not res.degenerate

    def test_spectrum_flatness__constant_image__should_be_degenerate(self):
        res = spectrum_flatness(power_spectrum(GrayImage(np.full((8, 8), 77))))

        assert res.value == 0.0
        assert res.degenerate

    def test_spectrum_flatness__noise__should_be_above_smooth_picture(self, gradient):
        noise = GrayImage(np.random.default_rng(46).integers(0, 256, (256, 256)))

        smooth = spectrum_flatness(power_spectrum(gradient)).value
        white = spectrum_flatness(power_spectrum(noise)).value

        assert 0.0 <= smooth < white <= 1.0


class TestCipherimage:
    def test_decrypt_image__should_restore_plain_image(self, small_params, password):
        image = GrayImage(np.random.default_rng(47).integers(0, 256, (12, 20)))

        cipher = encrypt_image(image, password, small_params)

        assert (cipher.width, cipher.height) == (20, 12)
        assert cipher != image
        assert decrypt_image(cipher, password, small_params) == image

    def test_encrypt_image__should_flatten_histogram_and_spectrum(self, gradient, fredkin,
                                                                   password):
        params = CipherParams(rule=fredkin)

        cipher = encrypt_image(gradient, password, params)
        counts = histogram(cipher)

        assert counts.max() / counts.mean() <= 1.35
        assert spectrum_flatness(power_spectrum(cipher)).value > \
            spectrum_flatness(power_spectrum(gradient)).value

    def test_encrypt_image__256x256__should_have_flat_spectrum(self, gradient, fredkin,
                                                               password):
        # This rule is periodic on power of two tori
        params = CipherParams(rule=fredkin, m=131, n=136)

        cipher = encrypt_image(gradient, password, params)

        assert (cipher.width, cipher.height) == (256, 256)
        assert spectrum_flatness(power_spectrum(cipher)).value >= 0.4
