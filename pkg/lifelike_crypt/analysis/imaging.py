"""Grayscale images, byte histograms and 2D power spectra used to
examine cipherimages
"""
__all__ = [
    'GrayImage',
    'Spectrum',
    'Flatness',
    'load_pgm',
    'save_pgm',
    'histogram',
    'is_power_of_two',
    'pad_to_power_of_two',
    'power_spectrum',
    'spectrum_flatness',
    'spectrum_to_image',
    'encrypt_image',
    'decrypt_image'
]

import logging
import re
from typing import NamedTuple, Tuple

import numpy as np

from lifelike_crypt import flags
from lifelike_crypt.cipher import CipherParams, decrypt, encrypt
from lifelike_crypt.exceptions import ImageError

log = logging.getLogger('lifelike-crypt')

# Header token or comment up to the end of line
_PGM_TOKEN = re.compile(rb'\s*(?:#[^\n]*\n\s*)*([^\s#]+)')


class GrayImage:
    """8-bit grayscale image, pixels are kept in a read-only uint8
    array of shape (height, width)
    """
    __slots__ = ('_pixels', )

    def __init__(self, pixels):
        arr = np.array(pixels, dtype=np.uint8)
        if arr.ndim != 2 or arr.size == 0:
            raise ImageError(f'Image must be a non-empty 2D array, got shape {arr.shape}')
        arr.setflags(write=False)
        self._pixels = arr

    @classmethod
    def from_bytes(cls, width: int, height: int, data: bytes) -> 'GrayImage':
        """Image from row-major pixel bytes"""
        if width < 1 or height < 1:
            raise ImageError(f'Image dimensions must be positive, got {width}x{height}')
        if len(data) != width * height:
            raise ImageError(f'{width}x{height} image needs {width * height} pixels, '
                             f'got {len(data)}')
        return cls(np.frombuffer(bytes(data), dtype=np.uint8).reshape(height, width))

    @property
    def pixels(self) -> np.ndarray:
        return self._pixels

    @property
    def width(self) -> int:
        return self._pixels.shape[1]

    @property
    def height(self) -> int:
        return self._pixels.shape[0]

    def to_bytes(self) -> bytes:
        """Row-major pixel bytes"""
        return self._pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return False
        return self._pixels.shape == other._pixels.shape \
            and np.array_equal(self._pixels, other._pixels)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self._pixels.shape, self._pixels.tobytes()))

    def __repr__(self):
        return f'<GrayImage({self.width}x{self.height})>'


class Spectrum(NamedTuple):
    """Power spectrum with DC in the center, i.e. at
    (height // 2, width // 2)
    """
    width: int
    height: int
    magnitudes: np.ndarray

    @property
    def dc_index(self) -> Tuple[int, int]:
        return self.height // 2, self.width // 2


class Flatness(NamedTuple):
    value: float
    #: All non-DC bins are zero (or there are none)
    degenerate: bool = False


def load_pgm(data: bytes) -> GrayImage:
    """
    Parse binary PGM (P5) with maxval 255. Comments in header are
    skipped
    :param data: file contents
    :raises ImageError: on malformed header, other maxval or wrong
     payload size
    :return:
    """
    data = bytes(data)
    tokens = []
    pos = 0
    for _ in range(4):
        match = _PGM_TOKEN.match(data, pos)
        if match is None:
            raise ImageError('PGM header is truncated')
        tokens.append(match.group(1))
        pos = match.end()

    magic = tokens[0]
    if magic != flags.PGM_MAGIC:
        raise ImageError(f'Unsupported image format {magic[:2]!r}, only binary PGM '
                         f'({flags.PGM_MAGIC.decode()}) is supported')
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as e:
        raise ImageError(f'Malformed PGM header: {b" ".join(tokens)!r}') from e
    if width < 1 or height < 1:
        raise ImageError(f'PGM dimensions must be positive, got {width}x{height}')
    if maxval != flags.PGM_MAXVAL:
        raise ImageError(f'Only maxval {flags.PGM_MAXVAL} is supported, got {maxval}')

    # Exactly one whitespace character separates header from raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ImageError('PGM raster is missing')
    payload = data[pos + 1:]
    if len(payload) < width * height:
        raise ImageError(f'PGM raster is truncated: {len(payload)} of {width * height} bytes')
    if len(payload) > width * height:
        raise ImageError(f'PGM has {len(payload) - width * height} trailing bytes')

    return GrayImage.from_bytes(width, height, payload)


def save_pgm(image: GrayImage) -> bytes:
    header = b'%s\n%d %d\n%d\n' % (flags.PGM_MAGIC, image.width, image.height, flags.PGM_MAXVAL)
    return header + image.to_bytes()


def histogram(image: GrayImage) -> np.ndarray:
    """Count of every pixel value 0..255"""
    return np.bincount(image.pixels.ravel(), minlength=256)


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def _next_power_of_two(value: int) -> int:
    return 1 << (value - 1).bit_length()


def pad_to_power_of_two(image: GrayImage) -> GrayImage:
    """Zero-pad image at the right and bottom up to power of two
    dimensions
    """
    height = _next_power_of_two(image.height)
    width = _next_power_of_two(image.width)
    if (height, width) == (image.height, image.width):
        return image
    padded = np.zeros((height, width), dtype=np.uint8)
    padded[:image.height, :image.width] = image.pixels
    return GrayImage(padded)


def power_spectrum(image: GrayImage, pad: bool = False, subtract_mean: bool = True) -> Spectrum:
    """
    Squared magnitude of the unnormalized 2D DFT,
    F(u, v) = sum x(r, c) * exp(-2j*pi*(u*r/H + v*c/W)), shifted so that
    DC is in the center. With this convention
    sum(spectrum) == W * H * sum(x ** 2)
    :param image:
    :param pad: zero-pad to power of two dimensions instead of raising
    :param subtract_mean: subtract the mean pixel value before the
     transform, so DC bin is zero
    :raises ImageError: if dimensions are not powers of two and pad is
     False
    :return:
    """
    if not (is_power_of_two(image.width) and is_power_of_two(image.height)):
        if not pad:
            raise ImageError(f'Image dimensions {image.width}x{image.height} are not powers of '
                             f'two, pad the image first')
        image = pad_to_power_of_two(image)

    x = image.pixels.astype(np.float64)
    if subtract_mean:
        x = x - x.mean()
    magnitudes = np.abs(np.fft.fft2(x)) ** 2
    return Spectrum(width=image.width, height=image.height,
                    magnitudes=np.fft.fftshift(magnitudes))


def spectrum_flatness(spectrum: Spectrum) -> Flatness:
    """
    Geometric mean to arithmetic mean ratio of non-DC bins, 1.0 for
    perfectly flat spectrum. Zero bins make geometric mean zero
    :param spectrum:
    :return: flatness, degenerate if all non-DC bins are zero
    """
    mask = np.ones(spectrum.magnitudes.shape, dtype=bool)
    mask[spectrum.dc_index] = False
    values = spectrum.magnitudes[mask]

    arith = float(values.mean()) if values.size else 0.0
    if arith == 0.0:
        return Flatness(value=0.0, degenerate=True)
    if np.any(values <= 0.0):
        return Flatness(value=0.0)

    geo = float(np.exp(np.mean(np.log(values))))
    return Flatness(value=min(geo / arith, 1.0))


def spectrum_to_image(spectrum: Spectrum) -> GrayImage:
    """log(1 + magnitude) scaled to 0..255"""
    scaled = np.log1p(spectrum.magnitudes)
    peak = scaled.max()
    if peak > 0:
        scaled = scaled * (255.0 / peak)
    return GrayImage(np.rint(scaled).astype(np.uint8))


def encrypt_image(image: GrayImage, password: bytes, params: CipherParams) -> GrayImage:
    """Cipherimage of the same dimensions: pixels are the ciphertext
    of the row-major plain pixel bytes
    """
    plain = image.to_bytes()
    keystream = params.keystream(password).next_bytes(len(plain))
    log.debug('Encrypting %dx%d image', image.width, image.height)
    return GrayImage.from_bytes(image.width, image.height, encrypt(plain, keystream))


def decrypt_image(image: GrayImage, password: bytes, params: CipherParams) -> GrayImage:
    cipher = image.to_bytes()
    keystream = params.keystream(password).next_bytes(len(cipher))
    return GrayImage.from_bytes(image.width, image.height, decrypt(cipher, keystream))
