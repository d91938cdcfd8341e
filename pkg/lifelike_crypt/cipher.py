__all__ = [
    'ChainingMode',
    'CipherParams',
    'CiphertextEnvelope',
    'encrypt',
    'decrypt',
    'seal',
    'open_envelope'
]

import logging
import struct
from enum import Enum
from typing import NamedTuple, Union

import numpy as np

from lifelike_crypt import flags
from lifelike_crypt.exceptions import CipherError, EnvelopeError, LifelikeCryptError
from lifelike_crypt.keystream import KeystreamState
from lifelike_crypt.rules import Rule, format_rule, parse_rule
from lifelike_crypt.seeding import SeedConfig, check_mu
from lifelike_crypt.utils import Slotinit

log = logging.getLogger('lifelike-crypt')

# magic, version, rule length; rule text follows
_HEAD = struct.Struct('>4sBB')
# m, n, rho, alpha, mu, plaintext length
_PARAMS = struct.Struct('>HHBIdQ')


class ChainingMode(Enum):
    """How the chaining value before the first byte is chosen.

    `zero_iv` uses C_0 = 0x00 and is the only decryptable mode.

    `self_chained` uses C_0 = Y_1 xor P_1, which makes the first ciphertext
    byte always zero and cannot be decrypted without knowing P_1. It
    is kept to study that behavior and is encryption-only
    """
    zero_iv = 0
    self_chained = 1


class CipherParams(Slotinit):
    """Public parameters needed to rebuild the keystream

    * rule -- CA rule
    * m, n -- grid rows and cols, m*n must be multiple of 8
    * rho -- raw bytes per keystream byte, 1..255
    * mu -- logistic map parameter
    * alpha -- logistic map transient, 0..2^32-1
    * version -- container format version
    """
    __slots__ = ('rule', 'm', 'n', 'rho', 'mu', 'alpha', 'version')
    defaults = {
        'm': flags.DEFAULT_GRID_SIZE[0],
        'n': flags.DEFAULT_GRID_SIZE[1],
        'rho': flags.DEFAULT_RHO,
        'mu': flags.DEFAULT_MU,
        'alpha': flags.DEFAULT_ALPHA,
        'version': flags.ENVELOPE_VERSION
    }

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        if not isinstance(self.rule, Rule):
            raise CipherError(f'rule must be a Rule object, got {self.rule!r}')
        if 0 in self.rule.birth:
            raise CipherError(f'Rule {format_rule(self.rule)} contains B0')
        if not (1 <= self.m <= 0xFFFF and 1 <= self.n <= 0xFFFF):
            raise CipherError(f'Grid dimensions must be in 1..65535, got {self.m}x{self.n}')
        if (self.m * self.n) % 8:
            raise CipherError(f'Grid {self.m}x{self.n} cell count is not a multiple of 8')
        if not 1 <= self.rho <= 0xFF:
            raise CipherError(f'rho must be in 1..255, got {self.rho}')
        if not 0 <= self.alpha <= 0xFFFFFFFF:
            raise CipherError(f'alpha must be in 0..2^32-1, got {self.alpha}')
        try:
            check_mu(self.mu)
        except LifelikeCryptError as e:
            raise CipherError(str(e)) from e
        if self.version != flags.ENVELOPE_VERSION:
            raise CipherError(f'Unsupported format version {self.version}')

    def seed_config(self, password: bytes) -> SeedConfig:
        return SeedConfig(password=password, mu=self.mu, alpha=self.alpha)

    def keystream(self, password: bytes) -> KeystreamState:
        return KeystreamState.from_seed(self.seed_config(password), self.rule,
                                        self.m, self.n, self.rho)


class CiphertextEnvelope(NamedTuple):
    """Ciphertext with public parameters needed for decryption"""
    params: CipherParams
    payload: bytes
    plaintext_length: int

    def to_bytes(self) -> bytes:
        """
        Container layout, big-endian: magic "CACR", version byte, rule
        text length byte + ASCII rule, m and n (16 bit), rho (8 bit),
        alpha (32 bit), mu (binary64 bit pattern), plaintext length
        (64 bit), payload
        """
        prm = self.params
        rule_text = format_rule(prm.rule).encode('ascii')
        return b''.join((
            _HEAD.pack(flags.ENVELOPE_MAGIC, prm.version, len(rule_text)),
            rule_text,
            _PARAMS.pack(prm.m, prm.n, prm.rho, prm.alpha, prm.mu, self.plaintext_length),
            self.payload
        ))

    @classmethod
    def from_bytes(cls, data: bytes) -> 'CiphertextEnvelope':
        """
        Parse container bytes
        :param data:
        :raises EnvelopeError: on truncated data, wrong magic,
         unsupported version or invalid parameters
        :return:
        """
        data = bytes(data)
        if len(data) < _HEAD.size:
            raise EnvelopeError(f'Container is truncated: {len(data)} bytes')
        magic, version, rule_len = _HEAD.unpack_from(data, 0)
        if magic != flags.ENVELOPE_MAGIC:
            raise EnvelopeError(f'Bad container magic {magic!r}')
        if version != flags.ENVELOPE_VERSION:
            raise EnvelopeError(f'Unsupported container version {version}')

        offset = _HEAD.size
        if len(data) < offset + rule_len + _PARAMS.size:
            raise EnvelopeError('Container header is truncated')
        try:
            rule = parse_rule(data[offset:offset + rule_len].decode('ascii'))
        except (UnicodeDecodeError, LifelikeCryptError) as e:
            raise EnvelopeError(f'Bad rule in container header: {e}') from e
        offset += rule_len

        m, n, rho, alpha, mu, length = _PARAMS.unpack_from(data, offset)
        offset += _PARAMS.size
        payload = data[offset:]
        if len(payload) != length:
            raise EnvelopeError(f'Container declares {length} payload bytes, '
                                f'got {len(payload)}')
        try:
            params = CipherParams(rule=rule, m=m, n=n, rho=rho, mu=mu, alpha=alpha,
                                  version=version)
        except CipherError as e:
            raise EnvelopeError(f'Bad parameters in container header: {e}') from e

        return cls(params=params, payload=payload, plaintext_length=length)


def _as_array(data: bytes) -> np.ndarray:
    return np.frombuffer(bytes(data), dtype=np.uint8)


def _keystream_for(data: np.ndarray, keystream: bytes) -> np.ndarray:
    ks = _as_array(keystream)
    if ks.size < data.size:
        raise CipherError(f'Keystream exhausted: {ks.size} bytes for {data.size} bytes message')
    return ks[:data.size]


def encrypt(plaintext: bytes, keystream: bytes,
            chaining: ChainingMode = ChainingMode.zero_iv) -> bytes:
    """
    C_i = P_i xor C_(i-1) xor Y_i
    :param plaintext: P_1..P_np
    :param keystream: Y_1..Y_k, k >= np
    :param chaining: choice of C_0
    :raises CipherError: if keystream is shorter than plaintext
    :return: ciphertext of the plaintext length
    """
    p = _as_array(plaintext)
    y = _keystream_for(p, keystream)
    if p.size == 0:
        return b''

    # The recurrence unrolls to a prefix XOR of P xor Y
    c = np.bitwise_xor.accumulate(p ^ y)
    if chaining is ChainingMode.self_chained:
        c ^= p[0] ^ y[0]
    return c.tobytes()


def decrypt(ciphertext: bytes, keystream: bytes,
            chaining: ChainingMode = ChainingMode.zero_iv) -> bytes:
    """
    P_i = C_i xor Y_i xor C_(i-1), C_0 = 0x00
    :param ciphertext: C_1..C_np
    :param keystream: Y_1..Y_k, k >= np
    :param chaining: only `zero_iv` is decryptable
    :raises CipherError: if keystream is shorter than ciphertext or
     chaining mode is not decryptable
    :return: plaintext
    """
    if chaining is not ChainingMode.zero_iv:
        raise CipherError(f'Chaining mode {chaining.name!r} is encryption-only')

    c = _as_array(ciphertext)
    y = _keystream_for(c, keystream)
    if c.size == 0:
        return b''

    prev = np.concatenate((np.zeros(1, dtype=np.uint8), c[:-1]))
    return (c ^ y ^ prev).tobytes()


def seal(plaintext: bytes, password: bytes, params: CipherParams) -> CiphertextEnvelope:
    """
    Encrypt plaintext with the password
    :param plaintext:
    :param password: 16 bytes
    :param params: public cipher parameters
    :return: envelope with parameters and ciphertext
    """
    plaintext = bytes(plaintext)
    keystream = params.keystream(password).next_bytes(len(plaintext))
    payload = encrypt(plaintext, keystream)
    log.debug('Sealed %d bytes with %s', len(plaintext), format_rule(params.rule))
    return CiphertextEnvelope(params=params, payload=payload, plaintext_length=len(plaintext))


def open_envelope(envelope: Union[CiphertextEnvelope, bytes], password: bytes) -> bytes:
    """
    Decrypt envelope with the password. Scheme has no integrity check,
    so a wrong password just gives garbage
    :param envelope: envelope object or container bytes
    :param password: 16 bytes
    :raises EnvelopeError: if container is malformed
    :return: plaintext
    """
    if not isinstance(envelope, CiphertextEnvelope):
        envelope = CiphertextEnvelope.from_bytes(envelope)
    if len(envelope.payload) != envelope.plaintext_length:
        raise EnvelopeError(f'Envelope declares {envelope.plaintext_length} bytes, '
                            f'payload has {len(envelope.payload)}')

    keystream = envelope.params.keystream(password).next_bytes(envelope.plaintext_length)
    return decrypt(envelope.payload, keystream)
