__all__ = [
    'LifelikeCryptError',
    'RuleError',
    'GridError',
    'SeedError',
    'KeystreamError',
    'CipherError',
    'EnvelopeError',
    'AnalysisError',
    'ImageError'
]


class LifelikeCryptError(Exception):
    """Generic error"""


class RuleError(LifelikeCryptError):
    """Error related to rule notation or the rule catalog"""


class GridError(LifelikeCryptError):
    """Error related to grid shape, grid text or CA evolution"""


class SeedError(LifelikeCryptError):
    """Error related to password or logistic map parameters"""


class KeystreamError(LifelikeCryptError):
    """Error which could occur while drawing or exporting keystream"""


class CipherError(LifelikeCryptError):
    """Error which could occur during encryption or decryption"""


class EnvelopeError(CipherError):
    """Ciphertext container is malformed, truncated or has
    unsupported parameters
    """


class AnalysisError(LifelikeCryptError):
    """Error related to chaos metrics or statistical tests input"""


class ImageError(AnalysisError):
    """Error related to image format or spectrum input"""
