__all__ = [
    'Slotinit',
    'atomic_write',
    'parse_size'
]

import contextlib
import os
import tempfile
from pathlib import Path
from typing import Any, BinaryIO, Dict, Iterator, Tuple, Union


class Slotinit(object):
    """
    Set class __slots__ in constructor kwargs
    If slot was omitted in kwargs then its value will be taken from
    `defaults` dict (if any). Omitting a slot without a default is an
    error. Slots listed in `secret_slots` are masked in repr.

    Example:
        class Params(Slotinit):
            __slots__ = ('rho', 'key')
            defaults = {'rho': 10}
            secret_slots = ('key', )

        # rho=10, key=b'...', repr is "Params(rho=10, key=<hidden>)"
        params = Params(key=b'...')
    """

    defaults: Dict[str, Any] = {}
    secret_slots: Tuple[str, ...] = ()
    __slots__ = ()

    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self.__slots__)
        if unknown:
            raise TypeError(f'{self.__class__.__name__} got unexpected arguments: '
                            f'{sorted(unknown)}')
        for slot in self.__slots__:
            if slot in kwargs:
                setattr(self, slot, kwargs[slot])
            elif slot in self.defaults:
                setattr(self, slot, self.defaults[slot])
            else:
                raise TypeError(f'{self.__class__.__name__} missing argument {slot!r}')

    def replace(self, **kwargs):
        """Copy of the object with some slots replaced"""
        values = {slot: getattr(self, slot) for slot in self.__slots__}
        values.update(kwargs)
        return self.__class__(**values)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Slotinit) or set(self.__slots__) != set(other.__slots__):
            return False
        return all(getattr(self, slot) == getattr(other, slot) for slot in self.__slots__)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(getattr(self, slot) for slot in self.__slots__))

    def __repr__(self):
        params = ', '.join(
            f'{slot}=<hidden>' if slot in self.secret_slots else f'{slot}={getattr(self, slot)!r}'
            for slot in self.__slots__
        )
        return f'{self.__class__.__name__}({params})'


@contextlib.contextmanager
def atomic_write(path: Union[str, Path]) -> Iterator[BinaryIO]:
    """
    Open a temporary file next to `path` for binary writing and move
    it over `path` only if the block finished without exception.
    Nothing is left at `path` on failure
    :param path: destination file path
    :return: binary file object
    """
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', suffix='.tmp',
                                    dir=str(path.parent.resolve()))
    try:
        with os.fdopen(fd, 'wb') as f:
            yield f
        os.replace(tmp_name, str(path))
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp_name)
        raise


def parse_size(text: str) -> Tuple[int, int]:
    """
    Parse grid size string "MxN", e.g. "128x128"
    :param text:
    :raises ValueError: if string is malformed or dimensions are not
     positive
    :return: (rows, cols)
    """
    parts = text.lower().split('x')
    if len(parts) != 2:
        raise ValueError(f'Grid size must look like MxN, got {text!r}')
    m, n = (int(p) for p in parts)
    if m < 1 or n < 1:
        raise ValueError(f'Grid dimensions must be positive, got {text!r}')
    return m, n
