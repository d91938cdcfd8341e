__all__ = [
    'SinkTracer'
]

import logging

import wrapt

from lifelike_crypt.exceptions import KeystreamError

log = logging.getLogger('lifelike-crypt')


class SinkTracer(wrapt.ObjectProxy):
    """
    Binary output sink wrapper which acts as the original object, but
    counts written bytes, traces writes to log and converts OS errors
    to KeystreamError
    """

    def __init__(self, wrapped, name: str = 'sink'):
        super().__init__(wrapped)
        self._self_name = name
        self._self_written = 0
        self._self_writes = 0

    @property
    def written(self) -> int:
        """Bytes written through this wrapper so far"""
        return self._self_written

    def write(self, data) -> int:
        try:
            res = self.__wrapped__.write(data)
        except OSError as e:
            raise KeystreamError(f'Write to {self._self_name} failed after '
                                 f'{self._self_written} bytes: {e}') from e

        # Raw streams may write less than given
        count = len(data) if res is None else res
        if count != len(data):
            raise KeystreamError(f'Short write to {self._self_name}: {count} of {len(data)} bytes')

        self._self_written += count
        self._self_writes += 1
        log.debug('* %s.write(%d bytes), total %d', self._self_name, count, self._self_written)
        return count

    def flush(self):
        try:
            self.__wrapped__.flush()
        except OSError as e:
            raise KeystreamError(f'Flush of {self._self_name} failed: {e}') from e
