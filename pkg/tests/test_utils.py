import pytest

from lifelike_crypt.utils import Slotinit, atomic_write, parse_size


class SlotinitStub(Slotinit):
    __slots__ = ('slot1', 'slot2', 'slot3', 'slot4')
    defaults = {'slot2': 'default_value2', 'slot3': 'default_value3'}


class SlotinitStubSlotsInAnotherOrder(Slotinit):
    __slots__ = ('slot4', 'slot2', 'slot3', 'slot1')
    defaults = {'slot2': 'default_value2', 'slot3': 'default_value3'}


class SlotinitStubAnotherSlots(Slotinit):
    __slots__ = ('slot1', 'slot2', 'slot4')
    defaults = {'slot2': 'default_value2'}


class SecretStub(Slotinit):
    __slots__ = ('rho', 'key')
    defaults = {'rho': 10}
    secret_slots = ('key', )


class TestSlotinit:
    def test_init__should_initialize_slots(self):
        obj = SlotinitStub(slot1='1', slot3='not default value', slot4=678)

        assert {s: getattr(obj, s) for s in obj.__slots__} == {
            'slot1': '1',
            'slot2': 'default_value2',
            'slot3': 'not default value',
            'slot4': 678
        }

    def test_init__missed_slot_without_default__should_raise_error(self):
        with pytest.raises(TypeError):
            SlotinitStub(slot1=1)

    def test_init__unknown_argument__should_raise_error(self):
        with pytest.raises(TypeError):
            SlotinitStub(slot1=1, slot4=4, slot5=5)

    def test_eq_ne__on_equal_slot_values__should_be_equal(self):
        obj1 = SlotinitStub(slot1=1, slot4=4, slot3='default_value3')
        # slot3 has the same default value
        obj2 = SlotinitStub(slot1=1, slot4=4)

        assert obj1 == obj2
        assert not obj1 != obj2
        assert hash(obj1) == hash(obj2)

    def test_eq_ne__when_equal_slots_in_different_order__should_be_equal(self):
        assert SlotinitStub(slot1=1, slot4=4) == SlotinitStubSlotsInAnotherOrder(slot1=1, slot4=4)

    def test_eq_ne__on_different_slots__should_not_be_equal(self):
        assert SlotinitStub(slot1=1, slot4=4) != SlotinitStubAnotherSlots(slot1=1, slot4=4)

    def test_eq_ne__on_other_type__should_not_be_equal(self):
        assert SlotinitStub(slot1=1, slot4=4) != (1, 'default_value2', 'default_value3', 4)

    def test_replace__should_return_modified_copy(self):
        obj = SlotinitStub(slot1=1, slot4=4)

        res = obj.replace(slot4=5)

        assert res.slot4 == 5
        assert res.slot1 == 1
        assert obj.slot4 == 4

    def test_repr__should_hide_secret_slots(self):
        res = repr(SecretStub(key=b'topsecret'))

        assert res == 'SecretStub(rho=10, key=<hidden>)'


class TestAtomicWrite:
    def test_atomic_write__on_success__should_replace_file(self, tmp_path):
        path = tmp_path / 'out.bin'
        path.write_bytes(b'old')

        with atomic_write(path) as f:
            f.write(b'new')

        assert path.read_bytes() == b'new'
        assert [p.name for p in tmp_path.iterdir()] == ['out.bin']

    def test_atomic_write__on_error__should_leave_nothing(self, tmp_path):
        path = tmp_path / 'out.bin'

        with pytest.raises(RuntimeError):
            with atomic_write(path) as f:
                f.write(b'partial')
                raise RuntimeError('boom')

        assert list(tmp_path.iterdir()) == []

    def test_atomic_write__on_error__should_keep_old_file(self, tmp_path):
        path = tmp_path / 'out.bin'
        path.write_bytes(b'old')

        with pytest.raises(RuntimeError):
            with atomic_write(str(path)) as f:
                f.write(b'partial')
                raise RuntimeError('boom')

        assert path.read_bytes() == b'old'


class TestParseSize:
    @pytest.mark.parametrize('text,expect', (('128x128', (128, 128)), ('16X8', (16, 8)),
                                             ('1x1', (1, 1))))
    def test_parse_size__should_return_rows_and_cols(self, text, expect):
        assert parse_size(text) == expect

    @pytest.mark.parametrize('text', ('128', '0x8', 'axb', '8x8x8', '-8x8', ''))
    def test_parse_size__on_malformed_text__should_raise_error(self, text):
        with pytest.raises(ValueError):
            parse_size(text)
