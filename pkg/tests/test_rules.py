import pytest

from lifelike_crypt.exceptions import RuleError
from lifelike_crypt.rules import (
    CatalogEntry,
    Rule,
    RuleCatalog,
    add_rule,
    catalog,
    format_rule,
    parse_rule,
    resolve_rule
)


class TestParseRule:
    @pytest.mark.parametrize('text,birth,survival', (
        ('B3/S23', {3}, {2, 3}),
        ('B3\\S23', {3}, {2, 3}),
        ('b3/s23', {3}, {2, 3}),
        (' B36 / S23 ', {3, 6}, {2, 3}),
        ('B1357/S02468', {1, 3, 5, 7}, {0, 2, 4, 6, 8}),
        ('B/S', set(), set()),
        ('B2/S', {2}, set()),
        ('B0/S8', {0}, {8}),
    ))
    def test_parse_rule__on_valid_notation__should_return_digit_sets(self, text, birth, survival):
        res = parse_rule(text)

        assert res.birth == frozenset(birth)
        assert res.survival == frozenset(survival)

    @pytest.mark.parametrize('text', (
        'B9/S2',
        'B3/S239',
        'B33/S23',
        'B3/S223',
        'B3S23',
        '3/23',
        'S23/B3',
        'B3/S2a',
        '',
        '   ',
    ))
    def test_parse_rule__on_invalid_notation__should_raise_error(self, text):
        with pytest.raises(RuleError):
            parse_rule(text)

    def test_parse_rule__name__should_be_set_as_label(self):
        res = parse_rule('B3/S23', name='Life')

        assert res.name == 'Life'

    def test_eq__should_ignore_digit_order_and_name(self):
        assert parse_rule('B31/S2') == parse_rule('B13/S2', name='Other')
        assert hash(parse_rule('B31/S2')) == hash(parse_rule('B13/S2', name='Other'))

    def test_eq__on_different_sets__should_not_be_equal(self):
        assert parse_rule('B3/S23') != parse_rule('B3/S2')


class TestFormatRule:
    @pytest.mark.parametrize('birth,survival,expect', (
        ({3, 1}, {2}, 'B13/S2'),
        (set(), set(), 'B/S'),
        ({1, 3, 5, 7}, {8, 6, 4, 2, 0}, 'B1357/S02468'),
    ))
    def test_format_rule__should_return_canonical_notation(self, birth, survival, expect):
        rule = Rule(birth=frozenset(birth), survival=frozenset(survival))

        assert format_rule(rule) == expect

    @pytest.mark.parametrize('text,expect', (
        ('B3/S23', 'B3/S23'),
        ('b63\\s32', 'B36/S23'),
        ('B/S', 'B/S'),
    ))
    def test_format_rule__after_parse__should_canonicalize(self, text, expect):
        assert format_rule(parse_rule(text)) == expect

    def test_str__should_include_name(self):
        assert str(parse_rule('B3/S23', name='Life')) == 'Life (B3/S23)'
        assert str(parse_rule('B3/S23')) == 'B3/S23'


class TestCatalog:
    def test_catalog__should_contain_named_rules_in_order(self):
        expect = [
            ('Life', 'B3/S23'),
            ('HighLife', 'B36/S23'),
            ('B23/S36', 'B23/S36'),
            ('Fredkin', 'B1357/S02468'),
            ('Amoeba', 'B357/S1358'),
            ('Seeds', 'B2/S'),
            ('Replicator', 'B1357/S1357'),
            ('Day&Night', 'B3678/S34678'),
            ('2x2', 'B36/S125'),
            ('Diamoeba', 'B35678/S5678'),
            ('Coral', 'B3/S45678'),
            ('Anneal', 'B4678/S35678'),
        ]

        res = [(e.name, format_rule(e.rule)) for e in catalog()]

        assert res == expect

    def test_catalog__every_entry__should_round_trip_through_notation(self):
        for entry in catalog():
            assert parse_rule(format_rule(entry.rule)) == entry.rule
            assert entry.rule.name == entry.name

    def test_catalog__should_be_deterministic(self):
        assert catalog().names == catalog().names

    def test_getitem__on_unknown_name__should_raise_error(self):
        with pytest.raises(RuleError):
            _ = catalog()['Unknown']

    def test_subset__should_keep_catalog_order(self):
        res = catalog().subset(['Fredkin', 'Life'])

        assert res.names == ['Life', 'Fredkin']

    def test_subset__on_unknown_name__should_raise_error(self):
        with pytest.raises(RuleError):
            catalog().subset(['Life', 'Unknown'])

    def test_add__on_duplicate_name__should_raise_error(self):
        obj = RuleCatalog([CatalogEntry('A', parse_rule('B3/S23'))])

        with pytest.raises(RuleError):
            obj.add('A', parse_rule('B2/S'))

    def test_add_rule__on_registered_name__should_raise_error(self):
        with pytest.raises(RuleError):
            add_rule('Life', 'B3/S23')


class TestResolveRule:
    def test_resolve_rule__on_catalog_name__should_return_catalog_rule(self):
        res = resolve_rule('Fredkin')

        assert res == parse_rule('B1357/S02468')
        assert res.name == 'Fredkin'

    def test_resolve_rule__on_notation__should_parse_it(self):
        assert resolve_rule('B36/S23') == parse_rule('B36/S23')

    def test_resolve_rule__on_garbage__should_raise_error(self):
        with pytest.raises(RuleError):
            resolve_rule('NoSuchRule')
