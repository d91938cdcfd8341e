__all__ = [
    'Rule',
    'CatalogEntry',
    'RuleCatalog',
    'catalog_registry',
    'add_rule',
    'parse_rule',
    'format_rule',
    'catalog',
    'resolve_rule'
]

import re
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional

from lifelike_crypt.exceptions import RuleError

#: Moore neighborhood size, so neighbor counts are 0..8
MAX_NEIGHBORS = 8

_notation_re = re.compile(r'^\s*B(?P<birth>[0-9]*)\s*[/\\]\s*S(?P<survival>[0-9]*)\s*$',
                          re.IGNORECASE)


class Rule(NamedTuple):
    """Life-Like rule: neighbor counts which give birth to a dead
    cell and counts which keep an alive cell alive.

    Rules are compared by their birth/survival sets only, the name
    is just a label
    """
    birth: FrozenSet[int]
    survival: FrozenSet[int]
    name: Optional[str] = None

    def __eq__(self, other):
        if not isinstance(other, Rule):
            return NotImplemented
        return self.birth == other.birth and self.survival == other.survival

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __hash__(self):
        return hash((self.birth, self.survival))

    @property
    def notation(self) -> str:
        return format_rule(self)

    def __str__(self):
        return f'{self.name} ({self.notation})' if self.name else self.notation


def _parse_digits(digits: str, part: str, text: str) -> FrozenSet[int]:
    res = set()
    for char in digits:
        value = int(char)
        if value > MAX_NEIGHBORS:
            raise RuleError(f'Digit {value} in {part} part of {text!r} is out of range 0..8')
        if value in res:
            raise RuleError(f'Digit {value} is repeated in {part} part of {text!r}')
        res.add(value)
    return frozenset(res)


def parse_rule(text: str, name: Optional[str] = None) -> Rule:
    """
    Parse rule written in Golly B/S notation, e.g. "B3/S23". Both
    slash and backslash are accepted as separator
    :param text: rule notation
    :param name: optional label for the rule
    :raises RuleError: on malformed notation, digit out of 0..8 range
     or repeated digit
    :return: Rule object
    """
    if not text or not text.strip():
        raise RuleError('Rule notation is empty')

    match = _notation_re.match(text)
    if match is None:
        raise RuleError(f'Malformed rule notation {text!r}, expected "B<digits>/S<digits>"')

    return Rule(birth=_parse_digits(match.group('birth'), 'birth', text),
                survival=_parse_digits(match.group('survival'), 'survival', text),
                name=name)


def format_rule(rule: Rule) -> str:
    """Canonical "B.../S..." notation with ascending digits"""
    birth = ''.join(str(x) for x in sorted(rule.birth))
    survival = ''.join(str(x) for x in sorted(rule.survival))
    return f'B{birth}/S{survival}'


class CatalogEntry(NamedTuple):
    name: str
    rule: Rule


#: Registry of named rules in catalog order. Mapping of rule name and
#: its Rule object
catalog_registry: Dict[str, Rule] = {}


def add_rule(name: str, notation: str):
    """
    Add named rule to the catalog registry
    :param name: unique rule name
    :param notation: rule in B/S notation
    :return:
    """
    if name in catalog_registry:
        raise RuleError(f'Rule name {name!r} is already registered')

    catalog_registry[name] = parse_rule(notation, name=name)


class RuleCatalog:
    """Ordered collection of rules with unique names"""
    def __init__(self, entries: Iterable[CatalogEntry] = ()):
        self._entries: Dict[str, CatalogEntry] = {}
        for entry in entries:
            self.add(entry.name, entry.rule)

    def add(self, name: str, rule: Rule):
        if name in self._entries:
            raise RuleError(f'Duplicate rule name {name!r} in catalog')
        self._entries[name] = CatalogEntry(name=name, rule=rule._replace(name=name))

    @property
    def entries(self) -> List[CatalogEntry]:
        return list(self._entries.values())

    @property
    def names(self) -> List[str]:
        return list(self._entries.keys())

    def subset(self, names: Iterable[str]) -> 'RuleCatalog':
        """Catalog which contains only given rules, in catalog order"""
        names = set(names)
        unknown = names - set(self._entries)
        if unknown:
            raise RuleError(f'Unknown rule names: {sorted(unknown)}')
        return RuleCatalog(e for e in self._entries.values() if e.name in names)

    def __getitem__(self, name: str) -> Rule:
        try:
            return self._entries[name].rule
        except KeyError as e:
            raise RuleError(f'Unknown rule name {name!r}') from e

    def __contains__(self, name) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self._entries.values())

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f'RuleCatalog({self.names!r})'


add_rule('Life', 'B3/S23')
add_rule('HighLife', 'B36/S23')
add_rule('B23/S36', 'B23/S36')
add_rule('Fredkin', 'B1357/S02468')
add_rule('Amoeba', 'B357/S1358')
add_rule('Seeds', 'B2/S')
add_rule('Replicator', 'B1357/S1357')
add_rule('Day&Night', 'B3678/S34678')
add_rule('2x2', 'B36/S125')
add_rule('Diamoeba', 'B35678/S5678')
add_rule('Coral', 'B3/S45678')
add_rule('Anneal', 'B4678/S35678')


def catalog() -> RuleCatalog:
    """Default rule catalog in its fixed order"""
    return RuleCatalog(CatalogEntry(name, rule) for name, rule in catalog_registry.items())


def resolve_rule(text: str) -> Rule:
    """Catalog rule by its name, otherwise parse the text as notation"""
    if text in catalog_registry:
        return catalog_registry[text]
    return parse_rule(text)
