# mckp/core/parser.py
#
# The `MCKP 1` instance format:
#
#   MCKP 1
#   k b
#   n_1
#   p_11 c_11
#   ...
#   n_2
#   ...
#
# Numbers are shortest exact decimals, UTF-8, LF line endings.

import logging
import re
from pathlib import Path

from mckp.core.errors import ParseError, VersionMismatch
from mckp.core.models import validate_instance

logger = logging.getLogger(__name__)

FORMAT_MAGIC = 'MCKP'
FORMAT_VERSION = 1


def format_number(value):
    '''Shortest decimal that reads back to the same value.'''
    if isinstance(value, int):
        return str(value)
    text = repr(float(value))
    return text[:-2] if text.endswith('.0') else text


class InstanceParser:
    rHeaderPattern = re.compile(r'^(?P<magic>\S+) (?P<version>\d+)$')
    rIntPattern = re.compile(r'^[+-]?\d+$')
    rNumberPattern = re.compile(r'^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$')

    def __init__(self, text):
        self.lines = text.split('\n')
        if self.lines and self.lines[-1] == '':
            self.lines.pop()
        self.lineNo = 0

    def nextLine(self, what):
        if self.lineNo >= len(self.lines):
            raise ParseError(f"unexpected end of file, expected {what}", self.lineNo + 1)
        self.lineNo += 1
        return self.lines[self.lineNo - 1].rstrip('\r')

    def fields(self, what, count):
        tokens = self.nextLine(what).split()
        if len(tokens) != count:
            raise ParseError(f"expected {what}, got {len(tokens)} fields", self.lineNo)
        return tokens

    def number(self, token):
        if self.rIntPattern.match(token):
            return int(token)
        if self.rNumberPattern.match(token):
            return float(token)
        raise ParseError(f"not a number: {token!r}", self.lineNo)

    def count(self, token, what):
        if not self.rIntPattern.match(token):
            raise ParseError(f"{what} must be an integer, got {token!r}", self.lineNo)
        value = int(token)
        if value < 1:
            raise ParseError(f"{what} must be at least 1, got {value}", self.lineNo)
        return value

    def parseHeader(self):
        line = self.nextLine("header")
        m = self.rHeaderPattern.match(line)
        if not m or m.group('magic') != FORMAT_MAGIC:
            raise ParseError(f"bad header {line!r}, expected '{FORMAT_MAGIC} {FORMAT_VERSION}'",
                             self.lineNo)
        version = int(m.group('version'))
        if version != FORMAT_VERSION:
            raise VersionMismatch(f"format version {version} is not supported "
                                  f"(expected {FORMAT_VERSION})", self.lineNo)

    def parse(self):
        self.parseHeader()
        k_token, b_token = self.fields("'k b'", 2)
        k = self.count(k_token, "group count")
        budget = self.number(b_token)

        groups = []
        for i in range(k):
            (n_token,) = self.fields(f"item count of group {i}", 1)
            n = self.count(n_token, f"item count of group {i}")
            items = []
            for j in range(n):
                p, c = self.fields(f"'profit cost' for item {j} of group {i}", 2)
                items.append((self.number(p), self.number(c)))
            groups.append(items)

        for extra in self.lines[self.lineNo:]:
            self.lineNo += 1
            if extra.strip():
                raise ParseError("trailing data after the last group", self.lineNo)

        return validate_instance(groups, budget)


def loads(text):
    return InstanceParser(text).parse()


def dumps(instance):
    lines = [f"{FORMAT_MAGIC} {FORMAT_VERSION}",
             f"{instance.k} {format_number(instance.budget)}"]
    for g in instance.groups:
        lines.append(str(g.n))
        lines.extend(f"{format_number(p)} {format_number(c)}" for p, c in g.items())
    return '\n'.join(lines) + '\n'


def read_instance(path):
    data = Path(path).read_bytes()
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as e:
        line = data.count(b'\n', 0, e.start) + 1
        raise ParseError(f"invalid UTF-8 byte 0x{data[e.start]:02x}", line) from e
    instance = loads(text)
    logger.debug(f"Read {instance} from {path}")
    return instance


def write_instance(instance, path):
    Path(path).write_bytes(dumps(instance).encode('utf-8'))
    logger.debug(f"Wrote {instance} to {path}")
