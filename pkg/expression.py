"""
Polynomial expression language of case files and the command line.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' | <juxtaposition>) unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') INT)?
    atom   := INT | 'x' | 'y' | '(' expr ')'

Division is only by nonzero constants, so ``3/2*x`` and ``(x + y)/4`` parse while
``x/y`` does not. Every error carries the line and column where it was detected.
"""

import re
from dataclasses import dataclass

import sympy as sp

from algebra import X, Y, poly2, terms_of
from errors import ParseError

VARIABLES = {'x': X, 'y': Y}

_TOKEN = re.compile(r'\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]\w*))')


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _position(text, offset):
    line = text.count('\n', 0, offset) + 1
    start = text.rfind('\n', 0, offset) + 1
    return line, offset - start + 1


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            skipped = len(text[pos:]) - len(text[pos:].lstrip())
            line, column = _position(text, pos + skipped)
            raise ParseError(f'unexpected character {text[pos + skipped]!r}', line, column)
        number, op, name = match.groups()
        start = match.start(match.lastindex)
        line, column = _position(text, start)
        if number is not None:
            tokens.append(Token('int', number, line, column))
        elif op is not None:
            tokens.append(Token('^' if op == '**' else op, op, line, column))
        else:
            # juxtaposed variables: 4xy is 4*x*y
            if not set(name) <= set(VARIABLES):
                raise ParseError(f'unknown variable {name!r}', line, column)
            for k, letter in enumerate(name):
                tokens.append(Token('var', letter, line, column + k))
        pos = match.end()
    line, column = _position(text, len(text))
    tokens.append(Token('end', '', line, column))
    return tokens


class Parser:
    """Recursive-descent parser from tokens to a sympy expression."""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.current
        self.pos += 1
        return token

    def expect(self, kind):
        token = self.current
        if token.kind != kind:
            found = token.text or 'end of input'
            raise ParseError(f'expected {kind!r}, found {found!r}', token.line, token.column)
        return self.advance()

    def parse(self):
        if self.current.kind == 'end':
            raise ParseError('empty expression', self.current.line, self.current.column)
        value = self.expr()
        if self.current.kind != 'end':
            token = self.current
            raise ParseError(f'unexpected {token.text!r}', token.line, token.column)
        return value

    def expr(self):
        value = self.term()
        while self.current.kind in ('+', '-'):
            op = self.advance()
            rhs = self.term()
            value = value + rhs if op.kind == '+' else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            kind = self.current.kind
            if kind == '*':
                self.advance()
                value = value * self.unary()
            elif kind == '/':
                op = self.advance()
                divisor = self.unary()
                if not divisor.is_number:
                    raise ParseError('division is only by constants', op.line, op.column)
                if divisor == 0:
                    raise ParseError('division by zero', op.line, op.column)
                value = value / divisor
            elif kind in ('int', 'var', '('):
                value = value * self.unary()
            else:
                return value

    def unary(self):
        if self.current.kind == '-':
            self.advance()
            return -self.unary()
        if self.current.kind == '+':
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.current.kind == '^':
            self.advance()
            exponent = self.expect('int')
            return base ** int(exponent.text)
        return base

    def atom(self):
        token = self.current
        if token.kind == 'int':
            self.advance()
            return sp.Integer(int(token.text))
        if token.kind == 'var':
            self.advance()
            return VARIABLES[token.text]
        if token.kind == '(':
            self.advance()
            value = self.expr()
            self.expect(')')
            return value
        found = token.text or 'end of input'
        raise ParseError(f'unexpected {found!r}', token.line, token.column)


def parse_expression(text):
    """sympy expression of a polynomial written in the case-file language."""
    return sp.expand(Parser(text).parse())


def parse_polynomial(text):
    """Poly over the rationals in x, y."""
    return poly2(parse_expression(text))


def _monomial(i, j):
    parts = []
    for name, e in (('x', i), ('y', j)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f'{name}^{e}')
    return '*'.join(parts)


def render_poly(f):
    """Canonical text of a Poly: by increasing degree, higher powers of x first."""
    terms = terms_of(f)
    if not terms:
        return '0'
    K = f.get_domain()
    out = []
    for (i, j) in sorted(terms, key=lambda m: (m[0] + m[1], -m[0])):
        c = K.to_sympy(terms[(i, j)])
        negative = c.is_number and c.is_real and c < 0
        magnitude = -c if negative else c
        mono = _monomial(i, j)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        elif magnitude.is_Rational:
            body = f'{magnitude}*{mono}'
        else:
            body = f'({magnitude})*{mono}'
        if not out:
            out.append(f'-{body}' if negative else body)
        else:
            out.append(f'- {body}' if negative else f'+ {body}')
    return ' '.join(out).replace('**', '^')
