"""The quantum-torus observable algebra and its modular-group action.

Group elements of the integer Heisenberg group are stored in the symmetric normal
form ``zeta^c * Wh(a, b)`` with ``Wh(a, b) = zeta^(a*b) * W(0,1)^b * W(1,0)^a``.
In that basis the product is

    Wh(a, b) Wh(a', b') = zeta^(a*b' - a'*b) Wh(a + a', b + b')

so ``W(1,0) W(0,1) = zeta^2 W(0,1) W(1,0)``, and SL(2, Z) acts by substituting the
exponent pair with no phase correction. Exponents are Python ints, so they never
wrap around.

Coefficients of :class:`AlgebraElement` may be any Python numbers. Integers,
fractions and complex numbers built from them stay exact; floating coefficients
are compared with an absolute tolerance of ``FLOAT_TOL``.
"""

from __future__ import annotations

import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple

__all__ = [
    "FLOAT_TOL",
    "GroupWord",
    "IDENTITY",
    "AlgebraElement",
    "SL2Z",
    "S",
    "T",
    "mul_word",
    "inverse_word",
    "mul",
    "stabilize",
    "stable_mul",
    "mcg_act",
    "act_word",
    "w_basis",
    "from_w_basis",
    "parse_element",
    "parse_sl2z",
    "ExpressionError",
    "format_element",
    "format_word",
]

FLOAT_TOL = 1e-12


class ExpressionError(ValueError):
    pass


class GroupWord(NamedTuple):
    """``zeta^c * Wh(a, b)``."""

    c: int
    a: int
    b: int

    def __mul__(self, other):  # type: ignore[override]
        if isinstance(other, GroupWord):
            return mul_word(self, other)
        return NotImplemented

    def __rmul__(self, other):  # tuple * int repetition would be meaningless here
        return NotImplemented

    @property
    def momentum(self) -> tuple[int, int]:
        return (self.a, self.b)


IDENTITY = GroupWord(0, 0, 0)


def mul_word(w: GroupWord, v: GroupWord) -> GroupWord:
    return GroupWord(w.c + v.c + (w.a * v.b - v.a * w.b), w.a + v.a, w.b + v.b)


def inverse_word(w: GroupWord) -> GroupWord:
    # Wh(a,b) Wh(-a,-b) has cocycle 0, so the inverse is just the negation
    return GroupWord(-w.c, -w.a, -w.b)


def w_basis(w: GroupWord) -> tuple[int, int, int]:
    """Return ``(e, a, b)`` with ``w = zeta^e * W(0,1)^b W(1,0)^a``."""
    return (w.c + w.a * w.b, w.a, w.b)


def from_w_basis(e: int, a: int, b: int) -> GroupWord:
    """The word ``zeta^e * W(0,1)^b W(1,0)^a`` in normal form."""
    return GroupWord(e - a * b, a, b)


# -- coefficients ------------------------------------------------------------

def _is_exact(x) -> bool:
    if isinstance(x, complex):
        return False
    return isinstance(x, (numbers.Rational, bool))


def _is_zero(x) -> bool:
    if _is_exact(x):
        return x == 0
    return abs(x) <= FLOAT_TOL


def _coeff_equal(x, y) -> bool:
    if _is_exact(x) and _is_exact(y):
        return x == y
    return abs(x - y) <= FLOAT_TOL


class AlgebraElement:
    """A finite complex combination of group words, kept in canonical sparse form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[GroupWord, complex] | None = None):
        clean: dict[GroupWord, complex] = {}
        for w, coef in (terms or {}).items():
            w = GroupWord(*w)
            clean[w] = clean.get(w, 0) + coef
        self._terms = {w: c for w, c in clean.items() if not _is_zero(c)}

    @classmethod
    def word(cls, w: GroupWord | tuple[int, int, int], coef=1) -> "AlgebraElement":
        return cls({GroupWord(*w): coef})

    @classmethod
    def scalar(cls, coef) -> "AlgebraElement":
        return cls({IDENTITY: coef})

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls.scalar(1)

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    @property
    def terms(self) -> dict[GroupWord, complex]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[GroupWord, complex]]:
        return iter(sorted(self._terms.items(), key=lambda t: (t[0].a, t[0].b, t[0].c)))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, w) -> complex:
        return self._terms.get(GroupWord(*w), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, numbers.Number):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        for w in self._terms.keys() | other._terms.keys():
            if not _coeff_equal(self._terms.get(w, 0), other._terms.get(w, 0)):
                return False
        return True

    __hash__ = None  # tolerance-based equality

    def __add__(self, other) -> "AlgebraElement":
        if isinstance(other, numbers.Number):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return AlgebraElement(out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> "AlgebraElement":
        if isinstance(other, numbers.Number):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "AlgebraElement":
        return (-self) + other

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, numbers.Number):
            return AlgebraElement({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other) -> "AlgebraElement":
        if isinstance(other, numbers.Number):
            return AlgebraElement({w: other * c for w, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, n: int) -> "AlgebraElement":
        if not isinstance(n, numbers.Integral):
            raise TypeError("only integer powers are defined")
        base = self
        if n < 0:
            base = base.inverse()
            n = -n
        result = AlgebraElement.one()
        while n:
            if n & 1:
                result = mul(result, base)
            base = mul(base, base)
            n >>= 1
        return result

    def inverse(self) -> "AlgebraElement":
        """Inverse of a monomial; general elements are not inverted."""
        if not self.is_monomial():
            raise ValueError("only monomials have an inverse here")
        (w, c), = self._terms.items()
        inv = Fraction(1) / c if _is_exact(c) else 1 / c
        if isinstance(inv, Fraction) and inv.denominator == 1:
            inv = int(inv)
        return AlgebraElement({inverse_word(w): inv})

    def __repr__(self) -> str:
        return f"AlgebraElement({format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    out: dict[GroupWord, complex] = {}
    for w, cw in x._terms.items():
        for v, cv in y._terms.items():
            p = mul_word(w, v)
            out[p] = out.get(p, 0) + cw * cv
    return AlgebraElement(out)


def stabilize(x: AlgebraElement) -> AlgebraElement:
    """Image under zeta -> 1: words with equal momentum merge onto ``Wh(a, b)``."""
    out: dict[GroupWord, complex] = {}
    for w, c in x._terms.items():
        key = GroupWord(0, w.a, w.b)
        out[key] = out.get(key, 0) + c
    return AlgebraElement(out)


def stable_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product in the commutative image of :func:`stabilize` (the group algebra of Z^2).

    Arguments are stabilized first, so ``stable_mul(x, y)`` equals
    ``stabilize(mul(x, y))`` for every ``x`` and ``y``.
    """
    out: dict[GroupWord, complex] = {}
    for w, cw in stabilize(x)._terms.items():
        for v, cv in stabilize(y)._terms.items():
            key = GroupWord(0, w.a + v.a, w.b + v.b)
            out[key] = out.get(key, 0) + cw * cv
    return AlgebraElement(out)


# -- modular group -----------------------------------------------------------

@dataclass(frozen=True)
class SL2Z:
    """The integer matrix ``[[p, q], [r, s]]`` of determinant one."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            if not isinstance(getattr(self, name), numbers.Integral):
                raise TypeError(f"SL2Z entry {name} must be an integer")
        if self.p * self.s - self.q * self.r != 1:
            raise ValueError(
                f"matrix [[{self.p},{self.q}],[{self.r},{self.s}]] has determinant "
                f"{self.p * self.s - self.q * self.r}, not 1"
            )

    def __matmul__(self, other: "SL2Z") -> "SL2Z":
        return SL2Z(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )

    def inverse(self) -> "SL2Z":
        return SL2Z(self.s, -self.q, -self.r, self.p)

    def __pow__(self, n: int) -> "SL2Z":
        base = self if n >= 0 else self.inverse()
        result = SL2Z(1, 0, 0, 1)
        for _ in range(abs(n)):
            result = result @ base
        return result

    def apply(self, a: int, b: int) -> tuple[int, int]:
        """Row vector ``(a, b)`` times this matrix."""
        return (a * self.p + b * self.r, a * self.q + b * self.s)

    def as_list(self) -> list[list[int]]:
        return [[self.p, self.q], [self.r, self.s]]


S = SL2Z(0, -1, 1, 0)
T = SL2Z(1, 1, 0, 1)


def act_word(g: SL2Z, w: GroupWord) -> GroupWord:
    a, b = g.apply(w.a, w.b)
    return GroupWord(w.c, a, b)


def mcg_act(g: SL2Z, x: AlgebraElement) -> AlgebraElement:
    """Right action ``(a, b) -> (a, b) g`` on every word, zeta fixed.

    As a right action it composes as ``mcg_act(g @ h, x) == mcg_act(h, mcg_act(g, x))``.
    """
    if not isinstance(g, SL2Z):
        raise TypeError("expected an SL2Z element")
    return AlgebraElement({act_word(g, w): c for w, c in x._terms.items()})


def parse_sl2z(text: str) -> SL2Z:
    """``S``, ``T``, products such as ``STS``, or ``[[p,q],[r,s]]``."""
    text = text.strip()
    if re.fullmatch(r"[ST]+", text):
        g = SL2Z(1, 0, 0, 1)
        for ch in text:
            g = g @ (S if ch == "S" else T)
        return g
    m = re.fullmatch(
        r"\[\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*\]",
        text,
    )
    if m is None:
        raise ExpressionError(f"cannot read modular group element {text!r}")
    return SL2Z(*(int(v) for v in m.groups()))


# -- text syntax -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\d*\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)(?P<imag>[ij](?![A-Za-z_]))?"
    r"|(?P<name>Wh|W|z|i)\b|(?P<op>[-+*^(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionError(f"unexpected input at {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("num") is not None:
            raw = m.group("num")
            value = int(raw) if re.fullmatch(r"\d+", raw) else float(raw)
            if m.group("imag"):
                value = complex(0, value)
            tokens.append(("num", value))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def _where(self) -> str:
        tok = self.peek()
        return "end of input" if tok[0] is None else repr(tok[1])

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = repr(value) if value else {"num": "a number"}.get(kind, "a token")
            raise ExpressionError(f"expected {want}, got {self._where()}")
        self.i += 1
        return tok

    def parse(self) -> AlgebraElement:
        if not self.tokens:
            raise ExpressionError("empty expression")
        x = self.expr()
        if self.i != len(self.tokens):
            raise ExpressionError(f"trailing input at token {self.peek()[1]!r}")
        return x

    def expr(self) -> AlgebraElement:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        x = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> AlgebraElement:
        x = self.power()
        while self.peek() == ("op", "*"):
            self.take()
            x = x * self.power()
        return x

    def signed_int(self) -> int:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        kind, value = self.take("num")
        if not isinstance(value, int):
            raise ExpressionError(f"expected an integer, got {value!r}")
        return sign * value

    def power(self) -> AlgebraElement:
        x = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            n = self.signed_int()
            if n < 0 and not x.is_monomial():
                raise ExpressionError("negative powers need a monomial base")
            x = x ** n
        return x

    def atom(self) -> AlgebraElement:
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return AlgebraElement.scalar(value)
        if kind == "name":
            self.take()
            if value == "i":
                return AlgebraElement.scalar(1j)
            if value == "z":
                return AlgebraElement.word((1, 0, 0))
            self.take("op", "(")
            a = self.signed_int()
            self.take("op", ",")
            b = self.signed_int()
            self.take("op", ")")
            w = GroupWord(0, a, b) if value == "Wh" else from_w_basis(0, a, b)
            return AlgebraElement.word(w)
        if (kind, value) == ("op", "("):
            self.take()
            x = self.expr()
            self.take("op", ")")
            return x
        raise ExpressionError(f"unexpected {self._where()}")


def parse_element(text: str) -> AlgebraElement:
    """Read an element such as ``2.5 * z^3 * W(1,-2) - Wh(0,1)``.

    ``z`` is the central generator, ``Wh(a,b)`` the symmetric-basis word and
    ``W(a,b)`` the ordered product ``W(0,1)^b W(1,0)^a``. ``i`` is the imaginary
    unit and numbers may carry an ``i``/``j`` suffix.
    """
    return _Parser(text).parse()


def _format_number(x) -> str:
    if isinstance(x, complex):
        if x.imag == 0:
            return _format_number(x.real)
        if x.real == 0:
            return repr(complex(0.0, x.imag))
        return repr(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _negative(x) -> bool:
    if isinstance(x, complex):
        return x.real < 0 if x.imag == 0 else (x.real == 0 and x.imag < 0)
    return x < 0


def format_word(w: GroupWord, basis: str = "Wh") -> str:
    if basis == "W":
        e, a, b = w_basis(w)
    else:
        e, a, b = w
    parts = []
    if e:
        parts.append(f"z^{e}")
    if a or b:
        parts.append(f"{basis}({a},{b})")
    return " * ".join(parts)


def format_element(x: AlgebraElement, basis: str = "Wh") -> str:
    """Render in the input syntax, words sorted by ``(a, b, c)``."""
    if not x:
        return "0"
    out = []
    for n, (w, coef) in enumerate(x):
        neg = _negative(coef)
        mag = -coef if neg else coef
        word = format_word(w, basis)
        if not word:
            body = _format_number(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{_format_number(mag)} * {word}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
