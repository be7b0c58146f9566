"""Exact scalar fields: rationals, prime fields F_p and quadratic extensions F_{p^2}.

Elements are plain Python values so they can live in lists and tuples:

* rationals      -> :class:`fractions.Fraction`
* ``prime(p)``   -> ``int`` in ``range(p)``
* ``prime_square(p)`` -> ``(a, b)`` meaning ``a + b*w`` with ``w**2 = n``, where
  ``n`` is the smallest positive non-square modulo ``p``.

All arithmetic goes through the :class:`Field` object, which also owns parsing
and formatting of the textual element syntax (``"3/7"``, ``"5"``, ``"5+2w"``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Any, Iterator


class FieldError(ValueError):
    """Invalid field description or unsupported operation for a field."""


class UnsupportedField(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def smallest_nonsquare(p: int) -> int:
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise FieldError(f"no non-square modulo {p}")


def _sqrt_mod_p(a: int, p: int) -> int | None:
    """Tonelli-Shanks; returns the smaller of the two roots, or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = smallest_nonsquare(p)
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


class Field:
    """Common interface; concrete subclasses below."""

    kind: str
    p: int | None = None

    zero: Any
    one: Any

    # subclasses implement the arithmetic
    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def inv(self, a): raise NotImplementedError
    def coerce(self, x): raise NotImplementedError
    def format(self, a) -> str: raise NotImplementedError
    def parse(self, s: str): raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        result, base = self.one, a
        if e < 0:
            base, e = self.inv(a), -e
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def sum(self, xs):
        s = self.zero
        for x in xs:
            s = self.add(s, x)
        return s

    def dot(self, xs, ys):
        s = self.zero
        for x, y in zip(xs, ys):
            s = self.add(s, self.mul(x, y))
        return s

    @property
    def is_finite(self) -> bool:
        return self.kind != "rationals"

    @property
    def order(self) -> int:
        raise UnsupportedField("rationals are infinite")

    def elements(self) -> Iterator:
        raise UnsupportedField("cannot enumerate the rationals")

    def sqrt(self, a):
        raise UnsupportedField(f"square roots are not supported over {self}")

    def sort_key(self, a):
        return a

    def random(self, rng):
        raise NotImplementedError

    def spec(self) -> str:
        """Text form used in files: ``rationals``, ``prime 7``, ``prime_square 7``."""
        return self.kind if self.p is None else f"{self.kind} {self.p}"

    def __repr__(self) -> str:
        return f"Field({self.spec()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self) -> int:
        return hash((self.kind, self.p))


class RationalField(Field):
    kind = "rationals"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b): return a + b
    def sub(self, a, b): return a - b
    def mul(self, a, b): return a * b
    def neg(self, a): return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def coerce(self, x):
        return Fraction(x)

    def format(self, a) -> str:
        return str(Fraction(a))

    def parse(self, s: str):
        return Fraction(s.strip())

    def random(self, rng):
        return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 4)))


class PrimeField(Field):
    kind = "prime"
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise FieldError(f"prime field needs an odd prime, got {p}")
        self.p = p

    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def neg(self, a): return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * self.inv(x.denominator % self.p) % self.p
        return int(x) % self.p

    def format(self, a) -> str:
        return str(a)

    def parse(self, s: str):
        return self.coerce(Fraction(s.strip()))

    @property
    def order(self) -> int:
        return self.p

    def elements(self):
        return iter(range(self.p))

    def sqrt(self, a):
        return _sqrt_mod_p(a, self.p)

    def random(self, rng):
        return int(rng.integers(0, self.p))

    def extension(self) -> "PrimeSquareField":
        return PrimeSquareField(self.p)

    def embed(self, a):
        """Image of a base-field element in the quadratic extension."""
        return (a, 0)


_EXT_RE = re.compile(r"^\s*(?:(-?\d+)\s*)?(?:([+-])\s*(\d*)\s*\*?\s*w)?\s*$")


class PrimeSquareField(Field):
    kind = "prime_square"

    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise FieldError(f"prime_square field needs an odd prime, got {p}")
        self.p = p
        self.nonsquare = smallest_nonsquare(p)
        self.zero = (0, 0)
        self.one = (1, 0)
        self.gen = (0, 1)

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def mul(self, a, b):
        p = self.p
        return ((a[0] * b[0] + self.nonsquare * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def neg(self, a):
        return ((-a[0]) % self.p, (-a[1]) % self.p)

    def inv(self, a):
        p = self.p
        norm = (a[0] * a[0] - self.nonsquare * a[1] * a[1]) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        ni = pow(norm, p - 2, p)
        return (a[0] * ni % p, (-a[1]) * ni % p)

    def coerce(self, x):
        if isinstance(x, tuple):
            return (x[0] % self.p, x[1] % self.p)
        return (PrimeField(self.p).coerce(x), 0)

    def format(self, a) -> str:
        if a[1] == 0:
            return str(a[0])
        return f"{a[0]}+{a[1]}w"

    def parse(self, s: str):
        s = s.replace(" ", "")
        if "w" not in s:
            return self.coerce(Fraction(s))
        m = _EXT_RE.match(s)
        if m is None:
            raise FieldError(f"cannot parse extension element {s!r}")
        a = int(m.group(1) or 0)
        sign = -1 if m.group(2) == "-" else 1
        b = sign * int(m.group(3) or 1)
        if m.group(1) is None and m.group(2) is None:
            b = 1
        return (a % self.p, b % self.p)

    @property
    def order(self) -> int:
        return self.p * self.p

    def elements(self):
        return ((a, b) for b, a in product(range(self.p), repeat=2))

    def sort_key(self, a):
        return (a[1], a[0])

    def sqrt(self, x):
        p, n = self.p, self.nonsquare
        a, b = x
        if b == 0:
            r = _sqrt_mod_p(a, p)
            if r is not None:
                return (r, 0)
            c = _sqrt_mod_p(a * pow(n, p - 2, p), p)
            return (0, c)
        s = _sqrt_mod_p((a * a - n * b * b) % p, p)
        if s is None:
            return None
        half = pow(2, p - 2, p)
        for t in (s, (-s) % p):
            c = _sqrt_mod_p((a + t) * half, p)
            if c:
                d = b * pow(2 * c, p - 2, p) % p
                return min((c, d), ((-c) % p, (-d) % p), key=self.sort_key)
        return None

    def random(self, rng):
        return (int(rng.integers(0, self.p)), int(rng.integers(0, self.p)))

    def base(self) -> PrimeField:
        return PrimeField(self.p)


@dataclass(frozen=True)
class FieldSpec:
    """Serializable description of a field; ``FieldSpec(...).field`` builds it."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("rationals", "prime", "prime_square"):
            raise FieldError(f"unknown field kind {self.kind!r}")
        if self.kind == "rationals":
            if self.p is not None:
                raise FieldError("rationals take no modulus")
        elif self.p is None or not is_prime(self.p) or self.p == 2:
            raise FieldError(f"{self.kind} needs an odd prime modulus, got {self.p}")

    @cached_property
    def field(self) -> Field:
        return make_field(self.kind, self.p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        parts = text.replace(":", " ").replace("(", " ").replace(")", " ").split()
        if not parts:
            raise FieldError("empty field spec")
        if parts[0] in ("Q", "QQ", "rationals"):
            return cls("rationals")
        if parts[0].startswith("F") and parts[0][1:].isdigit():
            n = int(parts[0][1:])
            for q in range(3, n + 1):
                if is_prime(q) and q * q == n:
                    return cls("prime_square", q)
            return cls("prime", n)
        if len(parts) != 2:
            raise FieldError(f"cannot parse field spec {text!r}")
        return cls(parts[0], int(parts[1]))

    def __str__(self) -> str:
        return self.kind if self.p is None else f"{self.kind} {self.p}"


_FIELDS: dict[tuple, Field] = {}


def make_field(kind: str, p: int | None = None) -> Field:
    key = (kind, p)
    if key not in _FIELDS:
        if kind == "rationals":
            _FIELDS[key] = RationalField()
        elif kind == "prime":
            _FIELDS[key] = PrimeField(p)
        elif kind == "prime_square":
            _FIELDS[key] = PrimeSquareField(p)
        else:
            raise FieldError(f"unknown field kind {kind!r}")
    return _FIELDS[key]


def GF(q: int) -> Field:
    """``GF(7)`` or ``GF(49)``."""
    return FieldSpec.parse(f"F{q}").field


QQ = make_field("rationals")


def sqrt_in_field(a, field: Field):
    """Square root of ``a`` in ``field`` or ``None`` when ``a`` is not a square.

    Raises :class:`UnsupportedField` over the rationals.
    """
    if field.kind == "rationals":
        raise UnsupportedField("square roots over the rationals are not supported")
    return field.sqrt(a)


def field_of(fs: "FieldSpec | Field") -> Field:
    return fs.field if isinstance(fs, FieldSpec) else fs


def spec_of(field: Field) -> FieldSpec:
    return FieldSpec(field.kind, field.p)


def extend_elements(rows, field: Field):
    """Map a nested list of prime-field elements into the quadratic extension."""
    ext = field.extension()
    return ext, [[(x, 0) for x in row] for row in rows]
