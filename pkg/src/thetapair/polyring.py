"""Exact sparse multivariate polynomials over Q or a prime field.

Polynomials are immutable dictionaries ``exponent tuple -> coefficient``
attached to a :class:`PolyRing`.  Coefficients are :class:`fractions.Fraction`
over Q and plain ints in ``[0, p)`` over F_p.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Exps = tuple  # tuple[int, ...]


class RationalField:
    """The field Q with Fraction coefficients."""

    name = "Q"
    characteristic = 0
    probabilistic = False

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"

    def convert(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def axpy(self, h: dict, c, shift, g: dict):
        """h -= c * shift * g in place; keys are (component, exps)."""
        add = operator.add
        for (comp, e), gc in g.items():
            k = (comp, tuple(map(add, e, shift)))
            v = h.get(k)
            if v is None:
                h[k] = -c * gc
            else:
                v = v - c * gc
                if v:
                    h[k] = v
                else:
                    del h[k]

    def fmt(self, c) -> str:
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"

    def to_json(self, c):
        if c.denominator == 1:
            return c.numerator
        return [c.numerator, c.denominator]

    def to_fraction(self, c) -> Fraction:
        return c


class PrimeField:
    """F_p with int coefficients in [0, p)."""

    probabilistic = True

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"Fp:{p}"
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return self.name

    def convert(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def axpy(self, h: dict, c, shift, g: dict):
        p = self.p
        add = operator.add
        for (comp, e), gc in g.items():
            k = (comp, tuple(map(add, e, shift)))
            v = (h.get(k, 0) - c * gc) % p
            if v:
                h[k] = v
            elif k in h:
                del h[k]

    def fmt(self, c) -> str:
        # symmetric representative keeps printed forms short
        return str(c - self.p if c > self.p // 2 else c)

    def to_json(self, c):
        return c

    def to_fraction(self, c) -> Fraction:
        return Fraction(c - self.p if c > self.p // 2 else c)


QQ = RationalField()


def make_field(spec: str | None):
    """Parse ``"Q"`` or ``"Fp:<prime>"``."""
    if spec is None or spec in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:Fp|GF|F):?(\d+)", spec.strip())
    if not m:
        raise ValueError(f"unknown field {spec!r}; expected 'Q' or 'Fp:<prime>'")
    return PrimeField(int(m.group(1)))


# ---------- monomial orders ----------

GLOBAL_KINDS = ("grevlex", "lex", "weighted-grevlex")
LOCAL_KINDS = ("negweighted-grevlex",)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order; ``key`` grows with the monomial.

    Global kinds have 1 < x_i, the local kind has x_i < 1.
    """

    kind: str
    weights: tuple
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in GLOBAL_KINDS + LOCAL_KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")

    @property
    def is_local(self) -> bool:
        return self.kind in LOCAL_KINDS

    def degree(self, e: Exps) -> int:
        return sum(map(operator.mul, e, self.weights))

    def key(self, e: Exps):
        k = self._cache.get(e)
        if k is None:
            rev = tuple(-a for a in reversed(e))
            if self.kind == "lex":
                k = e
            elif self.kind == "grevlex":
                k = (sum(e), rev)
            elif self.kind == "weighted-grevlex":
                k = (self.degree(e), rev)
            else:
                k = (-self.degree(e), rev)
            self._cache[e] = k
        return k

    def compare(self, m1: Exps, m2: Exps) -> int:
        """-1, 0 or 1 as m1 <, =, > m2."""
        k1, k2 = self.key(tuple(m1)), self.key(tuple(m2))
        return (k1 > k2) - (k1 < k2)

    def term_key(self, t):
        """Position-over-term key for a module term ``(component, exps)``; e_0 largest."""
        return (-t[0], self.key(t[1]))

    def with_kind(self, kind: str) -> "MonomialOrder":
        return MonomialOrder(kind, self.weights)


def compare(order: MonomialOrder, m1, m2) -> str:
    c = order.compare(m1, m2)
    return {-1: "LT", 0: "EQ", 1: "GT"}[c]


# ---------- rings and polynomials ----------


class PolyRing:
    """Q[x_0..x_n] or F_p[x_0..x_n] with a weight vector and an ambient order."""

    def __init__(self, variables: Sequence[str], field=QQ, weights=None, order: str | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.variables)
        self.field = field
        self.weights = tuple(weights) if weights is not None else (1,) * self.nvars
        if len(self.weights) != self.nvars:
            raise ValueError("weights must match the number of variables")
        self.order = MonomialOrder(order or "weighted-grevlex", self.weights)
        self.zero_exps = (0,) * self.nvars
        self._index = {v: i for i, v in enumerate(self.variables)}

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field == other.field
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.variables, self.field, self.weights))

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, {self.field}, weights={list(self.weights)})"

    def local_order(self) -> MonomialOrder:
        return MonomialOrder("negweighted-grevlex", self.weights)

    def global_order(self, kind: str = "weighted-grevlex") -> MonomialOrder:
        return MonomialOrder(kind, self.weights)

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.convert(c)
        return Polynomial(self, {self.zero_exps: c} if c else {})

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        c = self.field.convert(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise ValueError("polynomial from a different ring")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def constant_term(self):
        return self.terms.get(self.ring.zero_exps, self.ring.field.zero)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exps in self.terms)

    def degree(self) -> int:
        """Maximal weighted degree; -1 for zero."""
        w = self.ring.weights
        return max((sum(map(operator.mul, e, w)) for e in self.terms), default=-1)

    def low_degree(self) -> int:
        w = self.ring.weights
        return min((sum(map(operator.mul, e, w)) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        w = self.ring.weights
        return len({sum(map(operator.mul, e, w)) for e in self.terms}) <= 1

    def sorted_terms(self, order: MonomialOrder | None = None):
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder | None = None) -> Exps:
        order = order or self.ring.order
        return max(self.terms, key=order.key)

    # -- arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.nvars != self.ring.nvars:
                raise ValueError(
                    f"variable-count mismatch: {self.ring.nvars} vs {other.ring.nvars}"
                )
            if other.ring.field != self.ring.field:
                raise ValueError("coefficient fields differ")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(t.get(e, F.zero), c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        add = operator.add
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                t[e] = F.add(t.get(e, F.zero), F.mul(c1, c2))
        return Polynomial(self.ring, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        F = self.ring.field
        c = F.convert(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: F.mul(v, c) for e, v in self.terms.items()})

    def mul_monomial(self, exps, coeff=None) -> "Polynomial":
        F = self.ring.field
        add = operator.add
        c = F.one if coeff is None else coeff
        return Polynomial(
            self.ring, {tuple(map(add, e, exps)): F.mul(v, c) for e, v in self.terms.items()}
        )

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative in the i-th variable."""
        F = self.ring.field
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(c, F.convert(e[i]))
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    t[tuple(ne)] = v
        return Polynomial(self.ring, t)

    def evaluate(self, point: Sequence) -> object:
        F = self.ring.field
        total = F.zero
        for e, c in self.terms.items():
            v = c
            for xi, k in zip(point, e):
                if k:
                    v = F.mul(v, F.convert(xi) ** k if F is QQ else pow(F.convert(xi), k, F.p))
            total = F.add(total, v)
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Ring map x_i -> images[i] (images may live in another ring)."""
        target = images[0].ring if images else self.ring
        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            result = result + term
        return result

    # -- comparison / hashing
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring.nvars == other.ring.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- printing
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def format_poly(p: Polynomial, order: MonomialOrder | None = None) -> str:
    """Canonical text form, terms descending in the ambient order."""
    if not p.terms:
        return "0"
    F = p.ring.field
    names = p.ring.variables
    out = []
    for e, c in p.sorted_terms(order):
        s = F.fmt(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if mono:
            body = mono if s == "1" else f"{s}*{mono}"
        else:
            body = s
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    """Recursive-descent parser for + - * / ^ ** and parentheses."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial {self.text!r} at position {pos}")
            num, name, op = m.groups()
            if num is not None:
                self.toks.append(("num", num))
            elif name is not None:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def error(self, msg):
        raise ValueError(f"cannot parse polynomial {self.text!r}: {msg}")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            self.error("empty")
        p = self.expr()
        if self.i != len(self.toks):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                q = self.factor()
                if not q.is_constant() or q.is_zero():
                    self.error("division only by nonzero constants")
                F = self.ring.field
                p = p.scale(F.inv(q.constant_term()))
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                p = p * self.factor()  # implicit product, e.g. "2x"
            else:
                return p

    def factor(self):
        p = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind == "num" and "/" in val:
                # "z^2/3" lexes the exponent as the literal 2/3
                val, den = val.split("/", 1)
                self.toks[self.i:self.i] = [("op", "/"), ("num", den)]
            if kind != "num" or not val.isdigit():
                self.error("exponent must be a non-negative integer")
            p = p ** int(val)
        return p

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "name":
            if val not in self.ring._index:
                self.error(f"unknown variable {val!r}")
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            p = self.expr()
            k, v = self.take()
            if v != ")":
                self.error("missing ')'")
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        self.error(f"unexpected token {val!r}")


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.ring.nvars != b.ring.nvars:
        raise ValueError(f"variable-count mismatch: {a.ring.nvars} vs {b.ring.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def partials(f: Polynomial) -> list[Polynomial]:
    return [f.diff(i) for i in range(f.ring.nvars)]


def poly_sum(items: Iterable[Polynomial], ring: PolyRing) -> Polynomial:
    return reduce(operator.add, items, ring.zero())


class SingularityContext:
    """Ambient ring P, the equation f with f(0) = 0, and its Jacobian ideal."""

    def __init__(self, ring: PolyRing, f: Polynomial | str):
        f = ring(f)
        if f.constant_term():
            raise ValueError("f must vanish at the origin")
        if f.is_zero():
            raise ValueError("f must be nonzero")
        self.ring = ring
        self.f = f
        self.n = ring.nvars - 1
        self.jacobian_ideal = partials(f)
        self.milnor_number: int | None = None

    @property
    def variables(self):
        return self.ring.variables

    @property
    def weights(self):
        return self.ring.weights

    def is_graded(self) -> bool:
        return self.f.is_homogeneous()

    def __repr__(self):
        return f"SingularityContext(f={self.f}, vars={list(self.ring.variables)})"
