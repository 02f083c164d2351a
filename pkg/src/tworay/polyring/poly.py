"""Sparse multivariate polynomials over Q with a small literal parser."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from ..exactmath import frac


class Nonhomogeneous:
    """Marker returned by :func:`weighted_degree` for mixed-degree input."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NONHOMOGENEOUS"

    def __bool__(self):
        return False


NONHOMOGENEOUS = Nonhomogeneous()


class Ring:
    """Polynomial ring Q[names] with a fixed variable order."""

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for n in self.names:
            if not _IDENT.fullmatch(n):
                raise ValueError(f"bad variable name {n!r}")
        self.index = {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = frac(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["Poly"]:
        return [self.var(n) for n in self.names]

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "Poly":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.index[n]] = k
        return Poly(self, {tuple(e): frac(coeff)})

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()

    __call__ = parse

    def extend(self, *names: str) -> "Ring":
        return Ring(self.names + tuple(names))


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.ring, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = frac(other)
        return Poly(self.ring, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(self.ring.names[i] for i, k in enumerate(e) if k)
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=0)

    def monomials(self) -> list[tuple]:
        return list(self.terms)

    def term_dict(self, e: tuple) -> dict[str, int]:
        return {self.ring.names[i]: k for i, k in enumerate(e) if k}

    def coeff(self, exps: Mapping[str, int]) -> Fraction:
        e = [0] * self.ring.nvars
        for n, k in exps.items():
            e[self.ring.index[n]] = k
        return self.terms.get(tuple(e), Fraction(0))

    def only_in(self, names: Iterable[str]) -> "Poly":
        """Sum of the terms whose support lies inside ``names``."""
        keep = {self.ring.index[n] for n in names}
        return Poly(
            self.ring,
            {e: c for e, c in self.terms.items() if all(k == 0 or i in keep for i, k in enumerate(e))},
        )

    # transformations --------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute constants or polynomials (same ring) for variables."""
        idx = {self.ring.index[n]: v for n, v in values.items()}
        consts = {i: frac(v) for i, v in idx.items() if not isinstance(v, Poly)}
        polys = {i: v for i, v in idx.items() if isinstance(v, Poly)}
        out: dict = {}
        pieces = []
        for e, c in self.terms.items():
            coef = c
            ne = list(e)
            for i, val in consts.items():
                if e[i]:
                    coef *= val ** e[i]
                    ne[i] = 0
            if not coef:
                continue
            if not polys or not any(e[i] for i in polys):
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + coef
                continue
            base = Poly(self.ring, {tuple(0 if i in polys else k for i, k in enumerate(ne)): coef})
            for i, p in polys.items():
                if e[i]:
                    base = base * p ** e[i]
            pieces.append(base)
        result = Poly(self.ring, out)
        for p in pieces:
            result = result + p
        return result

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in another ring that contains every used variable."""
        mapping = []
        for i, n in enumerate(self.ring.names):
            mapping.append(ring.index.get(n))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    j = mapping[i]
                    if j is None:
                        raise ValueError(f"variable {self.ring.names[i]} missing from {ring}")
                    ne[j] = k
            out[tuple(ne)] = c
        return Poly(ring, out)

    def divide_out(self, name: str) -> "Poly":
        """Divide by the largest power of ``name`` dividing every term."""
        i = self.ring.index[name]
        k = min((e[i] for e in self.terms), default=0)
        if not k:
            return self
        return Poly(self.ring, {e[:i] + (e[i] - k,) + e[i + 1:]: c for e, c in self.terms.items()})

    def monic(self, order=None) -> "Poly":
        if not self.terms:
            return self
        lead = max(self.terms, key=order.key) if order else max(self.terms)
        return self / self.terms[lead]

    # printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


def weighted_degree(p: Poly, weights):
    """Weighted degree of ``p``; NONHOMOGENEOUS when its terms disagree."""
    if len(weights) != p.ring.nvars:
        raise ValueError("weights length must equal ring arity")
    if p.is_zero():
        raise ValueError("zero polynomial has no degree")
    degs = {sum(w * k for w, k in zip(weights, e)) for e in p.terms}
    return degs.pop() if len(degs) == 1 else NONHOMOGENEOUS


def multidegree(p: Poly, grading) -> tuple | Nonhomogeneous:
    """Degree for a multigrading given as rows of per-variable weights."""
    degs = [weighted_degree(p, row) for row in grading]
    if any(d is NONHOMOGENEOUS for d in degs):
        return NONHOMOGENEOUS
    return tuple(degs)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse {text!r} at offset {pos}")
            num, ident, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif ident is not None:
                self.tokens.append(("id", ident))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            raise ValueError("empty polynomial literal")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ValueError(f"can only divide by nonzero constants in {self.text!r}")
                p = p / next(iter(q.terms.values()))
        return p

    def unary(self) -> Poly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, k = self.take()
            if kind != "num":
                raise ValueError(f"exponent must be a non-negative integer in {self.text!r}")
            return base ** k
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            if val not in self.ring.index:
                raise ValueError(f"unknown variable {val!r} in {self.text!r}")
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError(f"unbalanced parenthesis in {self.text!r}")
            return p
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")
