"""Buchberger's algorithm, saturation, elimination and dimension."""

from __future__ import annotations

import heapq
import os
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .poly import Poly, Ring

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    def __init__(self, steps: int):
        super().__init__(f"budget exceeded ({steps} reduction steps)")
        self.steps = steps


def current_budget() -> int:
    raw = os.environ.get("TWO_RAY_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class MonomialOrder:
    """A monomial order given by an injective, multiplicative sort key."""

    def __init__(self, name: str, key_fn, weights: Sequence[int]):
        self.name = name
        self._key_fn = key_fn
        self.weights = tuple(weights)
        self._cache: dict = {}

    def key(self, e: tuple):
        k = self._cache.get(e)
        if k is None:
            k = self._key_fn(e)
            self._cache[e] = k
        return k

    def degree(self, e: tuple) -> int:
        return sum(w * k for w, k in zip(self.weights, e))

    def __repr__(self):
        return self.name


def _check_weights(weights, n):
    weights = tuple(int(w) for w in weights)
    if len(weights) != n:
        raise ValueError("weights length must equal ring arity")
    if any(w <= 0 for w in weights):
        raise ValueError("monomial order weights must be positive")
    return weights


def GREVLEX(ring: Ring, weights: Sequence[int] | None = None, last: str | None = None) -> MonomialOrder:
    """Weighted degree reverse lexicographic order.

    ``last`` names the variable treated as smallest in the tie-break
    (defaults to the final ring variable).
    """
    n = ring.nvars
    weights = _check_weights(weights or [1] * n, n)
    rev = list(reversed(range(n)))
    if last is not None:
        i = ring.index[last]
        rev.remove(i)
        rev.insert(0, i)
    rev = tuple(rev)

    def key(e):
        return (sum(w * k for w, k in zip(weights, e)), tuple(-e[i] for i in rev))

    return MonomialOrder(f"GREVLEX{weights}" + (f"/{last}" if last else ""), key, weights)


def BLOCK(ring: Ring, elim: Iterable[str], weights: Sequence[int] | None = None) -> MonomialOrder:
    """Elimination order: grevlex on ``elim`` first, then grevlex on the rest."""
    n = ring.nvars
    weights = _check_weights(weights or [1] * n, n)
    first = [ring.index[v] for v in elim]
    rest = [i for i in range(n) if i not in first]
    blocks = [tuple(first), tuple(rest)]

    def key(e):
        return tuple(
            (sum(weights[i] * e[i] for i in b), tuple(-e[i] for i in reversed(b)))
            for b in blocks
        )

    names = ",".join(ring.names[i] for i in first)
    return MonomialOrder(f"BLOCK({names}){weights}", key, weights)


# internal polynomials: ascending lists of (key, exponent, coeff), lead last

def _to_internal(p: Poly, order: MonomialOrder) -> list:
    return sorted(((order.key(e), e, c) for e, c in p.terms.items()), key=lambda t: t[0])


def _from_internal(ring: Ring, f: list) -> Poly:
    return Poly(ring, {e: c for _, e, c in f})


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _sub_mul(f: list, g: list, q: Fraction, shift: tuple, order: MonomialOrder) -> list:
    """f - q * x^shift * g, merging two ascending term lists."""
    key = order.key
    h = []
    for _, e, c in g:
        ne = tuple(a + b for a, b in zip(e, shift))
        h.append((key(ne), ne, -q * c))
    out = []
    i = j = 0
    nf, nh = len(f), len(h)
    while i < nf and j < nh:
        kf, kh = f[i][0], h[j][0]
        if kf < kh:
            out.append(f[i])
            i += 1
        elif kh < kf:
            out.append(h[j])
            j += 1
        else:
            c = f[i][2] + h[j][2]
            if c:
                out.append((kf, f[i][1], c))
            i += 1
            j += 1
    out.extend(f[i:])
    out.extend(h[j:])
    return out


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(self.steps)


def _normal_form(f: list, reducers: list, order: MonomialOrder, counter: _Counter) -> list:
    done = []
    while f:
        k, e, c = f[-1]
        for g in reducers:
            ge = g[-1][1]
            if _divides(ge, e):
                shift = tuple(a - b for a, b in zip(e, ge))
                f = _sub_mul(f, g, c / g[-1][2], shift, order)
                counter.tick()
                break
        else:
            done.append(f.pop())
    done.reverse()
    return done


def _monic(f: list) -> list:
    lc = f[-1][2]
    if lc == 1:
        return f
    return [(k, e, c / lc) for k, e, c in f]


def buchberger(polys: Sequence[Poly], order: MonomialOrder, budget: int | None = None) -> list[Poly]:
    """Reduced Gröbner basis of the ideal generated by ``polys``."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    ring = polys[0].ring
    counter = _Counter(current_budget() if budget is None else budget)
    basis: list[list] = []
    sugar: list[int] = []
    active: list[int] = []
    pairs: list = []

    def lead(i):
        return basis[i][-1][1]

    def push_pair(i, j):
        l = _lcm(lead(i), lead(j))
        s = max(
            sugar[i] + order.degree(l) - order.degree(lead(i)),
            sugar[j] + order.degree(l) - order.degree(lead(j)),
        )
        heapq.heappush(pairs, (s, order.key(l), i, j))

    def update(h_idx):
        nonlocal pairs
        lh = lead(h_idx)
        cand = [g for g in active]
        c_pairs = [(g, _lcm(lh, lead(g))) for g in cand]
        kept = []
        for pos, (g, l) in enumerate(c_pairs):
            if _coprime(lh, lead(g)):
                kept.append((g, l, True))
                continue
            others = [l2 for _, l2 in c_pairs[pos + 1:]] + [l2 for _, l2, _ in kept]
            if not any(_divides(l2, l) for l2 in others):
                kept.append((g, l, False))
        survivors = []
        for s, k, i, j in pairs:
            l = _lcm(lead(i), lead(j))
            if (
                _divides(lh, l)
                and _lcm(lead(i), lh) != l
                and _lcm(lead(j), lh) != l
            ):
                continue
            survivors.append((s, k, i, j))
        heapq.heapify(survivors)
        pairs = survivors
        for g, _, coprime in kept:
            if not coprime:
                push_pair(g, h_idx)
        active[:] = [g for g in active if not _divides(lh, lead(g))] + [h_idx]

    def add(f):
        basis.append(f)
        sugar.append(max(order.degree(e) for _, e, _ in f))
        update(len(basis) - 1)

    def reducers():
        return [basis[i] for i in active]

    for p in sorted(polys, key=lambda p: max(order.key(e) for e in p.terms)):
        f = _normal_form(_to_internal(p, order), reducers(), order, counter)
        if f:
            add(_monic(f))
            if not f[-1][1] or not any(f[-1][1]):
                return [ring.one()]

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        fi, fj = basis[i], basis[j]
        l = _lcm(fi[-1][1], fj[-1][1])
        si = tuple(a - b for a, b in zip(l, fi[-1][1]))
        sj = tuple(a - b for a, b in zip(l, fj[-1][1]))
        # s-polynomial of monic fi, fj with the leading terms cancelled
        s = _sub_mul(_sub_mul([], fi[:-1], Fraction(-1), si, order), fj[:-1], Fraction(1), sj, order)
        counter.tick()
        h = _normal_form(s, reducers(), order, counter)
        if h:
            h = _monic(h)
            if not any(h[-1][1]):
                return [ring.one()]
            add(h)

    # interreduce the minimal basis
    final = [basis[i] for i in active]
    out = []
    for idx, f in enumerate(final):
        others = final[:idx] + final[idx + 1:]
        lead_term = f[-1]
        tail = _normal_form(f[:-1], others, order, counter)
        out.append(_from_internal(ring, tail + [lead_term]))
    out.sort(key=lambda p: max(order.key(e) for e in p.terms))
    return out


class Ideal:
    """An ideal of a polynomial ring, with Gröbner bases cached per order."""

    def __init__(self, generators: Iterable[Poly], ring: Ring | None = None, weights=None):
        gens = tuple(generators)
        if ring is None:
            if not gens:
                raise ValueError("need a ring for an ideal without generators")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        self.ring = ring
        self.generators = tuple(g for g in gens if not g.is_zero())
        self.weights = tuple(weights) if weights is not None else (1,) * ring.nvars
        self._bases: dict[str, list[Poly]] = {}

    def default_order(self) -> MonomialOrder:
        return GREVLEX(self.ring, self.weights)

    def basis(self, order: MonomialOrder | None = None, budget: int | None = None) -> list[Poly]:
        order = order or self.default_order()
        if order.name not in self._bases:
            self._bases[order.name] = buchberger(self.generators, order, budget)
        return self._bases[order.name]

    def reduce(self, f: Poly, order: MonomialOrder | None = None) -> Poly:
        order = order or self.default_order()
        g = [_to_internal(p, order) for p in self.basis(order)]
        counter = _Counter(current_budget())
        return _from_internal(self.ring, _normal_form(_to_internal(f, order), g, order, counter))

    def contains(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()

    def is_unit(self) -> bool:
        b = self.basis()
        return len(b) == 1 and b[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + other.generators, self.ring, self.weights)

    def subs(self, values) -> "Ideal":
        return Ideal((g.subs(values) for g in self.generators), self.ring, self.weights)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            return NotImplemented
        return all(other.contains(g) for g in self.generators) and all(
            self.contains(g) for g in other.generators
        )

    __hash__ = None

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"


def groebner(I: Ideal, order: MonomialOrder | None = None, budget: int | None = None) -> Ideal:
    """Ideal whose generators are the reduced Gröbner basis for ``order``."""
    order = order or I.default_order()
    out = Ideal(I.basis(order, budget), I.ring, I.weights)
    out._bases[order.name] = list(out.generators)
    return out


def eliminate(I: Ideal, names: Iterable[str], budget: int | None = None) -> Ideal:
    """I intersected with the subring not involving ``names`` (same ambient ring)."""
    names = set(names)
    order = BLOCK(I.ring, [n for n in I.ring.names if n in names], I.weights)
    keep = [g for g in I.basis(order, budget) if not (g.variables() & names)]
    return Ideal(keep, I.ring, I.weights)


def saturate(I: Ideal, v: str, method: str = "auxiliary", budget: int | None = None) -> Ideal:
    """(I : v^oo).

    ``auxiliary`` adjoins a fresh variable w, adds w*v - 1 and eliminates w.
    ``bayer`` is valid for ideals homogeneous in the ideal's positive
    weights: take grevlex with v smallest and strip powers of v.
    """
    if v not in I.ring.index:
        raise ValueError(f"unknown variable {v!r}")
    if method == "bayer":
        order = GREVLEX(I.ring, I.weights, last=v)
        return Ideal((g.divide_out(v) for g in I.basis(order, budget)), I.ring, I.weights)
    if method != "auxiliary":
        raise ValueError(f"unknown saturation method {method!r}")
    w = "w_"
    while w in I.ring.index:
        w += "_"
    big = I.ring.extend(w)
    gens = [g.to_ring(big) for g in I.generators]
    gens.append(big.var(w) * big.var(v) - 1)
    J = eliminate(Ideal(gens, big, I.weights + (1,)), {w}, budget)
    return Ideal((g.to_ring(I.ring) for g in J.generators), I.ring, I.weights)


def dimension(I: Ideal, order: MonomialOrder | None = None) -> int:
    """Krull dimension of the affine quotient; -1 for the unit ideal."""
    basis = I.basis(order)
    if any(g.is_constant() for g in basis):
        return -1
    order = order or I.default_order()
    n = I.ring.nvars
    supports = []
    for g in basis:
        e = max(g.terms, key=order.key)
        supports.append(frozenset(i for i in range(n) if e[i]))
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0
