"""Polynomial arithmetic and factorization over GF(2).

A polynomial is stored as a Python int: bit i is the coefficient of x^i.
Every nonzero polynomial over GF(2) is monic, so no normalization step is
ever needed. Addition is XOR, multiplication is carry-less.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


def _even_bit_mask(nbits: int) -> int:
    """Mask with bits 0, 2, 4, ... set, covering at least nbits bits."""
    words = nbits // 2 + 1
    return ((1 << (2 * words)) - 1) // 3


@dataclass(frozen=True, order=True)
class Gf2Poly:
    """Binary polynomial encoded as an int (bit i = coefficient of x^i)."""

    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError("polynomial bits must be non-negative")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "Gf2Poly":
        """Build from coefficients, lowest degree first."""
        bits = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << i
        return cls(bits)

    @classmethod
    def x_power(cls, k: int) -> "Gf2Poly":
        return cls(1 << k)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def coeffs(self) -> list[int]:
        """Coefficients lowest degree first (empty for the zero polynomial)."""
        return [(self.bits >> i) & 1 for i in range(self.bits.bit_length())]

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_one(self) -> bool:
        return self.bits == 1

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        a, b, acc = self.bits, other.bits, 0
        while a:
            low = a & -a
            acc ^= b << low.bit_length() - 1
            a ^= low
        return Gf2Poly(acc)

    def __divmod__(self, other: "Gf2Poly") -> tuple["Gf2Poly", "Gf2Poly"]:
        if other.bits == 0:
            raise ZeroDivisionError("polynomial division by zero")
        r, d, q = self.bits, other.bits, 0
        dd = d.bit_length()
        while r.bit_length() >= dd:
            shift = r.bit_length() - dd
            q |= 1 << shift
            r ^= d << shift
        return Gf2Poly(q), Gf2Poly(r)

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Gf2Poly") -> "Gf2Poly":
        q, r = divmod(self, other)
        if r.bits:
            raise ValueError(f"{self!r} is not divisible by {other!r}")
        return q

    def square(self) -> "Gf2Poly":
        """Frobenius square: spreads the coefficient bits apart."""
        bits, out, i = self.bits, 0, 0
        while bits:
            if bits & 1:
                out |= 1 << (2 * i)
            bits >>= 1
            i += 1
        return Gf2Poly(out)

    def sqrt(self) -> "Gf2Poly":
        """Inverse of square(); valid only when all exponents are even."""
        bits, out, i = self.bits, 0, 0
        while bits:
            if bits & 1:
                if i & 1:
                    raise ValueError("polynomial is not a perfect square")
                out |= 1 << (i // 2)
            bits >>= 1
            i += 1
        return Gf2Poly(out)

    def derivative(self) -> "Gf2Poly":
        """Formal derivative; only odd-degree terms survive in GF(2)."""
        return Gf2Poly((self.bits >> 1) & _even_bit_mask(self.bits.bit_length()))

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return " + ".join(terms)


ZERO = Gf2Poly(0)
ONE = Gf2Poly(1)
X = Gf2Poly(2)


def poly_gcd(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly:
    while b.bits:
        a, b = b, a % b
    return a


def poly_lcm(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly:
    if a.bits == 0 or b.bits == 0:
        return ZERO
    return (a // poly_gcd(a, b)) * b


def coprime_split(a: Gf2Poly, b: Gf2Poly) -> tuple[Gf2Poly, Gf2Poly]:
    """Split lcm(a, b) into coprime parts drawn from a and b.

    Returns (u, v) with u | a, v | b, gcd(u, v) = 1 and u * v = lcm(a, b).
    Each irreducible factor of the lcm is taken in full from whichever
    argument carries the higher multiplicity (ties go to v). Needs no
    factorization, only gcds.
    """
    d = poly_gcd(a, b)
    u = a // d
    while True:
        g = poly_gcd(u, d)
        if g.is_one():
            break
        u = u * g
        d = d // g
    v = poly_lcm(a, b).exact_div(u)
    return u, v


def _mulmod(a: Gf2Poly, b: Gf2Poly, mod: Gf2Poly) -> Gf2Poly:
    return (a * b) % mod


def _pow2k_mod(a: Gf2Poly, k: int, mod: Gf2Poly) -> Gf2Poly:
    """a^(2^k) mod `mod` by repeated Frobenius squaring."""
    r = a % mod
    for _ in range(k):
        r = r.square() % mod
    return r


def squarefree_decomposition(f: Gf2Poly) -> list[tuple[Gf2Poly, int]]:
    """Write f as a product of pairwise-coprime squarefree parts.

    Returns [(g, m), ...] with f = prod g^m, each g squarefree and the
    multiplicities m distinct. Characteristic-2 variant: whenever the
    derivative vanishes, f is a perfect square and the recursion halves it.
    """
    if f.degree < 1:
        return []
    out: dict[int, Gf2Poly] = {}

    def accumulate(g: Gf2Poly, m: int) -> None:
        if g.degree >= 1:
            out[m] = out[m] * g if m in out else g

    df = f.derivative()
    if df.is_zero():
        for g, m in squarefree_decomposition(f.sqrt()):
            accumulate(g, 2 * m)
    else:
        c = poly_gcd(f, df)
        w = f // c
        i = 1
        while not w.is_one():
            y = poly_gcd(w, c)
            accumulate(w // y, i)
            w = y
            c = c // y
            i += 1
        if not c.is_one():
            for g, m in squarefree_decomposition(c.sqrt()):
                accumulate(g, 2 * m)
    return sorted(((g, m) for m, g in out.items()), key=lambda t: t[1])


def distinct_degree_split(f: Gf2Poly) -> list[tuple[Gf2Poly, int]]:
    """Split a squarefree f into parts whose irreducible factors share a degree.

    Returns [(g, d), ...]: g is the product of all irreducible factors of f
    of degree exactly d.
    """
    out = []
    h = X % f
    g = f
    d = 0
    while g.degree > 0:
        d += 1
        if 2 * d > g.degree:
            out.append((g, g.degree))
            break
        h = h.square() % g
        part = poly_gcd(g, h + X)
        if part.degree > 0:
            out.append((part, d))
            g = g // part
            h = h % g
    return out


def _equal_degree_factor(f: Gf2Poly, d: int, rng: np.random.Generator) -> list[Gf2Poly]:
    """Factor a squarefree product of degree-d irreducibles (Cantor-Zassenhaus).

    The GF(2) trace map sum_{i<d} u^(2^i) splits f with probability about 1/2
    per random u, so the expected number of draws is small.
    """
    if f.degree == d:
        return [f]
    while True:
        nbits = f.degree
        word_count = (nbits + 63) // 64
        u_bits = 0
        for w in rng.integers(0, 2**63, size=2 * word_count, dtype=np.int64):
            u_bits = (u_bits << 63) | int(w)
        u = Gf2Poly(u_bits % (1 << nbits)) % f
        if u.degree < 1:
            continue
        trace = u
        term = u
        for _ in range(d - 1):
            term = term.square() % f
            trace = trace + term
        g = poly_gcd(f, trace)
        if 0 < g.degree < f.degree:
            return _equal_degree_factor(g, d, rng) + _equal_degree_factor(f // g, d, rng)


def factor(f: Gf2Poly) -> list[tuple[Gf2Poly, int]]:
    """Full factorization of f into irreducibles over GF(2).

    Returns [(p, e), ...] sorted by (degree, bits); the product of p^e
    recovers f. Internal randomness is seeded from f itself, so the call is
    deterministic.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree < 1:
        return []
    rng = np.random.default_rng(np.random.SeedSequence(f.bits))
    found: dict[int, int] = {}
    for g, mult in squarefree_decomposition(f):
        for part, d in distinct_degree_split(g):
            for p in _equal_degree_factor(part, d, rng):
                found[p.bits] = found.get(p.bits, 0) + mult
    out = sorted(((Gf2Poly(b), e) for b, e in found.items()),
                 key=lambda t: (t[0].degree, t[0].bits))
    check = ONE
    for p, e in out:
        for _ in range(e):
            check = check * p
    if check != f:
        raise AssertionError("factorization self-check failed")
    return out


def is_irreducible(f: Gf2Poly) -> bool:
    """Rabin's irreducibility test over GF(2)."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if _pow2k_mod(X, d, f) != X % f:
        return False
    for q in _prime_divisors(d):
        if poly_gcd(_pow2k_mod(X, d // q, f) + X, f).degree != 0:
            return False
    return True


def _prime_divisors(n: int) -> Iterator[int]:
    p = 2
    while p * p <= n:
        if n % p == 0:
            yield p
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        yield n
