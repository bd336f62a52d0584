"""Exact cyclotomic numbers.

A Cyclo is an element of Q(zeta_n) stored as a rational coefficient vector
over the power basis 1, zeta, ..., zeta^{phi(n)-1} reduced modulo the n-th
cyclotomic polynomial.  Values are normalized to their minimal conductor at
construction, so equality and hashing work across fields; binary operations
lift both sides to the lcm conductor.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import MalformedSource, ZeroValue

_F0 = Fraction(0)
_F1 = Fraction(1)


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Coefficient tuple (ints, increasing degree) of the n-th cyclotomic
    polynomial, via exact division of x^n - 1 by the proper divisors."""
    if n == 1:
        return (-1, 1)
    p = [-1] + [0] * (n - 1) + [1]          # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q = cyclotomic_poly(d)
            p = _polydiv_exact(p, q)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _polydiv_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num[: len(den) - 1]), "non-exact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _phi_deg(n):
    return len(cyclotomic_poly(n)) - 1


def _reduce_mod_phi(coeffs, n):
    """Reduce a coefficient list (any length) modulo Phi_n, after first
    folding exponents mod n (zeta^n = 1)."""
    d = _phi_deg(n)
    work = [_F0] * max(len(coeffs), n)
    for i, c in enumerate(coeffs):
        if c:
            work[i % n] += c
    phi = cyclotomic_poly(n)
    for i in range(len(work) - 1, d - 1, -1):
        c = work[i]
        if c:
            work[i] = _F0
            for j in range(len(phi) - 1):
                work[i - (len(phi) - 1) + j] -= c * phi[j]
    return tuple(work[:d])


class Cyclo:
    """Immutable exact element of a cyclotomic field."""

    __slots__ = ("n", "c", "_hash")

    def __init__(self, n=1, coeffs=(0,)):
        coeffs = [Fraction(x) for x in coeffs]
        c = _reduce_mod_phi(coeffs, n)
        n, c = _minimize(n, c)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Cyclo is immutable")

    # --- constructors ---

    @staticmethod
    def from_rational(q):
        return Cyclo(1, (Fraction(q),))

    @staticmethod
    def zeta(n, k=1):
        k %= n
        coeffs = [_F0] * (k + 1)
        coeffs[k] = _F1
        return Cyclo(n, coeffs)

    # --- basic predicates ---

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def is_one(self):
        return self.n == 1 and self.c[0] == 1

    def is_rational(self):
        return self.n == 1

    def rational_value(self):
        if self.n != 1:
            raise ValueError("not rational")
        return self.c[0]

    # --- arithmetic ---

    def _lift(self, m):
        # coefficients of self in Q(zeta_m), n | m
        k = m // self.n
        out = [_F0] * (_phi_deg(self.n) * k + 1)
        for i, ci in enumerate(self.c):
            if ci:
                out[i * k] += ci
        return _reduce_mod_phi(out, m)

    def __add__(self, other):
        other = _coerce(other)
        m = lcm(self.n, other.n)
        a, b = self._lift(m), other._lift(m)
        return _raw(m, tuple(x + y for x, y in zip(a, b)))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return _raw(self.n, tuple(-x for x in self.c))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        m = lcm(self.n, other.n)
        a, b = self._lift(m), other._lift(m)
        prod = [_F0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return _raw(m, _reduce_mod_phi(prod, m))

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self):
        if self.is_zero():
            raise ZeroValue("division by zero cyclotomic")
        if self.n == 1:
            return Cyclo(1, (1 / self.c[0],))
        # extended Euclid in Q[x] against Phi_n
        phi = [Fraction(x) for x in cyclotomic_poly(self.n)]
        a = list(self.c)
        r0, r1 = phi, a
        s0, s1 = [_F0], [_F1]
        while any(x != 0 for x in r1):
            q, r = _polydivmod_q(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
        # r0 = gcd (a nonzero constant, since Phi_n is irreducible)
        const = next(x for x in r0 if x != 0)
        inv = [x / const for x in s0]
        return _raw(self.n, _reduce_mod_phi(inv, self.n))

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        """Complex conjugation zeta -> zeta^{-1}."""
        return self.galois(self.n - 1) if self.n > 1 else self

    def galois(self, j):
        """The automorphism zeta_n -> zeta_n^j (gcd(j, n) must be 1)."""
        if self.n == 1:
            return self
        if gcd(j, self.n) != 1:
            raise ValueError("not a Galois index")
        out = [_F0] * self.n
        for i, ci in enumerate(self.c):
            if ci:
                out[(i * j) % self.n] += ci
        return _raw(self.n, _reduce_mod_phi(out, self.n))

    # --- roots of unity ---

    def is_root_of_unity(self):
        if self.is_zero():
            return False
        if self.n == 1:
            return abs(self.c[0]) == 1
        return (self ** (2 * self.n)).is_one()

    def root_of_unity_log(self):
        """(m, k) with self == zeta_m^k, m minimal; None if not a root of 1."""
        if not self.is_root_of_unity():
            return None
        m = 2 * self.n if self.n % 2 == 0 else self.n
        if self.n == 1:
            return (1, 0) if self.c[0] == 1 else (2, 1)
        z = Cyclo.zeta(m)
        p = ONE
        for k in range(m):
            if p == self:
                g = gcd(k, m)
                return (m // g, (k // g) % (m // g))
            p = p * z
        raise AssertionError("root of unity not found among zeta_m powers")

    def sqrt_root_of_unity(self):
        """A square root of a root of unity (conductor at most doubled)."""
        log = self.root_of_unity_log()
        if log is None:
            raise ValueError("sqrt implemented for roots of unity only")
        m, k = log
        return Cyclo.zeta(2 * m, k)

    # --- numerics (diagnostic only) ---

    def complex_value(self):
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(float(ci) * z ** i for i, ci in enumerate(self.c))

    # --- value semantics ---

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.n, self.c)))
        return self._hash

    def __repr__(self):
        return f"Cyclo({self.n}, {self.c})"

    def __str__(self):
        if self.n == 1:
            return str(self.c[0])
        terms = []
        for i, ci in enumerate(self.c):
            if ci == 0:
                continue
            if i == 0:
                terms.append(str(ci))
            else:
                z = f"zeta({self.n})" if i == 1 else f"zeta({self.n})^{i}"
                if ci == 1:
                    terms.append(z)
                elif ci == -1:
                    terms.append(f"-{z}")
                else:
                    terms.append(f"{ci}*{z}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def sort_key(self):
        return (self.n, self.c)


def _raw(n, c):
    obj = object.__new__(Cyclo)
    n2, c2 = _minimize(n, c)
    object.__setattr__(obj, "n", n2)
    object.__setattr__(obj, "c", c2)
    object.__setattr__(obj, "_hash", None)
    return obj


def _coerce(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclo(1, (Fraction(x),))
    raise TypeError(f"cannot coerce {type(x)} to Cyclo")


def _minimize(n, c):
    """Push the value down to its minimal conductor (prime by prime)."""
    changed = True
    while changed and n > 1:
        changed = False
        for p in _prime_divisors(n):
            m = n // p
            down = _descend(n, c, m)
            if down is not None:
                n, c = m, down
                changed = True
                break
    return n, c


@lru_cache(maxsize=None)
def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _descend(n, c, m):
    """Coefficients of the value over Q(zeta_m) if it lies there (m | n)."""
    # Galois test: fixed by all sigma_j with j = 1 mod m, gcd(j, n) = 1
    for j in range(1 + m, n, m):
        if gcd(j, n) != 1:
            continue
        out = [_F0] * n
        for i, ci in enumerate(c):
            if ci:
                out[(i * j) % n] += ci
        if _reduce_mod_phi(out, n) != c:
            return None
    # express over the lifted basis zeta_m^t = zeta_n^{t*(n//m)}
    k = n // m
    dm, dn = _phi_deg(m), _phi_deg(n)
    cols = []
    for t in range(dm):
        e = [_F0] * (t * k + 1)
        e[t * k] = _F1
        cols.append(_reduce_mod_phi(e, n))
    # solve sum_t x_t * cols[t] == c  (dn equations, dm unknowns)
    A = [[cols[t][i] for t in range(dm)] + [c[i]] for i in range(dn)]
    x = _solve_rational(A, dm)
    if x is None:
        return None
    return _reduce_mod_phi(x, m)


def _solve_rational(aug, nvars):
    rows = [r[:] for r in aug]
    piv_of_col = {}
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [v / rows[r][col] for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        piv_of_col[col] = r
        r += 1
    for i in range(r, len(rows)):
        if rows[i][nvars] != 0:
            return None
    x = [_F0] * nvars
    for col, i in piv_of_col.items():
        x[col] = rows[i][nvars]
    return x


def _polydivmod_q(num, den):
    num = list(num)
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [_F0], num
    out = [_F0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd] / den[-1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    rem = num[:dd] if dd else [_F0]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return out, rem


def _polymul(a, b):
    out = [_F0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _polysub(a, b):
    out = [_F0] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return out


ZERO = Cyclo(1, (0,))
ONE = Cyclo(1, (1,))
MINUS_ONE = Cyclo(1, (-1,))


def zeta(n, k=1):
    return Cyclo.zeta(n, k)


def roots_of_unity(n):
    """All roots of unity in Q(zeta_n): the group <-zeta_n> (order lcm(2,n))."""
    m = n if n % 2 == 0 else 2 * n
    z = Cyclo.zeta(m) if n > 1 else MINUS_ONE
    out = []
    p = ONE
    for _ in range(m):
        out.append(p)
        p = p * z
    return out


# ---------------------------------------------------------------------------
# expression parser:  rationals, zeta(N), + - * / ^int, parentheses
# ---------------------------------------------------------------------------

def parse_cyclo(text):
    toks = _tokenize(text)
    val, pos = _parse_sum(toks, 0)
    if pos != len(toks):
        raise MalformedSource(f"trailing tokens in cyclotomic expression: {text!r}")
    return val


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("num", int(text[i:j])))
            i = j
        elif text.startswith("zeta", i):
            toks.append(("zeta", None))
            i += 4
        elif ch in "+-*/^()":
            toks.append((ch, None))
            i += 1
        else:
            raise MalformedSource(f"bad character {ch!r} in cyclotomic expression")
    return toks


def _parse_sum(toks, pos):
    val, pos = _parse_product(toks, pos)
    while pos < len(toks) and toks[pos][0] in "+-":
        op = toks[pos][0]
        rhs, pos = _parse_product(toks, pos + 1)
        val = val + rhs if op == "+" else val - rhs
    return val, pos


def _parse_product(toks, pos):
    val, pos = _parse_power(toks, pos)
    while pos < len(toks) and toks[pos][0] in "*/":
        op = toks[pos][0]
        rhs, pos = _parse_power(toks, pos + 1)
        val = val * rhs if op == "*" else val / rhs
    return val, pos


def _parse_power(toks, pos):
    val, pos = _parse_atom(toks, pos)
    if pos < len(toks) and toks[pos][0] == "^":
        pos += 1
        sign = 1
        if pos < len(toks) and toks[pos][0] == "-":
            sign = -1
            pos += 1
        if pos >= len(toks) or toks[pos][0] != "num":
            raise MalformedSource("exponent must be an integer")
        val = val ** (sign * toks[pos][1])
        pos += 1
    return val, pos


def _parse_atom(toks, pos):
    if pos >= len(toks):
        raise MalformedSource("truncated cyclotomic expression")
    kind, payload = toks[pos]
    if kind == "-":
        val, pos = _parse_power(toks, pos + 1)
        return -val, pos
    if kind == "num":
        return Cyclo.from_rational(payload), pos + 1
    if kind == "zeta":
        if pos + 3 >= len(toks) or toks[pos + 1][0] != "(" or toks[pos + 2][0] != "num" \
                or toks[pos + 3][0] != ")":
            raise MalformedSource("zeta takes one integer argument")
        return Cyclo.zeta(toks[pos + 2][1]), pos + 4
    if kind == "(":
        val, pos = _parse_sum(toks, pos + 1)
        if pos >= len(toks) or toks[pos][0] != ")":
            raise MalformedSource("unbalanced parenthesis")
        return val, pos + 1
    raise MalformedSource(f"unexpected token {kind!r}")
