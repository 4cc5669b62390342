"""Extension-field support: irreducible polynomials, companion matrices, counting.

Commutative matrix subgroups can be generated from the companion matrix of an
irreducible polynomial; this module provides that construction path plus the
exact cardinality formulas used to size groups and key spaces.  All counts are
arbitrary-precision integers, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotUnitOrderError, FactorizationError
from .field_matrix import FieldParams, Matrix, mat_det, mat_pow, uniform_array


@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial x^d + c_{d-1} x^{d-1} + ... + c_0 over F_p.

    ``coeffs`` stores (c_0, ..., c_{d-1}); the leading 1 is implicit.
    """

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("degree must be >= 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def __str__(self) -> str:
        terms = [f"x^{self.degree}" if self.degree > 1 else "x"]
        for i in range(self.degree - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}x" if c > 1 else "x")
            else:
                terms.append(f"{c}x^{i}" if c > 1 else f"x^{i}")
        return " + ".join(terms)


def moebius(n: int) -> int:
    """Moebius function: 0 on squareful n, else (-1)^(number of prime factors)."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    f = 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            result = -result
        f += 1
    if n > 1:
        result = -result
    return result


def matrix_space_size(params: FieldParams) -> int:
    """Number of all d x d matrices over F_p: p^(d^2)."""
    return params.p ** (params.d * params.d)


def gl_order(params: FieldParams) -> int:
    """Order of GL(d, F_p): product of (p^d - p^i) for i = 0 .. d-1."""
    p, d = params.p, params.d
    q = p ** d
    order = 1
    for i in range(d):
        order *= q - p ** i
    return order


def singular_count(params: FieldParams) -> int:
    """Number of singular d x d matrices over F_p (space size minus group order)."""
    return matrix_space_size(params) - gl_order(params)


def nilpotent_count(params: FieldParams) -> int:
    """Number of nilpotent d x d matrices over F_p: p^(d^2 - d)."""
    return params.p ** (params.d * params.d - params.d)


def count_irreducible(d: int, p: int) -> int:
    """Number of monic irreducible degree-d polynomials over F_p.

    Exact Moebius sum (1/d) * sum over e | d of mu(e) * p^(d/e).  The
    frequently quoted shorthand (p^d - 2)/d is only an approximation; the sum
    here matches brute-force enumeration exactly.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = sum(moebius(e) * p ** (d // e) for e in range(1, d + 1) if d % e == 0)
    assert total % d == 0
    return total // d


def ntot_count(d: int, p: int) -> int:
    """Count of monic degree-d polynomials excluding two trivial ones: p^d - 2."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return p ** d - 2


def _poly_trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _poly_trim(out)


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    # a, b reduced mod f; f monic, coefficients low-to-high with f[-1] == 1
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i in range(n):
                prod[k - n + i] = (prod[k - n + i] - c * f[i]) % p
    if len(prod) < n:
        prod += [0] * (n - len(prod))
    return _poly_trim(prod[:n])


def _poly_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    b = list(base)
    while e:
        if e & 1:
            result = _poly_mulmod(result, b, f, p)
        b = _poly_mulmod(b, b, f, p)
        e >>= 1
    return result


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    r = _poly_trim(list(a))
    db = len(b) - 1
    if db == 0:
        return [0]
    inv = pow(b[-1], -1, p)
    while len(r) - 1 >= db and r != [0]:
        c = r[-1] * inv % p
        shift = len(r) - 1 - db
        if c:
            for i in range(db + 1):
                r[shift + i] = (r[shift + i] - c * b[i]) % p
        r.pop()
        r = _poly_trim(r)
    return r


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b != [0]:
        a, b = b, _poly_rem(a, b, p)
    if a != [0]:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: MonicPoly) -> bool:
    """Deterministic irreducibility test over F_p.

    f of degree n is irreducible iff x^(p^n) == x mod f and, for every prime
    t dividing n, gcd(x^(p^(n/t)) - x, f) = 1.
    """
    p, n = f.p, f.degree
    if n == 1:
        return True
    full = list(f.coeffs) + [1]
    x = [0, 1]
    # frob[k] = x^(p^k) mod f, advanced one Frobenius power at a time
    frob = {}
    h = x
    for k in range(1, n + 1):
        h = _poly_powmod(h, p, full, p)
        frob[k] = h
    if _poly_sub(frob[n], x, p) != [0]:
        return False
    for t in _prime_factors(n):
        if _poly_gcd(_poly_sub(frob[n // t], x, p), full, p) != [1]:
            return False
    return True


def random_irreducible(rs, d: int, p: int) -> tuple[MonicPoly, int]:
    """Draw monic degree-d polynomials until one is irreducible.

    Coefficients are uniform, except the constant term is kept nonzero so the
    companion matrix is always invertible (irreducible polynomials of degree
    >= 2 never have a zero constant term, so this skips only reducible draws).
    Returns the polynomial and the number of trials used; the expected trial
    count is about d.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    trials = 0
    while True:
        trials += 1
        c0 = int(uniform_array(rs, 1, p - 1, 1)[0])
        rest = [int(v) for v in uniform_array(rs, 0, p - 1, d - 1)] if d > 1 else []
        f = MonicPoly(p, tuple([c0] + rest))
        if is_irreducible(f):
            return f, trials


def companion_matrix(f: MonicPoly) -> Matrix:
    """Companion matrix of f: ones on the subdiagonal, last column -coeffs."""
    d = f.degree
    if d < 2:
        raise ValueError("companion matrix needs degree >= 2")
    params = FieldParams(p=f.p, d=d)
    m = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        m[i, i - 1] = 1
    for i in range(d):
        m[i, d - 1] = (-f.coeffs[i]) % f.p
    return Matrix(params, m)


def char_poly(m: Matrix) -> MonicPoly:
    """Characteristic polynomial det(xI - m) by the division-free Berkowitz scheme.

    Works over F_p for every p (no divisions), O(d^4) arithmetic.
    """
    p = m.params.p
    n = m.params.d
    a = m.a
    # v holds charpoly coefficients of the leading principal submatrix,
    # highest degree first; each step multiplies by a lower-triangular
    # Toeplitz matrix, i.e. convolves and truncates to the new length
    v = np.array([1, (-int(a[0, 0])) % p], dtype=np.int64)
    for i in range(1, n):
        sub = a[:i, :i]
        row = a[i, :i]
        col = a[:i, i]
        t = np.empty(i + 2, dtype=np.int64)
        t[0] = 1
        t[1] = (-int(a[i, i])) % p
        w = col.copy()
        for k in range(i):
            t[k + 2] = (-int(row @ w)) % p
            if k < i - 1:
                w = (sub @ w) % p
        v = np.convolve(v, t)[:i + 2] % p
    coeffs = tuple(int(c) for c in v[1:][::-1])
    return MonicPoly(p, coeffs)


def trial_division_factorization(n: int, max_trials: int = 10_000_000) -> list[tuple[int, int]]:
    """Factor n into (prime, exponent) pairs by trial division.

    Covers desk-scale inputs like p^d - 1 below 2^64 whose second-largest
    prime factor is small; raises FactorizationError when the divisor budget
    runs out before the cofactor is resolved.
    """
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    c = n
    trials = 0
    f = 2
    while f * f <= c:
        trials += 1
        if trials > max_trials:
            raise FactorizationError(f"budget exhausted factoring {n}; stuck at cofactor {c}")
        if c % f == 0:
            e = 0
            while c % f == 0:
                c //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if c > 1:
        out.append((c, 1))
    return out


def element_order(m: Matrix, factorization: list[tuple[int, int]] | None = None) -> int:
    """Multiplicative order of m inside a cyclic subgroup of exponent p^d - 1.

    Starts from n = p^d - 1 and strips every prime q of the supplied
    factorization while m^(n/q) stays the identity.  The factorization of
    p^d - 1 may be passed in; by default it is obtained by trial division.

    Raises:
        NotUnitOrderError: m^(p^d - 1) is not the identity, i.e. m does not
            live in such a subgroup (typical for matrices not generated by an
            irreducible companion matrix).
    """
    if mat_det(m) == 0:
        raise NotUnitOrderError("singular matrix has no multiplicative order")
    p, d = m.params.p, m.params.d
    n = p ** d - 1
    if factorization is None:
        factorization = trial_division_factorization(n)
    if not mat_pow(m, n).is_identity():
        raise NotUnitOrderError(f"matrix order does not divide p^d - 1 = {n}")
    order = n
    for q, _ in factorization:
        while order % q == 0 and mat_pow(m, order // q).is_identity():
            order //= q
    return order
