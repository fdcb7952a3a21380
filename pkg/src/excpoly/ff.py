"""Finite field contexts with integer-packed elements.

An element sum_i c_i x^i of GF(p^e) packs into the integer sum_i c_i p^i,
so for p = 2 the packing is the plain bitmask and addition is xor.  A
context caches discrete-log tables when the field has at most 2^16
elements, falls back to carryless multiplication for larger
characteristic-2 fields, and uses digit schoolbook arithmetic otherwise.

The modulus for GF(p^e) comes from a small embedded table of Conway
polynomials when (p, e) is listed there; otherwise it is found by a
deterministic ascending search over integer-encoded monic polynomials,
keeping the first primitive irreducible one.  Either way the constructor
re-verifies irreducibility and primitivity, so the table cannot silently
poison arithmetic.
"""

from __future__ import annotations

import sympy

__all__ = [
    "FieldCtx",
    "FieldElem",
    "Embedding",
    "make_field",
    "embed",
    "rel_trace",
    "arith",
    "field_from_json",
]

TABLE_LIMIT = 1 << 16
MAX_ORDER = 1 << 26

# Conway polynomials, low-degree coefficient first, leading 1 included.
# Only entries known to be right are listed; make_field falls back to the
# deterministic search for anything else.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
}


# ---------------------------------------------------------------------------
# polynomial arithmetic over the prime field, used only to validate moduli

def _pf_norm(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pf_mul(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                r[i + j] = (r[i + j] + ai * bj) % p
    return _pf_norm(r)


def _pf_mod(a, f, p):
    # f must be monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df:
        lead = a[-1]
        if lead:
            k = len(a) - 1 - df
            for i in range(df):
                a[k + i] = (a[k + i] - lead * f[i]) % p
        a.pop()
    return _pf_norm(a)


def _pf_powmod(a, n, f, p):
    r = [1]
    a = _pf_mod(a, f, p)
    while n:
        if n & 1:
            r = _pf_mod(_pf_mul(r, a, p), f, p)
        n >>= 1
        if n:
            a = _pf_mod(_pf_mul(a, a, p), f, p)
    return r


def _pf_gcd(a, b, p):
    a = _pf_norm(list(a))
    b = _pf_norm(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = bm, _pf_mod(a, bm, p)
    return a


def _pf_is_irreducible(f, p):
    e = len(f) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    if _pf_powmod(x, p**e, f, p) != x:
        return False
    for r in sympy.primefactors(e):
        h = _pf_powmod(x, p ** (e // r), f, p)
        d = [0] * max(len(h), 2)
        for i, c in enumerate(h):
            d[i] = c
        d[1] = (d[1] - 1) % p
        if len(_pf_gcd(d, f, p)) != 1:
            return False
    return True


def _pf_is_primitive(f, p, unit_factors):
    # f monic irreducible; is the class of x a generator of the units?
    e = len(f) - 1
    n = p**e - 1
    if e == 1:
        g = (-f[0]) % p
        if g == 0:
            return False
        return all(pow(g, n // r, p) != 1 for r in unit_factors)
    for r in unit_factors:
        if _pf_powmod([0, 1], n // r, f, p) == [1]:
            return False
    return True


def _digits(n, p, e):
    out = []
    for _ in range(e):
        out.append(n % p)
        n //= p
    return out


def _search_modulus(p, e):
    """First (by integer encoding) monic primitive irreducible of degree e."""
    n = p**e - 1
    unit_factors = sorted(sympy.factorint(n)) if n > 1 else []
    for c in range(p**e):
        f = _digits(c, p, e) + [1]
        if f[0] == 0:
            continue
        if not _pf_is_irreducible(f, p):
            continue
        if _pf_is_primitive(f, p, unit_factors):
            return tuple(f)
    raise RuntimeError(f"no primitive polynomial of degree {e} over GF({p})")


# ---------------------------------------------------------------------------

class FieldCtx:
    """Arithmetic context for GF(p^e) under a fixed primitive modulus.

    All operations take and return packed integer indices.  Use
    ``ctx(i)`` or ``ctx.from_coeffs`` for wrapped :class:`FieldElem`
    values when operator syntax is nicer than explicit calls.
    """

    def __init__(self, p, e, modulus):
        if not sympy.isprime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError(f"e = {e} must be positive")
        order = p**e
        if order > MAX_ORDER:
            raise ValueError(f"GF({p}^{e}) exceeds the size guard 2^26")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[e] != 1:
            raise ValueError("modulus must be monic of degree e")
        self.p = p
        self.e = e
        self.order = order
        self.modulus = modulus
        if not _pf_is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        n = order - 1
        self._unit_factors = sorted(sympy.factorint(n)) if n > 1 else []
        if not _pf_is_primitive(list(modulus), p, self._unit_factors):
            raise ValueError(f"modulus {modulus} is not primitive")
        # the class of x generates the units; for e = 1 that class is -c0
        self.gen = (p - modulus[0]) % p if e == 1 else p
        if p == 2:
            self._mask = sum(bit << i for i, bit in enumerate(modulus))
        self._exp = None
        self._log = None
        if order <= TABLE_LIMIT:
            self._build_tables()

    # -- construction of the discrete-log tables

    def _build_tables(self):
        n = self.order - 1
        exp = [0] * (2 * n if n else 1)
        log = [-1] * self.order
        cur = 1
        for i in range(n):
            assert log[cur] == -1, "generator closed early; modulus not primitive"
            exp[i] = cur
            exp[i + n] = cur
            log[cur] = i
            cur = self._mul_raw(cur, self.gen)
        assert cur == 1, "generator order does not divide p^e - 1"
        self._exp = exp
        self._log = log

    # -- raw arithmetic on packed indices

    def _mul_raw(self, a, b):
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
            return self._reduce2(r)
        ad = _digits(a, self.p, self.e)
        bd = _digits(b, self.p, self.e)
        prod = _pf_mod(_pf_mul(ad, bd, self.p), list(self.modulus), self.p)
        out = 0
        for c in reversed(prod):
            out = out * self.p + c
        return out

    def _reduce2(self, r):
        e = self.e
        m = self._mask
        for i in range(r.bit_length() - 1, e - 1, -1):
            if (r >> i) & 1:
                r ^= m << (i - e)
        return r

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return a if self.p == 2 and b == 0 else self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._log is not None:
            return self._exp[self.order - 1 - self._log[a]]
        return self.pow_(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_(self, a, k):
        k = int(k)
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        n = self.order - 1
        if self._log is not None:
            return self._exp[(self._log[a] * k) % n]
        k %= n
        r = 1
        base = a
        while k:
            if k & 1:
                r = self._mul_raw(r, base)
            k >>= 1
            if k:
                base = self._mul_raw(base, base)
        return r

    def frob(self, a):
        return self.pow_(a, self.p)

    def sqrt_(self, a):
        """Square root; unique in characteristic 2."""
        assert self.p == 2, "only the characteristic-2 square root is unique"
        return self.pow_(a, self.order >> 1)

    def abs_trace(self, a):
        """Trace down to the prime field, returned as an int in [0, p)."""
        acc = 0
        cur = a
        for _ in range(self.e):
            acc = self.add(acc, cur)
            cur = self.frob(cur)
        assert acc < self.p, "absolute trace left the prime field"
        return acc

    # -- packing helpers

    def from_coeffs(self, cs):
        cs = list(cs)
        assert len(cs) <= self.e
        out = 0
        for c in reversed(cs):
            out = out * self.p + (int(c) % self.p)
        return FieldElem(self, out)

    def coeffs(self, a):
        return _digits(a, self.p, self.e)

    def elements(self):
        return range(self.order)

    # -- plumbing

    def __call__(self, i):
        i = int(i)
        if not 0 <= i < self.order:
            raise ValueError(f"index {i} out of range for {self!r}")
        return FieldElem(self, i)

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    @property
    def x(self):
        return FieldElem(self, self.gen)

    def to_json(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"GF({self.order})"


class FieldElem:
    """One field element: a context plus its packed index."""

    __slots__ = ("ctx", "i")

    def __init__(self, ctx, i):
        self.ctx = ctx
        self.i = i

    @property
    def index(self):
        return self.i

    @property
    def coeffs(self):
        return self.ctx.coeffs(self.i)

    def __add__(self, other):
        assert self.ctx == other.ctx
        return FieldElem(self.ctx, self.ctx.add(self.i, other.i))

    def __sub__(self, other):
        assert self.ctx == other.ctx
        return FieldElem(self.ctx, self.ctx.sub(self.i, other.i))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.i))

    def __mul__(self, other):
        assert self.ctx == other.ctx
        return FieldElem(self.ctx, self.ctx.mul(self.i, other.i))

    def __truediv__(self, other):
        assert self.ctx == other.ctx
        return FieldElem(self.ctx, self.ctx.div(self.i, other.i))

    def __pow__(self, k):
        return FieldElem(self.ctx, self.ctx.pow_(self.i, k))

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and self.ctx == other.ctx
            and self.i == other.i
        )

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.e, self.i))

    def __bool__(self):
        return self.i != 0

    def __repr__(self):
        return f"GF({self.ctx.order}):{self.i}"


def arith(kind, a, b=None):
    """Dispatch one arithmetic operation on wrapped elements.

    kind is one of add, sub, mul, div, neg, inv, pow, frob; pow takes an
    integer exponent for b.
    """
    ctx = a.ctx
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    if kind == "neg":
        return -a
    if kind == "inv":
        return FieldElem(ctx, ctx.inv(a.i))
    if kind == "pow":
        return a ** int(b)
    if kind == "frob":
        return FieldElem(ctx, ctx.frob(a.i))
    raise ValueError(f"unknown arith kind {kind!r}")


# ---------------------------------------------------------------------------

_FIELDS: dict[tuple, FieldCtx] = {}


def make_field(p, e):
    """Return the canonical GF(p^e) context (cached, deterministic)."""
    if p not in (2, 3):
        raise ValueError(f"p must be 2 or 3, got {p}")
    if not 1 <= e <= 32:
        raise ValueError(f"e must lie in [1, 32], got {e}")
    key = (p, e)
    ctx = _FIELDS.get(key)
    if ctx is None:
        modulus = CONWAY.get(key)
        if modulus is None:
            modulus = _search_modulus(p, e)
        ctx = FieldCtx(p, e, modulus)
        _FIELDS[key] = ctx
    return ctx


def field_from_json(obj):
    """Rebuild a context from its wire form, reusing the canonical one."""
    p = int(obj["p"])
    e = int(obj["e"])
    modulus = tuple(int(c) for c in obj["modulus"])
    canonical = make_field(p, e)
    if canonical.modulus == modulus:
        return canonical
    return FieldCtx(p, e, modulus)


# ---------------------------------------------------------------------------
# embeddings

def _v_norm(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _v_divmod(ctx, a, b):
    # b monic (leading coefficient 1)
    assert b and b[-1] == 1
    a = list(a)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db:
        lead = a[-1]
        if lead:
            k = len(a) - 1 - db
            q[k] = lead
            for i in range(db):
                a[k + i] = ctx.sub(a[k + i], ctx.mul(lead, b[i]))
        a.pop()
    return _v_norm(q), _v_norm(a)


def _v_mulmod(ctx, a, b, f):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    r[i + j] = ctx.add(r[i + j], ctx.mul(ai, bj))
    return _v_divmod(ctx, r, f)[1]


def _v_monic(ctx, a):
    if not a or a[-1] == 1:
        return list(a)
    inv = ctx.inv(a[-1])
    return [ctx.mul(c, inv) for c in a]


def _v_gcd(ctx, a, b):
    a = _v_norm(list(a))
    b = _v_norm(list(b))
    while b:
        bm = _v_monic(ctx, b)
        a, b = bm, _v_divmod(ctx, a, bm)[1]
    return a


def _v_tracemap(ctx, u, g):
    # sum over i < e of (u X)^(2^i), reduced mod g; p = 2 only
    t = _v_divmod(ctx, [0, u], g)[1]
    acc = list(t) + [0] * (len(g) - 1 - len(t))
    for _ in range(ctx.e - 1):
        t = _v_mulmod(ctx, t, t, g)
        for i, c in enumerate(t):
            acc[i] = ctx.add(acc[i], c)
    return _v_norm(acc)


def _roots_in_ctx(modcoeffs, sup):
    """All roots in sup of a squarefree prime-field polynomial."""
    f = _v_norm([c % sup.p for c in modcoeffs])
    if sup.order <= TABLE_LIMIT:
        roots = []
        for a in range(sup.order):
            acc = 0
            for c in reversed(f):
                acc = sup.add(sup.mul(acc, a), c)
            if acc == 0:
                roots.append(a)
        return roots
    assert sup.p == 2, "large-field root search is wired for p = 2 only"
    roots = []
    stack = [_v_monic(sup, f)]
    while stack:
        g = stack.pop()
        d = len(g) - 1
        if d <= 0:
            continue
        if d == 1:
            roots.append(g[0])
            continue
        for ubit in range(sup.e):
            s = _v_tracemap(sup, 1 << ubit, g)
            h = _v_gcd(sup, s, g)
            if 0 < len(h) - 1 < d:
                stack.append(h)
                stack.append(_v_divmod(sup, g, h)[0])
                break
        else:
            raise AssertionError("trace splitting failed on a squarefree input")
    return roots


class Embedding:
    """Field inclusion GF(p^d) -> GF(p^e) for d dividing e.

    The image of the source generator is a fixed root of the source
    modulus inside the target: the norm-compatible root when the two
    moduli cooperate, otherwise the least-index root.  apply/section work
    on packed indices; calling the embedding maps wrapped elements.
    """

    def __init__(self, sub, sup):
        assert sub.p == sup.p, "embeddings need equal characteristic"
        assert sup.e % sub.e == 0, f"GF({sub.order}) does not sit inside GF({sup.order})"
        self.sub = sub
        self.sup = sup
        self.root = self._pick_root()
        pw = [1] * sub.e
        for i in range(1, sub.e):
            pw[i] = sup.mul(pw[i - 1], self.root)
        self._rootpow = pw
        self._sect = None

    def _pick_root(self):
        sub, sup = self.sub, self.sup
        if sub.e == sup.e:
            return sup.gen
        n = (sup.order - 1) // (sub.order - 1)
        cand = sup.pow_(sup.gen, n)
        acc = 0
        for c in reversed(sub.modulus):
            acc = sup.add(sup.mul(acc, cand), c)
        if acc == 0:
            return cand
        return min(_roots_in_ctx(sub.modulus, sup))

    def apply(self, a):
        sup = self.sup
        if sup.p == 2:
            out = 0
            i = 0
            while a:
                if a & 1:
                    out ^= self._rootpow[i]
                a >>= 1
                i += 1
            return out
        out = 0
        p = sup.p
        for i in range(self.sub.e):
            d = a % p
            a //= p
            if d:
                out = sup.add(out, sup.mul(d, self._rootpow[i]))
        return out

    def section_index(self, b):
        """Preimage of a packed index, or None if b is outside the image."""
        if self._sect is None:
            assert self.sub.order <= TABLE_LIMIT, "section table too large"
            self._sect = {self.apply(a): a for a in range(self.sub.order)}
            assert len(self._sect) == self.sub.order, "embedding not injective"
        return self._sect.get(b)

    def __call__(self, x):
        assert x.ctx == self.sub
        return FieldElem(self.sup, self.apply(x.i))


_EMBEDDINGS: dict[tuple, Embedding] = {}


def embed(sub, sup):
    """Cached canonical embedding GF(p^d) -> GF(p^e)."""
    key = (sub.p, sub.e, sub.modulus, sup.p, sup.e, sup.modulus)
    emb = _EMBEDDINGS.get(key)
    if emb is None:
        emb = Embedding(sub, sup)
        _EMBEDDINGS[key] = emb
    return emb


def rel_trace(q, x):
    """Relative trace of x down to the subfield of size q.

    x lives in GF(q^m); the result is returned as an element of the
    canonical GF(q) context.
    """
    ctx = x.ctx
    p = ctx.p
    d = 0
    t = q
    while t > 1 and t % p == 0:
        t //= p
        d += 1
    assert t == 1 and d >= 1, f"{q} is not a power of the characteristic {p}"
    assert ctx.e % d == 0, f"GF({ctx.order}) is not an extension of GF({q})"
    m = ctx.e // d
    acc = 0
    cur = x.i
    for _ in range(m):
        acc = ctx.add(acc, cur)
        cur = ctx.pow_(cur, q)
    if d == ctx.e:
        return FieldElem(ctx, acc)
    sub = make_field(p, d)
    emb = embed(sub, ctx)
    j = emb.section_index(acc)
    assert j is not None, "relative trace landed outside the subfield"
    return FieldElem(sub, j)
