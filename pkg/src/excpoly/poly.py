"""Univariate and bivariate polynomials over packed-field contexts.

Coefficients are stored as packed integer indices (see ff).  UniPoly is
an immutable coefficient tuple, low degree first, with no trailing
zeros; BiPoly is a sparse {(i, j): coeff} map in two variables X and Y.
The raw list kernels (_mul, _divmod, _powmod, ...) are shared with the
heavier counting code elsewhere in the package.
"""

from __future__ import annotations

import random

from .ff import FieldCtx, FieldElem, TABLE_LIMIT, embed, field_from_json

__all__ = [
    "UniPoly",
    "BiPoly",
    "Factorization",
    "factor",
    "roots",
    "upoly_arith",
    "bipoly_arith",
]


# ---------------------------------------------------------------------------
# raw kernels on coefficient lists (low degree first, may carry trailing zeros)

def _norm(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _add(ctx, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.add(out[i], c)
    return _norm(out)


def _neg(ctx, a):
    if ctx.p == 2:
        return list(a)
    return [ctx.neg(c) for c in a]


def _sub(ctx, a, b):
    return _add(ctx, a, _neg(ctx, b))


def _mul(ctx, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    cmul = ctx.mul
    cadd = ctx.add
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = cadd(out[i + j], cmul(ai, bj))
    return _norm(out)


def _divmod(ctx, a, b):
    b = _norm(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv_lead = ctx.inv(b[-1])
    q = [0] * max(len(a) - db, 0)
    while len(_norm(a)) - 1 >= db:
        lead = a[-1]
        k = len(a) - 1 - db
        coef = ctx.mul(lead, inv_lead)
        q[k] = coef
        for i in range(db):
            a[k + i] = ctx.sub(a[k + i], ctx.mul(coef, b[i]))
        a.pop()
    return _norm(q), _norm(a)


def _mod(ctx, a, b):
    return _divmod(ctx, a, b)[1]


def _monic(ctx, a):
    if not a or a[-1] == 1:
        return list(a)
    inv = ctx.inv(a[-1])
    return [ctx.mul(c, inv) for c in a]


def _gcd(ctx, a, b):
    a = _norm(list(a))
    b = _norm(list(b))
    while b:
        a, b = b, _mod(ctx, a, b)
    return _monic(ctx, a)


def _powmod(ctx, a, n, f):
    r = [1]
    a = _mod(ctx, a, f)
    while n:
        if n & 1:
            r = _mod(ctx, _mul(ctx, r, a), f)
        n >>= 1
        if n:
            a = _mod(ctx, _mul(ctx, a, a), f)
    return r


def _eval(ctx, a, x):
    acc = 0
    for c in reversed(a):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def _deriv(ctx, a):
    out = []
    for i in range(1, len(a)):
        out.append(ctx.mul(a[i], i % ctx.p))
    return _norm(out)


# ---------------------------------------------------------------------------

class UniPoly:
    """Univariate polynomial; immutable, trailing-zero free."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # -- constructors

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (1,))

    @classmethod
    def X(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def const(cls, ctx, a):
        a = a.i if isinstance(a, FieldElem) else int(a)
        return cls(ctx, (a,))

    @classmethod
    def monomial(cls, ctx, k, a=1):
        a = a.i if isinstance(a, FieldElem) else int(a)
        return cls(ctx, (0,) * k + (a,))

    # -- structure

    @property
    def degree(self):
        return len(self.c) - 1

    @property
    def lead(self):
        return self.c[-1] if self.c else 0

    def is_zero(self):
        return not self.c

    def is_monic(self):
        return bool(self.c) and self.c[-1] == 1

    def coeff(self, k):
        return self.c[k] if 0 <= k < len(self.c) else 0

    # -- arithmetic

    def __add__(self, other):
        assert self.ctx == other.ctx
        return UniPoly(self.ctx, _add(self.ctx, list(self.c), list(other.c)))

    def __sub__(self, other):
        assert self.ctx == other.ctx
        return UniPoly(self.ctx, _sub(self.ctx, list(self.c), list(other.c)))

    def __neg__(self):
        return UniPoly(self.ctx, _neg(self.ctx, list(self.c)))

    def __mul__(self, other):
        assert self.ctx == other.ctx
        return UniPoly(self.ctx, _mul(self.ctx, self.c, other.c))

    def __divmod__(self, other):
        assert self.ctx == other.ctx
        q, r = _divmod(self.ctx, list(self.c), list(other.c))
        return UniPoly(self.ctx, q), UniPoly(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        assert r.is_zero(), "division was not exact"
        return q

    def scale(self, a):
        a = a.i if isinstance(a, FieldElem) else int(a)
        return UniPoly(self.ctx, [self.ctx.mul(c, a) for c in self.c])

    def monic(self):
        return UniPoly(self.ctx, _monic(self.ctx, list(self.c)))

    def gcd(self, other):
        assert self.ctx == other.ctx
        return UniPoly(self.ctx, _gcd(self.ctx, self.c, other.c))

    def pow_(self, n):
        assert n >= 0
        r = UniPoly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                r = r * base
            n >>= 1
            if n:
                base = base * base
        return r

    def pow_mod(self, n, modpoly):
        assert self.ctx == modpoly.ctx
        return UniPoly(self.ctx, _powmod(self.ctx, list(self.c), n, list(modpoly.c)))

    def derivative(self):
        return UniPoly(self.ctx, _deriv(self.ctx, self.c))

    def times_x_power(self, k):
        if not self.c:
            return self
        return UniPoly(self.ctx, (0,) * k + self.c)

    # -- evaluation / composition

    def eval_index(self, x):
        return _eval(self.ctx, self.c, x)

    def __call__(self, x):
        if isinstance(x, FieldElem):
            assert x.ctx == self.ctx
            return FieldElem(self.ctx, _eval(self.ctx, self.c, x.i))
        return _eval(self.ctx, self.c, int(x))

    def compose(self, other):
        """self(other): Horner over polynomials."""
        assert self.ctx == other.ctx
        acc = UniPoly.zero(self.ctx)
        for c in reversed(self.c):
            acc = acc * other
            if c:
                acc = acc + UniPoly.const(self.ctx, c)
        return acc

    # -- coefficient field moves

    def map_coeffs(self, embedding):
        """Push coefficients through an embedding into the bigger field."""
        assert embedding.sub == self.ctx
        return UniPoly(embedding.sup, [embedding.apply(c) for c in self.c])

    def descend(self, embedding):
        """Pull coefficients back along an embedding; all must be in range."""
        assert embedding.sup == self.ctx
        out = []
        for c in self.c:
            j = embedding.section_index(c)
            assert j is not None, "coefficient outside the subfield"
            out.append(j)
        return UniPoly(embedding.sub, out)

    # -- plumbing

    def to_json(self):
        return {"field": self.ctx.to_json(), "coeffs": list(self.c)}

    @classmethod
    def from_json(cls, obj):
        ctx = field_from_json(obj["field"])
        return cls(ctx, [int(c) for c in obj["coeffs"]])

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.ctx == other.ctx
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.e, self.c))

    def __repr__(self):
        return f"UniPoly(GF({self.ctx.order}), deg={self.degree})"


# ---------------------------------------------------------------------------
# factorization

class Factorization:
    """unit * product of monic irreducible powers."""

    def __init__(self, ctx, unit, factors):
        self.ctx = ctx
        self.unit = unit  # packed index
        self.factors = sorted(factors, key=lambda fm: (fm[0].degree, fm[0].c, fm[1]))

    def product(self):
        out = UniPoly.const(self.ctx, self.unit)
        for g, m in self.factors:
            out = out * g.pow_(m)
        return out

    def __iter__(self):
        return iter(self.factors)

    def __repr__(self):
        inner = ", ".join(f"(deg {g.degree})^{m}" for g, m in self.factors)
        return f"Factorization({inner})"


def _pth_root_poly(f):
    # f is a p-th power: every exponent is divisible by p
    ctx = f.ctx
    p = ctx.p
    root_exp = p ** (ctx.e - 1)
    out = []
    for k in range(0, f.degree + 1, p):
        c = f.coeff(k)
        for j in range(k + 1, min(k + p, f.degree + 1)):
            assert f.coeff(j) == 0, "not a p-th power"
        out.append(ctx.pow_(c, root_exp))
    return UniPoly(ctx, out)


def _squarefree_decomp(f):
    """Monic f -> [(g, mult)] with the g squarefree and pairwise coprime."""
    ctx = f.ctx
    p = ctx.p
    out = []
    d = f.derivative()
    if d.is_zero():
        for g, m in _squarefree_decomp(_pth_root_poly(f)):
            out.append((g, m * p))
        return out
    c = f.gcd(d)
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.degree > 0:
            out.append((z, i))
        c = c.exact_div(y)
        w = y
        i += 1
    if c.degree > 0:
        for g, m in _squarefree_decomp(_pth_root_poly(c)):
            out.append((g, m * p))
    return out


def _ddf(g):
    """Distinct-degree split of monic squarefree g -> [(product, d)]."""
    ctx = g.ctx
    out = []
    h = UniPoly.X(ctx)
    d = 0
    rest = g
    while rest.degree > 2 * (d + 1) - 1:
        d += 1
        h = h.pow_mod(ctx.order, rest)
        gd = rest.gcd(h - UniPoly.X(ctx))
        if gd.degree > 0:
            out.append((gd, d))
            rest = rest.exact_div(gd)
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _edf(g, d, rng):
    """Split monic squarefree g, all factors of degree d, into irreducibles."""
    ctx = g.ctx
    if g.degree == d:
        return [g]
    n = g.degree
    while True:
        r = UniPoly(ctx, [rng.randrange(ctx.order) for _ in range(n)])
        if r.degree < 1:
            continue
        if ctx.p == 2:
            # trace map into GF(2) relative to the degree-d factor fields
            s = r
            t = r
            for _ in range(ctx.e * d - 1):
                t = t.pow_mod(2, g)
                s = s + t
            h = g.gcd(s)
        else:
            expo = (ctx.order**d - 1) // 2
            s = r.pow_mod(expo, g) - UniPoly.one(ctx)
            h = g.gcd(s)
        if 0 < h.degree < n:
            left = h.monic()
            right = g.exact_div(left)
            return _edf(left, d, rng) + _edf(right, d, rng)


def factor(f, seed=0):
    """Full factorization of f, deterministic for a fixed seed."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    ctx = f.ctx
    unit = f.lead
    rng = random.Random(seed)
    out = []
    if f.degree == 0:
        return Factorization(ctx, unit, [])
    work = f.monic()
    for g, m in _squarefree_decomp(work):
        for prod, d in _ddf(g):
            for irr in _edf(prod, d, rng):
                out.append((irr, m))
    fact = Factorization(ctx, unit, out)
    return fact


def roots(f, field):
    """Roots of f in the given field, with multiplicities.

    The field may be an extension of the coefficient field; returns a list
    of (FieldElem, multiplicity) sorted by packed index.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no root list")
    ctx = f.ctx
    if field != ctx:
        f = f.map_coeffs(embed(ctx, field))
    g = f.monic()
    # radical of the part splitting over `field`
    xq = UniPoly.X(field).pow_mod(field.order, g)
    rad = g.gcd(xq - UniPoly.X(field))
    found = _all_roots_squarefree(rad)
    out = []
    for r in sorted(found):
        m = 0
        lin = UniPoly(field, (r, 1)) if field.p == 2 else UniPoly(field, (field.neg(r), 1))
        work = f
        while True:
            q, rem = divmod(work, lin)
            if not rem.is_zero():
                break
            m += 1
            work = q
        assert m >= 1
        out.append((FieldElem(field, r), m))
    return out


def _all_roots_squarefree(g):
    """All roots of a monic squarefree polynomial that splits completely."""
    ctx = g.ctx
    if g.degree <= 0:
        return []
    if ctx.order <= TABLE_LIMIT and ctx.order <= 1 << 12:
        return [a for a in range(ctx.order) if g.eval_index(a) == 0]
    roots_ = []
    stack = [g]
    while stack:
        cur = stack.pop()
        d = cur.degree
        if d <= 0:
            continue
        if d == 1:
            c0 = cur.c[0]
            roots_.append(c0 if ctx.p == 2 else ctx.neg(c0))
            continue
        if ctx.p == 2:
            split = None
            for ubit in range(ctx.e):
                u = UniPoly(ctx, (0, 1 << ubit))
                s = u
                t = u
                for _ in range(ctx.e - 1):
                    t = t.pow_mod(2, cur)
                    s = s + t
                h = cur.gcd(s)
                if 0 < h.degree < d:
                    split = h
                    break
            assert split is not None, "trace splitting failed"
            stack.append(split)
            stack.append(cur.exact_div(split))
        else:
            # odd characteristic: shift-and-power splitting
            a = 0
            while True:
                shifted = cur.compose(UniPoly(ctx, (a, 1)))
                s = UniPoly.X(ctx).pow_mod((ctx.order - 1) // 2, shifted)
                h = shifted.gcd(s - UniPoly.one(ctx))
                if 0 < h.degree < d:
                    back = h.compose(UniPoly(ctx, (ctx.neg(a), 1)))
                    stack.append(back.monic())
                    stack.append(cur.exact_div(back.monic()))
                    break
                a += 1
                assert a < ctx.order, "splitting exhausted the field"
    return roots_


# ---------------------------------------------------------------------------

class BiPoly:
    """Sparse bivariate polynomial in X and Y."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        clean = {}
        for (i, j), c in terms.items():
            if c:
                clean[(i, j)] = c
        self.terms = clean

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx, a):
        a = a.i if isinstance(a, FieldElem) else int(a)
        return cls(ctx, {(0, 0): a})

    @classmethod
    def X(cls, ctx):
        return cls(ctx, {(1, 0): 1})

    @classmethod
    def Y(cls, ctx):
        return cls(ctx, {(0, 1): 1})

    @classmethod
    def from_terms(cls, ctx, triples):
        terms = {}
        for i, j, c in triples:
            c = c.i if isinstance(c, FieldElem) else int(c)
            terms[(i, j)] = ctx.add(terms.get((i, j), 0), c)
        return cls(ctx, terms)

    @property
    def degx(self):
        return max((i for i, _ in self.terms), default=-1)

    @property
    def degy(self):
        return max((j for _, j in self.terms), default=-1)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        assert self.ctx == other.ctx
        out = dict(self.terms)
        add = self.ctx.add
        for k, c in other.terms.items():
            out[k] = add(out.get(k, 0), c)
        return BiPoly(self.ctx, out)

    def __neg__(self):
        neg = self.ctx.neg
        return BiPoly(self.ctx, {k: neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        assert self.ctx == other.ctx
        out = {}
        mul = self.ctx.mul
        add = self.ctx.add
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = add(out.get(k, 0), mul(c1, c2))
        return BiPoly(self.ctx, out)

    def scale(self, a):
        a = a.i if isinstance(a, FieldElem) else int(a)
        mul = self.ctx.mul
        return BiPoly(self.ctx, {k: mul(c, a) for k, c in self.terms.items()})

    def pow_(self, n):
        assert n >= 0
        r = BiPoly.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                r = r * base
            n >>= 1
            if n:
                base = base * base
        return r

    def eval(self, x, y):
        x = x.i if isinstance(x, FieldElem) else int(x)
        y = y.i if isinstance(y, FieldElem) else int(y)
        ctx = self.ctx
        acc = 0
        for (i, j), c in self.terms.items():
            acc = ctx.add(acc, ctx.mul(c, ctx.mul(ctx.pow_(x, i), ctx.pow_(y, j))))
        return acc

    def subst(self, x=None, y=None):
        """Substitute for the variables, clearing declared denominators.

        Each of x and y is None (leave alone), a BiPoly (polynomial
        substitution), or a (numerator, denominator) BiPoly pair.  With a
        pair in play the result is the numerator after multiplying
        through by den_x^degx * den_y^degy; the caller keeps track of
        that clearing factor.
        """
        ctx = self.ctx
        one = BiPoly.const(ctx, 1)

        def split(spec, default):
            if spec is None:
                return default, one
            if isinstance(spec, tuple):
                return spec
            return spec, one

        xn, xd = split(x, BiPoly.X(ctx))
        yn, yd = split(y, BiPoly.Y(ctx))
        dx = max(self.degx, 0)
        dy = max(self.degy, 0)
        xn_p = _pow_table(xn, dx)
        xd_p = _pow_table(xd, dx)
        yn_p = _pow_table(yn, dy)
        yd_p = _pow_table(yd, dy)
        out = BiPoly.zero(ctx)
        for (i, j), c in self.terms.items():
            term = BiPoly.const(ctx, c) * xn_p[i] * xd_p[dx - i] * yn_p[j] * yd_p[dy - j]
            out = out + term
        return out

    def subst_uni(self, fx, fy):
        """Collapse to a univariate: X := fx(T), Y := fy(T)."""
        assert fx.ctx == self.ctx and fy.ctx == self.ctx
        ctx = self.ctx
        dx = max(self.degx, 0)
        dy = max(self.degy, 0)
        fx_p = _upow_table(fx, dx)
        fy_p = _upow_table(fy, dy)
        out = UniPoly.zero(ctx)
        for (i, j), c in self.terms.items():
            out = out + (fx_p[i] * fy_p[j]).scale(c)
        return out

    def swap_vars(self):
        return BiPoly(self.ctx, {(j, i): c for (i, j), c in self.terms.items()})

    def coeff(self, i, j):
        return self.terms.get((i, j), 0)

    def to_json(self):
        triples = sorted([i, j, c] for (i, j), c in self.terms.items())
        return {"field": self.ctx.to_json(), "terms": triples}

    @classmethod
    def from_json(cls, obj):
        ctx = field_from_json(obj["field"])
        return cls(ctx, {(int(i), int(j)): int(c) for i, j, c in obj["terms"]})

    def __eq__(self, other):
        return (
            isinstance(other, BiPoly)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"BiPoly(GF({self.ctx.order}), {len(self.terms)} terms)"


def _pow_table(b, n):
    out = [BiPoly.const(b.ctx, 1)]
    for _ in range(n):
        out.append(out[-1] * b)
    return out


def _upow_table(f, n):
    out = [UniPoly.one(f.ctx)]
    for _ in range(n):
        out.append(out[-1] * f)
    return out


# ---------------------------------------------------------------------------
# spec-shaped dispatchers

def upoly_arith(kind, f, g=None, n=None):
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    if kind == "divmod":
        return divmod(f, g)
    if kind == "gcd":
        return f.gcd(g)
    if kind == "pow_mod":
        return f.pow_mod(n, g)
    raise ValueError(f"unknown upoly_arith kind {kind!r}")


def bipoly_arith(kind, a, b=None, **kw):
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "eq":
        return a == b
    if kind == "subst_uni":
        return a.subst_uni(kw["fx"], kw["fy"])
    raise ValueError(f"unknown bipoly_arith kind {kind!r}")
