"""Coset cycle types for the semilinear action on Frobenius pairs, and
empirical factorization-shape statistics for comparison.

The permutation model: PGL2(q) (for even q this equals PSL2(q) = SL2(q)
mod center) acts on the (q^2-q)/2 unordered pairs {x, x^q} with x in
GF(q^2) outside GF(q).  Semilinear elements carry a Frobenius power j;
the convention is twist-then-map: x maps to M(x^(2^j)).  The two
possible conventions give inverse cosets, so the choice is fixed here
and documented.

Empirical side: for f monic over a base field GF(s), the factorization
shape of f(X) - t is the multiset of degrees of the distinct
irreducible factors (multiplicity collapsed to the radical).  Over the
unramified t the shapes realize Frobenius cycle types, so the empirical
distribution can be compared against an exact coset distribution.

Two shape engines back chebotarev_sample.  Small jobs factor each
fiber directly.  Large char-2 jobs run a vectorized engine that never
factors: with the fixed modulus h = f - t it computes r_d =
deg gcd(h, X^(s^d) - X) for d up to deg(f)/2 by a mask-synchronized
Euclidean loop across all fibers at once, then recovers the number of
distinct degree-k factors by Moebius inversion of r_d = sum over k | d
of k * m_k.  Ramified fibers are delegated to the direct path, and a
seeded subsample of every vectorized run is re-checked against it.
"""

import math
import multiprocessing
import random
from fractions import Fraction

import numpy as np

from .ff import FieldElem, embed, field_from_json, make_field
from .poly import UniPoly, factor

# Exhaustive sampling is capped at this base-field size.
EXHAUSTIVE_LIMIT = 1 << 20
# Below this many fibers (or degree), the direct per-fiber path wins.
VECTOR_MIN_FIBERS = 128
# How many fibers of each vectorized run are re-checked directly.
VECTOR_SPOT_CHECKS = 3


def _exp2_of(q):
    e = q.bit_length() - 1
    if q != 1 << e:
        raise ValueError("q must be a power of 2, got %r" % (q,))
    return e


class CycleDist:
    """Exact distribution over factorization shapes / cycle types.

    entries maps a sorted tuple of positive parts to a Fraction weight.
    Weights must sum to 1.  Parts sum to at most degree; equality holds
    for genuine cycle types, while radical shapes of ramified fibers
    fall short.
    """

    __slots__ = ("degree", "entries")

    def __init__(self, degree, entries):
        assert degree >= 1
        total = Fraction(0)
        clean = {}
        for shape, w in entries.items():
            shape = tuple(sorted(shape))
            assert shape, "empty shape"
            assert all(p >= 1 for p in shape), "nonpositive part in %r" % (shape,)
            assert sum(shape) <= degree, "shape %r exceeds degree %d" % (shape, degree)
            w = Fraction(w)
            assert w > 0
            assert shape not in clean
            clean[shape] = w
            total += w
        assert total == 1, "weights sum to %s, not 1" % (total,)
        self.degree = degree
        self.entries = clean

    def support(self):
        return frozenset(self.entries)

    def full_shapes(self):
        """Shapes whose parts sum to the full degree (unramified ones)."""
        return frozenset(s for s in self.entries if sum(s) == self.degree)

    def unramified(self):
        """Restriction to full-degree shapes, renormalized."""
        keep = {s: w for s, w in self.entries.items() if sum(s) == self.degree}
        if not keep:
            raise ValueError("no full-degree shapes to keep")
        total = sum(keep.values())
        return CycleDist(self.degree, {s: w / total for s, w in keep.items()})

    def average_fixed_points(self):
        """Expected number of parts equal to 1 (Burnside statistic)."""
        return sum(w * shape.count(1) for shape, w in self.entries.items())

    def to_json(self):
        return {
            "degree": self.degree,
            "entries": [
                {"type": list(shape), "weight": str(w)}
                for shape, w in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, obj):
        entries = {}
        for rec in obj["entries"]:
            entries[tuple(rec["type"])] = Fraction(rec["weight"])
        return cls(obj["degree"], entries)

    def __eq__(self, other):
        if not isinstance(other, CycleDist):
            return NotImplemented
        return self.degree == other.degree and self.entries == other.entries

    def __repr__(self):
        return "CycleDist(degree=%d, %d shapes)" % (self.degree, len(self.entries))


def dist_compare(a, b):
    """Total-variation distance between two shape distributions."""
    if a.degree != b.degree:
        raise ValueError(
            "degree mismatch: %d vs %d" % (a.degree, b.degree))
    keys = set(a.entries) | set(b.entries)
    acc = Fraction(0)
    for k in keys:
        acc += abs(a.entries.get(k, Fraction(0)) - b.entries.get(k, Fraction(0)))
    return acc / 2


class PermAction:
    """The degree q(q-1)/2 action of PGL2(q) cosets on Frobenius pairs.

    Points are unordered pairs {x, x^q} with x in GF(q^2) off GF(q),
    stored by the smaller packed index of the two conjugates.  Group
    elements are matrices (a, b, c, d) over GF(q) mod scalars together
    with a Frobenius power j; the element sends x to M(x^(2^j)) where
    M is the fractional-linear map.
    """

    def __init__(self, q):
        if q not in (4, 8, 16, 32):
            raise ValueError("q must be one of 4, 8, 16, 32, got %r" % (q,))
        self.q = q
        self.e = _exp2_of(q)
        self.ctx2 = make_field(2, 2 * self.e)
        ctx2 = self.ctx2
        gfq = make_field(2, self.e)
        up = embed(gfq, ctx2)
        # Packed-index image of GF(q) inside GF(q^2).
        self.lift = [up.apply(i) for i in range(q)]
        subfield = set(self.lift)
        # x^q table over GF(q^2): e squarings.
        order2 = q * q
        frq = list(range(order2))
        for _ in range(self.e):
            frq = [ctx2.mul(x, x) for x in frq]
        self.frobq = frq
        # Squaring table, for the semilinear twist.
        self.sq = [ctx2.mul(x, x) for x in range(order2)]
        reps = []
        pair_id = {}
        for x in range(order2):
            if x in subfield:
                continue
            r = min(x, frq[x])
            if r == x:
                pair_id[r] = len(reps)
                reps.append(r)
        self.domain = reps
        self.pair_id = pair_id
        assert len(reps) == q * (q - 1) // 2, "domain size %d" % len(reps)
        g = gfq.gen
        self.gens = [(1, 1, 0, 1), (g, 0, 0, 1), (0, 1, 1, 0)]
        self._elements = None
        self._validate()

    def elements(self):
        """All q^3 - q canonical matrices (first nonzero entry 1)."""
        if self._elements is not None:
            return self._elements
        q = self.q
        gfq = make_field(2, self.e)
        out = []
        for b in range(q):
            for c in range(q):
                bc = gfq.mul(b, c)
                for d in range(q):
                    if d != bc:  # det = d + b c must not vanish
                        out.append((1, b, c, d))
        for c in range(1, q):
            for d in range(q):
                out.append((0, 1, c, d))
        assert len(out) == q ** 3 - q, "linear group order %d" % len(out)
        self._elements = out
        return out

    def apply(self, mat, j, x):
        """Image of the pair represented by x under (mat, frobenius^j)."""
        ctx2 = self.ctx2
        lift = self.lift
        for _ in range(j % self.e):
            x = self.sq[x]
        a, b, c, d = mat
        num = ctx2.add(ctx2.mul(lift[a], x), lift[b])
        den = ctx2.add(ctx2.mul(lift[c], x), lift[d])
        y = ctx2.div(num, den)
        yq = self.frobq[y]
        return y if y < yq else yq

    def point_perm(self, mat, j):
        """The permutation of domain ordinals induced by (mat, j)."""
        pid = self.pair_id
        return [pid[self.apply(mat, j, x)] for x in self.domain]

    def cycle_type(self, mat, j):
        perm = self.point_perm(mat, j)
        n = len(perm)
        seen = [False] * n
        parts = []
        for s in range(n):
            if seen[s]:
                continue
            length = 0
            t = s
            while not seen[t]:
                seen[t] = True
                t = perm[t]
                length += 1
            parts.append(length)
        assert sum(parts) == n
        return tuple(sorted(parts))

    def _validate(self):
        q = self.q
        n = len(self.domain)
        # Transitivity: orbit of the three generators covers the domain.
        start = self.pair_id[self.domain[0]]
        seen = {start}
        frontier = [start]
        perms = [self.point_perm(g, 0) for g in self.gens]
        while frontier:
            nxt = []
            for s in frontier:
                for perm in perms:
                    t = perm[s]
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        assert len(seen) == n, "action not transitive: orbit %d of %d" % (len(seen), n)
        # Point stabilizer order, by direct count over all elements.
        base = self.domain[0]
        stab = sum(1 for mat in self.elements() if self.apply(mat, 0, base) == base)
        assert stab == 2 * (q + 1), "stabilizer order %d, want %d" % (stab, 2 * (q + 1))
        # Orbit-stabilizer consistency.
        assert stab * n == q ** 3 - q


_ACTIONS = {}
_COSET_DISTS = {}


def build_action(q):
    """Construct and validate the pair action for q in {4, 8, 16, 32}."""
    if q not in _ACTIONS:
        _ACTIONS[q] = PermAction(q)
    return _ACTIONS[q]


def coset_cycle_types(q, j):
    """Exact cycle-type distribution of the coset (linear group) * frob^j."""
    act = build_action(q)
    if not 0 <= j < act.e:
        raise ValueError("frobenius power %r out of range [0, %d)" % (j, act.e))
    key = (q, j)
    if key in _COSET_DISTS:
        return _COSET_DISTS[key]
    counts = {}
    for mat in act.elements():
        ct = act.cycle_type(mat, j)
        counts[ct] = counts.get(ct, 0) + 1
    order = q ** 3 - q
    dist = CycleDist(
        q * (q - 1) // 2,
        {ct: Fraction(c, order) for ct, c in counts.items()},
    )
    if j == 0:
        ident = tuple([1] * (q * (q - 1) // 2))
        assert dist.entries[ident] == Fraction(1, order)
        # Burnside: a transitive action averages one fixed point.
        assert dist.average_fixed_points() == 1
    _COSET_DISTS[key] = dist
    return dist


# ---------------------------------------------------------------------------
# Shape engines


def _embed_into(f, base):
    """f with coefficients carried into the base field (or f itself)."""
    if f.ctx == base:
        return f
    if f.ctx.p != base.p or base.e % f.ctx.e != 0:
        raise ValueError(
            "coefficient field GF(%d^%d) does not embed in base GF(%d^%d)"
            % (f.ctx.p, f.ctx.e, base.p, base.e))
    return f.map_coeffs(embed(f.ctx, base))


def _shape_one(fb, t):
    """Radical factorization shape of f - t by direct factorization."""
    h = fb - UniPoly.const(fb.ctx, t)
    fac = factor(h, seed=0)
    shape = tuple(sorted(p.degree for p, _mult in fac.factors))
    assert shape
    return shape


def branch_points(f, base):
    """All t in base whose fiber f - t is not squarefree.

    gcd(f - t, f') is nontrivial exactly when some irreducible factor P
    of f' divides f - t, i.e. when f mod P is the constant t.  Factoring
    f' once per base therefore finds every branch value.
    """
    fb = _embed_into(f, base)
    fprime = fb.derivative()
    if fprime.is_zero():
        raise ValueError("derivative vanishes identically; every fiber is ramified")
    vals = set()
    for pfac, _mult in factor(fprime, seed=0).factors:
        if pfac.degree == 0:
            continue
        r = fb % pfac
        if r.degree <= 0:
            vals.add(r.coeff(0))
    return [FieldElem(base, v) for v in sorted(vals)]


def _np_tables(ctx):
    """Log/antilog tables of a char-2 context as numpy arrays."""
    assert ctx.p == 2
    expa = np.array(ctx._exp, dtype=np.int64)
    loga = np.array([v if v >= 0 else 0 for v in ctx._log], dtype=np.int64)
    return expa, loga


def _gcd_degrees(expa, loga, order, H, V0):
    """deg gcd(h, v) per fiber, h rows of H (monic), v rows of V0.

    Mask-synchronized Euclid: every iteration eliminates the leading
    coefficient of the currently-larger polynomial in each still-active
    fiber, swapping when degrees cross, until one side is zero.
    """
    nf, width = H.shape
    U = H.copy()
    V = np.zeros_like(U)
    V[:, : V0.shape[1]] = V0
    cols = np.arange(width)

    def degrees(M):
        nz = M != 0
        anyrow = nz.any(axis=1)
        top = width - 1 - np.argmax(nz[:, ::-1], axis=1)
        return np.where(anyrow, top, -1)

    dU = degrees(U)
    dV = degrees(V)
    guard = 0
    while True:
        active = dV >= 0
        if not active.any():
            break
        guard += 1
        assert guard <= 3 * width + 10, "gcd loop failed to converge"
        swap = active & (dU < dV)
        if swap.any():
            sw = swap[:, None]
            U, V = np.where(sw, V, U), np.where(sw, U, V)
            dU, dV = np.where(swap, dV, dU), np.where(swap, dU, dV)
        # A nonzero constant on the V side means the gcd is 1.
        const = active & (dV == 0)
        if const.any():
            U[const] = 0
            U[const, 0] = 1
            dU = np.where(const, 0, dU)
            dV = np.where(const, -1, dV)
            active = dV >= 0
            if not active.any():
                break
        lu = np.take_along_axis(U, np.maximum(dU, 0)[:, None], axis=1)[:, 0]
        lv = np.take_along_axis(V, np.maximum(dV, 0)[:, None], axis=1)[:, 0]
        good = active & (lu != 0) & (lv != 0)
        coef = np.where(
            good, expa[np.where(good, loga[lu] - loga[lv] + order - 1, 0)], 0)
        shift = np.maximum(dU - dV, 0)
        src = cols[None, :] - shift[:, None]
        vsh = np.where(
            src >= 0, np.take_along_axis(V, np.maximum(src, 0), axis=1), 0)
        prod_ok = (coef[:, None] != 0) & (vsh != 0)
        idx = np.where(prod_ok, loga[coef[:, None]] + loga[vsh], 0)
        term = np.where(prod_ok, expa[idx], 0)
        U = np.where(active[:, None], U ^ term, U)
        dU = np.where(active, degrees(U), dU)
    return dU


def _vector_shapes(fb, ts, branch_set):
    """Radical shapes for many fibers at once; char-2 base, f monic.

    Returns a list of shape tuples aligned with ts.  Ramified fibers
    (t in branch_set) are computed by the direct path; the vectorized
    root-count recursion assumes a squarefree modulus everywhere else.
    """
    ctx = fb.ctx
    assert ctx.p == 2
    m = fb.degree
    assert m >= 3 and fb.is_monic()
    s = ctx.order
    n = ctx.e
    dmax = m // 2
    expa, loga = _np_tables(ctx)
    flow = np.array([fb.coeff(i) for i in range(m)], dtype=np.int64)
    ts_arr = np.asarray(ts, dtype=np.int64)

    def vmul(u, v):
        ok = (u != 0) & (v != 0)
        idx = np.where(ok, loga[u] + loga[v], 0)
        return np.where(ok, expa[idx], 0)

    shapes = [None] * len(ts)
    mobius = {}
    for k in range(1, dmax + 1):
        row = []
        for d in range(1, k + 1):
            if k % d == 0:
                r = k // d
                mu = _mobius(r)
                if mu:
                    row.append((d, mu))
        mobius[k] = row

    chunk = 4096
    for lo in range(0, len(ts), chunk):
        tchunk = ts_arr[lo: lo + chunk]
        nf = len(tchunk)
        # h = f - t: X^m reduces to hlow, the low part with t folded in.
        hlow = np.broadcast_to(flow, (nf, m)).copy()
        hlow[:, 0] ^= tchunk
        # red[j] = X^(m+j) mod h for the even spread positions.
        red = np.zeros((m - 1, nf, m), dtype=np.int64)
        red[0] = hlow
        for j in range(1, m - 1):
            prev = red[j - 1]
            top = prev[:, m - 1]
            red[j][:, 1:] = prev[:, : m - 1]
            red[j] ^= vmul(top[:, None], hlow)

        def sqmod(B):
            sq = vmul(B, B)
            out = np.zeros((nf, m), dtype=np.int64)
            half = (m + 1) // 2
            out[:, : 2 * half - 1: 2] = sq[:, :half]
            for i in range(half, m):
                out ^= vmul(sq[:, i][:, None], red[2 * i - m])
            return out

        H = np.zeros((nf, m + 1), dtype=np.int64)
        H[:, :m] = hlow
        H[:, m] = 1
        rdeg = np.zeros((nf, dmax + 1), dtype=np.int64)
        B = np.zeros((nf, m), dtype=np.int64)
        B[:, 1] = 1
        for d in range(1, dmax + 1):
            for _ in range(n):
                B = sqmod(B)
            V0 = B.copy()
            V0[:, 1] ^= 1
            rdeg[:, d] = _gcd_degrees(expa, loga, s, H, V0)
        mults = np.zeros((nf, dmax + 1), dtype=np.int64)
        for k in range(1, dmax + 1):
            acc = np.zeros(nf, dtype=np.int64)
            for d, mu in mobius[k]:
                acc += mu * rdeg[:, d]
            assert (acc % k == 0).all(), "root counts are not Moebius-consistent"
            mults[:, k] = acc // k
        assert (mults >= 0).all()
        covered = (mults * np.arange(dmax + 1)).sum(axis=1)
        for i in range(nf):
            t = int(tchunk[i])
            if t in branch_set:
                shapes[lo + i] = _shape_one(fb, t)
                continue
            parts = []
            for k in range(1, dmax + 1):
                parts.extend([k] * int(mults[i, k]))
            rest = m - int(covered[i])
            if rest:
                assert rest > dmax, "leftover degree %d is impossible" % rest
                parts.append(rest)
            shapes[lo + i] = tuple(parts)
    # Spot-check a deterministic subsample against the direct path.
    if len(ts) > VECTOR_SPOT_CHECKS:
        picks = sorted({0, len(ts) // 2, len(ts) - 1})
    else:
        picks = range(len(ts))
    for i in picks:
        assert shapes[i] == _shape_one(fb, int(ts_arr[i])), (
            "vectorized shape disagrees with direct factorization at t index %d"
            % int(ts_arr[i]))
    return shapes


def _mobius(r):
    if r == 1:
        return 1
    out = 1
    d = 2
    while d * d <= r:
        if r % d == 0:
            r //= d
            if r % d == 0:
                return 0
            out = -out
        d += 1
    if r > 1:
        out = -out
    return out


def _shapes_for(fb, ts):
    """Dispatch between the direct and vectorized engines."""
    use_vector = (
        fb.ctx.p == 2
        and fb.degree >= 3
        and fb.is_monic()
        and len(ts) >= VECTOR_MIN_FIBERS
    )
    if use_vector:
        fprime = fb.derivative()
        if not fprime.is_zero():
            branch = {e.i for e in branch_points(fb, fb.ctx)}
            return _vector_shapes(fb, ts, branch)
    return [_shape_one(fb, t) for t in ts]


def _cheb_worker(payload):
    f_json, ctx_json, ts = payload
    base = field_from_json(ctx_json)
    fb = UniPoly.from_json(f_json)
    assert fb.ctx == base
    return _shapes_for(fb, ts)


def chebotarev_sample(f, base, mode="exhaustive", n=None, seed=None, threads=1):
    """Empirical distribution of fiber factorization shapes of f over base.

    mode "exhaustive" walks every t in base (size capped at 2^20);
    mode "sampled" draws n distinct t values with the given seed.
    Every fiber contributes the radical shape of f - t, ramified fibers
    included; use CycleDist.unramified() to restrict before a
    Chebotarev comparison.
    """
    fb = _embed_into(f, base)
    if fb.degree < 1:
        raise ValueError("f must be nonconstant")
    size = base.order
    if mode == "exhaustive":
        if size > EXHAUSTIVE_LIMIT:
            raise ValueError(
                "base size %d exceeds the exhaustive cap %d" % (size, EXHAUSTIVE_LIMIT))
        ts = list(range(size))
    elif mode == "sampled":
        if n is None or seed is None:
            raise ValueError("sampled mode needs n and seed")
        if n > size:
            raise ValueError("cannot draw %d distinct values from %d" % (n, size))
        ts = sorted(random.Random(seed).sample(range(size), n))
    else:
        raise ValueError("mode must be 'exhaustive' or 'sampled', got %r" % (mode,))

    if threads > 1 and len(ts) >= 4 * VECTOR_MIN_FIBERS:
        step = -(-len(ts) // threads)
        jobs = [
            (fb.to_json(), base.to_json(), ts[i: i + step])
            for i in range(0, len(ts), step)
        ]
        with multiprocessing.Pool(threads) as pool:
            parts = pool.map(_cheb_worker, jobs)
        shapes = [sh for part in parts for sh in part]
    else:
        shapes = _shapes_for(fb, ts)

    counts = {}
    for sh in shapes:
        counts[sh] = counts.get(sh, 0) + 1
    total = len(shapes)
    return CycleDist(
        fb.degree, {sh: Fraction(c, total) for sh, c in counts.items()})
