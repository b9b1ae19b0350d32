"""Basic representations and the Matsumoto action of root elements.

Supported: (E6,w1), (E7,w7), (D_l,w1), (A_l,w1) -- minuscule, one-dimensional
weight spaces; and (E8,w8) -- the adjoint module with an 8-dimensional zero
weight block spanned by the simple coroots.

Weights are stored as depth vectors d = lambda_1 - lambda in simple-root
coordinates.  Action signs come from the root system's bilinear cocycle,
extended by zero on the fundamental-weight part of the weight lattice.
"""

from __future__ import annotations

from fractions import Fraction

from .rootsys import RootSystem, build_system

SUPPORTED = {("E6", 1), ("E7", 7), ("E8", 8)}


def _fundamental_index(label: str, w: int) -> int:
    kind = label[0]
    rank = int(label[1:])
    if kind in ("A", "D") and w == 1:
        return 1
    if (label, w) in SUPPORTED:
        return w
    raise ValueError(f"unsupported representation ({label}, w{w})")


class RepModule:
    """Weight data and cached action channels of a basic representation."""

    def __init__(self, label: str, w: int):
        self.system: RootSystem = build_system(label)
        self.w = _fundamental_index(label, w)
        self.adjoint = (label == "E8")
        self._build_weights()
        self._channels: dict = {}

    # -- weights --------------------------------------------------------------

    def _pairing_depth(self, d, i) -> int:
        """<lambda, alpha_i^vee> for lambda with depth vector d (0-based i)."""
        sys = self.system
        acc = 1 if i == self.w - 1 else 0
        for j in range(sys.rank):
            if d[j]:
                acc -= sys.cartan[i][j] * d[j]
        return acc

    def _build_weights(self):
        sys = self.system
        rank = sys.rank
        if self.adjoint:
            delta = sys.highest_root()
            depths = [tuple(a - b for a, b in zip(delta, r)) for r in sys.roots]
        else:
            seen = {(0,) * rank}
            frontier = [(0,) * rank]
            while frontier:
                new = []
                for d in frontier:
                    for i in range(rank):
                        p = self._pairing_depth(d, i)
                        d2 = list(d)
                        d2[i] += p
                        d2 = tuple(d2)
                        if d2 not in seen:
                            seen.add(d2)
                            new.append(d2)
                frontier = new
            depths = list(seen)
        depths.sort(key=lambda d: (sum(d), d))
        self.weights = depths
        self.index = {d: k for k, d in enumerate(depths)}
        self.dim = len(depths) + (sys.rank if self.adjoint else 0)
        # edges (idx, idx2, simple i) with lambda2 = lambda - alpha_i
        self.edges = []
        for k, d in enumerate(depths):
            for i in range(rank):
                d2 = list(d)
                d2[i] += 1
                k2 = self.index.get(tuple(d2))
                if k2 is not None:
                    self.edges.append((k, k2, i + 1))

    def nweights(self) -> int:
        return len(self.weights)

    def weight_vector(self, idx):
        """lambda as a rational vector in simple-root coordinates."""
        sys = self.system
        fund = _fundamental_weight_coords(sys, self.w)
        d = self.weights[idx]
        return tuple(f - x for f, x in zip(fund, d))

    def resolve(self, idx: int) -> int:
        """Resolve +-1-based weight numbering: 1 = highest, -1 = lowest."""
        n = self.nweights()
        if idx > 0:
            return idx - 1
        if idx < 0:
            return n + idx
        raise ValueError("weight numbers are 1-based (negative = from lowest)")

    def pairing(self, idx, i) -> int:
        """<lambda_idx, alpha_i^vee>, i 1-based."""
        return self._pairing_depth(self.weights[idx], i - 1)

    def reflect_weight(self, idx, i) -> int:
        """Index of s_{alpha_{i+1}}(lambda_idx) (i 0-based)."""
        d = self.weights[idx]
        p = self._pairing_depth(d, i)
        d2 = list(d)
        d2[i] += p
        return self.index[tuple(d2)]

    def weight_plus_root(self, idx, root):
        """Index of lambda_idx + root, or None."""
        d = self.weights[idx]
        d2 = tuple(a - b for a, b in zip(d, root))
        return self.index.get(d2)

    def eps_weight(self, root, idx) -> int:
        """Cocycle value eps(root, lambda_idx) in Z/2 (fundamental part -> 0)."""
        d = self.weights[idx]
        acc = 0
        sys = self.system
        for i, ri in enumerate(root):
            if not ri:
                continue
            for j, dj in enumerate(d):
                if dj and sys._eps[i][j]:
                    acc += ri * dj
        return acc % 2

    def action_sign(self, root, src_idx) -> int:
        """c(lambda, alpha) in x_alpha(t) e_lambda = e_lambda + c t e_{lambda+alpha}."""
        return -1 if self.eps_weight(root, src_idx) else 1

    # -- action channels -------------------------------------------------------

    def channels(self, root):
        """Cached per-root action data.

        Returns (pairs, cartan) where pairs is a list of (src, dst, sign) on
        nonzero weights and cartan describes the E8 zero-weight block flows:
        (neg_idx, pos_idx, hvec, pairing_row) or None.
        """
        root = tuple(root)
        if root in self._channels:
            return self._channels[root]
        pairs = []
        for src in range(self.nweights()):
            dst = self.weight_plus_root(src, root)
            if dst is not None:
                pairs.append((src, dst, self.action_sign(root, src)))
        cartan = None
        if self.adjoint:
            sys = self.system
            delta = sys.highest_root()
            neg = self.index[tuple(a + b for a, b in zip(delta, root))]   # -root
            pos = self.index[tuple(a - b for a, b in zip(delta, root))]  # +root
            hvec = tuple(root)  # coroot coordinates of h_root
            prow = tuple(sum(sys.cartan[i][j] * root[j] for j in range(sys.rank))
                         for i in range(sys.rank))  # <root, h_i>
            cartan = (neg, pos, hvec, prow)
        out = (pairs, cartan)
        self._channels[root] = out
        return out

    # -- gradings and branching -------------------------------------------------

    def grading(self, pivot: int):
        """Layers of weights by the pivot coefficient of lambda_1 - lambda."""
        i = pivot - 1
        layers: dict = {}
        for k, d in enumerate(self.weights):
            layers.setdefault(d[i], []).append(k)
        imax = max(layers)
        out = [layers.get(j, []) for j in range(imax + 1)]
        zero_layer = None
        if self.adjoint:
            zero_layer = self.system.highest_root()[i]
        return Grading(self, pivot, out, zero_layer)

    def branching_cells(self, h1: int, h2: int):
        """Partition of weights by removing edges labeled h1 (columns) and h2 (rows)."""
        cols = self._components(excluding=h1)
        rows = self._components(excluding=h2)
        return BranchingTable(self, h1, h2, cols, rows)

    def _components(self, excluding: int):
        adj = {k: [] for k in range(self.nweights())}
        for a, b, lab in self.edges:
            if lab != excluding:
                adj[a].append(b)
                adj[b].append(a)
        seen = set()
        comps = []
        for k in range(self.nweights()):
            if k in seen:
                continue
            comp = {k}
            stack = [k]
            seen.add(k)
            while stack:
                cur = stack.pop()
                for nb in adj[cur]:
                    if nb not in seen:
                        seen.add(nb)
                        comp.add(nb)
                        stack.append(nb)
            comps.append(sorted(comp))
        comps.sort(key=lambda c: min(c))
        return comps


def _fundamental_weight_coords(sys: RootSystem, w: int):
    """Coordinates of the fundamental weight in the simple-root basis."""
    rank = sys.rank
    # solve C^T x = e_w  (pairing <x, alpha_i^vee> = delta_{i,w})
    M = [[Fraction(sys.cartan[i][j]) for j in range(rank)] for i in range(rank)]
    rhs = [Fraction(1) if i == w - 1 else Fraction(0) for i in range(rank)]
    aug = [M[i] + [rhs[i]] for i in range(rank)]
    for c in range(rank):
        piv = next(i for i in range(c, rank) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(rank):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(aug[i][rank] for i in range(rank))


class Grading:
    def __init__(self, rep, pivot, layers, zero_layer):
        self.rep = rep
        self.pivot = pivot
        self.layers = layers
        self.zero_layer = zero_layer  # E8: layer index carrying the V^0 block

    @property
    def imax(self):
        return len(self.layers) - 1

    def layer_sizes(self):
        sizes = [len(l) for l in self.layers]
        if self.zero_layer is not None:
            sizes[self.zero_layer] += self.rep.system.rank
        return sizes

    def layer_of(self, idx):
        return self.rep.weights[idx][self.pivot - 1]


class BranchingTable:
    def __init__(self, rep, h1, h2, cols, rows):
        self.rep = rep
        self.h1, self.h2 = h1, h2
        self.cols = cols  # list of weight-index lists (cut through h1)
        self.rows = rows  # cut through h2
        self._order()

    def _order(self):
        # order components by the height of their top weight
        key = lambda comp: min(sum(self.rep.weights[k]) for k in comp)
        self.cols.sort(key=key)
        self.rows.sort(key=key)

    def cell(self, col: int, row: int):
        """0-based cell: intersection of column and row components."""
        return sorted(set(self.cols[col]) & set(self.rows[row]))

    def col_sizes(self):
        return [len(c) for c in self.cols]

    def row_sizes(self):
        return [len(r) for r in self.rows]


# -- module vectors and the elementary action ------------------------------------


class ModuleVector:
    """Column in V(A): one coefficient per nonzero weight plus the E8 V^0 block."""

    __slots__ = ("rep", "coords", "hcoords")

    def __init__(self, rep: RepModule, coords, hcoords=None):
        self.rep = rep
        self.coords = list(coords)
        self.hcoords = list(hcoords) if hcoords is not None else (
            [] if not rep.adjoint else None)
        if rep.adjoint and self.hcoords is None:
            raise ValueError("adjoint module vector needs a zero-weight block")

    @staticmethod
    def basis(rep, idx, zero, one) -> "ModuleVector":
        coords = [zero] * rep.nweights()
        coords[idx] = one
        h = [zero] * rep.system.rank if rep.adjoint else []
        return ModuleVector(rep, coords, h)

    @staticmethod
    def zero_vec(rep, zero) -> "ModuleVector":
        h = [zero] * rep.system.rank if rep.adjoint else []
        return ModuleVector(rep, [zero] * rep.nweights(), h)

    def copy(self) -> "ModuleVector":
        return ModuleVector(self.rep, list(self.coords), list(self.hcoords))

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.rep is other.rep and \
            self.coords == other.coords and self.hcoords == other.hcoords

    def is_zero(self):
        return all(c.is_zero() for c in self.coords) and \
            all(c.is_zero() for c in self.hcoords)

    def map_coords(self, fn) -> "ModuleVector":
        return ModuleVector(self.rep, [fn(c) for c in self.coords],
                            [fn(c) for c in self.hcoords])


def act_elementary(rep: RepModule, root, xi, b: ModuleVector) -> ModuleVector:
    """Apply x_root(xi) to b following the weight-diagram formulas.

    Works for any coefficient objects supporting +, *, unary -, is_zero().
    """
    pairs, cartan = rep.channels(tuple(root))
    out = b.copy()
    if xi.is_zero():
        return out
    for src, dst, sign in pairs:
        c = b.coords[src]
        if c.is_zero():
            continue
        t = xi * c
        out.coords[dst] = out.coords[dst] + (-t if sign < 0 else t)
    if cartan is not None:
        neg, pos, hvec, prow = cartan
        cneg = b.coords[neg]
        if not cneg.is_zero():
            t = xi * cneg
            # zero-weight block gains -xi*b_{-a}*h_a; e_a gains xi^2*b_{-a}
            for i, hv in enumerate(hvec):
                if hv:
                    inc = t if hv == 1 else t * _scalar_like(xi, hv)
                    out.hcoords[i] = out.hcoords[i] - inc
            out.coords[pos] = out.coords[pos] + xi * t
        # e_a gains -xi * <a, h-part>
        acc = None
        for i, pv in enumerate(prow):
            if pv == 0:
                continue
            hc = b.hcoords[i]
            if hc.is_zero():
                continue
            term = hc if pv == 1 else hc * _scalar_like(xi, pv)
            acc = term if acc is None else acc + term
        if acc is not None:
            out.coords[pos] = out.coords[pos] - xi * acc
    return out


def _scalar_like(sample, n: int):
    """Integer scalar n in the coefficient arithmetic of `sample`."""
    return sample.int_scalar(n) if hasattr(sample, "int_scalar") else \
        type(sample).const(sample.ring, sample.names, n)


# -- E6 cubic invariant ------------------------------------------------------------


def e6_zero_triples(rep: RepModule):
    """Weight triples (as sorted index multisets) summing to zero in the lattice."""
    if rep.system.label != "E6" or rep.w != 1:
        raise ValueError("cubic invariant is specific to (E6, w1)")
    n = rep.nweights()
    fund3 = tuple(3 * f for f in _fundamental_weight_coords(rep.system, 1))
    if any(f.denominator != 1 for f in fund3):
        raise RuntimeError("3*w1 should be integral in the root lattice")
    target = tuple(int(f) for f in fund3)
    triples = []
    for i in range(n):
        di = rep.weights[i]
        for j in range(i, n):
            dj = rep.weights[j]
            need = tuple(t - a - b for t, a, b in zip(target, di, dj))
            k = rep.index.get(need)
            if k is not None and k >= j:
                triples.append((i, j, k))
    return triples


def e6_cubic_coefficients(rep: RepModule):
    """Coefficients (over Q) of the invariant cubic, one per zero triple.

    Determined by requiring invariance under x_{alpha_i}(1) and
    x_{-alpha_i}(1) for all simple roots; normalized so the lex-first triple
    has coefficient 1.
    """
    triples = e6_zero_triples(rep)
    tindex = {t: k for k, t in enumerate(triples)}
    nunk = len(triples)
    rows = []

    def add_constraint_rows(root):
        # F(x_root(1) v) - F(v) = 0: expand symbolically over monomials in v
        pairs, _ = rep.channels(root)
        shift = {src: (dst, sign) for src, dst, sign in pairs}
        # collect per-monomial linear constraints: each cubic monomial of the
        # substituted variables expands into at most 8 terms
        from collections import defaultdict
        cons = defaultdict(dict)  # monomial -> {triple coeff index: integer}
        for t_i, (a, b, c) in enumerate(triples):
            base = [(a, 1), (b, 1), (c, 1)]
            # v'_mu = v_mu + sign * v_{mu-root}: contribution of triple t_i
            opts = []
            for idx in (a, b, c):
                o = [(idx, 1)]
                for src, (dst, sign) in shift.items():
                    if dst == idx:
                        o.append((src, sign))
                opts.append(o)
            from itertools import product as iproduct
            for choice in iproduct(*opts):
                mono = tuple(sorted(x for x, _ in choice))
                coef = 1
                for _, s in choice:
                    coef *= s
                if mono == tuple(sorted((a, b, c))):
                    coef -= 1  # subtract F(v) itself
                if coef:
                    cons[mono][t_i] = cons[mono].get(t_i, 0) + coef
        for mono, row in cons.items():
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)

    for i in range(rep.system.rank):
        root = tuple(1 if j == i else 0 for j in range(rep.system.rank))
        add_constraint_rows(root)
        add_constraint_rows(tuple(-x for x in root))

    # solve the sparse homogeneous system over Q; expect a 1-dim kernel
    mat = [[Fraction(r.get(k, 0)) for k in range(nunk)] for r in rows]
    pivots = {}
    rr = 0
    for c in range(nunk):
        piv = next((i for i in range(rr, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rr], mat[piv] = mat[piv], mat[rr]
        pv = mat[rr][c]
        mat[rr] = [x / pv for x in mat[rr]]
        for i in range(len(mat)):
            if i != rr and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rr])]
        pivots[c] = rr
        rr += 1
    free = [c for c in range(nunk) if c not in pivots]
    if len(free) != 1:
        raise RuntimeError(f"cubic solve: kernel dimension {len(free)}, expected 1")
    sol = [Fraction(0)] * nunk
    f0 = free[0]
    sol[f0] = Fraction(1)
    for c, r in pivots.items():
        sol[c] = -mat[r][f0]
    # normalize designated coefficient (lex-first triple) to 1
    norm = next(s for s in sol if s != 0)
    sol = [s / norm for s in sol]
    return triples, sol


class E6Cubic:
    """The invariant cubic and its 27 partial derivatives as test oracles."""

    def __init__(self, rep: RepModule):
        self.rep = rep
        self.triples, self.coeffs = e6_cubic_coefficients(rep)

    def partials(self, b: ModuleVector, zero):
        """All 27 partial derivative values at b (coefficient arithmetic)."""
        n = self.rep.nweights()
        outs = [zero] * n
        for (i, j, k), c in zip(self.triples, self.coeffs):
            if c == 0:
                continue
            trip = (i, j, k)
            for pos in sorted(set(trip)):
                rest = list(trip)
                rest.remove(pos)
                mult = trip.count(pos)
                cc = c * mult
                if cc.denominator != 1:
                    raise RuntimeError("cubic coefficients not integral")
                term = _int_scale(b.coords[rest[0]] * b.coords[rest[1]], int(cc))
                outs[pos] = outs[pos] + term
        return outs

    def value(self, b: ModuleVector):
        acc = None
        for (i, j, k), c in zip(self.triples, self.coeffs):
            if c == 0:
                continue
            term = b.coords[i] * b.coords[j] * b.coords[k]
            term = _int_scale(term, int(c))
            acc = term if acc is None else acc + term
        return acc

    def vanishes(self, b: ModuleVector, zero) -> bool:
        return all(p.is_zero() for p in self.partials(b, zero))


def _int_scale(x, n: int):
    if n == 1:
        return x
    if n == -1:
        return -x
    acc = x
    out = None
    k = abs(n)
    while k:
        if k & 1:
            out = acc if out is None else out + acc
        k >>= 1
        if k:
            acc = acc + acc
    return out if n > 0 else -out


_REP_CACHE: dict = {}


def build_rep(label: str, w: int) -> RepModule:
    key = (label, w)
    if key not in _REP_CACHE:
        _REP_CACHE[key] = RepModule(label, w)
    return _REP_CACHE[key]
