"""Root systems in the simple-root coordinate basis.

Simple-root numbering follows Bourbaki.  All systems used here are simply
laced; structure-constant signs come from a fixed bilinear cocycle on the
root lattice, so every N(alpha,beta) is +-1 and globally consistent.
"""

from __future__ import annotations

from fractions import Fraction


def cartan_matrix(label: str):
    """Cartan matrix C[i][j] = <alpha_j, alpha_i^vee> for the given type."""
    kind, rank = label[0], int(label[1:])
    C = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        C[i][i] = 2

    def bond(i, j):
        C[i][j] = C[j][i] = -1

    if kind == "A":
        for i in range(rank - 1):
            bond(i, i + 1)
    elif kind == "D":
        if rank < 3:
            raise ValueError("D_l needs l >= 3")
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 3, rank - 1)
    elif kind == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E_l needs l in {6,7,8}")
        # Bourbaki: chain 1-3-4-5-...-l with 2 attached to 4.
        bond(0, 2)
        bond(1, 3)
        for i in range(2, rank - 1):
            bond(i, i + 1)
    else:
        raise ValueError(f"unsupported type {label!r}")
    return C


class RootSystem:
    """All roots of a simply-laced system, as integer vectors over the simples."""

    def __init__(self, label: str):
        self.label = label
        self.rank = int(label[1:])
        self.cartan = cartan_matrix(label)
        self._build_roots()
        self._build_eps()

    # -- construction -------------------------------------------------------

    def _build_roots(self):
        rank = self.rank
        simples = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
        seen = set(simples) | {tuple(-v for v in s) for s in simples}
        frontier = list(seen)
        while frontier:
            new = []
            for beta in frontier:
                for i in range(rank):
                    p = sum(self.cartan[i][j] * beta[j] for j in range(rank))
                    refl = list(beta)
                    refl[i] -= p
                    refl = tuple(refl)
                    if refl not in seen:
                        seen.add(refl)
                        new.append(refl)
            frontier = new
        self.roots = sorted(seen, key=lambda r: (sum(r), r))
        self.root_index = {r: k for k, r in enumerate(self.roots)}
        self.positive = [r for r in self.roots if sum(r) > 0]
        self.simple = simples

    def _build_eps(self):
        rank = self.rank
        eps = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            eps[i][i] = 1
            for j in range(rank):
                if i < j and self.cartan[i][j] == -1:
                    eps[i][j] = 1
        self._eps = eps

    # -- basic queries -------------------------------------------------------

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_index

    def height(self, root) -> int:
        return sum(root)

    def highest_root(self):
        return self.roots[-1]

    def pairing(self, v, root) -> int:
        """<v, root^vee> for v in the root lattice (or rational vectors)."""
        acc = 0
        for i in range(self.rank):
            row = sum(self.cartan[i][j] * root[j] for j in range(self.rank))
            acc += v[i] * row
        return acc

    def reflect(self, v, root):
        p = self.pairing(v, root)
        return tuple(a - p * b for a, b in zip(v, root))

    def eps_form(self, a, b) -> int:
        """Bilinear Z/2 cocycle on the root lattice."""
        acc = 0
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj and self._eps[i][j]:
                    acc += ai * bj
        return acc % 2

    def sign(self, a, b) -> int:
        """N(a,b) = +-1 for root pairs with a+b a root."""
        return -1 if self.eps_form(a, b) else 1

    def add_roots(self, a, b):
        s = tuple(x + y for x, y in zip(a, b))
        return s if s in self.root_index else None

    def neg(self, a):
        return tuple(-x for x in a)

    # -- parabolic data ------------------------------------------------------

    def parabolic_data(self, pivot: int):
        """Split roots by coefficient at simple root `pivot` (1-based).

        Returns (sigma, delta, u_gens, u_neg_gens): sigma = positive pivot
        coefficient, delta = zero coefficient.
        """
        i = pivot - 1
        sigma = [r for r in self.roots if r[i] > 0]
        delta = [r for r in self.roots if r[i] == 0]
        return sigma, delta, list(sigma), [self.neg(r) for r in sigma]

    def subsystem_roots(self, simple_subset):
        """All roots supported on the given 1-based simple-root subset."""
        idx = {s - 1 for s in simple_subset}
        return [r for r in self.roots
                if all(c == 0 for k, c in enumerate(r) if k not in idx)
                and any(c != 0 for c in r)]

    def max_root(self, simple_subset):
        """Height-maximal root of the subsystem generated by the subset."""
        idx = sorted(s - 1 for s in simple_subset)
        # irreducibility: the induced subdiagram must be connected
        if idx:
            comp = {idx[0]}
            frontier = [idx[0]]
            while frontier:
                a = frontier.pop()
                for b in idx:
                    if b not in comp and self.cartan[a][b] == -1:
                        comp.add(b)
                        frontier.append(b)
            if comp != set(idx):
                raise ValueError("simple-root subset generates a reducible subsystem")
        sub = self.subsystem_roots(simple_subset)
        if not sub:
            raise ValueError("empty subsystem")
        return max(sub, key=lambda r: (sum(r), r))


_SYSTEM_CACHE: dict = {}


def build_system(label: str) -> RootSystem:
    if label not in _SYSTEM_CACHE:
        _SYSTEM_CACHE[label] = RootSystem(label)
    return _SYSTEM_CACHE[label]


class SubsystemEmbedding:
    """Map from a smaller root system into a bigger one, linear on coordinates."""

    def __init__(self, small: RootSystem, big: RootSystem, simple_images):
        self.small = small
        self.big = big
        self.simple_images = [tuple(v) for v in simple_images]
        for a in range(small.rank):
            for b in range(small.rank):
                pa = small.cartan[a][b]
                pb = big.pairing(self.simple_images[b], self.simple_images[a])
                if pa != pb:
                    raise ValueError("embedding does not preserve Cartan pairings")

    def map_root(self, r):
        out = [0] * self.big.rank
        for c, img in zip(r, self.simple_images):
            for k in range(self.big.rank):
                out[k] += c * img[k]
        t = tuple(out)
        if t not in self.big.root_index:
            raise ValueError("image is not a root")
        return t


def weyl_transporter(rep, idx_from: int, idx_to: int):
    """Shortest word of simple reflections moving one weight index to another.

    Returns a list of 1-based simple-root indices; applying the reflections
    right-to-left maps weight idx_from to idx_to.
    """
    if idx_from == idx_to:
        return []
    sys = rep.system
    from collections import deque
    prev = {idx_from: None}
    dq = deque([idx_from])
    while dq:
        cur = dq.popleft()
        for i in range(sys.rank):
            nxt = rep.reflect_weight(cur, i)
            if nxt not in prev:
                prev[nxt] = (cur, i)
                if nxt == idx_to:
                    word = []
                    node = nxt
                    while prev[node] is not None:
                        node, i = prev[node]
                        word.append(i + 1)
                    return word
                dq.append(nxt)
    raise ValueError("weights are not in the same Weyl orbit")


def _euclid_d8_dictionary(e8: RootSystem):
    """Coordinates of the orthonormal D8 frame e_1..e_8 inside E8 (rational).

    The D8 subsystem is generated by alpha_2,...,alpha_8 and the highest
    root; the frame satisfies delta = e1+e2, alpha_8 = e2-e3, ...,
    alpha_2 = e7-e8, alpha_3 = e7+e8.
    """
    delta = e8.highest_root()
    a = {i: tuple(1 if j == i - 1 else 0 for j in range(8)) for i in range(1, 9)}
    half = Fraction(1, 2)

    def vec(*coeffs):
        out = [Fraction(0)] * 8
        for c, v in coeffs:
            for k in range(8):
                out[k] += Fraction(c) * v[k]
        return tuple(out)

    e7v = vec((half, a[2]), (half, a[3]))
    e8v = vec((-half, a[2]), (half, a[3]))
    e6v = vec((1, a[4]), (1, e7v))
    e5v = vec((1, a[5]), (1, e6v))
    e4v = vec((1, a[6]), (1, e5v))
    e3v = vec((1, a[7]), (1, e4v))
    e2v = vec((1, a[8]), (1, e3v))
    e1v = vec((1, delta), (-1, e2v))
    return [e1v, e2v, e3v, e4v, e5v, e6v, e7v, e8v]


def delta_A8_root(e8: RootSystem):
    """Maximal root of the A8 subsystem with simple set a1,a3..a8,-delta."""
    delta = e8.highest_root()
    gens = [tuple(1 if j == 0 else 0 for j in range(8))]
    gens += [tuple(1 if j == i else 0 for j in range(8)) for i in range(2, 8)]
    gens.append(tuple(-x for x in delta))
    return tuple(sum(g[k] for g in gens) for k in range(8))


def weyl_E8_element():
    """Reflection word w in W(E8) with w(a2)=a8, w(a4)=a7, w(a5)=a6 and
    w(-delta_A8) = delta, realised as w'.s_{alpha1} with w' a signed
    permutation of the D8 frame.

    Returns a list of roots; the composite applies them right-to-left.
    """
    from itertools import permutations, product

    e8 = build_system("E8")
    frame = _euclid_d8_dictionary(e8)

    def form(u, v):
        acc = Fraction(0)
        for i in range(8):
            row = sum(e8.cartan[i][j] * v[j] for j in range(8))
            acc += Fraction(u[i]) * row
        return acc

    def frame_coords(v):
        vv = tuple(Fraction(x) for x in v)
        return tuple(form(vv, frame[i]) for i in range(8))

    alpha1 = tuple(1 if j == 0 else 0 for j in range(8))
    neg_dA8 = tuple(-x for x in delta_A8_root(e8))
    v = frame_coords(e8.reflect(neg_dA8, alpha1))
    target = frame_coords(e8.highest_root())

    # tail images force w'(a2)=a8, w'(a4)=a7, w'(a5)=a6 by telescoping
    tail = {8: (-1, 1), 7: (-1, 2), 6: (-1, 3), 5: (-1, 4)}
    solution = None
    for perm in permutations([0, 5, 6, 7]):
        for signs in product([1, -1], repeat=4):
            img = dict(tail)
            for k, (p, s) in enumerate(zip(perm, signs)):
                img[k + 1] = (s, p)
            if sum(1 for s, _ in img.values() if s == -1) % 2:
                continue
            out = [Fraction(0)] * 8
            for i in range(8):
                s, p = img[i + 1]
                out[p] += v[i] * s
            if tuple(out) == target:
                solution = img
                break
        if solution:
            break
    if solution is None:
        raise RuntimeError("no signed permutation satisfies the Weyl constraints")

    def to_int_root(vec):
        out = []
        for c in vec:
            if c.denominator != 1:
                return None
            out.append(int(c))
        t = tuple(out)
        return t if t in e8.root_index else None

    sgn = {i: solution[i][0] for i in solution}
    tgt = {i: tuple(Fraction(sgn[i]) * c for c in frame[solution[i][1]]) for i in solution}
    cur = {i: tuple(Fraction(c) for c in frame[i - 1]) for i in range(1, 9)}
    word = []

    def refl_vec(vv, root):
        p = e8.pairing(vv, root)
        return tuple(a - p * b for a, b in zip(vv, root))

    def apply_refl(root):
        for k in cur:
            cur[k] = refl_vec(cur[k], root)
        word.append(root)

    for i in range(1, 9):
        if cur[i] == tgt[i]:
            continue
        r = to_int_root(tuple(a - b for a, b in zip(cur[i], tgt[i])))
        if r is not None:
            apply_refl(r)
            continue
        # cur[i] = -tgt[i]: route through an auxiliary unfixed frame vector
        aux = next(j for j in range(1, 9) if j != i and cur[j] != tgt[j])
        r1 = to_int_root(tuple(a - b for a, b in zip(cur[i], cur[aux])))
        apply_refl(r1)
        r2 = to_int_root(tuple(a + b for a, b in zip(cur[i], cur[aux])))
        apply_refl(r2)
    # `word` holds reflections in application order; reflection words are
    # consumed right-to-left, and s_{alpha1} acts first of all.
    return list(reversed(word)) + [alpha1]


def apply_reflection_word(sys: RootSystem, word, v):
    """Apply reflections right-to-left to a vector in root coordinates."""
    out = tuple(v)
    for root in reversed(word):
        out = sys.reflect(out, root)
    return out
