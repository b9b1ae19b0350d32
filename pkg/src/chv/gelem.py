"""Words of elementary root elements, ledgered action, mu-matrices,
Weyl/torus expansions, unipotent extraction and Chevalley-Matsumoto
decomposition."""

from __future__ import annotations

from .rings import Poly
from .weightrep import ModuleVector, RepModule, act_elementary


class ElemFactor:
    __slots__ = ("root", "param", "stage")

    def __init__(self, root, param, stage=""):
        self.root = tuple(root)
        self.param = param
        self.stage = stage

    def inverse(self):
        return ElemFactor(self.root, -self.param, self.stage)

    def __repr__(self):
        return f"x_{self.root}({self.param})"


class Word:
    """Ordered product of elementary factors; the rightmost factor acts first."""

    def __init__(self, factors=None):
        self.factors = [f for f in (factors or []) if not f.param.is_zero()]

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __add__(self, other):
        return Word(self.factors + other.factors)

    def inverse(self):
        return Word([f.inverse() for f in reversed(self.factors)])

    def tagged(self, stage):
        return Word([ElemFactor(f.root, f.param, stage) for f in self.factors])

    def apply(self, b: ModuleVector) -> ModuleVector:
        out = b
        for f in reversed(self.factors):
            out = act_elementary(b.rep, f.root, f.param, out)
        return out

    def map_params(self, fn) -> "Word":
        return Word([ElemFactor(f.root, fn(f.param), f.stage) for f in self.factors])

    def stage_counts(self):
        out = {}
        for f in self.factors:
            out[f.stage] = out.get(f.stage, 0) + 1
        return out


class BudgetExceeded(Exception):
    pass


class Ledger:
    """Per-stage factor counts checked against declared budgets."""

    def __init__(self, strict=False):
        self.counts: dict = {}
        self.budgets: dict = {}
        self.flags: list = []
        self.strict = strict

    def declare(self, stage: str, budget: int):
        self.budgets[stage] = budget
        self.counts.setdefault(stage, 0)

    def charge(self, stage: str, n: int):
        self.counts[stage] = self.counts.get(stage, 0) + n
        b = self.budgets.get(stage)
        if b is not None and self.counts[stage] > b:
            self.flags.append(f"stage {stage}: count {self.counts[stage]} exceeds budget {b}")
            if self.strict:
                raise BudgetExceeded(self.flags[-1])

    def total(self):
        return sum(self.counts.values())

    def within_budgets(self):
        return not self.flags

    def rows(self):
        return [(s, self.counts[s], self.budgets.get(s)) for s in self.counts]


def apply_word(word: Word, b: ModuleVector) -> ModuleVector:
    return word.apply(b)


# -- block transvections -----------------------------------------------------------


def transvection(rep: RepModule, dst_idx: int, src_idx: int, c: Poly, stage="") -> ElemFactor:
    """Root element acting on the weight block as b[dst] += c*b[src]."""
    d_dst = rep.weights[dst_idx]
    d_src = rep.weights[src_idx]
    root = tuple(s - d for s, d in zip(d_src, d_dst))  # dst weight - src weight
    if root not in rep.system.root_index:
        raise ValueError("weight difference is not a root")
    sign = rep.action_sign(root, src_idx)
    return ElemFactor(root, c if sign > 0 else -c, stage)


def a_chain_block(rep: RepModule, top_idx: int, chain_roots):
    """Weight indices of the A-type vector block starting at top_idx.

    chain_roots: ambient roots alpha^A_1..alpha^A_{l-1} of the A_{l-1}
    subsystem; returns [w_1..w_l] with w_{i+1} = w_i - alpha^A_i.
    """
    out = [top_idx]
    for r in chain_roots:
        nxt = rep.weight_plus_root(out[-1], tuple(-x for x in r))
        if nxt is None:
            raise ValueError("chain leaves the weight set")
        out.append(nxt)
    return out


# -- mu matrices --------------------------------------------------------------------


def mu_operator(u, s, v):
    """The (l x l) block matrix mu(u,s,v) as a list of rows of ring elements.

    u is a row of length l-1, v a column of length l-1, s a ring element.
    """
    l = len(u) + 1
    if l < 3:
        raise ValueError("mu needs l >= 3")
    t = None
    for a, b in zip(u, v):
        t = a * b if t is None else t + a * b
    zero = s + (-s)
    one_like = None
    rows = []
    xi = [s * vk for vk in v] + [-t]
    eta = list(u) + [s]
    for i in range(l):
        row = []
        for j in range(l):
            e = xi[i] * eta[j]
            if i == j:
                e = e + _one_of(s)
            row.append(e)
        rows.append(row)
    return rows


def _one_of(sample):
    if isinstance(sample, Poly):
        return Poly.const(sample.ring, sample.names, 1)
    return sample.one_like()


def mu_apply(rows, coords):
    """Apply an explicit block matrix to a coordinate list."""
    l = len(rows)
    out = []
    for i in range(l):
        acc = None
        for j in range(l):
            term = rows[i][j] * coords[j]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def mu_expand(rep: RepModule, block, u, s, v, stage="mu", pad_to_exact=True):
    """Word of exactly 7l-3 elementary factors acting as mu(u,s,v) on `block`.

    block: ordered weight indices [w_1..w_l] of an A_{l-1} vector block.
    The schedule splits mu = (I + xi_G1.eta)(I + xi_k'.eta) and expands each
    rank-one factor through a spectator commutator; all parameters stay in
    the coefficient ring.
    """
    l = len(block)
    if l < 3:
        raise ValueError("mu needs l >= 3 (Vaserstein expansion)")
    if len(u) != l - 1 or len(v) != l - 1:
        raise ValueError("u, v must have length l-1")
    zero = s + (-s)
    one = _one_of(s)

    last = l - 1
    kp = l - 2                      # the split-off head index
    G1 = list(range(l - 2))         # remaining head indices
    m2 = 0                          # spectator for the k' part (in G1)

    def xi_single(k):
        out = [zero] * l
        out[k] = s * v[k]
        out[last] = out[last] - u[k] * v[k]
        return out

    xiG1 = [zero] * l
    for k in G1:
        xs = xi_single(k)
        xiG1 = [a + b for a, b in zip(xiG1, xs)]
    xikp = xi_single(kp)

    factors = []

    def sweep_col(col_idx, col_vals, scale=None, negate=False):
        """I + (vals)*e_col: add vals[i]*b[col] into b[i]."""
        for i in range(l):
            if i == col_idx:
                continue
            c = col_vals[i]
            if scale is not None:
                c = c * scale
            if negate:
                c = -c
            if c.is_zero():
                continue
            factors.append(transvection(rep, block[i], block[col_idx], c, stage))

    def sweep_row(row_idx, row_vals, negate=False):
        """I + e_row*(vals): add vals[j]*b[j] into b[row]."""
        for j in range(l):
            if j == row_idx:
                continue
            c = row_vals[j]
            if negate:
                c = -c
            if c.is_zero():
                continue
            factors.append(transvection(rep, block[row_idx], block[j], c, stage))

    eta = list(u) + [s]
    eta_on1 = list(eta)
    eta_on1[kp] = zero
    # G1 part: Atilde1, B1, A1^{-1}, B1^{-1}
    sweep_col(kp, xiG1, scale=(one + u[kp]))
    sweep_row(kp, eta_on1)
    sweep_col(kp, xiG1, negate=True)
    sweep_row(kp, eta_on1, negate=True)
    # k' part: off-part, A2, B2, A2^{-1}, B2^{-1}
    for j in G1:
        if u[j].is_zero():
            continue
        for i in (kp, last):
            c = xikp[i] * u[j]
            if not c.is_zero():
                factors.append(transvection(rep, block[i], block[j], c, stage))
    eta_on2 = [zero] * l
    eta_on2[kp] = u[kp]
    eta_on2[last] = s
    sweep_col(m2, xikp)
    sweep_row(m2, eta_on2)
    sweep_col(m2, xikp, negate=True)
    sweep_row(m2, eta_on2, negate=True)

    word = Word(factors)
    if not pad_to_exact:
        return word
    target = 7 * l - 3
    if len(word) > target:
        raise RuntimeError(f"mu schedule produced {len(word)} > {target} factors")
    return pad_word(rep, block, word, target, stage, one=one)


def pad_word(rep: RepModule, block, word: Word, target: int, stage="", one=None):
    """Pad with cancelling factors to an exact length without changing the action."""
    deficit = target - len(word)
    if deficit < 0:
        raise RuntimeError("word longer than the padding target")
    if deficit == 0:
        return word
    if one is None:
        one = _one_of(word.factors[0].param)
    factors = list(word.factors)
    pad_root = transvection(rep, block[0], block[1], one, stage).root
    if deficit % 2 == 1:
        if factors:
            # split the leading factor: x(c) = x(c-e) x(e)
            f = factors[0]
            for e in (one, one + one, -one):
                if not e.is_zero() and not (f.param - e).is_zero():
                    factors = [ElemFactor(f.root, f.param - e, f.stage),
                               ElemFactor(f.root, e, f.stage)] + factors[1:]
                    deficit -= 1
                    break
            else:
                raise RuntimeError("cannot split a factor for odd padding")
        else:
            two = one + one
            if two.is_zero():
                raise RuntimeError("cannot pad odd deficit in characteristic 2")
            factors = [ElemFactor(pad_root, one, stage),
                       ElemFactor(pad_root, one, stage),
                       ElemFactor(pad_root, -two, stage)]
            deficit -= 3
    while deficit > 0:
        factors = [ElemFactor(pad_root, one, stage),
                   ElemFactor(pad_root, -one, stage)] + factors
        deficit -= 2
    return Word(factors)


# -- Weyl and torus elements -----------------------------------------------------


def weyl_torus_expand(rep: RepModule, kind: str, root, eps, ring, names, stage=""):
    """w_root(eps): 3 factors acting as the (signed) reflection on the weight
    basis; h_root(eps) = w_root(eps) w_root(1)^{-1}: 6 factors, acting
    diagonally with eigenvalue eps^<lambda, root^vee>.  eps must be a unit.

    The cocycle basis fixed in `rootsys` has [e_a, e_-a] = -h_a, so the
    middle parameter is +eps^{-1} rather than the textbook -eps^{-1}.
    """
    R = ring
    if not R.is_unit(eps):
        raise ValueError("parameter is not a unit")
    pos = tuple(root)
    negr = tuple(-x for x in root)

    def w(e):
        einv = R.inv(e)
        return [ElemFactor(pos, Poly.const(R, names, e), stage),
                ElemFactor(negr, Poly.const(R, names, einv), stage),
                ElemFactor(pos, Poly.const(R, names, e), stage)]

    if kind == "w":
        return Word(w(eps))
    if kind == "h":
        inv1 = [f.inverse() for f in reversed(w(R.one()))]
        return Word(w(eps) + inv1)
    raise ValueError("kind must be 'w' or 'h'")


# -- unipotent extraction ----------------------------------------------------------


def extract_unipotent(rep: RepModule, pivot: int, b: ModuleVector, zero, one, stage=""):
    """u in U_pivot^- with u*e1 = b, for b with b_1 = 1 in the constructive orbit.

    Reads the layer-1 coordinates directly (the radical is abelian for the
    E6/E7 pivots used here) and verifies the full replay.
    """
    if b.coords[0] != one:
        raise ValueError("top coordinate must be exactly 1")
    sigma = [r for r in rep.system.roots if r[pivot - 1] > 0]
    factors = []
    for gamma in sorted(sigma):
        lam = rep.weight_plus_root(0, tuple(-x for x in gamma))
        if lam is None:
            continue
        coord = b.coords[lam]
        if coord.is_zero():
            continue
        sign = rep.action_sign(tuple(-x for x in gamma), 0)
        factors.append(ElemFactor(tuple(-x for x in gamma),
                                  coord if sign > 0 else -coord, stage))
    word = Word(factors)
    replay = word.apply(ModuleVector.basis(rep, 0, zero, one))
    if replay != b:
        raise ValueError("input not in highest-weight orbit")
    return word


def word_matrix_rows(rep: RepModule, word: Word, zero, one, rows=None):
    """Selected rows of the acting matrix: result[r][c] = (word*e_c)[r]."""
    n = rep.nweights()
    rows = range(n) if rows is None else rows
    cols = []
    for c in range(n):
        vc = word.apply(ModuleVector.basis(rep, c, zero, one))
        cols.append(vc)
    return {r: [cols[c].coords[r] for c in range(n)] for r in rows}


def extract_upper_from_row(rep: RepModule, pivot: int, row, zero, one, stage=""):
    """u+ in U_pivot from the first row of a matrix fixing e1 block-structure."""
    sigma = [r for r in rep.system.roots if r[pivot - 1] > 0]
    factors = []
    for gamma in sorted(sigma):
        lam = rep.weight_plus_root(0, tuple(-x for x in gamma))
        if lam is None:
            continue
        c = row[lam]
        if c.is_zero():
            continue
        sign = rep.action_sign(gamma, lam)
        factors.append(ElemFactor(gamma, c if sign > 0 else -c, stage))
    return Word(factors)


class DecompositionError(Exception):
    pass


def chevalley_matsumoto(rep: RepModule, pivot: int, g: Word, zero, one, cells=None):
    """Decompose g with (g e1)_1 = 1 as u^- . u^+ . h with h cell-diagonal.

    Returns (u_minus, u_plus, h_word, h_matrix) where h_matrix is the full
    acting matrix of h, verified block-diagonal for the pivot branching.
    """
    b = g.apply(ModuleVector.basis(rep, 0, zero, one))
    if b.coords[0] != one:
        raise DecompositionError("(g e1)_1 != 1")
    um = extract_unipotent(rep, pivot, b, zero, one, stage="chevmat-")
    g2 = um.inverse() + g
    row0 = word_matrix_rows(rep, g2, zero, one, rows=[0])[0]
    up0 = extract_upper_from_row(rep, pivot, row0, zero, one, stage="chevmat+")
    # verify the full first row agrees (deeper layers are forced)
    row_up = word_matrix_rows(rep, up0, zero, one, rows=[0])[0]
    if row_up != row0:
        raise DecompositionError("decomposition failed: first row mismatch")
    h_word = g2 + up0.inverse()
    hmat = word_matrix_rows(rep, h_word, zero, one)
    # cell-diagonality check
    if cells is None:
        grad = rep.grading(pivot)
        cells = [sorted(layer) for layer in grad.layers]
    cell_of = {}
    for ci, cell in enumerate(cells):
        for k in cell:
            cell_of[k] = ci
    for r in range(rep.nweights()):
        for c in range(rep.nweights()):
            if cell_of[r] != cell_of[c] and not hmat[r][c].is_zero():
                raise DecompositionError("decomposition failed: off-block entry")
    # conjugate up0 back: u+ = h up0 h^{-1}
    conj = h_word + up0 + h_word.inverse()
    rowc = word_matrix_rows(rep, conj, zero, one, rows=[0])[0]
    up = extract_upper_from_row(rep, pivot, rowc, zero, one, stage="chevmat+")
    return um, up, h_word, hmat
