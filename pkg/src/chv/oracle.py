"""Effective stand-ins for the non-constructive commutative algebra:
monic witnesses, flexible-stable-rank cofactors, semilocal moves, and the
dimension bookkeeping driving variable elimination.

Everything here is algorithmic only for the supported coefficient rings
(prime fields and Q, with a thin experimental tier for Z); unsupported
situations raise rather than guess.
"""

from __future__ import annotations

from .rings import CoeffRing, Poly, poly_gcd_univar, poly_ext_gcd_univar


class OracleError(Exception):
    pass


class IdealHandle:
    """A finitely generated ideal with a ring-context tag."""

    def __init__(self, generators, context="A"):
        gens = []
        seen = set()
        for g in generators:
            if g is None or g.is_zero():
                continue
            key = (g.names, frozenset(g.terms.items()))
            if key not in seen:
                seen.add(key)
                gens.append(g)
        self.generators = gens
        self.context = context

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def some_nonzero(self):
        return self.generators[0] if self.generators else None


class MonicWitness:
    """g + sum f_i b_i lex-monic, with g an explicit modulus combination."""

    def __init__(self, row, cofactors, modulus_gens, modulus_cofactors, result):
        self.row = row
        self.cofactors = cofactors
        self.modulus_gens = modulus_gens
        self.modulus_cofactors = modulus_cofactors
        self.result = result
        if not result.is_lex_monic():
            raise OracleError("witness result is not lex-monic")
        check = None
        for f, b in list(zip(cofactors, row)) + list(zip(modulus_cofactors, modulus_gens)):
            t = f * b
            check = t if check is None else check + t
        if check != result:
            raise OracleError("witness identity does not hold")

    def scaled(self, mono: Poly) -> "MonicWitness":
        return MonicWitness(self.row, [f * mono for f in self.cofactors],
                            self.modulus_gens,
                            [f * mono for f in self.modulus_cofactors],
                            self.result * mono)


def monic_witness(row, modulus: IdealHandle):
    """Witness that <row> + modulus contains a lex-monic polynomial, or None.

    Over a field every nonzero element rescales; over Z only unit-leading
    entries are used (experimental tier).
    """
    row = list(row)
    if row:
        ring = row[0].ring
        names = row[0].names
    elif modulus.generators:
        ring = modulus.generators[0].ring
        names = modulus.generators[0].names
    else:
        return None
    zero = Poly.zero(ring, names)

    def attempt(p):
        if p.is_zero():
            return None
        _, c = p.lex_leading()
        if ring.is_field:
            return ring.inv(c)
        return ring.inv(c) if ring.is_unit(c) else None

    for k, g in enumerate(modulus.generators):
        u = attempt(g)
        if u is not None:
            cof = [zero] * len(row)
            mcof = [zero] * len(modulus.generators)
            mcof[k] = Poly.const(ring, names, u)
            return MonicWitness(row, cof, modulus.generators, mcof, g.scale(u))
    for k, b in enumerate(row):
        u = attempt(b)
        if u is not None:
            cof = [zero] * len(row)
            cof[k] = Poly.const(ring, names, u)
            mcof = [zero] * len(modulus.generators)
            return MonicWitness(row, cof, modulus.generators, mcof, b.scale(u))
    if not ring.is_field and any(not b.is_zero() for b in row):
        raise OracleError("no effective monic witness over this coefficient ring")
    return None


def dominating_witness(w: MonicWitness, extra: Poly) -> MonicWitness:
    """Rescale by a power of x1 so that extra + result stays lex-monic."""
    ring, names = w.result.ring, w.result.names
    if extra.is_zero():
        return w
    M = extra.degree_in(names[0]) + 1
    e = [0] * len(names)
    e[0] = M
    mono = Poly(ring, names, {tuple(e): ring.one()})
    out = w.scaled(mono)
    if not (extra + out.result).is_lex_monic():
        raise OracleError("domination failed")
    return out


def afsr_realize(row, modulus: IdealHandle, s: Poly, s_power: int = 1):
    """Cofactors c_1..c_{d-1} in (s^power) realizing the flexible-rank shrink.

    Field-coefficient degenerate form: the localization at lex-monic
    denominators is a field (or the zero ring when the modulus is nonzero),
    so the contract reduces to keeping the shortened row nonzero.
    """
    row = list(row)
    d = len(row)
    ring, names = row[0].ring, row[0].names
    zero = Poly.zero(ring, names)
    if not ring.is_field:
        if modulus.generators or all(b.is_zero() for b in row):
            return [zero] * (d - 1)
        raise OracleError("no effective AFSR oracle over this coefficient ring")
    if not modulus.is_zero_ideal():
        return [zero] * (d - 1)
    if any(not b.is_zero() for b in row[:-1]):
        return [zero] * (d - 1)
    if row[-1].is_zero():
        return [zero] * (d - 1)
    sk = s ** s_power
    if sk.is_zero():
        raise OracleError("AFSR denominator power vanishes")
    x1 = Poly.var(ring, names, names[0])
    one = Poly.const(ring, names, 1)
    for mult in (one, one + one, one + x1, x1):
        c1 = sk * mult
        if not c1.is_zero() and not (row[0] + c1 * row[-1]).is_zero():
            out = [zero] * (d - 1)
            out[0] = c1
            return out
    raise OracleError("AFSR realization failed to avoid cancellation")


# -- residue-field towers and CRT ----------------------------------------------------


class ResidueField:
    """Quotient of a polynomial frame by a chain of monic moduli.

    moduli: list of (var, poly) pairs, each poly monic in its variable with
    coefficients already reduced by the earlier moduli; the quotient is a
    field when each modulus is irreducible over the tower below it.
    """

    def __init__(self, ring: CoeffRing, names, moduli):
        self.ring = ring
        self.names = tuple(names)
        self.moduli = list(moduli)

    def reduce(self, p: Poly) -> Poly:
        out = p
        # outermost modulus first; inner moduli are free of the outer variables
        for var, q in reversed(self.moduli):
            _, out = out.divrem(q, var)
        return out

    def is_zero(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def inv(self, p: Poly) -> Poly:
        p = self.reduce(p)
        if p.is_zero():
            raise ZeroDivisionError("not invertible in residue field")
        return self._inv_level(p, len(self.moduli) - 1)

    def _inv_level(self, p: Poly, level: int) -> Poly:
        ring, names = self.ring, self.names
        if level < 0:
            if not p.is_const():
                raise OracleError("residue tower reduction left non-constant")
            return Poly.const(ring, names, ring.inv(p.const_value()))
        var, q = self.moduli[level]
        # extended Euclid of (q, p) in `var`, inverting leads one level down
        one = Poly.const(ring, names, 1)
        zero = Poly.zero(ring, names)
        r0, r1 = q, p
        t0, t1 = zero, one
        while not r1.is_zero() and r1.degree_in(var) > 0:
            d1 = r1.degree_in(var)
            lc = r1.coeffs_in(var)[d1]
            lcinv = self._inv_level(self._reduce_below(lc, level - 1), level - 1)
            r1m = self._reduce_below(r1 * lcinv, level - 1)
            t1m = self._reduce_below(t1 * lcinv, level - 1)
            qq, rr = r0.divrem(r1m, var)
            r0, r1 = r1m, self._reduce_below(rr, level - 1)
            t0, t1 = t1m, self._reduce_below(t0 - qq * t1m, level - 1)
        if r1.is_zero():
            raise ZeroDivisionError("not invertible (shares a factor with modulus)")
        cinv = self._inv_level(self._reduce_below(r1, level - 1), level - 1)
        return self.reduce(t1 * cinv)

    def _reduce_below(self, p: Poly, level: int) -> Poly:
        out = p
        for var, q in self.moduli[:level + 1]:
            _, out = out.divrem(q, var)
        return out

    def descriptor(self):
        return [(var, str(q)) for var, q in self.moduli]


class SemilocalContext:
    """A finite product of residue fields of the same polynomial frame."""

    def __init__(self, fields):
        if not fields:
            raise ValueError("need at least one residue field")
        self.fields = list(fields)
        f0 = fields[0]
        self.ring, self.names = f0.ring, f0.names

    def reduce_all(self, p: Poly):
        return [f.reduce(p) for f in self.fields]

    def crt(self, residues) -> Poly:
        """Polynomial reducing to the prescribed residue in every factor."""
        assert len(residues) == len(self.fields)
        acc = residues[0]
        for k in range(1, len(self.fields)):
            acc = self._combine(acc, residues[k], k)
        return acc

    def _combine(self, a: Poly, r: Poly, k: int) -> Poly:
        """Element congruent to a mod fields[<k], to r mod fields[k]."""
        target = self.fields[k]
        u = Poly.const(self.ring, self.names, 1)
        for j in range(k):
            s = self._separator(j, k)
            u = u * s
        # u = 1 mod fields[k], 0 mod each fields[<k]
        return a + (r - a) * u

    def _separator(self, j: int, k: int) -> Poly:
        """Element in the maximal ideal of factor j, congruent to 1 in factor k."""
        target = self.fields[k]
        for var, q in self.fields[j].moduli:
            red = target.reduce(q)
            if not red.is_zero():
                return q * target.inv(red)
        raise OracleError("residue fields are not distinct")


# -- univariate factorization over F_p ------------------------------------------------


def _poly_pow_mod(base: Poly, e: int, mod: Poly, var: str) -> Poly:
    ring, names = base.ring, base.names
    result = Poly.const(ring, names, 1)
    b = base.divrem(mod, var)[1]
    while e:
        if e & 1:
            result = (result * b).divrem(mod, var)[1]
        e >>= 1
        if e:
            b = (b * b).divrem(mod, var)[1]
    return result


def _derivative(p: Poly, var: str) -> Poly:
    i = p.names.index(var)
    out = Poly.zero(p.ring, p.names)
    for e, c in p.terms.items():
        if e[i] == 0:
            continue
        e2 = list(e)
        e2[i] -= 1
        out = out + Poly(p.ring, p.names, {tuple(e2): p.ring.mul(c, e[i])})
    return out


def factor_univariate_fp(f: Poly, var: str, seed: int = 1):
    """Irreducible factorization over F_p: list of (monic factor, multiplicity)."""
    ring = f.ring
    if ring.kind != "fp":
        raise OracleError("factorization implemented over prime fields only")
    p = ring.modulus
    names = f.names
    import random
    rnd = random.Random(seed)
    out = {}

    def add(q, m):
        key = frozenset(q.terms.items())
        if key in out:
            out[key] = (q, out[key][1] + m)
        else:
            out[key] = (q, m)

    def monicize(g):
        lc = g.coeffs_in(var)[g.degree_in(var)]
        return g.scale(ring.inv(lc.const_value()))

    def run(g, mult):
        g = monicize(g)
        if g.degree_in(var) == 0:
            return
        d = _derivative(g, var)
        if d.is_zero():
            # g = h(x^p) = (frobenius root of h)(x)^p over F_p
            i = names.index(var)
            h = Poly.zero(ring, names)
            for e, c in g.terms.items():
                assert e[i] % p == 0
                e2 = list(e)
                e2[i] //= p
                h = h + Poly(ring, names, {tuple(e2): c})
            run(h, mult * p)
            return
        w = poly_gcd_univar(g, d, var)
        sf = g.divrem(w, var)[0] if w.degree_in(var) > 0 else g
        residual = g
        for q in _factor_squarefree(sf, var, p, rnd):
            m = 0
            while True:
                quo, rem = residual.divrem(q, var)
                if rem.is_zero():
                    m += 1
                    residual = quo
                else:
                    break
            add(q, m * mult)
        if residual.degree_in(var) > 0:
            # leftover p-th-power part
            run(residual, mult)

    run(f, 1)
    return [v for v in out.values()]


def _factor_squarefree(f: Poly, var: str, p: int, rnd):
    """Cantor-Zassenhaus on a squarefree monic univariate polynomial."""
    ring, names = f.ring, f.names
    if f.degree_in(var) <= 0:
        return []
    if f.degree_in(var) == 1:
        return [f]
    x = Poly.var(ring, names, var)
    # distinct degree
    pieces = []
    rest = f
    d = 1
    h = x
    while rest.degree_in(var) >= 2 * d:
        h = _poly_pow_mod(h, p, rest, var)
        g = poly_gcd_univar(h - x, rest, var)
        if g.degree_in(var) > 0:
            pieces.append((g, d))
            rest = rest.divrem(g, var)[0]
            h = h.divrem(rest, var)[1]
        d += 1
    if rest.degree_in(var) > 0:
        pieces.append((rest, rest.degree_in(var)))
    out = []
    for g, d in pieces:
        out.extend(_split_equal_degree(g, d, var, p, rnd))
    return out


def _split_equal_degree(g: Poly, d: int, var: str, p: int, rnd):
    ring, names = g.ring, g.names
    n = g.degree_in(var)
    if n == d:
        return [g]
    one = Poly.const(ring, names, 1)
    while True:
        # random polynomial of degree < n
        i = names.index(var)
        terms = {}
        for k in range(n):
            c = rnd.randrange(p)
            if c:
                e = [0] * len(names)
                e[i] = k
                terms[tuple(e)] = c
        if not terms:
            continue
        r = Poly(ring, names, terms)
        if p == 2:
            acc = r
            t = r
            for _ in range(d - 1):
                t = _poly_pow_mod(t, 2, g, var)
                acc = (acc + t).divrem(g, var)[1]
            cand = acc
        else:
            e = (p ** d - 1) // 2
            cand = _poly_pow_mod(r, e, g, var) - one
        h = poly_gcd_univar(cand, g, var)
        if 0 < h.degree_in(var) < n:
            return _split_equal_degree(h, d, var, p, rnd) + \
                _split_equal_degree(g.divrem(h, var)[0], d, var, p, rnd)


# -- ideal dimension bookkeeping -------------------------------------------------------


class BRing:
    """Descriptor of B = C[vars]; drives the elimination round bookkeeping."""

    def __init__(self, ring: CoeffRing, bvars, frame_names):
        self.ring = ring
        self.bvars = tuple(bvars)
        self.frame = tuple(frame_names)
        if len(self.bvars) > 2:
            raise OracleError("dimension oracle unsupported (more than 2 coefficient variables)")

    def dim(self):
        return len(self.bvars) + self.ring.krull_dim

    def is_unit_elt(self, s: Poly) -> bool:
        if s.is_zero() or not s.is_const():
            return False
        return self.ring.is_unit(s.const_value())


def dimension_drop(s_list, B: BRing):
    """Decide whether <s_1..s_k> = B; report remaining dimension otherwise."""
    s_list = [s for s in s_list if not s.is_zero()]
    if not s_list:
        return False, B.dim()
    if any(B.is_unit_elt(s) for s in s_list):
        return True, -1
    if not B.ring.is_field:
        raise OracleError("dimension oracle for Z coefficients not implemented")
    if len(B.bvars) == 0:
        # nonzero scalar in a field
        return True, -1
    if len(B.bvars) == 1:
        var = B.bvars[0]
        g = s_list[0]
        for s in s_list[1:]:
            g = poly_gcd_univar(g, s, var)
        if g.degree_in(var) == 0:
            return True, -1
        return False, 0
    # two variables: detect units via constants or coprime pairs by resultants
    from .rings import sylvester_resultant
    v1, v2 = B.bvars
    for i in range(len(s_list)):
        for j in range(i + 1, len(s_list)):
            a, b = s_list[i], s_list[j]
            if not a.is_monic_in(v2):
                lc = a.coeffs_in(v2).get(a.degree_in(v2))
                if lc is not None and lc.is_const():
                    a = a.scale(a.ring.inv(lc.const_value()))
                else:
                    continue
            r = sylvester_resultant(a, b, v2)
            if r.is_const() and not r.is_zero():
                return True, -1
    return False, 1


def unit_combination(s_list, B: BRing):
    """Explicit cofactors t_i with sum t_i s_i = 1."""
    ring = B.ring
    names = s_list[0].names
    zero = Poly.zero(ring, names)
    out = [zero] * len(s_list)
    for k, s in enumerate(s_list):
        if B.is_unit_elt(s):
            out[k] = Poly.const(ring, names, ring.inv(s.const_value()))
            return out
    if len(B.bvars) == 1 and ring.is_field:
        var = B.bvars[0]
        # chain extended gcds
        g, cof = s_list[0], {0: Poly.const(ring, names, 1)}
        for k in range(1, len(s_list)):
            d, u, v = poly_ext_gcd_univar(g, s_list[k], var)
            cof = {i: u * c for i, c in cof.items()}
            cof[k] = v
            g = d
            if g.is_const() and ring.is_unit(g.const_value()):
                break
        if not (g.is_const() and ring.is_unit(g.const_value())):
            raise OracleError("not a unit ideal")
        inv = ring.inv(g.const_value())
        for i, c in cof.items():
            out[i] = c.scale(inv)
        return out
    raise OracleError("unit combination unsupported for this coefficient base")
