"""Exact sparse multivariate polynomial arithmetic over small coefficient rings.

Polynomials live in A = C[x1,...,xn] for C one of: a prime field F_p, the
rationals, or (experimentally) the integers.  Terms are kept in a dict keyed
by exponent tuples; the canonical order is lexicographic with x1 > x2 > ...
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class CoeffRing:
    """A supported coefficient ring C: F_p, Q, or Z (experimental tier)."""

    def __init__(self, kind: str, modulus: int | None = None):
        if kind == "fp":
            if modulus is None or not _is_prime(modulus):
                raise ValueError("modulus must be a prime for F_p")
            self.kind, self.modulus = "fp", modulus
            self.krull_dim = 0
        elif kind == "q":
            self.kind, self.modulus = "q", None
            self.krull_dim = 0
        elif kind == "z":
            self.kind, self.modulus = "z", None
            self.krull_dim = 1
        else:
            raise ValueError(f"unsupported coefficient ring kind {kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind in ("fp", "q")

    def norm(self, c):
        if self.kind == "fp":
            return int(c) % self.modulus
        if self.kind == "q":
            return c if isinstance(c, Fraction) else Fraction(c)
        return int(c)

    def add(self, a, b):
        return self.norm(a + b)

    def mul(self, a, b):
        return self.norm(a * b)

    def neg(self, a):
        return self.norm(-a)

    def is_unit(self, a) -> bool:
        if self.kind == "fp":
            return int(a) % self.modulus != 0
        if self.kind == "q":
            return a != 0
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in {self}")
        if self.kind == "fp":
            return pow(int(a), self.modulus - 2, self.modulus)
        if self.kind == "q":
            return Fraction(1) / Fraction(a)
        return a

    def one(self):
        return self.norm(1)

    def zero(self):
        return self.norm(0)

    def units(self):
        """Iterate over a few units (all of them for small F_p)."""
        if self.kind == "fp":
            return [self.norm(u) for u in range(1, self.modulus)]
        if self.kind == "q":
            return [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)]
        return [1, -1]

    def coef_str(self, c) -> str:
        if self.kind == "q" and isinstance(c, Fraction):
            return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
        return str(c)

    def coef_parse(self, s: str):
        if "/" in s:
            a, b = s.split("/")
            return self.norm(Fraction(int(a), int(b)))
        return self.norm(int(s))

    def __eq__(self, other):
        return isinstance(other, CoeffRing) and (self.kind, self.modulus) == (other.kind, other.modulus)

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __repr__(self):
        return {"fp": f"F{self.modulus}", "q": "Q", "z": "Z"}[self.kind]

    def descriptor(self) -> dict:
        return {"kind": self.kind, "modulus": self.modulus}

    @staticmethod
    def from_descriptor(d: dict) -> "CoeffRing":
        return CoeffRing(d["kind"], d.get("modulus"))


class Poly:
    """Sparse multivariate polynomial; terms maps exponent tuple -> nonzero coef."""

    __slots__ = ("ring", "names", "terms")

    def __init__(self, ring: CoeffRing, names: tuple, terms: dict | None = None):
        self.ring = ring
        self.names = tuple(names)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = ring.norm(c)
                if c != 0:
                    self.terms[tuple(e)] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(ring, names, c) -> "Poly":
        n = len(names)
        return Poly(ring, names, {(0,) * n: c})

    @staticmethod
    def zero(ring, names) -> "Poly":
        return Poly(ring, names, {})

    @staticmethod
    def var(ring, names, name: str, power: int = 1) -> "Poly":
        i = names.index(name)
        e = [0] * len(names)
        e[i] = power
        return Poly(ring, names, {tuple(e): ring.one()})

    # -- basics ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(v == 0 for v in e) for e in self.terms)

    def const_value(self):
        if self.is_zero():
            return self.ring.zero()
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def copy(self) -> "Poly":
        p = Poly(self.ring, self.names)
        p.terms = dict(self.terms)
        return p

    def _check(self, other: "Poly"):
        if self.ring != other.ring or self.names != other.names:
            raise ValueError("operands live in different polynomial rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        R = self.ring
        for e, c in other.terms.items():
            v = R.add(out.get(e, 0), c)
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        p = Poly(self.ring, self.names)
        p.terms = out
        return p

    def __neg__(self) -> "Poly":
        p = Poly(self.ring, self.names)
        p.terms = {e: self.ring.neg(c) for e, c in self.terms.items()}
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        R = self.ring
        out: dict = {}
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                out[e] = v
        p = Poly(self.ring, self.names)
        for e, v in out.items():
            v = R.norm(v)
            if v != 0:
                p.terms[e] = v
        return p

    def scale(self, c) -> "Poly":
        c = self.ring.norm(c)
        p = Poly(self.ring, self.names)
        if c == 0:
            return p
        p.terms = {e: self.ring.mul(v, c) for e, v in self.terms.items()}
        return p

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.ring, self.names, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and \
            self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.names, frozenset(self.terms.items())))

    # -- lexicographic structure --------------------------------------------

    def lex_leading(self):
        """Return (exponent vector, coefficient) of the lex-greatest term."""
        if self.is_zero():
            raise ValueError("zero has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def is_lex_monic(self) -> bool:
        if self.is_zero():
            return False
        return self.lex_leading()[1] == self.ring.one()

    def make_lex_monic_scalar(self):
        """Unit u with (u*self) lex-monic; fields only."""
        _, c = self.lex_leading()
        return self.ring.inv(c)

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if self.is_zero():
            return -1
        i = self.names.index(name)
        return max(e[i] for e in self.terms)

    # -- univariate views ----------------------------------------------------

    def coeffs_in(self, name: str) -> dict:
        """View as univariate in `name`: degree -> Poly coefficient (name-free)."""
        i = self.names.index(name)
        out: dict = {}
        for e, c in self.terms.items():
            d = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            q = out.setdefault(d, Poly(self.ring, self.names))
            v = q.ring.add(q.terms.get(e2, 0), c)
            if v == 0:
                q.terms.pop(e2, None)
            else:
                q.terms[e2] = v
        return {d: q for d, q in out.items() if not q.is_zero()}

    @staticmethod
    def from_coeffs_in(ring, names, name, coeffs: dict) -> "Poly":
        i = names.index(name)
        p = Poly(ring, names)
        for d, q in coeffs.items():
            for e, c in q.terms.items():
                e2 = list(e)
                e2[i] += d
                e2 = tuple(e2)
                v = ring.add(p.terms.get(e2, 0), c)
                if v == 0:
                    p.terms.pop(e2, None)
                else:
                    p.terms[e2] = v
        return p

    def is_monic_in(self, name: str) -> bool:
        if self.is_zero():
            return False
        cs = self.coeffs_in(name)
        top = cs[max(cs)]
        return top.is_const() and top.const_value() == self.ring.one()

    def divrem(self, divisor: "Poly", name: str):
        """Division with remainder by a divisor monic in `name`."""
        self._check(divisor)
        if not divisor.is_monic_in(name):
            raise ValueError("divisor not monic in variable")
        dd = divisor.degree_in(name)
        i = self.names.index(name)
        rem = self.copy()
        quo = Poly(self.ring, self.names)
        while not rem.is_zero() and rem.degree_in(name) >= dd:
            rc = rem.coeffs_in(name)
            d = max(rc)
            lead = rc[d]
            shift = Poly(self.ring, self.names)
            for e, c in lead.terms.items():
                e2 = list(e)
                e2[i] += d - dd
                shift.terms[tuple(e2)] = c
            quo = quo + shift
            rem = rem - shift * divisor
        return quo, rem

    def exact_div(self, divisor: "Poly") -> "Poly":
        """Exact division (raises if not divisible); lex-lead elimination."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        R = self.ring
        rem = self.copy()
        quo = Poly(self.ring, self.names)
        de, dc = divisor.lex_leading()
        while not rem.is_zero():
            re, rc = rem.lex_leading()
            e = tuple(a - b for a, b in zip(re, de))
            if any(v < 0 for v in e):
                raise ValueError("not exactly divisible")
            if R.kind == "fp":
                c = R.mul(rc, R.inv(dc))
            elif R.kind == "q":
                c = R.norm(Fraction(rc) / Fraction(dc))
            else:
                if rc % dc != 0:
                    raise ValueError("not exactly divisible")
                c = rc // dc
            t = Poly(self.ring, self.names, {e: c})
            quo = quo + t
            rem = rem - t * divisor
        return quo

    def divisible_by(self, divisor: "Poly") -> bool:
        try:
            self.exact_div(divisor)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    # -- substitution --------------------------------------------------------

    def subst(self, mapping: dict, names=None, ring=None) -> "Poly":
        """Substitute variables: mapping name -> Poly over the target frame."""
        ring = ring or self.ring
        if names is None:
            some = next(iter(mapping.values()), None)
            names = some.names if isinstance(some, Poly) else self.names
        images = []
        for nm in self.names:
            img = mapping.get(nm)
            if img is None:
                img = Poly.var(ring, names, nm)
            images.append(img)
        out = Poly.zero(ring, names)
        for e, c in self.terms.items():
            t = Poly.const(ring, names, c)
            for img, k in zip(images, e):
                if k:
                    t = t * (img ** k)
            out = out + t
        return out

    def eval_coeffs(self, values: dict):
        """Fully evaluate at coefficient values (name -> ring element)."""
        R = self.ring
        acc = R.zero()
        for e, c in self.terms.items():
            v = c
            for nm, k in zip(self.names, e):
                if k:
                    v = v * (values[nm] ** k)
            acc = R.add(acc, v)
        return acc

    # -- canonical text form ---------------------------------------------------

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        R = self.ring
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{nm}^{k}" if k > 1 else nm
                for nm, k in zip(self.names, e) if k
            )
            cs = R.coef_str(c)
            if mono:
                body = f"{cs}*{mono}"
            else:
                body = cs
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += "-" + p[1:]
            else:
                out += "+" + p
        return out

    @staticmethod
    def parse(ring: CoeffRing, names, text: str) -> "Poly":
        text = text.strip().replace(" ", "")
        if text in ("0", ""):
            return Poly.zero(ring, names)
        chunks = []
        cur, sign = "", 1
        i = 0
        if text[0] in "+-":
            sign = -1 if text[0] == "-" else 1
            i = 1
        start_sign = sign
        while i < len(text):
            ch = text[i]
            if ch in "+-" and cur and not cur.endswith("/"):
                chunks.append((start_sign, cur))
                cur = ""
                start_sign = -1 if ch == "-" else 1
            else:
                cur += ch
            i += 1
        chunks.append((start_sign, cur))
        out = Poly.zero(ring, names)
        for sg, chunk in chunks:
            e = [0] * len(names)
            coef = ring.one()
            seen_coef = False
            for fac in chunk.split("*"):
                if not fac:
                    continue
                if fac[0].isdigit() or fac[0] == "-" or "/" in fac and fac.lstrip("-")[0].isdigit():
                    coef = ring.mul(coef, ring.coef_parse(fac))
                    seen_coef = True
                else:
                    if "^" in fac:
                        nm, k = fac.split("^")
                        k = int(k)
                    else:
                        nm, k = fac, 1
                    e[names.index(nm)] += k
            if sg < 0:
                coef = ring.neg(coef)
            out = out + Poly(ring, tuple(names), {tuple(e): coef})
        return out


# -- gcd machinery (univariate over a field) ----------------------------------


def poly_gcd_univar(f: Poly, g: Poly, name: str) -> Poly:
    """Monic gcd of univariate polynomials over a field coefficient ring."""
    if not f.ring.is_field:
        raise ValueError("univariate gcd requires field coefficients")
    a, b = f, g
    while not b.is_zero():
        lb = b.coeffs_in(name)
        top = lb[max(lb)]
        if not top.is_const():
            raise ValueError("gcd inputs must be univariate in " + name)
        bm = b.scale(b.ring.inv(top.const_value()))
        _, r = a.divrem(bm, name)
        a, b = bm, r
    if a.is_zero():
        return a
    la = a.coeffs_in(name)
    return a.scale(a.ring.inv(la[max(la)].const_value()))


def poly_ext_gcd_univar(f: Poly, g: Poly, name: str):
    """Extended gcd: returns (d, u, v) monic d = u*f + v*g, univariate field case."""
    ring, names = f.ring, f.names
    one = Poly.const(ring, names, 1)
    zero = Poly.zero(ring, names)
    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        lc = r1.coeffs_in(name)[r1.degree_in(name)]
        if not lc.is_const():
            raise ValueError("ext gcd inputs must be univariate in " + name)
        inv = ring.inv(lc.const_value())
        r1m, s1m, t1m = r1.scale(inv), s1.scale(inv), t1.scale(inv)
        q, r = r0.divrem(r1m, name)
        r0, r1 = r1m, r
        s0, s1 = s1m, s0 - q * s1m
        t0, t1 = t1m, t0 - q * t1m
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.coeffs_in(name)[r0.degree_in(name)].const_value()
    inv = ring.inv(lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# -- resultants ------------------------------------------------------------------


def _pseudo_divmod(r0: Poly, r1: Poly, name: str):
    """Pseudo-division: lc(r1)^(d0-d1+1) * r0 = q*r1 + r, exact over any ring."""
    d0, d1 = r0.degree_in(name), r1.degree_in(name)
    ring, names = r0.ring, r0.names
    lc = r1.coeffs_in(name)[d1]
    e = d0 - d1 + 1
    q = Poly.zero(ring, names)
    r = r0
    while not r.is_zero() and r.degree_in(name) >= d1:
        dr = r.degree_in(name)
        top = r.coeffs_in(name)[dr]
        t = Poly.from_coeffs_in(ring, names, name, {dr - d1: top})
        q = q * lc + t
        r = r * lc - t * r1
        e -= 1
    lce = lc ** e
    return q * lce, r * lce, lc ** (d0 - d1 + 1)


def _prs_yfree(f: Poly, g: Poly, name: str):
    """Extended pseudo-remainder chain: returns (r, u, v) with r = u*f + v*g
    and deg_name(r) as small as the chain reaches (0 when f, g are coprime
    in `name` over the fraction field)."""
    ring, names = f.ring, f.names
    one = Poly.const(ring, names, 1)
    zero = Poly.zero(ring, names)
    r0, u0, v0 = f, one, zero
    r1, u1, v1 = g, zero, one
    while not r1.is_zero() and r1.degree_in(name) > 0:
        if r0.degree_in(name) < r1.degree_in(name):
            r0, r1, u0, u1, v0, v1 = r1, r0, u1, u0, v1, v0
            continue
        q, r, lck = _pseudo_divmod(r0, r1, name)
        nu = u0 * lck - q * u1
        nv = v0 * lck - q * v1
        r0, u0, v0 = r1, u1, v1
        r1, u1, v1 = r, nu, nv
    return (r0, u0, v0) if r1.is_zero() else (r1, u1, v1)


def yfree_bezout(f: Poly, g: Poly, name: str):
    """Element s free of `name` with s = u*f + v*g; requires f monic in name.

    Used where a resultant-style elimination with explicit cofactors is
    needed; s is nonzero whenever f and g are coprime in name over Frac(B).
    """
    if not f.is_monic_in(name):
        raise ValueError("divisor not monic in variable")
    zero = Poly.zero(f.ring, f.names)
    one = Poly.const(f.ring, f.names, 1)
    if g.is_zero():
        if f.degree_in(name) <= 0:
            return f, one, zero
        return zero, zero, zero
    r, u, v = _prs_yfree(f, g, name)
    if r.degree_in(name) > 0:
        return Poly.zero(f.ring, f.names), Poly.zero(f.ring, f.names), Poly.zero(f.ring, f.names)
    return r, u, v


def sylvester_resultant(f: Poly, g: Poly, name: str) -> Poly:
    """Resultant in `name` via Sylvester determinant (Bareiss, exact).

    Sign convention fixed so that res(y-1, y-2, y) = 1 and
    res(y^2-x1, y, y) = -x1; requires f monic in name.
    """
    if not f.is_monic_in(name):
        raise ValueError("divisor not monic in variable")
    ring, names = f.ring, f.names
    fc, gc = f.coeffs_in(name), g.coeffs_in(name)
    m = max(fc) if fc else 0
    n = max(gc) if gc else 0
    if g.is_zero():
        return Poly.zero(ring, names)
    if n == 0:
        return gc[0] ** m
    size = m + n
    zero = Poly.zero(ring, names)

    def fcof(i):
        return fc.get(i, zero)

    def gcof(i):
        return gc.get(i, zero)

    rows = []
    for i in range(n):
        rows.append([fcof(m - (j - i)) if 0 <= (j - i) <= m else zero for j in range(size)])
    for i in range(m):
        rows.append([gcof(n - (j - i)) if 0 <= (j - i) <= n else zero for j in range(size)])
    # Bareiss fraction-free elimination
    sign = 1
    prev = Poly.const(ring, names, 1)
    M = rows
    for k in range(size - 1):
        if M[k][k].is_zero():
            piv = None
            for r in range(k + 1, size):
                if not M[r][k].is_zero():
                    piv = r
                    break
            if piv is None:
                return Poly.zero(ring, names)
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num.exact_div(prev)
            M[i][k] = zero
        prev = M[k][k]
    det = M[size - 1][size - 1]
    if sign < 0:
        det = -det
    if (m * n) % 2 == 1:
        det = -det
    return det


def _bareiss_det(rows, ring, names):
    size = len(rows)
    zero = Poly.zero(ring, names)
    M = [list(r) for r in rows]
    sign = 1
    prev = Poly.const(ring, names, 1)
    for k in range(size - 1):
        if M[k][k].is_zero():
            piv = next((r for r in range(k + 1, size) if not M[r][k].is_zero()), None)
            if piv is None:
                return zero
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
            M[i][k] = zero
        prev = M[k][k]
    det = M[size - 1][size - 1]
    return -det if sign < 0 else det


def resultant(f: Poly, g: Poly, name: str):
    """Resultant plus Bezout cofactors: (res, u, v) with res = u*f + v*g.

    Cofactors come from Cramer's rule on the transposed Sylvester system, so
    the identity holds exactly over the polynomial ring.
    """
    ring, names = f.ring, f.names
    zero = Poly.zero(ring, names)
    res = sylvester_resultant(f, g, name)
    if res.is_zero():
        return res, zero, zero
    fc, gc = f.coeffs_in(name), g.coeffs_in(name)
    m, n = max(fc), (max(gc) if gc else 0)
    if n == 0:
        # res = g^m with g constant in `name`
        if m == 0:
            return res, Poly.const(ring, names, 1), zero
        return res, zero, gc[0] ** (m - 1)

    def fcof(i):
        return fc.get(i, zero)

    def gcof(i):
        return gc.get(i, zero)

    size = m + n
    rows = []
    for i in range(n):
        rows.append([fcof(m - (j - i)) if 0 <= (j - i) <= m else zero for j in range(size)])
    for i in range(m):
        rows.append([gcof(n - (j - i)) if 0 <= (j - i) <= n else zero for j in range(size)])
    # Solve w^T S = res * e_last  (w holds coefficients of u then v, descending).
    # Cramer on S^T: w_j = det(S^T with col j -> e_last) * res / det(S^T).
    ST = [[rows[j][i] for j in range(size)] for i in range(size)]
    detST = _bareiss_det(ST, ring, names)
    if detST.is_zero():
        raise ArithmeticError("resultant nonzero but Sylvester determinant zero")
    sol = []
    e_last = [zero] * size
    e_last[size - 1] = Poly.const(ring, names, 1)
    for j in range(size):
        Mj = [list(r) for r in ST]
        for i in range(size):
            Mj[i][j] = e_last[i]
        dj = _bareiss_det(Mj, ring, names)
        sol.append((dj * res).exact_div(detST))
    u = Poly.zero(ring, names)
    v = Poly.zero(ring, names)
    for i in range(n):
        u = u + Poly.from_coeffs_in(ring, names, name, {n - 1 - i: sol[i]})
    for i in range(m):
        v = v + Poly.from_coeffs_in(ring, names, name, {m - 1 - i: sol[n + i]})
    return res, u, v


# -- normalisation change of variables ------------------------------------------


class Substitution:
    """Invertible change of variables with forward and backward maps."""

    def __init__(self, forward: dict, backward: dict, src_names: tuple, dst_names: tuple):
        self.forward = forward      # src name -> Poly over dst frame
        self.backward = backward    # dst name -> Poly over src frame
        self.src_names = tuple(src_names)
        self.dst_names = tuple(dst_names)

    def apply(self, p: Poly) -> Poly:
        return p.subst(self.forward, names=self.dst_names)

    def unapply(self, p: Poly) -> Poly:
        return p.subst(self.backward, names=self.src_names)

    @staticmethod
    def identity(ring, names) -> "Substitution":
        fwd = {nm: Poly.var(ring, names, nm) for nm in names}
        return Substitution(fwd, dict(fwd), names, names)

    def descriptor(self) -> dict:
        return {
            "src": list(self.src_names),
            "dst": list(self.dst_names),
            "forward": {k: str(v) for k, v in self.forward.items()},
            "backward": {k: str(v) for k, v in self.backward.items()},
        }


def normalisation_substitution(f: Poly, dst_names=None) -> Substitution:
    """Change of variables making a lex-monic f monic in the last variable.

    Sends x_i -> y_i + y_n^(K^(n-i)) for i < n with K = deg f + 1, x_n -> y_n.
    """
    if not f.is_lex_monic():
        raise ValueError("polynomial is not lex-monic")
    names = f.names
    n = len(names)
    ring = f.ring
    if dst_names is None:
        dst_names = names
    dst_names = tuple(dst_names)
    if n == 1:
        fwd = {names[0]: Poly.var(ring, dst_names, dst_names[0])}
        bwd = {dst_names[0]: Poly.var(ring, names, names[0])}
        return Substitution(fwd, bwd, names, dst_names)
    K = f.total_degree() + 1
    fwd, bwd = {}, {}
    yn = Poly.var(ring, dst_names, dst_names[-1])
    xn = Poly.var(ring, names, names[-1])
    for i, nm in enumerate(names[:-1]):
        power = K ** (n - 1 - i)
        fwd[nm] = Poly.var(ring, dst_names, dst_names[i]) + yn ** power
        bwd[dst_names[i]] = Poly.var(ring, names, nm) - xn ** power
    fwd[names[-1]] = yn
    bwd[dst_names[-1]] = xn
    return Substitution(fwd, bwd, names, dst_names)
