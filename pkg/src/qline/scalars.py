"""Exact coefficient arithmetic: the field Q(i)(s, lambda_.., t_.., phi_..).

Every coefficient in the workbench is a fraction of multivariate polynomials
over the Gaussian rationals.  The deformation parameter enters through the
primitive indeterminate s with q = s^2, so q^(1/2) is exact and |q| = 1 is
realized formally by the star map s -> 1/s.

A scalar is stored as a real/imaginary pair of sympy fractions over QQ.
(sympy's QQ_I and algebraic-field ground domains take minutes for single
fraction additions at our sizes; the split pair keeps all gcd work in QQ.)
"""

from __future__ import annotations

import re as _regex
from fractions import Fraction

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field


class ScalarError(ValueError):
    """Arithmetic or construction failure in the coefficient field."""


class PoleError(ScalarError):
    """A substitution made a denominator vanish identically."""


def lambda_name(a, b) -> str:
    return "lambda_{%s,%s}" % (a, b)


def t_name(k) -> str:
    return "t_%s" % (k,)


def phi_name(a, b) -> str:
    return "phi_{%s,%s}" % (a, b)


class ScalarField:
    """The field Q(i)(s, extra...) with a fixed generator list.

    ``extra`` holds the indeterminate names beyond s, in the order they
    should sort after s.  ``star_names`` optionally sends a name to
    ``(sign, other_name)`` and realizes an index involution on the lambda
    symbols (identity with sign +1 when omitted); s and i are always handled
    by the star map itself.
    """

    def __init__(self, extra=(), star_names=None):
        names = ["s"] + [str(n) for n in extra]
        if len(set(names)) != len(names):
            raise ScalarError("duplicate indeterminate names: %r" % (names,))
        syms = [Symbol(n) for n in names]
        built = _sympy_field(syms, QQ)
        self._field = built[0]
        self._ring = self._field.ring
        self.names = names
        self._pos = {n: k for k, n in enumerate(names)}
        self._star_names = dict(star_names or {})
        for src, (_, dst) in self._star_names.items():
            if src not in self._pos or dst not in self._pos:
                raise ScalarError("star map mentions unknown name %r -> %r" % (src, dst))
        fz, fo = self._field.zero, self._field.one
        self.zero = Scalar(self, fz, fz)
        self.one = Scalar(self, fo, fz)
        self.i = Scalar(self, fz, fo)
        self.s = self.gen("s")
        self.q = self.s * self.s

    def __repr__(self):
        return "ScalarField(%s)" % ", ".join(self.names)

    def gen(self, name) -> "Scalar":
        if name not in self._pos:
            raise ScalarError("unknown indeterminate %r (field has %s)" % (name, self.names))
        k = self._pos[name]
        num = self._ring.from_dict({tuple(1 if j == k else 0 for j in range(len(self.names))): QQ(1)})
        return Scalar(self, self._field.new(num, self._ring.one), self._field.zero)

    def lam(self, a, b) -> "Scalar":
        """lambda_{a,b}; the reversed pair is the negated stored generator."""
        if lambda_name(a, b) in self._pos:
            return self.gen(lambda_name(a, b))
        if lambda_name(b, a) in self._pos:
            return -self.gen(lambda_name(b, a))
        raise ScalarError("no lambda symbol for pair (%s, %s)" % (a, b))

    def t(self, k) -> "Scalar":
        return self.gen(t_name(k))

    def rational(self, p, q=1) -> "Scalar":
        fr = Fraction(p, q) if q != 1 else Fraction(p)
        num = self._ring.from_dict({(0,) * len(self.names): QQ(fr.numerator, fr.denominator)})
        return Scalar(self, self._field.new(num, self._ring.one), self._field.zero)

    def int(self, n) -> "Scalar":
        return self.rational(n)

    def coerce(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                raise ScalarError("scalar from a different field")
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        if isinstance(value, str):
            return self.parse(value)
        raise ScalarError("cannot coerce %r to a scalar" % (value,))

    # -- star -------------------------------------------------------------

    def _rev_shift(self, poly, shift):
        """s^e -> s^(deg - e + shift), other names through the involution."""
        if not poly:
            return poly
        deg = poly.degree(0)
        out = {}
        for monom, coeff in poly.terms():
            sign = 1
            exps = [0] * len(self.names)
            exps[0] = deg - monom[0] + shift
            for k in range(1, len(self.names)):
                e = monom[k]
                if not e:
                    continue
                name = self.names[k]
                sgn, dst = self._star_names.get(name, (1, name))
                exps[self._pos[dst]] += e
                if sgn < 0 and e % 2:
                    sign = -sign
            key = tuple(exps)
            out[key] = out.get(key, QQ(0)) + (coeff if sign > 0 else -coeff)
        return self._ring.from_dict(out)

    def _star_frac(self, fr):
        num, den = fr.numer, fr.denom
        if not num:
            return self._field.zero
        dn, dd = num.degree(0), den.degree(0)
        return self._field.new(self._rev_shift(num, dd), self._rev_shift(den, dn))

    # -- parsing ----------------------------------------------------------

    _TOKEN = _regex.compile(
        r"\s*(?:(?P<int>\d+)|(?P<name>lambda_\{[^}]+\}|phi_\{[^}]+\}|t_[A-Za-z0-9~]+)"
        r"|(?P<atom>[qsi])(?![A-Za-z0-9_{])|(?P<op>[-+*/^()]))"
    )

    def _tokenize(self, text):
        pos, out = 0, []
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m or m.end() == m.start():
                raise ScalarError("bad scalar syntax at column %d in %r" % (pos + 1, text))
            if m.lastgroup:
                out.append((m.lastgroup, m.group(m.lastgroup), pos))
            pos = m.end()
        out.append(("end", "", len(text)))
        return out

    def parse(self, text) -> "Scalar":
        """Parse the scalar grammar: rationals, i, s, q (= s^2), named symbols."""
        toks = self._tokenize(text)
        k = [0]

        def peek():
            return toks[k[0]]

        def take():
            tok = toks[k[0]]
            k[0] += 1
            return tok

        def atom():
            kind, val, pos = take()
            if kind == "int":
                return self.rational(int(val))
            if kind == "atom":
                if val == "q":
                    return self.q
                if val == "s":
                    return self.s
                return self.i
            if kind == "name":
                return self.gen(val)
            if kind == "op" and val == "(":
                e = expr()
                kind2, val2, pos2 = take()
                if val2 != ")":
                    raise ScalarError("expected ')' at column %d in %r" % (pos2 + 1, text))
                return e
            raise ScalarError("unexpected %r at column %d in %r" % (val or kind, pos + 1, text))

        def power():
            base = atom()
            if peek()[:2] == ("op", "^"):
                take()
                sign = 1
                if peek()[:2] == ("op", "-"):
                    take()
                    sign = -1
                kind, val, pos = take()
                if kind != "int":
                    raise ScalarError("expected integer exponent at column %d in %r" % (pos + 1, text))
                return base ** (sign * int(val))
            return base

        def factor():
            if peek()[:2] == ("op", "-"):
                take()
                return -factor()
            return power()

        def term():
            out = factor()
            while peek()[:2] in (("op", "*"), ("op", "/")):
                _, op, _ = take()
                rhs = factor()
                out = out * rhs if op == "*" else out / rhs
            return out

        def expr():
            out = term()
            while peek()[:2] in (("op", "+"), ("op", "-")):
                _, op, _ = take()
                rhs = term()
                out = out + rhs if op == "+" else out - rhs
            return out

        result = expr()
        if peek()[0] != "end":
            raise ScalarError("trailing input at column %d in %r" % (peek()[2] + 1, text))
        return result


class Scalar:
    """An element of a ScalarField.  Immutable; all operations are pure."""

    __slots__ = ("field", "re", "im")

    def __init__(self, field, re, im):
        self.field = field
        self.re = re
        self.im = im

    # -- ring/field structure ----------------------------------------------

    def _check(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ScalarError("scalars from different fields")
            return other
        if isinstance(other, int):
            return self.field.int(other)
        raise ScalarError("cannot combine scalar with %r" % (other,))

    def __add__(self, other):
        o = self._check(other)
        return Scalar(self.field, self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return Scalar(self.field, self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return Scalar(self.field, -self.re, -self.im)

    def __mul__(self, other):
        o = self._check(other)
        if not self.im and not o.im:
            return Scalar(self.field, self.re * o.re, self.field._field.zero)
        return Scalar(
            self.field,
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if self.is_zero:
            raise ScalarError("division by zero scalar")
        if not self.im:
            return Scalar(self.field, 1 / self.re, self.field._field.zero)
        nrm = self.re * self.re + self.im * self.im
        return Scalar(self.field, self.re / nrm, -self.im / nrm)

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __rtruediv__(self, other):
        return self._check(other) * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ScalarError("exponents must be integers")
        if n < 0:
            return self.inv() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.int(other)
        if not isinstance(other, Scalar) or other.field is not self.field:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero

    # -- the star automorphism ----------------------------------------------

    def star(self) -> "Scalar":
        """s -> 1/s, i -> -i, lambda names through the configured involution."""
        f = self.field
        return Scalar(f, f._star_frac(self.re), -f._star_frac(self.im))

    # -- substitution --------------------------------------------------------

    def substitute(self, bindings) -> "Scalar":
        """Exact simultaneous substitution name -> Scalar, then normalization."""
        f = self.field
        vals = {}
        for name, val in bindings.items():
            if name not in f._pos:
                raise ScalarError("unknown indeterminate %r" % (name,))
            vals[f._pos[name]] = f.coerce(val)
        gens = {}

        def genval(k):
            if k in vals:
                return vals[k]
            if k not in gens:
                gens[k] = f.gen(f.names[k])
            return gens[k]

        def ev_poly(poly):
            out = f.zero
            for monom, coeff in poly.terms():
                term = f.rational(Fraction(int(coeff.numerator), int(coeff.denominator)))
                for k, e in enumerate(monom):
                    if e:
                        term = term * genval(k) ** e
                out = out + term
            return out

        def ev_frac(fr):
            den = ev_poly(fr.denom)
            if den.is_zero:
                raise PoleError("pole at substitution (denominator vanishes)")
            if not fr.numer:
                return f.zero
            return ev_poly(fr.numer) / den

        return ev_frac(self.re) + f.i * ev_frac(self.im)

    # -- rendering -------------------------------------------------------------

    def _render_poly(self, poly):
        if not poly:
            return "0"
        chunks = []
        for monom, coeff in sorted(poly.terms(), reverse=True):
            fr = Fraction(int(coeff.numerator), int(coeff.denominator))
            parts = []
            for k, e in enumerate(monom):
                if e == 1:
                    parts.append(self.field.names[k])
                elif e:
                    parts.append("%s^%d" % (self.field.names[k], e))
            if not parts:
                body = str(fr)
            elif fr == 1:
                body = "*".join(parts)
            elif fr == -1:
                body = "-" + "*".join(parts)
            else:
                body = str(fr) + "*" + "*".join(parts)
            chunks.append(body)
        out = chunks[0]
        for c in chunks[1:]:
            out += " - " + c[1:] if c.startswith("-") else " + " + c
        return out

    def _render_frac(self, fr):
        num, den = fr.numer, fr.denom
        if not num:
            return "0"
        lc = den.LC
        if lc != 1:
            num = num.mul_ground(QQ(1) / lc)
            den = den.mul_ground(QQ(1) / lc)
        if den == self.field._ring.one:
            return self._render_poly(num)
        ns, ds = self._render_poly(num), self._render_poly(den)
        if " " in ns or ns.startswith("-"):
            ns = "(%s)" % ns
        if " " in ds or "*" in ds or "^" in ds:
            ds = "(%s)" % ds
        return "%s/%s" % (ns, ds)

    def render(self) -> str:
        if not self.im:
            return self._render_frac(self.re)
        ims = self._render_frac(self.im)
        if not self.re:
            return "i*(%s)" % ims
        return "(%s) + i*(%s)" % (self._render_frac(self.re), ims)

    def __repr__(self):
        return "Scalar(%s)" % self.render()
