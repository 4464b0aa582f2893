"""The U_q(sl(2,R)) operators E, F, K, K^-1 acting on free-algebra elements
through the twisted Leibniz rules

    K(xy) = K(x)K(y),   E(xy) = E(x)K(y) + K^-1(x)E(y),
                        F(xy) = F(x)K(y) + K^-1(x)F(y),

with invariance predicates and the quadratic-ideal invariance report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import ScalarField, t_name
from .freealg import AlgebraContext, NCPoly, AlgebraError

OPS = ("E", "F", "K", "Kinv")


class ActionTable:
    """Generator images of E, F and the K scaling factor per letter.

    K acts on every letter of our tables as a scalar multiple of itself;
    ``entries`` maps letter id -> (E image, F image, K scale).
    """

    def __init__(self, ctx: AlgebraContext, entries):
        self.ctx = ctx
        self.entries = dict(entries)
        self._memo = {"E": {}, "F": {}}

    @classmethod
    def point_table(cls, ctx: AlgebraContext) -> "ActionTable":
        """E(v_i) = 1, F(v_i) = -v_i^2, K(v_i) = q^-1 v_i, on every letter."""
        f = ctx.field
        entries = {}
        for lid in range(len(ctx.letters)):
            v = ctx.mono((lid,))
            entries[lid] = (ctx.one, -(v * v), f.one / f.q)
        return cls(ctx, entries)

    @classmethod
    def coordinate_table(cls, ctx: AlgebraContext) -> "ActionTable":
        """The projective-coordinate table: E(x_i) = q^(1/2) y_i, E(y_i) = 0,
        F(x_i) = 0, F(y_i) = q^(-1/2) x_i, K(x_i) = q^(-1/2) x_i,
        K(y_i) = q^(1/2) y_i; inverse letters carry the values forced by
        y y^-1 = 1 (so F(y_i^-1) = -q^(-1/2) y_i^-1 x_i y_i^-1)."""
        f = ctx.field
        s = f.s
        entries = {}
        for lid, (kind, index) in enumerate(ctx.letters):
            if kind == "x":
                entries[lid] = (ctx.gen("y", index) * s, ctx.zero, f.one / s)
            elif kind == "y":
                entries[lid] = (ctx.zero, ctx.gen("x", index) * (f.one / s), s)
            elif kind == "y^-1":
                yinv = ctx.mono((lid,))
                x = ctx.gen("x", index)
                entries[lid] = (ctx.zero, -(yinv * x * yinv) * (f.one / s), f.one / s)
            else:
                raise AlgebraError("coordinate table needs x/y/y^-1 letters")
        return cls(ctx, entries)

    def k_scale_word(self, word, power=1):
        out = self.ctx.field.one
        for l in word:
            out = out * self.entries[l][2]
        return out if power == 1 else out.inv()

    def act(self, op: str, p: NCPoly) -> NCPoly:
        """Apply one of E, F, K, Kinv, splitting the first letter off each word."""
        if p.ctx is not self.ctx:
            raise AlgebraError("element is from a different context")
        ctx = self.ctx
        if op in ("K", "Kinv"):
            power = 1 if op == "K" else -1
            out = ctx.zero
            for w, c in p.terms.items():
                out = out + ctx.mono(w, c * self.k_scale_word(w, power))
            return out
        if op not in ("E", "F"):
            raise AlgebraError("unknown operator %r" % (op,))
        memo = self._memo[op]
        pick = 0 if op == "E" else 1

        def act_word(w):
            if w in memo:
                return memo[w]
            if not w:
                result = ctx.zero
            else:
                g, rest = w[0], w[1:]
                img, kscale = self.entries[g][pick], self.entries[g][2]
                result = img * ctx.mono(rest, self.k_scale_word(rest))
                tailed = act_word(rest)
                if not tailed.is_zero:
                    result = result + ctx.mono((g,), kscale.inv()) * tailed
            memo[w] = result
            return result

        out = ctx.zero
        for w, c in p.terms.items():
            out = out + act_word(w).scale(c)
        return out

    def is_invariant(self, p: NCPoly, reduce=None) -> bool:
        """E(p) = 0, F(p) = 0, K(p) = p, after the supplied reduction closure."""
        red = reduce if reduce is not None else (lambda x: x)
        if not red(self.act("E", p)).is_zero:
            return False
        if not red(self.act("F", p)).is_zero:
            return False
        return red(self.act("K", p) - p).is_zero


# -- quadratic ideal invariance (the generator X_ij) -----------------------------


@dataclass
class QuadraticInvarianceReport:
    e_image_zero: bool
    linear_conditions: tuple
    f_decomposes: bool
    degenerate: bool
    lam: object
    matches_relation: bool


def verify_prop1(field: ScalarField, a, b=None, c=None, d=None) -> QuadraticInvarianceReport:
    """Check invariance of X = a x_i x_j + b x_i^2 + c x_j^2 + d x_j x_i.

    When b and c are omitted they are solved from the two linear conditions
        a q^2 + b (1 + q^2) + d = 0,      a + c (1 + q^2) + d q^2 = 0,
    so the report then certifies: E(X) = 0 exactly; the cubic image
    F(X) = alpha (x_i X + X x_j) + beta (x_j X + X x_i) with
    alpha = (1+q^2)/q * a/(d-a), beta = (1+q^2)/q * d/(a-d); and the
    recovered lambda = (q^2+1)/(q^2-1) (a+d)/(a-d) reproduces X as a multiple
    of the quadratic relation generator.  a = d signals the degenerate
    branch (x_i - x_j)^2 instead.
    """
    f = field
    q, one = f.q, f.one
    a = f.coerce(a)
    d = f.coerce(d) if d is not None else f.zero
    if b is None:
        b = -(a * q ** 2 + d) / (one + q ** 2)
    if c is None:
        c = -(a + d * q ** 2) / (one + q ** 2)
    b, c = f.coerce(b), f.coerce(c)
    if a.is_zero and b.is_zero and c.is_zero and d.is_zero:
        raise AlgebraError("X must be nonzero")

    ctx = AlgebraContext(f, [("x", "i"), ("x", "j")], name="free[i,j]")
    xi, xj = ctx.mono((0,)), ctx.mono((1,))
    X = xi * xj * a + xi * xi * b + xj * xj * c + xj * xi * d
    table = ActionTable.point_table(ctx)

    cond1 = a * q ** 2 + b * (one + q ** 2) + d
    cond2 = a + c * (one + q ** 2) + d * q ** 2
    e_img = table.act("E", X)
    e_zero = e_img.is_zero

    degenerate = (a == d)
    if degenerate:
        lam = None
        f_ok = False
        matches = X == (xi - xj) * (xi - xj) * (-a) if not a.is_zero else False
    else:
        alpha = (one + q ** 2) / q * a / (d - a)
        beta = (one + q ** 2) / q * d / (a - d)
        decomposition = (xi * X + X * xj) * alpha + (xj * X + X * xi) * beta
        f_ok = table.act("F", X) == decomposition
        lam = (q ** 2 + one) / (q ** 2 - one) * (a + d) / (a - d)
        cfac = (q ** 2 - one) / (q ** 2 + one)
        relation = (
            xi.commutator(xj) * (-1)
            - (xj * xj - xi * xi - (xi - xj) * (xi - xj) * lam) * cfac
        )
        matches = X == relation * (-(a - d) / 2)
    return QuadraticInvarianceReport(
        e_zero, (cond1, cond2), f_ok, degenerate, lam, matches)


def symbolic_prop1_field() -> ScalarField:
    """A field with free symbols for the diagonal coefficients a and d."""
    return ScalarField([t_name("a"), t_name("d")])
