"""The quasiclassical layer: lambda-parameterized pre-Poisson brackets on
commuting point coordinates, the Jacobi criterion, and the stock examples.

The bracket on generators is {t_j, t_i} = t_j^2 - t_i^2 - lambda_ij (t_i - t_j)^2
extended as a biderivation; it satisfies Jacobi exactly when every triple has
lambda_ij lambda_jk - lambda_ij lambda_ik - lambda_ik lambda_jk + 1 = 0.
"""

from __future__ import annotations

import itertools

from .scalars import ScalarField, lambda_name, t_name
from .freealg import AlgebraContext, NCPoly, AlgebraError


class LambdaMatrix:
    """Antisymmetric matrix of scalars over an ordered label set.

    Entries are stored for position pairs (i, j) with i < j; the reversed
    entry is the negation.  ``pairing`` optionally records a label involution
    for the complexified case.
    """

    def __init__(self, points, entries, field, pairing=None):
        self.points = [str(p) for p in points]
        self.field = field
        self.pairing = dict(pairing) if pairing else None
        if self.pairing:
            for a, b in self.pairing.items():
                if self.pairing.get(b) != a:
                    raise AlgebraError("pairing is not an involution")
        self.entries = {}
        npts = len(self.points)
        for (i, j), value in entries.items():
            if not (0 <= i < j < npts):
                raise AlgebraError("bad lambda position pair %r" % ((i, j),))
            self.entries[(i, j)] = field.coerce(value)
        for pair in itertools.combinations(range(npts), 2):
            if pair not in self.entries:
                raise AlgebraError("missing lambda entry at positions %r" % (pair,))

    @classmethod
    def from_labels(cls, points, values, field, pairing=None):
        points = [str(p) for p in points]
        pos = {p: k for k, p in enumerate(points)}
        entries = {}
        for (a, b), val in values.items():
            i, j = pos[str(a)], pos[str(b)]
            sc = field.coerce(val)
            if i > j:
                i, j, sc = j, i, -sc
            entries[(i, j)] = sc
        return cls(points, entries, field, pairing=pairing)

    def npoints(self):
        return len(self.points)

    def lam_pos(self, i, j):
        if i == j:
            raise AlgebraError("lambda needs two distinct points")
        return self.entries[(i, j)] if i < j else -self.entries[(j, i)]

    def lam_label(self, a, b):
        pos = {p: k for k, p in enumerate(self.points)}
        return self.lam_pos(pos[str(a)], pos[str(b)])

    def defect_pos(self, i, j, k):
        """lambda_ij lambda_jk - lambda_ij lambda_ik - lambda_ik lambda_jk + 1;
        zero iff the Jacobi identity holds on the triple.  Invariant under
        permutations of the triple."""
        if len({i, j, k}) != 3:
            raise AlgebraError("the Jacobi criterion needs three distinct points")
        lij, lik, ljk = self.lam_pos(i, j), self.lam_pos(i, k), self.lam_pos(j, k)
        return lij * ljk - lij * lik - lik * ljk + self.field.one


class PoissonContext:
    """Commuting point coordinates t_i with the lambda-parameterized bracket."""

    def __init__(self, lam: LambdaMatrix):
        self.lam = lam
        self.field = lam.field
        self.ctx = AlgebraContext(
            lam.field,
            [("t", p) for p in lam.points],
            name="Poisson[%s]" % ",".join(lam.points),
        )

    def gen(self, label) -> NCPoly:
        return self.ctx.gen("t", label)

    def gen_pos(self, i) -> NCPoly:
        return self.ctx.mono((i,))

    def _gen_bracket(self, i, j) -> NCPoly:
        """{t_i, t_j} for positions; {t_j, t_i} = t_j^2 - t_i^2 - lam_ij (t_i - t_j)^2."""
        ti, tj = self.gen_pos(i), self.gen_pos(j)
        if i < j:
            lam = self.lam.lam_pos(i, j)
            diff = ti - tj
            return -(tj * tj - ti * ti - diff * diff * lam).commutative_normal()
        return -self._gen_bracket(j, i)

    def _partial(self, p: NCPoly, i) -> NCPoly:
        out = {}
        for w, c in p.terms.items():
            mult = w.count(i)
            if not mult:
                continue
            pos = w.index(i)
            dw = w[:pos] + w[pos + 1:]
            coeff = c * mult
            acc = out.get(dw)
            tot = coeff if acc is None else acc + coeff
            if tot.is_zero:
                out.pop(dw, None)
            else:
                out[dw] = tot
        return NCPoly(self.ctx, out)

    def bracket(self, p: NCPoly, r: NCPoly) -> NCPoly:
        """Biderivation extension of the generator bracket; antisymmetric."""
        p = p.commutative_normal()
        r = r.commutative_normal()
        out = self.ctx.zero
        n = self.lam.npoints()
        partials_p = {i: self._partial(p, i) for i in range(n)}
        partials_r = {i: self._partial(r, i) for i in range(n)}
        for i in range(n):
            for j in range(i + 1, n):
                wedge = partials_p[i] * partials_r[j] - partials_p[j] * partials_r[i]
                if wedge.is_zero:
                    continue
                out = out + wedge * self._gen_bracket(i, j)
        return out.commutative_normal()

    def jacobi_defect(self, a, b, c):
        """By labels; zero iff the bracket satisfies Jacobi on the triple."""
        pos = {p: k for k, p in enumerate(self.lam.points)}
        return self.lam.defect_pos(pos[str(a)], pos[str(b)], pos[str(c)])

    def jacobiator(self, f: NCPoly, g: NCPoly, h: NCPoly) -> NCPoly:
        """{{f,g},h} + {{g,h},f} + {{h,f},g}, fully expanded."""
        return (
            self.bracket(self.bracket(f, g), h)
            + self.bracket(self.bracket(g, h), f)
            + self.bracket(self.bracket(h, f), g)
        )

    def all_triples_pass(self):
        n = self.lam.npoints()
        failures = []
        for i, j, k in itertools.combinations(range(n), 3):
            d = self.lam.defect_pos(i, j, k)
            if not d.is_zero:
                failures.append(((self.lam.points[i], self.lam.points[j], self.lam.points[k]), d))
        return failures


# -- the stock examples ------------------------------------------------------


def _ones_values(points):
    return {(a, b): 1 for a, b in itertools.combinations(points, 2)}


def build_example(n, npoints=3, blocks=None, labels=None) -> PoissonContext:
    """Construct the standard structures 1..6.

    1: lambda = 1 on an ordered set.  2: coth sums via t_k = e^(2 alpha_k).
    3: coth with half-period shifts (tanh on odd separations).  4: the paired
    set with lambda_(i, bar i) = 0.  5: block combination (cross-block
    lambda = 1); pass ``blocks`` as a list of PoissonContexts with disjoint
    label and symbol names.  6: the fixed 4-point complex instance.
    """
    if labels is not None:
        labels = [str(p) for p in labels]
        npoints = len(labels)
    if n == 1:
        points = labels or [str(k + 1) for k in range(npoints)]
        field = ScalarField()
        lm = LambdaMatrix.from_labels(points, _ones_values(points), field)
    elif n in (2, 3):
        points = labels or [str(k + 1) for k in range(npoints)]
        field = ScalarField([t_name(p) for p in points[:-1]])
        values = {}
        for i, j in itertools.combinations(range(npoints), 2):
            T = field.one
            for k in range(i, j):
                T = T * field.t(points[k])
            if n == 2 or (j - i) % 2 == 0:
                values[(points[i], points[j])] = (T + 1) / (T - 1)
            else:
                values[(points[i], points[j])] = (T - 1) / (T + 1)
        lm = LambdaMatrix.from_labels(points, values, field)
    elif n == 4:
        base = labels or [str(k + 1) for k in range(npoints)]
        points = base + [p + "~" for p in reversed(base)]
        pairing = {}
        for p in base:
            pairing[p] = p + "~"
            pairing[p + "~"] = p
        field = ScalarField()
        values = {}
        for a, b in itertools.combinations(base, 2):
            values[(a, b)] = 1
            values[(a, b + "~")] = 1
            values[(b + "~", a + "~")] = -1
            values[(b, a + "~")] = -1
        for p in base:
            values[(p, p + "~")] = 0
        lm = LambdaMatrix.from_labels(points, values, field, pairing=pairing)
    elif n == 5:
        if not blocks:
            raise AlgebraError("example 5 combines given blocks; pass blocks=[...]")
        points = []
        extra = []
        for blk in blocks:
            points.extend(blk.lam.points)
            extra.extend(nm for nm in blk.field.names[1:] if nm not in extra)
        if len(set(points)) != len(points):
            raise AlgebraError("blocks must carry disjoint labels")
        field = ScalarField(extra)
        values = {}
        offset = 0
        for blk in blocks:
            pts = blk.lam.points
            for (i, j), val in blk.lam.entries.items():
                values[(pts[i], pts[j])] = field.parse(val.render())
            offset += len(pts)
        seen = set()
        for bi, blk in enumerate(blocks):
            for bj in range(bi + 1, len(blocks)):
                for a in blk.lam.points:
                    for b in blocks[bj].lam.points:
                        values[(a, b)] = 1
        lm = LambdaMatrix.from_labels(points, values, field)
    elif n == 6:
        points = ["1", "2", "3", "4"]
        field = ScalarField()
        i = field.i
        values = {
            ("1", "2"): i, ("2", "3"): i, ("3", "4"): i,
            ("1", "4"): -i, ("1", "3"): 0, ("2", "4"): 0,
        }
        lm = LambdaMatrix.from_labels(points, values, field)
    else:
        raise AlgebraError("examples are numbered 1..6")
    ctx = PoissonContext(lm)
    bad = ctx.all_triples_pass()
    if bad:
        raise AlgebraError("constructed example %d violates the Jacobi criterion: %r" % (n, bad))
    return ctx


def from_point_spec(spec) -> PoissonContext:
    """Poisson context over the same field and lambda matrix as a point
    algebra (duck-typed: needs points, lam, field, pairing)."""
    lm = LambdaMatrix(spec.points, spec.lam, spec.field, pairing=spec.pairing)
    return PoissonContext(lm)


def quasiclassical_check(spec, pctx: PoissonContext | None = None):
    """For every pair, the reduced commutator of the quantized generators,
    scaled by (q^2+1)/(q^2-1) and specialized at s = 1, equals the bracket of
    the corresponding classical coordinates.

    Returns pair -> True/False, or the string 'pole' where the lambda entry
    has no classical limit (the exceptional structure).
    """
    from .scalars import PoleError

    if pctx is None:
        pctx = from_point_spec(spec)
    f = spec.field
    scale = (f.q ** 2 + 1) / (f.q ** 2 - 1)
    out = {}
    for i, j in itertools.combinations(range(len(spec.points)), 2):
        vi, vj = spec.gen_pos(i), spec.gen_pos(j)
        reduced = spec.normal_form_deg3(vj * vi - vi * vj).scale(scale)
        try:
            classical = pctx.ctx.zero
            for w, c in reduced.terms.items():
                classical = classical + pctx.ctx.mono(w, c.substitute({"s": f.one}))
            bracket = pctx.bracket(pctx.gen_pos(j), pctx.gen_pos(i))
            out[(spec.points[i], spec.points[j])] = (
                classical.commutative_normal() == bracket)
        except PoleError:
            out[(spec.points[i], spec.points[j])] = "pole"
    return out


def einstein_reparam(lam: LambdaMatrix):
    """phi_ij = c / lambda_ij with c = i (q^2+1)/(q^2-1); on defect-free
    triples the phi obey the velocity-addition law
    phi_ik = (phi_ij + phi_jk) / (1 + phi_ij phi_jk / c^2).

    Returns (phi-by-position, per-triple report of (defect_zero, law_holds)).
    """
    f = lam.field
    c = f.i * (f.q ** 2 + 1) / (f.q ** 2 - 1)
    phi = {}
    for (i, j), val in lam.entries.items():
        if val.is_zero:
            raise AlgebraError(
                "phi is undefined for lambda = 0 at pair (%s,%s)" % (lam.points[i], lam.points[j]))
        phi[(i, j)] = c / val

    def phi_pos(i, j):
        return phi[(i, j)] if i < j else -phi[(j, i)]

    report = []
    for i, j, k in itertools.combinations(range(lam.npoints()), 3):
        defect = lam.defect_pos(i, j, k)
        pij, pjk, pik = phi_pos(i, j), phi_pos(j, k), phi_pos(i, k)
        law = pik == (pij + pjk) / (f.one + pij * pjk / (c * c))
        report.append(((lam.points[i], lam.points[j], lam.points[k]), defect.is_zero, law))
    return phi, report
