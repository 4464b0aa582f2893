"""Quantized point algebras A'_lambda.

Relation ideals, degree-<=3 normal forms, the three-index closed form,
graded dimension checks, the exceptional structure, complexified star
constraints, and the three-point change of generators with its diamond
overlap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .scalars import ScalarField, ScalarError, lambda_name, t_name
from .freealg import AlgebraContext, NCPoly, RewriteSystem, AlgebraError
from . import linalg


class NoReductionError(AlgebraError):
    """A pair hits a lambda value for which no ordering rule exists."""


EXCEPTIONAL_TEXT = "(1+q^2)/(1-q^2)"


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class PointAlgebraSpec:
    """A point algebra: ordered labels, a lambda matrix, and a flavor.

    ``lam`` maps position pairs (i, j) with i < j to Scalars; the reversed
    entry is the negation.  Flavors: ``real`` (trivial involution),
    ``complexified`` (letters w, star pairs labels via ``pairing``),
    ``exceptional`` (every entry (1+q^2)/(1-q^2), no quasiclassical limit).
    """

    def __init__(self, points, lam, field, flavor="real", pairing=None):
        self.points = [str(p) for p in points]
        self.field = field
        self.flavor = flavor
        self.pairing = dict(pairing) if pairing else None
        kind = "w" if flavor == "complexified" else "v"
        self.kind = kind
        star_map = None
        if self.pairing:
            star_map = {(kind, a): (kind, b) for a, b in self.pairing.items()}
        self.ctx = AlgebraContext(
            field,
            [(kind, p) for p in self.points],
            star_map=star_map,
            name="A'_lambda[%s]" % ",".join(self.points),
        )
        self.lam = {}
        for (i, j), value in lam.items():
            if not (0 <= i < j < len(self.points)):
                raise AlgebraError("bad lambda position pair %r" % ((i, j),))
            self.lam[(i, j)] = field.coerce(value)
        for i, j in _pairs(len(self.points)):
            if (i, j) not in self.lam:
                raise AlgebraError("missing lambda entry for positions %r" % ((i, j),))
        self._system = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def symbolic(cls, points, flavor="real", extra=()):
        points = [str(p) for p in points]
        names = [lambda_name(a, b) for a, b in itertools.combinations(points, 2)]
        field = ScalarField(names + list(extra))
        lam = {}
        for i, j in _pairs(len(points)):
            lam[(i, j)] = field.gen(lambda_name(points[i], points[j]))
        return cls(points, lam, field, flavor=flavor)

    @classmethod
    def from_values(cls, points, values, field=None, flavor="real", pairing=None):
        """values: map (label_a, label_b) -> scalar text/Scalar, a before b."""
        points = [str(p) for p in points]
        field = field or ScalarField()
        pos = {p: k for k, p in enumerate(points)}
        lam = {}
        for (a, b), val in values.items():
            i, j = pos[str(a)], pos[str(b)]
            sc = field.coerce(val)
            if i > j:
                i, j, sc = j, i, -sc
            lam[(i, j)] = sc
        return cls(points, lam, field, flavor=flavor, pairing=pairing)

    @classmethod
    def ones(cls, npoints=3, flavor="real"):
        points = [str(k + 1) for k in range(npoints)]
        field = ScalarField()
        lam = {pair: field.one for pair in _pairs(npoints)}
        return cls(points, lam, field, flavor=flavor)

    @classmethod
    def exceptional(cls, npoints=3):
        points = [str(k + 1) for k in range(npoints)]
        field = ScalarField()
        value = field.parse(EXCEPTIONAL_TEXT)
        lam = {pair: value for pair in _pairs(npoints)}
        return cls(points, lam, field, flavor="exceptional")

    @classmethod
    def three_point_jacobi(cls):
        """Three points with free lambda_12, lambda_23 and lambda_13
        eliminated by the Jacobi criterion:
        lambda_13 = (1 + lambda_12 lambda_23)/(lambda_12 + lambda_23)."""
        field = ScalarField([lambda_name("1", "2"), lambda_name("2", "3")])
        l12 = field.gen(lambda_name("1", "2"))
        l23 = field.gen(lambda_name("2", "3"))
        lam = {(0, 1): l12, (1, 2): l23, (0, 2): (1 + l12 * l23) / (l12 + l23)}
        return cls(["1", "2", "3"], lam, field)

    @classmethod
    def coth_family(cls, npoints=3):
        """lambda_ij = coth(sum of alpha_k) encoded via t_k = e^(2 alpha_k):
        coth of the sum is (T+1)/(T-1) with T the product of the t_k."""
        points = [str(k + 1) for k in range(npoints)]
        field = ScalarField([t_name(k + 1) for k in range(npoints - 1)])
        lam = {}
        for i, j in _pairs(npoints):
            T = field.one
            for k in range(i, j):
                T = T * field.t(k + 1)
            lam[(i, j)] = (T + 1) / (T - 1)
        return cls(points, lam, field, flavor="real")

    @classmethod
    def complexified_example(cls, n, npairs=2):
        """The paired-label structures: 10 (unit entries, lambda_(i, bar i) = 0),
        11 (coth on like pairs, tanh on mixed ones), 12 (the fixed complex
        pattern on two pairs)."""
        base = [str(k + 1) for k in range(npairs)]
        points = base + [p + "~" for p in reversed(base)]
        pairing = {}
        for p in base:
            pairing[p] = p + "~"
            pairing[p + "~"] = p
        values = {}
        if n == 10:
            field = ScalarField()
            for a, b in itertools.combinations(base, 2):
                values[(a, b)] = field.one
                values[(a, b + "~")] = field.one
                values[(b, a + "~")] = -field.one
                values[(b + "~", a + "~")] = -field.one
            for p in base:
                values[(p, p + "~")] = field.zero
        elif n == 11:
            field = ScalarField([t_name(k + 1) for k in range(npairs - 1)])
            for ia, ib in itertools.combinations(range(npairs), 2):
                T = field.one
                for k in range(ia, ib):
                    T = T * field.t(k + 1)
                coth = (T + 1) / (T - 1)
                tanh = (T - 1) / (T + 1)
                a, b = base[ia], base[ib]
                values[(a, b)] = coth
                values[(a, b + "~")] = tanh
                values[(b, a + "~")] = -tanh
                values[(b + "~", a + "~")] = -coth
            for p in base:
                values[(p, p + "~")] = field.zero
        elif n == 12:
            if npairs != 2:
                raise AlgebraError("the fixed complex pattern uses two pairs")
            field = ScalarField()
            i = field.i
            values = {
                ("1", "2"): i, ("2", "2~"): i, ("2~", "1~"): i,
                ("1", "1~"): -i, ("1", "2~"): field.zero, ("2", "1~"): field.zero,
            }
        else:
            raise AlgebraError("complexified examples are numbered 10..12")
        return cls.from_values(points, values, field=field,
                               flavor="complexified", pairing=pairing)

    # -- lambda access --------------------------------------------------------

    def npoints(self):
        return len(self.points)

    def lam_pos(self, i, j):
        if i == j:
            raise AlgebraError("lambda needs two distinct points")
        return self.lam[(i, j)] if i < j else -self.lam[(j, i)]

    def lam_label(self, a, b):
        pos = {p: k for k, p in enumerate(self.points)}
        return self.lam_pos(pos[str(a)], pos[str(b)])

    def gen(self, label):
        return self.ctx.gen(self.kind, label)

    def gen_pos(self, i):
        return self.ctx.mono((i,))

    # -- reduction coefficients (pair ordering rule) ----------------------------

    def pair_constants(self, i, j):
        """(k, l, m) for the stored pair: k = 1+q^2+lam(1-q^2),
        l = 1+q^4+lam(1-q^4), m = 1+q^2+lam(q^2-1)."""
        lam = self.lam_pos(i, j)
        q2 = self.field.q ** 2
        q4 = q2 * q2
        one = self.field.one
        return (one + q2 + lam * (one - q2), one + q4 + lam * (one - q4), one + q2 + lam * (q2 - one))

    def reduction_coeffs(self, i, j):
        """(alpha, beta, gamma) with v_j v_i = alpha v_i v_j + beta v_i^2 + gamma v_j^2."""
        if not i < j:
            raise AlgebraError("reduction coefficients need i < j")
        kc, _, mc = self.pair_constants(i, j)
        if kc.is_zero:
            raise NoReductionError(
                "no ordering rule for pair (%s,%s): lambda = (q^2+1)/(q^2-1)"
                % (self.points[i], self.points[j]))
        lam = self.lam_pos(i, j)
        q2 = self.field.q ** 2
        one = self.field.one
        denom = lam * (q2 - one) - (q2 + one)
        alpha = (-(q2 + one) - lam * (q2 - one)) / denom
        beta = (q2 - one) * (one + lam) / denom
        gamma = (q2 - one) * (lam - one) / denom
        if alpha != mc / kc or beta != (one - q2 * alpha) / (one + q2) or gamma != (q2 - alpha) / (one + q2):
            raise AlgebraError("ordering-rule coefficient forms disagree")
        return alpha, beta, gamma

    def fourth_order_obstruction(self, i, j):
        """beta*gamma*(1+alpha); degree-4 ordering needs this away from 1."""
        alpha, beta, gamma = self.reduction_coeffs(i, j)
        return beta * gamma * (self.field.one + alpha)

    # -- rewriting -----------------------------------------------------------

    def rewrite_system(self):
        if self._system is not None:
            return self._system
        rules = {}
        coeffs = {}
        for i, j in _pairs(self.npoints()):
            kc, _, _ = self.pair_constants(i, j)
            if kc.is_zero:
                continue
            alpha, beta, gamma = self.reduction_coeffs(i, j)
            coeffs[(i, j)] = (alpha, beta, gamma)
            rules[(j, i)] = [(alpha, (i, j)), (beta, (i, i)), (gamma, (j, j))]
        one = self.field.one

        def macro(word):
            if len(word) == 3 and word[0] == word[1] and word[0] > word[2]:
                j, i = word[0], word[2]
                if (i, j) not in coeffs:
                    raise NoReductionError(
                        "no ordering rule for pair (%s,%s)" % (self.points[i], self.points[j]))
                alpha, beta, gamma = coeffs[(i, j)]
                lead = one - beta * gamma
                if lead.is_zero:
                    raise NoReductionError(
                        "degree-3 ordering fails for pair (%s,%s): lambda = (q^4+1)/(q^4-1)"
                        % (self.points[i], self.points[j]))
                inv = lead.inv()
                return [
                    (beta * beta * (one + alpha) * inv, (i, i, i)),
                    (alpha * beta * (one + alpha) * inv, (i, i, j)),
                    ((alpha * alpha + alpha * beta * gamma) * inv, (i, j, j)),
                    (gamma * (one + alpha) * inv, (j, j, j)),
                ]
            return None

        self._system = RewriteSystem(self.ctx, rules, macro=macro)
        return self._system

    def normal_form_deg3(self, p: NCPoly) -> NCPoly:
        if p.degree() > 3:
            raise AlgebraError("normal forms are provided for degree <= 3 only")
        out = self.rewrite_system().reduce(p)
        for w in out.terms:
            if any(w[t] > w[t + 1] for t in range(len(w) - 1)):
                i, j = min(w), max(w)
                raise NoReductionError(
                    "word %s stuck: pair (%s,%s) has no ordering rule"
                    % ("*".join(self.ctx.display(l) for l in w), self.points[i], self.points[j]))
        return out

    # -- relation ideal ---------------------------------------------------------

    def relation(self, i, j) -> NCPoly:
        """I_ij = [v_j, v_i] - (q^2-1)/(q^2+1) (v_j^2 - v_i^2 - lam (v_i - v_j)^2)."""
        if not i < j:
            raise AlgebraError("relations are stored for i < j")
        vi, vj = self.gen_pos(i), self.gen_pos(j)
        c = (self.field.q ** 2 - 1) / (self.field.q ** 2 + 1)
        lam = self.lam_pos(i, j)
        diff = vi - vj
        return vi.commutator(vj) * (-1) - (vj * vj - vi * vi - diff * diff * lam) * c

    def degenerate_relation(self, i, j) -> NCPoly:
        """The a = d branch: (v_i - v_j)^2 (excluded from ordering machinery)."""
        diff = self.gen_pos(i) - self.gen_pos(j)
        return diff * diff

    def ideal_space(self, degree) -> "linalg.SparseRowSpace":
        """Echelonized span of { w1 * I_ab * w2 } at the given degree."""
        n = self.npoints()
        if degree > 4 or n > 4:
            raise AlgebraError("degree-local spans are computed for degree <= 4, points <= 4")
        cache = getattr(self, "_ideal_spaces", None)
        if cache is None:
            cache = self._ideal_spaces = {}
        if degree in cache:
            return cache[degree]
        space = linalg.SparseRowSpace()
        for pair in _pairs(n):
            rel = self.relation(*pair)
            for left_len in range(degree - 1):
                right_len = degree - 2 - left_len
                for wl in itertools.product(range(n), repeat=left_len):
                    for wr in itertools.product(range(n), repeat=right_len):
                        space.add(linalg.poly_to_sparse_row(
                            self.ctx.mono(wl) * rel * self.ctx.mono(wr)))
        cache[degree] = space
        return space

    def graded_dimension(self, degree) -> int:
        """Dimension of the degree-d component of A/I by exact row reduction."""
        return self.npoints() ** degree - self.ideal_space(degree).rank

    def ordered_span_dimension(self, degree) -> int:
        """Dimension of the span of the images of the ordered monomials in
        the degree-d component; equals both the ordered-monomial count and
        the full dimension exactly when they form a basis."""
        n = self.npoints()
        space = self.ideal_space(degree)
        span = linalg.SparseRowSpace()
        for w in itertools.combinations_with_replacement(range(n), degree):
            span.add(space.residue({tuple(w): self.field.one}))
        return span.rank

    def contains_in_ideal(self, poly: NCPoly) -> bool:
        """Degree-local ideal membership (homogeneous components tested)."""
        by_degree = {}
        for w, c in poly.terms.items():
            by_degree.setdefault(len(w), {})[w] = c
        return all(self.ideal_space(d).contains(row) for d, row in by_degree.items())


# -- the three-index closed form ------------------------------------------------


@dataclass
class ClosedFormResult:
    reduced: NCPoly
    residual: NCPoly
    factor: object
    p_computed: list
    p_expected: list
    matches: bool


def lemma3_K(field, lam_ij, lam_jk):
    q2 = field.q ** 2
    q4, q6 = q2 * q2, q2 ** 3
    one = field.one
    return (
        -(one + q2 + q4 + q6)
        + lam_ij * (one - q2 + q4 + q6)
        + lam_jk * (-one - q2 + q4 - q6)
        + lam_ij * lam_jk * (one - q2 - q4 + q6)
    )


def xijk_closed_form(spec: PointAlgebraSpec, i=0, j=1, k=2) -> ClosedFormResult:
    """Build the three-index combination of pair relations, reduce the
    two-index words with the pair ordering rules only, and compare with the
    closed form (overall factor times the nine ordered-monomial weights)."""
    if not (i < j < k):
        raise AlgebraError("the closed form needs three ascending positions")
    f = spec.field
    one, q2 = f.one, f.q ** 2
    ctx = spec.ctx

    def alpha_of(a, b):
        return spec.reduction_coeffs(a, b)[0]

    def X(a, b):
        al, be, ga = spec.reduction_coeffs(a, b)
        return (
            ctx.mono((a, b), al) + ctx.mono((a, a), be) + ctx.mono((b, b), ga) - ctx.mono((b, a))
        )

    a_ij, a_ik, a_jk = alpha_of(i, j), alpha_of(i, k), alpha_of(j, k)
    xi, xj, xk = ctx.mono((i,)), ctx.mono((j,)), ctx.mono((k,))
    X_ijk = (
        (X(i, j) * xk).scale(-a_jk * a_ik)
        + (xj * X(i, k)).scale(-a_jk)
        - X(j, k) * xi
        + xk * X(i, j)
        + (X(i, k) * xj).scale(a_ij)
        + (xi * X(j, k)).scale(a_ik * a_ij)
    )
    residual_terms = {w: c for w, c in X_ijk.terms.items() if len(set(w)) == 3}
    residual = NCPoly(ctx, residual_terms)
    two_index = X_ijk - residual
    reduced = spec.rewrite_system().reduce(two_index)

    lam_ij, lam_ik, lam_jk = spec.lam_pos(i, j), spec.lam_pos(i, k), spec.lam_pos(j, k)
    k_ij, l_ij, m_ij = spec.pair_constants(i, j)
    k_ik, l_ik, m_ik = spec.pair_constants(i, k)
    k_jk, l_jk, m_jk = spec.pair_constants(j, k)
    defect = lam_ij * lam_jk - lam_ij * lam_ik - lam_ik * lam_jk + one
    factor = defect * (q2 - one) ** 2 * (q2 + one) / (k_ij * k_ik * k_jk)
    q6 = q2 ** 3
    KK = lemma3_K(f, lam_ij, lam_jk)
    p_expected = [
        f.int(4) * (lam_ij - lam_ik) * q6 * (q2 - one) / (l_ij * l_ik),
        f.int(-2) * (q2 - one) * KK / (l_ij * l_jk),
        f.int(4) * (lam_ik - lam_jk) * (q2 - one) / (l_ik * l_jk),
        f.int(-2) * m_ij * q2 / l_ij,
        f.int(2) * m_ij / l_ij,
        f.int(2) * m_ik * q2 / l_ik,
        f.int(-2) * m_ik / l_ik,
        f.int(-2) * m_jk * q2 / l_jk,
        f.int(2) * m_jk / l_jk,
    ]
    monomials = [
        (i, i, i), (j, j, j), (k, k, k),
        (i, i, j), (i, j, j), (i, i, k), (i, k, k), (j, j, k), (j, k, k),
    ]
    extra = [w for w in reduced.terms if w not in set(monomials)]
    p_computed = [reduced.coefficient(w) for w in monomials]
    matches = not extra and all(
        c == factor * p for c, p in zip(p_computed, p_expected)
    )
    return ClosedFormResult(reduced, residual, factor, p_computed, p_expected, matches)


# -- three-point change of generators ---------------------------------------------


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _u_context(field):
    return AlgebraContext(field, [("u", "1"), ("u", "2"), ("u", "3")], name="u[1,2,3]")


def _reduce_both_orders(system, word):
    """Reduce the overlap word by first rewriting at position 0 and at
    position 1; confluent iff the two fully reduced results agree."""
    ctx = system.ctx
    outs = []
    for p in (0, 1):
        repl = system.rules.get((word[p], word[p + 1]))
        if repl is None:
            raise AlgebraError("no rule at overlap position %d" % p)
        acc = ctx.zero
        for c, rw in repl:
            acc = acc + system.reduce_word(word[:p] + rw + word[p + 2:]).scale(c)
        outs.append(acc)
    return outs[0] - outs[1]


@dataclass
class ThreePointResult:
    matrix: list
    det: object
    det_matches: bool
    b_residues: dict
    epsilon: object
    epsilon_display_ratio: object
    relation_residues: dict
    overlap_residue: NCPoly
    u_system: object
    dimension_deg3: int


def three_point_u_form(spec: PointAlgebraSpec) -> ThreePointResult:
    """Change of generators for a 3-point algebra satisfying the Jacobi
    criterion: the transformation matrix and its determinant
    -8 (lambda_12 + lambda_23)^2, the B combinations expanded back into the
    point generators, the q-commuting u relations (with the u_2^2 weight
    epsilon solved from the algebra itself), and the diamond overlap."""
    if spec.npoints() != 3:
        raise AlgebraError("the change of generators is for three points")
    f = spec.field
    one, q2 = f.one, f.q ** 2
    l12, l23 = spec.lam_pos(0, 1), spec.lam_pos(1, 2)
    l13 = spec.lam_pos(0, 2)
    if not (l12 * l23 - l12 * l13 - l13 * l23 + one).is_zero:
        raise AlgebraError("the triple must satisfy the Jacobi criterion")

    matrix = [
        [l12 - 1, -(l12 + l23), l23 + 1],
        [-(l12 + 1), l12 + l23, -(l23 - 1)],
        [(l12 + 1) ** 2 * (l23 + 1), -(l12 + l23) * (l12 - 1) * (l23 + 1),
         (l23 - 1) ** 2 * (l12 - 1)],
    ]
    det = det3(matrix)
    det_matches = det == f.int(-8) * (l12 + l23) ** 2
    if det.is_zero:
        raise AlgebraError("degenerate transformation; permute the three indices")

    # expand the B combinations in the point generators; the u_2^2 weight in
    # A_13 is 2 q^2 epsilon = 2(1-q^2)(lambda_12 - 1)(lambda_23 + 1) so that
    # A_13 = 0 is exactly the middle relation (the displayed combination
    # carries half that weight, which contradicts the displayed relations)
    v = [spec.gen_pos(p) for p in range(3)]
    u_in_v = [v[0] * matrix[r][0] + v[1] * matrix[r][1] + v[2] * matrix[r][2] for r in range(3)]

    w13 = 2 * (one - q2) * (l12 - 1) * (l23 + 1)
    A12 = u_in_v[0] * u_in_v[1] * 2 - u_in_v[1] * u_in_v[0] * (2 * q2)
    A13 = u_in_v[0] * u_in_v[2] * 2 - u_in_v[2] * u_in_v[0] * (2 * q2) + u_in_v[1] * u_in_v[1] * w13
    A23 = u_in_v[1] * u_in_v[2] * 2 - u_in_v[2] * u_in_v[1] * (2 * q2)
    k = matrix
    B12 = (A12 * k[2][2] - A13 * k[1][2] + A23 * k[0][2]).scale(det.inv())
    B13 = (A12 * (-k[2][1]) + A13 * k[1][1] - A23 * k[0][1]).scale(det.inv())
    B23 = (A12 * k[2][0] - A13 * k[1][0] + A23 * k[0][0]).scale(det.inv())

    def displayed(a, b, lam):
        va, vb = v[a], v[b]
        return (vb * va - va * vb) * (-(one + q2)) + (
            va * va - vb * vb + (va - vb) * (va - vb) * lam) * (one - q2)

    b_residues = {
        "B_12": B12 - displayed(0, 1, l12),
        "B_13": B13 - displayed(0, 2, l13),
        "B_23": B23 - displayed(1, 2, l23),
    }

    # solve the u_2^2 weight from the algebra: u3 u1 - q^-2 u1 u3 = eps u2^2
    nf = spec.normal_form_deg3
    a = one / q2
    r = nf(u_in_v[2] * u_in_v[0] - u_in_v[0] * u_in_v[2] * a)
    w = nf(u_in_v[1] * u_in_v[1])
    eps = None
    for word, coef in w.sorted_terms():
        cand = r.coefficient(word) / coef
        if (r - w.scale(cand)).is_zero:
            eps = cand
            break
    if eps is None:
        raise AlgebraError("u_3 u_1 - q^-2 u_1 u_3 is not proportional to u_2^2")
    displayed_eps = (one / q2 - one) * (l12 - 1) * (l23 + 1)
    ratio = eps / displayed_eps if not displayed_eps.is_zero else None

    relation_residues = {
        "u2u1": nf(u_in_v[1] * u_in_v[0] - u_in_v[0] * u_in_v[1] * a),
        "u3u1": r - w.scale(eps),
        "u3u2": nf(u_in_v[2] * u_in_v[1] - u_in_v[1] * u_in_v[2] * a),
    }

    uctx = _u_context(f)
    rules = {
        (1, 0): [(a, (0, 1))],
        (2, 0): [(a, (0, 2)), (eps, (1, 1))],
        (2, 1): [(a, (1, 2))],
    }
    usys = RewriteSystem(uctx, rules)
    overlap = _reduce_both_orders(usys, (2, 1, 0))
    dim3 = graded_dimension_from_relations(
        uctx,
        [uctx.mono((1, 0)) - uctx.mono((0, 1), a),
         uctx.mono((2, 0)) - uctx.mono((0, 2), a) - uctx.mono((1, 1), eps),
         uctx.mono((2, 1)) - uctx.mono((1, 2), a)],
        3,
    )
    return ThreePointResult(matrix, det, det_matches, b_residues, eps, ratio,
                            relation_residues, overlap, usys, dim3)


@dataclass
class ExceptionalResult:
    matrix: list
    det: object
    det_matches: bool
    b_residues: dict
    overlap_residue: NCPoly
    u_system: object
    dimension_deg3: int


def exceptional_u_form() -> ExceptionalResult:
    """The exceptional structure: transformation with determinant
    q^2 (q^2 - 1)^2, the B combinations in the new generators, the zero-
    product relations, and the diamond overlap."""
    spec = PointAlgebraSpec.exceptional(3)
    f = spec.field
    one, q2 = f.one, f.q ** 2
    matrix = [[q2, q2, q2], [one, q2, q2], [one, one, q2]]
    det = det3(matrix)
    det_matches = det == q2 * (q2 - one) ** 2

    uctx = _u_context(f)
    u = [uctx.mono((p,)) for p in range(3)]
    v_in_u = [u[0] * matrix[r][0] + u[1] * matrix[r][1] + u[2] * matrix[r][2] for r in range(3)]

    def A(a, b):
        return v_in_u[b] * v_in_u[a] * (-(one + q2)) + v_in_u[a] * v_in_u[a] + v_in_u[b] * v_in_u[b] * q2

    A12, A13, A23 = A(0, 1), A(0, 2), A(1, 2)
    k = matrix
    B12 = (A12 * k[2][2] - A13 * k[1][2] + A23 * k[0][2]).scale(det.inv())
    B13 = (A12 * (-k[2][1]) + A13 * k[1][1] - A23 * k[0][1]).scale(det.inv())
    B23 = (A12 * k[2][0] - A13 * k[1][0] + A23 * k[0][0]).scale(det.inv())
    b_residues = {
        "B_12": B12 - u[1] * u[0] * (-(one + q2)),
        "B_13": B13 - (u[0] * u[1] + u[1] * u[0] + u[0] * u[2] - u[2] * u[0] * q2),
        "B_23": B23 - (-(u[0] * u[1]) - u[1] * u[0] + u[1] * u[2] - u[2] * u[1] * q2),
    }
    a = one / q2
    rules = {
        (1, 0): [],
        (2, 0): [(a, (0, 2)), (a, (0, 1))],
        (2, 1): [(a, (1, 2)), (-a, (0, 1))],
    }
    usys = RewriteSystem(uctx, rules)
    overlap = _reduce_both_orders(usys, (2, 1, 0))
    dim3 = spec.graded_dimension(3)
    return ExceptionalResult(matrix, det, det_matches, b_residues, overlap, usys, dim3)


def graded_dimension_from_relations(ctx, relations, degree) -> int:
    n = len(ctx.letters)
    words = [tuple(w) for w in itertools.product(range(n), repeat=degree)]
    rows = []
    for rel in relations:
        d = rel.degree()
        for left_len in range(degree - d + 1):
            right_len = degree - d - left_len
            for wl in itertools.product(range(n), repeat=left_len):
                for wr in itertools.product(range(n), repeat=right_len):
                    rows.append(linalg.poly_to_row(ctx.mono(wl) * rel * ctx.mono(wr), words))
    return len(words) - linalg.rank(rows)


# -- complexified star constraints ----------------------------------------------


@dataclass
class ComplexifiedStarReport:
    star_membership: dict
    defects: dict
    reduced_triples: list

    @property
    def ok(self):
        return all(self.star_membership.values()) and all(
            d.is_zero for d in self.defects.values())


def complexified_star_check(spec: PointAlgebraSpec) -> ComplexifiedStarReport:
    """Star-invariance of every relation generator (membership of the starred
    generator in the degree-2 relation span) plus the Jacobi criterion on all
    triples, with the sufficient reduced triple set listed."""
    if spec.pairing is None:
        raise AlgebraError("the check needs a complexified spec with a pairing")
    n = spec.npoints()
    words2 = [tuple(w) for w in itertools.product(range(n), repeat=2)]
    rows = [linalg.poly_to_row(spec.relation(*p), words2) for p in _pairs(n)]
    space = linalg.RowSpace(rows)
    membership = {}
    for i, j in _pairs(n):
        starred = spec.relation(i, j).star()
        membership[(spec.points[i], spec.points[j])] = space.contains(
            linalg.poly_to_row(starred, words2))
    defects = {}
    for i, j, k in itertools.combinations(range(n), 3):
        lij, lik, ljk = spec.lam_pos(i, j), spec.lam_pos(i, k), spec.lam_pos(j, k)
        defects[(spec.points[i], spec.points[j], spec.points[k])] = (
            lij * ljk - lij * lik - lik * ljk + spec.field.one)
    base = [p for p in spec.points if not p.endswith("~")]
    reduced = []
    for a, b, c in itertools.combinations(base, 3):
        reduced.append((a, b, c))
    for a, b in itertools.combinations(base, 2):
        reduced.append((spec.pairing[a], a, b))
        reduced.append((a, spec.pairing[a], b))
    return ComplexifiedStarReport(membership, defects, reduced)
