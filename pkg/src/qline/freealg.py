"""Free associative *-algebra over an indexed generator alphabet.

Words are tuples of small letter ids; an NCPoly is a finite scalar-weighted
sum of words in canonical form (no zero coefficients, deduplicated words).
The letter order of a context (position in its letter list) is the order
used by every rewrite system built on top of it; the monomial order is
degree-first, then lexicographic on the letter sequence.
"""

from __future__ import annotations

from .scalars import Scalar, ScalarError


class AlgebraError(ValueError):
    pass


class RewriteError(AlgebraError):
    pass


def letter_display(kind: str, index: str) -> str:
    if kind == "y^-1":
        return "y%s^-1" % index
    return "%s%s" % (kind, index)


class AlgebraContext:
    """A generator alphabet with a total order, over a ScalarField.

    ``letters`` is the ordered list of (kind, index) pairs; list position is
    the letter order.  ``star_map`` optionally sends a letter to its image
    under the involution (identity when omitted); the scalar star of the
    field acts on coefficients.
    """

    def __init__(self, field, letters, star_map=None, name=""):
        self.field = field
        self.letters = [tuple(l) for l in letters]
        if len(set(self.letters)) != len(self.letters):
            raise AlgebraError("duplicate letters: %r" % (self.letters,))
        self.ids = {l: k for k, l in enumerate(self.letters)}
        self.name = name
        self._star = None
        if star_map is not None:
            self._star = {self.ids[tuple(a)]: self.ids[tuple(b)] for a, b in star_map.items()}
            for a, b in list(self._star.items()):
                if self._star.get(b) != a:
                    raise AlgebraError("star map is not an involution")
        self._zero = NCPoly(self, {})
        self._one = NCPoly(self, {(): field.one})

    def __repr__(self):
        return "AlgebraContext(%s: %s)" % (self.name, " ".join(self.display(k) for k in range(len(self.letters))))

    def display(self, letter_id: int) -> str:
        return letter_display(*self.letters[letter_id])

    def letter_id(self, kind, index) -> int:
        key = (kind, str(index))
        if key not in self.ids:
            raise AlgebraError("unknown generator %s in context %s" % (letter_display(*key), self.name))
        return self.ids[key]

    def star_letter(self, letter_id: int) -> int:
        if self._star is None:
            return letter_id
        return self._star.get(letter_id, letter_id)

    # -- constructors ------------------------------------------------------

    @property
    def zero(self) -> "NCPoly":
        return self._zero

    @property
    def one(self) -> "NCPoly":
        return self._one

    def mono(self, word, coef=None) -> "NCPoly":
        c = self.field.one if coef is None else self.field.coerce(coef)
        if c.is_zero:
            return self._zero
        return NCPoly(self, {tuple(word): c})

    def gen(self, kind, index) -> "NCPoly":
        return self.mono((self.letter_id(kind, index),))

    def scalar(self, value) -> "NCPoly":
        c = self.field.coerce(value)
        return NCPoly(self, {(): c}) if not c.is_zero else self._zero

    def word_key(self, word):
        return (len(word), word)


class NCPoly:
    """Finite scalar-weighted sum of words; immutable by convention."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    def _check(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.ctx is not self.ctx:
                raise AlgebraError("mixed algebra contexts")
            return other
        if isinstance(other, (int, Scalar)):
            return self.ctx.scalar(other)
        raise AlgebraError("cannot combine NCPoly with %r" % (other,))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __add__(self, other):
        o = self._check(other)
        out = dict(self.terms)
        for w, c in o.terms.items():
            acc = out.get(w)
            tot = c if acc is None else acc + c
            if tot.is_zero:
                out.pop(w, None)
            else:
                out[w] = tot
        return NCPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, coef) -> "NCPoly":
        c = self.ctx.field.coerce(coef)
        if c.is_zero:
            return self.ctx.zero
        return NCPoly(self.ctx, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        o = self._check(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                w = w1 + w2
                c = c1 * c2
                acc = out.get(w)
                tot = c if acc is None else acc + c
                if tot.is_zero:
                    out.pop(w, None)
                else:
                    out[w] = tot
        return NCPoly(self.ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise AlgebraError("NCPoly powers take nonnegative integers")
        out = self.ctx.one
        for _ in range(n):
            out = out * self
        return out

    def commutator(self, other) -> "NCPoly":
        o = self._check(other)
        return self * o - o * self

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def coefficient(self, word) -> Scalar:
        return self.terms.get(tuple(word), self.ctx.field.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: self.ctx.word_key(it[0]))

    # -- the star antihomomorphism ------------------------------------------

    def star(self) -> "NCPoly":
        ctx = self.ctx
        out = {}
        for w, c in self.terms.items():
            sw = tuple(ctx.star_letter(l) for l in reversed(w))
            sc = c.star()
            acc = out.get(sw)
            tot = sc if acc is None else acc + sc
            if tot.is_zero:
                out.pop(sw, None)
            else:
                out[sw] = tot
        return NCPoly(ctx, out)

    # -- substitutions ---------------------------------------------------------

    def linear_substitute(self, images) -> "NCPoly":
        """Homomorphic extension of letter -> NCPoly (letters default to themselves).

        ``images`` keys may be letter ids or (kind, index) pairs.
        """
        ctx = self.ctx
        table = {}
        for key, img in images.items():
            lid = key if isinstance(key, int) else ctx.letter_id(*key)
            table[lid] = self._check(img)
        out = ctx.zero
        for w, c in self.terms.items():
            acc = ctx.scalar(c)
            for l in w:
                acc = acc * (table[l] if l in table else ctx.mono((l,)))
            out = out + acc
        return out

    def morph(self, target_ctx, images) -> "NCPoly":
        """Algebra map into another context: every letter must be assigned an
        image NCPoly of the target; coefficients carry over by rendering
        through the shared field."""
        table = {}
        for key, img in images.items():
            lid = key if isinstance(key, int) else self.ctx.letter_id(*key)
            if not isinstance(img, NCPoly) or img.ctx is not target_ctx:
                raise AlgebraError("morph images must live in the target context")
            table[lid] = img
        if target_ctx.field is not self.ctx.field:
            raise AlgebraError("morph requires a shared scalar field")
        out = target_ctx.zero
        for w, c in self.terms.items():
            acc = target_ctx.scalar(c)
            for l in w:
                if l not in table:
                    raise AlgebraError("letter %s has no image" % self.ctx.display(l))
                acc = acc * table[l]
            out = out + acc
        return out

    def commutative_normal(self) -> "NCPoly":
        """Canonical form with each word sorted; used by the Poisson layer."""
        out = {}
        for w, c in self.terms.items():
            sw = tuple(sorted(w))
            acc = out.get(sw)
            tot = c if acc is None else acc + c
            if tot.is_zero:
                out.pop(sw, None)
            else:
                out[sw] = tot
        return NCPoly(self.ctx, out)

    # -- rendering ---------------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        ctx = self.ctx
        chunks = []
        for w, c in self.sorted_terms():
            cs = c.render()
            word = "*".join(ctx.display(l) for l in w) if w else ""
            neg = False
            if cs.startswith("-") and "+" not in cs and " - " not in cs:
                neg, cs = True, cs[1:]
            if any(op in cs for op in (" + ", " - ")) or ("/" in cs and word):
                cs = "(%s)" % cs
            if not word:
                body = cs
            elif cs == "1":
                body = word
            else:
                body = "%s * %s" % (cs, word)
            chunks.append(("-" if neg else "") + body)
        out = chunks[0]
        for ch in chunks[1:]:
            out += " - " + ch[1:] if ch.startswith("-") else " + " + ch
        return out

    def __repr__(self):
        return "NCPoly(%s)" % self.render()


class RewriteSystem:
    """Ordered reduction rules on adjacent letter pairs, with optional
    special-case hook for whole words (checked first).

    ``rules`` maps a descending adjacent pair (a, b) to the replacement
    [(coef, word), ...] meaning a.b -> sum coef * word.  Reduction repeatedly
    rewrites the leftmost reducible spot of each word; ``fuel`` bounds the
    total number of rewrite steps.
    """

    def __init__(self, ctx, rules, macro=None, degree_cap=None, fuel=2_000_000):
        self.ctx = ctx
        self.rules = {tuple(k): [(ctx.field.coerce(c), tuple(w)) for c, w in v] for k, v in rules.items()}
        self.macro = macro
        self.degree_cap = degree_cap
        self.fuel = fuel
        self._cache = {}

    def find_redex(self, word):
        for p in range(len(word) - 1):
            if (word[p], word[p + 1]) in self.rules:
                return p
        return -1

    def is_normal(self, word) -> bool:
        if self.macro is not None and self.macro(word) is not None:
            return False
        return self.find_redex(word) < 0

    def reduce_word(self, word) -> NCPoly:
        word = tuple(word)
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        if self.degree_cap is not None and len(word) > self.degree_cap:
            raise RewriteError(
                "word of length %d exceeds the degree cap %d" % (len(word), self.degree_cap))
        ctx = self.ctx
        out = {}
        work = [(word, ctx.field.one)]
        steps = 0
        while work:
            w, c = work.pop()
            repl = self.macro(w) if self.macro is not None else None
            if repl is None:
                p = self.find_redex(w)
                if p < 0:
                    acc = out.get(w)
                    tot = c if acc is None else acc + c
                    if tot.is_zero:
                        out.pop(w, None)
                    else:
                        out[w] = tot
                    continue
                head, tail = w[:p], w[p + 2:]
                repl = [(rc, head + rw + tail) for rc, rw in self.rules[(w[p], w[p + 1])]]
            steps += len(repl) or 1
            if steps > self.fuel:
                raise RewriteError("rewrite fuel exhausted on %r" % (word,))
            for rc, rw in repl:
                nc = c * rc
                if not nc.is_zero:
                    work.append((rw, nc))
        result = NCPoly(ctx, out)
        self._cache[word] = result
        return result

    def reduce(self, poly: NCPoly) -> NCPoly:
        out = self.ctx.zero
        for w, c in poly.terms.items():
            out = out + self.reduce_word(w).scale(c)
        return out
