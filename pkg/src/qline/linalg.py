"""Dense exact linear algebra over a ScalarField.

Row reduction with exact pivoting by first nonzero coefficient; used for
graded dimension counts and degree-local ideal membership.
"""

from __future__ import annotations


def echelonize(rows):
    """Bring a list of Scalar rows to row echelon form in place.

    Returns the list of pivot column indices (one per nonzero row).
    """
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        src = None
        for k in range(r, len(rows)):
            if not rows[k][col].is_zero:
                src = k
                break
        if src is None:
            continue
        rows[r], rows[src] = rows[src], rows[r]
        inv = rows[r][col].inv()
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not rows[k][col].is_zero:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(rows) -> int:
    return len(echelonize([list(r) for r in rows]))


class RowSpace:
    """An echelonized span supporting membership tests and residues."""

    def __init__(self, rows):
        work = [list(r) for r in rows]
        self.pivots = echelonize(work)
        self.rows = work[: len(self.pivots)]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residue(self, vec):
        """Reduce ``vec`` against the span; zero vector iff member."""
        out = list(vec)
        for prow, pcol in zip(self.rows, self.pivots):
            f = out[pcol]
            if not f.is_zero:
                out = [a - f * b for a, b in zip(out, prow)]
        return out

    def contains(self, vec) -> bool:
        return all(x.is_zero for x in self.residue(vec))


def poly_to_row(poly, words):
    """Coefficient vector of an NCPoly over an ordered list of words."""
    index = {w: k for k, w in enumerate(words)}
    zero = poly.ctx.field.zero
    row = [zero] * len(words)
    for w, c in poly.terms.items():
        if w not in index:
            raise ValueError("word %r outside the chosen basis" % (w,))
        row[index[w]] = c
    return row


class SparseRowSpace:
    """Incrementally echelonized span with dict rows (column -> Scalar).

    Suited to relation spans whose rows carry few terms; reduction against
    the pivots keeps fill-in local.
    """

    def __init__(self, rows=()):
        self.pivot_rows = {}
        for r in rows:
            self.add(r)

    @property
    def rank(self):
        return len(self.pivot_rows)

    def residue(self, row):
        out = dict(row)
        while out:
            col = min(out)
            prow = self.pivot_rows.get(col)
            if prow is None:
                return out
            f = out.pop(col)
            for c, v in prow.items():
                if c == col:
                    continue
                acc = out.get(c)
                tot = -f * v if acc is None else acc - f * v
                if tot.is_zero:
                    out.pop(c, None)
                else:
                    out[c] = tot
        return out

    def add(self, row) -> bool:
        """Insert a row; returns True if it enlarged the span."""
        red = self.residue(row)
        red = {c: v for c, v in red.items() if not v.is_zero}
        if not red:
            return False
        col = min(red)
        inv = red[col].inv()
        prow = {c: v * inv for c, v in red.items()}
        for pcol, existing in list(self.pivot_rows.items()):
            f = existing.get(col)
            if f is None:
                continue
            upd = dict(existing)
            upd.pop(col)
            for c, v in prow.items():
                if c == col:
                    continue
                acc = upd.get(c)
                tot = -f * v if acc is None else acc - f * v
                if tot.is_zero:
                    upd.pop(c, None)
                else:
                    upd[c] = tot
            self.pivot_rows[pcol] = upd
        self.pivot_rows[col] = prow
        return True

    def contains(self, row) -> bool:
        return not any(not v.is_zero for v in self.residue(row).values())


def poly_to_sparse_row(poly):
    """Dict row keyed directly by words."""
    return dict(poly.terms)
