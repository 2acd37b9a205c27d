"""Exact sparse linear algebra over rationals or Gaussian rationals.

Rows are dicts ``column -> coefficient``. Columns must be totally ordered;
the echelon pivots on the largest column of each row, which for word codes
means the largest word in degree-lexicographic order.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping

__all__ = ["SparseEchelon", "exact_rank", "axpy"]


def axpy(row: dict, c, other: Mapping) -> None:
    """In place ``row += c * other``, dropping exact zeros."""
    for k, v in other.items():
        if k in row:
            nv = row[k] + c * v
            if nv:
                row[k] = nv
            else:
                del row[k]
        else:
            row[k] = c * v


class SparseEchelon:
    """Incremental row echelon form with lead-term pivots.

    Each stored pivot row is normalized to lead coefficient 1. Only the lead
    term of an incoming row is reduced; full normal forms are produced on
    demand by :meth:`normal_form` once all rows are in.
    """

    def __init__(self):
        self.pivots: dict[Hashable, dict] = {}
        self._nf: dict = {}

    def __len__(self):
        return len(self.pivots)

    def __contains__(self, col):
        return col in self.pivots

    def add_row(self, row: Mapping) -> bool:
        """Insert a row; returns False if it was already in the span."""
        r = {k: v for k, v in row.items() if v}
        pivots = self.pivots
        while r:
            lead = max(r)
            p = pivots.get(lead)
            if p is None:
                c = r[lead]
                if c != 1:
                    r = {k: v / c for k, v in r.items()}
                pivots[lead] = r
                self._nf.clear()
                return True
            axpy(r, -r[lead], p)
        return False

    def normal_form(self, col) -> dict:
        """Unique representative of ``col`` supported on non-pivot columns."""
        nf = self._nf
        if col in nf:
            return nf[col]
        if col not in self.pivots:
            res = {col: 1}
            nf[col] = res
            return res
        # iterative post-order over the pivot tails, so deep chains do not recurse
        stack = [col]
        while stack:
            top = stack[-1]
            if top in nf:
                stack.pop()
                continue
            row = self.pivots.get(top)
            if row is None:
                nf[top] = {top: 1}
                stack.pop()
                continue
            pending = [k for k in row if k != top and k not in nf]
            if pending:
                stack.extend(pending)
                continue
            res: dict = {}
            for k, v in row.items():
                if k != top:
                    axpy(res, -v, nf[k])
            nf[top] = res
            stack.pop()
        return nf[col]

    def reduce(self, row: Mapping) -> dict:
        """Full normal form of a linear combination of columns."""
        out: dict = {}
        for k, v in row.items():
            if v:
                axpy(out, v, self.normal_form(k))
        return out


def exact_rank(rows: Iterable[Mapping]) -> int:
    """Rank of a sparse matrix with exact entries."""
    ech = SparseEchelon()
    return sum(1 for r in rows if ech.add_row(r))
