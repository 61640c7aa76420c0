"""Placement delivery arrays (PDAs).

A (K, F, Z, S) PDA is an F x K array whose cells are either a star or a
symbol from [1, S], such that

* C1:  every column holds exactly Z stars;
* C2:  every symbol in [1, S] occurs at least once;
* C3a: no symbol repeats within a row or within a column;
* C3b: whenever two cells share a symbol, both cross cells are stars.

Stars encode cached packets, symbols encode multicast rounds; the simulator
in ``simulate`` executes the resulting scheme.  Grids are numpy arrays with
0 for the star and positive integers for symbols.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .packing import Nhsdp, Verdict, verify_nhsdp
from .ringmath import binomial

STAR = 0


@dataclass(frozen=True, eq=False)
class Pda:
    """An F x K grid plus its declared star count Z and symbol count S."""

    grid: np.ndarray
    Z: int
    S: int

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.int64)
        if grid.ndim != 2 or grid.size == 0:
            raise ValueError("PDA grid must be a non-empty 2-D array")
        if grid.min() < 0 or grid.max() > self.S:
            raise ValueError("cells must be the star (0) or symbols in [1, S]")
        if not (0 <= self.Z <= grid.shape[0]):
            raise ValueError("Z must lie in [0, F]")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @property
    def F(self) -> int:
        return self.grid.shape[0]

    @property
    def K(self) -> int:
        return self.grid.shape[1]

    @classmethod
    def from_grid(cls, grid) -> "Pda":
        """Infer Z from column 0 and S from the largest symbol present."""
        arr = np.asarray(grid, dtype=np.int64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("PDA grid must be a non-empty 2-D array")
        z = int((arr[:, 0] == STAR).sum())
        s = int(arr.max(initial=0))
        return cls(arr, z, max(s, 0))

    def same_as(self, other: "Pda") -> bool:
        return (
            self.Z == other.Z
            and self.S == other.S
            and self.grid.shape == other.grid.shape
            and bool(np.array_equal(self.grid, other.grid))
        )

    def params(self) -> tuple[int, int, int, int]:
        """(K, F, Z, S)."""
        return self.K, self.F, self.Z, self.S


def verify_pda(pda: Pda) -> Verdict:
    """Exhaustively check C1, C2, C3a, and C3b.

    Cells are grouped by symbol, so the cost is O(F*K + sum_s occ(s)^2)
    rather than a blind O((FK)^2) pair sweep.  Violations carry the cell
    coordinates involved.
    """
    grid = pda.grid
    F, K = grid.shape

    rows_idx, cols_idx = np.nonzero(grid != STAR)
    syms = grid[rows_idx, cols_idx]
    if pda.S == 0:
        return _check_c1_c2(pda, syms)

    order = np.argsort(syms, kind="stable")
    syms_s = syms[order]
    rows_s = rows_idx[order]
    cols_s = cols_idx[order]
    starts = np.flatnonzero(np.r_[True, syms_s[1:] != syms_s[:-1]])
    ends = np.r_[starts[1:], len(syms_s)]
    sizes = ends - starts

    if sizes.max(initial=0) >= 2:
        if sizes.min() == sizes.max():
            # Regular case: one reshape covers every symbol group at once.
            g = int(sizes[0])
            rows_g = rows_s.reshape(-1, g)
            cols_g = cols_s.reshape(-1, g)
            p1, p2 = np.triu_indices(g, 1)
            r1, c1 = rows_g[:, p1].ravel(), cols_g[:, p1].ravel()
            r2, c2 = rows_g[:, p2].ravel(), cols_g[:, p2].ravel()
            sym_of_pair = np.repeat(syms_s[starts], p1.size)
        else:
            r1l, c1l, r2l, c2l, sl = [], [], [], [], []
            for start, end in zip(starts, ends):
                size = end - start
                if size < 2:
                    continue
                p1, p2 = np.triu_indices(size, 1)
                r1l.append(rows_s[start:end][p1])
                c1l.append(cols_s[start:end][p1])
                r2l.append(rows_s[start:end][p2])
                c2l.append(cols_s[start:end][p2])
                sl.append(np.full(p1.size, syms_s[start]))
            r1, c1 = np.concatenate(r1l), np.concatenate(c1l)
            r2, c2 = np.concatenate(r2l), np.concatenate(c2l)
            sym_of_pair = np.concatenate(sl)

        clash = (r1 == r2) | (c1 == c2)
        if clash.any():
            i = int(np.flatnonzero(clash)[0])
            return Verdict(
                False,
                "C3a",
                f"symbol {int(sym_of_pair[i])} repeats at cells "
                f"({int(r1[i])},{int(c1[i])}) and ({int(r2[i])},{int(c2[i])})",
                {
                    "symbol": int(sym_of_pair[i]),
                    "cells": ((int(r1[i]), int(c1[i])), (int(r2[i]), int(c2[i]))),
                },
            )

        cross = (grid[r1, c2] != STAR) | (grid[r2, c1] != STAR)
        if cross.any():
            i = int(np.flatnonzero(cross)[0])
            return Verdict(
                False,
                "C3b",
                f"cells ({int(r1[i])},{int(c1[i])}) and ({int(r2[i])},{int(c2[i])}) "
                f"share symbol {int(sym_of_pair[i])} but a cross cell is not a star",
                {
                    "symbol": int(sym_of_pair[i]),
                    "cells": ((int(r1[i]), int(c1[i])), (int(r2[i]), int(c2[i]))),
                },
            )

    return _check_c1_c2(pda, syms)


def _check_c1_c2(pda: Pda, syms: np.ndarray) -> Verdict:
    star_counts = (pda.grid == STAR).sum(axis=0)
    bad = np.nonzero(star_counts != pda.Z)[0]
    if bad.size:
        k = int(bad[0])
        return Verdict(
            False,
            "C1",
            f"column {k} has {int(star_counts[k])} stars, declared Z={pda.Z}",
            {"column": k, "stars": int(star_counts[k]), "Z": pda.Z},
        )
    present = np.unique(syms)
    if present.size != pda.S:
        missing = sorted(set(range(1, pda.S + 1)) - set(int(s) for s in present))
        return Verdict(
            False,
            "C2",
            f"{len(missing)} of S={pda.S} symbols never occur, first missing {missing[0]}",
            {"missing": missing[:16]},
        )
    return Verdict(True, "valid", _valid_detail(pda), {"params": pda.params()})


def _valid_detail(pda: Pda) -> str:
    K, F, Z, S = pda.params()
    return f"({K},{F},{Z},{S}) PDA"


def pda_from_nhsdp(nhsdp: Nhsdp) -> Pda:
    """Lift a (v, g, b) packing to the (v, v, v - b*g, b*v) PDA.

    Cell (f, k) carries the pair (c, i) with c = (f + k) mod v whenever
    (k - f) mod v lies in block i, and a star otherwise; pairs are encoded
    as symbols s = (i - 1) * v + c + 1 so that [1, b*v] stays contiguous.
    The input is re-verified, since the lift is only sound for true packings.
    """
    verdict = verify_nhsdp(nhsdp.v, nhsdp.blocks)
    if not verdict.ok:
        raise ValueError(f"input is not a valid NHSDP: {verdict.detail}")
    v = nhsdp.v
    grid = np.zeros((v, v), dtype=np.int64)
    f = np.arange(v)
    for i, block in enumerate(nhsdp.blocks):
        for d in block:
            k = (f + d) % v
            grid[f, k] = i * v + (f + k) % v + 1
    return Pda(grid, Z=v - nhsdp.b * nhsdp.g, S=nhsdp.b * v)


def conjugate_pda(pda: Pda) -> Pda:
    """Swap the roles of rows and symbols: a (K, S, S-(F-Z), F) PDA.

    Cell (s, k) of the output holds the row index (plus one) at which symbol
    s + 1 appears in column k of the input, star if it does not appear.
    Requires 0 < Z < F and that every input row contains at least one symbol,
    otherwise the output would miss a symbol.
    """
    F, K, Z, S = pda.F, pda.K, pda.Z, pda.S
    if not (0 < Z < F):
        raise ValueError(f"conjugate needs 0 < Z < F, got Z={Z}, F={F}")
    rows_with_symbol = np.unique(np.nonzero(pda.grid != STAR)[0])
    if rows_with_symbol.size != F:
        missing = sorted(set(range(F)) - set(int(r) for r in rows_with_symbol))
        raise ValueError(
            f"row {missing[0]} is all stars; compact rows before conjugating"
        )
    out = np.zeros((S, K), dtype=np.int64)
    rows_idx, cols_idx = np.nonzero(pda.grid != STAR)
    syms = pda.grid[rows_idx, cols_idx]
    out[syms - 1, cols_idx] = rows_idx + 1
    return Pda(out, Z=S - (F - Z), S=F)


def group_pda_divisible(pda: Pda, K: int) -> Pda:
    """Serve K = h * K1 users by tiling h copies with disjoint symbols.

    Copy j (0-based) renames symbol s to s + j * S, giving a valid
    (K, F, Z, h*S) PDA.  Only the divisible case is constructive here.
    """
    if K % pda.K != 0 or K < pda.K:
        raise ValueError(f"target K={K} is not a positive multiple of K1={pda.K}")
    h = K // pda.K
    mask = pda.grid != STAR
    copies = [np.where(mask, pda.grid + j * pda.S, STAR) for j in range(h)]
    return Pda(np.hstack(copies), Z=pda.Z, S=h * pda.S)


def _colex_rank(subset: tuple[int, ...]) -> int:
    """Rank of an ascending subset in colexicographic order (0-based)."""
    return sum(binomial(e, i + 1) for i, e in enumerate(subset))


def mn_pda(K: int, t: int) -> Pda:
    """The classic t-subset PDA: (K, C(K,t), C(K-1,t-1), C(K,t+1)).

    Rows are indexed by t-subsets of {0..K-1} in colex order; cell (T, k) is
    a star when k is in T, otherwise the colex rank of T + {k} among the
    (t+1)-subsets.  Each symbol occurs exactly t + 1 times.
    """
    if not (1 <= t < K):
        raise ValueError(f"require 1 <= t < K, got t={t}, K={K}")
    F = binomial(K, t)
    grid = np.zeros((F, K), dtype=np.int64)
    for T in itertools.combinations(range(K), t):
        row = _colex_rank(T)
        members = set(T)
        for k in range(K):
            if k in members:
                continue
            union = tuple(sorted(members | {k}))
            grid[row, k] = _colex_rank(union) + 1
    return Pda(grid, Z=binomial(K - 1, t - 1), S=binomial(K, t + 1))


def drop_columns(pda: Pda, keep: Iterable[int]) -> Pda:
    """Restrict to a column subset, compacting symbols back to [1, S'].

    Z is unchanged (stars per column are a column property).  Used to realise
    even user counts: build for v = K + 1 and drop the virtual column.
    """
    cols = sorted(set(int(c) for c in keep))
    if not cols:
        raise ValueError("keep must name at least one column")
    if cols[0] < 0 or cols[-1] >= pda.K:
        raise ValueError(f"column index out of range for K={pda.K}")
    sub = pda.grid[:, cols]
    old = np.unique(sub[sub != STAR])
    remap = np.zeros(pda.S + 1, dtype=np.int64)
    remap[old] = np.arange(1, old.size + 1)
    return Pda(remap[sub], Z=pda.Z, S=int(old.size))


@dataclass(frozen=True)
class PdaStats:
    """Exact-rational performance figures read off a PDA."""

    K: int
    F: int
    Z: int
    S: int
    memory_ratio: Fraction
    load: Fraction
    gain: Fraction | None
    regular_g: int | None


def pda_stats(pda: Pda) -> PdaStats:
    """Memory ratio Z/F, load S/F, gain K(1-Z/F)/(S/F), and g-regularity.

    All ratios are exact ``Fraction`` values; gain is None for the
    degenerate all-star array (S = 0).
    """
    K, F, Z, S = pda.params()
    memory = Fraction(Z, F)
    load = Fraction(S, F)
    gain = Fraction(K * (F - Z), S) if S else None
    regular: int | None = None
    if S:
        _, counts = np.unique(pda.grid[pda.grid != STAR], return_counts=True)
        if counts.size == S and counts.min() == counts.max():
            regular = int(counts[0])
    return PdaStats(K, F, Z, S, memory, load, gain, regular)
