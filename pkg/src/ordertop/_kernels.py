"""Hot inner loops, JIT-compiled with a pure-Python fallback.

Two enumeration loops dominate the profile of this package: the
lexicographic closed-set enumeration behind the completion builder, and
the exhaustive directed-subset scan behind the gallery certificates.
Both are implemented twice:

* ``*_jit`` — numba ``@njit`` kernels over ``uint64`` bit masks
  (posets up to 64 elements), compiled lazily and cached on disk;
* ``*_py``  — reference implementations over plain Python ints, valid
  for any poset size.

The public entry points (:func:`enumerate_cut_masks`,
:func:`directed_subset_scan`) dispatch to the JIT path when it is
available and the poset fits in one machine word.  Setting the
environment variable ``ORDERTOP_NO_NUMBA=1`` forces the fallback; the
test-suite asserts both paths produce identical output and
``benchmarks/bench_kernels.py`` times them against each other.

``ORDERTOP_THREADS`` (optional) caps the numba thread pool.  The
kernels here are single-threaded, so the cap is a safety valve for
embedding environments rather than a tuning knob.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

__all__ = [
    "USING_NUMBA",
    "enumerate_cut_masks",
    "enumerate_cut_masks_py",
    "directed_subset_scan",
    "directed_subset_scan_py",
]


def _fallback_requested() -> bool:
    flag = os.environ.get("ORDERTOP_NO_NUMBA", "").strip().lower()
    return flag not in ("", "0", "false", "no")


USING_NUMBA = False
if not _fallback_requested():
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USING_NUMBA = False

if USING_NUMBA:
    threads = os.environ.get("ORDERTOP_THREADS", "").strip()
    if threads.isdigit() and int(threads) > 0:
        import numba

        numba.set_num_threads(max(1, min(int(threads), numba.get_num_threads())))


# ---------------------------------------------------------------------------
# closed-set enumeration (NextClosure over the cut closure A -> (A^+)^-)
# ---------------------------------------------------------------------------

def enumerate_cut_masks_py(
    up: Sequence[int], down: Sequence[int], n: int, limit: int
) -> list[int]:
    """Enumerate all cuts of a finite poset as bit masks.

    ``up[i]``/``down[i]`` are the upper/lower cone masks of element ``i``.
    A cut is a fixed point of ``A -> lower(upper(A))``.  Cuts are produced
    in ascending order of their mask value (bit ``i`` = element ``i``),
    i.e. lexicographic order of the bit representation, via the canonical
    lexicographic next-closure step: for the first index ``j`` outside the
    current cut (scanning ``j = 0, 1, ...``), close
    ``(A ∩ {bits > j}) ∪ {j}`` and accept it when no bit above ``j`` was
    added.

    Raises ``RuntimeError`` when more than ``limit`` cuts are produced
    (callers translate this into a package error).
    """
    full = (1 << n) - 1

    def closure(m: int) -> int:
        u = full
        mm = m
        while mm:
            b = mm & -mm
            u &= up[b.bit_length() - 1]
            mm ^= b
        c = full
        uu = u
        while uu:
            b = uu & -uu
            c &= down[b.bit_length() - 1]
            uu ^= b
        return c

    cur = closure(0)
    cuts = [cur]
    while True:
        a = cur
        nxt = -1
        for j in range(n):
            bit = 1 << j
            if a & bit:
                a &= ~bit
            else:
                b = closure(a | bit)
                if (b & ~a) < (bit << 1):
                    nxt = b
                    break
        if nxt < 0:
            break
        cuts.append(nxt)
        cur = nxt
        if len(cuts) > limit:
            raise RuntimeError("cut enumeration exceeded limit")
    return cuts


def _cuts_jit_body(up, down, n, limit):  # pragma: no cover - exercised via wrapper
    full = np.uint64(0)
    one = np.uint64(1)
    for j in range(n):
        full |= one << np.uint64(j)

    cap = 256
    out = np.zeros(cap, dtype=np.uint64)

    # closure of the empty set
    u = full
    c = full
    for j in range(n):
        if (u >> np.uint64(j)) & one:
            c &= down[j]
    cur = c
    out[0] = cur
    count = 1

    while True:
        a = cur
        nxt = np.uint64(0)
        found = False
        for j in range(n):
            bit = one << np.uint64(j)
            if a & bit:
                a &= ~bit
            else:
                m = a | bit
                u = full
                for i in range(n):
                    if (m >> np.uint64(i)) & one:
                        u &= up[i]
                b = full
                for i in range(n):
                    if (u >> np.uint64(i)) & one:
                        b &= down[i]
                added = b & ~a
                if added < (bit << one):
                    nxt = b
                    found = True
                    break
        if not found:
            break
        if count >= cap:
            cap *= 2
            grown = np.zeros(cap, dtype=np.uint64)
            grown[:count] = out[:count]
            out = grown
        out[count] = nxt
        count += 1
        cur = nxt
        if count > limit:
            return out[:0]  # sentinel: overflow
    return out[:count]


if USING_NUMBA:
    _cuts_jit = _njit(cache=True)(_cuts_jit_body)
else:
    _cuts_jit = None


def enumerate_cut_masks(
    up: Sequence[int], down: Sequence[int], n: int, limit: int = 1 << 21
) -> list[int]:
    """Dispatching wrapper around the two cut-enumeration implementations."""
    if _cuts_jit is not None and n <= 64:
        res = _cuts_jit(
            np.asarray(up, dtype=np.uint64),
            np.asarray(down, dtype=np.uint64),
            n,
            limit,
        )
        if len(res) == 0 and n >= 0:
            # kernel signalled overflow (the enumeration always yields >= 1 cut)
            raise RuntimeError("cut enumeration exceeded limit")
        return [int(x) for x in res]
    return enumerate_cut_masks_py(up, down, n, limit)


# ---------------------------------------------------------------------------
# exhaustive directed-subset scan
# ---------------------------------------------------------------------------

def directed_subset_scan_py(
    up: Sequence[int], down: Sequence[int], n: int, top: int
) -> tuple[int, int, int, int, int]:
    """Scan every nonempty subset of an n-element poset (n <= ~22).

    Returns ``(n_directed, n_directed_without_top, best_mask, best_sup,
    violation_mask)`` where

    * ``n_directed`` counts directed subsets,
    * ``n_directed_without_top`` counts those avoiding element ``top``,
    * ``best_mask`` is the largest directed subset avoiding ``top``
      (ties broken by smallest mask) and ``best_sup`` its sup's index
      (or -1 when the sup does not exist),
    * ``violation_mask`` is the first directed subset avoiding ``top``
      whose sup *is* ``top`` (0 when none exists — the certified fact).
    """
    full = (1 << n) - 1
    top_bit = 1 << top
    n_directed = 0
    n_no_top = 0
    best_mask = 0
    best_size = -1
    best_sup = -1
    violation = 0
    for m in range(1, full + 1):
        # directedness: every pair has an upper bound inside the subset
        members = []
        mm = m
        while mm:
            b = mm & -mm
            members.append(b.bit_length() - 1)
            mm ^= b
        ok = True
        for ii in range(len(members)):
            ui = up[members[ii]]
            for jj in range(ii, len(members)):
                if ui & up[members[jj]] & m == 0:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        n_directed += 1
        if m & top_bit:
            continue
        n_no_top += 1
        ub = full
        for i in members:
            ub &= up[i]
        sup = -1
        uu = ub
        while uu:
            b = uu & -uu
            u = b.bit_length() - 1
            if up[u] & ub == ub:
                sup = u
                break
            uu ^= b
        size = len(members)
        if size > best_size:
            best_size = size
            best_mask = m
            best_sup = sup
        if sup == top and violation == 0:
            violation = m
    return n_directed, n_no_top, best_mask, best_sup, violation


def _scan_jit_body(up, down, n, top):  # pragma: no cover - exercised via wrapper
    one = np.uint64(1)
    full = np.uint64(0)
    for j in range(n):
        full |= one << np.uint64(j)
    top_bit = one << np.uint64(top)

    n_directed = 0
    n_no_top = 0
    best_mask = np.uint64(0)
    best_size = -1
    best_sup = -1
    violation = np.uint64(0)

    total = 1 << n
    members = np.empty(n, dtype=np.int64)
    for m_int in range(1, total):
        m = np.uint64(m_int)
        cnt = 0
        for j in range(n):
            if (m >> np.uint64(j)) & one:
                members[cnt] = j
                cnt += 1
        ok = True
        for ii in range(cnt):
            ui = up[members[ii]]
            for jj in range(ii, cnt):
                if ui & up[members[jj]] & m == np.uint64(0):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        n_directed += 1
        if m & top_bit:
            continue
        n_no_top += 1
        ub = full
        for ii in range(cnt):
            ub &= up[members[ii]]
        sup = -1
        for j in range(n):
            if (ub >> np.uint64(j)) & one:
                if up[j] & ub == ub:
                    sup = j
                    break
        if cnt > best_size:
            best_size = cnt
            best_mask = m
            best_sup = sup
        if sup == top and violation == np.uint64(0):
            violation = m
    return (
        np.int64(n_directed),
        np.int64(n_no_top),
        np.int64(best_mask),
        np.int64(best_sup),
        np.int64(violation),
    )


if USING_NUMBA:
    _scan_jit = _njit(cache=True)(_scan_jit_body)
else:
    _scan_jit = None


def directed_subset_scan(
    up: Sequence[int], down: Sequence[int], n: int, top: int
) -> tuple[int, int, int, int, int]:
    """Dispatching wrapper around the two directed-scan implementations."""
    if _scan_jit is not None and n <= 62:
        r = _scan_jit(
            np.asarray(up, dtype=np.uint64),
            np.asarray(down, dtype=np.uint64),
            n,
            top,
        )
        return int(r[0]), int(r[1]), int(r[2]), int(r[3]), int(r[4])
    return directed_subset_scan_py(up, down, n, top)
