"""Compiled fibre test used by the census.

Every array is prepared by :mod:`conicfib.census`; coordinates are
indices into ``vals``.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _h2(al, u, be, w):
    """Hilbert symbol at 2 of 2^al*u and 2^be*w (u, w odd residues mod 8)."""
    e = 0
    if u % 4 == 3 and w % 4 == 3:
        e += 1
    if al & 1 and (w == 3 or w == 5):
        e += 1
    if be & 1 and (u == 3 or u == 5):
        e += 1
    return e & 1


@njit(cache=True, nogil=True)
def fibre_ok(idx, n, m, vals, v2, odd8, neg, pf_ptr, pf_p, pf_par, pf_chi,
             qoff, chitab, gtab, cm, side, chis):
    g = 0
    for k in range(n):
        g = _gcd(g, abs(vals[idx[k]]))
    if g != 1:
        return False
    if side == 1:
        hit = False
        for k in range(n):
            if vals[idx[k]] % 8 == 1:
                hit = True
        if not hit:
            return False
    # real place and 2
    for c in range(m):
        sg0 = 0
        vv0 = 0
        uu0 = 1
        sg1 = 0
        vv1 = 0
        uu1 = 1
        sg2 = 0
        vv2 = 0
        uu2 = 1
        for slot in range(3):
            mono = cm[c, slot]
            s = mono & 1
            v = 0
            u = 1
            for k in range(n):
                if (mono >> (k + 1)) & 1:
                    j = idx[k]
                    s += neg[j]
                    v += v2[j]
                    u = (u * odd8[j]) % 8
            s &= 1
            if s:
                u = (8 - u) % 8
            if slot == 0:
                sg0, vv0, uu0 = s, v, u
            elif slot == 1:
                sg1, vv1, uu1 = s, v, u
            else:
                sg2, vv2, uu2 = s, v, u
        if sg0 == sg1 and sg1 == sg2:
            return False
        # (-AC, -BC)_2
        a_u = (8 - (uu0 * uu2) % 8) % 8
        b_u = (8 - (uu1 * uu2) % 8) % 8
        if _h2(vv0 + vv2, a_u, vv1 + vv2, b_u):
            return False
    # odd primes
    for k in range(n):
        j = idx[k]
        for q in range(pf_ptr[j], pf_ptr[j + 1]):
            p = pf_p[q]
            seen = False
            for k2 in range(k):
                if vals[idx[k2]] % p == 0:
                    seen = True
                    break
            if seen:
                continue
            S = 0
            chis[0] = 1 if p % 4 == 1 else -1
            for k2 in range(n):
                j2 = idx[k2]
                x = vals[j2]
                if x % p == 0:
                    for q2 in range(pf_ptr[j2], pf_ptr[j2 + 1]):
                        if pf_p[q2] == p:
                            S |= pf_par[q2] << k2
                            chis[k2 + 1] = pf_chi[q2]
                            break
                else:
                    chis[k2 + 1] = chitab[qoff[p] + x % p]
            if S == 0:
                continue
            for c in range(m):
                gm = gtab[c, S]
                prod = 1
                b = 0
                while gm:
                    if gm & 1:
                        prod *= chis[b]
                    gm >>= 1
                    b += 1
                if prod < 0:
                    return False
    return True


@njit(cache=True, nogil=True)
def stratum_key(idx, n, vals, v2, odd8, neg):
    key = 0
    for k in range(n):
        j = idx[k]
        u = odd8[j]
        if neg[j]:
            u = (8 - u) % 8
        cell = neg[j] | ((v2[j] & 1) << 1) | (((u - 1) // 2) << 2)
        key |= cell << (4 * k)
    return key


@njit(cache=True, nogil=True)
def count_block(lo, hi, n, m, vals, v2, odd8, neg, pf_ptr, pf_p, pf_par, pf_chi,
                qoff, chitab, gtab, cm, side, hist, stratify):
    nv = len(vals)
    idx = np.zeros(n, np.int64)
    chis = np.zeros(n + 1, np.int64)
    total = 0
    for i0 in range(lo, hi):
        for k in range(n):
            idx[k] = 0
        idx[0] = i0
        while True:
            if fibre_ok(idx, n, m, vals, v2, odd8, neg, pf_ptr, pf_p, pf_par, pf_chi,
                        qoff, chitab, gtab, cm, side, chis):
                total += 1
                if stratify:
                    hist[stratum_key(idx, n, vals, v2, odd8, neg)] += 1
            k = n - 1
            while k >= 1:
                idx[k] += 1
                if idx[k] < nv:
                    break
                idx[k] = 0
                k -= 1
            if k <= 0:
                break
    return total


@njit(cache=True, nogil=True)
def count_points(points, n, m, vals, v2, odd8, neg, pf_ptr, pf_p, pf_par, pf_chi,
                 qoff, chitab, gtab, cm, side, hist, stratify):
    chis = np.zeros(n + 1, np.int64)
    total = 0
    for r in range(points.shape[0]):
        idx = points[r]
        if fibre_ok(idx, n, m, vals, v2, odd8, neg, pf_ptr, pf_p, pf_par, pf_chi,
                    qoff, chitab, gtab, cm, side, chis):
            total += 1
            if stratify:
                hist[stratum_key(idx, n, vals, v2, odd8, neg)] += 1
    return total
