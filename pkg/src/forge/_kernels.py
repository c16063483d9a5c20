"""Compiled inner loops for class-number counting and indefinite cycle partition.

Everything here works on int64, so the callers guarantee |D| < 2**62 and that
every prime power touched is below 2**31 (products of two residues then fit).
"""

import math

import numba as nb
import numpy as np

MAX_FACTORS = 16
MAX_ROOTS = 1 << 12


@nb.njit(cache=True)
def spf_sieve(n):
    spf = np.zeros(n + 1, np.int32)
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= n:
                for j in range(i * i, n + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
    return spf


@nb.njit(cache=True)
def _powmod(a, e, m):
    r = 1
    a %= m
    while e > 0:
        if e & 1:
            r = (r * a) % m
        a = (a * a) % m
        e >>= 1
    return r


@nb.njit(cache=True)
def _sqrt_mod_p(n, p):
    # Tonelli-Shanks; n is a nonzero quadratic residue modulo the odd prime p.
    n %= p
    if p % 4 == 3:
        return _powmod(n, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    mm = s
    c = _powmod(z, q, p)
    t = _powmod(n, q, p)
    r = _powmod(n, (q + 1) // 2, p)
    while t != 1:
        i = 0
        tt = t
        while tt != 1:
            tt = (tt * tt) % p
            i += 1
        b = c
        for _ in range(mm - i - 1):
            b = (b * b) % p
        mm = i
        c = (b * b) % p
        t = (t * c) % p
        r = (r * b) % p
    return r


@nb.njit(cache=True)
def prime_roots(D, spf, n):
    """root[p] for odd primes p <= n: -1 inert, 0 ramified, else a square root of D."""
    root = np.full(n + 1, -1, np.int32)
    for p in range(3, n + 1):
        if spf[p] == p:
            dm = D % p
            if dm == 0:
                root[p] = 0
            elif _powmod(dm, (p - 1) // 2, p) == 1:
                root[p] = _sqrt_mod_p(dm, p)
    return root


@nb.njit(cache=True)
def _inv(a, m):
    # a invertible modulo m
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % m


@nb.njit(cache=True)
def _two_part(D, e0, out):
    """Residues b mod 2**(e0+1) with b*b = D mod 2**(e0+2); returns the count."""
    if D % 2 != 0:
        if e0 == 0:
            out[0] = 1
            return 1
        if D % 8 != 1:
            return 0
        k = e0 + 2
        r = 1
        for j in range(3, k):
            if (r * r - D) % (1 << (j + 1)) != 0:
                r += 1 << (j - 1)
        mod = 1 << (e0 + 1)
        out[0] = r % mod
        out[1] = (-r) % mod
        return 2
    if e0 == 0:
        out[0] = 0
        return 1
    if e0 == 1:
        out[0] = 2 if D % 8 == 4 else 0
        return 1
    return 0


@nb.njit(cache=True)
def _n_roots(a, D, spf, root):
    """#{b mod 2a : b^2 = D mod 4a} for a fundamental discriminant D."""
    e0 = 0
    while a % 2 == 0:
        a //= 2
        e0 += 1
    if D % 2 != 0:
        n = 1 if e0 == 0 else (2 if D % 8 == 1 else 0)
    else:
        n = 1 if e0 <= 1 else 0
    if n == 0:
        return 0
    while a > 1:
        p = spf[a]
        k = 0
        while a % p == 0:
            a //= p
            k += 1
        r = root[p]
        if r < 0:
            return 0
        if r == 0:
            if k > 1:
                return 0
        else:
            n *= 2
    return n


@nb.njit(cache=True)
def _roots(a, D, spf, root, out, scratch):
    """Write the residues b mod 2a with b^2 = D mod 4a into out; return the count."""
    e0 = 0
    rest = a
    while rest % 2 == 0:
        rest //= 2
        e0 += 1
    cnt = _two_part(D, e0, out)
    if cnt == 0:
        return 0
    mod = 1 << (e0 + 1)
    while rest > 1:
        p = spf[rest]
        k = 0
        pk = 1
        while rest % p == 0:
            rest //= p
            k += 1
            pk *= p
        r = root[p]
        if r < 0:
            return 0
        nloc = 0
        if r == 0:
            if k > 1:
                return 0
            scratch[0] = 0
            nloc = 1
        else:
            # Hensel lift r from p to p**k
            rk = r
            cur = p
            for _ in range(1, k):
                cur *= p
                fx = (rk * rk - D) % cur
                rk = (rk - fx * _inv(2 * rk, cur)) % cur
            scratch[0] = rk
            scratch[1] = (-rk) % pk
            nloc = 2
        # CRT combine out (mod mod) with scratch (mod pk)
        minv = _inv(mod % pk, pk)
        newcnt = 0
        for i in range(cnt):
            for j in range(nloc):
                t = ((scratch[j] - out[i]) % pk) * minv % pk
                out[cnt * nloc + newcnt] = out[i] + mod * t
                newcnt += 1
        for i in range(newcnt):
            out[i] = out[cnt * nloc + i]
        cnt = newcnt
        mod *= pk
    return cnt


@nb.njit(cache=True, nogil=True)
def count_reduced_definite(D, spf, root):
    """Number of reduced positive definite forms of discriminant D < 0."""
    AD = -D
    a_max = int(math.sqrt(AD / 3.0)) + 2
    while 3 * a_max * a_max > AD:
        a_max -= 1
    out = np.zeros(2 * MAX_ROOTS, np.int64)
    scratch = np.zeros(2, np.int64)
    h = 0
    for a in range(1, a_max + 1):
        if 4 * a * a <= AD:
            h += _n_roots(a, D, spf, root)
            continue
        cnt = _roots(a, D, spf, root, out, scratch)
        for i in range(cnt):
            b = out[i]
            if b > a:
                b -= 2 * a
            c = (b * b - D) // (4 * a)
            if c > a or (c == a and b >= 0):
                h += 1
    return h


@nb.njit(cache=True, nogil=True)
def small_reduced_indefinite(D, spf, root, s):
    """Reduced indefinite forms (a, b, c) of discriminant D > 0 with 0 < a <= s // 2.

    s = isqrt(D). Returns (offsets, bvals): the b values belonging to a are
    bvals[offsets[a - 1]:offsets[a]]. The same b values also give the
    reduced forms with leading coefficient -a, in no particular order. For
    2a < sqrt(D) every square
    root of D mod 4a yields exactly one reduced b.
    """
    amax = s // 2
    offsets = np.zeros(amax + 1, np.int64)
    for a in range(1, amax + 1):
        offsets[a] = offsets[a - 1] + _n_roots(a, D, spf, root)
    bvals = np.empty(offsets[amax], np.int64)
    out = np.zeros(2 * MAX_ROOTS, np.int64)
    scratch = np.zeros(2, np.int64)
    for a in range(1, amax + 1):
        cnt = _roots(a, D, spf, root, out, scratch)
        m2 = 2 * a
        lo = offsets[a - 1]
        for i in range(cnt):
            bvals[lo + i] = s - ((s - out[i]) % m2)
    return offsets, bvals


@nb.njit(cache=True)
def _rho(a, b, D, s):
    c = (b * b - D) // (4 * a)
    b2 = s - ((s + b) % (2 * abs(c)))
    return c, b2


@nb.njit(cache=True)
def _slot(a, b, offsets, bvals):
    # index of the reduced form (|a|, b) in bvals, or -1
    aa = abs(a)
    if aa >= offsets.shape[0]:
        return -1
    for i in range(offsets[aa - 1], offsets[aa]):
        if bvals[i] == b:
            return i
    return -1


@nb.njit(cache=True, nogil=True)
def partition_cycles(D, s, offsets, bvals):
    """Partition the reduced indefinite forms into rho-cycles.

    Every cycle meets the stored set, since consecutive leading coefficients
    satisfy |a c| < D / 4. Returns (cid_pos, cid_neg, min_a, min_b, lengths):
    cycle ids of the stored forms (a, b) and (-a, b), and per cycle the
    lexicographically least reduced form and the number of reduced forms.
    """
    n = bvals.shape[0]
    amax = offsets.shape[0] - 1
    cid_pos = np.full(n, -1, np.int32)
    cid_neg = np.full(n, -1, np.int32)
    min_a = np.empty(2 * n + 1, np.int64)
    min_b = np.empty(2 * n + 1, np.int64)
    lengths = np.empty(2 * n + 1, np.int64)
    ncyc = 0
    for a0 in range(1, amax + 1):
        for i0 in range(offsets[a0 - 1], offsets[a0]):
            for sign in (1, -1):
                if sign == 1 and cid_pos[i0] >= 0:
                    continue
                if sign == -1 and cid_neg[i0] >= 0:
                    continue
                a = sign * a0
                b = bvals[i0]
                ma, mb = a, b
                length = 0
                while True:
                    if abs(a) <= amax:
                        j = _slot(a, b, offsets, bvals)
                        if a > 0:
                            cid_pos[j] = ncyc
                        else:
                            cid_neg[j] = ncyc
                    if a < ma or (a == ma and b < mb):
                        ma, mb = a, b
                    length += 1
                    a, b = _rho(a, b, D, s)
                    if a == sign * a0 and b == bvals[i0]:
                        break
                min_a[ncyc] = ma
                min_b[ncyc] = mb
                lengths[ncyc] = length
                ncyc += 1
    return cid_pos, cid_neg, min_a[:ncyc].copy(), min_b[:ncyc].copy(), lengths[:ncyc].copy()


@nb.njit(cache=True, nogil=True)
def cycle_id(a, b, D, s, offsets, bvals, cid_pos, cid_neg):
    """Cycle id of the reduced form (a, b, .) by walking to the stored set."""
    amax = offsets.shape[0] - 1
    while abs(a) > amax:
        a, b = _rho(a, b, D, s)
    j = _slot(a, b, offsets, bvals)
    if j < 0:
        return -1
    return cid_pos[j] if a > 0 else cid_neg[j]


@nb.njit(cache=True, nogil=True)
def cycle_min(a, b, D, s):
    """Lexicographically least (a, b) on the rho-cycle of the reduced form (a, b, .)."""
    ma, mb = a, b
    a0, b0 = a, b
    while True:
        a, b = _rho(a, b, D, s)
        if a == a0 and b == b0:
            return ma, mb
        if a < ma or (a == ma and b < mb):
            ma, mb = a, b
