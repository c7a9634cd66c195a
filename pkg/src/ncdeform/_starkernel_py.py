"""Pure-Python twisted-convolution kernels over packed integer data.

Both kernels consume the flattened representation produced by the packers in
``twisted_algebra``: support coordinates as flat integer sequences, exact
amplitudes as Gaussian integers over a common denominator, exact phases as
integers over a common denominator D, the cocycle as a flat rank*rank scaled
integer (or float) matrix.  Python's big integers make this reference
implementation exact for arbitrary magnitudes; the compiled twin in
``_starkernel.pyx`` is the same algorithm with machine integers and is only
used when the packer certifies that nothing can overflow.
"""
from __future__ import annotations

import cmath
import math

TWO_PI = 2.0 * math.pi


def star_exact(rank, mods,
               na, acoords, aoff, aphase, are, aim,
               nb, bcoords, boff, bphase, bre, bim,
               theta_scaled, D, bextra=None):
    """Exact twisted convolution.

    Returns {output coords tuple: {phase numerator mod D: [re, im]}} with the
    Gaussian amplitudes taken over the product of the packed denominators.
    The per-pair phase is  -theta(xa, xb) + bextra[j]  (all scaled by D).
    """
    out = {}
    for i in range(na):
        abase = i * rank
        # row vector of the scaled bilinear form at xa
        row = [0] * rank
        for k in range(rank):
            c = acoords[abase + k]
            if c:
                tbase = k * rank
                for l in range(rank):
                    row[l] += c * theta_scaled[tbase + l]
        a_lo, a_hi = aoff[i], aoff[i + 1]
        for j in range(nb):
            bbase = j * rank
            ph = 0
            for l in range(rank):
                ph += row[l] * bcoords[bbase + l]
            ph = -ph
            if bextra is not None:
                ph += bextra[j]
            ph %= D
            key = []
            for l in range(rank):
                v = acoords[abase + l] + bcoords[bbase + l]
                m = mods[l]
                key.append(v % m if m else v)
            key = tuple(key)
            bucket = out.get(key)
            if bucket is None:
                bucket = {}
                out[key] = bucket
            for ta in range(a_lo, a_hi):
                pa = aphase[ta] + ph
                ra = are[ta]
                ia = aim[ta]
                for tb in range(boff[j], boff[j + 1]):
                    p = (pa + bphase[tb]) % D
                    rb = bre[tb]
                    ib = bim[tb]
                    re = ra * rb - ia * ib
                    im = ra * ib + ia * rb
                    cur = bucket.get(p)
                    if cur is None:
                        bucket[p] = [re, im]
                    else:
                        cur[0] += re
                        cur[1] += im
    return out


def star_real(rank, mods,
              na, acoords, acoef,
              nb, bcoords, bcoef,
              theta, bextra=None):
    """Float twisted convolution: one complex coefficient per support index.

    ``theta`` is the flat rank*rank float matrix of the cocycle; the per-pair
    weight is exp(2 pi i (-theta(xa, xb) + bextra[j])).
    Returns {output coords tuple: complex}.
    """
    out = {}
    for i in range(na):
        abase = i * rank
        row = [0.0] * rank
        for k in range(rank):
            c = acoords[abase + k]
            if c:
                tbase = k * rank
                for l in range(rank):
                    row[l] += c * theta[tbase + l]
        ca = acoef[i]
        for j in range(nb):
            bbase = j * rank
            ph = 0.0
            for l in range(rank):
                ph += row[l] * bcoords[bbase + l]
            ph = -ph
            if bextra is not None:
                ph += bextra[j]
            key = []
            for l in range(rank):
                v = acoords[abase + l] + bcoords[bbase + l]
                m = mods[l]
                key.append(v % m if m else v)
            key = tuple(key)
            w = ca * bcoef[j] * cmath.exp(1j * TWO_PI * ph)
            cur = out.get(key)
            out[key] = w if cur is None else cur + w
    return out
