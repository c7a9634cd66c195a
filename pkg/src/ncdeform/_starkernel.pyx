# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twisted-convolution kernels: machine-integer twin of _starkernel_py.

Same packed interface as the pure-Python module.  The exact kernel assumes the
packer has certified that every intermediate fits in signed 64-bit integers;
the dispatcher falls back to the big-integer reference otherwise.
"""
from libc.math cimport cos, sin

cdef double TWO_PI = 6.283185307179586476925286766559


def star_exact(Py_ssize_t rank, mods,
               Py_ssize_t na, acoords, aoff, aphase, are, aim,
               Py_ssize_t nb, bcoords, boff, bphase, bre, bim,
               theta_scaled, long long D, bextra=None):
    cdef long long[::1] ac = acoords
    cdef long long[::1] bc = bcoords
    cdef long long[::1] aph = aphase
    cdef long long[::1] bph = bphase
    cdef long long[::1] ar = are
    cdef long long[::1] ai = aim
    cdef long long[::1] br = bre
    cdef long long[::1] bi = bim
    cdef long long[::1] ao = aoff
    cdef long long[::1] bo = boff
    cdef long long[::1] md = mods
    cdef long long[::1] th = theta_scaled      # flat rank*rank
    cdef long long[::1] bx
    cdef bint has_extra = bextra is not None
    if has_extra:
        bx = bextra

    cdef Py_ssize_t i, j, k, l, ta, tb, abase, bbase
    cdef long long c, ph, v, m, p, pa, ra, ia, rb, ib, re, im
    cdef long long row[64]
    if rank > 64:
        raise ValueError("rank too large for the compiled kernel")

    out = {}
    cdef dict bucket
    cdef list cur
    for i in range(na):
        abase = i * rank
        for l in range(rank):
            row[l] = 0
        for k in range(rank):
            c = ac[abase + k]
            if c != 0:
                for l in range(rank):
                    row[l] += c * th[k * rank + l]
        for j in range(nb):
            bbase = j * rank
            ph = 0
            for l in range(rank):
                ph += row[l] * bc[bbase + l]
            ph = -ph
            if has_extra:
                ph += bx[j]
            ph = ph % D
            if ph < 0:
                ph += D
            key_list = []
            for l in range(rank):
                v = ac[abase + l] + bc[bbase + l]
                m = md[l]
                if m != 0:
                    v = v % m
                    if v < 0:
                        v += m
                key_list.append(v)
            key = tuple(key_list)
            bucket = <dict>out.get(key)
            if bucket is None:
                bucket = {}
                out[key] = bucket
            for ta in range(ao[i], ao[i + 1]):
                pa = aph[ta] + ph
                ra = ar[ta]
                ia = ai[ta]
                for tb in range(bo[j], bo[j + 1]):
                    p = (pa + bph[tb]) % D
                    rb = br[tb]
                    ib = bi[tb]
                    re = ra * rb - ia * ib
                    im = ra * ib + ia * rb
                    cur = <list>bucket.get(p)
                    if cur is None:
                        bucket[p] = [re, im]
                    else:
                        cur[0] = <object>cur[0] + re
                        cur[1] = <object>cur[1] + im
    return out


def star_real(Py_ssize_t rank, mods,
              Py_ssize_t na, acoords, acoef,
              Py_ssize_t nb, bcoords, bcoef,
              theta, bextra=None):
    cdef long long[::1] ac = acoords
    cdef long long[::1] bc = bcoords
    cdef long long[::1] md = mods
    cdef double[::1] th = theta                # flat rank*rank
    cdef double complex[::1] ca = acoef
    cdef double complex[::1] cb = bcoef
    cdef double[::1] bx
    cdef bint has_extra = bextra is not None
    if has_extra:
        bx = bextra

    cdef Py_ssize_t i, j, k, l, abase, bbase
    cdef long long c, v, m
    cdef double ph
    cdef double complex w
    cdef double row[64]
    if rank > 64:
        raise ValueError("rank too large for the compiled kernel")

    out = {}
    for i in range(na):
        abase = i * rank
        for l in range(rank):
            row[l] = 0.0
        for k in range(rank):
            c = ac[abase + k]
            if c != 0:
                for l in range(rank):
                    row[l] += c * th[k * rank + l]
        for j in range(nb):
            bbase = j * rank
            ph = 0.0
            for l in range(rank):
                ph += row[l] * bc[bbase + l]
            ph = -ph
            if has_extra:
                ph += bx[j]
            key_list = []
            for l in range(rank):
                v = ac[abase + l] + bc[bbase + l]
                m = md[l]
                if m != 0:
                    v = v % m
                    if v < 0:
                        v += m
                key_list.append(v)
            key = tuple(key_list)
            w = ca[i] * cb[j] * (cos(TWO_PI * ph) + 1j * sin(TWO_PI * ph))
            cur = out.get(key)
            if cur is None:
                out[key] = w
            else:
                out[key] = <double complex>cur + w
    return out
