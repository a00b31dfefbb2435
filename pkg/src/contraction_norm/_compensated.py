"""Double-double (compensated) complex matrix products.

Used where a product is sandwiched between ``D_t`` and ``D_t^{-1}``: the
scaling amplifies ordinary rounding errors by up to ``t^(n-1)``, so those
products are formed with error-free transformations and only rounded at the
end. A double-double value is a pair ``(hi, lo)`` of complex arrays.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _real_dd_matmul(terms, shape):
    """Sum of real double-double products ``sum(sign * A @ B)``.

    ``terms`` is a list of ``(sign, (A_hi, A_lo), (B_hi, B_lo))`` with 2-d real
    operands; the ``lo`` parts enter only through first-order corrections.
    """
    s = np.zeros(shape)
    c = np.zeros(shape)
    inner = terms[0][1][0].shape[1]
    for k in range(inner):
        for sign, (ah, al), (bh, bl) in terms:
            a = ah[:, k : k + 1]
            b = bh[k : k + 1, :]
            p, e = _two_prod(a, b)
            e = e + a * bl[k : k + 1, :] + al[:, k : k + 1] * b
            if sign < 0:
                p, e = -p, -e
            s, e2 = _two_sum(s, p)
            c = c + (e + e2)
    return _two_sum(s, c)


def as_dd(X):
    X = np.asarray(X, dtype=np.complex128)
    return X, np.zeros_like(X)


def dd_matmul(X, Y):
    """Complex double-double product of two double-double operands.

    1-d right operands are treated as column vectors and returned 1-d.
    """
    (xh, xl), (yh, yl) = X, Y
    vec = yh.ndim == 1
    if vec:
        yh, yl = yh[:, None], yl[:, None]
    xr = (xh.real, xl.real)
    xi = (xh.imag, xl.imag)
    yr = (yh.real, yl.real)
    yi = (yh.imag, yl.imag)
    shape = (xh.shape[0], yh.shape[1])
    re_hi, re_lo = _real_dd_matmul([(1, xr, yr), (-1, xi, yi)], shape)
    im_hi, im_lo = _real_dd_matmul([(1, xr, yi), (1, xi, yr)], shape)
    hi = re_hi + 1j * im_hi
    lo = re_lo + 1j * im_lo
    if vec:
        hi, lo = hi[:, 0], lo[:, 0]
    return hi, lo


def dd_sub(X, Y):
    (xh, xl), (yh, yl) = X, Y
    sr, er = _two_sum(xh.real, -yh.real)
    si, ei = _two_sum(xh.imag, -yh.imag)
    lo = (er + xl.real - yl.real) + 1j * (ei + xl.imag - yl.imag)
    return sr + 1j * si, lo


def dd_value(X):
    """Round a double-double value to the nearest double."""
    hi, lo = X
    return hi + lo


def unitary_inverse(U):
    """Inverse of a nearly unitary ``U`` as a double-double pair.

    One Newton-Schulz correction of ``U*``: with ``U U* = I + F`` the result
    ``U*(I - F)`` is the exact inverse up to ``O(|F|^2)``.
    """
    U = np.asarray(U, dtype=np.complex128)
    Uh = U.conj().T
    G = dd_matmul(as_dd(U), as_dd(Uh))
    R = dd_value(dd_sub(as_dd(np.eye(U.shape[0], dtype=np.complex128)), G))
    return Uh, Uh @ R
