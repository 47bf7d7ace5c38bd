"""Dense integer kernels behind the series arithmetic.

Two interchangeable backends compute the same exact results:

* ``numba``: ``@njit`` loops over ``int64`` arrays.  Every add and multiply is
  range-checked; on a would-be overflow the kernel reports failure and the
  call is replayed on the numpy path.
* ``numpy``: vectorised numpy over ``object`` arrays of Python ints.

The backend is chosen from the ``LOCPROJ_NUMBA`` environment variable at
import time (``0`` forces numpy) and can be switched with :func:`use_backend`.
All public functions take and return plain Python ``list``s of ints.
"""

import contextlib
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

# |value| <= 2**61 keeps the sum of any two stored values inside int64.
_LIMIT = 2**61
_FLIMIT = float(2**60)


def _initial_backend():
    flag = os.environ.get("LOCPROJ_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or not HAVE_NUMBA:
        return "numpy"
    return "numba"


BACKEND = _initial_backend()


def backend():
    return BACKEND


@contextlib.contextmanager
def use_backend(name):
    """Temporarily select ``"numba"`` or ``"numpy"``."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    old = BACKEND
    BACKEND = name
    try:
        yield
    finally:
        BACKEND = old


def _as_int64(seq):
    """int64 array of ``seq`` or None when some entry is out of range."""
    for v in seq:
        if v > _LIMIT or v < -_LIMIT:
            return None
    return np.array(seq, dtype=np.int64)


def _as_object(seq):
    arr = np.empty(len(seq), dtype=object)
    arr[:] = [int(v) for v in seq]
    return arr


# ---------------------------------------------------------------------------
# numba kernels

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_conv(a, b, n):
        out = np.zeros(n, dtype=np.int64)
        for i in range(min(a.shape[0], n)):
            x = a[i]
            if x == 0:
                continue
            fx = abs(float(x))
            for k in range(min(b.shape[0], n - i)):
                y = b[k]
                if y == 0:
                    continue
                if fx * abs(float(y)) > _FLIMIT:
                    return out, False
                v = out[i + k] + x * y
                if v > _LIMIT or v < -_LIMIT:
                    return out, False
                out[i + k] = v
        return out, True

    @njit(cache=True)
    def _nb_div_one_minus(a, g, c):
        out = a.copy()
        n = out.shape[0]
        for _ in range(c):
            for i in range(g, n):
                v = out[i] + out[i - g]
                if v > _LIMIT or v < -_LIMIT:
                    return out, False
                out[i] = v
        return out, True

    @njit(cache=True)
    def _nb_mul_one_minus(a, g, c):
        out = a.copy()
        n = out.shape[0]
        for _ in range(c):
            for i in range(n - 1, g - 1, -1):
                v = out[i] - out[i - g]
                if v > _LIMIT or v < -_LIMIT:
                    return out, False
                out[i] = v
        return out, True

    @njit(cache=True)
    def _nb_lambda_rows(grades, mults, J, lo, width):
        arr = np.zeros((J + 1, width), dtype=np.int64)
        if -lo < 0 or -lo >= width:
            return arr, True
        arr[0, -lo] = 1
        for f in range(grades.shape[0]):
            g = grades[f]
            m = mults[f]
            if m > 0:
                for _ in range(m):
                    for j in range(J, 0, -1):
                        for col in range(width - 1, -1, -1):
                            src = col - g
                            if src < 0 or src >= width:
                                continue
                            y = arr[j - 1, src]
                            if y == 0:
                                continue
                            v = arr[j, col] - y
                            if v > _LIMIT or v < -_LIMIT:
                                return arr, False
                            arr[j, col] = v
            else:
                for _ in range(-m):
                    for j in range(1, J + 1):
                        for col in range(width):
                            src = col - g
                            if src < 0 or src >= width:
                                continue
                            y = arr[j - 1, src]
                            if y == 0:
                                continue
                            v = arr[j, col] + y
                            if v > _LIMIT or v < -_LIMIT:
                                return arr, False
                            arr[j, col] = v
        return arr, True

    @njit(cache=True)
    def _nb_lambda_rowsum(grades, mults, J, lo, width):
        arr, ok = _nb_lambda_rows(grades, mults, J, lo, width)
        out = np.zeros(width, dtype=np.int64)
        if not ok:
            return out, False
        for j in range(J + 1):
            for col in range(width):
                v = out[col] + arr[j, col]
                if v > _LIMIT or v < -_LIMIT:
                    return out, False
                out[col] = v
        return out, True

    @njit(cache=True)
    def _nb_divide_factors(a, gs, cs):
        out = a.copy()
        n = out.shape[0]
        for f in range(gs.shape[0]):
            g = gs[f]
            for _ in range(cs[f]):
                for i in range(g, n):
                    v = out[i] + out[i - g]
                    if v > _LIMIT or v < -_LIMIT:
                        return out, False
                    out[i] = v
        return out, True


# ---------------------------------------------------------------------------
# numpy kernels (object dtype, exact)


def _np_conv(a, b, n):
    out = np.zeros(n, dtype=object)
    out[:] = 0
    if len(a) == 0 or len(b) == 0 or n <= 0:
        return out
    full = np.convolve(a[:n], b[:n])
    m = min(n, len(full))
    out[:m] = full[:m]
    return out


def _np_div_one_minus(a, g, c):
    out = a.copy()
    n = len(out)
    for _ in range(c):
        for start in range(g, n, g):
            stop = min(start + g, n)
            out[start:stop] += out[start - g:stop - g]
    return out


def _np_mul_one_minus(a, g, c):
    out = a.copy()
    for _ in range(c):
        if g < len(out):
            out[g:] = out[g:] - out[:-g]
    return out


def _shift_slices(g, width):
    if g >= 0:
        return slice(g, width), slice(0, width - g)
    return slice(0, width + g), slice(-g, width)


def _np_lambda_rows(grades, mults, J, lo, width):
    arr = np.zeros((J + 1, width), dtype=object)
    arr[:] = 0
    if not 0 <= -lo < width:
        return arr
    arr[0, -lo] = 1
    for g, m in zip(grades, mults):
        if abs(g) >= width:
            continue
        dst, src = _shift_slices(g, width)
        if m > 0:
            for _ in range(m):
                arr[1:, dst] -= arr[:-1, src]
        else:
            for _ in range(-m):
                for j in range(1, J + 1):
                    arr[j, dst] += arr[j - 1, src]
    return arr


def _np_divide_factors(a, gs, cs):
    out = a
    for g, c in zip(gs, cs):
        out = _np_div_one_minus(out, g, c)
    return out


# ---------------------------------------------------------------------------
# public wrappers


def conv_trunc(a, b, n):
    """First ``n`` coefficients of the product of two dense series."""
    if n <= 0:
        return []
    if BACKEND == "numba":
        ia, ib = _as_int64(a), _as_int64(b)
        if ia is not None and ib is not None and len(ia) and len(ib):
            out, ok = _nb_conv(ia, ib, n)
            if ok:
                return out.tolist()
    return _np_conv(_as_object(a), _as_object(b), n).tolist()


def div_one_minus(a, g, c=1):
    """``a / (1 - t**g)**c`` truncated to ``len(a)``; requires ``g > 0``."""
    if g <= 0:
        raise ValueError("shift must be positive")
    if c == 0 or not len(a):
        return list(a)
    if BACKEND == "numba":
        ia = _as_int64(a)
        if ia is not None:
            out, ok = _nb_div_one_minus(ia, g, c)
            if ok:
                return out.tolist()
    return _np_div_one_minus(_as_object(a), g, c).tolist()


def mul_one_minus(a, g, c=1):
    """``a * (1 - t**g)**c`` truncated to ``len(a)``; requires ``g > 0``."""
    if g <= 0:
        raise ValueError("shift must be positive")
    if c == 0 or not len(a):
        return list(a)
    if BACKEND == "numba":
        ia = _as_int64(a)
        if ia is not None:
            out, ok = _nb_mul_one_minus(ia, g, c)
            if ok:
                return out.tolist()
    return _np_mul_one_minus(_as_object(a), g, c).tolist()


def _split(factors):
    arr = np.asarray(factors, dtype=np.int64).reshape(-1, 2)
    return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


def lambda_rows(factors, J, lo, width):
    """Rows ``j = 0..J`` of ``prod (1 - w t**g)**m`` over degrees ``lo..lo+width-1``.

    ``factors`` is a sequence of ``(g, m)`` with nonzero ``m`` (or an
    ``(r, 2)`` integer array).  Entries above
    the window are discarded as they arise, so the caller must order factors
    with nonpositive ``g`` first, choose ``lo`` no larger than the true
    minimum degree and keep degree 0 inside the window; under those
    conditions every returned entry is exact.
    """
    if width <= 0:
        return [[] for _ in range(J + 1)]
    grades, mults = _split(factors)
    if BACKEND == "numba":
        arr, ok = _nb_lambda_rows(grades, mults, J, lo, width)
        if ok:
            return arr.tolist()
    return _np_lambda_rows(grades.tolist(), mults.tolist(), J, lo, width).tolist()


def lambda_rowsum(factors, J, lo, width):
    """Sum of the rows returned by :func:`lambda_rows` (the ``w = 1`` partial sum)."""
    if width <= 0:
        return []
    grades, mults = _split(factors)
    if BACKEND == "numba":
        out, ok = _nb_lambda_rowsum(grades, mults, J, lo, width)
        if ok:
            return out.tolist()
    return _np_lambda_rows(grades.tolist(), mults.tolist(), J, lo, width).sum(axis=0).tolist()


def divide_factors(a, factors):
    """``a / prod (1 - t**g)**c`` truncated to ``len(a)``; every ``g`` positive."""
    gs, cs = _split(factors)
    if np.any(gs <= 0):
        raise ValueError("shifts must be positive")
    keep = (cs != 0) & (gs < len(a))
    gs, cs = gs[keep], cs[keep]
    if not len(gs) or not len(a):
        return list(a)
    if BACKEND == "numba":
        ia = _as_int64(a)
        if ia is not None:
            out, ok = _nb_divide_factors(ia, gs, cs)
            if ok:
                return out.tolist()
    return _np_divide_factors(_as_object(a), gs.tolist(), cs.tolist()).tolist()
