# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernel for the transform integrand.

Same algorithm as `_kernel_py` / `quadrature.adaptive_gk`: a 7/15
Gauss-Kronrod pair with generation-based bisection, specialized to the
integrand G((q(x)-shear(x))/a) * exp(-((x-t)/a^alpha)^2).  The adaptive
loop runs without the GIL so threaded grid builds scale with cores.
"""

from libc.math cimport cos, exp, fabs, pow, sqrt
from libc.stdlib cimport free, malloc

BACKEND_NAME = "compiled"

cdef int KIND_POLYNOMIAL = 0
cdef int KIND_CIRCLE = 1
cdef int KIND_COSINE = 2

cdef int NINIT = 16

cdef double[8] XGK
cdef double[8] WGK
cdef double[4] WG
XGK[0] = 0.991455371120812639207; XGK[1] = 0.949107912342758524526
XGK[2] = 0.864864423359769072789; XGK[3] = 0.741531185599394439864
XGK[4] = 0.586087235467691130294; XGK[5] = 0.405845151377397166907
XGK[6] = 0.207784955007898467601; XGK[7] = 0.0
WGK[0] = 0.022935322010529224964; WGK[1] = 0.063092092629978553291
WGK[2] = 0.104790010322250183840; WGK[3] = 0.140653259715525918745
WGK[4] = 0.169004726639267902827; WGK[5] = 0.190350578064785409913
WGK[6] = 0.204432940075298892414; WGK[7] = 0.209482141084727828013
WG[0] = 0.129484966168869693271; WG[1] = 0.279705391489276667901
WG[2] = 0.381830050505118944950; WG[3] = 0.417959183673469387755

cdef double[15] NODES
cdef double[15] WK
cdef double[15] WGAUSS
cdef int _i
for _i in range(7):
    NODES[_i] = -XGK[_i]
    NODES[14 - _i] = XGK[_i]
    WK[_i] = WGK[_i]
    WK[14 - _i] = WGK[_i]
    WGAUSS[_i] = 0.0
    WGAUSS[14 - _i] = 0.0
NODES[7] = 0.0
WK[7] = WGK[7]
WGAUSS[7] = WG[3]
WGAUSS[1] = WG[0]; WGAUSS[13] = WG[0]
WGAUSS[3] = WG[1]; WGAUSS[11] = WG[1]
WGAUSS[5] = WG[2]; WGAUSS[9] = WG[2]


cdef inline double _integrand(double x, const double* gc, int ng, int kind,
                              const double* par, int npar, double inv_a,
                              double inv_a_alpha, double t,
                              const double* sf, int ns) nogil:
    cdef double q, dx, shear, u, w, pv, v
    cdef int i
    if kind == KIND_POLYNOMIAL:
        q = 0.0
        for i in range(npar - 1, -1, -1):
            q = q * x + par[i]
    elif kind == KIND_CIRCLE:
        w = par[0] * par[0] - x * x
        if w < 0.0:
            w = 0.0
        q = par[1] * sqrt(w)
    else:
        q = par[0] * cos(par[1] * x + par[2])
    dx = x - t
    shear = 0.0
    for i in range(ns - 1, -1, -1):
        shear = shear * dx + sf[i]
    u = (q - shear) * inv_a
    w = u * u
    if w > 745.0:
        return 0.0
    pv = 0.0
    for i in range(ng - 1, -1, -1):
        pv = pv * u + gc[i]
    v = dx * inv_a_alpha
    return pv * exp(-w - v * v)


cdef inline void _gk15(double lo, double hi, const double* gc, int ng, int kind,
                       const double* par, int npar, double inv_a,
                       double inv_a_alpha, double t, const double* sf, int ns,
                       double* out_val, double* out_err) nogil:
    cdef double c = 0.5 * (lo + hi)
    cdef double h = 0.5 * (hi - lo)
    cdef double[15] fv
    cdef double sk = 0.0, sg = 0.0, resasc = 0.0, raw, err, scale
    cdef int i
    for i in range(15):
        fv[i] = _integrand(c + h * NODES[i], gc, ng, kind, par, npar,
                           inv_a, inv_a_alpha, t, sf, ns)
        sk += WK[i] * fv[i]
        sg += WGAUSS[i] * fv[i]
    raw = fabs(sk - sg) * h
    for i in range(15):
        resasc += WK[i] * fabs(fv[i] - 0.5 * sk)
    resasc *= h
    err = raw
    if resasc > 0.0 and raw > 0.0:
        scale = pow(200.0 * raw / resasc, 1.5)
        if scale < 1.0:
            err = resasc * scale
        else:
            err = resasc
    out_val[0] = sk * h
    out_err[0] = err


def term_integral(double[::1] g_coeffs, int kind, double[::1] params,
                  double a, double inv_a_alpha, double t, double[::1] sfact,
                  double lo, double hi, double rel_tol, double abs_tol,
                  int max_subdivisions):
    """Adaptive GK15 integral of the transform integrand over [lo, hi]."""
    if hi <= lo:
        return 0.0, 0.0, True
    cdef int ng = g_coeffs.shape[0]
    cdef int npar = params.shape[0]
    cdef int ns = sfact.shape[0]
    cdef const double* gc = &g_coeffs[0]
    cdef const double* par = &params[0]
    cdef const double* sf = &sfact[0]
    cdef double inv_a = 1.0 / a

    cdef int cap = NINIT + 2 * max_subdivisions + 4
    cdef double* ia = <double*> malloc(4 * cap * sizeof(double))
    cdef double* ib = ia + cap
    cdef double* iv = ib + cap
    cdef double* ie = iv + cap
    cdef unsigned char* flag = <unsigned char*> malloc(cap)
    cdef double* buf = <double*> malloc(4 * cap * sizeof(double))
    if ia == NULL or flag == NULL or buf == NULL:
        free(ia); free(flag); free(buf)
        raise MemoryError()
    cdef double* ba = buf
    cdef double* bb = buf + cap
    cdef double* bv = buf + 2 * cap
    cdef double* be = buf + 3 * cap

    cdef int n = NINIT, m, i, k, splits = 0, nflag
    cdef double step = (hi - lo) / NINIT
    cdef double total, tol, mid
    cdef bint ok = True

    with nogil:
        for i in range(n):
            ia[i] = lo + i * step
            ib[i] = lo + (i + 1) * step if i < n - 1 else hi
            _gk15(ia[i], ib[i], gc, ng, kind, par, npar, inv_a, inv_a_alpha,
                  t, sf, ns, &iv[i], &ie[i])
        while True:
            total = 0.0
            for i in range(n):
                total += iv[i]
            tol = rel_tol * fabs(total)
            if abs_tol > tol:
                tol = abs_tol
            nflag = 0
            for i in range(n):
                if ie[i] > tol:
                    flag[i] = 1
                    nflag += 1
                else:
                    flag[i] = 0
            if nflag == 0:
                break
            if splits + nflag > max_subdivisions or n + nflag > cap:
                ok = False
                break
            splits += nflag
            m = 0
            for i in range(n):
                if flag[i]:
                    mid = 0.5 * (ia[i] + ib[i])
                    _gk15(ia[i], mid, gc, ng, kind, par, npar, inv_a,
                          inv_a_alpha, t, sf, ns, &bv[m], &be[m])
                    ba[m] = ia[i]; bb[m] = mid
                    m += 1
                    _gk15(mid, ib[i], gc, ng, kind, par, npar, inv_a,
                          inv_a_alpha, t, sf, ns, &bv[m], &be[m])
                    ba[m] = mid; bb[m] = ib[i]
                    m += 1
                else:
                    ba[m] = ia[i]; bb[m] = ib[i]
                    bv[m] = iv[i]; be[m] = ie[i]
                    m += 1
            for k in range(m):
                ia[k] = ba[k]; ib[k] = bb[k]
                iv[k] = bv[k]; ie[k] = be[k]
            n = m
        total = 0.0
        for i in range(n):
            total += iv[i]
        tol = 0.0
        for i in range(n):
            tol += ie[i]

    free(ia); free(flag); free(buf)
    return total, tol, bool(ok)
