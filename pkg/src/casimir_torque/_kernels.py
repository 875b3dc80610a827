"""Hot loops: reflection amplitudes, torque integrand and adaptive quadrature.

Everything here is restricted to what numba's nopython mode accepts, so the
same source serves both backends (see ``_backend``).  Mirrors are passed in
flattened form ``(kind, params, table_kappa, table_rx, table_ry)`` as produced
by ``MirrorModel.encode``.

The kappa integral is evaluated after the substitution ``u = exp(-2 kappa L)``:

    int_0^inf F(kappa) dkappa = int_0^1 F(kappa(u)) / (2 L u) du

which maps the exponential tail onto a bounded integrand on ``(0, 1]``.
"""
import numpy as np

from ._backend import jit

STATUS_OK = 0
STATUS_NOT_CONVERGED = 1
STATUS_SINGULAR = 2
STATUS_OUT_OF_RANGE = 3

DENOMINATOR_GUARD = 1e-300

# 21-point Gauss-Kronrod rule (QUADPACK qk21), abscissae in decreasing order;
# every even index except the centre also belongs to the 10-point Gauss rule.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208067017132,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# full 21-node layout on [-1, 1]
NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]


@jit
def axis_amplitude(w0, wp, g, d, slab, kappa):
    """Amplitude of one Lorentzian axis (semi-infinite or slab) at kappa."""
    den = w0 * w0 + kappa * kappa + kappa * g
    if den == 0.0:
        if wp == 0.0:
            return 0.0
        # perfect-conductor limit of an undamped free-carrier response
        if slab and d == 0.0:
            return 0.0
        return -1.0
    x = wp * wp / den
    n = np.sqrt(1.0 + x)
    r01 = -x / ((1.0 + n) * (1.0 + n))
    if not slab:
        return r01
    e = np.exp(-2.0 * n * kappa * d)
    return r01 * (1.0 - e) / (1.0 - r01 * r01 * e)


@jit
def reflect(kind, params, tk, trx, tty, kappa, rx, ry):
    """Fill ``rx``, ``ry`` with the amplitudes at each ``kappa``; return status."""
    n = kappa.shape[0]
    if kind == 0:
        for i in range(n):
            rx[i] = params[0]
            ry[i] = params[1]
        return STATUS_OK
    if kind == 3:
        for i in range(n):
            if kappa[i] < tk[0] or kappa[i] > tk[-1]:
                return STATUS_OUT_OF_RANGE
        rx[:] = np.interp(kappa, tk, trx)
        ry[:] = np.interp(kappa, tk, tty)
        return STATUS_OK
    slab = kind == 2
    d = params[6]
    for i in range(n):
        rx[i] = axis_amplitude(params[0], params[1], params[2], d, slab, kappa[i])
        ry[i] = axis_amplitude(params[3], params[4], params[5], d, slab, kappa[i])
    return STATUS_OK


@jit
def integrand_kappa(kappa, L, s2g, ssq,
                    k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2, out):
    """Torque integrand F(kappa) for an array of kappa; return status."""
    n = kappa.shape[0]
    r1x = np.empty(n)
    r1y = np.empty(n)
    r2x = np.empty(n)
    r2y = np.empty(n)
    st = reflect(k1, p1, tk1, tx1, ty1, kappa, r1x, r1y)
    if st != STATUS_OK:
        return st
    st = reflect(k2, p2, tk2, tx2, ty2, kappa, r2x, r2y)
    if st != STATUS_OK:
        return st
    for i in range(n):
        u = np.exp(-2.0 * kappa[i] * L)
        aniso = (r1x[i] - r1y[i]) * (r2x[i] - r2y[i])
        den = aniso * ssq * u + (1.0 - r1x[i] * r2x[i] * u) * (1.0 - r1y[i] * r2y[i] * u)
        if abs(den) < DENOMINATOR_GUARD:
            return STATUS_SINGULAR
        out[i] = aniso * s2g * u / den
    return STATUS_OK


@jit
def integrand_u(u, L, s2g, ssq,
                k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2, out):
    """``F(kappa(u)) / (2 L u)`` for an array of ``u`` in (0, 1]; return status."""
    n = u.shape[0]
    r1x = np.empty(n)
    r1y = np.empty(n)
    r2x = np.empty(n)
    r2y = np.empty(n)
    kappa = -np.log(u) / (2.0 * L)
    st = reflect(k1, p1, tk1, tx1, ty1, kappa, r1x, r1y)
    if st != STATUS_OK:
        return st
    st = reflect(k2, p2, tk2, tx2, ty2, kappa, r2x, r2y)
    if st != STATUS_OK:
        return st
    for i in range(n):
        aniso = (r1x[i] - r1y[i]) * (r2x[i] - r2y[i])
        den = aniso * ssq * u[i] + (1.0 - r1x[i] * r2x[i] * u[i]) * (1.0 - r1y[i] * r2y[i] * u[i])
        if abs(den) < DENOMINATOR_GUARD:
            return STATUS_SINGULAR
        # the factor u cancels against the Jacobian 1/u
        out[i] = aniso * s2g / (den * 2.0 * L)
    return STATUS_OK


@jit
def gk21(a, b, L, s2g, ssq, k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2):
    """Kronrod estimate and |Kronrod - Gauss| error on ``[a, b]``."""
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    u = centre + half * NODES
    f = np.empty(21)
    st = integrand_u(u, L, s2g, ssq, k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2, f)
    if st != STATUS_OK:
        return 0.0, 0.0, st
    kron = 0.0
    gauss = 0.0
    for i in range(21):
        kron += KRONROD_WEIGHTS[i] * f[i]
        gauss += GAUSS_WEIGHTS[i] * f[i]
    return half * kron, abs(half * (kron - gauss)), STATUS_OK


@jit
def adaptive_integral(a, b, L, s2g, ssq,
                      k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2,
                      rel_tol, abs_tol, max_subdivisions):
    """Globally adaptive GK21 bisection of ``int_a^b F/(2Lu) du``.

    Returns ``(value, error_estimate, evaluations, status)``.
    """
    lo = np.empty(max_subdivisions)
    hi = np.empty(max_subdivisions)
    val = np.empty(max_subdivisions)
    err = np.empty(max_subdivisions)
    r, e, st = gk21(a, b, L, s2g, ssq, k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2)
    if st != STATUS_OK:
        return 0.0, 0.0, 21, st
    lo[0] = a
    hi[0] = b
    val[0] = r
    err[0] = e
    n = 1
    total = r
    errsum = e
    status = STATUS_OK
    while errsum > max(abs_tol, rel_tol * abs(total)):
        if n >= max_subdivisions:
            status = STATUS_NOT_CONVERGED
            break
        worst = 0
        for i in range(1, n):
            if err[i] > err[worst]:
                worst = i
        left = lo[worst]
        right = hi[worst]
        mid = 0.5 * (left + right)
        if not (left < mid < right):
            # interval exhausted at machine resolution
            status = STATUS_NOT_CONVERGED
            break
        r1, e1, st = gk21(left, mid, L, s2g, ssq, k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2)
        if st != STATUS_OK:
            return total, errsum, 21 * (2 * n - 1), st
        r2, e2, st = gk21(mid, right, L, s2g, ssq, k1, p1, tk1, tx1, ty1, k2, p2, tk2, tx2, ty2)
        if st != STATUS_OK:
            return total, errsum, 21 * (2 * n - 1), st
        hi[worst] = mid
        val[worst] = r1
        err[worst] = e1
        lo[n] = mid
        hi[n] = right
        val[n] = r2
        err[n] = e2
        n += 1
        total = 0.0
        errsum = 0.0
        for i in range(n):
            total += val[i]
            errsum += err[i]
    return total, errsum, 21 * (2 * n - 1), status
