# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Same generator (xoshiro256++ 1.0 seeded via splitmix64), same inverse-CDF
normals (PPND16) and the same step pipeline as the pure-Python backend, with
identical floating-point operation order, so the two backends are
bit-identical.  The whole run executes without the GIL, which lets ensemble
members proceed on real threads.
"""

from libc.math cimport exp, fabs, log, nextafter, sqrt
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef uint64_t SPLITMIX_GAMMA = <uint64_t>0x9E3779B97F4A7C15
cdef double U53 = 1.0 / 9007199254740992.0   # 2**-53
cdef double U52 = 1.0 / 4503599627370496.0   # 2**-52


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef struct Xoshiro:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline void seed_stream(Xoshiro* st, uint64_t seed) nogil:
    cdef uint64_t state = seed
    cdef uint64_t w0, w1, w2, w3
    state = state + SPLITMIX_GAMMA
    w0 = mix64(state)
    state = state + SPLITMIX_GAMMA
    w1 = mix64(state)
    state = state + SPLITMIX_GAMMA
    w2 = mix64(state)
    state = state + SPLITMIX_GAMMA
    w3 = mix64(state)
    if w0 == 0 and w1 == 0 and w2 == 0 and w3 == 0:
        w0 = 1
    st.s0 = w0
    st.s1 = w1
    st.s2 = w2
    st.s3 = w3


cdef inline uint64_t rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t next_u64(Xoshiro* st) nogil:
    cdef uint64_t result = rotl(st.s0 + st.s3, 23) + st.s0
    cdef uint64_t t = st.s1 << 17
    st.s2 ^= st.s0
    st.s3 ^= st.s1
    st.s1 ^= st.s2
    st.s0 ^= st.s3
    st.s2 ^= t
    st.s3 = rotl(st.s3, 45)
    return result


cdef double ppnd16(double u) nogil:
    """Wichura's PPND16 inverse normal CDF, 0 < u < 1."""
    cdef double q = u - 0.5
    cdef double r, num, den, z
    if fabs(q) <= 0.425:
        r = 0.180625 - q * q
        num = ((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                   + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                 + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
               + 1.3314166789178437745e2) * r + 3.3871328727963666080e0
        den = ((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                   + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                 + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
               + 4.2313330701600911252e1) * r + 1.0
        return q * num / den
    if q < 0.0:
        r = u
    else:
        r = 1.0 - u
    r = sqrt(-log(r))
    if r <= 5.0:
        r = r - 1.6
        num = ((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
                   + 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r
                 + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
               + 4.63033784615654529590e0) * r + 1.42343711074968357734e0
        den = ((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                   + 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r
                 + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
               + 2.05319162663775882187e0) * r + 1.0
    else:
        r = r - 5.0
        num = ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                   + 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r
                 + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
               + 5.46378491116411436990e0) * r + 6.65790464350110377720e0
        den = ((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                   + 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r
                 + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
               + 5.99832206555887937690e-1) * r + 1.0
    z = num / den
    if q < 0.0:
        return -z
    return z


cdef inline double draw_uniform(Xoshiro* st, double lo, double hi) nogil:
    cdef double u = <double>(next_u64(st) >> 11) * U53
    cdef double v = lo + (hi - lo) * u
    if v >= hi:
        v = nextafter(hi, lo)
    return v


cdef inline double draw_normal(Xoshiro* st) nogil:
    cdef double u = (<double>(next_u64(st) >> 12) + 0.5) * U52
    return ppnd16(u)


cdef inline int draw_sign(Xoshiro* st) nogil:
    if (next_u64(st) >> 63) == 0:
        return 1
    return -1


cdef int _run(uint64_t seed, int64_t n_steps, int64_t m, double h, double kappa,
              double x_lo, double x_hi, double c_lo, double c_hi,
              double incentive_rate, int64_t incentive_off_step, int preferred_state,
              bint feedback, bint herding, double p0,
              int64_t* out_step, double* out_eta, double* out_price, double* out_emh,
              double* out_sigma, int64_t* out_switch) nogil:
    cdef Xoshiro st
    cdef int* s = <int*>malloc(m * sizeof(int))
    cdef double* lower = <double*>malloc(m * sizeof(double))
    cdef double* upper = <double*>malloc(m * sizeof(double))
    cdef double* coeff = <double*>malloc(m * sizeof(double))
    cdef int64_t i, n, ssum, nsw
    cdef double x_l, x_u, sigma, sigma_prev, price, emh, sqrt_h, half_h
    cdef double eta, d_sigma, fval, new_price, new_emh, abs_sigma, move, incentive_move
    cdef bint degenerate_c, incentive

    if s == NULL or lower == NULL or upper == NULL or coeff == NULL:
        free(s)
        free(lower)
        free(upper)
        free(coeff)
        return -1

    seed_stream(&st, seed)
    degenerate_c = c_lo == c_hi
    ssum = 0
    for i in range(m):
        s[i] = draw_sign(&st)
        if degenerate_c:
            coeff[i] = c_lo
        else:
            coeff[i] = draw_uniform(&st, c_lo, c_hi)
        x_l = draw_uniform(&st, x_lo, x_hi)
        x_u = draw_uniform(&st, x_lo, x_hi)
        lower[i] = p0 / (1.0 + x_l)
        upper[i] = (1.0 + x_u) * p0
        ssum += s[i]

    sigma = <double>ssum / <double>m
    sigma_prev = sigma
    price = p0
    emh = p0
    sqrt_h = sqrt(h)
    half_h = 0.5 * h
    incentive_move = incentive_rate * h

    for n in range(n_steps):
        eta = draw_normal(&st)
        d_sigma = sigma - sigma_prev
        if feedback:
            fval = 1.0 + 2.0 * fabs(sigma)
        else:
            fval = 1.0
        new_price = price * exp((sqrt_h * eta - half_h) * fval + kappa * d_sigma)
        new_emh = emh * exp(sqrt_h * eta - half_h)
        incentive = incentive_rate > 0.0 and (incentive_off_step < 0 or n < incentive_off_step)

        abs_sigma = fabs(sigma)
        for i in range(m):
            if herding and s[i] * sigma < 0.0:
                move = coeff[i] * h * abs_sigma
                lower[i] += move
                upper[i] -= move
            if incentive and s[i] == -preferred_state:
                lower[i] += incentive_move
                upper[i] -= incentive_move

        nsw = 0
        ssum = 0
        for i in range(m):
            if new_price <= lower[i] or new_price >= upper[i] or lower[i] >= upper[i]:
                s[i] = -s[i]
                x_l = draw_uniform(&st, x_lo, x_hi)
                x_u = draw_uniform(&st, x_lo, x_hi)
                lower[i] = new_price / (1.0 + x_l)
                upper[i] = (1.0 + x_u) * new_price
                nsw += 1
            ssum += s[i]

        sigma_prev = sigma
        sigma = <double>ssum / <double>m
        price = new_price
        emh = new_emh
        out_step[n] = n + 1
        out_eta[n] = eta
        out_price[n] = price
        out_emh[n] = emh
        out_sigma[n] = sigma
        out_switch[n] = nsw

    free(s)
    free(lower)
    free(upper)
    free(coeff)
    return 0


def simulate(seed, n_steps, n_agents, double h, double kappa,
             double x_lo, double x_hi, double c_lo, double c_hi,
             double incentive_rate, incentive_off_step, int preferred_state,
             bint volatility_feedback, bint herding_enabled, double p0,
             int64_t[::1] out_step, double[::1] out_eta, double[::1] out_price,
             double[::1] out_emh, double[::1] out_sigma, int64_t[::1] out_switches):
    """Run one simulation, filling the six output columns (length n_steps)."""
    cdef uint64_t seed_c = <uint64_t>seed
    cdef int64_t n = <int64_t>n_steps
    cdef int64_t m = <int64_t>n_agents
    cdef int64_t off = -1 if incentive_off_step is None else <int64_t>incentive_off_step
    if (out_step.shape[0] != n or out_eta.shape[0] != n or out_price.shape[0] != n
            or out_emh.shape[0] != n or out_sigma.shape[0] != n or out_switches.shape[0] != n):
        raise ValueError("output buffers must have length n_steps")
    cdef int rc
    with nogil:
        rc = _run(seed_c, n, m, h, kappa, x_lo, x_hi, c_lo, c_hi,
                  incentive_rate, off, preferred_state,
                  volatility_feedback, herding_enabled, p0,
                  &out_step[0], &out_eta[0], &out_price[0], &out_emh[0],
                  &out_sigma[0], &out_switches[0])
    if rc != 0:
        raise MemoryError("agent buffers")


# Direct access to the kernel's RNG primitives, for cross-checking against
# the pure-Python implementations.

def substream_seed(seed, index):
    return mix64(<uint64_t>seed + (<uint64_t>index + 1) * SPLITMIX_GAMMA)


def inverse_normal_cdf(double u):
    if not 0.0 < u < 1.0:
        raise ValueError("u must be in (0, 1)")
    return ppnd16(u)


def u64_sequence(seed, uint64_t[::1] out):
    cdef Xoshiro st
    seed_stream(&st, <uint64_t>seed)
    cdef Py_ssize_t i
    for i in range(out.shape[0]):
        out[i] = next_u64(&st)


def normal_sequence(seed, double[::1] out):
    cdef Xoshiro st
    seed_stream(&st, <uint64_t>seed)
    cdef Py_ssize_t i
    for i in range(out.shape[0]):
        out[i] = draw_normal(&st)


def uniform_sequence(seed, double lo, double hi, double[::1] out):
    cdef Xoshiro st
    seed_stream(&st, <uint64_t>seed)
    cdef Py_ssize_t i
    for i in range(out.shape[0]):
        out[i] = draw_uniform(&st, lo, hi)


def sign_sequence(seed, int64_t[::1] out):
    cdef Xoshiro st
    seed_stream(&st, <uint64_t>seed)
    cdef Py_ssize_t i
    for i in range(out.shape[0]):
        out[i] = draw_sign(&st)
