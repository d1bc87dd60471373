"""Seeded random-number streams with a fixed, auditable draw contract.

Every simulation owns exactly one stream, and reruns with the same seed are
bit-identical.  That guarantee rests on three documented algorithm choices:

* Core generator: **xoshiro256++ 1.0** (Blackman & Vigna).  State is four
  64-bit words; each call to :meth:`RngStream.next_u64` emits one word.
* Seeding: the state words are the first four outputs of a **splitmix64**
  sequence started at the stream seed (the standard seeding recipe for the
  xoshiro family).  Ensemble member ``k`` gets its own stream seed from
  :func:`substream_seed`, defined as the ``(k+1)``-th splitmix64 output of
  the master seed, so members can run in parallel without sharing state.
* Fixed consumption: every draw, whatever its distribution, consumes exactly
  one generator word.

  - ``uniform(lo, hi)``  ->  ``lo + (hi - lo) * u`` with
    ``u = (word >> 11) * 2**-53`` in ``[0, 1)``.
  - ``standard_normal()``  ->  inverse normal CDF (Wichura's PPND16 rational
    approximation, relative error ~1e-16) at
    ``u = ((word >> 12) + 0.5) * 2**-52``, which lies strictly inside (0, 1).
  - ``sign()``  ->  +1 if the top bit of the word is 0, else -1.

One word per draw keeps the stream position a function of the simulation
algorithm alone, never of the values previously drawn.  The compiled kernel
re-implements the identical arithmetic; a test suite pins the two paths to
bit-equality.
"""

from __future__ import annotations

import math

from .errors import ParameterError

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_U53_SCALE = 2.0**-53
_U52_SCALE = 2.0**-52


def _mix64(z: int) -> int:
    """splitmix64 output function (Steele, Lea & Flood)."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _check_u64(seed: int, what: str) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParameterError(f"{what} must be an integer, got {seed!r}")
    if not 0 <= seed <= _MASK64:
        raise ParameterError(f"{what} must fit in 64 unsigned bits, got {seed}")
    return seed


def substream_seed(master_seed: int, index: int) -> int:
    """Seed for ensemble member ``index``: the (index+1)-th splitmix64 output
    of ``master_seed``.  Distinct indices give statistically independent
    streams."""
    _check_u64(master_seed, "master_seed")
    if index < 0:
        raise ParameterError(f"substream index must be >= 0, got {index}")
    state = (master_seed + (index + 1) * _SPLITMIX_GAMMA) & _MASK64
    return _mix64(state)


# Wichura's PPND16 rational approximation to the inverse normal CDF.
_PPND_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_PPND_B = (
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_PPND_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_PPND_D = (
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_PPND_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_PPND_F = (
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def inverse_normal_cdf(u: float) -> float:
    """Quantile function of the standard normal for u strictly in (0, 1)."""
    if not 0.0 < u < 1.0:
        raise ParameterError(f"inverse normal CDF needs 0 < u < 1, got {u}")
    a = _PPND_A
    b = _PPND_B
    q = u - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = ((((((a[7] * r + a[6]) * r + a[5]) * r + a[4]) * r + a[3]) * r + a[2]) * r + a[1]) * r + a[0]
        den = ((((((b[6] * r + b[5]) * r + b[4]) * r + b[3]) * r + b[2]) * r + b[1]) * r + b[0]) * r + 1.0
        return q * num / den
    r = u if q < 0.0 else 1.0 - u
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        c = _PPND_C
        d = _PPND_D
        num = ((((((c[7] * r + c[6]) * r + c[5]) * r + c[4]) * r + c[3]) * r + c[2]) * r + c[1]) * r + c[0]
        den = ((((((d[6] * r + d[5]) * r + d[4]) * r + d[3]) * r + d[2]) * r + d[1]) * r + d[0]) * r + 1.0
    else:
        r -= 5.0
        e = _PPND_E
        f = _PPND_F
        num = ((((((e[7] * r + e[6]) * r + e[5]) * r + e[4]) * r + e[3]) * r + e[2]) * r + e[1]) * r + e[0]
        den = ((((((f[6] * r + f[5]) * r + f[4]) * r + f[3]) * r + f[2]) * r + f[1]) * r + f[0]) * r + 1.0
    z = num / den
    return -z if q < 0.0 else z


class RngStream:
    """One xoshiro256++ stream.  Single-threaded by contract: a stream may be
    handed between threads but never shared concurrently."""

    __slots__ = ("seed", "_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        self.seed = _check_u64(seed, "seed")
        state = seed
        words = []
        for _ in range(4):
            state = (state + _SPLITMIX_GAMMA) & _MASK64
            words.append(_mix64(state))
        if not any(words):  # all-zero state is a fixed point of xoshiro
            words[0] = 1
        self._s0, self._s1, self._s2, self._s3 = words

    def next_u64(self) -> int:
        """One raw 64-bit generator word (xoshiro256++ output function)."""
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        tmp = (s0 + s3) & _MASK64
        result = (((tmp << 23) | (tmp >> 41)) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def standard_normal(self) -> float:
        """One N(0,1) variate; consumes exactly one generator word."""
        u = ((self.next_u64() >> 12) + 0.5) * _U52_SCALE
        return inverse_normal_cdf(u)

    def uniform(self, lo: float, hi: float) -> float:
        """One draw from [lo, hi); consumes exactly one generator word."""
        if not lo < hi:
            raise ParameterError(f"uniform needs lo < hi, got [{lo}, {hi})")
        u = (self.next_u64() >> 11) * _U53_SCALE
        value = lo + (hi - lo) * u
        if value >= hi:  # guards the rare round-up at u ~ 1
            value = math.nextafter(hi, lo)
        return value

    def sign(self) -> int:
        """+1 or -1 with equal probability; consumes exactly one word."""
        return 1 if self.next_u64() >> 63 == 0 else -1

    def state(self) -> tuple[int, int, int, int]:
        """Current state words (diagnostics and tests)."""
        return (self._s0, self._s1, self._s2, self._s3)
