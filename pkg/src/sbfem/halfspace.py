"""Surface response of a viscoelastic half-space under a harmonic strip load.

The vertical surface displacement is the cosine transform

    v(x) = 2 k_s^2 p0 / (pi mu c^2) * int_0^inf
           alpha sin(b tau) cos(x tau) / (tau (tau^2 + beta^2)^2 - 4 tau^3 alpha beta) dtau

with ``c = 1 + 2i zeta``, ``alpha^2 = tau^2 - k_p^2 / c``, ``beta^2 = tau^2 - k_s^2 / c``
and elastic wavenumbers ``k = omega / speed``. Square roots take the branch
with non-negative real part. ``v`` is measured positive upward; the strip
pressure ``p0`` acts downward.

The integral is evaluated with the composite Simpson 3/8 rule on a growing
interval ``[0, T]``. For large ``tau`` the kernel behaves like
``K_inf / tau^2``, so the part beyond ``T`` is approximated by that
asymptote and integrated exactly through the sine and cosine integrals.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .material import Material, complex_modulus_factor, wave_speeds


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class HalfspaceProblem:
    material: Material
    p0: float
    b: float
    frequency: float

    def __post_init__(self):
        if self.material.damping_ratio <= 0:
            raise ValueError("the half-space needs positive damping")
        if self.p0 <= 0 or self.b <= 0 or self.frequency <= 0:
            raise ValueError("p0, b and frequency must be positive")

    @property
    def omega(self):
        return 2.0 * np.pi * self.frequency

    @property
    def wavenumbers(self):
        """Elastic (k_p, k_s)."""
        cp, cs = wave_speeds(self.material)
        return self.omega / cp, self.omega / cs

    @property
    def prefactor(self):
        c = complex_modulus_factor(self.material.damping_ratio)
        ks = self.wavenumbers[1]
        return 2.0 * ks**2 * self.p0 / (np.pi * self.material.shear_modulus * c**2)

    def kernel(self, tau):
        """``alpha / (tau F(tau))`` without the sin/cos factors."""
        tau = np.asarray(tau, dtype=complex)
        c = complex_modulus_factor(self.material.damping_ratio)
        kp, ks = self.wavenumbers
        alpha = np.sqrt(tau * tau - kp**2 / c)
        beta = np.sqrt(tau * tau - ks**2 / c)
        return alpha / (tau * (tau * tau + beta * beta) ** 2 - 4.0 * tau**3 * alpha * beta)

    def integrand(self, tau, x):
        tau = np.asarray(tau, dtype=float)
        out = np.empty(tau.shape, dtype=complex)
        small = tau < 1e-12
        t = tau[~small]
        out[~small] = self.kernel(t) * np.sin(self.b * t) * np.cos(x * t)
        if np.any(small):
            # sin(b tau) / tau -> b
            out[small] = self.b * self.kernel_limit()
        return out

    def kernel_asymptote(self):
        """``K_inf`` with ``kernel(tau) = K_inf / tau^2 + O(tau^-4)`` for large tau."""
        c = complex_modulus_factor(self.material.damping_ratio)
        kp, ks = self.wavenumbers
        return c / (2.0 * (kp**2 - ks**2))

    def kernel_limit(self):
        c = complex_modulus_factor(self.material.damping_ratio)
        kp, ks = self.wavenumbers
        alpha = np.sqrt(-(kp**2) / c + 0j)
        beta2 = -(ks**2) / c
        return alpha / beta2**2


def simpson38(integrand, lower, upper, panels):
    """Composite Simpson 3/8 rule with ``3 * panels + 1`` samples.

    ``integrand`` is called once with the array of abscissae.
    """
    if panels < 1:
        raise ValueError("panels must be at least 1")
    if not upper > lower:
        raise ValueError("upper must exceed lower")
    x = np.linspace(lower, upper, 3 * panels + 1)
    y = np.asarray(integrand(x))
    dx = (upper - lower) / (3 * panels)
    w = np.full(x.size, 3.0)
    w[::3] = 2.0
    w[0] = w[-1] = 1.0
    return 3.0 * dx / 8.0 * np.dot(w, y)


def _resolution(p, x, lo=0.0):
    """Largest panel width that resolves the oscillation (and the Rayleigh
    pole, for segments starting near it)."""
    period = 2.0 * np.pi / (abs(x) + p.b)
    width = period / 24.0
    ks = p.wavenumbers[1]
    if lo < 2.0 * ks:
        c = complex_modulus_factor(p.material.damping_ratio)
        pole_width = max(p.material.damping_ratio, 1e-3) * ks / abs(c)
        width = min(width, pole_width / 12.0)
    return width


def _segment(p, xs, lo, hi, panels, chunk=1 << 15):
    """Simpson 3/8 integrals over ``[lo, hi]`` for every x, sharing the kernel."""
    width = _resolution(p, np.abs(xs).max(), lo)
    n = max(panels, int(np.ceil((hi - lo) / (3 * width))))
    out = np.zeros(xs.size, dtype=complex)
    dx = (hi - lo) / (3 * n)
    npts = 3 * n + 1
    for start in range(0, npts, chunk):
        k = np.arange(start, min(start + chunk, npts))
        tau = lo + dx * k
        w = np.where(k % 3 == 0, 2.0, 3.0)
        w[(k == 0) | (k == npts - 1)] = 1.0
        g = w * p.integrand(tau, 0.0) if lo == 0.0 else w * p.kernel(tau) * np.sin(p.b * tau)
        out += np.cos(np.outer(xs, tau)) @ g
    return 3.0 * dx / 8.0 * out


def _sine_tail(a, T):
    """``int_T^inf sin(a t) / t^2 dt`` for an array of frequencies ``a``."""
    a = np.asarray(a, dtype=float)
    out = np.zeros(a.shape)
    nz = a != 0.0
    aa = np.abs(a[nz])
    _, ci = sici(aa * T)
    out[nz] = np.sign(a[nz]) * (np.sin(aa * T) / T - aa * ci)
    return out


def _tail(p, xs, T):
    """Integral beyond ``T`` of the leading asymptotic term of the integrand."""
    return 0.5 * p.kernel_asymptote() * (_sine_tail(p.b + xs, T) + _sine_tail(p.b - xs, T))


MAX_SAMPLES = 1 << 27


def surface_curve(p, xs, rtol=1e-8, panels=4096, max_doublings=30, upper=None, atol=0.0):
    """Vertical surface displacement at every ``x`` in ``xs`` (complex, positive upward).

    The integral over ``[0, T]`` starts beyond the shear wavenumber and the
    upper limit doubles until, at every x, the value changes by less than
    ``atol + rtol * scale``, where ``scale`` is the largest magnitude along
    the curve (far points whose response has decayed to nothing are judged
    against the near field). Beyond ``T`` the kernel's ``1/tau^2`` asymptote is
    integrated in closed form (sine and cosine integrals), which leaves a
    truncation error of order ``T^-3``. Each new segment gets at least
    ``panels`` Simpson panels, more when needed to keep the panel width
    below the oscillation and pole scales. The kernel is evaluated once per
    abscissa and shared across all x. ``NonConvergence`` is raised when the
    doublings or the sample budget run out.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    T = upper if upper is not None else 8.0 * p.wavenumbers[1] + 20.0 / p.b
    total = _segment(p, xs, 0.0, T, panels)
    if upper is not None:
        return p.prefactor * total
    value = total + _tail(p, xs, T)
    spent = 0
    for _ in range(max_doublings):
        spent += T / (3 * _resolution(p, np.abs(xs).max(), T))
        if spent > MAX_SAMPLES:
            break
        total = total + _segment(p, xs, T, 2 * T, panels)
        T *= 2
        new = total + _tail(p, xs, T)
        done = np.all(np.abs(new - value) <= atol + rtol * np.abs(new).max())
        value = new
        if done:
            return p.prefactor * value
    raise NonConvergence(f"surface integral did not settle (upper limit {T:.4g}, tolerance rtol={rtol:g})")


def surface_displacement(p, x, rtol=1e-8, panels=4096, max_doublings=30, upper=None, atol=0.0):
    """Vertical surface displacement at a single ``x``, see :func:`surface_curve`."""
    return complex(surface_curve(p, [x], rtol, panels, max_doublings, upper, atol)[0])
