"""Thin wrapper over scipy's QUADPACK for complex and semi-infinite integrands."""
from __future__ import annotations

import math

from scipy import integrate

from .errors import QuadratureError


def _mapped(f, a, transform):
    if transform == "rational-map":
        def g(t):
            if t >= 1.0:
                return 0.0
            u = 1.0 - t
            return f(a + t / u) / (u * u)
    elif transform == "exp-map":
        def g(t):
            if t <= 0.0:
                return 0.0
            return f(a - math.log(t)) / t
    else:
        raise ValueError(f"unknown semi-infinite transform {transform!r}")
    return g


def _quad_real(g, a, b, rel_tol, abs_tol, limit, points, label, **extra):
    kwargs = {"epsabs": abs_tol, "epsrel": rel_tol, "limit": limit, "full_output": 1, **extra}
    if points:
        kwargs["points"] = points
    out = integrate.quad(g, a, b, **kwargs)
    val, err = out[0], out[1]
    ier = out[3] if len(out) > 3 else 0
    if not math.isfinite(val):
        raise QuadratureError(f"non-finite integral over {label}")
    if ier and err > 1e3 * max(abs_tol, rel_tol * abs(val)):
        raise QuadratureError(
            f"quadrature over {label} did not converge: value {val:.6g}, error {err:.3g}"
        )
    return val, err


def integrate_complex(f, a, b, rel_tol=1e-10, abs_tol=1e-12, limit=200,
                      transform="rational-map", points=None, real=False):
    """Integrate a (possibly complex) scalar function over [a, b].

    ``b`` may be ``math.inf``; the half line is then mapped onto [0, 1).
    Returns ``(value, error_estimate)`` with ``value`` complex.
    """
    rel_tol = max(rel_tol, 1e-13)
    if math.isinf(b):
        g = _mapped(f, a, transform)
        lo, hi, pts = 0.0, 1.0, None
    else:
        g, lo, hi = f, a, b
        pts = [p for p in (points or []) if a < p < b] or None
    label = f"[{a}, {b}]"
    re, re_err = _quad_real(lambda t: complex(g(t)).real, lo, hi, rel_tol, abs_tol, limit, pts, label)
    if real:
        return complex(re, 0.0), re_err
    im, im_err = _quad_real(lambda t: complex(g(t)).imag, lo, hi, rel_tol, abs_tol, limit, pts, label)
    return complex(re, im), math.hypot(re_err, im_err)


def integrate_fourier(f, a, omega, rel_tol=1e-10, abs_tol=1e-12, limit=200):
    """Integral of f(t) e^{i omega t} over [a, inf) for a slowly varying complex f.

    Uses QUADPACK's Fourier-weighted rule (QAWF) on the four real pieces.
    """
    label = f"[{a}, inf) with weight e^(i {omega} t)"
    parts = {}
    for name, comp in (("re", lambda t: complex(f(t)).real), ("im", lambda t: complex(f(t)).imag)):
        for weight in ("cos", "sin"):
            # QAWF ignores epsrel; the absolute tolerance drives it
            parts[name, weight] = _quad_real(comp, a, math.inf, rel_tol, abs_tol, limit, None, label,
                                             weight=weight, wvar=omega)
    (rc, erc), (rs, ers) = parts["re", "cos"], parts["re", "sin"]
    (ic, eic), (is_, eis) = parts["im", "cos"], parts["im", "sin"]
    return complex(rc - is_, rs + ic), erc + ers + eic + eis
