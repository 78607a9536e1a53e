"""Independent high-precision reference values frozen into the test-suite.

Every number is computed with mpmath (special functions or tanh-sinh
quadrature at 30 digits) without touching the renmoment package.
Run:  python scripts/generate_oracles.py
"""
import mpmath as mp

mp.mp.dps = 30
LOG_NEG = mp.mpc(0, mp.pi)  # ln(-1) on the principal branch


def show(label, value):
    value = mp.mpc(value)
    print(f"{label:<44s} {mp.nstr(value.real, 20):>26s} {mp.nstr(value.imag, 20):>26s}")


# panels in s = ln t for power tails, which decay only like e^{-c s};
# beyond the ends every integrand used here is below 1e-20
S_PANELS = [-60, -20, -5, 0, 5, 20, 60, 150, 400]


def half_line(f, kinks=(), heavy=False):
    """Integral of f(t) over t > 0 with breakpoints at the kinks."""
    if heavy:
        cuts = sorted(set(S_PANELS) | {mp.log(k) for k in kinks})
        return mp.quad(lambda s: f(mp.exp(s)) * mp.exp(s), cuts)
    return mp.quad(f, sorted({mp.mpf(0), mp.mpf(1), *kinks}) + [mp.inf])


def two_sided(pdf, weight, mid=(), heavy=False):
    """Integral of pdf(x) * weight(x) over the real line, x<0 with ln x = ln|x| + i pi."""
    pos = half_line(lambda t: pdf(t) * weight(t, False), [k for k in mid if k > 0], heavy)
    neg = half_line(lambda t: pdf(-t) * weight(t, True), [-k for k in mid if k < 0], heavy)
    return pos + neg


def logw(n):
    return lambda t, neg: (mp.log(t) + (LOG_NEG if neg else 0)) ** n


def powlogw(n):
    return lambda t, neg: (mp.expjpi(n) if neg else 1) * t**n * (mp.log(t) + (LOG_NEG if neg else 0))


def main():
    print("# special functions")
    for z in (mp.mpc(0.3, 0.7), mp.mpc(-2.5, 0.1), mp.mpc(7.25, -3.0), mp.mpf(0.5), mp.mpf(-3.5)):
        show(f"gamma({mp.nstr(z, 5)})", mp.gamma(z))
        show(f"loggamma({mp.nstr(z, 5)})", mp.loggamma(z))
        show(f"digamma({mp.nstr(z, 5)})", mp.digamma(z))
        show(f"trigamma({mp.nstr(z, 5)})", mp.polygamma(1, z))
    for a, x in ((mp.mpf(0.5), 2.0), (mp.mpc(-1.5, 0.5), 0.7), (mp.mpf(-2), 3.0), (mp.mpf(2.5), 0.1)):
        show(f"Gamma({mp.nstr(a, 5)}, {x})", mp.gammainc(a, x))
    show("zeta(3)", mp.zeta(3))
    show("H_{2.5}", mp.harmonic(2.5))

    print("# direct moment integrals")
    qexp = lambda q, lam: (lambda x: lam * (2 - q) * (1 + lam * (q - 1) * x) ** (1 / (1 - q)) if x >= 0 else 0)
    show("q-exp(1.25, 1) m_1 by quadrature", half_line(lambda x: qexp(1.25, 1)(x) * x, heavy=True))
    levy = lambda x: x ** mp.mpf(-1.5) * mp.exp(-1 / (2 * x)) / mp.sqrt(2 * mp.pi) if x > 0 else 0
    show("Levy Mellin z=0.25", half_line(lambda x: levy(x) * x ** mp.mpf(0.25), heavy=True))
    normal = lambda x: mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)
    show("Normal Mellin z=-0.5", two_sided(normal, lambda t, neg: (mp.expjpi(-0.5) if neg else 1) * t ** -0.5))

    print("# log moments by quadrature")
    lap = lambda lam, mu: (lambda x: lam / 2 * mp.exp(-lam * abs(x - mu)))
    show("Laplace(1, 0.7) m~_2", two_sided(lap(1, 0.7), logw(2), mid=(0.7,)))
    show("Laplace(1, 0.7) m~_1", two_sided(lap(1, 0.7), logw(1), mid=(0.7,)))
    st = lambda nu: (lambda x: mp.gamma((nu + 1) / 2) / (mp.sqrt(nu * mp.pi) * mp.gamma(nu / 2))
                     * (1 + x * x / nu) ** (-(nu + 1) / 2))
    show("StudentT(4) m~_1", two_sided(st(4), logw(1), heavy=True))
    show("StudentT(5) m~_2", two_sided(st(5), logw(2), heavy=True))
    show("Normal m~_2", two_sided(normal, logw(2)))
    show("q-exp(1.75, 1) m~_2", half_line(lambda x: qexp(1.75, 1)(x) * mp.log(x) ** 2, heavy=True))
    q, beta = mp.mpf(2.2), mp.mpf(1)
    P = 1 / (q - 1)
    qg = lambda x: (mp.sqrt(q - 1) * mp.gamma(P) / (mp.sqrt(2 * mp.pi) * beta * mp.gamma(P - 0.5))
                    * (1 + (q - 1) * x * x / (2 * beta**2)) ** (-P))
    show("q-Gaussian(2.2, 1) m~_2", two_sided(qg, logw(2), heavy=True))

    print("# power-log moments by quadrature")
    show("Normal M_{2,1}", two_sided(normal, powlogw(2)))
    show("Normal M_{1,1}", two_sided(normal, powlogw(1)))
    show("Laplace(1, 0.7) M_{1,1}", two_sided(lap(1, 0.7), powlogw(1), mid=(0.7,)))


if __name__ == "__main__":
    main()
