"""Independent high-precision oracles. Nothing here imports extreme_aoi."""
import mpmath as mp

mp.mp.dps = 40


def upper_gamma(n, x):
    return mp.gammainc(n, x, mp.inf)


def regularized_upper_gamma_sum(n, x):
    """``exp(-x) sum_{k<n} x^k/k!`` summed term by term at 40 digits."""
    x = mp.mpf(x)
    return mp.exp(-x) * mp.fsum(x ** k / mp.factorial(k) for k in range(n))


def regularized_lower_gamma(n, x):
    return mp.gammainc(n, 0, x, regularized=True)


def li_quadrature(a):
    """``int_0^a dt/ln t`` by tanh-sinh quadrature, split at a/2."""
    f = lambda t: 1 / mp.log(t)
    return mp.quad(f, [0, a / 2, a])


def x_moment_series(n, g, tail=mp.mpf("1e-30")):
    """Truncated ``sum_{k>=1} k^n e^-g g^(k-1)/(k-1)!``."""
    g = mp.mpf(g)
    total = mp.mpf(0)
    k = 1
    while True:
        term = mp.mpf(k) ** n * mp.exp(-g) * g ** (k - 1) / mp.factorial(k - 1)
        total += term
        if k > g + 10 and term < tail * total:
            return total
        k += 1


def _touchard(j, lam):
    """Raw moment ``E[Z^j]`` of Poisson(lam)."""
    return mp.fsum(mp.stirling2(j, i) * lam ** i for i in range(j + 1))


def y_moment_series(n, g, p, tail=mp.mpf("1e-30")):
    """
    ``E[Y^n] = sum_k E[(k + Poisson(k g))^n] p^(k-1) (1-p)``, truncated.

    Conditioned on k attempts, Y is k plus a Poisson(k g) count; its raw
    moments come from the binomial expansion and Touchard polynomials, which
    is a different route from the falling-factorial assembly.
    """
    g, p = mp.mpf(g), mp.mpf(p)
    total = mp.mpf(0)
    k = 1
    while True:
        lam = k * g
        cond = mp.fsum(mp.binomial(n, j) * mp.mpf(k) ** (n - j) * _touchard(j, lam) for j in range(n + 1))
        term = cond * p ** (k - 1) * (1 - p)
        total += term
        if p == 0 or (k > 20 and term < tail * total):
            return total
        k += 1
