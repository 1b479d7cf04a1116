"""
Special functions used by the outage and CVaR formulas.

Integer-order upper incomplete gamma, the logarithmic integral on (0, 1)
and the Euler-Mascheroni constant. Everything here is pure and stateless.
"""
import math

__all__ = [
    "EULER_GAMMA",
    "DomainError",
    "upper_incomplete_gamma_int",
    "regularized_upper_gamma",
    "log_regularized_upper_gamma",
    "regularized_lower_gamma",
    "log_integral",
    "exp1",
]

EULER_GAMMA = 0.57721566490153286060651209008240243104215933593992


class DomainError(ValueError):
    """Argument outside the domain of a function or formula."""


def _check_order(n, x):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"order n must be a positive integer, got {n!r}")
    if not x >= 0 or math.isinf(x):
        raise DomainError(f"x must be finite and nonnegative, got {x!r}")
    return int(n), float(x)


def log_regularized_upper_gamma(n, x):
    """
    Natural log of Q(n, x) = exp(-x) * sum_{k<n} x**k / k!.

    The sum is accumulated relative to its largest term, so nothing
    overflows even for n in the hundreds and x up to 1e3 or beyond.
    """
    n, x = _check_order(n, x)
    if x == 0.0:
        return 0.0
    kmax = min(n - 1, int(math.floor(x)))
    log_tmax = -x + kmax * math.log(x) - math.lgamma(kmax + 1)
    s = 1.0
    t = 1.0
    for k in range(kmax + 1, n):
        t *= x / k
        s += t
        if t < 1e-17 * s:
            break
    t = 1.0
    for k in range(kmax, 0, -1):
        t *= k / x
        s += t
        if t < 1e-17 * s:
            break
    return log_tmax + math.log(s)


def _lower_tail_series(n, x):
    """``exp(-x) sum_{k>=n} x^k/k!`` for ``x < n``, where the terms decay geometrically."""
    if x == 0.0:
        return 0.0
    log_first = -x + n * math.log(x) - math.lgamma(n + 1)
    s = 1.0
    t = 1.0
    k = n
    while True:
        k += 1
        t *= x / k
        s += t
        if t < 1e-17 * s:
            break
    return math.exp(log_first) * s


def regularized_lower_gamma(n, x):
    """
    Regularized lower incomplete gamma P(n, x) = 1 - Q(n, x).

    For ``x < n`` the series over ``k >= n`` is summed directly, so small
    values keep full relative accuracy instead of cancelling against 1.
    """
    n, x = _check_order(n, x)
    if x < n:
        return _lower_tail_series(n, x)
    return -math.expm1(log_regularized_upper_gamma(n, x))


def regularized_upper_gamma(n, x):
    """
    Regularized upper incomplete gamma Q(n, x) = Gamma(n, x) / (n-1)!.

    Parameters
    ----------
    n : int
        Positive integer order.
    x : float
        Nonnegative argument.

    Returns
    -------
    float
        Value in [0, 1]; nonincreasing in `x`, increasing in `n`.

    Raises
    ------
    DomainError
        If ``n < 1``, `n` is not integral, or ``x < 0``.
    """
    n, x = _check_order(n, x)
    if x < n:
        return 1.0 - _lower_tail_series(n, x)
    return math.exp(log_regularized_upper_gamma(n, x))


def upper_incomplete_gamma_int(n, x):
    """
    Upper incomplete gamma function Gamma(n, x) for integer order.

    Uses the finite-sum identity ``Gamma(n, x) = (n-1)! exp(-x) sum_{k<n} x^k/k!``,
    combined in log space so the factorial never materialises. Returns
    ``inf`` only when the true value exceeds the double range (n > 171).

    Examples
    --------
    >>> upper_incomplete_gamma_int(3, 0.0)
    2.0
    """
    n, x = _check_order(n, x)
    if x == 0.0 and n <= 171:
        return float(math.factorial(n - 1))
    log_value = math.lgamma(n) + log_regularized_upper_gamma(n, x)
    if log_value > 709.78:
        return math.inf
    return math.exp(log_value)


def exp1(y):
    """Exponential integral E1(y) for y > 0."""
    if not y > 0:
        raise DomainError(f"E1 needs y > 0, got {y!r}")
    if y <= 1.0:
        # E1(y) = -gamma - ln y - sum_{k>=1} (-y)^k / (k k!)
        total = 0.0
        term = 1.0
        k = 1
        while True:
            term *= -y / k
            contrib = term / k
            total += contrib
            if abs(contrib) < 1e-17 * max(abs(total), 1e-300):
                break
            k += 1
        return -EULER_GAMMA - math.log(y) - total
    # modified Lentz on the continued fraction of exp(y) E1(y)
    tiny = 1e-300
    b = y + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-y)


def log_integral(a):
    """
    Logarithmic integral li(a) = int_0^a dt / ln t for 0 < a < 1.

    Evaluated as ``li(a) = Ei(ln a) = -E1(-ln a)``. The result is negative
    and strictly decreasing on (0, 1), diverging to -inf as ``a -> 1``.

    Raises
    ------
    DomainError
        Outside the open interval (0, 1).
    """
    a = float(a)
    if not 0.0 < a < 1.0:
        raise DomainError(f"log_integral is defined here only on (0, 1), got {a!r}")
    return -exp1(-math.log(a))
