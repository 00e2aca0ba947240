"""Bisection for monotone scalar functions."""
import math


def bisect_increasing(f, lo, hi, target=0.0, tol=1e-12, max_iter=200):
    """Solve ``f(x) = target`` for ``f`` nondecreasing on ``[lo, hi]``.

    Bisection continues past ``tol`` until the bracket stops shrinking in
    floating point or ``max_iter`` halvings are done, so the returned point is
    as accurate as the arithmetic allows; ``tol`` only bounds the residual that
    is guaranteed. Raises ``ValueError`` when ``target`` is not bracketed.
    """
    flo = f(lo) - target
    fhi = f(hi) - target
    if flo > tol or fhi < -tol:
        raise ValueError(
            "target %.17g not bracketed: f(%.17g)=%.17g, f(%.17g)=%.17g" % (target, lo, flo + target, hi, fhi + target)
        )
    best_x, best_r = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid) - target
        if abs(fm) < abs(best_r):
            best_x, best_r = mid, fm
        if fm == 0.0:
            break
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    if not math.isfinite(best_r) or abs(best_r) > tol:
        raise ValueError("bisection stalled with residual %.3g" % best_r)
    return best_x
