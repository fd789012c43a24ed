"""Arithmetic feasibility screens for flag-transitive 2-design parameters.

Everything here is exact integer arithmetic.  The screens encode the standard
counting identities, the Fisher inequality, the coprime reduction
r* = r/(r,lambda), the divisor consequences of flag-transitivity, the
subdegree gcd filter, and the two order inequalities used by the eliminator.

The working hypothesis throughout is lambda >= (r,lambda)^2 > 1, which forces
g = (r,lambda) >= 2, lambda >= 4, and v < (r*)^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .exactmath import binomial_exceeds, divisors, divisors_upto, gcd, p_prime_part
from .grouporders import CaseOrders

__all__ = [
    "REASON_CODES",
    "DesignParams",
    "Rejection",
    "reduce_pair",
    "check_basic",
    "failure_codes",
    "admissible_tuples",
    "admissible_tuples_explained",
    "divisibility_filter",
    "subdegree_filter",
    "order_inequality_check",
    "two_point_divisor",
]

# every rejection or elimination carries one of these tags
REASON_CODES = (
    "identity-violation",
    "fisher",
    "lambda-bound",
    "rstar-gcd",
    "cube-bound",
    "order-inequality",
    "subdegree",
    "b-nonintegral",
    "completeness",
    "divisor-conflict",
)


@dataclass(frozen=True, order=True)
class DesignParams:
    """Parameters (v, b, r, k, lambda) of a candidate 2-design."""

    v: int
    b: int
    r: int
    k: int
    lam: int

    def __post_init__(self) -> None:
        if min(self.v, self.b, self.r, self.k, self.lam) < 1:
            raise ValueError(f"parameters must be positive: {self}")

    @property
    def g(self) -> int:
        return gcd(self.r, self.lam)

    @property
    def rstar(self) -> int:
        return self.r // self.g

    @property
    def lamstar(self) -> int:
        return self.lam // self.g

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return (self.v, self.b, self.r, self.k, self.lam)


def reduce_pair(r: int, lam: int) -> Tuple[int, int, int]:
    """(g, r*, lambda*) with g = gcd(r, lambda) and coprime quotients."""
    if r < 1 or lam < 1:
        raise ValueError("replication and lambda must be positive")
    g = gcd(r, lam)
    return g, r // g, lam // g


def check_basic(params: DesignParams) -> Tuple[Tuple[str, bool], ...]:
    """Pass/fail entry per defining clause plus the working hypothesis."""
    v, b, r, k, lam = params.as_tuple()
    g = params.g
    return (
        ("replication-identity", r * (k - 1) == lam * (v - 1)),
        ("flag-count-identity", b * k == v * r),
        ("fisher", b >= v and r >= k),
        ("lambda-v-bound", lam * v < r * r),
        ("nontrivial-incomplete", 2 < k < v - 1 and binomial_exceeds(v, k, b)),
        ("hypothesis", g >= 2 and lam >= g * g),
    )


_CLAUSE_TO_CODE = {
    "replication-identity": "identity-violation",
    "flag-count-identity": "identity-violation",
    "fisher": "fisher",
    "lambda-v-bound": "lambda-bound",
    "nontrivial-incomplete": "completeness",
    "hypothesis": "lambda-bound",
}


def failure_codes(params: DesignParams) -> Tuple[str, ...]:
    """Reason codes of the failed check_basic clauses, deduplicated."""
    seen: List[str] = []
    for name, ok in check_basic(params):
        code = _CLAUSE_TO_CODE[name]
        if not ok and code not in seen:
            seen.append(code)
    return tuple(seen)


@dataclass(frozen=True)
class Rejection:
    """One discarded branch of the tuple enumeration.

    g is None when the whole (rstar, lambdastar) branch dies before any
    specific g is considered (e.g. no g can make b integral).
    """

    rstar: int
    lamstar: Optional[int]
    k: Optional[int]
    g: Optional[int]
    code: str


def admissible_tuples(
    v: int,
    r_divisor: int,
    g_max: Optional[int] = None,
    rstar_divisor: Optional[int] = None,
    max_work: int = 10**7,
) -> Tuple[DesignParams, ...]:
    """All parameter tuples surviving every arithmetic screen.

    r must divide r_divisor; r* must additionally divide rstar_divisor when
    one is given (a refinement, e.g. a p'-part).  g can be capped by g_max.
    """
    tuples, _ = admissible_tuples_explained(
        v, r_divisor, g_max=g_max, rstar_divisor=rstar_divisor, max_work=max_work
    )
    return tuples


def admissible_tuples_explained(
    v: int,
    r_divisor: int,
    g_max: Optional[int] = None,
    rstar_divisor: Optional[int] = None,
    max_work: int = 10**7,
) -> Tuple[Tuple[DesignParams, ...], Tuple[Rejection, ...]]:
    """admissible_tuples plus the per-branch rejection trace."""
    if v < 4 or r_divisor < 1:
        raise ValueError("need v >= 4 and a positive r divisor")
    cap = gcd(v - 1, rstar_divisor if rstar_divisor is not None else r_divisor)
    rstars = [e for e in divisors(cap) if e * e > v]
    if sum(rstars) > max_work:
        raise ValueError(
            f"tuple enumeration over {len(rstars)} divisors exceeds budget"
        )
    found: List[DesignParams] = []
    rejected: List[Rejection] = []
    for rstar in rstars:
        if r_divisor % rstar != 0:
            rejected.append(Rejection(rstar, None, None, None, "divisor-conflict"))
            continue
        g_pool = r_divisor // rstar
        w = (v - 1) // rstar
        for lamstar in range(1, rstar):
            if gcd(lamstar, rstar) != 1:
                continue
            k = 1 + lamstar * w
            if not 2 < k < v - 1:
                rejected.append(Rejection(rstar, lamstar, k, None, "completeness"))
                continue
            # b = v*g*rstar/k, so g must supply the factor k / (k, v*rstar)
            need = k // gcd(k, v * rstar)
            if g_pool % need != 0:
                rejected.append(
                    Rejection(rstar, lamstar, k, None, "divisor-conflict")
                )
                continue
            # g <= lamstar <= rstar-1 always, so cap the divisor scan there;
            # g_pool itself may be astronomically large
            cap_g = rstar - 1 if g_max is None else min(g_max, rstar - 1)
            for g in divisors_upto(g_pool, cap_g):
                if g < 2:
                    continue
                if lamstar < g:
                    rejected.append(Rejection(rstar, lamstar, k, g, "lambda-bound"))
                    continue
                r = g * rstar
                if (v * r) % k != 0:
                    rejected.append(
                        Rejection(rstar, lamstar, k, g, "b-nonintegral")
                    )
                    continue
                b = v * r // k
                if b < v:
                    rejected.append(Rejection(rstar, lamstar, k, g, "fisher"))
                    continue
                if not binomial_exceeds(v, k, b):
                    rejected.append(
                        Rejection(rstar, lamstar, k, g, "completeness")
                    )
                    continue
                params = DesignParams(v, b, r, k, g * lamstar)
                bad = [name for name, ok in check_basic(params) if not ok]
                assert not bad, (params, bad)
                found.append(params)
    return tuple(sorted(found)), tuple(rejected)


def divisibility_filter(
    params: DesignParams, orders: CaseOrders, p: int
) -> Tuple[Tuple[str, bool, Tuple[int, ...]], ...]:
    """Divisor and cube-order screens for one tuple against one case.

    Entries are (name, passed, witnesses).  The coprimality/p'-part clauses
    appear only when p divides v.  The cube bound is evaluated at the largest
    admissible group, |G| = |Out(X)|*|X| with |H| = |Out(X)|*|H0|, which is
    the weakest (hence sound) form of lambda*|G| < |H|^3.
    """
    if orders.order_h0 is None:
        raise ValueError("divisibility_filter needs an exact subgroup order")
    big = orders.order_out * orders.order_h0
    out: List[Tuple[str, bool, Tuple[int, ...]]] = []
    out.append(("r-divides-out-h0", big % params.r == 0, (params.r, big)))
    if params.v % p == 0:
        rstar = params.rstar
        out.append(("rstar-coprime-p", gcd(rstar, p) == 1, (rstar, p)))
        stripped = p_prime_part(big, p)
        out.append(
            ("rstar-divides-pprime-part", stripped % rstar == 0, (rstar, stripped))
        )
    lhs = params.lam * orders.order_x
    rhs = orders.order_out**2 * orders.order_h0**3
    out.append(("cube-bound", lhs < rhs, (lhs, rhs)))
    return tuple(out)


def subdegree_filter(v: int, s: int) -> Tuple[int, bool]:
    """R = gcd(v-1, s); a surviving case needs v < R^2.

    r* divides every subdegree and r* divides v-1, hence r* | R, and the
    hypothesis forces v < (r*)^2 <= R^2.
    """
    if v < 2 or s < 1:
        raise ValueError("need v >= 2 and s >= 1")
    big_r = gcd(v - 1, s)
    return big_r, v < big_r * big_r


def order_inequality_check(orders: CaseOrders, p: int) -> bool:
    """|X| < (|Out(X)|_{p'})^2 * |H0| * (|H0|_{p'})^2; True = survives.

    This is the master inequality combining lambda*v < r^2 with the divisor
    bound on r when p divides v; failing it eliminates the case.
    """
    if orders.order_h0 is None:
        raise ValueError("order_inequality_check needs an exact subgroup order")
    out_stripped = p_prime_part(orders.order_out, p)
    h0_stripped = p_prime_part(orders.order_h0, p)
    rhs = out_stripped**2 * orders.order_h0 * h0_stripped**2
    return orders.order_x < rhs


def two_point_divisor(order_out: int, order_h0: int, order_n: int) -> int:
    """Divisor bound for r* when N <= H is in every two-point stabilizer.

    r* divides |Out(X)|*|H0| / |N|; the division must be exact.
    """
    num = order_out * order_h0
    if order_n < 1 or num % order_n != 0:
        raise ArithmeticError(f"{order_n} does not divide {num}")
    return num // order_n


def best_subdegree_verdict(
    v: int, subdegrees: Sequence[int]
) -> Tuple[int, bool]:
    """Apply subdegree_filter with the gcd of several known subdegrees.

    r* divides each subdegree, hence their gcd; smaller R can only help
    eliminate.
    """
    if not subdegrees:
        raise ValueError("need at least one subdegree")
    return subdegree_filter(v, gcd(*subdegrees))
