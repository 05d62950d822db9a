"""Lower bounds on Hamming correlation and optimality verdicts.

All arithmetic is on integers; ceilings use ``-(-a // b)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .correlation import CorrelationProfile, FhsSet
from .exceptions import InvalidInputError, NotApplicableError

LG = "lempel-greenberger"
PF_FIRST = "peng-fan-first"
PF_SECOND = "peng-fan-second"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def lempel_greenberger(n: int, l: int) -> int:
    """Lower bound on ``H(X)`` for one sequence of length ``n`` over ``l`` symbols."""
    if n < 2:
        raise InvalidInputError(f"need n >= 2, got {n}")
    if l < 1:
        raise InvalidInputError(f"need l >= 1, got {l}")
    eps = n % l
    return _ceil_div((n - eps) * (n + eps - l), l * (n - 1))


def simplified_lempel_greenberger(n: int, l: int) -> int:
    """``floor(n / l)``, or 0 when ``n == l``."""
    if l < 1:
        raise InvalidInputError(f"need l >= 1, got {l}")
    return 0 if n == l else n // l


def peng_fan(n: int, M: int, l: int) -> tuple[int, int]:
    """Both Peng-Fan lower bounds on ``H(S)``.

    Returns
    -------
    (first, second)
        ``ceil((nM - l) n / ((nM - 1) l))`` and
        ``ceil((2 I n M - (I + 1) I l) / ((nM - 1) M))`` with ``I = floor(nM / l)``.
    """
    if l < 1:
        raise InvalidInputError(f"need l >= 1, got {l}")
    if M < 1 or n * M < 2:
        raise InvalidInputError(f"need M >= 1 and nM >= 2, got n={n}, M={M}")
    nm = n * M
    first = _ceil_div((nm - l) * n, (nm - 1) * l)
    i = nm // l
    second = _ceil_div(2 * i * nm - (i + 1) * i * l, (nm - 1) * M)
    return first, second


@dataclass(frozen=True)
class SimplifiedBound:
    k: int
    eps: int
    bound: int


def simplified_peng_fan(n: int, M: int, l: int) -> SimplifiedBound:
    """Closed form of the second Peng-Fan bound: ``k`` if ``eps M < l`` else ``k + 1``."""
    if M <= 1:
        raise NotApplicableError("the simplified Peng-Fan bound needs M > 1")
    if l < 1 or n < 1:
        raise InvalidInputError(f"need n, l >= 1, got n={n}, l={l}")
    eps = n % l
    k = (n - eps) // l
    return SimplifiedBound(k, eps, k if eps * M < l else k + 1)


@dataclass(frozen=True)
class Verdict:
    """Measured correlation of a set compared against every applicable bound.

    ``optimal_by`` names the bounds that the measured value meets with
    equality. Sets with ``M == 1`` are judged by the Lempel-Greenberger bound
    only; Peng-Fan values are still reported.
    """

    n: int
    M: int
    l: int
    measured: int
    lg_bound: int
    pf_first: int
    pf_second: int
    simplified: SimplifiedBound | None
    optimal_by: tuple[str, ...]

    @property
    def optimal(self) -> bool:
        return bool(self.optimal_by)

    @property
    def classification(self) -> str:
        if self.optimal:
            return "optimal (" + ", ".join(self.optimal_by) + ")"
        return "not-optimal"

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "l": self.l,
            "measured": self.measured,
            "lempel_greenberger": self.lg_bound,
            "peng_fan_first": self.pf_first,
            "peng_fan_second": self.pf_second,
            "simplified": None if self.simplified is None else {
                "k": self.simplified.k, "eps": self.simplified.eps, "bound": self.simplified.bound},
            "optimal": self.optimal,
            "optimal_by": list(self.optimal_by),
            "classification": self.classification,
        }


def classify_parameters(n: int, M: int, l: int, measured: int) -> Verdict:
    """Verdict for an ``(n, M, measured; l)`` set.

    Raises
    ------
    InvalidInputError
        If ``measured`` lies below a proven lower bound, which means the
        measurement (or the claim) is wrong.
    """
    if measured < 0:
        raise InvalidInputError("measured correlation must be nonnegative")
    lg = lempel_greenberger(n, l)
    first, second = peng_fan(n, M, l)
    simple = simplified_peng_fan(n, M, l) if M > 1 else None
    if M == 1:
        floor, candidates = lg, {LG: lg}
    else:
        floor, candidates = max(first, second), {PF_FIRST: first, PF_SECOND: second}
    if measured < floor:
        raise InvalidInputError(
            f"H(S)={measured} is below the lower bound {floor} for (n={n}, M={M}, l={l})")
    met = tuple(name for name, value in candidates.items() if value == measured)
    return Verdict(n, M, l, measured, lg, first, second, simple, met)


def classify(s: FhsSet, profile: CorrelationProfile) -> Verdict:
    if profile.n != s.n or profile.M != s.M:
        raise InvalidInputError("profile was not computed from this set")
    return classify_parameters(s.n, s.M, s.l, profile.value)
