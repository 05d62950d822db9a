"""Constructions of optimal FHS sets and the combinators that glue them together.

Each construction checks its output structurally with the verifiers in
:mod:`fhsets.designs` and raises :class:`ConstructionError` if that check
fails, which would indicate a bug. Exhaustive correlation scans are left to
the caller (see :func:`fhsets.correlation.set_correlation`).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, prod
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .algebra import (SigmaMap, build_field, crt_solve, factorize, is_prime, least_prime_factor,
                      multiplicative_order, primitive_root_prime_power_stable)
from .correlation import FhsSet
from .designs import (Block, BlockFamily, Bncdp, Bncrdp, Cdm, bncdp_to_fhs_set, fhs_set_to_bncdp,
                      homogenize_cdm, normalize_cdm, verify_bncdp, verify_bncrdp, verify_cdm)
from .exceptions import ConstructionError, FixtureError, InvalidInputError, UnsupportedParametersError
from .files import content_hash


def _provenance(family: str, params: Mapping[str, Any], **intermediates) -> dict[str, Any]:
    prov: dict[str, Any] = {"family": family, "params": dict(params)}
    if intermediates:
        prov["intermediates"] = {k: content_hash(v) for k, v in intermediates.items()}
    return prov


def _ensure(check, what: str) -> None:
    if not check:
        raise ConstructionError(f"{what} failed verification: {check.reason}")


def _least_primitive_root(p: int) -> int:
    return next(g for g in range(1, p) if multiplicative_order(g, p) == p - 1)


# -- Construction A: n = p(p^m - 1) --------------------------------------------

def construction_a(p: int, m: int, u: int) -> FhsSet:
    """``X^a(t) = sigma(alpha^t) + t + a`` over GF(p^u), one sequence per ``a`` in ``R``.

    ``R`` holds the field elements ``a_1 beta + ... + a_{u-1} beta^{u-1}``
    of GF(p^u); it is enumerated with ``a_1`` varying slowest. Frequencies are
    the elements of GF(p^u) numbered by ``sum c_i p^i``.

    Returns
    -------
    FhsSet
        ``(p(p^m - 1), p^(u-1), p^(m-u+1); p^u)``.
    """
    if not is_prime(p):
        raise InvalidInputError(f"p={p} must be prime")
    if m < 2:
        raise InvalidInputError(f"need m >= 2, got m={m}")
    if not 1 < u <= m:
        raise InvalidInputError(f"need 1 < u <= m, got u={u}, m={m}")
    big, small = build_field(p, m), build_field(p, u)
    sigma = SigmaMap(big, small)
    q1 = p**m - 1
    n = p * q1
    weights = [p**i for i in range(u)]
    base = [small.add(sigma(big.exp(t % q1)), small.scalar(t % p)) for t in range(n)]
    rows = []
    for coeffs in product(range(p), repeat=u - 1):
        shift = (0, *coeffs)
        rows.append([sum(c * wt for c, wt in zip(small.add(x, shift), weights)) for x in base])
    s = FhsSet.from_rows(rows, p**u, p ** (m - u + 1), _provenance(
        "a", {"p": p, "m": m, "u": u},
    ))
    s.provenance["field_modulus"] = list(big.modulus)
    d = fhs_set_to_bncdp(s)
    _ensure(verify_bncdp(d), "construction A")
    return s


# -- tv ------------------------------------------------------------------------

def tv_bncdp(t: int, v: int) -> Bncdp:
    """Partition-type BNCDP over ``Z_{tv}`` with ``floor((p_1 - 1)/t)`` families of size ``v``."""
    if v < 3 or v % 2 == 0:
        raise InvalidInputError(f"v must be odd and at least 3, got v={v}")
    fact = factorize(v)
    p1 = fact.least_prime
    if not 1 < t < p1:
        raise InvalidInputError(f"need 1 < t < p_1={p1} (least prime factor of v), got t={t}")
    a = (p1 - 1) // t
    n = t * v
    moduli = fact.prime_powers
    # theta_i is congruent to i + 1 modulo every prime power dividing v
    theta = [crt_solve((i + 1, q) for q in moduli) for i in range(a * t)]
    families = []
    for u in range(a):
        blocks = [tuple((b + c * t * theta[b + u * t]) % n for b in range(t)) for c in range(v)]
        families.append(BlockFamily(n, tuple(blocks), partition=True))
    d = Bncdp(n, tuple(families), t)
    _ensure(verify_bncdp(d), "tv packing")
    return d


def construct_tv(t: int, v: int) -> FhsSet:
    """``(tv, floor((p_1-1)/t), t; v)`` set, ``p_1`` the least prime factor of odd ``v``."""
    d = tv_bncdp(t, v)
    return bncdp_to_fhs_set(d, _provenance("tv", {"t": t, "v": v}))


# -- 3p ------------------------------------------------------------------------

@dataclass(frozen=True)
class ThreePResult:
    """Output of :func:`construct_3p`.

    ``bncrdp`` is ``bncdp`` with the block ``{0, p, 2p}`` removed from each
    family; it avoids the subgroup ``p Z_{3p}``.
    """

    fhs_set: FhsSet
    bncdp: Bncdp
    bncrdp: Bncrdp


def _threep_blocks(p: int) -> tuple[list[Block], list[Block]]:
    """The paired blocks ``A_j^i`` and ``B_j^i`` in ``Z_{3p}``, ordered by ``i`` then ``j``."""
    alpha = _least_primitive_root(p)
    t = (p - 1) // 4

    def pt(z: int, x: int) -> int:
        return crt_solve([(z % 3, 3), (x % p, p)])

    def shape(e1: int, e2: int, dz: int) -> Block:
        x1, x2 = pow(alpha, e1, p), pow(alpha, e2, p)
        return tuple(sorted({pt(dz, x1), pt(dz, -x1), pt(1 + dz, x2), pt(1 + dz, -x2)}))

    a_blocks, b_blocks = [], []
    for i in range(t):
        for da, db in ((0, 0), (1, 2), (2, 1)):
            a_blocks.append(shape(i, i + t, da))
            b_blocks.append(shape(i + 1, i + t + 1, db))
    return a_blocks, b_blocks


def construct_3p(p: int) -> ThreePResult:
    """``(3p, 2, 4; (3p+1)/4)`` set for a prime ``p = 1 (mod 4)`` with ``p >= 13``.

    The blocks live in ``Z_3 x Z_p``; pairs ``(z, x)`` are stored as the
    residue ``x' in Z_{3p}`` with ``x' = z (mod 3)`` and ``x' = x (mod p)``.
    Block ``A_j^i`` (family 0) is paired with ``B_j^i`` (family 1), ordered by
    ``i`` then ``j``, and the block ``{0, p, 2p}`` comes last.

    ``p = 5`` is rejected: there ``alpha^(t-1) = 1`` and paired blocks share
    elements, which pushes the correlation to 7.
    """
    if not is_prime(p) or p % 4 != 1:
        raise InvalidInputError(f"p must be a prime congruent to 1 mod 4, got {p}")
    if p == 5:
        raise UnsupportedParametersError(
            "p=5 is not supported: with t=(p-1)/4=1 the paired blocks overlap and the "
            "correlation reaches 7; no (15, 3, {{4},{4}}, 4) relative packing exists")
    n = 3 * p
    a_blocks, b_blocks = _threep_blocks(p)
    axis = (0, p, 2 * p)
    rel = Bncrdp(n, p, (BlockFamily(n, tuple(a_blocks)), BlockFamily(n, tuple(b_blocks))), 4)
    _ensure(verify_bncrdp(rel), "3p relative packing")
    full = Bncdp(n, (BlockFamily(n, tuple(a_blocks) + (axis,), True),
                     BlockFamily(n, tuple(b_blocks) + (axis,), True)), 4)
    _ensure(verify_bncdp(full), "3p packing")
    s = bncdp_to_fhs_set(full, _provenance("threep", {"p": p}))
    s.provenance["alpha"] = _least_primitive_root(p)
    return ThreePResult(s, full, rel)


# -- cyclotomic packings ---------------------------------------------------------

def _cyclotomic_units(v: int, e: int) -> tuple[int, int, int]:
    """``(g, a, f)``: ``g`` of order ``e`` and ``a`` primitive modulo every prime power of ``v``."""
    if v < 3 or v % 2 == 0:
        raise InvalidInputError(f"v must be odd and at least 3, got v={v}")
    if e < 2:
        raise InvalidInputError(f"need e > 1, got e={e}")
    fact = factorize(v)
    bad = [q for q in fact.primes if (q - 1) % e]
    if bad:
        raise InvalidInputError(f"e={e} must divide p-1 for every prime p dividing v; fails for p={bad[0]}")
    g_parts, a_parts = [], []
    for q, k in fact.factors:
        gi = primitive_root_prime_power_stable(q)
        fi = (q - 1) // e
        g_parts.append((pow(gi, fi * q ** (k - 1), q**k), q**k))
        a_parts.append((gi, q**k))
    f = min((q - 1) // e for q in fact.primes)
    return crt_solve(g_parts), crt_solve(a_parts), f


def cyclotomic_bncrdp(v: int, e: int) -> Bncrdp:
    """``f`` families of blocks ``{r a^t g^j : 0 <= j < e}`` partitioning ``Z_v \\ {0}``.

    ``g`` has order ``e`` and ``a`` is primitive modulo each prime power
    ``p_i^m_i`` dividing ``v`` (``g = g_i^(f_i p_i^(m_i - 1))`` with
    ``f_i = (p_i - 1)/e``). The representatives ``r`` are the least elements
    of the cosets ``x <g>``, in increasing order. Index ``e``, forbidden
    subgroup ``{0}``.
    """
    g, a, f = _cyclotomic_units(v, e)
    reps, seen = [], set()
    for x in range(1, v):
        if x not in seen:
            reps.append(x)
            seen.update(x * pow(g, j, v) % v for j in range(e))
    families = []
    for t in range(f):
        at = pow(a, t, v)
        blocks = [tuple(r * at * pow(g, j, v) % v for j in range(e)) for r in reps]
        families.append(BlockFamily(v, tuple(blocks)))
    d = Bncrdp(v, v, tuple(families), e)
    _ensure(verify_bncrdp(d), "cyclotomic relative packing")
    return d


def bncdp_from_cyclotomic(v: int, e: int) -> tuple[Bncdp, FhsSet]:
    """Append ``{0}`` to every family of :func:`cyclotomic_bncrdp`.

    Returns the partition-type packing and the ``(v, f, e; (v-1)/e + 1)`` set
    (index ``e - 1`` when ``f == 1``).
    """
    rel = cyclotomic_bncrdp(v, e)
    # a lone family only sees internal differences, each (e - 1) times
    lam = e if rel.M > 1 else e - 1
    d = Bncdp(v, tuple(BlockFamily(v, f.blocks + ((0,),), True) for f in rel.families), lam)
    _ensure(verify_bncdp(d), "cyclotomic packing")
    return d, bncdp_to_fhs_set(d, _provenance("cyclotomic", {"v": v, "e": e}))


# -- difference matrices ---------------------------------------------------------

def multiplication_table_cdm(q: int, rows: int | None = None) -> Cdm:
    """Rows ``i * (0, 1, ..., q-1) mod q`` for ``i < rows`` (default ``q``).

    A difference matrix whenever every nonzero row index difference is a unit,
    for instance when ``q`` is prime or ``rows`` is at most the least prime
    factor of ``q``.
    """
    rows = q if rows is None else rows
    if q < 1 or rows < 1:
        raise InvalidInputError(f"need q, rows >= 1, got q={q}, rows={rows}")
    cols = np.arange(q, dtype=np.int64)
    return Cdm(q, tuple(map(tuple, np.outer(np.arange(rows), cols) % q)))


def product_cdm(first: Cdm, second: Cdm) -> Cdm:
    """CRT product: entry ``(r, c)`` solves ``x = first[r][c mod w1]``, ``x = second[r][c mod w2]``."""
    w1, w2 = first.modulus, second.modulus
    if gcd(w1, w2) != 1:
        raise InvalidInputError(f"moduli {w1} and {w2} are not coprime")
    if first.rows != second.rows:
        raise InvalidInputError("factor matrices have different row counts")
    w = w1 * w2
    cols = np.arange(w)
    a1, a2 = first.as_array()[:, cols % w1], second.as_array()[:, cols % w2]
    e1 = w2 * pow(w2, -1, w1) if w1 > 1 else 0
    e2 = w1 * pow(w1, -1, w2) if w2 > 1 else 0
    return Cdm(w, tuple(map(tuple, (a1 * e1 + a2 * e2) % w)))


def cdm_for(w: int, t: int) -> Cdm:
    """Homogeneous ``(w, t, 1)``-CDM for odd ``w`` whose least prime factor exceeds ``t``.

    ``w == 1`` gives the ``t x 1`` zero matrix, which makes expansion a no-op.
    """
    if t < 1:
        raise InvalidInputError(f"need t >= 1, got t={t}")
    if w < 1:
        raise InvalidInputError(f"need w >= 1, got w={w}")
    if w == 1:
        return Cdm(1, ((0,),) * t, homogeneous=True)
    if w % 2 == 0:
        raise UnsupportedParametersError(f"w={w} must be odd")
    lpf = least_prime_factor(w)
    if lpf <= t:
        raise UnsupportedParametersError(f"least prime factor {lpf} of w={w} must exceed t={t}")
    parts = [multiplication_table_cdm(q, t + 1) for q in factorize(w).prime_powers]
    D = parts[0]
    for part in parts[1:]:
        D = product_cdm(D, part)
    D = homogenize_cdm(normalize_cdm(D))
    _ensure(verify_cdm(D), "difference matrix")
    return D


# -- expansion and filling ---------------------------------------------------------

def _homogeneous_rows(D: Cdm) -> np.ndarray:
    check = verify_cdm(Cdm(D.modulus, D.entries, homogeneous=True))
    if not check:
        raise InvalidInputError(f"expected a homogeneous difference matrix: {check.reason}")
    return D.as_array()


def _stack(families: Sequence[BlockFamily], n: int, D: Cdm) -> list[list[Block]]:
    """Blow every block position ``i`` up into ``w`` positions ``(i, s)``.

    Element ``k`` of the blocks ``B_i^0, ..., B_i^(M-1)`` (taken in that order)
    uses row ``k`` of ``D``.
    """
    arr = _homogeneous_rows(D)
    w = D.modulus
    size = families[0].size
    need = max(sum(len(f.blocks[i]) for f in families) for i in range(size)) if size else 0
    if D.rows < need:
        raise InvalidInputError(f"difference matrix has {D.rows} rows, need at least {need}")
    out: list[list[Block]] = [[] for _ in families]
    for i in range(size):
        row = 0
        spans = []
        for f in families:
            k = len(f.blocks[i])
            spans.append((np.array(f.blocks[i], dtype=np.int64), arr[row:row + k]))
            row += k
        for j, (elems, gamma) in enumerate(spans):
            lifted = (elems[:, None] + n * gamma) % (n * w)
            for s in range(w):
                out[j].append(tuple(int(x) for x in lifted[:, s]))
    return out


def expand_bncrdp_by_cdm(d: Bncrdp, D: Cdm) -> Bncrdp:
    """Lift a relative packing over ``Z_{mg}`` to ``Z_{mgw}`` with a homogeneous ``(w, t, 1)``-CDM.

    Block ``(i, s)`` of family ``j`` is ``{a + mg D[row(a)][s] : a in B_i^j}``,
    stored at position ``i * w + s``. The index and block sizes are preserved.
    """
    if d.lam is None:
        raise InvalidInputError("the relative packing carries no index")
    check = verify_bncrdp(d)
    if not check:
        raise InvalidInputError(f"input relative packing does not verify: {check.reason}")
    stacked = _stack(d.families, d.modulus, D)
    n = d.modulus * D.modulus
    out = Bncrdp(n, d.m, tuple(BlockFamily(n, tuple(b)) for b in stacked), d.lam, d.partition)
    _ensure(verify_bncrdp(out), "expanded relative packing")
    return out


def fill_bncrdp_with_bncdp(d: Bncrdp, a: Bncdp) -> Bncdp:
    """Append ``m * A`` for every block ``A`` of ``a`` to the matching family of ``d``.

    ``a`` must be a partition-type packing over ``Z_g`` with the same number
    of families. The result partitions ``Z_{mg}`` and has index
    ``max(lam_d, lam_a)``.
    """
    if a.M != d.M:
        raise InvalidInputError(f"family counts differ: {d.M} vs {a.M}")
    if a.modulus != d.g:
        raise InvalidInputError(f"filler modulus {a.modulus} must equal the subgroup order {d.g}")
    if d.lam is None or a.lam is None:
        raise InvalidInputError("both packings must carry an index")
    if not d.partition:
        raise InvalidInputError("the relative packing must partition the subgroup complement")
    check = verify_bncdp(a)
    if not (check and a.partition):
        raise InvalidInputError(f"filler is not a partition-type packing: {check.reason or 'not flagged'}")
    n, m = d.modulus, d.m
    families = tuple(
        BlockFamily(n, fd.blocks + tuple(tuple(m * x for x in b) for b in fa.blocks), True)
        for fd, fa in zip(d.families, a.families)
    )
    out = Bncdp(n, families, max(d.lam, a.lam))
    _ensure(verify_bncdp(out), "filled packing")
    return out


def expand_fhs_set_by_cdm(s: FhsSet, w: int) -> FhsSet:
    """``(nw, M, lambda; lw)`` set from an ``(n, M, lambda; l)`` set.

    Needs odd ``w`` whose least prime factor exceeds the largest total number
    of occurrences of one frequency across all ``M`` sequences.
    """
    d = fhs_set_to_bncdp(s)
    t = max(sum(len(f.blocks[i]) for f in d.families) for i in range(d.size))
    D = cdm_for(w, t)
    stacked = _stack(d.families, s.n, D)
    n = s.n * w
    out = Bncdp(n, tuple(BlockFamily(n, tuple(b), True) for b in stacked), s.claimed_lambda)
    if s.claimed_lambda is not None:
        _ensure(verify_bncdp(out), "expanded set")
    prov = _provenance("nv", {"w": w}, base=s)
    return bncdp_to_fhs_set(out, prov)


def concatenate_fold(s: FhsSet, t: int, mode: str = "interleave") -> FhsSet:
    """Merge consecutive groups of ``t`` sequences into ``floor(M/t)`` sequences of length ``tn``.

    Parameters
    ----------
    s : FhsSet
    t : int
        Group size, ``1 <= t <= M``. Groups are taken in index order and
        leftover sequences are dropped.
    mode : {"interleave", "concatenate"}
        ``"interleave"`` sets ``Y_g(s t + k) = X_{g t + k}(s)``; every shift of
        ``Y`` then splits into ``t`` full periodic correlations of the ``X``'s,
        so the index is at most ``t`` times the input's. ``"concatenate"``
        writes the group's sequences one after another; it carries no such
        guarantee and the output has no claimed index.
    """
    if not 1 <= t <= s.M:
        raise InvalidInputError(f"need 1 <= t <= M={s.M}, got t={t}")
    arr = s.as_array()
    groups = [arr[g * t:(g + 1) * t] for g in range(s.M // t)]
    if mode == "interleave":
        rows = [grp.T.reshape(-1).tolist() for grp in groups]
        lam = None if s.claimed_lambda is None else t * s.claimed_lambda
    elif mode == "concatenate":
        rows = [grp.reshape(-1).tolist() for grp in groups]
        lam = None
    else:
        raise InvalidInputError(f"unknown mode {mode!r}")
    return FhsSet.from_rows(rows, s.l, lam, _provenance("kn", {"t": t, "mode": mode}, base=s))


# -- vw --------------------------------------------------------------------------

def _vw_constraints(v: int, e: int, w: int, e_prime: int) -> tuple[int, int]:
    """Check the constraints of the vw construction; returns ``(p_1, q_1)``."""
    def fail(msg: str):
        raise UnsupportedParametersError(msg)

    if v < 3 or v % 2 == 0:
        fail(f"v must be odd, got v={v}")
    if w < 3 or w % 2 == 0:
        fail(f"w must be odd, got w={w}")
    if not 2 <= e_prime <= e:
        fail(f"need 2 <= e' <= e, got e={e}, e'={e_prime}")
    pv, pw = factorize(v).primes, factorize(w).primes
    for q in pv:
        if (q - 1) % e:
            fail(f"e={e} must divide p-1 for every prime p dividing v; fails for p={q}")
    for q in pw:
        if (q - 1) % e_prime:
            fail(f"e'={e_prime} must divide q-1 for every prime q dividing w; fails for q={q}")
    p1, q1 = pv[0], pw[0]
    if not p1 > 2 * e:
        extra = " (only the weaker p_1 >= 2e holds)" if p1 == 2 * e else ""
        fail(f"need p_1 > 2e, got p_1={p1}, e={e}{extra}")
    if q1 < p1:
        fail(f"need q_1 >= p_1, got q_1={q1}, p_1={p1}")
    if v < e * e:
        fail(f"need v >= e^2, got v={v}, e={e}")
    return p1, q1


def vw_bncdp(v: int, e: int, w: int, e_prime: int) -> tuple[Bncdp, dict[str, Any]]:
    p1, _ = _vw_constraints(v, e, w, e_prime)
    f = (p1 - 1) // e
    rel = cyclotomic_bncrdp(v, e)
    D = cdm_for(w, p1 - 1)
    expanded = expand_bncrdp_by_cdm(rel, D)
    filler_full, _ = bncdp_from_cyclotomic(w, e_prime)
    if filler_full.M < f:
        raise UnsupportedParametersError(f"filler has {filler_full.M} families, need {f}")
    filler = Bncdp(w, filler_full.families[:f], e_prime)
    out = fill_bncrdp_with_bncdp(expanded, filler)
    prov = _provenance("vw", {"v": v, "e": e, "w": w, "e_prime": e_prime},
                       cyclotomic=rel, cdm=D, expanded=expanded, filler=filler)
    return out, prov


def construct_vw(v: int, e: int, w: int, e_prime: int) -> FhsSet:
    """``(vw, (p_1-1)/e, e; (v-1)w/e + (w-1)/e' + 1)`` set.

    Constraints: ``2 <= e' <= e``, ``q_1 >= p_1 > 2e``, ``v >= e^2``, ``e``
    divides ``p - 1`` for primes ``p | v`` and ``e'`` divides ``q - 1`` for
    primes ``q | w``; ``p_1``, ``q_1`` are the least prime factors of ``v``, ``w``.
    """
    d, prov = vw_bncdp(v, e, w, e_prime)
    return bncdp_to_fhs_set(d, prov)


# -- 3 p_1 ... p_u ---------------------------------------------------------------

def _threev_primes(primes: Sequence[int]) -> list[int]:
    ps = sorted(int(p) for p in primes)
    if not ps:
        raise InvalidInputError("need at least one prime")
    for p in ps:
        if not is_prime(p) or p % 4 != 1:
            raise InvalidInputError(f"every prime must be congruent to 1 mod 4, got {p}")
    if ps.count(5) > 1:
        raise InvalidInputError("the product must not be divisible by 25")
    if 5 in ps:
        raise UnsupportedParametersError("the prime 5 is not supported (see construct_3p)")
    return ps


def threev_bncdp(primes: Sequence[int]) -> Bncdp:
    """Partition-type packing over ``Z_{3 p_1 ... p_u}`` with two families and index 4."""
    ps = _threev_primes(primes)
    if len(ps) == 1:
        return construct_3p(ps[0]).bncdp
    rel = construct_3p(ps[0]).bncrdp
    expanded = expand_bncrdp_by_cdm(rel, cdm_for(prod(ps[1:]), 8))
    return fill_bncrdp_with_bncdp(expanded, threev_bncdp(ps[1:]))


def construct_3v(primes: Sequence[int]) -> FhsSet:
    """``(n, 2, 4; (n+1)/4)`` set for ``n = 3 p_1 ... p_u`` with every ``p_i = 1 (mod 4)``."""
    ps = _threev_primes(primes)
    return bncdp_to_fhs_set(threev_bncdp(ps), _provenance("threev", {"primes": ps}))


# -- qv ----------------------------------------------------------------------------

QV_BASE_KEYS = ("p", "p_prime", "m", "a", "b")


@dataclass(frozen=True)
class QvResult:
    bncdp: Bncdp
    fhs_set: FhsSet
    optimality_guaranteed: bool


def _check_qv_base(base: Bncrdp | None, params: Mapping[str, int] | None) -> tuple[int, ...]:
    if base is None:
        raise FixtureError("no base relative packing supplied")
    if params is None or any(k not in params for k in QV_BASE_KEYS):
        raise FixtureError(f"base parameters must include {', '.join(QV_BASE_KEYS)}")
    p, pp, m, a, b = (int(params[k]) for k in QV_BASE_KEYS)
    if not (is_prime(p) and is_prime(pp)):
        raise FixtureError(f"p={p} and p'={pp} must be prime")
    q1 = p**m - 1
    if a * b != q1:
        raise FixtureError(f"need p^m - 1 = ab, got {q1} != {a}*{b}")
    expected = {"modulus": pp * q1, "m": q1, "lam": pp * b, "M": a // pp, "size": a}
    actual = {"modulus": base.modulus, "m": base.m, "lam": base.lam, "M": base.M, "size": base.size}
    for key, want in expected.items():
        if actual[key] != want:
            raise FixtureError(f"base {key} is {actual[key]}, expected {want}")
    if not base.partition:
        raise FixtureError("base must partition the complement of its subgroup")
    check = verify_bncrdp(base)
    if not check:
        raise FixtureError(f"base does not verify: {check.reason}")
    return p, pp, m, a, b


def pipeline_qv(base: Bncrdp | None, v: int, e: int, w: int, e_prime: int,
                base_params: Mapping[str, int] | None = None) -> QvResult:
    """``(p'vw(p^m-1), floor(a/p'), p'b; avw + (v-1)w/e + (w-1)/e' + 1)`` set from an imported base.

    Parameters
    ----------
    base : Bncrdp
        ``(p'(p^m-1), p', {K_j}, p'b)`` relative packing of size ``a`` with
        ``floor(a/p')`` families, forbidden subgroup of order ``p'``.
    v, e, w, e_prime : int
        Parameters of the inner :func:`construct_vw` set.
    base_params : mapping
        ``p``, ``p_prime``, ``m``, ``a``, ``b`` describing ``base``.

    Notes
    -----
    ``optimality_guaranteed`` reports whether ``p'(b + 1) <= a``; the
    construction itself runs without that condition.
    """
    p, pp, m, a, b = _check_qv_base(base, base_params)
    q1 = p**m - 1
    p1, _ = _vw_constraints(v, e, w, e_prime)
    if not q1 < p1:
        raise UnsupportedParametersError(f"need p^m - 1 < p_1, got p^m - 1={q1}, p_1={p1}")
    if e > b:
        raise UnsupportedParametersError(f"need e <= b, got e={e}, b={b}")
    M = a // pp
    D = cdm_for(v * w, q1)
    expanded = expand_bncrdp_by_cdm(base, D)
    inner = construct_vw(v, e, w, e_prime)
    folded = concatenate_fold(inner, pp)
    if folded.M < M:
        raise UnsupportedParametersError(f"folded inner set has {folded.M} sequences, need {M}")
    fd = fhs_set_to_bncdp(folded)
    filler = Bncdp(fd.modulus, fd.families[:M], pp * e)
    check = verify_bncdp(filler)
    if not check:
        raise ConstructionError(f"folded inner set exceeds index {pp * e}: {check.reason}")
    out = fill_bncrdp_with_bncdp(expanded, filler)
    params = {"v": v, "e": e, "w": w, "e_prime": e_prime, **{k: int(base_params[k]) for k in QV_BASE_KEYS}}
    prov = _provenance("qv", params, base=base, cdm=D, expanded=expanded, filler=filler)
    guaranteed = pp * (b + 1) <= a
    prov["optimality_guaranteed"] = guaranteed
    return QvResult(out, bncdp_to_fhs_set(out, prov), guaranteed)


# -- catalog -----------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyInfo:
    tag: str
    params: tuple[str, ...]
    parameters: str
    constraints: str
    build: Callable[..., FhsSet] | None = None


CATALOG: tuple[FamilyInfo, ...] = (
    FamilyInfo("a", ("p", "m", "u"), "(p(p^m-1), p^(u-1), p^(m-u+1); p^u)",
               "p prime, 1 < u <= m", construction_a),
    FamilyInfo("tv", ("t", "v"), "(tv, floor((p_1-1)/t), t; v)",
               "v odd, 1 < t < p_1", construct_tv),
    FamilyInfo("threep", ("p",), "(3p, 2, 4; (3p+1)/4)",
               "p prime, p = 1 mod 4, p >= 13", lambda p: construct_3p(p).fhs_set),
    FamilyInfo("cyclotomic", ("v", "e"), "(v, f, e; (v-1)/e + 1), f = min (p_i-1)/e",
               "v odd, e > 1, e | p_i - 1 for all p_i | v",
               lambda v, e: bncdp_from_cyclotomic(v, e)[1]),
    FamilyInfo("threev", ("primes",), "(n, 2, 4; (n+1)/4), n = 3 p_1 ... p_u",
               "p_i = 1 mod 4, every p_i >= 13", construct_3v),
    FamilyInfo("nv", ("base", "w"), "(nw, M, lambda; lw) from an (n, M, lambda; l) base",
               "w odd, least prime factor of w > max total occurrences of a frequency",
               expand_fhs_set_by_cdm),
    FamilyInfo("vw", ("v", "e", "w", "e_prime"), "(vw, (p_1-1)/e, e; (v-1)w/e + (w-1)/e' + 1)",
               "2 <= e' <= e, q_1 >= p_1 > 2e, v >= e^2, e | p_i - 1, e' | q_j - 1", construct_vw),
    FamilyInfo("kn", ("base", "t"), "(tn, floor(M/t), t lambda; l) from an (n, M, lambda; l) base",
               "1 <= t <= M", concatenate_fold),
    FamilyInfo("qv", ("base", "v", "e", "w", "e_prime"),
               "(p'vw(p^m-1), floor(a/p'), p'b; avw + (v-1)w/e + (w-1)/e' + 1)",
               "imported base, p^m - 1 = ab, p'(b+1) <= a for optimality, p^m - 1 < p_1 <= q_1, e <= b",
               None),
)


def family_info(tag: str) -> FamilyInfo:
    for info in CATALOG:
        if info.tag == tag:
            return info
    raise InvalidInputError(f"unknown family {tag!r}; choose from {', '.join(i.tag for i in CATALOG)}")
