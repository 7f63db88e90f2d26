"""
Isomorphism invariants and exhaustive searches over small prime fields.

Nothing here decides isomorphism over Q: fingerprints are exact invariants,
F_p searches are exact over F_p, and anything combining the two into a
statement about Q is labelled heuristic.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .axioms import (
    check_bialgebra,
    check_infinitesimal,
    compat_counit_components,
    counit_components,
    infinitesimal_components,
    unit_image_components,
)
from .core import Bundle, ComultTensor, LinearEndo, MultTensor, StructureError, is_morphism
from .linalg import nullity, rank, solve_affine
from .scalars import Field, FieldError, Scalar
from .worker import EnumerationWorker

logger = logging.getLogger(__name__)

MAX_SEARCH_DIM = 3


class BudgetExceededError(Exception):
    """Raised when a search would enumerate more candidates than allowed."""

    def __init__(self, message: str, candidates: int = 0, budget: int = 0) -> None:
        self.message = message
        self.candidates = candidates
        self.budget = budget
        super().__init__(self.message)


class SearchError(Exception):
    """Raised when a search is asked for something it cannot enumerate."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


@dataclass(frozen=True)
class Fingerprint:
    """Transport-invariant summary of a bundle, one entry per member."""

    commutative: Tuple[bool, ...]
    cocommutative: Tuple[bool, ...]
    dim_commutator: Tuple[int, ...]
    dim_annihilator: Tuple[int, ...]
    dim_primitives: Tuple[Optional[int], ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "commutative": list(self.commutative),
            "cocommutative": list(self.cocommutative),
            "dim_commutator": list(self.dim_commutator),
            "dim_annihilator": list(self.dim_annihilator),
            "dim_primitives": list(self.dim_primitives),
        }


def _commutator_rank(m: MultTensor) -> int:
    n = m.dim
    rows = [[m.c[i][j][k] - m.c[j][i][k] for k in range(n)] for i in range(n) for j in range(n)]
    return rank(rows, m.field)


def _annihilator_dim(m: MultTensor) -> int:
    n = m.dim
    # rows indexed by (side, j, k), columns by the coordinate i of x
    rows = [[m.c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    rows += [[m.c[j][i][k] for i in range(n)] for j in range(n) for k in range(n)]
    return nullity(rows, n, m.field)


def _primitives_dim(c: ComultTensor, unit: Sequence[Scalar]) -> int:
    n = c.dim
    zero = c.field.zero
    rows = []
    for a in range(n):
        for b in range(n):
            row = []
            for i in range(n):
                value = c.d[i][a][b]
                if i == a:
                    value = value - unit[b]
                if i == b:
                    value = value - unit[a]
                row.append(value if value else zero)
            rows.append(row)
    return nullity(rows, n, c.field)


def fingerprint(b: Bundle) -> Fingerprint:
    """Exact invariants: commutativity, commutator and annihilator dimensions, primitives."""
    unit = b.unit
    return Fingerprint(
        commutative=tuple(m.is_commutative() for m in b.mults),
        cocommutative=tuple(c.is_cocommutative() for c in b.comults),
        dim_commutator=tuple(_commutator_rank(m) for m in b.mults),
        dim_annihilator=tuple(_annihilator_dim(m) for m in b.mults),
        dim_primitives=tuple(_primitives_dim(c, unit) if unit is not None else None for c in b.comults),
    )


def _search_settings(budget: Optional[int]) -> Tuple[int, EnumerationWorker]:
    from .settings import get_settings

    limit = get_settings().search.budget if budget is None else budget
    return limit, EnumerationWorker.from_settings()


def _check_budget(what: str, p: int, free: int, budget: int) -> int:
    candidates = p**free
    if candidates > budget:
        raise BudgetExceededError(
            f"{what}: {p}^{free} = {candidates} candidates exceed the budget of {budget}",
            candidates,
            budget,
        )
    return candidates


def _prime_field(fld: Field, what: str) -> int:
    if fld.is_rational:
        raise FieldError(f"{what} needs structures over F_p; reduce them with .over(Field.prime(p)) first")
    return fld.characteristic


def _digits(index: int, p: int, width: int) -> List[int]:
    # most significant digit first, so index order is lexicographic
    out = [0] * width
    for position in range(width - 1, -1, -1):
        index, out[position] = divmod(index, p)
    return out


def isom_search_fp(b1: Bundle, b2: Bundle, p: int, budget: Optional[int] = None) -> Optional[LinearEndo]:
    """
    Find an invertible f with transport(b1, f) = b2 by exhausting unit-preserving maps.

    Candidates are the identity (with the unit column sent to the target unit)
    plus digit offsets in lexicographic order, so b1 == b2 returns the identity.
    The map returned is the first isomorphism in that order, whatever the
    worker count or chunk size.
    """
    fld = Field.prime(p)
    for b in (b1, b2):
        if b.field != fld:
            _prime_field(b.field, "isom_search_fp")
            raise FieldError(f"Expected structures over {fld}, got {b.field}")
    if b1.kind is not b2.kind:
        raise StructureError(f"Kind mismatch: {b1.kind.value} vs {b2.kind.value}")
    if b1.dim != b2.dim:
        raise StructureError(f"Dimension mismatch: {b1.dim} vs {b2.dim}")
    n = b1.dim
    if n > MAX_SEARCH_DIM:
        raise SearchError(f"Isomorphism search supports dimension up to {MAX_SEARCH_DIM}, got {n}")

    limit, worker = _search_settings(budget)
    base = [[fld.one if r == c else fld.zero for c in range(n)] for r in range(n)]
    free_positions = [(r, c) for r in range(n) for c in range(n)]
    u1, u2 = b1.unit, b2.unit
    source_index = b1.mults[0].unit_index if b1.mults else None
    target_index = b2.mults[0].unit_index if b2.mults else None
    if (u1 is None) != (u2 is None):
        return None
    if source_index is not None and target_index is not None:
        column = source_index - 1
        for r in range(n):
            base[r][column] = fld.one if r == target_index - 1 else fld.zero
        free_positions = [(r, c) for r, c in free_positions if c != column]

    total = _check_budget("isom_search_fp", p, len(free_positions), limit)

    def candidate(index: int) -> Optional[LinearEndo]:
        rows = [list(row) for row in base]
        for (r, c), digit in zip(free_positions, _digits(index, p, len(free_positions))):
            rows[r][c] = rows[r][c] + digit
        f = LinearEndo(tuple(tuple(row) for row in rows), fld)
        if u1 is not None and f.apply(u1) != u2:
            return None
        if not f.is_invertible():
            return None
        return f if is_morphism(b1, b2, f) else None

    found = worker.first(candidate, total, desc=f"isom F{p}")
    logger.info(f"isom_search_fp over F{p}: {'found' if found is not None else 'no'} isomorphism among {total} candidates")
    return found


# Discovery.


def _free_variables(n: int) -> List[Tuple[int, int, int]]:
    return [(i, j, k) for i in range(1, n) for j in range(n) for k in range(n)]


def _build_cube(n: int, first_row: List[List[Scalar]], variables: List[Tuple[int, int, int]], values: Sequence[Scalar], zero: Scalar) -> Tuple:
    raw = [[[zero] * n for _ in range(n)] for _ in range(n)]
    raw[0] = [list(row) for row in first_row]
    for (i, j, k), value in zip(variables, values):
        raw[i][j][k] = value
    return tuple(tuple(tuple(col) for col in row) for row in raw)


def _linear_residuals(
    residuals: Callable[[Tuple], Iterator[Tuple[str, Tuple[int, ...], Scalar]]],
    n: int,
    first_row: List[List[Scalar]],
    variables: List[Tuple[int, int, int]],
    fld: Field,
) -> Optional[Tuple[List[Scalar], List[List[Scalar]]]]:
    """Solve residuals(D) = 0 for residuals affine in the free entries of D."""
    zero = fld.zero
    count = len(variables)

    def evaluate(values: Sequence[Scalar]) -> List[Scalar]:
        return [value for _, _, value in residuals(_build_cube(n, first_row, variables, values, zero))]

    origin = evaluate([zero] * count)
    columns = []
    for c in range(count):
        point = [zero] * count
        point[c] = fld.one
        columns.append([v - o for v, o in zip(evaluate(point), origin)])
    rows = [[columns[c][r] for c in range(count)] for r in range(len(origin))]
    return solve_affine(rows, [-o for o in origin], count, fld)


def discover_fp(
    m: MultTensor,
    p: int,
    theta: Optional[object] = None,
    budget: Optional[int] = None,
) -> List[ComultTensor]:
    """
    Every comultiplication compatible with m over F_p.

    theta None asks for bialgebras; otherwise for θ-infinitesimal pairs, with a
    counit only when θ = 1. The unit must be e1. The budget bounds the naive
    candidate count; constraints affine in D are solved exactly and only their
    solution space is enumerated.
    """
    fld = Field.prime(p)
    if m.field != fld:
        _prime_field(m.field, "discover_fp")
        raise FieldError(f"Expected a multiplication over {fld}, got {m.field}")
    n = m.dim
    if n > MAX_SEARCH_DIM:
        raise SearchError(f"Discovery supports dimension up to {MAX_SEARCH_DIM}, got {n}")
    if m.unit_index != 1 or not m.satisfies_unit_law():
        raise SearchError("Discovery needs a unital multiplication with unit e1")

    th = fld(theta) if theta is not None else None
    counital = th is None or th == fld.one
    mode = "bialgebra" if th is None else f"infinitesimal({th})"
    zero, one = fld.zero, fld.one
    variables = _free_variables(n)
    free = len(variables) + (n - 1 if counital else 0)

    limit, worker = _search_settings(budget)
    _check_budget(f"discover_fp[{mode}]", p, free, limit)

    first_row = [[zero] * n for _ in range(n)]
    first_row[0][0] = one if th is None else th
    unit = tuple(one if k == 0 else zero for k in range(n))

    if counital:
        counits = []
        for index in range(p ** (n - 1)):
            xi = (one,) + tuple(fld(d) for d in _digits(index, p, n - 1))
            if th is None and any(v for _, _, v in compat_counit_components(m.c, xi, unit, zero, one)):
                continue
            counits.append(xi)
    else:
        counits = [None]

    results: List[ComultTensor] = []
    for xi in counits:

        def residuals(d: Tuple, xi: Any = xi) -> Iterator[Tuple[str, Tuple[int, ...], Scalar]]:
            if xi is not None:
                yield from counit_components(d, xi, zero, one)
            yield from unit_image_components(d, unit, zero) if counital else iter(())
            if th is not None:
                yield from infinitesimal_components(m.c, d, unit, th, zero, "infinitesimal")

        solution = _linear_residuals(residuals, n, first_row, variables, fld)
        if solution is None:
            continue
        particular, kernel = solution

        def candidate(index: int, particular: List[Scalar] = particular, kernel: List[List[Scalar]] = kernel, xi: Any = xi) -> Optional[ComultTensor]:
            values = list(particular)
            for digit, vector in zip(_digits(index, p, len(kernel)), kernel):
                if digit:
                    values = [v + digit * w for v, w in zip(values, vector)]
            c = ComultTensor(_build_cube(n, first_row, variables, values, zero), fld, xi)
            report = check_bialgebra(m, c) if th is None else check_infinitesimal(m, c, theta=th)
            return c if report.passed else None

        results += worker.map_ordered(candidate, p ** len(kernel), desc=f"discover F{p} {mode}")

    results.sort(key=_lexicographic_key)
    logger.info(f"discover_fp over F{p} in {mode} mode: {len(results)} comultiplications")
    return results


def _lexicographic_key(c: ComultTensor) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    entries = tuple(int(v) for plane in c.d for row in plane for v in row)  # type: ignore[call-overload]
    counit = tuple(int(v) for v in c.counit) if c.counit is not None else ()  # type: ignore[call-overload]
    return entries, counit


@dataclass
class PrimeComparison:
    """Q fingerprints plus F_p searches for a pair of bundles over Q."""

    fingerprints_equal: bool
    isomorphic_mod: Dict[int, Optional[bool]] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if not self.fingerprints_equal:
            return "not isomorphic over Q (fingerprints differ)"
        decided = {p: found for p, found in self.isomorphic_mod.items() if found is not None}
        if sum(1 for found in decided.values() if not found) >= 2:
            return "likely non-isomorphic over Q (heuristic: no isomorphism modulo two primes)"
        if decided and all(decided.values()):
            return "undecided over Q (heuristic: isomorphic modulo every tested prime)"
        return "undecided over Q (heuristic)"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fingerprints_equal": self.fingerprints_equal,
            "isomorphic_mod": {str(p): found for p, found in self.isomorphic_mod.items()},
            "verdict": self.verdict,
        }


def compare_over_primes(
    b1: Bundle, b2: Bundle, primes: Sequence[int] = (2, 3), budget: Optional[int] = None
) -> PrimeComparison:
    """Combine exact Q fingerprints with F_p isomorphism searches; never lifts an F_p verdict to Q."""
    result = PrimeComparison(fingerprint(b1) == fingerprint(b2))
    for p in primes:
        fld = Field.prime(p)
        try:
            r1, r2 = b1.over(fld), b2.over(fld)
        except (FieldError, StructureError) as e:
            logger.info(f"compare_over_primes: cannot reduce modulo {p}: {e}")
            result.isomorphic_mod[p] = None
            continue
        result.isomorphic_mod[p] = isom_search_fp(r1, r2, p, budget) is not None
    return result
