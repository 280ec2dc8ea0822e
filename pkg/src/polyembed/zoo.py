"""Ready-made losses, surrogates and links.

Everything here is a plain constructor; :func:`resolve` maps strings such as
``"zoo:abstain?n=4&scale=2"`` to the constructed object.
"""
from __future__ import annotations

from itertools import combinations, product
from typing import Callable, Mapping, Sequence
from urllib.parse import parse_qsl

from gmpy2 import mpq

from .discrete import DiscreteLoss
from .errors import GuardExceeded, InvalidSetFunction, ParseError
from .rational import ONE, ZERO, Q, fmt_vec, vec
from .surrogate import PolyhedralLoss

ABSTAIN = "⊥"
MAX_OUTCOMES = 8


def _labels(n: int) -> tuple:
    return tuple(str(i + 1) for i in range(n))


def _guard_n(n: int, limit: int = MAX_OUTCOMES):
    if n < 2:
        raise ValueError("at least two outcomes are required")
    if n > limit:
        raise GuardExceeded(f"n={n} exceeds the zoo guard of {limit}")


def _unit(n, i):
    return tuple(ONE if j == i else ZERO for j in range(n))


def set_name(S) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(S)) + "}"


# ---------------------------------------------------------------------------
# discrete losses


def zero_one(n: int, labels: Sequence[str] | None = None) -> DiscreteLoss:
    _guard_n(n)
    labels = tuple(labels) if labels is not None else _labels(n)
    return DiscreteLoss(labels, labels, [[0 if r == y else 1 for y in range(n)] for r in range(n)])


def abstain(n: int, alpha=mpq(1, 2), labels: Sequence[str] | None = None) -> DiscreteLoss:
    """Multiclass loss with an extra report that pays ``alpha`` on every outcome."""
    _guard_n(n)
    alpha = Q(alpha)
    if not 0 < alpha < 1:
        raise ValueError("abstain penalty must lie strictly between 0 and 1")
    base = zero_one(n, labels)
    return DiscreteLoss(base.outcomes, base.reports + (ABSTAIN,), base.matrix + ((alpha,) * n,))


def ordered_partition_chains(n: int) -> list:
    """All chains of sets strictly increasing from the empty set to ``[n]``, as block lists."""
    items = list(range(n))

    def rec(rest):
        if not rest:
            yield []
            return
        for size in range(1, len(rest) + 1):
            for block in combinations(rest, size):
                remaining = [x for x in rest if x not in block]
                for tail in rec(remaining):
                    yield [block] + tail

    return list(rec(items))


def ordered_partition(n: int) -> DiscreteLoss:
    """Loss over chains: each chain pays the sizes of every set up to the first containing ``y``, less one."""
    _guard_n(n, 6)
    reports, rows = [], []
    for blocks in ordered_partition_chains(n):
        chain = []
        acc: set = set()
        for b in blocks:
            acc = acc | set(b)
            chain.append(frozenset(acc))
        row = []
        for y in range(n):
            total = 0
            prev: frozenset = frozenset()
            for T in chain:
                if y not in prev:
                    total += len(T)
                prev = T
            row.append(total - 1)
        reports.append("|".join(set_name(b) for b in blocks))
        rows.append(row)
    return DiscreteLoss(_labels(n), reports, rows)


def top_k(n: int, k: int) -> DiscreteLoss:
    _guard_n(n)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    subsets = list(combinations(range(n), k))
    return DiscreteLoss(_labels(n), [set_name(S) for S in subsets], [[0 if y in S else 1 for y in range(n)] for S in subsets])


def l4_target(n: int, k: int) -> DiscreteLoss:
    """Top-k variant allowing fewer than ``k`` labels at a premium ``(k+1)/(k+1-|T|)``."""
    _guard_n(n)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    reports, rows = [], []
    for size in range(0, k + 1):
        for T in combinations(range(n), size):
            w = mpq(k + 1, k + 1 - size)
            reports.append(set_name(T))
            rows.append([ZERO if y in T else w for y in range(n)])
    return DiscreteLoss(_labels(n), reports, rows)


def _sign_vectors(k):
    return [tuple(v) for v in product((-1, 1), repeat=k)]


def _sv_name(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _as_set_function(f, k) -> Callable:
    if callable(f):
        fn = f
    else:
        table = {frozenset(key): Q(val) for key, val in dict(f).items()}
        fn = lambda S: table[frozenset(S)]  # noqa: E731
    for size in range(k + 1):
        for S in combinations(range(k), size):
            val = Q(fn(frozenset(S)))
            if val < 0:
                raise InvalidSetFunction(f"f({set(S)}) = {val} is negative")
    if Q(fn(frozenset())) != 0:
        raise InvalidSetFunction("f(empty set) must be 0")
    return lambda S: Q(fn(frozenset(S)))


def indicator_nonempty(S) -> int:
    return 1 if S else 0


def cardinality(S) -> int:
    return len(S)


def set_function_loss(f, k: int) -> DiscreteLoss:
    """``l(r)_y = f(dis(r, y))`` over sign vectors; Hamming loss when ``f = |S|``."""
    if k > 4:
        raise GuardExceeded("k > 4 is outside the structured-loss guard")
    fn = _as_set_function(f, k)
    Y = _sign_vectors(k)
    rows = [[fn({i for i in range(k) if r[i] != y[i]}) for y in Y] for r in Y]
    return DiscreteLoss([_sv_name(y) for y in Y], [_sv_name(r) for r in Y], rows)


def structured_abstain(f, k: int) -> DiscreteLoss:
    """Structured abstain loss over ``{-1,0,1}^k``: ``f(dis \\ abs) + f(dis)``."""
    if k > 4:
        raise GuardExceeded("k > 4 is outside the structured-loss guard")
    fn = _as_set_function(f, k)
    Y = _sign_vectors(k)
    V = [tuple(v) for v in product((-1, 0, 1), repeat=k)]
    rows = []
    for v in V:
        ab = {i for i in range(k) if v[i] == 0}
        row = []
        for y in Y:
            dis = {i for i in range(k) if v[i] != y[i]}
            row.append(fn(dis - ab) + fn(dis))
        rows.append(row)
    return DiscreteLoss([_sv_name(y) for y in Y], [_sv_name(v) for v in V], rows)


# ---------------------------------------------------------------------------
# surrogates


def hinge() -> PolyhedralLoss:
    """``(1 - u y)_+`` with outcomes ``-1`` and ``+1``."""
    return PolyhedralLoss(1, ("-1", "+1"), [[((0,), 0), ((1,), 1)], [((0,), 0), ((-1,), 1)]])


def bep_code(n: int) -> dict:
    """Lowest-index binary code: label ``i`` gets ``1 - 2*bit`` per binary digit, most significant first."""
    d = max(1, (n - 1).bit_length())
    out = {}
    for i, y in enumerate(_labels(n)):
        out[y] = tuple(1 - 2 * ((i >> (d - 1 - j)) & 1) for j in range(d))
    return out


def bep(n: int):
    """Binary-encoded surrogate ``max_j (1 - code(y)_j u_j)_+`` and its code map."""
    _guard_n(n, 16)
    code = bep_code(n)
    d = len(next(iter(code.values())))
    pieces = []
    for y in _labels(n):
        plist = [((0,) * d, 0)]
        for j in range(d):
            a = [0] * d
            a[j] = -code[y][j]
            plist.append((tuple(a), 1))
        pieces.append(plist)
    return PolyhedralLoss(d, _labels(n), pieces), code


def ww_hinge(n: int) -> PolyhedralLoss:
    """Weston-Watkins hinge, expanded over which of its ``n-1`` terms are positive."""
    _guard_n(n)
    pieces = []
    for y in range(n):
        others = [i for i in range(n) if i != y]
        plist = []
        for size in range(len(others) + 1):
            for S in combinations(others, size):
                a = [ZERO] * n
                a[y] = Q(-size)
                for i in S:
                    a[i] += 1
                plist.append((tuple(a), size))
        pieces.append(plist)
    return PolyhedralLoss(n, _labels(n), pieces)


def topk_surrogate(n: int, k: int) -> PolyhedralLoss:
    """Consistent top-k surrogate: largest coordinate or averaged top-``m`` sums, minus ``u_y``."""
    _guard_n(n)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    shared = [(_unit(n, i), ZERO) for i in range(n)]
    for m in range(k + 1, n + 1):
        for S in combinations(range(n), m):
            a = tuple(mpq(1, m) if i in S else ZERO for i in range(n))
            shared.append((a, 1 - mpq(k, m)))
    pieces = []
    for y in range(n):
        e = _unit(n, y)
        pieces.append([(tuple(x - z for x, z in zip(a, e)), c) for a, c in shared])
    return PolyhedralLoss(n, _labels(n), pieces)


def l4_surrogate(n: int, k: int) -> PolyhedralLoss:
    """``(1 - u_y + mean of the k largest other coordinates)_+``."""
    _guard_n(n)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    pieces = []
    for y in range(n):
        plist = [((ZERO,) * n, ZERO)]
        others = [i for i in range(n) if i != y]
        for S in combinations(others, k):
            a = [mpq(1, k) if i in S else ZERO for i in range(n)]
            a[y] = -ONE
            plist.append((tuple(a), ONE))
        pieces.append(plist)
    return PolyhedralLoss(n, _labels(n), pieces)


# ---------------------------------------------------------------------------
# links


def sign_link(u) -> str:
    return "+1" if vec(u)[0] >= 0 else "-1"


def shifted_sign_link(u) -> str:
    """``-1`` below 1 and ``+1`` from 1 on: indirectly elicits but is not separated."""
    return "+1" if vec(u)[0] >= 1 else "-1"


def _decode(code: Mapping, u):
    sgn = tuple(1 if x > 0 else -1 for x in u)
    for y, c in code.items():
        if c == sgn:
            return y
    return ABSTAIN


def psi_inf(n: int) -> Callable:
    """Abstain when some coordinate is within 1/2 of zero, otherwise decode the signs."""
    code = bep_code(n)

    def link(u):
        u = vec(u)
        if min(abs(x) for x in u) <= mpq(1, 2):
            return ABSTAIN
        return _decode(code, u)

    return link


def psi_1(n: int) -> Callable:
    """Abstain inside the unit l1 ball, otherwise decode the signs."""
    code = bep_code(n)

    def link(u):
        u = vec(u)
        if sum((abs(x) for x in u), ZERO) <= 1:
            return ABSTAIN
        return _decode(code, u)

    return link


def argmax_link(k: int) -> Callable:
    """The ``k`` largest coordinates, ties broken toward lower labels."""

    def link(u):
        u = vec(u)
        order = sorted(range(len(u)), key=lambda i: (-u[i], i))
        return set_name(order[:k])

    return link


# ---------------------------------------------------------------------------
# registry


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise ParseError(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise ParseError(f"parameter {key!r} must be an integer") from None


def _set_function(params, k):
    name = params.get("f", "nonempty")
    if name == "nonempty":
        return indicator_nonempty
    if name in ("cardinality", "hamming"):
        return cardinality
    raise ParseError(f"unknown set function {name!r}")


DISCRETE = {
    "zero_one": lambda p: zero_one(_int(p, "n")),
    "abstain": lambda p: abstain(_int(p, "n"), Q(p.get("alpha", "1/2"))),
    "ordered_partition": lambda p: ordered_partition(_int(p, "n")),
    "top_k": lambda p: top_k(_int(p, "n"), _int(p, "k")),
    "l4_target": lambda p: l4_target(_int(p, "n"), _int(p, "k")),
    "structured_abstain": lambda p: structured_abstain(_set_function(p, _int(p, "k")), _int(p, "k")),
    "set_function": lambda p: set_function_loss(_set_function(p, _int(p, "k")), _int(p, "k")),
    "hinge_target": lambda p: zero_one(2, ("-1", "+1")),
}

SURROGATE = {
    "hinge": lambda p: hinge(),
    "bep": lambda p: bep(_int(p, "n"))[0],
    "ww_hinge": lambda p: ww_hinge(_int(p, "n")),
    "topk_surrogate": lambda p: topk_surrogate(_int(p, "n"), _int(p, "k")),
    "l4_surrogate": lambda p: l4_surrogate(_int(p, "n"), _int(p, "k")),
}

LINKS = {
    "sign": lambda p: sign_link,
    "shifted_sign": lambda p: shifted_sign_link,
    "psi_inf": lambda p: psi_inf(_int(p, "n")),
    "psi_1": lambda p: psi_1(_int(p, "n")),
    "argmax": lambda p: argmax_link(_int(p, "k")),
}


def parse_ref(ref: str) -> tuple[str, dict]:
    if not ref.startswith("zoo:"):
        raise ParseError(f"not a zoo reference: {ref!r}")
    body = ref[4:]
    name, _, query = body.partition("?")
    return name, dict(parse_qsl(query, keep_blank_values=True))


def _apply_scale(obj, params):
    if "scale" in params:
        return obj.scaled(Q(params["scale"]))
    return obj


def resolve_discrete(ref: str, extra: dict | None = None) -> DiscreteLoss:
    name, params = parse_ref(ref)
    params.update(extra or {})
    if name not in DISCRETE:
        raise ParseError(f"unknown discrete loss {name!r}; known: {', '.join(sorted(DISCRETE))}")
    try:
        return _apply_scale(DISCRETE[name](params), params)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from None


def resolve_surrogate(ref: str) -> PolyhedralLoss:
    name, params = parse_ref(ref)
    if name not in SURROGATE:
        raise ParseError(f"unknown surrogate {name!r}; known: {', '.join(sorted(SURROGATE))}")
    return SURROGATE[name](params)


def resolve_link(ref: str) -> Callable:
    name, params = parse_ref(ref)
    if name not in LINKS:
        raise ParseError(f"unknown link {name!r}; known: {', '.join(sorted(LINKS))}")
    return LINKS[name](params)


def resolve(ref: str):
    """Construct whatever ``ref`` names: a discrete loss, a surrogate or a link."""
    name, _ = parse_ref(ref)
    if name in DISCRETE:
        return resolve_discrete(ref)
    if name in SURROGATE:
        return resolve_surrogate(ref)
    if name in LINKS:
        return resolve_link(ref)
    raise ParseError(f"unknown zoo entry {name!r}")
