"""Executable checks for every inequality and identity of the construction.

Each check returns a :class:`CheckResult`. For ``kind="identity"`` the margin
is the worst absolute deviation (pass iff ``<= tol``); for
``kind="inequality"`` it is the smallest slack ``bound - value`` (pass iff
``>= -tol``). Cases whose premise fails are counted as skipped and never as
passes; a check with no applicable case has status ``"skip"``.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .cocycle import Construction, SparseFunction, lp_norm, translate
from .errors import ConfigurationError, DomainError
from .groups import Element, GroupModel, eval_word, parse_group_spec, parse_word
from .metric import DEFAULT_BUDGET, GrowthEstimate, LengthFunction, ball, growth_constant
from .scaling import ScaleParams, inverse_square_scale_array, iterlog, tower

IDENTITY_TOL = 1e-12
INEQ_TOL = 1e-12
TIGHT = 1e-9

__all__ = [
    "CheckResult",
    "VerificationReport",
    "VerifyConfig",
    "DivergenceTable",
    "c_prime",
    "sample_elements",
    "check_cocycle_identity",
    "check_upper_bound",
    "check_lower_bound",
    "check_properness",
    "check_properness_ray",
    "divergence_partial_sums",
    "run_full_report",
]


@dataclass
class CheckResult:
    name: str
    kind: str
    status: str
    margin: float | None
    cases: int
    skipped: int = 0
    witness: dict | None = None
    detail: str = ""
    tight: bool = False

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class _Tracker:
    """Accumulates the worst case of one check."""

    def __init__(self, name, kind, tol=None):
        self.name = name
        self.kind = kind
        self.tol = tol if tol is not None else (IDENTITY_TOL if kind == "identity" else INEQ_TOL)
        self.cases = 0
        self.skipped = 0
        self.worst = None
        self.witness = None
        self.fail_witness = None
        self.notes = []

    def deviation(self, dev, witness):
        """Record ``|lhs - rhs|`` for an identity."""
        self.cases += 1
        if self.worst is None or dev > self.worst:
            self.worst = dev
            self.witness = witness
        if not dev <= self.tol and self.fail_witness is None:
            self.fail_witness = witness

    def slack(self, value, bound, witness):
        """Record ``value <= bound``."""
        s = bound - value
        self.cases += 1
        if self.worst is None or s < self.worst:
            self.worst = s
            self.witness = witness
        if not s >= -self.tol and self.fail_witness is None:
            self.fail_witness = witness

    def exact(self, ok, witness):
        """Record a yes/no case (set containment, exact equality); does not move the margin."""
        self.cases += 1
        if not ok and self.fail_witness is None:
            self.fail_witness = witness

    def skip(self, n=1):
        self.skipped += n

    def result(self, detail=""):
        if self.notes:
            detail = "; ".join(filter(None, [detail] + self.notes))
        if self.cases == 0:
            return CheckResult(self.name, self.kind, "skip", None, 0, self.skipped, None,
                               detail or "no case satisfies the premise")
        failed = self.fail_witness is not None
        status = "fail" if failed else "pass"
        margin = self.worst if self.worst is not None else 0.0
        tight = (not failed and self.kind == "inequality" and self.worst is not None
                 and margin < TIGHT)
        witness = self.fail_witness if failed else self.witness
        return CheckResult(self.name, self.kind, status, margin, self.cases, self.skipped,
                           witness, detail, tight)


def c_prime(a: float) -> float:
    """``sup_n 2^(1/2n) e^(a/2)``, attained at ``n = 1``."""
    return math.sqrt(2.0) * math.exp(a / 2.0)


def _fmt(model: GroupModel, g: Element) -> str:
    return model.format_element(g)


def sample_elements(model: GroupModel, rng: random.Random, count: int,
                    max_length: int) -> list[Element]:
    """Random words with lengths stratified over ``1..max_length``, reduced to normal form."""
    return [model.random_element(rng, 1 + i % max_length) for i in range(count)]


# -- group and metric ---------------------------------------------------------

def check_group_axioms(model: GroupModel, rng, samples: int, max_length: int) -> CheckResult:
    t = _Tracker("group-axioms", "identity")
    e = model.identity
    mul, inv = model.mul, model.inv
    for _ in range(samples):
        g, h, k = (model.random_element(rng, rng.randint(0, max_length)) for _ in range(3))
        w = {"g": _fmt(model, g), "h": _fmt(model, h), "k": _fmt(model, k)}
        t.exact(mul(mul(g, h), k) == mul(g, mul(h, k)), dict(w, law="associativity"))
        t.exact(mul(e, g) == g and mul(g, e) == g, dict(w, law="identity"))
        t.exact(mul(inv(g), g) == e and mul(g, inv(g)) == e, dict(w, law="inverse"))
        t.exact(model.contains(g) and model.decode(model.encode(g)) == g,
                dict(w, law="canonical-encoding"))
    return t.result("associativity, identity, inverse and canonical-form laws on random triples")


def check_length_axioms(L: LengthFunction, rng, samples: int, max_length: int) -> CheckResult:
    model = L.model
    t = _Tracker("length-axioms", "inequality")
    e = model.identity
    t.exact(L(e) == 0, {"law": "zero-at-identity"})
    for _ in range(samples):
        g = model.random_element(rng, rng.randint(0, max_length))
        h = model.random_element(rng, rng.randint(0, max_length))
        lg, lh, lgh = L(g), L(h), L(model.mul(g, h))
        w = {"g": _fmt(model, g), "h": _fmt(model, h)}
        t.exact(type(lg) is int and lg >= 0, dict(w, law="non-negative integer"))
        t.exact((lg == 0) == (g == e), dict(w, law="zero-iff-identity"))
        t.exact(L(model.inv(g)) == lg, dict(w, law="symmetry"))
        t.slack(lgh, lg + lh, dict(w, law="subadditivity"))
    return t.result("|g|=0 iff g=e, |g|=|g^-1|, |gh|<=|g|+|h|")


def check_length_modes(L: LengthFunction, radius: int) -> CheckResult:
    """Closed-form and breadth-first lengths agree on a whole ball."""
    t = _Tracker("length-modes-agree", "identity")
    if L.mode != "closed":
        return t.result("only BFS length available for this group")
    bfs = LengthFunction(L.model, mode="bfs", budget=L.budget)
    for d, sphere in enumerate(bfs.spheres(radius)):
        for g in sphere:
            t.exact(L(g) == d, {"g": _fmt(L.model, g), "bfs": d, "closed": L(g)})
    return t.result(f"all elements of B(e,{radius})")


def check_metric_invariance(L: LengthFunction, rng, samples: int, max_length: int) -> CheckResult:
    model = L.model
    t = _Tracker("metric-left-invariance", "identity")
    for _ in range(samples):
        g, h, c = (model.random_element(rng, rng.randint(0, max_length)) for _ in range(3))
        w = {"gamma": _fmt(model, c), "g": _fmt(model, g), "h": _fmt(model, h)}
        d = L.dist(g, h)
        t.exact(L.dist(model.mul(c, g), model.mul(c, h)) == d, dict(w, law="left-invariance"))
        t.exact(L.dist(h, g) == d, dict(w, law="symmetry"))
    return t.result("d(cg,ch)=d(g,h) and d(g,h)=d(h,g)")


def _bfs_ball(model: GroupModel, center: Element, radius: int) -> set:
    seen = {center}
    frontier = [center]
    gens = model.symmetric_generators
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                h = model.mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def check_balls(L: LengthFunction, rng, radius: int, centers: int, max_length: int) -> CheckResult:
    """Nesting, sphere sums, and agreement with a BFS grown from the centre itself."""
    model = L.model
    t = _Tracker("ball-enumeration", "identity")
    spheres = L.spheres(radius)
    prev = set()
    total = 0
    for R, sphere in enumerate(spheres):
        total += len(sphere)
        cur = prev | set(sphere)
        t.exact(prev <= cur and len(cur) == total, {"R": R})
        t.exact(all(L(g) == R for g in sphere), {"R": R, "law": "sphere distances"})
        prev = cur
    for _ in range(centers):
        c = model.random_element(rng, rng.randint(0, max_length))
        r = min(radius, 4)
        B = ball(L, c, r)
        t.exact(set(B.elements) == _bfs_ball(model, c, r), {"center": _fmt(model, c), "R": r})
    return t.result(f"B(e,R) for R<={radius}; translated balls vs BFS from the centre")


def check_growth(L: LengthFunction, est: GrowthEstimate) -> CheckResult:
    t = _Tracker("growth-bound", "inequality")
    for R, card in est.per_radius:
        # log space: exp(a R) may round below an integer cardinality it equals
        t.slack(math.log(card), est.a * R, {"R": R, "ball_cardinality": card})
    return t.result(f"#B(e,R) <= exp(aR) with a={est.a:.12g}, certified for R<={est.max_radius}")


# -- tent functions -----------------------------------------------------------

def check_tent_profile(C: Construction, n_max: int) -> CheckResult:
    t = _Tracker("tent-profile", "identity")
    L = C.length
    for n in range(1, n_max + 1):
        phi = C.tent(n)
        s = C.params.scale(n)
        peak = 1.0 / s
        support = {g for sph in L.spheres(n - 1) for g in sph}
        t.exact(phi.support() == support, {"n": n, "law": "support = B(e,n-1)"})
        bad = next((x for x, v in phi.items() if not 0.0 < v <= peak * (1 + 1e-15)), None)
        t.exact(bad is None, {"n": n, "x": None if bad is None else _fmt(C.model, bad),
                              "law": "values in (0, 1/s]"})
        t.deviation(abs(phi[C.model.identity] - peak), {"n": n, "law": "peak at identity"})
    return t.result("support B(e,n-1), values in (0,1/s(n)], peak 1/s(n) at e")


def check_tent_symmetry(C: Construction, n_max: int) -> CheckResult:
    t = _Tracker("tent-symmetry", "identity")
    L = C.length
    inv = C.model.inv
    for n in range(1, n_max + 1):
        phi = C.tent(n)
        for sph in L.spheres(n):
            for g in sph:
                t.deviation(abs(phi[g] - phi[inv(g)]), {"n": n, "x": _fmt(C.model, g)})
    return t.result("phi_n(x) = phi_n(x^-1) on B(e,n)")


def check_tent_lipschitz(C: Construction, n_max: int, rng, trials: int) -> CheckResult:
    """``|phi(g) - phi(h)| <= d(g,h) * slope(n)``: every Cayley edge in ``B(e,n)`` plus random pairs."""
    t = _Tracker("tent-lipschitz", "inequality")
    model, L = C.model, C.length
    gens = model.symmetric_generators
    cases = {"inside": 0, "mixed": 0, "outside": 0}
    for n in range(1, n_max + 1):
        phi = C.tent(n)
        lip = C.params.slope(n)

        def one(g, h, d):
            dg, dh = L(g), L(h)
            inside = (dg < n) + (dh < n)
            cases[("outside", "mixed", "inside")[inside]] += 1
            t.slack(abs(phi[g] - phi[h]), d * lip,
                    {"n": n, "g": _fmt(model, g), "gamma": _fmt(model, h), "d": d})

        for sph in L.spheres(n):
            for g in sph:
                for s in gens:
                    one(g, model.mul(g, s), 1)
        for _ in range(trials):
            g = model.random_element(rng, rng.randint(0, 2 * n))
            h = model.random_element(rng, rng.randint(0, 2 * n))
            one(g, h, L.dist(g, h))
    t.notes.append("cases: " + ", ".join(f"{k}={v}" for k, v in cases.items()))
    return t.result("Lipschitz constant 1/(n s(n))")


# -- cocycle blocks -----------------------------------------------------------

def check_block_support_and_sup(C: Construction, gammas: Sequence[Element], n_max: int) -> CheckResult:
    t = _Tracker("pointwise-bound", "inequality")
    model, L = C.model, C.length
    for n in range(1, n_max + 1):
        b0 = C.block(n, model.identity)
        t.exact(len(b0.values) == 0, {"n": n, "law": "b_n(e) = 0"})
        lip = C.params.slope(n)
        peak = 1.0 / C.params.scale(n)
        for g in gammas:
            blk = C.block(n, g)
            d = L(g)
            ginv = model.inv(g)
            w = {"n": n, "gamma": _fmt(model, g)}
            outside = next((x for x in blk.values
                            if L(x) > n and L(model.mul(ginv, x)) > n), None)
            t.exact(outside is None, dict(w, law="support in B(e,n) u B(gamma,n)",
                                          x=None if outside is None else _fmt(model, outside)))
            sup = blk.sup_norm
            t.slack(sup, d * lip, dict(w, law="|b_n(gamma)(x)| <= d(gamma,e)/(n s(n))"))
            t.slack(sup, peak, dict(w, law="|b_n(gamma)(x)| <= 1/s(n)"))
    return t.result("support and sup-norm of b_n(gamma)")


def check_translation_isometry(C: Construction, gammas: Sequence[Element], n_max: int) -> CheckResult:
    t = _Tracker("translation-isometry", "identity")
    for n in range(1, n_max + 1):
        phi = C.tent(n)
        base = lp_norm(phi, 2 * n)
        for g in gammas:
            moved = lp_norm(translate(C.model, g, phi), 2 * n)
            t.deviation(abs(moved - base) / base, {"n": n, "gamma": _fmt(C.model, g)})
    return t.result("||pi(gamma) phi_n||_2n = ||phi_n||_2n (relative)")


def check_cocycle_identity(C: Construction, n_max: int, trials: int, seed=0,
                           rng: random.Random | None = None) -> CheckResult:
    """``b_n(g1 g2) = pi(g1) b_n(g2) + b_n(g1)`` on random pairs of length ``<= 2 n_max``."""
    rng = rng or random.Random(seed)
    model = C.model
    t = _Tracker("cocycle-identity", "identity")
    pairs = [(model.identity, model.random_element(rng, 1 + rng.randrange(2 * n_max)))]
    for i in range(trials):
        l1 = 1 + i % (2 * n_max)
        l2 = 1 + rng.randrange(2 * n_max)
        pairs.append((model.random_element(rng, l1), model.random_element(rng, l2)))
    for g1, g2 in pairs:
        g12 = model.mul(g1, g2)
        for n in range(1, n_max + 1):
            lhs = C.block(n, g12).values
            rhs = translate(model, g1, C.block(n, g2).values) + C.block(n, g1).values
            t.deviation(lhs.max_abs_diff(rhs),
                        {"n": n, "gamma1": _fmt(model, g1), "gamma2": _fmt(model, g2)})
    return t.result(f"{len(pairs)} pairs, n <= {n_max}, worst entrywise deviation")


def check_inverse_formula(C: Construction, gammas: Sequence[Element], n_max: int) -> CheckResult:
    t = _Tracker("inverse-formula", "identity")
    model = C.model
    for g in gammas:
        gi = model.inv(g)
        for n in range(1, n_max + 1):
            lhs = C.block(n, gi).values
            rhs = -translate(model, gi, C.block(n, g).values)
            t.deviation(lhs.max_abs_diff(rhs), {"n": n, "gamma": _fmt(model, g)})
    return t.result("b_n(gamma^-1) = -pi(gamma^-1) b_n(gamma)")


def _random_vector(C: Construction, rng, n_max: int, radius: int) -> list[SparseFunction]:
    points = [g for sph in C.length.spheres(radius) for g in sph]
    out = []
    for _ in range(n_max):
        chosen = rng.sample(points, min(len(points), 6))
        out.append(SparseFunction(C.model, {x: rng.uniform(-1, 1) for x in chosen}))
    return out


def check_affine_action(C: Construction, n_max: int, rng, trials: int) -> CheckResult:
    """Homomorphism ``alpha(g1 g2) = alpha(g1) alpha(g2)``, ``alpha(e) = id``, isometry, ``alpha(g) 0 = b(g)``."""
    t = _Tracker("affine-action", "identity")
    model = C.model
    zero = C.zero_vector(n_max)
    for i in range(trials):
        g1 = model.random_element(rng, 1 + i % (2 * n_max))
        g2 = model.random_element(rng, 1 + rng.randrange(2 * n_max))
        xi = _random_vector(C, rng, n_max, 2)
        eta = _random_vector(C, rng, n_max, 2)
        w = {"gamma1": _fmt(model, g1), "gamma2": _fmt(model, g2)}
        lhs = C.act(model.mul(g1, g2), xi)
        rhs = C.act(g1, C.act(g2, xi))
        for n in range(1, n_max + 1):
            t.deviation(lhs[n - 1].max_abs_diff(rhs[n - 1]), dict(w, n=n, law="homomorphism"))
        ident = C.act(model.identity, xi)
        b = C.act(g1, zero)
        vec = C.vector(g1, n_max)
        a_xi, a_eta = C.act(g1, xi), C.act(g1, eta)
        for n in range(1, n_max + 1):
            t.deviation(ident[n - 1].max_abs_diff(xi[n - 1]), dict(w, n=n, law="alpha(e)=id"))
            t.deviation(b[n - 1].max_abs_diff(vec.block(n).values), dict(w, n=n, law="alpha(g)0=b(g)"))
            before = lp_norm(xi[n - 1] - eta[n - 1], 2 * n)
            after = lp_norm(a_xi[n - 1] - a_eta[n - 1], 2 * n)
            t.deviation(abs(after - before), dict(w, n=n, law="isometry"))
    return t.result("affine isometric action alpha(g) xi = pi(g) xi + b(g)")


# -- the norm estimates -------------------------------------------------------

def check_upper_bound(C: Construction, gammas: Sequence[Element], n_max: int,
                      growth: GrowthEstimate) -> CheckResult:
    """``||b_n(gamma)||_2n <= c' d(gamma,e) / (n s(n))`` with ``c' = sqrt(2) e^(a/2)``."""
    if growth is None:
        raise ConfigurationError("upper bound check needs a growth estimate")
    if growth.max_radius < n_max:
        raise ConfigurationError(
            f"growth constant certified only to R={growth.max_radius}, need R>={n_max}")
    cp = c_prime(growth.a)
    t = _Tracker("decay-bound", "inequality")
    model, L = C.model, C.length
    for g in gammas:
        d = L(g)
        for n in range(1, n_max + 1):
            blk = C.block(n, g)
            t.slack(blk.norm_2n, cp * d * C.params.slope(n),
                    {"n": n, "gamma": _fmt(model, g), "d": d})
    return t.result(f"c' = sqrt(2) e^(a/2) = {cp:.12g}")


def check_support_count_bound(C: Construction, gammas: Sequence[Element], n_max: int,
                              growth: GrowthEstimate) -> CheckResult:
    """Intermediate steps: ``||b||^{2n} <= (#B(e,n) + #B(gamma,n)) sup|b|^{2n} <= 2 e^{an} (d slope)^{2n}``.

    Compared after taking ``2n``-th roots so nothing underflows.
    """
    t = _Tracker("support-count-bound", "inequality")
    model, L = C.model, C.length
    for n in range(1, n_max + 1):
        count = 2 * sum(len(s) for s in L.spheres(n))
        for g in gammas:
            blk = C.block(n, g)
            d = L(g)
            w = {"n": n, "gamma": _fmt(model, g)}
            sup = blk.sup_norm
            t.slack(blk.norm_2n, count ** (1.0 / (2 * n)) * sup, dict(w, step="support count"))
            if n <= growth.max_radius:
                t.slack(math.log(count), math.log(2) + growth.a * n, dict(w, step="volume growth"))
            t.slack(count ** (1.0 / (2 * n)) * sup,
                    (2 * growth.bound(n)) ** (1.0 / (2 * n)) * d * C.params.slope(n),
                    dict(w, step="chain"))
    return t.result("(#B(e,n)+#B(gamma,n)) sup|b_n|^{2n} <= 2e^{an}(d/(n s))^{2n}")


def check_c_prime(growth: GrowthEstimate, n_max: int) -> CheckResult:
    t = _Tracker("c-prime-supremum", "inequality")
    cp = c_prime(growth.a)
    prev = math.inf
    for n in range(1, n_max + 1):
        v = 2 ** (1.0 / (2 * n)) * math.exp(growth.a / 2)
        t.slack(v, cp, {"n": n})
        t.slack(v, prev, {"n": n, "law": "non-increasing"})
        prev = v
    return t.result("sup_n 2^(1/2n) e^(a/2) attained at n=1")


def check_lower_bound(C: Construction, gammas: Sequence[Element], n_max: int) -> CheckResult:
    """Disjoint supports when ``d(gamma,e) > 2n`` give ``||b_n(gamma)|| >= 2^(1/2n)/s(n) >= 1/s(n)``."""
    t = _Tracker("disjoint-support-lower-bound", "inequality")
    model, L = C.model, C.length
    for g in gammas:
        d = L(g)
        for n in range(1, n_max + 1):
            if not d > 2 * n:
                t.skip()
                continue
            w = {"n": n, "gamma": _fmt(model, g), "d": d}
            phi = C.tent(n)
            moved = {model.mul(g, x) for x in phi}
            t.exact(moved.isdisjoint(phi.entries), dict(w, law="disjoint supports"))
            norm = C.block(n, g).norm_2n
            s = C.params.scale(n)
            t.slack(2 ** (1.0 / (2 * n)) / s, norm, w)
            t.slack(1.0 / s, norm, dict(w, law="a fortiori"))
    return t.result("||b_n(gamma)||_2n >= 2^(1/2n)/s(n) whenever d(gamma,e) > 2n")


def _partial_sum(k: int, N: int) -> float:
    return math.fsum(1.0 / ScaleParams(k).scale(n) ** 2 for n in range(1, N + 1))


def check_properness(C: Construction, N: int, gammas: Sequence[Element]) -> CheckResult:
    """``sum_{n<=N} ||b_n(gamma)||^2 >= sum_{n<=N} 1/(n l_1(n)...l_k(n))`` when ``d(gamma,e) > 2N``."""
    model, L = C.model, C.length
    target = _partial_sum(C.k, N)
    t = _Tracker("properness", "inequality")
    for g in gammas:
        if not L(g) > 2 * N:
            t.skip()
            continue
        v = C.vector(g, N)
        t.slack(target, v.mixed_norm_sq, {"gamma": _fmt(model, g), "d": L(g), "N": N})
    if t.cases == 0:
        raise ConfigurationError(f"no gamma satisfies d(gamma,e) > 2N = {2 * N}")
    return t.result(f"lower bound sum_(n<={N}) 1/s(n)^2 = {target:.12g}")


def check_properness_ray(C: Construction, n_max: int, generator: int = 0,
                         steps: int | None = None) -> CheckResult:
    """Along the ray ``s^j`` the truncated mixed norm is non-decreasing and dominates the partial sums.

    The ray is followed only while it stays geodesic (``d(s^j, e) = j``).
    """
    model, L = C.model, C.length
    steps = steps or 2 * n_max
    s = model.generators[generator]
    t = _Tracker("properness-ray", "inequality")
    g = model.identity
    prev = None
    inv_sq = [1.0 / C.params.scale(n) ** 2 for n in range(1, n_max + 1)]
    for j in range(1, steps + 1):
        g = model.mul(g, s)
        d = L(g)
        if d != j:
            t.notes.append(f"ray stops being geodesic at j={j}")
            t.skip(steps - j + 1)
            break
        m = C.vector(g, n_max).mixed_norm_sq
        w = {"j": j, "gamma": _fmt(model, g)}
        floor = math.fsum(inv_sq[n - 1] for n in range(1, n_max + 1) if 2 * n < d)
        t.slack(floor, m, dict(w, law="partial-sum floor"))
        if prev is not None:
            t.slack(prev, m, dict(w, law="non-decreasing"))
        prev = m
    return t.result(f"ray along generator {generator + 1}, N_max={n_max}")


def check_decay_improvement(C: Construction, gammas: Sequence[Element], n_max: int,
                            growth: GrowthEstimate) -> CheckResult:
    """``n * upper_bound(n)`` is non-increasing for ``n >= 3``, and ``slope(n) <= 1/n``."""
    t = _Tracker("decay-improvement", "inequality")
    cp = c_prime(growth.a)
    L = C.length
    for n in range(1, n_max + 1):
        t.slack(C.params.slope(n), 1.0 / n, {"n": n, "law": "envelope <= 1/n"})
    for g in gammas:
        d = L(g)
        prev = None
        for n in range(3, n_max + 1):
            cur = n * cp * d * C.params.slope(n)
            if prev is not None:
                t.slack(cur, prev, {"n": n, "gamma": _fmt(C.model, g)})
            prev = cur
    return t.result("n * c' d slope(n) non-increasing for n >= 3")


# -- divergence ---------------------------------------------------------------

@dataclass
class DivergenceTable:
    k: int
    N: int
    tolerance: float
    rows: list[tuple[int, float, float]]
    comparisons: list[tuple[int, int, float, float]] = field(default_factory=list)

    def partial_sum(self, M: int) -> float:
        for m, s, _ in self.rows:
            if m == M:
                return s
        raise KeyError(M)

    @property
    def worst_error(self) -> float | None:
        if not self.comparisons:
            return None
        return max(abs(d - r) for _, _, d, r in self.comparisons)

    @property
    def passed(self) -> bool:
        w = self.worst_error
        return w is None or w <= self.tolerance


def _sample_points(N: int) -> list[int]:
    pts = []
    m = 1
    while m < N:
        pts.append(m)
        m *= 10
    pts.append(N)
    return pts


def divergence_partial_sums(p: ScaleParams | int, N: int, tolerance: float = 0.1,
                            points: Sequence[int] | None = None) -> DivergenceTable:
    """Partial sums ``S(M) = sum_{n<=M} 1/(n l_1(n)...l_k(n))`` at powers of ten up to ``N``.

    Differences ``S(M2) - S(M1)`` are compared with the integral
    ``l_{k+1}(M2) - l_{k+1}(M1)`` for ``M1, M2 >= tower(k+1)``.
    """
    import numpy as np

    k = p.k if isinstance(p, ScaleParams) else int(p)
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    pts = sorted(set(points)) if points else _sample_points(N)
    terms = inverse_square_scale_array(k, np.arange(1, N + 1))
    rows = []
    acc = []
    lo = 0
    for M in pts:
        acc.append(math.fsum(terms[lo:M].tolist()))
        lo = M
        rows.append((M, math.fsum(acc), iterlog(k + 1, M)))
    table = DivergenceTable(k, N, tolerance, rows)
    thr = tower(k + 1)
    eligible = [r for r in rows if r[0] >= thr]
    for i, (m1, s1, r1) in enumerate(eligible):
        for m2, s2, r2 in eligible[i + 1:]:
            table.comparisons.append((m1, m2, s2 - s1, r2 - r1))
    return table


def check_divergence(p: ScaleParams, N: int, tolerance: float = 0.1) -> CheckResult:
    table = divergence_partial_sums(p, N, tolerance)
    t = _Tracker("divergence", "inequality")
    prev = 0.0
    for M, S, _ in table.rows:
        t.slack(prev, S, {"M": M, "law": "partial sums increase"})
        prev = S
    for m1, m2, diff, ref in table.comparisons:
        t.slack(abs(diff - ref), tolerance, {"M1": m1, "M2": m2, "law": "integral comparison"})
    if not table.comparisons:
        t.notes.append(f"no sample points above tower({p.k + 1}); integral comparison not run")
    return t.result(f"S(M) vs l_{p.k + 1}(M), tolerance {tolerance}")


# -- full report --------------------------------------------------------------

@dataclass
class VerifyConfig:
    group: str = "zd:2"
    k: int = 1
    n_max: int = 6
    gammas: list[str] = field(default_factory=list)
    trials: int = 100
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    samples: int = 1000
    divergence_n: int = 10_000
    slope_error: float = 0.0

    def validate(self):
        if self.k < 0:
            raise DomainError(f"k must be >= 0, got {self.k}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.divergence_n < 1:
            raise DomainError(f"divergence_n must be >= 1, got {self.divergence_n}")


@dataclass
class VerificationReport:
    config: dict
    checks: list[CheckResult]
    growth: dict

    @property
    def summary(self) -> str:
        if any(c.status == "fail" for c in self.checks):
            return "fail"
        if any(c.status == "skip" for c in self.checks):
            return "incomplete"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.summary == "pass"

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        counts = {s: sum(c.status == s for c in self.checks) for s in ("pass", "fail", "skip")}
        return {
            "config": self.config,
            "growth": self.growth,
            "checks": [_round_floats(asdict(c)) for c in self.checks],
            "summary": {"status": self.summary, **counts,
                        "tight": [c.name for c in self.checks if c.tight]},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}") if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def run_full_report(config: VerifyConfig, progress: Callable[[str], None] | None = None
                    ) -> VerificationReport:
    """Run every check in a fixed order; deterministic for a given seed.

    Each check draws from its own generator seeded by ``(seed, check name)``.
    """
    config.validate()
    model = parse_group_spec(config.group)
    L = LengthFunction(model, budget=config.budget)
    p = ScaleParams(config.k)
    C = Construction(L, p, slope_error=config.slope_error)
    N = config.n_max

    def rng(name):
        return random.Random(f"{config.seed}:{name}")

    explicit = [eval_word(model, parse_word(model, w)) for w in config.gammas]
    gammas = explicit + sample_elements(model, rng("gammas"), 4 * N, 2 * N)
    growth = growth_constant(L, N)
    checks: list[CheckResult] = []

    def run(fn, *args):
        name = getattr(fn, "__name__", "check")
        if progress:
            progress(name)
        try:
            checks.append(fn(*args))
        except ConfigurationError as exc:
            checks.append(CheckResult(name.replace("check_", "").replace("_", "-"),
                                      "inequality", "skip", None, 0, 0, None, str(exc)))

    samples = config.samples
    run(check_group_axioms, model, rng("group-axioms"), samples, 2 * N)
    run(check_length_axioms, L, rng("length-axioms"), samples, 2 * N)
    if L.mode == "closed":
        run(check_length_modes, L, min(N, 6))
    run(check_metric_invariance, L, rng("metric"), samples, 2 * N)
    run(check_balls, L, rng("balls"), N, 10, 2 * N)
    run(check_growth, L, growth)
    run(check_tent_profile, C, N)
    run(check_tent_symmetry, C, N)
    run(check_tent_lipschitz, C, N, rng("lipschitz"), config.trials)
    run(check_block_support_and_sup, C, gammas, N)
    run(check_translation_isometry, C, gammas, N)
    run(check_cocycle_identity, C, N, config.trials, None, rng("cocycle-identity"))
    run(check_inverse_formula, C, gammas, N)
    run(check_affine_action, C, N, rng("affine-action"), max(1, min(config.trials, 20)))
    run(check_upper_bound, C, gammas, N, growth)
    run(check_support_count_bound, C, gammas, N, growth)
    run(check_c_prime, growth, N)
    run(check_lower_bound, C, gammas, N)
    ray = [model.power(model.generators[0], j) for j in range(1, 2 * N + 2)]
    run(check_properness, C, max(1, N // 2), gammas + ray)
    run(check_properness_ray, C, N)
    run(check_decay_improvement, C, gammas, N, growth)
    run(check_divergence, p, config.divergence_n)

    cfg = {
        "group": config.group, "k": config.k, "n_max": N, "gammas": list(config.gammas),
        "trials": config.trials, "seed": config.seed, "budget": config.budget,
        "samples": samples, "divergence_n": config.divergence_n,
    }
    if config.slope_error:
        cfg["slope_error"] = config.slope_error
    grow = {"a": _round_floats(growth.a), "c_prime": _round_floats(c_prime(growth.a)),
            "certified_max_radius": growth.max_radius,
            "ball_cardinalities": [list(r) for r in growth.per_radius]}
    return VerificationReport(cfg, checks, grow)
