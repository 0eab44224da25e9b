"""Budget-bounded refutation of claimed convex embeddings and isomorphisms.

``refute_convex`` runs the matrix construction against a claimed convex
embedding of a cofinal subset into a Hahn product; ``refute_iso_second``
runs the characteristic-map sequence against a claimed isomorphism
G ~ D^G with zero not last.  Either returns a witness that can be re-checked
with nothing but ``compare`` and the caller's own maps, or ``Exhausted``
with the strictly increasing trace built so far.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .chains import Chain, Elem, Ordering, Pow, _cmp, least, member
from .errors import BadOne, BudgetZero, InvariantError, OverlapError
from .lexpower import (
    Embedding,
    Iso,
    OneSelector,
    chi,
    exponent,
    first_difference,
    oplus,
    truncate,
)


@dataclass
class TraceStep:
    kind: str  # "row", "matrix" or "chi"
    index: tuple
    values: dict


@dataclass
class ConvexityGap:
    """iota(a) < c < iota(b) while the inverse oracle answered None at c."""

    a: Elem
    b: Elem
    c: Elem
    trace: list = field(default_factory=list)


@dataclass
class OrderViolation:
    """x < y but the claimed map sends them to fx >= fy."""

    step: int
    x: Elem
    y: Elem
    fx: Elem
    fy: Elem
    trace: list = field(default_factory=list)


@dataclass
class InverseMiss:
    elem: Elem
    trace: list = field(default_factory=list)


@dataclass
class BadInput:
    claim: str
    evidence: tuple
    trace: list = field(default_factory=list)


@dataclass
class Exhausted:
    trace: list
    reason: str = "budget exhausted"


Witness = Union[ConvexityGap, OrderViolation, InverseMiss, BadInput]


@dataclass(eq=False)
class RefuterInput:
    target: Chain  # Pow or HetProd over the exponent G
    iota: Embedding  # claimed convex embedding of G' (iota.source) into target
    successor: Callable[[Elem], Optional[Elem]]  # strictly larger element of G'; None if none
    cofinal: Callable[[Elem], Elem]  # element of G' at or above a given element of G
    one: OneSelector
    budget: int
    start: Optional[Elem] = None


class _Found(Exception):
    def __init__(self, witness):
        self.witness = witness


class _ConvexRun:
    def __init__(self, inp: RefuterInput):
        self.inp = inp
        self.target = inp.target
        self.exp = exponent(inp.target)
        self.src = inp.iota.source
        self.trace: list = []
        self.steps = 0
        self.betas: list = []  # beta^(n)
        self.nus: list = []  # nu^(n)
        self.columns: dict = {}  # n >= 1 -> [gamma_0^(n), gamma_1^(n), ...]

    def fail(self, witness):
        witness.trace = self.trace
        raise _Found(witness)

    def image(self, x):
        y = self.inp.iota.forward(x)
        if not member(self.target, y):
            self.fail(BadInput("iota", (x, y)))
        return y

    def less(self, x, y) -> bool:
        return _cmp(self.exp, x, y) is Ordering.LESS

    def in_source(self, x) -> bool:
        return member(self.src, x) and member(self.exp, x)

    def successor(self, x):
        y = self.inp.successor(x)
        if y is None:
            return None
        if not self.in_source(y) or not self.less(x, y):
            self.fail(BadInput("successor", (x, y)))
        return y

    def ordered(self, x, y, fx, fy):
        """x < y must give fx < fy."""
        if _cmp(self.target, fx, fy) is not Ordering.LESS:
            self.fail(OrderViolation(self.steps, x, y, fx, fy))

    def query(self, elem):
        """One oracle call; None means 'not in the image'."""
        if self.steps >= self.inp.budget:
            raise _Found(Exhausted(self.trace))
        self.steps += 1
        q = self.inp.iota.inverse(elem)
        if q is None:
            return None
        if not self.in_source(q) or self.inp.iota.forward(q) != elem:
            self.fail(BadInput("inverse", (elem, q)))
        return q

    def first_row(self, n: int) -> bool:
        """Produce gamma_0^(n+1); False when the source has no larger element."""
        beta = self.betas[n]
        mu = self.successor(beta)
        nu = self.successor(mu) if mu is not None else None
        if nu is None:
            return False
        a, b, c = self.image(beta), self.image(mu), self.image(nu)
        self.ordered(beta, mu, a, b)
        self.ordered(mu, nu, b, c)
        sigma = first_difference(self.target, a, b)
        tau = first_difference(self.target, b, c)
        m = tau if self.less(sigma, tau) else sigma
        nxt = self.inp.cofinal(m)
        if not self.in_source(nxt) or self.less(nxt, m):
            self.fail(BadInput("cofinal", (m, nxt)))
        d = truncate(self.target, b, nxt)
        if not (_cmp(self.target, a, d) < 0 < _cmp(self.target, c, d)):
            raise AssertionError("truncated element escaped its bracket")
        values = {"beta": beta, "mu": mu, "nu": nu, "sigma": sigma, "tau": tau,
                  "next_beta": nxt, "d": d}
        self.trace.append(TraceStep("row", (n,), values))
        g = self.query(d)
        if g is None:
            self.fail(ConvexityGap(beta, nu, d))
        values["gamma"] = g
        if not self.less(beta, g):
            self.ordered(g, beta, d, a)
        self.betas.append(nxt)
        self.nus.append(nu)
        self.columns[n + 1] = [g]
        return True

    def matrix(self, n: int, mu: int) -> None:
        """gamma_mu^(n) = preimage of iota(gamma_0^(n)) + {gamma_v^(n+1) : v < mu}."""
        col = self.columns[n]
        s = self.columns[n + 1][:mu]
        base = self.image(col[0])
        try:
            x = oplus(self.target, base, s, self.inp.one)
        except BadOne:
            bad = next(p for p in s if not self._one_ok(p))
            self.fail(BadInput("one", (bad, self.inp.one(bad))))
        except OverlapError as exc:
            raise AssertionError("column entry overlaps an earlier support") from exc
        upper = self.image(self.nus[n - 1])
        if not (_cmp(self.target, base, x) < 0 < _cmp(self.target, upper, x)):
            raise AssertionError("d + S escaped its bracket")
        self.trace.append(TraceStep("matrix", (n, mu), {"S": tuple(s), "x": x}))
        g = self.query(x)
        if g is None:
            self.fail(ConvexityGap(col[0], self.nus[n - 1], x))
        self.trace[-1].values["gamma"] = g
        prev = col[-1]
        if not self.less(prev, g):
            self.ordered(g, prev, x, self.image(prev))
        col.append(g)

    def _one_ok(self, p) -> bool:
        from .lexpower import factor_at, zero_at

        o = self.inp.one(p)
        f = factor_at(self.target, p)
        return member(f, o) and _cmp(f, zero_at(self.target, p), o) is Ordering.LESS

    def run(self):
        start = self.inp.start if self.inp.start is not None else least(self.src)
        if start is None:
            raise InvariantError("no starting element for the first row")
        if not self.in_source(start):
            self.fail(BadInput("start", (start,)))
        self.betas.append(start)
        r = 1
        while True:
            # round r: one new first-row entry, then one new entry per older column
            if not self.first_row(r - 1):
                return Exhausted(self.trace, "source has no element above the current one")
            for mu in range(1, r):
                self.matrix(r - mu, mu)
            r += 1


def refute_convex(inp: RefuterInput):
    if inp.budget < 1:
        raise BudgetZero("budget must be positive")
    try:
        return _ConvexRun(inp).run()
    except _Found as found:
        return found.witness


def refute_iso_second(base: Chain, zero: Elem, claimed, one: Elem, budget: int):
    """Walk gamma_mu = i^{-1}(chi of all earlier gamma_v) against a claimed G ~ D^G.

    ``claimed`` is an embedding G -> Pow(base, zero, G) (forward = i, inverse =
    partial i^{-1}), or an ``Iso`` whose ``from_`` side has that shape.
    """
    if isinstance(claimed, Iso):
        claimed = claimed.from_
    if not member(base, one) or _cmp(base, zero, one) is not Ordering.LESS:
        raise BadOne(f"{one!r} is not above zero")
    if budget < 1:
        raise BudgetZero("budget must be positive")
    gamma = claimed.source
    power = Pow(base, zero, gamma)
    trace: list = []
    prior: list = []
    prev_chi = None
    for step in range(budget):
        x = chi(power, prior, one)
        g = claimed.inverse(x)
        if g is None or not member(gamma, g) or claimed.forward(g) != x:
            return InverseMiss(x, trace)
        trace.append(TraceStep("chi", (step,), {"chi": x, "gamma": g}))
        if prior and _cmp(gamma, prior[-1], g) is not Ordering.LESS:
            return OrderViolation(step, prev_chi, x, prior[-1], g, trace)
        prior.append(g)
        prev_chi = x
    return Exhausted(trace)


# -- independent re-checking ---------------------------------------------------


def recheck_convex(witness, inp: RefuterInput) -> bool:
    """Re-validate a refute_convex witness by direct comparisons and oracle calls."""
    t, iota = inp.target, inp.iota
    exp = exponent(t)
    match witness:
        case ConvexityGap(a=a, b=b, c=c):
            return (
                member(t, c)
                and _cmp(t, iota.forward(a), c) is Ordering.LESS
                and _cmp(t, c, iota.forward(b)) is Ordering.LESS
                and iota.inverse(c) is None
            )
        case OrderViolation(x=x, y=y, fx=fx, fy=fy):
            return (
                _cmp(exp, x, y) is Ordering.LESS
                and iota.forward(x) == fx
                and iota.forward(y) == fy
                and _cmp(t, fx, fy) is not Ordering.LESS
            )
        case BadInput(claim="successor", evidence=(x, y)):
            return inp.successor(x) == y and not (
                member(inp.iota.source, y) and _cmp(exp, x, y) is Ordering.LESS
            )
        case BadInput(claim="cofinal", evidence=(m, y)):
            return inp.cofinal(m) == y and not (
                member(inp.iota.source, y) and _cmp(exp, m, y) <= 0
            )
        case BadInput(claim="inverse", evidence=(x, q)):
            return iota.inverse(x) == q and not (
                member(inp.iota.source, q) and iota.forward(q) == x
            )
        case BadInput(claim="iota", evidence=(x, y)):
            return iota.forward(x) == y and not member(t, y)
        case BadInput(claim="one", evidence=(p, o)):
            from .lexpower import factor_at, zero_at

            f = factor_at(t, p)
            return inp.one(p) == o and not (
                member(f, o) and _cmp(f, zero_at(t, p), o) is Ordering.LESS
            )
        case BadInput(claim="start", evidence=(s,)):
            return not member(inp.iota.source, s)
    return False


def recheck_iso_second(witness, base: Chain, zero: Elem, claimed) -> bool:
    if isinstance(claimed, Iso):
        claimed = claimed.from_
    gamma = claimed.source
    power = Pow(base, zero, gamma)
    match witness:
        case InverseMiss(elem=x):
            if not member(power, x):
                return False
            g = claimed.inverse(x)
            return g is None or not member(gamma, g) or claimed.forward(g) != x
        case OrderViolation(x=x, y=y, fx=fx, fy=fy):
            return (
                _cmp(power, x, y) is Ordering.LESS
                and claimed.inverse(x) == fx
                and claimed.inverse(y) == fy
                and _cmp(gamma, fx, fy) is not Ordering.LESS
            )
    return False
