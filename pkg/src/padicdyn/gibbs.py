"""Ising-Vannimenus model on the Cayley tree with p-adic Gibbs measures.

A boundary field h assigns four unit components to every edge.  The measures
mu_h^(n) built from exp_p of the Hamiltonian are compatible across levels
exactly when h satisfies a three-equation product system in the edge
components; translation-invariant solutions of that system are found by
fixed-point iteration, and level-periodic candidate fields are built from
periodic g-orbits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .errors import (
    DomainError,
    NoConvergence,
    NoValidPlacement,
    ZeroPartitionFunction,
)
from .padic import (
    PadicNumber,
    PrimeContext,
    diff_valuation,
    eq_to_precision,
    exp_p,
    is_unit,
    norm_diff,
    to_json,
)

Vertex = tuple[int, ...]
SpinPair = tuple[int, int]

ROOT: Vertex = ()
SPINS = (-1, 1)
PAIRS: tuple[SpinPair, ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class CayleyTree:
    """Order-k Cayley tree rooted at (), vertices as coordinate tuples."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("tree order k must be >= 1")

    def level(self, m: int) -> list[Vertex]:
        """W_m, the sphere of radius m around the root; |W_m| = k^m."""
        return [tuple(w) for w in product(range(1, self.k + 1), repeat=m)]

    def vertices(self, n: int) -> list[Vertex]:
        """V_n, the ball of radius n (root included)."""
        out: list[Vertex] = []
        for m in range(n + 1):
            out.extend(self.level(m))
        return out

    def successors(self, x: Vertex) -> list[Vertex]:
        """S(x), the k direct successors of x."""
        return [x + (i,) for i in range(1, self.k + 1)]

    @staticmethod
    def parent(x: Vertex) -> Vertex:
        if not x:
            raise DomainError("the root has no parent")
        return x[:-1]

    @staticmethod
    def distance(x: Vertex, y: Vertex) -> int:
        c = 0
        for a, b in zip(x, y):
            if a != b:
                break
            c += 1
        return (len(x) - c) + (len(y) - c)

    @staticmethod
    def compose(g: Vertex, x: Vertex) -> Vertex:
        """The semigroup operation; tau_g(x) = g o x, tau_() = identity."""
        return g + x

    @staticmethod
    def in_H(g: Vertex, m: int) -> bool:
        """Membership in H_m, the translations preserving level mod m."""
        return len(g) % m == 0

    def edges(self, n: int) -> list[tuple[Vertex, Vertex]]:
        """L_n: nearest-neighbor pairs (parent, child) inside V_n."""
        return [(self.parent(y), y) for y in self.vertices(n) if y]

    def boundary_edges(self, n: int) -> list[tuple[Vertex, Vertex]]:
        """Edges from W_{n-1} into W_n; none at n = 0."""
        if n == 0:
            return []
        return [(self.parent(y), y) for y in self.level(n)]

    def prolonged_pairs(self, n: int) -> list[tuple[Vertex, Vertex]]:
        """Distance-2 pairs along a ray: grandparent and grandchild."""
        return [(y[:-2], y) for y in self.vertices(n) if len(y) >= 2]

    def one_level_pairs(self, n: int) -> list[tuple[Vertex, Vertex]]:
        """Distance-2 pairs within one level: successors of a common vertex."""
        out = []
        for x in self.vertices(n - 1):
            out.extend(combinations(self.successors(x), 2))
        return out


@lru_cache(maxsize=None)
def _pair_lists(k: int, n: int):
    tree = CayleyTree(k)
    return (tuple(tree.edges(n)), tuple(tree.prolonged_pairs(n)),
            tuple(tree.one_level_pairs(n)))


@dataclass(frozen=True)
class Couplings:
    """Interaction constants with |J|_p <= 1/p so exp_p(H_n) always exists."""

    J: PadicNumber
    J1: PadicNumber
    J0: PadicNumber

    def __post_init__(self):
        for name, c in (("J", self.J), ("J1", self.J1), ("J0", self.J0)):
            if not c.is_zero and c.valuation < 1:
                raise DomainError(f"|{name}|_p must be <= 1/p")
        if self.J.ctx != self.J1.ctx or self.J.ctx != self.J0.ctx:
            raise DomainError("couplings must share a PrimeContext")

    @property
    def ctx(self) -> PrimeContext:
        return self.J.ctx

    @property
    def a(self) -> PadicNumber:
        return exp_p(self.J) if not self.J.is_zero else self.ctx.one()

    @property
    def b(self) -> PadicNumber:
        return exp_p(self.J1) if not self.J1.is_zero else self.ctx.one()

    @property
    def c(self) -> PadicNumber:
        return exp_p(self.J0) if not self.J0.is_zero else self.ctx.one()


Configuration = dict  # Vertex -> spin in {-1, +1}


def configurations(vertices: list[Vertex]):
    """All 2^|vertices| spin assignments, in a fixed deterministic order."""
    for spins in product(SPINS, repeat=len(vertices)):
        yield dict(zip(vertices, spins))


def concat(sigma: Configuration, omega: Configuration) -> Configuration:
    """sigma v omega: agrees with sigma on V_{n-1} and omega on W_n."""
    return {**sigma, **omega}


def interaction_sums(tree: CayleyTree, sigma: Configuration, n: int) -> tuple[int, int, int]:
    """Integer pair sums (nearest, prolonged, one-level) of sigma(x)sigma(y)."""
    edges, prolonged, one_level = _pair_lists(tree.k, n)
    s1 = sum(sigma[x] * sigma[y] for x, y in edges)
    s2 = sum(sigma[x] * sigma[y] for x, y in prolonged)
    s3 = sum(sigma[x] * sigma[y] for x, y in one_level)
    return s1, s2, s3


def hamiltonian(tree: CayleyTree, couplings: Couplings, sigma: Configuration,
                n: int | None = None) -> PadicNumber:
    """H_n = J*(nearest sum) + J1*(prolonged sum) + J0*(one-level sum)."""
    if n is None:
        n = max(len(v) for v in sigma)
    s1, s2, s3 = interaction_sums(tree, sigma, n)
    return couplings.J * s1 + couplings.J1 * s2 + couplings.J0 * s3


@dataclass(frozen=True)
class GibbsField:
    """Boundary field: four unit components per edge, keyed by the child vertex."""

    assign: dict  # Vertex -> {SpinPair: PadicNumber}

    def __post_init__(self):
        for comp in self.assign.values():
            for pair in PAIRS:
                if pair not in comp:
                    raise DomainError(f"missing field component {pair}")
                if not is_unit(comp[pair]):
                    raise DomainError("field components must be p-adic units")

    def component(self, child: Vertex, sx: int, sy: int) -> PadicNumber:
        return self.assign[child][(sx, sy)]

    def with_component(self, child: Vertex, pair: SpinPair,
                       value: PadicNumber) -> "GibbsField":
        assign = {v: dict(c) for v, c in self.assign.items()}
        assign[child][pair] = value
        return GibbsField(assign)

    @classmethod
    def from_levels(cls, tree: CayleyTree, n: int,
                    per_level: list[dict]) -> "GibbsField":
        """Level ell (1-based) children all carry per_level[(ell - 1) % len]."""
        assign = {}
        for ell in range(1, n + 1):
            comp = per_level[(ell - 1) % len(per_level)]
            for child in tree.level(ell):
                assign[child] = dict(comp)
        return cls(assign)

    @classmethod
    def uniform(cls, tree: CayleyTree, n: int, comp: dict) -> "GibbsField":
        return cls.from_levels(tree, n, [comp])

    @classmethod
    def unit(cls, tree: CayleyTree, n: int, ctx: PrimeContext) -> "GibbsField":
        one = ctx.one()
        return cls.uniform(tree, n, {pair: one for pair in PAIRS})

    def to_json(self) -> dict:
        return {
            "/".join(map(str, v)) or "root": {
                f"{'+' if sx > 0 else '-'}{'+' if sy > 0 else '-'}": to_json(h)
                for (sx, sy), h in comp.items()
            }
            for v, comp in sorted(self.assign.items())
        }


# -- measures ----------------------------------------------------------------

def measure_weight(tree: CayleyTree, couplings: Couplings, field: GibbsField,
                   sigma: Configuration, n: int) -> PadicNumber:
    """exp_p(H_n) * product of boundary components, via exp_p(J)^(pair sums)."""
    s1, s2, s3 = interaction_sums(tree, sigma, n)
    w = couplings.a ** s1 * couplings.b ** s2 * couplings.c ** s3
    for x, y in tree.boundary_edges(n):
        h = field.component(y, sigma[x], sigma[y])
        w = w * h if sigma[x] * sigma[y] > 0 else w / h
    return w


def partition_fn(tree: CayleyTree, couplings: Couplings, field: GibbsField,
                 n: int) -> PadicNumber:
    """Z_n: exact sum of weights over all configurations of V_n."""
    total = couplings.ctx.zero()
    for sigma in configurations(tree.vertices(n)):
        total = total + measure_weight(tree, couplings, field, sigma, n)
    ctx = couplings.ctx
    if total.is_zero or total.valuation > ctx.residual_digits:
        raise ZeroPartitionFunction("|Z_n|_p is below the precision floor")
    return total


def measure(tree: CayleyTree, couplings: Couplings, field: GibbsField,
            sigma: Configuration, n: int) -> PadicNumber:
    return measure_weight(tree, couplings, field, sigma, n) / partition_fn(
        tree, couplings, field, n)


@dataclass(frozen=True)
class CompatibilityReport:
    """Exhaustive check of the level-(n-1)/level-n projection identity."""

    ok: bool
    max_residual: Fraction
    residuals: tuple[Fraction, ...]  # one per sigma on V_{n-1}, fixed order

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_residual": str(self.max_residual),
            "residuals": [str(r) for r in self.residuals],
        }


def check_compatibility(tree: CayleyTree, couplings: Couplings,
                        field_n: GibbsField, field_prev: GibbsField,
                        n: int) -> CompatibilityReport:
    """For every sigma on V_{n-1}: sum over omega of mu^n(sigma v omega) = mu^{n-1}(sigma)."""
    if n < 1:
        raise DomainError("compatibility needs n >= 1")
    ctx = couplings.ctx
    z_n = partition_fn(tree, couplings, field_n, n)
    z_prev = partition_fn(tree, couplings, field_prev, n - 1)
    boundary = tree.level(n)
    residuals = []
    ok = True
    for sigma in configurations(tree.vertices(n - 1)):
        acc = ctx.zero()
        for omega in configurations(boundary):
            acc = acc + measure_weight(tree, couplings, field_n,
                                       concat(sigma, omega), n)
        lhs = acc / z_n
        rhs = measure_weight(tree, couplings, field_prev, sigma, n - 1) / z_prev
        residuals.append(norm_diff(lhs, rhs))
        if not eq_to_precision(lhs, rhs, ctx.residual_digits):
            ok = False
    return CompatibilityReport(ok, max(residuals), tuple(residuals))


# -- the boundary-field equations --------------------------------------------

def _lhs_rhs_products(tree: CayleyTree, couplings: Couplings, field: GibbsField,
                      y: Vertex):
    """The three (LHS, RHS) pairs of the product system at edge (parent(y), y)."""
    a, b = couplings.a, couplings.b
    a2, ab2 = a * a, (a * b) ** 2
    b2 = b * b
    ctx = couplings.ctx
    hxy = field.assign[y]
    lhs = (hxy[(1, 1)] * hxy[(-1, 1)],
           hxy[(-1, -1)] * hxy[(1, -1)],
           hxy[(1, 1)] * hxy[(1, -1)])
    rhs = [ctx.one(), ctx.one(), ctx.one()]
    for z in tree.successors(y):
        hyz = field.assign[z]
        u = hyz[(1, 1)] * hyz[(-1, 1)]
        v = hyz[(-1, -1)] * hyz[(1, -1)]
        rhs[0] = rhs[0] * (ab2 * u + 1) / (a2 * u + b2)
        rhs[1] = rhs[1] * (ab2 * v + 1) / (a2 * v + b2)
        rhs[2] = rhs[2] * ((ab2 * u + 1) * hyz[(-1, 1)]) / (
            (a2 * hyz[(-1, -1)] * hyz[(-1, 1)] + b2) * hyz[(1, -1)])
    return lhs, tuple(rhs)


def field_equation_residual(tree: CayleyTree, couplings: Couplings,
                            field: GibbsField, n: int) -> Fraction:
    """Worst residual of the product system over all interior edges up to level n."""
    worst = Fraction(0)
    for ell in range(1, n):
        for y in tree.level(ell):
            lhs, rhs = _lhs_rhs_products(tree, couplings, field, y)
            for left, right in zip(lhs, rhs):
                worst = max(worst, norm_diff(left, right))
    return worst


def field_satisfies_equations(tree: CayleyTree, couplings: Couplings,
                              field: GibbsField, n: int) -> bool:
    ctx = couplings.ctx
    for ell in range(1, n):
        for y in tree.level(ell):
            lhs, rhs = _lhs_rhs_products(tree, couplings, field, y)
            if not all(eq_to_precision(left, right, ctx.residual_digits)
                       for left, right in zip(lhs, rhs)):
                return False
    return True


def solve_7_11(tree: CayleyTree, couplings: Couplings, n: int = 2,
               initial: dict | None = None) -> GibbsField:
    """Translation-invariant solution of the product system, gauge h_{-+} = 1.

    In the component products u = h_{++}h_{-+}, v = h_{--}h_{+-},
    w = h_{++}h_{+-} the system decouples: u and v each solve the scalar
    fixed-point equation s = F(s)^k with F(s) = ((ab)^2 s + 1)/(a^2 s + b^2),
    a contraction on units (|F'| = |b^4 - 1|_p < 1), and w then solves
    w (a^2 uv + b^2 w)^k = (((ab)^2 u + 1) u)^k, handled by a Newton
    iteration because plain iteration in w is indifferent.
    """
    ctx = couplings.ctx
    a, b = couplings.a, couplings.b
    a2, b2 = a * a, b * b
    ab2 = (a * b) ** 2
    k = tree.k

    def F_pow_k(s: PadicNumber) -> PadicNumber:
        return ((ab2 * s + 1) / (a2 * s + b2)) ** k

    if initial is None:
        u = v = w = ctx.one()
    else:
        u = initial[(1, 1)] * initial[(-1, 1)]
        v = initial[(-1, -1)] * initial[(1, -1)]
        w = initial[(1, 1)] * initial[(1, -1)]

    budget = ctx.precision + 2 * ctx.guard
    for s_name in ("u", "v"):
        s = u if s_name == "u" else v
        trace = []
        for _ in range(budget):
            nxt = F_pow_k(s)
            trace.append(diff_valuation(nxt, s))
            if eq_to_precision(nxt, s, ctx.residual_digits):
                s = nxt
                break
            s = nxt
        else:
            raise NoConvergence(f"iteration for {s_name} stalled; trace {trace}")
        if s_name == "u":
            u = s
        else:
            v = s

    target = (((ab2 * u + 1) * u)) ** k
    if w.is_zero:
        w = u
    for _ in range(budget):
        base = a2 * u * v + b2 * w
        lhs = w * base ** k
        # compare before subtracting so convergence is not mistaken for
        # catastrophic cancellation
        if eq_to_precision(lhs, target, ctx.residual_digits):
            break
        phi = lhs - target
        dphi = base ** k + w * k * b2 * base ** (k - 1)
        w = w - phi / dphi
    else:
        raise NoConvergence("Newton iteration for w stalled above tolerance")

    comp = {(1, 1): u, (-1, 1): ctx.one(), (1, -1): w / u, (-1, -1): u * v / w}
    field = GibbsField.uniform(tree, n, comp)
    if not field_satisfies_equations(tree, couplings, field, n):
        raise NoConvergence("converged products do not satisfy the field equations")
    return field


# -- periodic boundary fields from g-orbits ----------------------------------

PLACEMENTS = ("++", "+-", "-+", "--")
_SLOT = {"++": (1, 1), "+-": (1, -1), "-+": (-1, 1), "--": (-1, -1)}


@dataclass(frozen=True)
class PlacementCandidate:
    placement: str
    field: GibbsField
    residual: Fraction


def _orbit_levels(ctx: PrimeContext, values: list[PadicNumber],
                  slots: tuple[SpinPair, ...]) -> list[dict]:
    one = ctx.one()
    levels = []
    for value in values:
        comp = {pair: one for pair in PAIRS}
        for slot in slots:
            comp[slot] = value
        levels.append(comp)
    return levels


def periodic_field_from_orbit(tree: CayleyTree, couplings: Couplings,
                              orbit: list[PadicNumber], n: int = 2,
                              placement: str | None = None) -> list[PlacementCandidate]:
    """Level-periodic fields from an m-periodic g-orbit (h_i = g(h_{i+1})).

    Every edge at level ell carries h_{(ell-1) mod m} in one chosen component,
    the rest set to 1.  All four single-component placements are scanned
    (or just the requested one) and those satisfying the product system are
    returned; if none does, NoValidPlacement carries the residual of each.
    """
    if not orbit:
        raise DomainError("empty orbit")
    ctx = couplings.ctx
    if any(not is_unit(h) for h in orbit):
        raise DomainError("orbit values must be units")
    names = PLACEMENTS if placement is None else (placement,)
    if any(name not in _SLOT for name in names):
        raise DomainError(f"placement must be one of {PLACEMENTS}")
    accepted, diagnostics = [], {}
    for name in names:
        levels = _orbit_levels(ctx, list(orbit), (_SLOT[name],))
        field = GibbsField.from_levels(tree, n, levels)
        residual = field_equation_residual(tree, couplings, field, n)
        diagnostics[name] = residual
        if field_satisfies_equations(tree, couplings, field, n):
            accepted.append(PlacementCandidate(name, field, residual))
    if not accepted:
        raise NoValidPlacement(
            {name: str(res) for name, res in diagnostics.items()})
    return accepted


def diagonal_field_from_orbit(tree: CayleyTree, couplings: Couplings,
                              orbit: list[PadicNumber],
                              n: int = 2) -> PlacementCandidate:
    """Two-component variant that does solve the system (for k = 2).

    Placing q_i = (h_i / a)^2 in both diagonal slots works because
    F(q) = g(h)/a when q = (h/a)^2, so the diagonal products telescope
    along the orbit relation h_i = g(h_{i+1}).
    """
    if tree.k != 2:
        raise DomainError("the diagonal construction needs tree order k = 2")
    ctx = couplings.ctx
    a = couplings.a
    values = [(h / a) ** 2 for h in orbit]
    levels = _orbit_levels(ctx, values, ((1, 1), (-1, -1)))
    field = GibbsField.from_levels(tree, n, levels)
    residual = field_equation_residual(tree, couplings, field, n)
    if not field_satisfies_equations(tree, couplings, field, n):
        raise NoValidPlacement({"diagonal": str(residual)})
    return PlacementCandidate("diagonal", field, residual)
