"""Symbolic model of the Floer directed system of the unit cosphere bundle of S^n.

Slopes are :class:`SymbolicSlope` values ``2*pi*m + eps``.  In each degree the
model has at most one generator, so every space is 0 or 1 dimensional and
every structure map is an identity or zero.  Reported invariants drop eps,
which puts them exactly on the spectrum ``2*pi*Z`` (shifted by the constant
Hamiltonian).

Only constant contact Hamiltonians are modelled: for those ``eta # h`` is
``eta + h`` and the directed system of h is the model translated by ``-h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .gapped import (
    GappedModule,
    NotWitnessed,
    comparable,
    dual_pairing,
    enumerate_restrictions,
    first_appearance,
    gapped_dual,
    gapped_spectral_invariant,
    restrict,
    translate,
    validate_gapped,
)
from .linalg_ff import Matrix, compose
from .persistence import Barcode, barcode
from .scalars import INF, SymbolicSlope, format_scalar, parse_rational, parse_scalar

TWO_PI = SymbolicSlope(1, 0)
DEFAULT_EPSILON = Fraction(1, 10)


# ---------------------------------------------------------------------------
# the ring  Lambda(a) (x) Z2[u]


@dataclass(frozen=True)
class SHModelClass:
    """Basis element ``u^k`` (kind "u") or ``a*u^k`` (kind "au")."""

    kind: str
    exponent: int

    def __post_init__(self):
        if self.kind not in ("u", "au"):
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")

    def degree(self, n: int) -> int:
        base = self.exponent * (n - 1)
        return base + n if self.kind == "u" else base

    @classmethod
    def parse(cls, text: str) -> "SHModelClass":
        """Accepts ``e``, ``a``, ``u``, ``u^k``, ``au^k`` and ``a*u^k``."""
        s = text.replace(" ", "").replace("*", "")
        if s == "e":
            return cls("u", 0)
        if s == "a":
            return cls("au", 0)
        kind = "au" if s.startswith("a") else "u"
        rest = s[1:] if kind == "au" else s
        if not rest.startswith("u"):
            raise ValueError(f"cannot parse class {text!r}")
        exp = rest[1:]
        if exp == "":
            return cls(kind, 1)
        if not exp.startswith("^") or not exp[1:].isdigit():
            raise ValueError(f"cannot parse class {text!r}")
        return cls(kind, int(exp[1:]))

    @classmethod
    def in_degree(cls, n: int, degree: int) -> Optional["SHModelClass"]:
        """The unique basis class of a degree, if any (n odd makes the two families disjoint)."""
        if degree >= 0 and degree % (n - 1) == 0:
            return cls("au", degree // (n - 1))
        if degree - n >= 0 and (degree - n) % (n - 1) == 0:
            return cls("u", (degree - n) // (n - 1))
        return None

    def __str__(self):
        if self.kind == "u":
            return "e" if self.exponent == 0 else ("u" if self.exponent == 1 else f"u^{self.exponent}")
        return "a" if self.exponent == 0 else ("au" if self.exponent == 1 else f"au^{self.exponent}")


def sh_product(x: SHModelClass, y: SHModelClass) -> Optional[SHModelClass]:
    """Pair-of-pants product on basis classes; None stands for zero."""
    if x.kind == "au" and y.kind == "au":
        return None
    kind = "au" if "au" in (x.kind, y.kind) else "u"
    return SHModelClass(kind, x.exponent + y.exponent)


def hf_dimension(n: int, m: int, k: int) -> int:
    """``#{l in [0, 2m] : k = l(n-1) or k = l(n-1)+n}``."""
    return sum(1 for l in range(0, 2 * m + 1) for d in (l * (n - 1), l * (n - 1) + n) if d == k)


def _constant(x):
    if isinstance(x, SymbolicSlope):
        return x.const if x.two_pi == 0 else x
    if isinstance(x, str):
        return _constant(parse_scalar(x))
    return parse_rational(x)


@dataclass(frozen=True)
class ConstantContactHamiltonian:
    """A constant h; the value may be a rational or a slope such as 2*pi."""

    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", _constant(self.value))

    @property
    def osc_reeb(self) -> Fraction:
        return Fraction(0)


def _h(h):
    return h.value if isinstance(h, ConstantContactHamiltonian) else _constant(h)


# ---------------------------------------------------------------------------
# the model


@dataclass(frozen=True)
class FloerSystemModel:
    n: int
    m_max: int
    degree: int
    epsilon: Fraction
    module: GappedModule
    generator: Optional[SHModelClass]
    offsets: tuple = ()
    negative_slot: bool = False

    def slope(self, m: int, offset=None) -> SymbolicSlope:
        return SymbolicSlope(m, self.epsilon if offset is None else offset)

    def class_vector(self, theta: SHModelClass) -> tuple:
        if theta.degree(self.n) != self.degree:
            raise ValueError(f"class {theta} has degree {theta.degree(self.n)}, model has {self.degree}")
        return (1,)


def build_cosphere_model(n: int, m_max: int, degree: int, epsilon=DEFAULT_EPSILON,
                         offsets: Optional[Sequence] = None,
                         negative_slot: bool = False) -> FloerSystemModel:
    """Degree slice of the directed system over slopes ``2*pi*m + offset``.

    The l-generator exists from the first m with ``l <= 2m`` on and maps
    identically forward; into the colimit it goes to ``u^l`` or ``a*u^l``.
    With ``negative_slot`` one more slope ``-2*pi + eps`` is added, carrying
    the absolute homology (degrees -n and 0) with zero maps onward.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    epsilon = parse_rational(epsilon)
    offs = tuple(sorted(parse_rational(o) for o in offsets)) if offsets else (epsilon,)
    if not all(0 < o < 6 for o in offs):
        raise ValueError("offsets must lie in (0, 6), below the first spectral gap 2*pi")
    eps = offs[0]
    gen = SHModelClass.in_degree(n, degree)
    level = gen.exponent if gen is not None else None
    ms = ([-1] if negative_slot else []) + list(range(m_max + 1))

    def dim(m):
        if m < 0:
            return 1 if degree in (-n, 0) else 0
        return 1 if level is not None and level <= 2 * m else 0

    points = sorted((SymbolicSlope(m, o), m) for m in ms for o in offs)
    indices = tuple(t for t, _ in points)
    level_of = dict(points)
    dims = tuple(dim(m) for _, m in points)
    lam = TWO_PI
    maps = {}
    for s in indices:
        for t in indices:
            if s < t and comparable(s, t, lam):
                ds, dt = dim(level_of[s]), dim(level_of[t])
                live = level_of[s] >= 0 and ds == dt == 1
                maps[(s, t)] = Matrix.identity(1) if live else Matrix.zero(dt, ds)
    c = 1 if gen is not None else 0
    cmaps = tuple(
        Matrix.identity(1) if (c == 1 and level_of[t] >= 0 and dim(level_of[t]) == 1)
        else Matrix.zero(c, dim(level_of[t]))
        for t in indices)
    G = GappedModule(lam, indices, dims, maps, c, cmaps, 2)
    validate_gapped(G)
    return FloerSystemModel(n, m_max, degree, eps, G, gen, offs, negative_slot)


def model_for_class(n: int, m_max: int, theta: SHModelClass, **kw) -> FloerSystemModel:
    return build_cosphere_model(n, m_max, theta.degree(n), **kw)


def model_barcode(model: FloerSystemModel) -> Barcode:
    """Barcode of the normalized 2*pi restriction through the base offset, eps suppressed."""
    seqs = [s for s in enumerate_restrictions(model.module, TWO_PI)
            if s.offset == SymbolicSlope(0, model.epsilon)]
    return barcode(restrict(model.module, seqs[0])).translate(-model.epsilon)


# ---------------------------------------------------------------------------
# spectral invariants


def _raw_invariant(model: FloerSystemModel, h: Fraction, theta: SHModelClass):
    G = translate(model.module, -h)
    return gapped_spectral_invariant(G, model.class_vector(theta))


def contact_spectral_invariant(model: FloerSystemModel, h, theta: SHModelClass) -> SymbolicSlope:
    """``c(h, theta)`` for a constant h, with eps dropped from the reported value."""
    value = _raw_invariant(model, _h(h), theta)
    return SymbolicSlope.coerce(value + model.epsilon)


def cosphere_invariant(n: int, m_max: int, h, theta: SHModelClass) -> SymbolicSlope:
    return contact_spectral_invariant(model_for_class(n, m_max, theta), h, theta)


def dual_contact_value(model: FloerSystemModel, h, theta: SHModelClass) -> SymbolicSlope:
    """``c(h, theta)`` recomputed as minus the invariant of the paired class in the dual system."""
    G = translate(model.module, -_h(h))
    a = model.class_vector(theta)
    a_star = dual_pairing(G, a)
    return SymbolicSlope.coerce(-gapped_spectral_invariant(gapped_dual(G), a_star) + model.epsilon)


def expected_value(theta: SHModelClass, h=0) -> SymbolicSlope:
    """``h - 2*pi*ceil(k/2)``: the closed form the model is built to reproduce."""
    k = theta.exponent
    return SymbolicSlope(-((k + 1) // 2), 0) + _h(h)


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    checks: list = field(default_factory=list)  # (name, detail, ok)
    triangle: list = field(default_factory=list)  # records, never asserted

    @property
    def ok(self) -> bool:
        return all(ok for _, _, ok in self.checks)

    def add(self, name: str, detail: str, ok: bool):
        self.checks.append((name, detail, bool(ok)))

    def lines(self) -> list:
        out = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, detail, ok in self.checks]
        for r in self.triangle:
            out.append(
                f"REPORT triangle h={format_scalar(r['h'])} g={format_scalar(r['g'])} "
                f"theta1={r['theta1']} theta2={r['theta2']} product={r['product']}: "
                f"lhs={format_scalar(r['lhs'])} rhs={format_scalar(r['rhs'])} observed {r['comparison']}")
        return out


def _compare(x, y) -> str:
    if x == y:
        return "lhs = rhs"
    return "lhs < rhs" if x < y else "lhs > rhs"


def triangle_record(n: int, m_max: int, h, g, theta1: SHModelClass, theta2: SHModelClass) -> dict:
    """Both sides of ``c(h # g, theta1 * theta2) <= c(h, theta1) + c(g, theta2)``."""
    h, g = _h(h), _h(g)
    prod = sh_product(theta1, theta2)
    lhs = INF if prod is None else cosphere_invariant(n, m_max, h + g, prod)
    rhs = cosphere_invariant(n, m_max, h, theta1) + cosphere_invariant(n, m_max, g, theta2)
    return {"h": h, "g": g, "theta1": str(theta1), "theta2": str(theta2),
            "product": "0" if prod is None else str(prod), "lhs": lhs, "rhs": rhs,
            "comparison": _compare(lhs, rhs)}


def spectral_axiom_report(n: int, m_max: int, hs: Sequence, thetas: Sequence[SHModelClass],
                          triangle_pairs: Sequence = ()) -> AxiomReport:
    """Spectrality, shift, monotonicity and strict stability on constants.

    ``triangle_pairs`` holds ``(h, g, theta1, theta2)`` tuples whose two
    sides are evaluated and recorded without being asserted.
    """
    rep = AxiomReport()
    hs = sorted(_h(h) for h in hs)
    for theta in thetas:
        model = model_for_class(n, m_max, theta)
        base = contact_spectral_invariant(model, 0, theta)
        values = {h: contact_spectral_invariant(model, h, theta) for h in hs}
        for h, c in values.items():
            off = SymbolicSlope.coerce(c - h)
            rep.add("spectrality", f"c({format_scalar(h)}, {theta}) = {format_scalar(c)}",
                    off.const == 0 and off.two_pi.denominator == 1)
            rep.add("shift", f"c({format_scalar(h)}, {theta}) - c(0, {theta}) = {format_scalar(c - base)}",
                    c - base == h)
        for i, g in enumerate(hs):
            for h in hs[i + 1:]:
                rep.add("monotonicity", f"c({format_scalar(g)}, {theta}) <= c({format_scalar(h)}, {theta})",
                        values[g] <= values[h])
                rep.add("stability", f"c({format_scalar(h)}, {theta}) - c({format_scalar(g)}, {theta}) = "
                        f"{format_scalar(values[h] - values[g])}", values[h] - values[g] == h - g)
        # the same constant written twice defines the same isotopy class
        rep.add("descent", f"{theta}: repeated evaluation agrees",
                all(contact_spectral_invariant(model, h, theta) == values[h] for h in hs))
    for h, g, t1, t2 in triangle_pairs:
        rep.triangle.append(triangle_record(n, m_max, h, g, t1, t2))
    return rep


# ---------------------------------------------------------------------------
# anti-spectral invariant


@dataclass(frozen=True)
class SourcedSystem:
    """A gapped module with a source space S and maps ``S -> V_t`` for positive slopes."""

    module: GappedModule
    source_dim: int
    source_maps: tuple
    epsilon: Fraction = DEFAULT_EPSILON

    def validate(self):
        G = self.module
        if len(self.source_maps) != len(G.indices):
            raise ValueError("need one source map per slope")
        for t, S in zip(G.indices, self.source_maps):
            if S.shape != (G.dim(t), self.source_dim):
                raise ValueError(f"source map at {format_scalar(t)} has shape {S.shape}")
        for s, t in G.pairs():
            if compose(G.maps[(s, t)], self.source_maps[G.position(s)]) != self.source_maps[G.position(t)]:
                raise ValueError(f"source maps incompatible on ({format_scalar(s)}, {format_scalar(t)})")


def anti_spectral_invariant(system: SourcedSystem, h, theta: Sequence[int]) -> SymbolicSlope:
    """``-inf{eta > -h : theta in ker(S -> V_{eta + h})}`` with eps dropped."""
    h = _h(h)
    system.validate()
    G = system.module
    for t, S in zip(G.indices, system.source_maps):
        if not t > 0:
            continue
        if not any(S.apply(theta)):
            return SymbolicSlope.coerce(-(t - h) + system.epsilon)
    raise NotWitnessed("class never enters a kernel within the window")


def dying_source_fixture(m_max: int = 3, death: int = 1, epsilon=DEFAULT_EPSILON) -> SourcedSystem:
    """One-dimensional source that survives below slope ``2*pi*death + eps`` and dies there."""
    eps = parse_rational(epsilon)
    idx = tuple(SymbolicSlope(m, eps) for m in range(m_max + 1))
    dims = tuple(1 if m < death else 0 for m in range(m_max + 1))
    maps = {}
    for i, s in enumerate(idx):
        for j, t in enumerate(idx):
            if s < t and comparable(s, t, TWO_PI):
                maps[(s, t)] = Matrix.identity(1) if dims[i] == dims[j] == 1 else Matrix.zero(dims[j], dims[i])
    G = GappedModule(TWO_PI, idx, dims, maps, None, None, 2)
    validate_gapped(G)
    src = tuple(Matrix.identity(1) if d else Matrix.zero(0, 1) for d in dims)
    return SourcedSystem(G, 1, src, eps)


# ---------------------------------------------------------------------------
# quasi-states and quasi-measures


@dataclass
class QuasiStateTrace:
    h: Fraction
    values: list  # c(k h, e) / k for k = 1..K
    subadditive: bool

    @property
    def estimate(self):
        return self.values[-1]


def _as_rational(x):
    if isinstance(x, SymbolicSlope) and x.two_pi == 0:
        return x.const
    return x


def quasi_state_estimate(n: int, m_max: int, h, K: int) -> QuasiStateTrace:
    """Trace of ``c(k h, e) / k`` and a check that ``k -> c(k h, e)`` is subadditive."""
    if K < 1:
        raise ValueError("K must be at least 1")
    h = _h(h)
    unit = SHModelClass("u", 0)
    model = model_for_class(n, m_max, unit)
    c = {k: contact_spectral_invariant(model, k * h, unit) for k in range(1, K + 1)}
    values = [_as_rational(c[k] / k) for k in range(1, K + 1)]
    sub = all(c[k + l] <= c[k] + c[l] for k in range(1, K) for l in range(1, K - k + 1))
    return QuasiStateTrace(h, values, sub)


@dataclass(frozen=True)
class Candidate:
    """A cutoff function on a finite point set, with its quasi-state value."""

    name: str
    values: tuple  # ((point, value), ...)
    zeta: Optional[Fraction] = None

    def value_at(self, x):
        return dict(self.values)[x]

    def equals_one_on(self, A) -> bool:
        vals = dict(self.values)
        return all(vals[x] == 1 for x in A)


@dataclass
class QuasiMeasureValue:
    value: object
    unconstrained: bool
    witness: Optional[str] = None


def quasi_measure_eval(zeta: Optional[Callable], candidates: Sequence[Candidate], A) -> QuasiMeasureValue:
    """Infimum of zeta over candidates equal to 1 on A (``+inf`` when none qualify)."""
    if not candidates:
        raise ValueError("candidate family is empty")
    best, who = INF, None
    for cand in candidates:
        if not cand.equals_one_on(A):
            continue
        z = zeta(cand) if zeta is not None else cand.zeta
        if z < best:
            best, who = z, cand.name
    return QuasiMeasureValue(best, who is None, who)


def quasi_measure_monotone(zeta, candidates: Sequence[Candidate], A, B) -> bool:
    """``tau(A) <= tau(B)`` for ``A`` inside ``B``."""
    if not set(A) <= set(B):
        raise ValueError("A must be contained in B")
    return quasi_measure_eval(zeta, candidates, A).value <= quasi_measure_eval(zeta, candidates, B).value


def constant_quasi_state(n: int = 3, m_max: int = 2, K: int = 4) -> Callable:
    """zeta oracle for constant candidates, evaluated through the model."""

    def zeta(cand: Candidate):
        vals = {v for _, v in cand.values}
        if len(vals) != 1:
            if cand.zeta is None:
                raise ValueError(f"candidate {cand.name} is not constant and has no zeta value")
            return cand.zeta
        return quasi_state_estimate(n, m_max, vals.pop(), K).estimate

    return zeta


# ---------------------------------------------------------------------------
# eternal classes


@dataclass(frozen=True)
class EternalResult:
    eternal: bool
    threshold: object = None

    def __str__(self):
        if self.eternal:
            return "eternal-within-window"
        if self.threshold is None:
            return "not witnessed in window"
        return f"not eternal, threshold {format_scalar(self.threshold)}"


def eternal_check(G: GappedModule, a: Sequence[int]) -> EternalResult:
    """Eternal when a is in the image at every sample; otherwise the least slope of appearance."""
    if not G.has_colimit:
        raise ValueError("module has no colimit slot")
    a = tuple(x % G.p for x in a)
    if not any(a):
        return EternalResult(True)
    t0 = first_appearance(G, a)
    if t0 == G.indices[0]:
        # images need not be nested in a gapped module
        from .linalg_ff import membership

        if all(membership(a, G.colimit_map(t)) is not None for t in G.indices):
            return EternalResult(True)
    return EternalResult(False, t0)
