"""One-parameter persistence modules over finite totally ordered samples.

A module is a chain ``V_0 -> V_1 -> ... -> V_{N-1}`` of GF(p) spaces sitting
over strictly increasing parameter values, optionally followed by a colimit
slot ``V_inf`` fed by one map out of the last sample.  Bars are closed at both
recorded sample points; death ``inf`` means the class survives into the
colimit slot.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .linalg_ff import (
    Matrix,
    all_vectors,
    annihilator,
    block_diag,
    complement_basis,
    restricted_annihilator,
    compose,
    extend_basis,
    kernel_basis,
    membership,
    rank,
    solve_columns,
)
from .scalars import INF, NEG_INF, format_scalar, is_infinite


class ValidationError(ValueError):
    def __init__(self, message: str, position=None):
        super().__init__(message)
        self.position = position


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class PersistenceModule:
    indices: tuple
    dims: tuple
    steps: tuple
    colimit_dim: Optional[int] = None
    colimit_map: Optional[Matrix] = None
    p: int = 2

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def has_colimit(self) -> bool:
        return self.colimit_dim is not None

    @property
    def n_positions(self) -> int:
        """Sample positions plus the colimit slot, if any."""
        return len(self.indices) + (1 if self.has_colimit else 0)

    @property
    def colimit_position(self) -> Optional[int]:
        return len(self.indices) if self.has_colimit else None

    def dim_at(self, i: int) -> int:
        if i == len(self.indices):
            return self.colimit_dim
        return self.dims[i]

    def step(self, i: int) -> Matrix:
        """Map out of position i (into the colimit slot for the last sample)."""
        if i == len(self.indices) - 1:
            return self.colimit_map
        return self.steps[i]

    @classmethod
    def chain(cls, indices, dims, steps, colimit=None, p: int = 2) -> "PersistenceModule":
        """Build from plain row lists; ``colimit`` is ``(dim, rows)`` or None."""
        mats = tuple(
            Matrix.from_rows(s, p, cols=dims[i]) if not isinstance(s, Matrix) else s
            for i, s in enumerate(steps)
        )
        cdim = cmap = None
        if colimit is not None:
            cdim, rows = colimit
            cmap = rows if isinstance(rows, Matrix) else Matrix.from_rows(rows, p, cols=dims[-1])
        return cls(tuple(indices), tuple(dims), mats, cdim, cmap, p)


def validate(M: PersistenceModule) -> None:
    """Raise ValidationError at the first violated shape invariant."""
    n = len(M.indices)
    if len(M.dims) != n:
        raise ValidationError(f"{len(M.dims)} dims for {n} indices")
    for i in range(n - 1):
        if not M.indices[i] < M.indices[i + 1]:
            raise ValidationError(f"indices not strictly increasing at position {i}", i)
    for i, d in enumerate(M.dims):
        if d < 0:
            raise ValidationError(f"negative dimension at position {i}", i)
    if len(M.steps) != max(n - 1, 0):
        raise ValidationError(f"expected {max(n - 1, 0)} steps, got {len(M.steps)}")
    for i, S in enumerate(M.steps):
        if S.p != M.p:
            raise ValidationError(f"step {i} has modulus {S.p}, module has {M.p}", i)
        if S.shape != (M.dims[i + 1], M.dims[i]):
            raise ValidationError(
                f"step {i} has shape {S.shape}, expected {(M.dims[i + 1], M.dims[i])}", i)
    if M.has_colimit:
        if M.colimit_map is None or M.colimit_dim < 0:
            raise ValidationError("colimit slot without a map")
        expected = (M.colimit_dim, M.dims[-1] if n else 0)
        if M.colimit_map.shape != expected or M.colimit_map.p != M.p:
            raise ValidationError(
                f"colimit map has shape {M.colimit_map.shape}, expected {expected}", n - 1)
    elif M.colimit_map is not None:
        raise ValidationError("colimit map without a colimit slot")


def composite(M: PersistenceModule, i: int, j: int) -> Matrix:
    """Structure map from position i to position j (j may be the colimit slot)."""
    if not 0 <= i <= j < M.n_positions:
        raise ValidationError(f"invalid positions ({i}, {j})")
    A = Matrix.identity(M.dim_at(i), M.p)
    for k in range(i, j):
        A = compose(M.step(k), A)
    return A


def rank_invariant(M: PersistenceModule, i: int, j: int) -> int:
    return rank(composite(M, i, j))


# ---------------------------------------------------------------------------
# bars and barcodes


def _end_key(x):
    return (1, 0) if is_infinite(x) else (0, x)


@dataclass(frozen=True)
class Bar:
    birth: object
    death: object = INF

    def __post_init__(self):
        if not is_infinite(self.death) and self.death < self.birth:
            raise ValueError(f"death {self.death} before birth {self.birth}")

    @property
    def infinite(self) -> bool:
        return is_infinite(self.death)

    def sort_key(self):
        return (self.birth, _end_key(self.death))

    def __str__(self):
        return f"[{format_scalar(self.birth)}, {format_scalar(self.death)}]"


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars kept as a canonical sorted tuple of ``(bar, multiplicity)``."""

    bars: tuple = ()

    def __post_init__(self):
        counts = Counter()
        for item in self.bars:
            bar, mult = item if isinstance(item, tuple) else (item, 1)
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                counts[bar] += mult
        items = tuple(sorted(counts.items(), key=lambda bm: bm[0].sort_key()))
        object.__setattr__(self, "bars", items)

    @classmethod
    def of(cls, *pairs) -> "Barcode":
        """``Barcode.of((0, 2), (1, INF))`` style constructor."""
        return cls(tuple(Bar(b, d) for b, d in pairs))

    def expanded(self) -> list:
        return [bar for bar, m in self.bars for _ in range(m)]

    def __len__(self):
        return sum(m for _, m in self.bars)

    def infinite_bars(self) -> list:
        return [b for b in self.expanded() if b.infinite]

    def finite_bars(self) -> list:
        return [b for b in self.expanded() if not b.infinite]

    def translate(self, s) -> "Barcode":
        return Barcode(tuple(
            (Bar(b.birth + s, b.death if b.infinite else b.death + s), m) for b, m in self.bars))

    def reflect(self) -> "Barcode":
        """Finite bars ``[b, d] -> [-d, -b]``; infinite bars ``[b, inf) -> [-b, inf)``."""
        out = []
        for b, m in self.bars:
            out.append((Bar(-b.birth) if b.infinite else Bar(-b.death, -b.birth), m))
        return Barcode(tuple(out))

    def to_text(self) -> str:
        """One ``birth death mult`` line per distinct bar, sorted by (birth, death)."""
        return "".join(
            f"{format_scalar(b.birth)} {format_scalar(b.death)} {m}\n" for b, m in self.bars)


def barcode(M: PersistenceModule) -> Barcode:
    """Interval decomposition by inclusion-exclusion on the rank invariant."""
    validate(M)
    L = M.n_positions
    n = len(M.indices)
    cache = {}

    def r(i, j):
        if i < 0 or j >= L:
            return 0
        if (i, j) not in cache:
            cache[i, j] = rank_invariant(M, i, j)
        return cache[i, j]

    bars = []
    for i in range(n):
        for j in range(i, L):
            mu = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if mu < 0:  # pragma: no cover - would mean the rank function is not a barcode's
                raise ArithmeticError(f"negative multiplicity at ({i}, {j})")
            if mu:
                death = INF if j == n else M.indices[j]
                bars.append((Bar(M.indices[i], death), mu))
    return Barcode(tuple(bars))


def _brute_rank(A: Matrix) -> int:
    """Rank by counting the image of every vector (independent of elimination)."""
    image = {A.apply(v) for v in all_vectors(A.cols, A.p)}
    size, r = len(image), 0
    while size > 1:
        size //= A.p
        r += 1
    return r


def brute_force_barcode(M: PersistenceModule) -> Barcode:
    """Oracle: enumerate every dimension-compatible barcode and keep the one whose
    rank function matches brute-force ranks of the composed structure maps."""
    validate(M)
    n, L = len(M.indices), M.n_positions
    if n > 5 or any(M.dim_at(i) > 3 for i in range(L)):
        raise InstanceTooLarge("brute force is limited to 5 samples of dimension <= 3")
    target = {(i, j): _brute_rank(composite(M, i, j)) for i in range(L) for j in range(i, L)}
    dims = [M.dim_at(i) for i in range(L)]

    def candidates(pos, alive):
        # alive: tuple of counts indexed by birth position
        if pos == L:
            yield [(b, L - 1) for b in range(L) for _ in range(alive[b])]
            return
        groups = [range(alive[b] + 1) for b in range(L)]
        for keep in itertools.product(*groups):
            kept = sum(keep)
            if kept > dims[pos]:
                continue
            died = [(b, pos - 1) for b in range(L) for _ in range(alive[b] - keep[b])]
            nxt = list(keep)
            nxt[pos] += dims[pos] - kept
            for rest in candidates(pos + 1, tuple(nxt)):
                yield died + rest

    matches = []
    for bars in candidates(0, (0,) * L):
        ok = all(sum(1 for b, d in bars if b <= i and d >= j) == target[i, j] for (i, j) in target)
        if ok:
            matches.append(bars)
    if len(matches) != 1:  # pragma: no cover - rank function determines the barcode
        raise ArithmeticError(f"{len(matches)} barcodes match the rank function")
    out = []
    for b, d in matches[0]:
        if b == n:
            continue  # classes of the colimit slot outside every image
        out.append(Bar(M.indices[b], INF if d == n else M.indices[d]))
    return Barcode(tuple(out))


# ---------------------------------------------------------------------------
# shifts and duals


def shift_module(M: PersistenceModule, s) -> PersistenceModule:
    """Module whose value at t is the old value at t + s (indices move by -s)."""
    return replace(M, indices=tuple(t - s for t in M.indices))


def colimit_images(M: PersistenceModule) -> list:
    """Composite maps from every sample position into the colimit slot."""
    return [composite(M, i, len(M.indices)) for i in range(len(M.indices))]


def dual_module(M: PersistenceModule) -> PersistenceModule:
    """Dual over negated, reversed indices.

    Without a colimit this is the transposed chain.  With a colimit, the
    part of ``V_t`` dying before the colimit (``ker pi_t``) is transposed,
    while the part reaching the colimit is replaced by the annihilator of the
    image of the previous sample, so an infinite bar born at b comes back
    born at -b and the dual's colimit is ``V_inf^*``.  Functionals vanishing
    on every image are split off (they would be spurious infinite bars), so
    the annihilators are taken inside a fixed complement of them.
    """
    validate(M)
    n, p = len(M.indices), M.p
    new_indices = tuple(-t for t in reversed(M.indices))
    if not M.has_colimit:
        return PersistenceModule(new_indices, tuple(reversed(M.dims)),
                                 tuple(S.transpose() for S in reversed(M.steps)), None, None, p)
    c = M.colimit_dim
    pis = colimit_images(M)
    K = [kernel_basis(pi) for pi in pis]
    # functionals vanishing on every image carry no bar; keep a complement of them
    N = annihilator(pis[-1]) if n else Matrix.identity(c, p)
    C = complement_basis(N)
    ann = [C if j == 0 else restricted_annihilator(pis[j - 1], N, C) for j in range(n)]
    dims, steps = [], []
    for j in reversed(range(n)):
        dims.append(K[j].cols + ann[j].cols)
    for j in reversed(range(1, n)):
        C_j = solve_columns(K[j], compose(M.steps[j - 1], K[j - 1]))
        inc = solve_columns(ann[j - 1], ann[j])
        steps.append(block_diag(C_j.transpose(), inc))
    cmap = block_diag(Matrix.zero(0, K[0].cols, p), ann[0]) if n else Matrix.zero(c, 0, p)
    return PersistenceModule(new_indices, tuple(dims), tuple(steps), c, cmap, p)


# ---------------------------------------------------------------------------
# spectral invariants


def _check_class(M: PersistenceModule, a: Sequence[int]) -> tuple:
    if not M.has_colimit:
        raise ValidationError("module has no colimit slot")
    if len(a) != M.colimit_dim:
        raise ValidationError(f"class has length {len(a)}, colimit has dimension {M.colimit_dim}")
    return tuple(x % M.p for x in a)


def min_appearance(M: PersistenceModule, a: Sequence[int]):
    """Smallest sample index whose image in the colimit contains a; None if none does."""
    a = _check_class(M, a)
    for i, pi in enumerate(colimit_images(M)):
        if membership(a, pi) is not None:
            return M.indices[i]
    return None


def adapted_basis(M: PersistenceModule) -> list:
    """Basis of the image of the last sample in ``V_inf`` filtered by first appearance.

    Returns ``[(vector, birth), ...]``; the births are the left endpoints of
    the infinite bars.
    """
    out = []
    basis = []
    for i, pi in enumerate(colimit_images(M)):
        basis, added = extend_basis(basis, pi.columns(), M.colimit_dim, M.p)
        out.extend((v, M.indices[i]) for v in added)
    return out


def spectral_invariant_pm(M: PersistenceModule, a: Sequence[int]):
    """Largest birth among adapted basis elements needed to express a.

    Returns ``-inf`` for ``a == 0`` and None when a is outside every image.
    """
    a = _check_class(M, a)
    if not any(a):
        return NEG_INF
    basis = adapted_basis(M)
    if not basis:
        return None
    B = Matrix.from_columns([v for v, _ in basis], M.colimit_dim, M.p)
    x = membership(a, B)
    if x is None:
        return None
    return max(birth for (v, birth), coef in zip(basis, x) if coef)


# ---------------------------------------------------------------------------
# distances


def interleaving_distance(M1: PersistenceModule, M2: PersistenceModule):
    """Interleaving distance, computed as the bottleneck distance of the barcodes."""
    from .matching import bottleneck_distance

    if M1.has_colimit != M2.has_colimit:
        raise ValidationError("colimit mismatch: one module has a colimit slot, the other not")
    return bottleneck_distance(barcode(M1), barcode(M2))
