"""Gapped modules: directed systems over ``(I, <=_lam)``.

``s <=_lam t`` holds iff ``s == t`` or ``s <= t - lam``.  Only comparable
pairs carry structure maps, so barcodes only make sense after restricting to
an arithmetic progression of step ``delta >= lam``.

Index sets are finite windows of the parameter line; every infimum over
restrictions is a minimum over the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .linalg_ff import (
    Matrix,
    annihilator,
    block_diag,
    complement_basis,
    compose,
    hstack,
    kernel_basis,
    membership,
    restricted_annihilator,
    solve_columns,
)
from .persistence import (
    Barcode,
    PersistenceModule,
    ValidationError,
    barcode,
    interleaving_distance,
    shift_module,
    spectral_invariant_pm,
    validate,
)
from .scalars import INF, floor_div, format_scalar


class NotWitnessed(LookupError):
    """The class does not appear anywhere inside the sampled window."""


class GapError(ValueError):
    pass


def comparable(s, t, lam) -> bool:
    """``s <=_lam t``: either equal, or s at least lam below t."""
    if not lam > 0:
        raise GapError("gap must be positive")
    return s == t or s <= t - lam


@dataclass(frozen=True)
class GappedModule:
    gap: object
    indices: tuple
    dims: tuple
    maps: dict = field(hash=False, compare=True)
    colimit_dim: Optional[int] = None
    colimit_maps: Optional[tuple] = None
    p: int = 2

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "dims", tuple(self.dims))
        if self.colimit_maps is not None:
            object.__setattr__(self, "colimit_maps", tuple(self.colimit_maps))

    @property
    def has_colimit(self) -> bool:
        return self.colimit_dim is not None

    def position(self, t) -> int:
        try:
            return self.indices.index(t)
        except ValueError:
            raise ValidationError(f"{format_scalar(t)} is not a sample point") from None

    def dim(self, t) -> int:
        return self.dims[self.position(t)]

    def pairs(self):
        """Every comparable pair ``(s, t)`` with s < t."""
        return [(s, t) for s in self.indices for t in self.indices
                if s < t and comparable(s, t, self.gap)]

    def map(self, s, t) -> Matrix:
        if s == t:
            return Matrix.identity(self.dim(s), self.p)
        if not comparable(s, t, self.gap):
            raise ValidationError(f"{format_scalar(s)} and {format_scalar(t)} are not comparable")
        return self.maps[(s, t)]

    def colimit_map(self, t) -> Matrix:
        return self.colimit_maps[self.position(t)]

    def __hash__(self):
        return hash((self.gap, self.indices, self.dims))

    @classmethod
    def from_total(cls, M: PersistenceModule, gap) -> "GappedModule":
        """Gapped module obtained by forgetting the maps between incomparable samples."""
        from .persistence import composite

        validate(M)
        maps = {}
        pos = {t: i for i, t in enumerate(M.indices)}
        for s in M.indices:
            for t in M.indices:
                if s < t and comparable(s, t, gap):
                    maps[(s, t)] = composite(M, pos[s], pos[t])
        cm = None
        if M.has_colimit:
            cm = tuple(composite(M, i, len(M.indices)) for i in range(len(M.indices)))
        return cls(gap, M.indices, M.dims, maps, M.colimit_dim, cm, M.p)


def validate_gapped(G: GappedModule) -> None:
    """Check shapes, ``iota_{t,t} = 1``, functoriality on every comparable triple
    and colimit compatibility; raise ValidationError naming the first witness."""
    if not G.gap > 0:
        raise ValidationError("gap must be positive")
    n = len(G.indices)
    if len(G.dims) != n:
        raise ValidationError("dims and indices differ in length")
    for i in range(n - 1):
        if not G.indices[i] < G.indices[i + 1]:
            raise ValidationError(f"indices not strictly increasing at position {i}", i)
    expected = set(G.pairs())
    for key, A in G.maps.items():
        s, t = key
        if s == t:
            if A != Matrix.identity(G.dim(s), G.p):
                raise ValidationError(f"map ({format_scalar(s)}, {format_scalar(t)}) is not the identity", key)
        elif key not in expected:
            raise ValidationError(f"map on non-comparable pair ({format_scalar(s)}, {format_scalar(t)})", key)
    for key in sorted(expected):
        s, t = key
        if key not in G.maps:
            raise ValidationError(f"missing map ({format_scalar(s)}, {format_scalar(t)})", key)
        A = G.maps[key]
        if A.shape != (G.dim(t), G.dim(s)) or A.p != G.p:
            raise ValidationError(
                f"map ({format_scalar(s)}, {format_scalar(t)}) has shape {A.shape}, "
                f"expected {(G.dim(t), G.dim(s))}", key)
    for r, s in sorted(expected):
        for t in G.indices:
            if (s, t) in expected:
                if compose(G.maps[(s, t)], G.maps[(r, s)]) != G.maps[(r, t)]:
                    raise ValidationError(
                        "functoriality fails on "
                        f"({format_scalar(r)}, {format_scalar(s)}, {format_scalar(t)})", (r, s, t))
    if G.has_colimit:
        if G.colimit_maps is None or len(G.colimit_maps) != n:
            raise ValidationError("need one colimit map per index")
        for t, P in zip(G.indices, G.colimit_maps):
            if P.shape != (G.colimit_dim, G.dim(t)) or P.p != G.p:
                raise ValidationError(f"colimit map at {format_scalar(t)} has shape {P.shape}", t)
        for s, t in sorted(expected):
            if compose(G.colimit_map(t), G.maps[(s, t)]) != G.colimit_map(s):
                raise ValidationError(
                    f"colimit compatibility fails on ({format_scalar(s)}, {format_scalar(t)})", (s, t))


# ---------------------------------------------------------------------------
# restrictions


@dataclass(frozen=True)
class RestrictionSequence:
    """Points ``offset + i*step`` for i in ``[i_min, i_max]``."""

    offset: object
    step: object
    i_min: int
    i_max: int

    def __post_init__(self):
        if not self.step > 0:
            raise GapError("step must be positive")
        if self.i_min > self.i_max:
            raise ValueError("empty window")

    def point(self, i: int):
        return self.offset + self.step * i

    def points(self) -> list:
        return [self.point(i) for i in range(self.i_min, self.i_max + 1)]

    @property
    def normalized(self) -> bool:
        return 0 <= self.offset < self.step

    def __len__(self):
        return self.i_max - self.i_min + 1

    def reindexed(self, n: int) -> "RestrictionSequence":
        """Same points, indexed so that old index ``i + n`` becomes i."""
        return RestrictionSequence(self.point(n), self.step, self.i_min - n, self.i_max - n)

    def __str__(self):
        pts = ", ".join(format_scalar(t) for t in self.points())
        return f"offset={format_scalar(self.offset)} step={format_scalar(self.step)} [{pts}]"


def _progressions(indices: Sequence, step) -> list:
    """Maximal runs ``t, t+step, t+2*step, ...`` inside the sample."""
    present = set(indices)
    runs = []
    for t in indices:
        if t - step in present:
            continue
        run = [t]
        while run[-1] + step in present:
            run.append(run[-1] + step)
        runs.append(run)
    return runs


def enumerate_restrictions(G: GappedModule, delta, normalized_only: bool = True) -> list:
    """Restrictions of step delta along every maximal progression of the sample.

    Each progression is returned once in normalized indexing (offset in
    ``[0, delta)``); with ``normalized_only=False`` every reindexing that puts
    index 0 on one of its points is returned as well.
    """
    if delta < G.gap:
        raise GapError("step below gap")
    out = []
    for run in _progressions(G.indices, delta):
        k = floor_div(run[0], delta)
        offset = run[0] - delta * k
        norm = RestrictionSequence(offset, delta, k, k + len(run) - 1)
        seqs = [norm]
        if not normalized_only:
            for n in range(norm.i_min, norm.i_max + 1):
                r = norm.reindexed(n)
                if r != norm:
                    seqs.append(r)
        out.extend(seqs)
    return out


def restrict(G: GappedModule, seq: RestrictionSequence) -> PersistenceModule:
    """Totally ordered module ``i -> V_{a(i)}`` labelled by the parameter values."""
    pts = seq.points()
    present = set(G.indices)
    for t in pts:
        if t not in present:
            raise ValidationError(f"progression point {format_scalar(t)} is not a sample point")
    if seq.step < G.gap:
        raise GapError("step below gap")
    dims = tuple(G.dim(t) for t in pts)
    steps = tuple(G.map(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    if G.has_colimit:
        return PersistenceModule(tuple(pts), dims, steps, G.colimit_dim, G.colimit_map(pts[-1]), G.p)
    return PersistenceModule(tuple(pts), dims, steps, None, None, G.p)


def translate(G: GappedModule, u) -> GappedModule:
    """Move every index by +u; all spaces and maps are unchanged."""
    maps = {(s + u, t + u): A for (s, t), A in G.maps.items()}
    return replace(G, indices=tuple(t + u for t in G.indices), maps=maps)


# ---------------------------------------------------------------------------
# spectral invariants


def _is_zero(a) -> bool:
    return not any(a)


def gapped_spectral_invariant(G: GappedModule, a: Sequence[int], check_generalized: bool = True):
    """``-min`` over normalized restrictions of the restricted spectral invariant.

    ``a == 0`` gives ``+inf``.  Raises NotWitnessed when a is never in the
    image inside the window.  With ``check_generalized`` the value is also
    recomputed over every reindexed restriction, labelled by ``i*step`` and
    corrected by the offset, and the two must agree.
    """
    if not G.has_colimit:
        raise ValidationError("module has no colimit slot")
    if len(a) != G.colimit_dim:
        raise ValidationError(f"class has length {len(a)}, colimit has dimension {G.colimit_dim}")
    a = tuple(x % G.p for x in a)
    if _is_zero(a):
        return INF
    seqs = enumerate_restrictions(G, G.gap, normalized_only=True)
    if not seqs:
        raise ValidationError("no normalized restriction in window")
    values = [spectral_invariant_pm(restrict(G, s), a) for s in seqs]
    values = [v for v in values if v is not None]
    if not values:
        raise NotWitnessed("class is not witnessed in window")
    value = -min(values)
    if check_generalized:
        general = generalized_spectral_invariant(G, a)
        if general != value:  # pragma: no cover - would be a bug in restriction bookkeeping
            raise ArithmeticError(f"generalized form {general} != {value}")
    return value


def generalized_spectral_invariant(G: GappedModule, a: Sequence[int]):
    """Same quantity computed over all (not necessarily normalized) restrictions.

    Each restriction is relabelled by ``i*step`` (its own index grid), its
    spectral invariant taken there, and the offset added back.
    """
    best = None
    for seq in enumerate_restrictions(G, G.gap, normalized_only=False):
        M = shift_module(restrict(G, seq), seq.offset)
        v = spectral_invariant_pm(M, a)
        if v is None:
            continue
        v = v + seq.offset
        if best is None or v < best:
            best = v
    if best is None:
        raise NotWitnessed("class is not witnessed in window")
    return -best


def first_appearance(G: GappedModule, a: Sequence[int]):
    """Smallest sample point whose colimit image contains a (None if none)."""
    for t in G.indices:
        if membership(a, G.colimit_map(t)) is not None:
            return t
    return None


# ---------------------------------------------------------------------------
# interleavings


@dataclass(frozen=True)
class InterleavingCertificate:
    """``phi[k]: V(a)_i -> W(a)_{i+1}`` and ``psi[k]: W(a)_i -> V(a)_{i+1}`` for
    ``i = i_min + k``.  For ``delta == 0`` both families are maps ``V(a)_i -> W(a)_i``."""

    restriction: RestrictionSequence
    phi: tuple
    psi: tuple


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    family: Optional[str] = None
    index: Optional[int] = None
    message: str = ""

    def __bool__(self):
        return self.ok


def verify_interleaving_certificate(G: GappedModule, H: GappedModule, delta,
                                    cert: InterleavingCertificate) -> CertificateCheck:
    """Check both commuting-triangle families along the certificate's window."""
    seq = cert.restriction
    if delta == 0:
        if G != H:
            return CertificateCheck(False, message="delta = 0 requires identical modules")
    elif delta < max(G.gap, H.gap):
        return CertificateCheck(False, message="delta below the larger gap")
    elif seq.step != delta:
        return CertificateCheck(False, message="restriction step differs from delta")
    pts = seq.points()
    for t in pts:
        if t not in G.indices or t not in H.indices:
            return CertificateCheck(False, message=f"{format_scalar(t)} not in both index sets")

    def dV(t):
        return G.dim(t)

    def dW(t):
        return H.dim(t)

    if delta == 0:
        if len(cert.phi) != len(pts) or len(cert.psi) != len(pts):
            raise ValidationError("certificate needs one map per window point")
        for k, t in enumerate(pts):
            i = seq.i_min + k
            if cert.phi[k].shape != (dW(t), dV(t)) or cert.psi[k].shape != (dV(t), dW(t)):
                raise ValidationError(f"certificate shape mismatch at index {i}")
            if compose(cert.psi[k], cert.phi[k]) != Matrix.identity(dV(t), G.p):
                return CertificateCheck(False, "phi", i, "psi o phi != identity")
            if compose(cert.phi[k], cert.psi[k]) != Matrix.identity(dW(t), H.p):
                return CertificateCheck(False, "psi", i, "phi o psi != identity")
        return CertificateCheck(True)

    m = len(pts) - 1
    if len(cert.phi) != m or len(cert.psi) != m:
        raise ValidationError(f"certificate needs {m} maps per family")
    for k in range(m):
        i = seq.i_min + k
        s, t = pts[k], pts[k + 1]
        if cert.phi[k].shape != (dW(t), dV(s)) or cert.psi[k].shape != (dV(t), dW(s)):
            raise ValidationError(f"certificate shape mismatch at index {i}")
    for k in range(m - 1):
        i = seq.i_min + k
        if compose(cert.psi[k + 1], cert.phi[k]) != G.map(pts[k], pts[k + 2]):
            return CertificateCheck(False, "phi", i, "psi[i+1] o phi[i] != iota^V_{i,i+2}")
        if compose(cert.phi[k + 1], cert.psi[k]) != H.map(pts[k], pts[k + 2]):
            return CertificateCheck(False, "psi", i, "phi[i+1] o psi[i] != iota^W_{i,i+2}")
    return CertificateCheck(True)


def identity_certificate(G: GappedModule, seq: RestrictionSequence) -> InterleavingCertificate:
    """The 0-interleaving of G with itself."""
    ids = tuple(Matrix.identity(G.dim(t), G.p) for t in seq.points())
    return InterleavingCertificate(seq, ids, ids)


def _chain_as_gapped(G: GappedModule, seq: RestrictionSequence, lo: int, hi: int) -> GappedModule:
    """The restriction along seq over ``[lo, hi]``, relabelled ``l -> l*step`` as a step-gapped module."""
    labels = tuple(seq.step * l for l in range(lo, hi + 1))
    pts = [seq.point(l) for l in range(lo, hi + 1)]
    dims = tuple(G.dim(t) for t in pts)
    maps = {}
    for x in range(len(pts)):
        for y in range(x + 1, len(pts)):
            maps[(labels[x], labels[y])] = G.map(pts[x], pts[y])
    cm = tuple(G.colimit_map(t) for t in pts) if G.has_colimit else None
    return GappedModule(seq.step, labels, dims, maps, G.colimit_dim, cm, G.p)


def structure_certificates(G: GappedModule, seq_a: RestrictionSequence,
                           seq_b: RestrictionSequence) -> tuple:
    """Structure-map 2*step interleaving between two restrictions of one module.

    Both restrictions are relabelled onto the common grid ``l*step`` and the
    certificates use ``phi = iota_{a(l), b(l+2)}`` and ``psi = iota_{b(l), a(l+2)}``,
    one certificate per normalized 2*step restriction of that grid.
    Returns ``(Va, Vb, delta, certs)``.
    """
    if seq_a.step != seq_b.step:
        raise GapError("restrictions have different steps")
    lam = seq_a.step
    lo = max(seq_a.i_min, seq_b.i_min)
    hi = min(seq_a.i_max, seq_b.i_max)
    Va = _chain_as_gapped(G, seq_a, lo, hi)
    Vb = _chain_as_gapped(G, seq_b, lo, hi)
    delta = 2 * lam
    certs = []
    for r in enumerate_restrictions(Va, delta, normalized_only=True):
        ls = [floor_div(x, lam) for x in r.points()]
        phi = tuple(G.map(seq_a.point(l), seq_b.point(l + 2)) for l in ls[:-1])
        psi = tuple(G.map(seq_b.point(l), seq_a.point(l + 2)) for l in ls[:-1])
        certs.append(InterleavingCertificate(r, phi, psi))
    return Va, Vb, delta, certs


def translation_certificate(G: GappedModule, u, delta=None) -> tuple:
    """``H = translate(G, u)`` with structure-map certificates at ``delta = |u| + gap``.

    ``phi_i = iota^G_{a(i), a(i)+delta-u}`` and ``psi_i = iota^G_{a(i)-u, a(i)+delta}``;
    windows are trimmed to where every point involved is sampled.
    Returns ``(H, delta, certs)``.
    """
    H = translate(G, u)
    if delta is None:
        delta = abs(u) + G.gap
    if delta - u < G.gap or delta + u < G.gap:
        raise GapError("delta too small for this translation")
    present = set(G.indices)
    common = [t for t in G.indices if t in set(H.indices)]

    def good(t):
        return t + delta - u in present and t - u in present and t + delta in present

    certs = []
    for run in _progressions(common, delta):
        # blocks where every point but the last carries a phi and a psi
        blocks, cur = [], []
        for t in run:
            cur.append(t)
            if not good(t):
                blocks.append(cur)
                cur = []
        blocks.append(cur)
        for block in blocks:
            if len(block) < 2:
                continue
            k = floor_div(block[0], delta)
            seq = RestrictionSequence(block[0] - delta * k, delta, k, k + len(block) - 1)
            phi = tuple(G.map(t, t + delta - u) for t in block[:-1])
            psi = tuple(G.map(t - u, t + delta) for t in block[:-1])
            certs.append(InterleavingCertificate(seq, phi, psi))
    return H, delta, certs


def direct_sum(G: GappedModule, N: GappedModule) -> GappedModule:
    """``G + N`` on a shared index set; N must have a zero colimit, so the colimit is G's."""
    if G.indices != N.indices or G.gap != N.gap:
        raise ValidationError("direct sum needs equal index sets and gaps")
    if N.colimit_dim:
        raise ValidationError("padding summand must have a zero colimit")
    maps = {k: block_diag(G.maps[k], N.maps[k]) for k in G.maps}
    cm = None
    if G.has_colimit:
        cm = tuple(hstack([P, Matrix.zero(G.colimit_dim, d, G.p)], G.colimit_dim, G.p)
                   for P, d in zip(G.colimit_maps, N.dims))
    return GappedModule(G.gap, G.indices, tuple(a + b for a, b in zip(G.dims, N.dims)), maps,
                        G.colimit_dim, cm, G.p)


def ephemeral_module(G: GappedModule, dims: Sequence[int]) -> GappedModule:
    """Same index set as G; every non-identity map is zero and the colimit is 0."""
    maps = {(s, t): Matrix.zero(dims[G.position(t)], dims[G.position(s)], G.p) for (s, t) in G.maps}
    cm = tuple(Matrix.zero(0, d, G.p) for d in dims) if G.has_colimit else None
    return GappedModule(G.gap, G.indices, tuple(dims), maps, 0 if G.has_colimit else None, cm, G.p)


def padding_certificate(G: GappedModule, dims: Sequence[int], u, delta) -> tuple:
    """``H = translate(G + N, u)`` for an ephemeral N, with explicit certificates.

    ``phi_i = [iota^G; 0]`` and ``psi_i = [iota^G, 0]`` along the same windows
    as :func:`translation_certificate`.  Returns ``(H, certs)``.
    """
    N = ephemeral_module(G, dims)
    S = direct_sum(G, N)
    H0, _, base = translation_certificate(G, u, delta)
    H = translate(S, u)
    certs = []
    for cert in base:
        phi, psi = [], []
        for k, t in enumerate(cert.restriction.points()[:-1]):
            z_rows = Matrix.zero(N.dim(t + delta - u), G.dim(t), G.p)
            phi.append(Matrix.from_rows(cert.phi[k].to_rows() + z_rows.to_rows(), G.p, cols=G.dim(t)))
            A = cert.psi[k]
            Z = Matrix.zero(A.rows, N.dim(t - u), G.p)
            psi.append(hstack([A, Z], A.rows, G.p))
        certs.append(InterleavingCertificate(cert.restriction, tuple(phi), tuple(psi)))
    return H, certs


@dataclass
class StabilityReport:
    gap: object
    pairs: list = field(default_factory=list)  # (seq_a, seq_b, distance, long_bar_shift)
    ok: bool = True
    messages: list = field(default_factory=list)

    def lines(self) -> list:
        out = []
        for a, b, d, shift in self.pairs:
            out.append(f"offsets {format_scalar(a.offset)} / {format_scalar(b.offset)}: "
                       f"d_inter={format_scalar(d)} long-bar shift={format_scalar(shift)} "
                       f"bound={format_scalar(2 * self.gap)}")
        return out + self.messages


def _long_bar_shift(B1: Barcode, B2: Barcode):
    """Best max-shift matching of infinite-bar births (sorted order is optimal on a line)."""
    x = sorted(b.birth for b in B1.infinite_bars())
    y = sorted(b.birth for b in B2.infinite_bars())
    if len(x) != len(y):
        return INF
    return max((abs(u - v) for u, v in zip(x, y)), default=Fraction(0))


def restriction_stability_report(G: GappedModule) -> StabilityReport:
    """Compare every pair of normalized lam-restrictions: interleaving distance and
    infinite-bar matching must both stay within 2*lam."""
    seqs = enumerate_restrictions(G, G.gap, normalized_only=True)
    report = StabilityReport(G.gap)
    if len(seqs) < 2:
        report.messages.append("fewer than two normalized restrictions: vacuous")
        return report
    mods = [restrict(G, s) for s in seqs]
    codes = [barcode(M) for M in mods]
    bound = 2 * G.gap
    for i in range(len(seqs)):
        for j in range(i + 1, len(seqs)):
            d = interleaving_distance(mods[i], mods[j])
            shift = _long_bar_shift(codes[i], codes[j])
            report.pairs.append((seqs[i], seqs[j], d, shift))
            if d > bound:
                report.ok = False
                report.messages.append(f"pair {i},{j}: distance {format_scalar(d)} exceeds 2*gap")
            if shift > bound:
                report.ok = False
                report.messages.append(f"pair {i},{j}: infinite bars do not match within 2*gap")
    return report


# ---------------------------------------------------------------------------
# duality


def _images_below(G: GappedModule, t) -> Matrix:
    """Columns spanning the sum of colimit images of all samples strictly below t."""
    blocks = [G.colimit_map(s) for s in G.indices if s < t]
    return hstack(blocks, G.colimit_dim, G.p) if blocks else Matrix.zero(G.colimit_dim, 0, G.p)


def _reachable_split(G: GappedModule) -> tuple:
    """``(N, C)``: functionals vanishing on every image, and a fixed complement."""
    every = hstack([G.colimit_map(t) for t in G.indices], G.colimit_dim, G.p)
    N = annihilator(every)
    return N, complement_basis(N)


def gapped_dual(G: GappedModule) -> GappedModule:
    """Dual over negated indices with the order reversed.

    ``V_t`` splits into the part dying before the colimit, which is transposed,
    and a colimit-facing part replaced by the annihilator of every image from
    samples below t, taken inside a complement of the functionals that vanish
    on all images.  The dual's colimit is ``V_inf^*`` and the annihilators
    map into it by inclusion.
    """
    validate_gapped(G)
    p = G.p
    new_indices = tuple(-t for t in reversed(G.indices))
    if not G.has_colimit:
        maps = {(-t, -s): A.transpose() for (s, t), A in G.maps.items() if s != t}
        return GappedModule(G.gap, new_indices, tuple(reversed(G.dims)), maps, None, None, p)
    c = G.colimit_dim
    K = {t: kernel_basis(G.colimit_map(t)) for t in G.indices}
    N, C = _reachable_split(G)
    ann = {t: restricted_annihilator(_images_below(G, t), N, C) for t in G.indices}
    dims = tuple(K[t].cols + ann[t].cols for t in reversed(G.indices))
    maps = {}
    for s, t in G.pairs():
        C = solve_columns(K[t], compose(G.maps[(s, t)], K[s]))
        inc = solve_columns(ann[s], ann[t])
        maps[(-t, -s)] = block_diag(C.transpose(), inc)
    cmaps = tuple(block_diag(Matrix.zero(0, K[t].cols, p), ann[t]) for t in reversed(G.indices))
    return GappedModule(G.gap, new_indices, dims, maps, c, cmaps, p)


def dual_pairing(G: GappedModule, a: Sequence[int]) -> tuple:
    """A functional ``a*`` on ``V_inf`` with ``a*(a) = 1`` that vanishes on every
    image from samples below the first appearance of a.

    Raises ValueError when no such functional exists, i.e. when a already lies
    in the sum of those earlier images.
    """
    a = tuple(x % G.p for x in a)
    t0 = first_appearance(G, a)
    if t0 is None:
        raise NotWitnessed("class is not witnessed in window")
    Nr, C = _reachable_split(G)
    N = restricted_annihilator(_images_below(G, t0), Nr, C)
    values = [sum(x * y for x, y in zip(col, a)) % G.p for col in N.columns()]
    k = next((i for i, v in enumerate(values) if v), None)
    if k is None:
        raise ValueError("no dual pairing: class lies in the span of earlier images")
    inv = pow(values[k], -1, G.p)
    return tuple((x * inv) % G.p for x in N.column(k))


# ---------------------------------------------------------------------------
# stability of the spectral invariant


@dataclass
class BoundReport:
    delta: object
    c_first: object
    c_second: object
    holds: bool

    @property
    def difference(self):
        return abs(self.c_first - self.c_second)


def stability_bound_check(G: GappedModule, H: GappedModule, delta,
                          cert: InterleavingCertificate, a: Sequence[int],
                          b: Optional[Sequence[int]] = None) -> BoundReport:
    """``|c(a, G) - c(b, H)| <= delta`` for a verified delta-interleaving certificate.

    ``b`` is a's image under the supplied identification of colimits (a itself
    by default).  Refuses to assert anything for an invalid certificate.
    """
    check = verify_interleaving_certificate(G, H, delta, cert)
    if not check:
        raise ValueError(f"invalid certificate: {check.message} at {check.family}[{check.index}]")
    b = a if b is None else b
    c1 = gapped_spectral_invariant(G, a)
    c2 = gapped_spectral_invariant(H, b)
    if c1 == c2:
        return BoundReport(delta, c1, c2, True)
    return BoundReport(delta, c1, c2, abs(c1 - c2) <= delta)
