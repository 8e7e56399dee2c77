"""Document envelope and canonical JSON (de)serialization.

Rationals travel as strings ``"p/q"``, symbolic slopes as
``{"two_pi": "q", "const": "r"}`` and matrices as row lists.  Column counts
are implied by the dims, so zero-row matrices need no extra encoding.
Canonical output (sorted keys, two-space indent, trailing newline) makes
``dump(load(x)) == x`` for canonical x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .gapped import GappedModule, InterleavingCertificate, RestrictionSequence, validate_gapped
from .linalg_ff import Matrix, check_modulus
from .persistence import Bar, Barcode, PersistenceModule, validate
from .scalars import ScalarParseError, scalar_from_json, scalar_to_json

SCHEMA_VERSION = "gapped/1"
KINDS = ("persistence_module", "gapped_module", "barcode", "certificate", "cosphere_request")


class DocumentError(ValueError):
    """Malformed input: bad JSON, unknown kind, missing field, bad scalar."""


@dataclass(frozen=True)
class DocumentEnvelope:
    kind: str
    payload: Any
    schema_version: str = SCHEMA_VERSION


@dataclass(frozen=True)
class CosphereRequest:
    n: int
    m_max: int
    degree: int


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"missing field {key!r} in {where}")
    return obj[key]


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{what} must be an integer, got {x!r}")
    return x


def _matrix(rows, nrows: int, ncols: int, p: int, what: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != nrows:
        raise DocumentError(f"{what}: expected {nrows} rows")
    for r in rows:
        if not isinstance(r, list) or len(r) != ncols:
            raise DocumentError(f"{what}: expected rows of length {ncols}")
        for e in r:
            _int(e, f"{what} entry")
    return Matrix.from_rows(rows, p, cols=ncols)


def _rows(A: Matrix) -> list:
    return A.to_rows()


def _scalars(xs) -> list:
    if not isinstance(xs, list):
        raise DocumentError("indices must be a list")
    return [scalar_from_json(x) for x in xs]


# ---------------------------------------------------------------------------
# payload codecs


def persistence_to_payload(M: PersistenceModule) -> dict:
    return {
        "p": M.p,
        "indices": [scalar_to_json(t) for t in M.indices],
        "dims": list(M.dims),
        "steps": [_rows(S) for S in M.steps],
        "colimit": None if not M.has_colimit else {"dim": M.colimit_dim, "map": _rows(M.colimit_map)},
    }


def persistence_from_payload(d: dict) -> PersistenceModule:
    p = check_modulus(_int(d.get("p", 2), "p"))
    idx = _scalars(_field(d, "indices", "persistence_module"))
    dims = [_int(x, "dim") for x in _field(d, "dims", "persistence_module")]
    if len(dims) != len(idx):
        raise DocumentError("dims and indices differ in length")
    steps_raw = _field(d, "steps", "persistence_module")
    if len(steps_raw) != max(len(idx) - 1, 0):
        raise DocumentError(f"expected {max(len(idx) - 1, 0)} steps")
    steps = [_matrix(s, dims[i + 1], dims[i], p, f"step {i}") for i, s in enumerate(steps_raw)]
    col = d.get("colimit")
    cdim = cmap = None
    if col is not None:
        cdim = _int(_field(col, "dim", "colimit"), "colimit dim")
        cmap = _matrix(_field(col, "map", "colimit"), cdim, dims[-1] if dims else 0, p, "colimit map")
    M = PersistenceModule(tuple(idx), tuple(dims), tuple(steps), cdim, cmap, p)
    validate(M)
    return M


def gapped_to_payload(G: GappedModule) -> dict:
    maps = [{"from": scalar_to_json(s), "to": scalar_to_json(t), "matrix": _rows(A)}
            for (s, t), A in sorted(G.maps.items(), key=lambda kv: kv[0])]
    return {
        "p": G.p,
        "gap": scalar_to_json(G.gap),
        "indices": [scalar_to_json(t) for t in G.indices],
        "dims": list(G.dims),
        "maps": maps,
        "colimit": None if not G.has_colimit else {
            "dim": G.colimit_dim, "maps": [_rows(P) for P in G.colimit_maps]},
    }


def gapped_from_payload(d: dict) -> GappedModule:
    p = check_modulus(_int(d.get("p", 2), "p"))
    gap = scalar_from_json(_field(d, "gap", "gapped_module"))
    idx = _scalars(_field(d, "indices", "gapped_module"))
    dims = [_int(x, "dim") for x in _field(d, "dims", "gapped_module")]
    if len(dims) != len(idx):
        raise DocumentError("dims and indices differ in length")
    dim_of = dict(zip(idx, dims))
    maps = {}
    for k, entry in enumerate(_field(d, "maps", "gapped_module")):
        s = scalar_from_json(_field(entry, "from", f"map {k}"))
        t = scalar_from_json(_field(entry, "to", f"map {k}"))
        if s not in dim_of or t not in dim_of:
            raise DocumentError(f"map {k} refers to an index outside the sample")
        maps[(s, t)] = _matrix(_field(entry, "matrix", f"map {k}"), dim_of[t], dim_of[s], p, f"map {k}")
    col = d.get("colimit")
    cdim = cmaps = None
    if col is not None:
        cdim = _int(_field(col, "dim", "colimit"), "colimit dim")
        raw = _field(col, "maps", "colimit")
        if len(raw) != len(idx):
            raise DocumentError("need one colimit map per index")
        cmaps = tuple(_matrix(r, cdim, dims[i], p, f"colimit map {i}") for i, r in enumerate(raw))
    G = GappedModule(gap, tuple(idx), tuple(dims), maps, cdim, cmaps, p)
    validate_gapped(G)
    return G


def barcode_to_payload(B: Barcode) -> dict:
    return {"bars": [{"birth": scalar_to_json(b.birth), "death": scalar_to_json(b.death), "mult": m}
                     for b, m in B.bars]}


def barcode_from_payload(d: dict) -> Barcode:
    bars = []
    for k, e in enumerate(_field(d, "bars", "barcode")):
        birth = scalar_from_json(_field(e, "birth", f"bar {k}"))
        death = scalar_from_json(_field(e, "death", f"bar {k}"))
        mult = _int(e.get("mult", 1), "mult")
        try:
            bars.append((Bar(birth, death), mult))
        except ValueError as exc:
            raise DocumentError(f"bar {k}: {exc}") from None
    return Barcode(tuple(bars))


def certificate_to_payload(cert: InterleavingCertificate, delta) -> dict:
    r = cert.restriction
    return {
        "delta": scalar_to_json(delta),
        "restriction": {"offset": scalar_to_json(r.offset), "step": scalar_to_json(r.step),
                        "i_min": r.i_min, "i_max": r.i_max},
        "phi": [_rows(A) for A in cert.phi],
        "psi": [_rows(A) for A in cert.psi],
    }


def certificate_from_payload(d: dict, p: int = 2) -> tuple:
    """Returns ``(certificate, delta)``; matrix shapes are checked by the verifier."""
    delta = scalar_from_json(_field(d, "delta", "certificate"))
    r = _field(d, "restriction", "certificate")
    seq = RestrictionSequence(scalar_from_json(_field(r, "offset", "restriction")),
                              scalar_from_json(_field(r, "step", "restriction")),
                              _int(_field(r, "i_min", "restriction"), "i_min"),
                              _int(_field(r, "i_max", "restriction"), "i_max"))

    def mats(key):
        out = []
        for k, rows in enumerate(_field(d, key, "certificate")):
            if not isinstance(rows, list):
                raise DocumentError(f"{key}[{k}] must be a list of rows")
            ncols = len(rows[0]) if rows else 0
            out.append(_matrix(rows, len(rows), ncols, p, f"{key}[{k}]"))
        return tuple(out)

    return InterleavingCertificate(seq, mats("phi"), mats("psi")), delta


# ---------------------------------------------------------------------------
# envelope


def to_envelope(obj, **extra) -> dict:
    if isinstance(obj, PersistenceModule):
        kind, payload = "persistence_module", persistence_to_payload(obj)
    elif isinstance(obj, GappedModule):
        kind, payload = "gapped_module", gapped_to_payload(obj)
    elif isinstance(obj, Barcode):
        kind, payload = "barcode", barcode_to_payload(obj)
    elif isinstance(obj, InterleavingCertificate):
        kind, payload = "certificate", certificate_to_payload(obj, extra["delta"])
    elif isinstance(obj, CosphereRequest):
        kind, payload = "cosphere_request", {"n": obj.n, "m_max": obj.m_max, "degree": obj.degree}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "payload": payload}


def dumps(obj, **extra) -> str:
    doc = obj if isinstance(obj, dict) else to_envelope(obj, **extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_document(text: str) -> DocumentEnvelope:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"schema version mismatch: file has {version!r}, expected {SCHEMA_VERSION!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}")
    payload = _field(doc, "payload", "document")
    try:
        if kind == "persistence_module":
            obj = persistence_from_payload(payload)
        elif kind == "gapped_module":
            obj = gapped_from_payload(payload)
        elif kind == "barcode":
            obj = barcode_from_payload(payload)
        elif kind == "certificate":
            obj = certificate_from_payload(payload, _int(payload.get("p", 2), "p"))
        else:
            obj = CosphereRequest(_int(_field(payload, "n", "cosphere_request"), "n"),
                                  _int(_field(payload, "m_max", "cosphere_request"), "m_max"),
                                  _int(_field(payload, "degree", "cosphere_request"), "degree"))
    except ScalarParseError as exc:
        raise DocumentError(str(exc)) from None
    except (TypeError, AttributeError) as exc:
        raise DocumentError(f"malformed {kind} payload: {exc}") from None
    return DocumentEnvelope(kind, obj, version)


def load_document(path) -> DocumentEnvelope:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def save_document(path, obj, **extra) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, **extra))


def fit_certificate(cert: InterleavingCertificate, G: GappedModule, H: GappedModule,
                    delta) -> InterleavingCertificate:
    """Restore column counts of zero-row matrices, which row lists cannot carry."""
    pts = cert.restriction.points()

    def fix(A: Matrix, cols: int) -> Matrix:
        return Matrix.zero(0, cols, A.p) if A.rows == 0 else A

    # phi_k and psi_k leave the k-th window point in both the delta = 0 and delta > 0 layouts
    phi = tuple(fix(A, G.dim(t)) for A, t in zip(cert.phi, pts))
    psi = tuple(fix(A, H.dim(t)) for A, t in zip(cert.psi, pts))
    return InterleavingCertificate(cert.restriction, phi, psi)
