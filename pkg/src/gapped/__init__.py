"""Gapped persistence modules, barcodes, spectral invariants and a symbolic
contact Floer model."""

from __future__ import annotations

from .contact_model import (
    SHModelClass,
    build_cosphere_model,
    contact_spectral_invariant,
    sh_product,
    spectral_axiom_report,
)
from .gapped import (
    GappedModule,
    InterleavingCertificate,
    NotWitnessed,
    RestrictionSequence,
    comparable,
    enumerate_restrictions,
    gapped_dual,
    gapped_spectral_invariant,
    restrict,
    translate,
    validate_gapped,
    verify_interleaving_certificate,
)
from .linalg_ff import FieldElement, Matrix, compose, membership, rank
from .matching import bottleneck_distance
from .persistence import Bar, Barcode, PersistenceModule, barcode, validate
from .scalars import SymbolicSlope

__version__ = "0.1.0"
