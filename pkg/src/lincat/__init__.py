"""Exact computations in finite linear categories with differential forms.

The package builds finite-dimensional categories over the rationals,
extends them by graded form spaces (a universal construction, a trivial
one, or explicit tables), and computes with modules, connections,
curvature, trace classes, and character classes in the quotient complex
of diagonal forms modulo commutators.  All arithmetic is exact.
"""

from .category import (
    Category,
    Morphism,
    ObjectId,
    Violation,
    build_category,
    commutator_class,
    compose,
    validate_category,
)
from .chern import (
    CocycleCertificate,
    InvarianceCertificate,
    K0Entry,
    certify_cocycle,
    chern_class,
    chern_form,
    invariance_certificate,
    k0_character,
)
from .connection import (
    Connection,
    canonical_connection,
    compress,
    conjugate,
    direct_sum_connection,
    free_connection,
    tilde_curvature,
)
from .derham import (
    DeRhamComplex,
    DiagonalForm,
    TildeComplex,
    get_complex,
    tilde_commutator_ranks,
)
from .dg import (
    DGCategory,
    Form,
    FormMatrix,
    block_diag,
    render_form,
    trivial_dg,
    universal_dg,
    validate_dg,
)
from .errors import (
    CertificationError,
    CompositionError,
    DimensionError,
    IdempotentError,
    LincatError,
    ModuleError,
    TruncationError,
    WorkspaceError,
)
from .exact_linalg import MatrixQ, format_scalar, parse_scalar
from .module_algebra import (
    DirectSumData,
    EFixedComponent,
    LiteralTensor,
    ProjectiveModule,
    direct_sum,
    evaluation_pairing,
    hs_trace,
    rank_one,
)
from .workspace import (
    Workspace,
    fixture_names,
    load_fixture,
    load_workspace,
    parse_workspace,
    serialize_workspace,
    workspace_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "Category",
    "CocycleCertificate",
    "CompositionError",
    "CertificationError",
    "Connection",
    "DGCategory",
    "DeRhamComplex",
    "DiagonalForm",
    "DimensionError",
    "DirectSumData",
    "EFixedComponent",
    "Form",
    "FormMatrix",
    "IdempotentError",
    "InvarianceCertificate",
    "K0Entry",
    "LincatError",
    "LiteralTensor",
    "MatrixQ",
    "ModuleError",
    "Morphism",
    "ObjectId",
    "ProjectiveModule",
    "TildeComplex",
    "TruncationError",
    "Violation",
    "Workspace",
    "WorkspaceError",
    "block_diag",
    "build_category",
    "canonical_connection",
    "certify_cocycle",
    "chern_class",
    "chern_form",
    "commutator_class",
    "compose",
    "compress",
    "conjugate",
    "direct_sum",
    "direct_sum_connection",
    "evaluation_pairing",
    "fixture_names",
    "format_scalar",
    "free_connection",
    "get_complex",
    "hs_trace",
    "invariance_certificate",
    "k0_character",
    "load_fixture",
    "load_workspace",
    "parse_scalar",
    "parse_workspace",
    "rank_one",
    "render_form",
    "serialize_workspace",
    "tilde_commutator_ranks",
    "tilde_curvature",
    "trivial_dg",
    "universal_dg",
    "validate_category",
    "validate_dg",
    "workspace_from_dict",
]
