"""Semidualizing modules over finite-dimensional local algebras over F_p."""
from importlib.metadata import PackageNotFoundError, version

from .algebra import (
    AlgebraError,
    AlgebraPresentation,
    LocalAlgebra,
    RingFileError,
    build_algebra,
    load_ring,
    regular_module,
    ring_from_text,
    socle,
    tensor_algebras,
)
from .exactla import PrimeField
from .formats import load_module, module_from_text
from .lattice import (
    ChainSpec,
    DaggerWord,
    SubsetClass,
    build_lattice,
    cross_validate,
    hom_class,
    normalize_dagger,
    reflexive_leq,
    symbolic_base_change,
    tensor_class,
    verify_doubling,
)
from .modcat import (
    FreeResolution,
    ModuleMap,
    RModule,
    ext_dim,
    ext_module,
    hom_module,
    is_isomorphic,
    matlis_dual,
    minimal_free_resolution,
    residue_field,
    tensor_module,
    tor_dim,
    tor_module,
)
from .semidualizing import (
    BassSeries,
    SdCertificate,
    SdClassRecord,
    auslander_class_member,
    base_change,
    bass_class_member,
    bass_series,
    certify_semidualizing,
    dagger,
    enumerate_semidualizing,
    hom_bass_series,
    is_dualizing,
    is_gorenstein_hom,
    is_reflexive,
    omega,
    order_leq,
)

try:
    __version__ = version("semidual")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "AlgebraPresentation",
    "BassSeries",
    "ChainSpec",
    "DaggerWord",
    "FreeResolution",
    "LocalAlgebra",
    "ModuleMap",
    "PrimeField",
    "RModule",
    "RingFileError",
    "SdCertificate",
    "SdClassRecord",
    "SubsetClass",
    "auslander_class_member",
    "base_change",
    "bass_class_member",
    "bass_series",
    "build_algebra",
    "build_lattice",
    "certify_semidualizing",
    "cross_validate",
    "dagger",
    "enumerate_semidualizing",
    "ext_dim",
    "ext_module",
    "hom_bass_series",
    "hom_class",
    "hom_module",
    "is_dualizing",
    "is_gorenstein_hom",
    "is_isomorphic",
    "is_reflexive",
    "load_module",
    "load_ring",
    "matlis_dual",
    "minimal_free_resolution",
    "module_from_text",
    "normalize_dagger",
    "omega",
    "order_leq",
    "reflexive_leq",
    "regular_module",
    "residue_field",
    "ring_from_text",
    "socle",
    "symbolic_base_change",
    "tensor_algebras",
    "tensor_class",
    "tensor_module",
    "tor_dim",
    "tor_module",
    "verify_doubling",
    "__version__",
]
