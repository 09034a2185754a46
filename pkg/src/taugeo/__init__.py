"""taugeo: exact twisted differential geometry.

Twisted derivations X(fg) = sigma(f) X(g) + X(f) tau(g) over presented
algebras with confluent normal-form rewriting, modules carrying twisted
structure maps, hermitian forms, connections with curvature and torsion,
and Levi-Civita constructions -- verified exactly over Q, Q(i) and
Q(i)(s) with q = s^2 (plus a toleranced complex-float mode), on three
concrete geometries: the Jackson q-plane, the quantum 3-sphere and
matrix algebras.
"""

from .scalars import (
    QQ, QQI, QS, ComplexFloat, FloatField, GaussianRational, PoleError,
    Rational, RationalFunctionQ, ScalarError, ScalarMismatchError,
    evaluate_at, evaluate_at_q, parse_scalar, q_integer, render_scalar,
)
from .algebra import (
    AlgebraElement, AlgebraEndomorphism, AlgebraHomomorphism,
    AlgebraPresentation, ConfluenceError, IllDefinedMapError,
    SigmaTauAlgebra, SigmaTauDerivation, derivation_extend,
    inner_st_derivation, leibniz_check, st_morphism_check,
    st_star_structure_check, star_of_map,
)
from .smodules import (
    HermitianForm, ImageModule, ModuleElement, ModuleMap, SigmaModule,
    form_sigma_inverse, free_sigma_module, hermitian_axiom_check,
    hermitian_eval, image_sigma_module, invariance_check, module_law_check,
    projective_commutation_check,
)
from .connections import (
    Connection, GammaConnection, LieStructure, MapConnection, bracket_apply,
    connection_from_gamma, connection_leibniz_check, curvature,
    levi_civita_check, lie_structure_check, metric_compat_check,
    metric_connection_free, orthogonal_projection_metric,
    pushforward_connection, star_connection_check, torsion,
    torsion_free_check, torsion_free_construct,
)
from .matrices import Matrix, MatrixAlgebra, Vector, build_matrix_algebra
from .matgeo import (
    MatrixGeometry, curvature_closed_form, doubled_star_algebra,
    matrix_levi_civita, projective_connection, regularity_check,
    torsion_free_gamma_choice, unique_regular_connection,
)
from .presets import build_qplane, build_shift_line
from .sphere import (
    XActionTable, build_sphere, differential_d, k_hat, solve_x_table,
    sphere_presentation, validate_x_table,
)
from .reports import CheckRecord, Report

__version__ = "0.1.0"
