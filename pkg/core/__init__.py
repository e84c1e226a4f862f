"""Public core APIs for the CLI and external integrations."""

from core.app_config import AppConfig
from core.dynamics import (
    HamiltonianSpec,
    RiccatiChart,
    Trajectory,
    consistency_check,
    project_to_chart,
    riccati_evolve,
    schrodinger_evolve,
)
from core.gns import GnsResult, gns_construct
from core.numkernel import DimensionError, HermiticityError
from core.pullback import (
    CoefficientMatrix,
    CriterionNotApplicable,
    LieAlgebraRep,
    SeparabilityReport,
    devicente_check,
    local_product_rep,
    max_entanglement_pure,
    mixed_tensor,
    pure_pullback,
    separability_pure,
    su_basis,
)
from core.state_files import StateFileError, load_state_file
from core.states import BipartiteDims, DensityState, PureState, StateValidationError

__all__ = [
    "AppConfig",
    "BipartiteDims",
    "CoefficientMatrix",
    "CriterionNotApplicable",
    "DensityState",
    "DimensionError",
    "GnsResult",
    "HamiltonianSpec",
    "HermiticityError",
    "LieAlgebraRep",
    "PureState",
    "RiccatiChart",
    "SeparabilityReport",
    "StateFileError",
    "StateValidationError",
    "Trajectory",
    "consistency_check",
    "devicente_check",
    "gns_construct",
    "load_state_file",
    "local_product_rep",
    "max_entanglement_pure",
    "mixed_tensor",
    "project_to_chart",
    "pure_pullback",
    "riccati_evolve",
    "schrodinger_evolve",
    "separability_pure",
    "su_basis",
]
