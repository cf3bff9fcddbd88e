"""Reciprocal transformations of relativistic gasdynamics and their Lie-group
structure: closed-form maps, generators and parameter flows, invariants, and
field-level verification through manufactured solutions and conservation-law
residuals."""

from .core import (Covector1D, Derived1D, Derived2D, FrameMap2D, GasState1D,
                   GasState2D, ModelConstants, ValidationReport, Violation,
                   derived_1d, derived_2d, state_from_dict, state_from_json,
                   state_to_dict, state_to_json, validate_state)
from .errors import (DegenerateJacobian, DomainError, InsufficientResolutions,
                     NegativeRadicand, NonClosedForm, NonMonotoneCoordinates,
                     OrbitLeftDomain, RelgasError, SingularDenominator,
                     SuperluminalState, ToleranceNotMet, UnphysicalManufacture,
                     ZeroA1, ZeroEpsilon)
from .fields import (ConvergenceReport, FieldGrid1D, FieldGrid2D,
                     ManufactureSpec1D, ManufactureSpec2D, Profile,
                     ResidualReport, convergence_study, load_grid,
                     manufacture_aligned_2d, manufacture_steady_1d,
                     reciprocal_coordinates_1d, reciprocal_coordinates_2d,
                     residual_1d, residual_2d, rotate_aligned_quarter_turn,
                     save_grid, transform_field_1d, transform_field_2d,
                     validate_grid)
from .lie import (ExtendedState1D, ExtendedState2D, FlowResult, FlowSettings,
                  Invariants1D, Invariants2D, LimitScanReport, Tangent1D,
                  Tangent2D, check_annihilation, flow_1d, flow_2d,
                  generator_1d, generator_2d, invariants_1d, invariants_2d,
                  limit_scan_c)
from .reciprocal1d import (ReciprocalParams, params_from_epsilon,
                           transform_form_1param, transform_form_4param,
                           transform_state_1param, transform_state_4param)
from .reciprocal2d import (Delta2D, JacobianReport, delta_4param_2d,
                           jacobian_condition_2d, transform_frame_1param_2d,
                           transform_frame_4param_2d, transform_state_1param_2d,
                           transform_state_4param_2d)

__version__ = "0.1.0"
