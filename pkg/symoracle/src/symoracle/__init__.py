"""Exact symbolic verification of the reciprocal-transformation invariance
claims of relativistic gasdynamics, and high-precision golden fixture
generation for the relgas toolkit."""

from .emit import emit_fixtures, write_fixtures
from .identities import (IdentityReport, annihilation_reports,
                         derive_generators, verify_invariance_1d,
                         verify_invariance_2d)

__version__ = "0.1.0"
