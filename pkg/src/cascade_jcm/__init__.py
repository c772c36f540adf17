"""Cascade three-level atom driven by classical and quantized fields."""

from .core import (
    AtomicLevel,
    DomainError,
    JcmParams,
    PopulationSeries,
    SemiclassicalParams,
    SpinOneOps,
    ThreeLevelAmplitudes,
    TimeGrid,
    bare_state,
    norm_squared,
    spin_one_ops,
)
from .fieldstats import CoherentField, RevivalReport, averaged_populations, poisson_weights, revival_report
from .jcm import (
    DressedSpectrum,
    EulerMatrix,
    JcmCase,
    ManifoldHamiltonian,
    dressed_spectrum,
    euler_matrix,
    evolve_closed_form,
    evolve_general,
    manifold_hamiltonian,
)
from .semiclassical import SemiclassicalCase, generalized_rabi, population_series, populations

__version__ = "0.1.0"
