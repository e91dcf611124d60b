"""Exact lattice, fan and series computations for type IV arrangement complements."""
from .errors import LatticeError
from .lattice import (
    DiscriminantGroup,
    IntLattice,
    LatticeMap,
    Signature,
    determinant,
    direct_sum,
    discriminant_group,
    inner,
    k3_lattice,
    make_standard,
    orthogonal_complement,
    rescale,
    saturate,
    signature,
)

__version__ = "0.1.0"
