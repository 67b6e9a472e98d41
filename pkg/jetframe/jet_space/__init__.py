from .flat import FlatFrame, flat_frame
from .groupoid import GroupoidSpace
from .multiindex import MultiIndex
from .prolong import ProlongedAction, prolong, prolong_numeric, series_oracle
from .space import JetSpace, jet_dim, total_derivative, total_derivative_multi
from .transformation import PointTransformation

__all__ = [
    "FlatFrame",
    "GroupoidSpace",
    "JetSpace",
    "MultiIndex",
    "PointTransformation",
    "ProlongedAction",
    "flat_frame",
    "jet_dim",
    "prolong",
    "prolong_numeric",
    "series_oracle",
    "total_derivative",
    "total_derivative_multi",
]
