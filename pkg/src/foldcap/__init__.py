"""Folding maps on a geometric cross-cap: classification and numeric cross-checks."""

from .classify import Kind, SingularityLabel, StratificationReport, classify_fold, survey_sphere
from .crosscap import CrossCapParams, curvature_limit, parametrize
from .estimator import FoldingClassifier
from .folding import FoldPlane, fold_germ_jet, whitney_crosscap_test
from .geometry import Direction2, SeparatrixCoeff, ridge_directions, separatrix_lambdas, subparabolic_directions
from .jets import Jet2, Jet2Vec3

__all__ = [
    "CrossCapParams",
    "Direction2",
    "FoldPlane",
    "FoldingClassifier",
    "Jet2",
    "Jet2Vec3",
    "Kind",
    "SeparatrixCoeff",
    "SingularityLabel",
    "StratificationReport",
    "classify_fold",
    "curvature_limit",
    "fold_germ_jet",
    "parametrize",
    "ridge_directions",
    "separatrix_lambdas",
    "subparabolic_directions",
    "survey_sphere",
    "whitney_crosscap_test",
]
