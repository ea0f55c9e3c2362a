"""Application problems encoded as continuous objectives."""

from .clustering import ClusteringInstance, clustering_objective, iris_instance
from .dispatch import EdInstance, default_ed_instance, dispatch_report, ed_objective
from .hlp import HlpInstance, default_hlp_instance, hlp_objective
from .instances import BUILTIN, InstanceParseError, Problem, build_problem, load_descriptor, load_problem
from .mst import NODES_22, GraphInstance, mst_objective, prim_mst_oracle
from .pms import PROCESSING_2x20, PmsInstance, make_pms_instance, pms_objective

__all__ = [
    "BUILTIN",
    "ClusteringInstance",
    "EdInstance",
    "GraphInstance",
    "HlpInstance",
    "InstanceParseError",
    "NODES_22",
    "PROCESSING_2x20",
    "PmsInstance",
    "Problem",
    "build_problem",
    "clustering_objective",
    "default_ed_instance",
    "default_hlp_instance",
    "dispatch_report",
    "ed_objective",
    "hlp_objective",
    "iris_instance",
    "load_descriptor",
    "load_problem",
    "make_pms_instance",
    "mst_objective",
    "pms_objective",
    "prim_mst_oracle",
]
