"""Topological clustering of point clouds with graph heat operators.

The number of clusters is the multiplicity of eigenvalue 1 of
``exp(-t L_r)`` for the r-ball graph Laplacian ``L_r``. The radius ``r``
is chosen from a cross-validated variance curve with an elbow rule.
"""
from ._accel import BACKEND
from .bandwidth import (BandwidthChoice, RadiusGrid, VarianceCurve, radius_grid,
                        select_bandwidth, variance_curve, variance_estimate)
from .errors import (DegenerateEigenbasis, HeatclustError, MalformedInput, NoUnitEigenvalue,
                     NumericalError)
from .geometry import (LabeledPointCloud, PointCloud, SubsampleSet, diameter,
                       draw_subsamples, generate_blobs, generate_three_circles,
                       generate_two_circles, pairwise_distances, subsample)
from .heat import (HeatOperator, LaplacianMatrix, build_laplacian, heat_operator, hs_distance,
                   hs_norm, matrix_exponential)
from .kernel import KernelMatrix, KernelSpec, check_kernel_axioms, evaluate_kernel_matrix
from .spectral import (ClusterConfig, ClusteringResult, ClusterMap, EigenBasis,
                       assign_clusters, cluster, connected_components_oracle,
                       modified_gaussian_elimination, unit_eigenspace)

__version__ = "0.1.0"
