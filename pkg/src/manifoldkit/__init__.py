"""Manifold-learning embeddings, quality metrics, and deterministic plots
for labeled high-dimensional feature matrices."""

from .dataset import (
    AnnotationTable,
    EmbeddingMatrix,
    LabeledDataset,
    bundled_annotations_path,
    join,
    load_annotations,
    load_embeddings,
    merge_categories,
    save_embeddings,
)
from .embedding import Embedding2D, load_embedding_csv
from .fixtures import SyntheticSpec, generate
from .geodesic import classical_mds, geodesic_distances, isomap, smacof_mds
from .linalg import double_center, procrustes_error, symmetric_eigen
from .neighbors import (
    AffinityMatrix,
    DistanceMatrix,
    KnnGraph,
    alpha_decay_kernel,
    connected_components,
    gaussian_affinity,
    knn_graph,
    pairwise_distances,
)
from .phate import diffusion_operator, phate_embed, potential_distances, select_t
from .plotting import PlotSpec, render_scatter_svg
from .quality import (
    QualityReport,
    continuity,
    knn_label_agreement,
    quality_report,
    silhouette,
    trustworthiness,
)
from .spectral import laplacian_eigenmaps, lle
from .tsne import CalibratedAffinities, TsneConfig, calibrate_perplexity, tsne_embed

__version__ = "0.1.0"
