from .affinity import (
    AffinityMatrix,
    calibrate_row,
    direct_affinities,
    floor_and_normalize,
    joint_affinities,
)
from .pca import pca_project
from .result import Embedding, read_embedding, write_embedding
from .tsne import TsneConfig, kl_cost, low_dim_affinities, tsne_embed, tsne_gradient
