"""Rank-preserving embeddings of ordinal preference profiles into normed spaces."""

from rankembed.constructions import (
    ar_embedding,
    build,
    c_infimum,
    choose_c,
    max_rank_embedding,
    median_based_embedding,
    rank_pivot_embedding,
)
from rankembed.embedding import Embedding
from rankembed.norms import PNorm, PolygonGauge, WeightedSum, distance, norm_eval, parse_norm
from rankembed.profile import PreferenceProfile, parse_profile, random_profile, rank_matrix, reduce_irreducible
from rankembed.two_voter import annulus_place, two_voter_embedding
from rankembed.verify import verify_embedding

__all__ = [
    "Embedding",
    "PNorm",
    "PolygonGauge",
    "PreferenceProfile",
    "WeightedSum",
    "annulus_place",
    "ar_embedding",
    "build",
    "c_infimum",
    "choose_c",
    "distance",
    "max_rank_embedding",
    "median_based_embedding",
    "norm_eval",
    "parse_norm",
    "parse_profile",
    "random_profile",
    "rank_matrix",
    "rank_pivot_embedding",
    "reduce_irreducible",
    "two_voter_embedding",
    "verify_embedding",
]
