"""Jumping-connections analysis of recommender data.

Rating data is a bipartite people/artifact graph.  Hammock jumps of width w
project it onto a social network of people; paths through that network
characterise recommendations by width and length, giving a benefit score
w / l^2 and a weak-tie risk measured as the rate at which path length falls.
"""
__version__ = "0.1.0"

from .generators import (ThreeCommunityConfig, WattsStrogatzConfig, calibrate_epsilon, generate_three_community,
                         generate_wreath, rewire, watts_strogatz)
from .graph import Graph
from .jumps import (JumpSpec, RecommenderGraph, SocialNetworkGraph, TieReport, build_recommender_graph,
                    cooccurrence_counts, find_bridges, find_triads, induce_social_network, tie_report)
from .metrics import (ComponentSummary, GraphStatistics, PathLengthResult, average_path_length,
                      clustering_coefficient, connected_components, harmonic_path_length, reachable_fractions,
                      shortest_hammock_path)
from .personalization import (BenefitRecord, FeasibilityMatrix, RiskCurve, benefit, incremental_benefit_experiment,
                              p_risk_sweep, risk_from_length_curve, width_risk_sweep)
from .predictor import (AgreementScalar, NeighborPredictor, PredictionOutcome, agreement_scalar, leave_one_out,
                        predict_nn)
from .ratings import (BipartiteRatingGraph, DegreeSummary, RatingDataError, add_person, artifact_rating_count,
                      degree_stats, load_ratings)
