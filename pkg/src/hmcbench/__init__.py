"""hmcbench: hierarchical multi-class classification benchmarking.

The pipeline: measure class-pairwise dissimilarities (centroid distances
or classifier separability), cluster the classes into a binary dendrogram
(agglomerative average link or recursive 2-means), train one binary
classifier per internal node, route test instances root-to-leaf, and
compare methods across shared Monte Carlo folds with the corrected
resampled t-test.  Random hierarchies are first-class citizens: they are
the baseline that separates the value of a hierarchy's *quality* from the
value of hierarchical decomposition itself.
"""

__version__ = "0.1.0"

from .dataio import (Dataset, SplitPlan, from_arrays, load_csv,
                     make_two_level_gaussians, monte_carlo_splits, save_csv)
from .dissimilarity import (CbdPlan, ConfusionMatrix, DissimilarityMatrix,
                            NoEvidenceError, ava_proxy_dissimilarity,
                            cbd_matrix, class_centroids, confusion_matrix,
                            confusion_row_matrix,
                            confusion_subset_dissimilarity, rbd_matrix)
from .hierarchy import (DepthStats, Hierarchy, Internal, Leaf, best_of_50,
                        canonical_key, count_hierarchies, depth_stats,
                        from_newick, hac_build, hkm_build,
                        sample_random_hierarchy, to_newick)
from .hmc import (Routing, TrainedHierarchy, evaluate, node_summaries,
                  predict_batch, predict_route, train_hmc)
from .learners import (ClassifierSpec, ConstantModel, DegenerateLabelsError,
                       OvaEnsemble, fit, fit_ova, fit_single_multiclass,
                       model_summary, predict_proba)
from .runner import (DatasetConfig, ExperimentConfig, MethodConfig,
                     ResultStore, config_from_json, config_to_json,
                     emit_classcount_summary, report, run_experiment,
                     sweep_grid)
from .stats import (ComparisonReport, FoldRecord, TTestResult, compare,
                    corrected_resampled_t, corrected_variance, t_cdf)
