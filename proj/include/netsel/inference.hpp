#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "netsel/features.hpp"
#include "netsel/graph.hpp"
#include "netsel/model_spec.hpp"

namespace netsel {

/// Monte Carlo image of one model's prior predictive in feature space.
struct FeatureSamples {
    FeatureKind kind;
    std::vector<FeatureValue> values;
    std::string model_id;
};

/// Throws InvalidInput when empty or when discrete and continuous values mix.
void check_samples(const FeatureSamples& samples);

// Densities ------------------------------------------------------------------

struct DiscretePmf {
    std::map<double, std::size_t> counts;
    std::size_t total = 0;
    double pseudo_count = 0.5;
};

struct Kde {
    std::vector<double> samples;
    double bandwidth = 1.0;
};

struct DensityEstimate {
    std::variant<DiscretePmf, Kde> estimate;
    bool discrete_values = false;  // variant of the FeatureValues it was built from

    bool is_kde() const { return std::holds_alternative<Kde>(estimate); }
};

inline constexpr double kDefaultPseudoCount = 0.5;

/// 0.9 * min(sd, IQR / 1.34) * N^(-1/5). Falls back to the sample standard
/// deviation when the IQR is zero; returns 0 for zero variance.
double silverman_bandwidth(std::span<const double> values);

/// Discrete samples -> smoothed pmf; continuous -> Gaussian KDE with Silverman
/// bandwidth, degrading to a pmf when the samples have zero variance.
DensityEstimate estimate_density(const FeatureSamples& samples,
                                 double pseudo_count = kDefaultPseudoCount);

/// Smoothed pmf value or KDE density at the observed feature.
double evidence(const DensityEstimate& density, const FeatureValue& observed);

/// log(evidence) computed without underflow (log-sum-exp for the KDE).
double log_evidence(const DensityEstimate& density, const FeatureValue& observed);

// Bayes factors and posteriors -----------------------------------------------

/// ev1 / ev2; +infinity when ev2 == 0 < ev1. Both zero throws
/// UndefinedBayesFactor.
double bayes_factor(double ev1, double ev2);

/// exp(log_ev1 - log_ev2) with the same edge cases as bayes_factor.
double bayes_factor_from_logs(double log_ev1, double log_ev2);

/// p_i ∝ evidence_i * prior_i. Throws UndefinedPosterior when every product
/// is zero.
std::vector<double> posterior_model_probs(std::span<const double> evidences,
                                          std::span<const double> priors);

/// Same as posterior_model_probs with evidences given as logs.
std::vector<double> posterior_from_log_evidence(std::span<const double> log_evidences,
                                                std::span<const double> priors);

// Losses and decisions -------------------------------------------------------

struct Loss {
    enum class Kind { Quadratic, Absolute, ZeroOne };
    Kind kind = Kind::Quadratic;
    double tolerance = 0.0;  // ZeroOne only

    double operator()(double simulated, double observed) const;

    friend bool operator==(const Loss&, const Loss&) = default;
};

std::string_view loss_token(Loss::Kind kind);
Loss parse_loss(std::string_view token);

/// (1/N) sum_i L(f(G_i), f(D)).
double expected_loss(const FeatureSamples& samples, const FeatureValue& observed, const Loss& loss);

/// Mean of el1_j / el2_j, where a pair with el1_j == el2_j (zero included)
/// contributes 1. el2_j == 0 < el1_j throws DegenerateRatio.
double combined_loss_ratio(std::span<const std::pair<double, double>> pairs);

enum class Decision { Model1, Model2, Indeterminate };

std::string_view decision_token(Decision d);

inline constexpr double kDecisionTolerance = 1e-9;

/// Model1 when combined_ratio < posterior_odds, Model2 when greater,
/// Indeterminate when equal within relative tolerance 1e-9.
Decision decide(double combined_ratio, double posterior_odds);

inline constexpr std::string_view kDecisionRule =
    "model_1 iff combined_ratio < posterior_odds; model_2 iff combined_ratio > posterior_odds; "
    "indeterminate within relative tolerance 1e-9";

// Range elicitation ----------------------------------------------------------

struct RangeProbability {
    double probability = 0.0;
    double standard_error = 0.0;  // sqrt(p (1 - p) / N)
    std::size_t inside = 0;
    std::size_t total = 0;
};

RangeProbability range_probability(const FeatureSamples& samples, double lo, double hi);

// Parameter posteriors over hypothesis grids ---------------------------------

struct ObservedFeature {
    FeatureKind kind;
    FeatureValue value;
};

struct Hypothesis {
    std::string parameter;  // e.g. "alpha", "k"
    double value = 0.0;
    double prior_weight = 1.0;
    ModelSpec spec;  // point spec for this grid value
};

/// One hypothesis per grid value of the model's single grid parameter, weighted
/// by the grid weights.
std::vector<Hypothesis> expand_grid(const ModelSpec& spec);

struct ParamPosterior {
    std::vector<Hypothesis> hypotheses;
    std::vector<double> log_evidence;  // summed over features per hypothesis
    std::vector<double> posterior;     // sums to 1

    /// Posterior mass of hypotheses on `parameter` with value in [lo, hi].
    double window(std::string_view parameter, double lo, double hi) const;
};

/// Posterior over hypotheses from already simulated feature samples.
/// samples[j][f] holds hypothesis j's ensemble for observed[f]. With several
/// features the evidences multiply.
ParamPosterior posterior_over_hypotheses(std::vector<Hypothesis> hypotheses,
                                         const std::vector<std::vector<FeatureSamples>>& samples,
                                         std::span<const ObservedFeature> observed,
                                         double pseudo_count = kDefaultPseudoCount);

/// Simulates `samples_per_point` graphs for every hypothesis (all hypotheses
/// share one seed stream) and returns the posterior.
ParamPosterior hypothesis_posterior(std::vector<Hypothesis> hypotheses,
                                    std::span<const ObservedFeature> observed,
                                    std::size_t samples_per_point, std::uint64_t master_seed,
                                    unsigned threads = 1,
                                    double pseudo_count = kDefaultPseudoCount);

/// hypothesis_posterior over expand_grid(spec) for a single feature.
ParamPosterior param_posterior(const ObservedFeature& observed, const ModelSpec& spec,
                               std::size_t samples_per_point, std::uint64_t master_seed,
                               unsigned threads = 1);

// Sharding and consensus -----------------------------------------------------

/// Induced subgraphs on consecutive id blocks of `cell_size` nodes (the last
/// block may be smaller).
std::vector<Graph> shard_cells(const Graph& g, std::size_t cell_size);

inline constexpr double kConsensusWeightCap = 1e12;

/// Inverse-variance weighted average across shards, draw by draw. Shards with
/// zero sample variance get weight kConsensusWeightCap.
std::vector<double> consensus_merge(const std::vector<std::vector<double>>& shard_draws);

struct ConsensusFeature {
    std::vector<double> merged;  // one merged value per input graph
    std::size_t shards_used = 0;
    std::size_t shards_total = 0;
};

/// Shards every graph with shard_cells, extracts `kind` per shard and merges
/// the per-shard draws with consensus_merge. Shards on which the feature is
/// undefined for any draw are left out; none left throws UndefinedFeature.
ConsensusFeature consensus_feature(std::span<const Graph> graphs, std::size_t cell_size,
                                   const FeatureKind& kind);

// Simulation helpers ---------------------------------------------------------

/// Ensemble of each requested feature over prior_predictive(spec, ...).
/// Graphs on which a feature is undefined are left out of that feature's
/// ensemble.
std::vector<FeatureSamples> simulate_features(const ModelSpec& spec,
                                              std::span<const FeatureKind> kinds,
                                              std::size_t count, std::uint64_t master_seed,
                                              unsigned threads = 1, std::uint64_t stream = 0,
                                              const std::string& model_id = {});

}  // namespace netsel
