#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "netsel/features.hpp"
#include "netsel/graph.hpp"
#include "netsel/inference.hpp"
#include "netsel/model_spec.hpp"

namespace netsel {

inline constexpr std::size_t kDefaultSamples = 100;
inline constexpr std::string_view kBlockCountMethod = "spectral_eigengap";

// compare --------------------------------------------------------------------

struct CompareConfig {
    ModelSpec model_1;
    ModelSpec model_2;
    std::vector<FeatureKind> features;
    Loss loss;
    std::size_t samples = kDefaultSamples;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::array<double, 2> model_priors{0.5, 0.5};
    // Shared streams use common random numbers for both models, so M1 == M2
    // gives a Bayes factor of exactly 1.
    bool independent_streams = false;
    double pseudo_count = kDefaultPseudoCount;
};

struct FeatureRecord {
    FeatureKind kind;
    FeatureValue observed = FeatureValue::discrete(0);
    double evidence_1 = 0.0;
    double evidence_2 = 0.0;
    double log_evidence_1 = 0.0;
    double log_evidence_2 = 0.0;
    double bayes_factor = 0.0;
    double el_1 = 0.0;
    double el_2 = 0.0;
    double loss_ratio = 0.0;
    std::size_t used_1 = 0;  // simulated graphs on which the feature is defined
    std::size_t used_2 = 0;

    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct ComparisonReport {
    std::string model_1;
    std::string model_2;
    std::size_t n_samples = 0;
    std::uint64_t master_seed = 0;
    Loss loss;
    std::vector<FeatureRecord> features;
    double combined_ratio = 0.0;
    std::array<double, 2> model_priors{0.5, 0.5};
    std::array<double, 2> posterior{0.5, 0.5};
    double posterior_odds = 1.0;
    Decision decision = Decision::Indeterminate;
    std::string decision_rule{kDecisionRule};
    std::string block_count_method{kBlockCountMethod};

    friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

/// Full pipeline: both prior predictives, feature extraction, densities,
/// evidences and Bayes factors, expected losses, combined ratio, decision.
ComparisonReport run_compare(const Graph& data, const CompareConfig& config);

/// Per-feature density curves of both models as CSV
/// (feature,model,x,density): KDE curves on a 200-point grid, pmf values at
/// each support point.
std::string compare_plot_csv(const Graph& data, const CompareConfig& config);

// elicit ---------------------------------------------------------------------

struct RangeQuery {
    FeatureKind kind;
    double lo = 0.0;
    double hi = 0.0;
};

struct ElicitConfig {
    std::vector<ModelSpec> models;
    std::vector<RangeQuery> ranges;
    std::size_t samples = kDefaultSamples;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct ElicitReport {
    std::vector<std::string> models;
    std::vector<RangeQuery> ranges;
    std::size_t n_samples = 0;
    std::uint64_t master_seed = 0;
    // probabilities[m][r] for model m and range r
    std::vector<std::vector<RangeProbability>> probabilities;

    /// P_i / P_j for range r; +inf when only P_j is zero, NaN when both are.
    double ratio(std::size_t r, std::size_t i, std::size_t j) const;
};

ElicitReport run_elicit(const ElicitConfig& config);

// infer ----------------------------------------------------------------------

struct InferConfig {
    ModelSpec model;  // exactly one grid prior
    std::vector<FeatureKind> features;
    std::size_t samples = kDefaultSamples;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double pseudo_count = kDefaultPseudoCount;
};

struct InferReport {
    std::vector<ObservedFeature> observed;
    ParamPosterior posterior;
    std::size_t n_samples = 0;
    std::uint64_t master_seed = 0;
};

/// Posterior over the grid values of the model's grid parameter given the
/// data graph's features.
InferReport run_infer(const Graph& data, const InferConfig& config);

// simulate -------------------------------------------------------------------

struct StudyGrid {
    std::string name;  // referenced by windows
    ModelSpec model;   // exactly one grid prior
};

struct StudyWindow {
    std::string label;
    std::string grid;
    double lo = 0.0;
    double hi = 0.0;
};

struct StudyRow {
    std::string real_param;  // display label, e.g. "alpha=3.2"
    ModelSpec data;
    std::vector<FeatureKind> features;
    ModelSpec model_1;  // numerator of the loss ratio
    ModelSpec model_2;
};

struct StudyConfig {
    std::size_t samples = kDefaultSamples;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::vector<Loss> losses{Loss{Loss::Kind::Quadratic}, Loss{Loss::Kind::Absolute}};
    std::vector<StudyGrid> grids;
    std::vector<StudyWindow> windows;
    std::vector<StudyRow> rows;
    double pseudo_count = kDefaultPseudoCount;
};

struct StudyResultRow {
    std::string real_param;
    Loss loss;
    double loss_ratio = 0.0;
    std::vector<double> window_probabilities;  // parallel to StudyConfig::windows
    std::vector<FeatureKind> features;
    std::vector<double> el_1;  // per feature
    std::vector<double> el_2;
    bool degenerate = false;  // a zero expected loss left the ratio undefined (loss_ratio is NaN)
};

struct StudyResult {
    std::vector<std::string> window_labels;
    std::vector<StudyResultRow> rows;  // row-major over (config row, loss)
};

/// Every grid point is one hypothesis of a joint grid with a flat prior. Grid
/// points and the row models share one seed stream; each data graph uses its
/// own stream.
StudyResult run_study(const StudyConfig& config);

std::string study_csv(const StudyResult& result);

}  // namespace netsel
