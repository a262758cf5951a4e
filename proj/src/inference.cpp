#include "netsel/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "netsel/error.hpp"
#include "netsel/generators.hpp"
#include "netsel/parallel.hpp"

namespace netsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * M_PI);

double quantile_sorted(const std::vector<double>& sorted, double q) {
    // Linear interpolation between order statistics (R type 7).
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

void check_variant(const DensityEstimate& d, const FeatureValue& observed) {
    if (observed.is_discrete() != d.discrete_values)
        fail(ErrorCode::InvalidInput, "observed feature variant does not match the density");
}

}  // namespace

void check_samples(const FeatureSamples& samples) {
    if (samples.values.empty())
        fail(ErrorCode::InvalidInput, "feature samples for '" + feature_label(samples.kind) +
                                          "' are empty");
    const bool discrete = samples.values.front().is_discrete();
    for (const auto& v : samples.values)
        if (v.is_discrete() != discrete)
            fail(ErrorCode::InvalidInput, "feature samples mix discrete and continuous values");
}

double silverman_bandwidth(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : values) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) return 0.0;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

DensityEstimate estimate_density(const FeatureSamples& samples, double pseudo_count) {
    check_samples(samples);
    if (!(pseudo_count > 0.0)) fail(ErrorCode::InvalidInput, "pseudo_count must be positive");
    DensityEstimate out;
    out.discrete_values = samples.values.front().is_discrete();

    std::vector<double> xs;
    xs.reserve(samples.values.size());
    for (const auto& v : samples.values) xs.push_back(v.as_double());

    double h = out.discrete_values ? 0.0 : silverman_bandwidth(xs);
    if (out.discrete_values || h == 0.0) {
        DiscretePmf pmf;
        pmf.pseudo_count = pseudo_count;
        pmf.total = xs.size();
        for (double x : xs) ++pmf.counts[x];
        out.estimate = std::move(pmf);
    } else {
        out.estimate = Kde{std::move(xs), h};
    }
    return out;
}

double evidence(const DensityEstimate& density, const FeatureValue& observed) {
    check_variant(density, observed);
    const double x = observed.as_double();
    if (const auto* pmf = std::get_if<DiscretePmf>(&density.estimate)) {
        auto it = pmf->counts.find(x);
        double count = it == pmf->counts.end() ? 0.0 : static_cast<double>(it->second);
        double support = static_cast<double>(pmf->counts.size() + (it == pmf->counts.end() ? 1 : 0));
        return (count + pmf->pseudo_count) /
               (static_cast<double>(pmf->total) + pmf->pseudo_count * support);
    }
    const auto& kde = std::get<Kde>(density.estimate);
    double sum = 0.0;
    for (double xi : kde.samples) {
        double z = (x - xi) / kde.bandwidth;
        sum += std::exp(-0.5 * z * z);
    }
    return sum / (static_cast<double>(kde.samples.size()) * kde.bandwidth * std::sqrt(2.0 * M_PI));
}

double log_evidence(const DensityEstimate& density, const FeatureValue& observed) {
    if (!density.is_kde()) return std::log(evidence(density, observed));
    check_variant(density, observed);
    const auto& kde = std::get<Kde>(density.estimate);
    const double x = observed.as_double();
    double top = -kInf;
    for (double xi : kde.samples) {
        double z = (x - xi) / kde.bandwidth;
        top = std::max(top, -0.5 * z * z);
    }
    double sum = 0.0;
    for (double xi : kde.samples) {
        double z = (x - xi) / kde.bandwidth;
        sum += std::exp(-0.5 * z * z - top);
    }
    return top + std::log(sum) - std::log(static_cast<double>(kde.samples.size()) * kde.bandwidth) -
           kLogSqrt2Pi;
}

double bayes_factor(double ev1, double ev2) {
    if (!(ev1 >= 0.0) || !(ev2 >= 0.0)) fail(ErrorCode::InvalidInput, "evidences must be >= 0");
    if (ev2 == 0.0) {
        if (ev1 == 0.0) fail(ErrorCode::UndefinedBayesFactor, "both evidences are zero");
        return kInf;
    }
    return ev1 / ev2;
}

double bayes_factor_from_logs(double log_ev1, double log_ev2) {
    if (log_ev2 == -kInf) {
        if (log_ev1 == -kInf) fail(ErrorCode::UndefinedBayesFactor, "both evidences are zero");
        return kInf;
    }
    return std::exp(log_ev1 - log_ev2);
}

namespace {

void check_priors(std::size_t count, std::span<const double> priors) {
    if (priors.size() != count)
        fail(ErrorCode::InvalidInput, "evidences and priors differ in length");
    double total = 0.0;
    for (double p : priors) {
        if (!(p >= 0.0) || !std::isfinite(p))
            fail(ErrorCode::InvalidInput, "model priors must be finite and non-negative");
        total += p;
    }
    if (!(total > 0.0)) fail(ErrorCode::InvalidInput, "model priors must not all be zero");
}

}  // namespace

std::vector<double> posterior_model_probs(std::span<const double> evidences,
                                          std::span<const double> priors) {
    check_priors(evidences.size(), priors);
    std::vector<double> out(evidences.size());
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(evidences[i] >= 0.0)) fail(ErrorCode::InvalidInput, "evidences must be >= 0");
        total += out[i] = evidences[i] * priors[i];
    }
    if (!(total > 0.0)) fail(ErrorCode::UndefinedPosterior, "all evidence-prior products are zero");
    for (auto& p : out) p /= total;
    return out;
}

std::vector<double> posterior_from_log_evidence(std::span<const double> log_evidences,
                                                std::span<const double> priors) {
    check_priors(log_evidences.size(), priors);
    std::vector<double> logs(log_evidences.size());
    double top = -kInf;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        logs[i] = priors[i] > 0.0 ? log_evidences[i] + std::log(priors[i]) : -kInf;
        top = std::max(top, logs[i]);
    }
    if (top == -kInf) fail(ErrorCode::UndefinedPosterior, "all evidence-prior products are zero");
    double total = 0.0;
    for (auto& l : logs) total += l = std::exp(l - top);
    for (auto& l : logs) l /= total;
    return logs;
}

double Loss::operator()(double simulated, double observed) const {
    double diff = simulated - observed;
    switch (kind) {
        case Kind::Quadratic: return diff * diff;
        case Kind::Absolute: return std::abs(diff);
        case Kind::ZeroOne: return std::abs(diff) > tolerance ? 1.0 : 0.0;
    }
    return 0.0;
}

std::string_view loss_token(Loss::Kind kind) {
    switch (kind) {
        case Loss::Kind::Quadratic: return "quadratic";
        case Loss::Kind::Absolute: return "absolute";
        case Loss::Kind::ZeroOne: return "zero_one";
    }
    return "unknown";
}

Loss parse_loss(std::string_view token) {
    for (auto k : {Loss::Kind::Quadratic, Loss::Kind::Absolute, Loss::Kind::ZeroOne})
        if (loss_token(k) == token) return Loss{k, 0.0};
    fail(ErrorCode::InvalidInput, "unknown loss '" + std::string(token) + "'");
}

double expected_loss(const FeatureSamples& samples, const FeatureValue& observed, const Loss& loss) {
    check_samples(samples);
    if (samples.values.front().is_discrete() != observed.is_discrete())
        fail(ErrorCode::InvalidInput, "observed feature variant does not match the samples");
    if (!(loss.tolerance >= 0.0)) fail(ErrorCode::InvalidInput, "loss tolerance must be >= 0");
    const double x = observed.as_double();
    double total = 0.0;
    for (const auto& v : samples.values) total += loss(v.as_double(), x);
    return total / static_cast<double>(samples.values.size());
}

double combined_loss_ratio(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) fail(ErrorCode::InvalidInput, "no expected-loss pairs");
    double total = 0.0;
    for (auto [el1, el2] : pairs) {
        // equal losses count as a ratio of 1, also when both are zero
        if (el1 == el2) total += 1.0;
        else if (el2 == 0.0) fail(ErrorCode::DegenerateRatio, "expected loss of model 2 is zero");
        else total += el1 / el2;
    }
    return total / static_cast<double>(pairs.size());
}

std::string_view decision_token(Decision d) {
    switch (d) {
        case Decision::Model1: return "model_1";
        case Decision::Model2: return "model_2";
        case Decision::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

Decision decide(double combined_ratio, double posterior_odds) {
    if (combined_ratio == posterior_odds) return Decision::Indeterminate;
    if (std::isinf(posterior_odds) || std::isinf(combined_ratio))
        return combined_ratio < posterior_odds ? Decision::Model1 : Decision::Model2;
    double scale = std::max(std::abs(combined_ratio), std::abs(posterior_odds));
    if (std::abs(combined_ratio - posterior_odds) <= kDecisionTolerance * scale)
        return Decision::Indeterminate;
    return combined_ratio < posterior_odds ? Decision::Model1 : Decision::Model2;
}

RangeProbability range_probability(const FeatureSamples& samples, double lo, double hi) {
    if (!(lo <= hi)) fail(ErrorCode::InvalidInput, "range requires lo <= hi");
    check_samples(samples);
    RangeProbability r;
    r.total = samples.values.size();
    for (const auto& v : samples.values) {
        double x = v.as_double();
        if (x >= lo && x <= hi) ++r.inside;
    }
    r.probability = static_cast<double>(r.inside) / static_cast<double>(r.total);
    r.standard_error =
        std::sqrt(r.probability * (1.0 - r.probability) / static_cast<double>(r.total));
    return r;
}

std::vector<Hypothesis> expand_grid(const ModelSpec& spec) {
    auto grid = grid_parameter(spec);
    if (!grid) fail(ErrorCode::InvalidSpec, "model spec carries no grid prior");
    std::vector<Hypothesis> out;
    for (std::size_t j = 0; j < grid->values.size(); ++j)
        out.push_back({grid->name, grid->values[j], grid->weights[j], with_point(spec, grid->values[j])});
    return out;
}

double ParamPosterior::window(std::string_view parameter, double lo, double hi) const {
    double mass = 0.0;
    for (std::size_t j = 0; j < hypotheses.size(); ++j) {
        const auto& h = hypotheses[j];
        if (h.parameter == parameter && h.value >= lo && h.value <= hi) mass += posterior[j];
    }
    return mass;
}

ParamPosterior posterior_over_hypotheses(std::vector<Hypothesis> hypotheses,
                                         const std::vector<std::vector<FeatureSamples>>& samples,
                                         std::span<const ObservedFeature> observed,
                                         double pseudo_count) {
    if (hypotheses.empty()) fail(ErrorCode::InvalidInput, "no hypotheses");
    if (observed.empty()) fail(ErrorCode::InvalidInput, "no observed features");
    if (samples.size() != hypotheses.size())
        fail(ErrorCode::InvalidInput, "one sample set per hypothesis required");
    ParamPosterior out;
    out.log_evidence.assign(hypotheses.size(), 0.0);
    std::vector<double> priors;
    for (std::size_t j = 0; j < hypotheses.size(); ++j) {
        if (samples[j].size() != observed.size())
            fail(ErrorCode::InvalidInput, "one ensemble per observed feature required");
        for (std::size_t f = 0; f < observed.size(); ++f) {
            auto density = estimate_density(samples[j][f], pseudo_count);
            out.log_evidence[j] += log_evidence(density, observed[f].value);
        }
        priors.push_back(hypotheses[j].prior_weight);
    }
    out.posterior = posterior_from_log_evidence(out.log_evidence, priors);
    out.hypotheses = std::move(hypotheses);
    return out;
}

ParamPosterior hypothesis_posterior(std::vector<Hypothesis> hypotheses,
                                    std::span<const ObservedFeature> observed,
                                    std::size_t samples_per_point, std::uint64_t master_seed,
                                    unsigned threads, double pseudo_count) {
    std::vector<FeatureKind> kinds;
    for (const auto& o : observed) kinds.push_back(o.kind);
    std::vector<std::vector<FeatureSamples>> samples;
    for (const auto& h : hypotheses)
        samples.push_back(simulate_features(h.spec, kinds, samples_per_point, master_seed, threads));
    return posterior_over_hypotheses(std::move(hypotheses), samples, observed, pseudo_count);
}

ParamPosterior param_posterior(const ObservedFeature& observed, const ModelSpec& spec,
                               std::size_t samples_per_point, std::uint64_t master_seed,
                               unsigned threads) {
    return hypothesis_posterior(expand_grid(spec), std::span(&observed, 1), samples_per_point,
                                master_seed, threads);
}

std::vector<Graph> shard_cells(const Graph& g, std::size_t cell_size) {
    if (cell_size < 1) fail(ErrorCode::InvalidInput, "cell_size must be >= 1");
    std::vector<Graph> shards;
    const std::size_t n = g.node_count();
    for (std::size_t start = 0; start < n; start += cell_size) {
        std::vector<NodeId> block;
        for (std::size_t v = start; v < std::min(n, start + cell_size); ++v)
            block.push_back(static_cast<NodeId>(v));
        shards.push_back(induced_subgraph(g, block));
    }
    return shards;
}

std::vector<double> consensus_merge(const std::vector<std::vector<double>>& shard_draws) {
    if (shard_draws.empty()) fail(ErrorCode::InvalidInput, "no shards to merge");
    const std::size_t t = shard_draws.front().size();
    if (t < 2) fail(ErrorCode::InvalidInput, "each shard needs at least 2 draws");
    std::vector<double> weights;
    for (const auto& draws : shard_draws) {
        if (draws.size() != t) fail(ErrorCode::InvalidInput, "shards differ in draw count");
        double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(t);
        double ss = 0.0;
        for (double x : draws) ss += (x - mean) * (x - mean);
        double var = ss / static_cast<double>(t - 1);
        weights.push_back(var > 0.0 ? std::min(1.0 / var, kConsensusWeightCap) : kConsensusWeightCap);
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> merged(t, 0.0);
    for (std::size_t i = 0; i < t; ++i) {
        double acc = 0.0;
        for (std::size_t s = 0; s < shard_draws.size(); ++s) acc += weights[s] * shard_draws[s][i];
        merged[i] = acc / total;
    }
    return merged;
}

ConsensusFeature consensus_feature(std::span<const Graph> graphs, std::size_t cell_size,
                                   const FeatureKind& kind) {
    if (graphs.size() < 2) fail(ErrorCode::InvalidInput, "consensus needs at least 2 graphs");
    const std::size_t n = graphs.front().node_count();
    for (const auto& g : graphs)
        if (g.node_count() != n) fail(ErrorCode::InvalidInput, "graphs differ in node count");

    std::vector<std::vector<double>> draws;  // draws[s][t]
    std::vector<bool> usable;
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        auto shards = shard_cells(graphs[t], cell_size);
        if (t == 0) {
            draws.assign(shards.size(), std::vector<double>(graphs.size()));
            usable.assign(shards.size(), true);
        }
        for (std::size_t s = 0; s < shards.size(); ++s) {
            if (!usable[s]) continue;
            try {
                draws[s][t] = extract_feature(shards[s], kind).as_double();
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UndefinedFeature) throw;
                usable[s] = false;
            }
        }
    }
    ConsensusFeature out;
    out.shards_total = draws.size();
    std::vector<std::vector<double>> kept;
    for (std::size_t s = 0; s < draws.size(); ++s)
        if (usable[s]) kept.push_back(std::move(draws[s]));
    out.shards_used = kept.size();
    if (kept.empty())
        fail(ErrorCode::UndefinedFeature, "'" + feature_label(kind) + "' is undefined on every shard");
    out.merged = consensus_merge(kept);
    return out;
}

std::vector<FeatureSamples> simulate_features(const ModelSpec& spec,
                                              std::span<const FeatureKind> kinds,
                                              std::size_t count, std::uint64_t master_seed,
                                              unsigned threads, std::uint64_t stream,
                                              const std::string& model_id) {
    if (count < 1) fail(ErrorCode::InvalidInput, "sample count must be >= 1");
    validate(spec);
    std::vector<std::vector<std::optional<FeatureValue>>> slots(
        count, std::vector<std::optional<FeatureValue>>(kinds.size()));
    parallel_for(count, threads, [&](std::size_t i) {
        Rng rng(derive_seed(master_seed, stream, i));
        Graph g = sample_graph(spec, rng);
        for (std::size_t f = 0; f < kinds.size(); ++f) {
            try {
                slots[i][f] = extract_feature(g, kinds[f]);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UndefinedFeature) throw;
            }
        }
    });
    std::vector<FeatureSamples> out;
    for (std::size_t f = 0; f < kinds.size(); ++f) {
        FeatureSamples s{kinds[f], {}, model_id};
        for (std::size_t i = 0; i < count; ++i)
            if (slots[i][f]) s.values.push_back(*slots[i][f]);
        if (s.values.empty())
            fail(ErrorCode::InvalidInput, "feature '" + feature_label(kinds[f]) +
                                              "' is undefined on every simulated graph");
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace netsel
