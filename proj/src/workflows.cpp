#include "netsel/workflows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "netsel/error.hpp"
#include "netsel/generators.hpp"
#include "netsel/json_io.hpp"

namespace netsel {
namespace {

constexpr std::uint64_t kSharedStream = 0;
constexpr std::uint64_t kSecondModelStream = 1;
constexpr std::uint64_t kDataStreamBase = std::uint64_t{1} << 32;

std::string label_of(const ModelSpec& spec, const char* fallback) {
    return spec.label.empty() ? fallback : spec.label;
}

std::vector<ObservedFeature> observe(const Graph& data, std::span<const FeatureKind> kinds) {
    std::vector<ObservedFeature> out;
    for (const auto& k : kinds) out.push_back({k, extract_feature(data, k)});
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

ComparisonReport run_compare(const Graph& data, const CompareConfig& config) {
    if (config.features.empty()) fail(ErrorCode::InvalidInput, "at least one feature is required");
    if (config.samples < 1) fail(ErrorCode::InvalidInput, "samples must be >= 1");
    validate(config.model_1);
    validate(config.model_2);

    ComparisonReport report;
    report.model_1 = label_of(config.model_1, "model_1");
    report.model_2 = label_of(config.model_2, "model_2");
    report.n_samples = config.samples;
    report.master_seed = config.seed;
    report.loss = config.loss;
    report.model_priors = config.model_priors;

    const auto observed = observe(data, config.features);
    auto s1 = simulate_features(config.model_1, config.features, config.samples, config.seed,
                                config.threads, kSharedStream, report.model_1);
    auto s2 = simulate_features(config.model_2, config.features, config.samples, config.seed,
                                config.threads,
                                config.independent_streams ? kSecondModelStream : kSharedStream,
                                report.model_2);

    std::vector<std::pair<double, double>> loss_pairs;
    double total_log_1 = 0.0;
    double total_log_2 = 0.0;
    for (std::size_t f = 0; f < config.features.size(); ++f) {
        FeatureRecord rec;
        rec.kind = config.features[f];
        rec.observed = observed[f].value;
        auto d1 = estimate_density(s1[f], config.pseudo_count);
        auto d2 = estimate_density(s2[f], config.pseudo_count);
        rec.log_evidence_1 = log_evidence(d1, rec.observed);
        rec.log_evidence_2 = log_evidence(d2, rec.observed);
        rec.evidence_1 = std::exp(rec.log_evidence_1);
        rec.evidence_2 = std::exp(rec.log_evidence_2);
        rec.bayes_factor = bayes_factor_from_logs(rec.log_evidence_1, rec.log_evidence_2);
        rec.el_1 = expected_loss(s1[f], rec.observed, config.loss);
        rec.el_2 = expected_loss(s2[f], rec.observed, config.loss);
        if (rec.el_2 == 0.0 && rec.el_1 != 0.0)
            fail(ErrorCode::DegenerateRatio, "expected loss of " + report.model_2 + " is zero for '" +
                                                 feature_label(rec.kind) + "'");
        const std::pair<double, double> pair{rec.el_1, rec.el_2};
        rec.loss_ratio = combined_loss_ratio(std::span(&pair, 1));
        rec.used_1 = s1[f].values.size();
        rec.used_2 = s2[f].values.size();
        loss_pairs.emplace_back(rec.el_1, rec.el_2);
        total_log_1 += rec.log_evidence_1;
        total_log_2 += rec.log_evidence_2;
        report.features.push_back(rec);
    }

    report.combined_ratio = combined_loss_ratio(loss_pairs);
    const std::array<double, 2> logs{total_log_1, total_log_2};
    auto post = posterior_from_log_evidence(logs, config.model_priors);
    report.posterior = {post[0], post[1]};
    // Odds straight from the logs so they stay finite when one posterior
    // underflows to zero after normalization.
    const double lp1 = config.model_priors[0] > 0 ? total_log_1 + std::log(config.model_priors[0])
                                                  : -std::numeric_limits<double>::infinity();
    const double lp2 = config.model_priors[1] > 0 ? total_log_2 + std::log(config.model_priors[1])
                                                  : -std::numeric_limits<double>::infinity();
    report.posterior_odds = lp2 == -std::numeric_limits<double>::infinity()
                                ? std::numeric_limits<double>::infinity()
                                : std::exp(lp1 - lp2);
    report.decision = decide(report.combined_ratio, report.posterior_odds);
    return report;
}

std::string compare_plot_csv(const Graph& data, const CompareConfig& config) {
    (void)observe(data, config.features);  // same preconditions as run_compare
    std::ostringstream out;
    out << "feature,model,x,density\n";
    const ModelSpec* specs[2] = {&config.model_1, &config.model_2};
    const char* fallback[2] = {"model_1", "model_2"};
    for (int m = 0; m < 2; ++m) {
        const auto label = label_of(*specs[m], fallback[m]);
        auto samples = simulate_features(*specs[m], config.features, config.samples, config.seed,
                                         config.threads,
                                         m == 1 && config.independent_streams ? kSecondModelStream
                                                                              : kSharedStream,
                                         label);
        for (const auto& s : samples) {
            auto density = estimate_density(s, config.pseudo_count);
            const auto feature = csv_escape(feature_label(s.kind));
            if (const auto* kde = std::get_if<Kde>(&density.estimate)) {
                auto [lo_it, hi_it] = std::minmax_element(kde->samples.begin(), kde->samples.end());
                const double lo = *lo_it - 3.0 * kde->bandwidth;
                const double hi = *hi_it + 3.0 * kde->bandwidth;
                constexpr int points = 200;
                for (int i = 0; i < points; ++i) {
                    double x = lo + (hi - lo) * i / (points - 1);
                    out << feature << ',' << csv_escape(label) << ',' << format_number(x) << ','
                        << format_number(evidence(density, FeatureValue::continuous(x))) << '\n';
                }
            } else {
                const auto& pmf = std::get<DiscretePmf>(density.estimate);
                for (auto [x, count] : pmf.counts) {
                    auto value = density.discrete_values
                                     ? FeatureValue::discrete(static_cast<std::int64_t>(x))
                                     : FeatureValue::continuous(x);
                    out << feature << ',' << csv_escape(label) << ',' << format_number(x) << ','
                        << format_number(evidence(density, value)) << '\n';
                }
            }
        }
    }
    return out.str();
}

double ElicitReport::ratio(std::size_t r, std::size_t i, std::size_t j) const {
    double a = probabilities.at(i).at(r).probability;
    double b = probabilities.at(j).at(r).probability;
    if (b == 0.0)
        return a == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                        : std::numeric_limits<double>::infinity();
    return a / b;
}

ElicitReport run_elicit(const ElicitConfig& config) {
    if (config.models.empty()) fail(ErrorCode::InvalidInput, "at least one model is required");
    if (config.ranges.empty()) fail(ErrorCode::InvalidInput, "at least one range is required");
    for (const auto& q : config.ranges)
        if (!(q.lo <= q.hi))
            fail(ErrorCode::InvalidInput, "range for '" + feature_label(q.kind) + "' has lo > hi");

    // Distinct feature kinds, in first-seen order.
    std::vector<FeatureKind> kinds;
    for (const auto& q : config.ranges)
        if (std::find(kinds.begin(), kinds.end(), q.kind) == kinds.end()) kinds.push_back(q.kind);

    ElicitReport report;
    report.ranges = config.ranges;
    report.n_samples = config.samples;
    report.master_seed = config.seed;
    for (std::size_t m = 0; m < config.models.size(); ++m) {
        const auto& spec = config.models[m];
        auto label = spec.label.empty() ? "model_" + std::to_string(m + 1) : spec.label;
        auto samples = simulate_features(spec, kinds, config.samples, config.seed, config.threads,
                                         kSharedStream, label);
        std::vector<RangeProbability> row;
        for (const auto& q : config.ranges) {
            auto k = static_cast<std::size_t>(
                std::distance(kinds.begin(), std::find(kinds.begin(), kinds.end(), q.kind)));
            row.push_back(range_probability(samples[k], q.lo, q.hi));
        }
        report.models.push_back(label);
        report.probabilities.push_back(std::move(row));
    }
    return report;
}

InferReport run_infer(const Graph& data, const InferConfig& config) {
    if (config.features.empty()) fail(ErrorCode::InvalidInput, "at least one feature is required");
    InferReport report;
    report.observed = observe(data, config.features);
    report.posterior = hypothesis_posterior(expand_grid(config.model), report.observed, config.samples,
                                            config.seed, config.threads, config.pseudo_count);
    report.n_samples = config.samples;
    report.master_seed = config.seed;
    return report;
}

StudyResult run_study(const StudyConfig& config) {
    if (config.rows.empty()) fail(ErrorCode::InvalidInput, "study has no rows");
    if (config.losses.empty()) fail(ErrorCode::InvalidInput, "study has no loss functions");

    // Joint hypothesis grid with a flat prior over all grid points.
    std::vector<Hypothesis> hypotheses;
    std::vector<std::string> hypothesis_grid;
    for (const auto& g : config.grids)
        for (auto& h : expand_grid(g.model)) {
            hypotheses.push_back(std::move(h));
            hypothesis_grid.push_back(g.name);
        }
    for (auto& h : hypotheses) h.prior_weight = 1.0 / static_cast<double>(hypotheses.size());
    for (const auto& w : config.windows) {
        bool known = std::any_of(config.grids.begin(), config.grids.end(),
                                 [&](const StudyGrid& g) { return g.name == w.grid; });
        if (!known) fail(ErrorCode::InvalidSpec, "window '" + w.label + "' names unknown grid '" + w.grid + "'");
        if (!(w.lo <= w.hi)) fail(ErrorCode::InvalidSpec, "window '" + w.label + "' has lo > hi");
    }

    std::vector<FeatureKind> kinds;
    for (const auto& row : config.rows)
        for (const auto& k : row.features)
            if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    auto kind_index = [&](const FeatureKind& k) {
        return static_cast<std::size_t>(std::distance(kinds.begin(), std::find(kinds.begin(), kinds.end(), k)));
    };

    std::vector<std::vector<FeatureSamples>> grid_samples;
    for (const auto& h : hypotheses)
        grid_samples.push_back(
            simulate_features(h.spec, kinds, config.samples, config.seed, config.threads, kSharedStream));

    StudyResult result;
    for (const auto& w : config.windows) result.window_labels.push_back(w.label);

    for (std::size_t r = 0; r < config.rows.size(); ++r) {
        const auto& row = config.rows[r];
        Rng data_rng(derive_seed(config.seed, kDataStreamBase + r, 0));
        Graph data = sample_graph(row.data, data_rng);
        const auto observed = observe(data, row.features);

        std::vector<std::vector<FeatureSamples>> row_samples;
        for (const auto& per_hypothesis : grid_samples) {
            std::vector<FeatureSamples> chosen;
            for (const auto& k : row.features) chosen.push_back(per_hypothesis[kind_index(k)]);
            row_samples.push_back(std::move(chosen));
        }
        auto posterior = posterior_over_hypotheses(hypotheses, row_samples, observed, config.pseudo_count);
        std::vector<double> windows;
        for (const auto& w : config.windows) {
            double mass = 0.0;
            for (std::size_t j = 0; j < hypotheses.size(); ++j)
                if (hypothesis_grid[j] == w.grid && hypotheses[j].value >= w.lo && hypotheses[j].value <= w.hi)
                    mass += posterior.posterior[j];
            windows.push_back(mass);
        }

        auto s1 = simulate_features(row.model_1, row.features, config.samples, config.seed,
                                    config.threads, kSharedStream, row.model_1.label);
        auto s2 = simulate_features(row.model_2, row.features, config.samples, config.seed,
                                    config.threads, kSharedStream, row.model_2.label);
        for (const auto& loss : config.losses) {
            StudyResultRow out;
            out.real_param = row.real_param;
            out.loss = loss;
            out.window_probabilities = windows;
            out.features = row.features;
            std::vector<std::pair<double, double>> pairs;
            for (std::size_t f = 0; f < row.features.size(); ++f) {
                out.el_1.push_back(expected_loss(s1[f], observed[f].value, loss));
                out.el_2.push_back(expected_loss(s2[f], observed[f].value, loss));
                pairs.emplace_back(out.el_1.back(), out.el_2.back());
            }
            try {
                out.loss_ratio = combined_loss_ratio(pairs);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DegenerateRatio) throw;
                out.loss_ratio = std::numeric_limits<double>::quiet_NaN();
                out.degenerate = true;
            }
            result.rows.push_back(std::move(out));
        }
    }
    return result;
}

std::string study_csv(const StudyResult& result) {
    std::ostringstream out;
    out << "real_param,loss,loss_ratio";
    for (const auto& w : result.window_labels) out << ',' << csv_escape(w);
    out << ",features,status\n";
    for (const auto& r : result.rows) {
        out << csv_escape(r.real_param) << ',' << loss_token(r.loss.kind) << ','
            << format_number(r.loss_ratio);
        for (double p : r.window_probabilities) out << ',' << format_number(p);
        std::string features;
        for (const auto& f : r.features) features += (features.empty() ? "" : "+") + feature_label(f);
        out << ',' << csv_escape(features) << ',' << (r.degenerate ? "degenerate_ratio" : "ok") << '\n';
    }
    return out.str();
}

}  // namespace netsel
