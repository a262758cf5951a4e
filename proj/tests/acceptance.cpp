// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "netsel/error.hpp"
#include "netsel/features.hpp"
#include "netsel/generators.hpp"
#include "netsel/inference.hpp"
#include "netsel/workflows.hpp"
#include "oracles.hpp"

using namespace netsel;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s -- %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelSpec powerlaw(ParamPrior alpha, std::string label = "") {
    return ModelSpec{200, PowerLawModel{std::move(alpha), 1}, std::move(label)};
}
ModelSpec sbm(ParamPrior k, std::string label = "") {
    return ModelSpec{200, SbmModel{std::move(k), EqualBlocks{}, std::nullopt, PointPrior{0.3}, PointPrior{0.03}},
                     std::move(label)};
}

// Two-row study: power-law data at
// alpha = 3.2 judged on the power-law exponent, SBM data with K = 10 judged
// on the block count, joint grid over alpha and K, N = 100.
StudyConfig study(std::uint64_t seed) {
    StudyConfig c;
    c.samples = 100;
    c.seed = seed;
    c.losses = {Loss{Loss::Kind::Quadratic}};
    c.grids = {{"alpha", powerlaw(GridPrior{{2.9, 3.0, 3.1, 3.3, 3.5}, {0.2, 0.2, 0.2, 0.2, 0.2}})},
               {"K", sbm(GridPrior{{8, 9, 10, 12}, {0.25, 0.25, 0.25, 0.25}})}};
    c.windows = {{"alpha in [2.9,3.1]", "alpha", 2.9, 3.1}, {"K=9", "K", 9, 9}};
    c.rows = {{"alpha=3.2", powerlaw(PointPrior{3.2}), {FeatureKind{FeatureKind::Id::PowerLawExponent}},
               sbm(PointPrior{9}, "sbm K=9"), powerlaw(UniformPrior{2.9, 3.1}, "powerlaw [2.9,3.1]")},
              {"K=10", sbm(PointPrior{10}), {FeatureKind{FeatureKind::Id::BlockCount}},
               powerlaw(UniformPrior{2.9, 3.1}, "powerlaw [2.9,3.1]"), sbm(PointPrior{9}, "sbm K=9")}};
    return c;
}

struct StudyTally {
    int alpha_dominates = 0;  // criterion 1
    int k9_beats_alpha = 0;   // criterion 2
    int loss_ratio_big = 0;   // criterion 3
    double seconds = 0;
    std::vector<double> ratios;
};

const StudyTally& study_tally() {
    static StudyTally t = [] {
        StudyTally t;
        auto start = std::chrono::steady_clock::now();
        for (std::uint64_t r = 0; r < 100; ++r) {
            auto res = run_study(study(7000 + r));
            const auto& pl = res.rows[0];
            const auto& sb = res.rows[1];
            t.alpha_dominates += pl.window_probabilities[0] >= 10 * pl.window_probabilities[1];
            t.k9_beats_alpha += sb.window_probabilities[1] > sb.window_probabilities[0];
            t.loss_ratio_big += pl.loss_ratio > 10;
            t.ratios.push_back(pl.loss_ratio);
        }
        t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return t;
    }();
    return t;
}

FeatureSamples edge_counts(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
    FeatureSamples s{FeatureKind{FeatureKind::Id::TriangleCount}, {}, spec.label};
    for (const auto& g : prior_predictive(spec, n, seed))
        s.values.push_back(FeatureValue::discrete(static_cast<std::int64_t>(g.edge_count())));
    return s;
}

std::string run_cli(const std::string& args) {
    std::string cmd = "'" NETSEL_CLI "' " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + cmd);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw std::runtime_error("'" + cmd + "' exited with status " + std::to_string(WEXITSTATUS(status)));
    return out;
}

}  // namespace

int main() {
    report(1, "power-law data: P(alpha in [2.9,3.1]|D) >= 10 P(K=9|D) in >= 90/100 replications", [] {
        const auto& t = study_tally();
        return Outcome{t.alpha_dominates >= 90,
                       fmt("%d/100 (study of 100 replications took %.0fs)", t.alpha_dominates, t.seconds)};
    });

    report(2, "SBM data: P(K=9|D) > P(alpha in [2.9,3.1]|D) in >= 90/100 replications", [] {
        const auto& t = study_tally();
        return Outcome{t.k9_beats_alpha >= 90, fmt("%d/100", t.k9_beats_alpha)};
    });

    report(3, "quadratic loss ratio (SBM K=9 / power law) > 10 in >= 95/100 replications", [] {
        const auto& t = study_tally();
        auto sorted = t.ratios;
        std::sort(sorted.begin(), sorted.end());
        return Outcome{t.loss_ratio_big >= 95,
                       fmt("%d/100, median ratio %.1f, minimum %.1f", t.loss_ratio_big, sorted[50], sorted[0])};
    });

    report(4, "edge-count Bayes factor ER(0.5) vs ER(0.9) at n=3 within 0.05 of exact enumeration", [] {
        // exact: sum over all 8 graphs on 3 nodes of P(G) [edges(G) = 3]
        double e1 = 0, e2 = 0;
        for (std::uint64_t m = 0; m < 8; ++m) {
            auto g = oracle::graph_from_mask(3, m);
            if (g.edge_count() != 3) continue;
            e1 += std::pow(0.5, 3.0);
            e2 += std::pow(0.9, 3.0);
        }
        const double exact = e1 / e2;
        auto s1 = edge_counts(ModelSpec{3, ErdosRenyiModel{PointPrior{0.5}}, "p=0.5"}, 10000, 4);
        auto s2 = edge_counts(ModelSpec{3, ErdosRenyiModel{PointPrior{0.9}}, "p=0.9"}, 10000, 4);
        auto obs = FeatureValue::discrete(3);
        double bf = bayes_factor(evidence(estimate_density(s1), obs), evidence(estimate_density(s2), obs));
        return Outcome{std::abs(bf - exact) <= 0.05, fmt("Monte Carlo %.4f vs exact %.4f", bf, exact)};
    });

    report(5, "log-linear sampler: edge frequency 0.75 +/- 0.02 and triangle model TV < 0.05", [] {
        LogLinearModel edges{1.0, {{std::log(3.0), ConcordanceFunction::edge_count()}}, std::nullopt, std::nullopt};
        Rng rng(5);
        auto graphs = mh_loglinear_sample(5, edges, 10000, default_chain_settings(5), rng);
        double freq = 0;
        for (const auto& g : graphs) freq += g.edge_count() / 10.0;
        freq /= graphs.size();

        LogLinearModel tri{1.0, {{1.0, ConcordanceFunction::triangle_count()}}, std::nullopt, std::nullopt};
        auto exact = oracle::exponential_family(4, 1.0, [](const Graph& g) { return double(oracle::triangles(g)); });
        Rng rng2(6);
        auto tg = mh_loglinear_sample(4, tri, 100000, default_chain_settings(4), rng2);
        std::vector<double> hist(exact.size(), 0.0);
        for (const auto& g : tg) hist[oracle::mask_of(g)] += 1.0 / tg.size();
        double tv = oracle::total_variation(hist, exact);
        return Outcome{std::abs(freq - 0.75) <= 0.02 && tv < 0.05,
                       fmt("edge frequency %.4f, triangle-model TV %.4f", freq, tv)};
    });

    report(6, "feature extractors agree with brute-force oracles; planted K=4 recovered in >= 95/100", [] {
        std::mt19937_64 gen(6);
        int tri_ok = 0, diam_ok = 0, regular_ok = 0, regular_total = 0, planted = 0;
        for (int i = 0; i < 200; ++i) {
            std::size_t n = 1 + gen() % 7;
            auto g = oracle::random_graph(n, 0.5, gen);
            tri_ok += count_triangles(g) == oracle::triangles(g);
        }
        for (int i = 0; i < 100; ++i) {
            std::size_t n = 2 + gen() % 49;
            auto g = oracle::random_graph(n, 2.5 / n, gen);
            diam_ok += diameter(g) == oracle::diameter(g);
        }
        // circulant graphs C_n(1..k) are 2k-regular; also the empty graph
        for (std::size_t n = 3; n <= 30; ++n) {
            for (std::size_t k = 0; 2 * k < n; ++k) {
                std::vector<Edge> e;
                for (NodeId v = 0; v < n; ++v)
                    for (std::size_t j = 1; j <= k; ++j) {
                        NodeId w = static_cast<NodeId>((v + j) % n);
                        e.emplace_back(std::min(v, w), std::max(v, w));
                    }
                ++regular_total;
                regular_ok += degree_entropy(build_graph(n, e)) == 0.0;
            }
        }
        auto blocks = equal_blocks(200, 4);
        for (std::uint64_t s = 0; s < 100; ++s) {
            Rng rng(derive_seed(60, 0, s));
            planted += estimate_block_count(generate_sbm(200, 4, blocks, planted_edge_probs(4, 0.5, 0.01), rng), 8) == 4;
        }
        bool pass = tri_ok == 200 && diam_ok == 100 && regular_ok == regular_total && planted >= 95;
        return Outcome{pass, fmt("triangles %d/200, diameter %d/100, regular entropy %d/%d, planted K=4 %d/100",
                                 tri_ok, diam_ok, regular_ok, regular_total, planted)};
    });

    report(7, "statistical invariants (KDE mass, discrete positivity, BF(M,M), ratio scaling, consensus)", [] {
        std::vector<std::string> broken;
        // KDE integrates to one
        std::mt19937_64 gen(7);
        std::lognormal_distribution<double> ln(0.0, 0.5);
        FeatureSamples cs{FeatureKind{FeatureKind::Id::DegreeEntropy}, {}, "x"};
        for (int i = 0; i < 300; ++i) cs.values.push_back(FeatureValue::continuous(ln(gen)));
        auto kde = estimate_density(cs);
        const double h = std::get<Kde>(kde.estimate).bandwidth;
        double lo = 1e300, hi = -1e300;
        for (const auto& v : cs.values) lo = std::min(lo, v.as_double()), hi = std::max(hi, v.as_double());
        lo -= 6 * h;
        hi += 6 * h;
        const int steps = 40000;
        double mass = 0;
        for (int i = 0; i <= steps; ++i)
            mass += (i == 0 || i == steps ? 0.5 : 1.0) * evidence(kde, FeatureValue::continuous(lo + (hi - lo) * i / steps));
        mass *= (hi - lo) / steps;
        if (std::abs(mass - 1) > 1e-3) broken.push_back(fmt("KDE mass %.6f", mass));

        // discrete evidence strictly positive, seen or unseen
        FeatureSamples ds{FeatureKind{FeatureKind::Id::TriangleCount}, {}, "x"};
        for (int i = 0; i < 100; ++i) ds.values.push_back(FeatureValue::discrete(static_cast<std::int64_t>(gen() % 5)));
        auto pmf = estimate_density(ds);
        for (std::int64_t v = -3; v < 12; ++v)
            if (!(evidence(pmf, FeatureValue::discrete(v)) > 0)) broken.push_back("discrete evidence not positive");

        // BF(M, M) under the shared stream
        ModelSpec m{120, PowerLawModel{UniformPrior{2.5, 3.5}, 1}, ""};
        Rng data_rng(8);
        auto data = sample_graph(m, data_rng);
        CompareConfig cc;
        cc.model_1 = m;
        cc.model_2 = m;
        cc.features = {FeatureKind{FeatureKind::Id::PowerLawExponent}, FeatureKind{FeatureKind::Id::TriangleCount}};
        auto rep = run_compare(data, cc);
        for (const auto& f : rep.features)
            if (f.bayes_factor != 1.0) broken.push_back(fmt("BF(M,M) = %.17g", f.bayes_factor));

        // per-feature common rescaling leaves the combined ratio unchanged
        std::uniform_real_distribution<double> u(0.01, 100.0);
        double worst = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<std::pair<double, double>> pairs(1 + gen() % 5);
            for (auto& p : pairs) p = {u(gen), u(gen)};
            double base = combined_loss_ratio(pairs);
            auto scaled = pairs;
            for (auto& p : scaled) {
                double c = u(gen);
                p = {c * p.first, c * p.second};
            }
            worst = std::max(worst, std::abs(combined_loss_ratio(scaled) - base) / base);
        }
        if (worst > 1e-12) broken.push_back(fmt("ratio rescaling error %.3g", worst));

        // consensus identity and equal-weight merges
        std::vector<double> x(50), y(50);
        std::normal_distribution<double> nd;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = nd(gen), y[i] = x[i] + 3.0;
        double err = 0;
        auto id = consensus_merge({x});
        auto same = consensus_merge({x, x, x, x});
        auto mean = consensus_merge({x, y});
        for (std::size_t i = 0; i < x.size(); ++i) {
            err = std::max(err, std::abs(id[i] - x[i]));
            err = std::max(err, std::abs(same[i] - x[i]));
            err = std::max(err, std::abs(mean[i] - (x[i] + y[i]) / 2));
        }
        if (err > 1e-12) broken.push_back(fmt("consensus error %.3g", err));

        std::string detail = fmt("KDE mass %.6f, rescaling error %.2g, consensus error %.2g", mass, worst, err);
        for (const auto& b : broken) detail += "; " + b;
        return Outcome{broken.empty(), detail};
    });

    report(8, "compare and simulate reports byte-identical across --threads 1, 4, 8", [] {
        const std::string cfg = NETSEL_CONFIG_DIR;
        const std::string dir = std::string(NETSEL_WORK_DIR) + "/acceptance_data";
        run_cli("generate --model '" + cfg + "/powerlaw_alpha32.json' -N 1 --seed 11 --out '" + dir + "'");
        std::string compare = "compare --model '" + cfg + "/sbm_k9.json' --model2 '" + cfg +
                              "/powerlaw_window.json' --data '" + dir +
                              "/graph_0000.tsv' --features power_law_exponent,degree_entropy,triangle_count --seed 3";
        std::string simulate = "simulate --config '" + cfg + "/study.json' --seed 3";
        int same = 0;
        std::string c1 = run_cli(compare + " --threads 1"), s1 = run_cli(simulate + " --threads 1");
        for (const char* t : {"4", "8"}) {
            same += run_cli(compare + " --threads " + t) == c1;
            same += run_cli(simulate + " --threads " + t) == s1;
        }
        return Outcome{same == 4 && !c1.empty() && !s1.empty(),
                       fmt("%d/4 reruns identical to the single-thread output", same)};
    });

    std::printf("%d of 8 criteria failed\n", failures);
    return failures;
}
