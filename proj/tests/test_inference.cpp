#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "netsel/error.hpp"
#include "netsel/generators.hpp"
#include "netsel/inference.hpp"
#include "oracles.hpp"

using namespace netsel;

namespace {

const FeatureKind kEdges{FeatureKind::Id::TriangleCount};  // any discrete kind works as a tag
const FeatureKind kEntropy{FeatureKind::Id::DegreeEntropy};

FeatureSamples discrete(std::vector<std::int64_t> xs) {
    FeatureSamples s{kEdges, {}, "m"};
    for (auto x : xs) s.values.push_back(FeatureValue::discrete(x));
    return s;
}

FeatureSamples continuous(std::vector<double> xs) {
    FeatureSamples s{kEntropy, {}, "m"};
    for (auto x : xs) s.values.push_back(FeatureValue::continuous(x));
    return s;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

ModelSpec er(std::size_t n, ParamPrior p) { return ModelSpec{n, ErdosRenyiModel{std::move(p)}, ""}; }

// Edge counts of ER(n, p) draws as discrete samples.
FeatureSamples er_edge_counts(std::size_t n, double p, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
    FeatureSamples s{kEdges, {}, "er"};
    for (const auto& g : prior_predictive(er(n, PointPrior{p}), count, seed, 1, stream))
        s.values.push_back(FeatureValue::discrete(static_cast<std::int64_t>(g.edge_count())));
    return s;
}

}  // namespace

TEST_CASE("estimate_density") {
    auto d = estimate_density(discrete({1, 1, 2}));
    REQUIRE_FALSE(d.is_kde());
    const auto& pmf = std::get<DiscretePmf>(d.estimate);
    CHECK(pmf.total == 3);
    CHECK(pmf.counts.at(1) == 2);
    CHECK(pmf.counts.at(2) == 1);

    auto point = estimate_density(continuous({0.0}));
    CHECK_FALSE(point.is_kde());
    CHECK_FALSE(point.discrete_values);
    CHECK(evidence(point, FeatureValue::continuous(0.0)) > evidence(point, FeatureValue::continuous(1.0)));

    auto flat = estimate_density(continuous({2.5, 2.5, 2.5}));
    CHECK_FALSE(flat.is_kde());

    CHECK(code_of([] { estimate_density(FeatureSamples{kEdges, {}, "m"}); }) == ErrorCode::InvalidInput);
    auto mixed = discrete({1});
    mixed.values.push_back(FeatureValue::continuous(1.0));
    CHECK(code_of([&] { estimate_density(mixed); }) == ErrorCode::InvalidInput);
}

TEST_CASE("KDE of a standard normal sample") {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> normal;
    std::vector<double> xs(10000);
    for (auto& x : xs) x = normal(gen);
    auto d = estimate_density(continuous(xs));
    REQUIRE(d.is_kde());
    CHECK(std::abs(evidence(d, FeatureValue::continuous(0.0)) - 1 / std::sqrt(2 * M_PI)) < 0.02);
}

TEST_CASE("silverman_bandwidth") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    // sd = sqrt(2.5), IQR = 2 -> min(1.5811, 1.4925) = 1.4925
    CHECK(silverman_bandwidth(xs) == doctest::Approx(0.9 * (2.0 / 1.34) * std::pow(5.0, -0.2)));
    std::vector<double> spiky{0, 0, 0, 0, 0, 0, 0, 10};  // IQR 0 falls back to sd
    double mean = 1.25, ss = 7 * mean * mean + (10 - mean) * (10 - mean);
    CHECK(silverman_bandwidth(spiky) == doctest::Approx(0.9 * std::sqrt(ss / 7) * std::pow(8.0, -0.2)));
    std::vector<double> same{3, 3, 3};
    CHECK(silverman_bandwidth(same) == 0.0);
}

TEST_CASE("evidence") {
    auto d = estimate_density(discrete({1, 1, 2}));
    CHECK(evidence(d, FeatureValue::discrete(1)) == doctest::Approx(2.5 / 4.0));
    CHECK(evidence(d, FeatureValue::discrete(3)) == doctest::Approx(0.5 / 4.5));
    CHECK(code_of([&] { evidence(d, FeatureValue::continuous(1.0)); }) == ErrorCode::InvalidInput);

    DensityEstimate single{Kde{{0.0}, 0.7}, false};
    CHECK(evidence(single, FeatureValue::continuous(0.0)) == doctest::Approx(1 / (0.7 * std::sqrt(2 * M_PI))));

    auto kde = estimate_density(continuous({0.1, 0.4, 0.45, 0.9, 1.3}));
    for (double x : {-1.0, 0.3, 0.8, 2.0})
        CHECK(log_evidence(kde, FeatureValue::continuous(x)) ==
              doctest::Approx(std::log(evidence(kde, FeatureValue::continuous(x)))));
    // far tail: the direct density underflows but the log stays finite
    CHECK(evidence(kde, FeatureValue::continuous(1e4)) == 0.0);
    CHECK(std::isfinite(log_evidence(kde, FeatureValue::continuous(1e4))));
}

TEST_CASE("discrete evidence is a proper pmf over its support") {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::int64_t> xs(1 + gen() % 40);
        for (auto& x : xs) x = static_cast<std::int64_t>(gen() % 6);
        auto d = estimate_density(discrete(xs));
        double total = 0;
        const auto& counts = std::get<DiscretePmf>(d.estimate).counts;
        for (const auto& [value, count] : counts) {
            double e = evidence(d, FeatureValue::discrete(static_cast<std::int64_t>(value)));
            CHECK(e > 0.0);
            // a single-valued ensemble puts all its mass on that value
            if (counts.size() > 1) CHECK(e < 1.0);
            else CHECK(e == 1.0);
            total += e;
        }
        CHECK(total <= 1.0 + 1e-12);
        double unseen = evidence(d, FeatureValue::discrete(99));
        CHECK(unseen > 0.0);
        CHECK(unseen < 1.0);
    }
}

TEST_CASE("KDE evidence integrates to one") {
    std::mt19937_64 gen(3);
    std::gamma_distribution<double> g(2.0, 1.0);
    std::vector<double> xs(200);
    for (auto& x : xs) x = g(gen);
    auto d = estimate_density(continuous(xs));
    const double h = std::get<Kde>(d.estimate).bandwidth;
    const double lo = *std::min_element(xs.begin(), xs.end()) - 6 * h;
    const double hi = *std::max_element(xs.begin(), xs.end()) + 6 * h;
    const int steps = 20000;
    const double dx = (hi - lo) / steps;
    double integral = 0;
    for (int i = 0; i <= steps; ++i) {
        double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        integral += w * evidence(d, FeatureValue::continuous(lo + i * dx));
    }
    CHECK(std::abs(integral * dx - 1.0) < 1e-3);
}

TEST_CASE("bayes_factor") {
    CHECK(bayes_factor(0.2, 0.4) == 0.5);
    CHECK(std::isinf(bayes_factor(0.3, 0.0)));
    CHECK(code_of([] { bayes_factor(0.0, 0.0); }) == ErrorCode::UndefinedBayesFactor);
    CHECK(bayes_factor_from_logs(std::log(0.3), std::log(0.6)) == doctest::Approx(0.5));
    CHECK(code_of([] { bayes_factor_from_logs(-INFINITY, -INFINITY); }) == ErrorCode::UndefinedBayesFactor);
}

TEST_CASE("Bayes factor of a model against itself") {
    auto a = er_edge_counts(50, 0.3, 1000, 9, 0);
    auto b = er_edge_counts(50, 0.3, 1000, 9, 0);
    auto obs = FeatureValue::discrete(370);
    CHECK(bayes_factor(evidence(estimate_density(a), obs), evidence(estimate_density(b), obs)) == 1.0);

    // independent streams: BF near 1 within 3 Monte Carlo standard errors.
    // Use the continuous view so the KDE smooths over the sparse support.
    auto as_cont = [](const FeatureSamples& s) {
        FeatureSamples c{kEntropy, {}, s.model_id};
        for (const auto& v : s.values) c.values.push_back(FeatureValue::continuous(v.as_double()));
        return c;
    };
    auto c = er_edge_counts(50, 0.3, 1000, 9, 1);
    auto x = FeatureValue::continuous(367.5);
    double e1 = evidence(estimate_density(as_cont(a)), x);
    double e2 = evidence(estimate_density(as_cont(c)), x);
    // relative MC error of a KDE evidence at the mode ~ sqrt(1 / (N h f)); bound it generously
    const double h = std::get<Kde>(estimate_density(as_cont(a)).estimate).bandwidth;
    const double rel_se = std::sqrt(1.0 / (1000 * h * e1 * 2 * std::sqrt(M_PI)));
    CHECK(std::abs(std::log(e1 / e2)) < 3 * std::sqrt(2.0) * rel_se);
}

TEST_CASE("Monte Carlo evidence matches exact enumeration for small ER graphs") {
    for (std::size_t n : {3u, 4u}) {
        const std::size_t pairs = n * (n - 1) / 2;
        const std::size_t graphs = std::size_t{1} << pairs;
        for (double p : {0.3, 0.5, 0.9}) {
            // exact distribution of edge and triangle counts
            std::map<std::size_t, double> edges, tris;
            for (std::size_t m = 0; m < graphs; ++m) {
                auto g = oracle::graph_from_mask(n, m);
                double pr = std::pow(p, double(g.edge_count())) * std::pow(1 - p, double(pairs - g.edge_count()));
                edges[g.edge_count()] += pr;
                tris[oracle::triangles(g)] += pr;
            }
            const std::size_t N = 4000;
            auto draws = prior_predictive(er(n, PointPrior{p}), N, 50 + n);
            FeatureSamples se{kEdges, {}, "e"}, st{kEdges, {}, "t"};
            for (const auto& g : draws) {
                se.values.push_back(FeatureValue::discrete(static_cast<std::int64_t>(g.edge_count())));
                st.values.push_back(FeatureValue::discrete(static_cast<std::int64_t>(oracle::triangles(g))));
            }
            auto de = estimate_density(se, 1e-9), dt = estimate_density(st, 1e-9);
            for (const auto& [k, pr] : edges) {
                double sd = std::sqrt(pr * (1 - pr) / N);
                CHECK(std::abs(evidence(de, FeatureValue::discrete(std::int64_t(k))) - pr) <= 3 * sd + 1e-9);
            }
            for (const auto& [k, pr] : tris) {
                double sd = std::sqrt(pr * (1 - pr) / N);
                CHECK(std::abs(evidence(dt, FeatureValue::discrete(std::int64_t(k))) - pr) <= 3 * sd + 1e-9);
            }
        }
    }
}

TEST_CASE("posterior_model_probs") {
    auto post = [](std::vector<double> e, std::vector<double> p) { return posterior_model_probs(e, p); };
    auto a = post({0.2, 0.2}, {0.5, 0.5});
    CHECK(a[0] == doctest::Approx(0.5));
    auto b = post({0.1, 0.9}, {0.9, 0.1});
    CHECK(b[0] == doctest::Approx(0.5));
    CHECK(b[1] == doctest::Approx(0.5));
    auto c = post({0.3, 0.0}, {0.5, 0.5});
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 0.0);
    CHECK(code_of([&] { post({0.0, 0.0}, {0.5, 0.5}); }) == ErrorCode::UndefinedPosterior);

    std::vector<double> logs{std::log(0.1), std::log(0.9)}, priors{0.9, 0.1};
    auto d = posterior_from_log_evidence(logs, priors);
    CHECK(d[0] == doctest::Approx(0.5));
    // log space survives evidences far below the double range
    std::vector<double> tiny{-2000.0, -2001.0}, flat{1.0, 1.0};
    auto e = posterior_from_log_evidence(tiny, flat);
    CHECK(e[0] == doctest::Approx(1 / (1 + std::exp(-1.0))));
}

TEST_CASE("expected_loss") {
    auto s = discrete({1, 2, 3});
    auto two = FeatureValue::discrete(2);
    CHECK(expected_loss(s, two, Loss{Loss::Kind::Quadratic}) == doctest::Approx(2.0 / 3));
    CHECK(expected_loss(s, two, Loss{Loss::Kind::Absolute}) == doctest::Approx(2.0 / 3));
    CHECK(expected_loss(s, two, Loss{Loss::Kind::ZeroOne}) == doctest::Approx(2.0 / 3));
    for (auto k : {Loss::Kind::Quadratic, Loss::Kind::Absolute, Loss::Kind::ZeroOne})
        CHECK(expected_loss(discrete({4, 4, 4}), FeatureValue::discrete(4), Loss{k}) == 0.0);
    auto c = continuous({1.0, 1.05, 2.0});
    CHECK(expected_loss(c, FeatureValue::continuous(1.0), Loss{Loss::Kind::ZeroOne, 0.1}) == doctest::Approx(1.0 / 3));
    CHECK(code_of([&] { expected_loss(s, FeatureValue::continuous(2.0), Loss{}); }) == ErrorCode::InvalidInput);
    CHECK(parse_loss("absolute").kind == Loss::Kind::Absolute);
    CHECK(loss_token(Loss::Kind::ZeroOne) == "zero_one");
    CHECK(code_of([] { parse_loss("hinge"); }) == ErrorCode::InvalidInput);
}

TEST_CASE("combined_loss_ratio") {
    using P = std::pair<double, double>;
    std::vector<P> one{{3.0, 4.0}};
    CHECK(combined_loss_ratio(one) == 0.75);
    std::vector<P> three{{2, 1}, {8, 2}, {12, 2}};
    CHECK(combined_loss_ratio(three) == doctest::Approx(4.0));
    std::vector<P> matched{{0.3, 0.3}, {7, 7}};
    CHECK(combined_loss_ratio(matched) == 1.0);
    std::vector<P> both_zero{{0, 0}, {2, 1}};
    CHECK(combined_loss_ratio(both_zero) == 1.5);
    std::vector<P> zero{{1, 1}, {1, 0}};
    CHECK(code_of([&] { combined_loss_ratio(zero); }) == ErrorCode::DegenerateRatio);
}

TEST_CASE("combined_loss_ratio is invariant under per-feature rescaling") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> pairs(1 + gen() % 4);
        for (auto& p : pairs) p = {u(gen), u(gen)};
        double base = combined_loss_ratio(pairs);
        auto scaled = pairs;
        std::size_t j = gen() % pairs.size();
        double c = std::ldexp(1.0, static_cast<int>(gen() % 40) - 20);  // powers of two scale exactly
        scaled[j] = {c * pairs[j].first, c * pairs[j].second};
        CHECK(std::abs(combined_loss_ratio(scaled) - base) <= 1e-12 * std::abs(base));
        double c2 = u(gen);
        scaled[j] = {c2 * pairs[j].first, c2 * pairs[j].second};
        CHECK(std::abs(combined_loss_ratio(scaled) - base) <= 1e-12 * std::abs(base));
    }
}

TEST_CASE("decide") {
    CHECK(decide(0.5, 1.0) == Decision::Model1);
    CHECK(decide(2.0, 1.0) == Decision::Model2);
    CHECK(decide(1.0, 1.0) == Decision::Indeterminate);
    CHECK(decide(1.0 + 1e-12, 1.0) == Decision::Indeterminate);
    CHECK(decision_token(Decision::Model1) == "model_1");

    // with the odds fixed, the decision flips from Model1 to Model2 exactly once
    for (double odds : {0.01, 1.0, 37.5}) {
        int flips = 0;
        Decision prev = Decision::Model1;
        for (int i = 0; i <= 2000; ++i) {
            double ratio = odds * std::pow(10.0, (i - 1000) / 250.0);
            Decision d = decide(ratio, odds);
            if (d == Decision::Indeterminate) continue;
            if (d != prev) ++flips;
            prev = d;
        }
        CHECK(flips == 1);
        CHECK(prev == Decision::Model2);
    }
}

TEST_CASE("range_probability") {
    auto s = continuous({2.95, 3.0, 3.05, 3.4});
    auto r = range_probability(s, 2.9, 3.1);
    CHECK(r.probability == 0.75);
    CHECK(r.inside == 3);
    CHECK(r.total == 4);
    CHECK(r.standard_error == doctest::Approx(std::sqrt(0.75 * 0.25 / 4)));
    CHECK(range_probability(s, 2.0, 4.0).probability == 1.0);
    CHECK(range_probability(s, 5.0, 6.0).probability == 0.0);
    CHECK(range_probability(s, -1e300, 1e300).probability == 1.0);
    CHECK(range_probability(discrete({9, 9, 10}), 9, 9).probability == doctest::Approx(2.0 / 3));
    CHECK(code_of([&] { range_probability(s, 3.0, 2.0); }) == ErrorCode::InvalidInput);
}

TEST_CASE("param_posterior") {
    ObservedFeature obs{kEdges, FeatureValue::discrete(4)};
    obs.kind = FeatureKind{FeatureKind::Id::TriangleCount};
    auto single = param_posterior(obs, er(6, GridPrior{{0.5}, {1.0}}), 50, 1);
    REQUIRE(single.posterior.size() == 1);
    CHECK(single.posterior[0] == 1.0);

    // duplicated grid value: identical specs on a shared stream give identical evidence
    auto twin = param_posterior(obs, er(6, GridPrior{{0.5, 0.5}, {0.5, 0.5}}), 50, 1);
    CHECK(twin.posterior[0] == 0.5);
    CHECK(twin.posterior[1] == 0.5);

    auto spread = param_posterior(obs, er(8, GridPrior{{0.1, 0.5, 0.9}, {0.2, 0.3, 0.5}}), 200, 2);
    CHECK(std::accumulate(spread.posterior.begin(), spread.posterior.end(), 0.0) == doctest::Approx(1.0));
    CHECK(spread.posterior[1] > spread.posterior[0]);
    CHECK(spread.window("p", 0.4, 1.0) == doctest::Approx(spread.posterior[1] + spread.posterior[2]));
}

TEST_CASE("hypothesis posterior from a density that vanishes everywhere") {
    std::vector<Hypothesis> hyps{{"x", 1, 0.5, er(4, PointPrior{0.5})}, {"x", 2, 0.5, er(4, PointPrior{0.5})}};
    std::vector<std::vector<FeatureSamples>> samples{{continuous({0.0, 0.1, 0.2})}, {continuous({0.0, 0.1, 0.3})}};
    std::vector<ObservedFeature> obs{{kEntropy, FeatureValue::continuous(1e6)}};
    // evidences underflow to zero but log evidences still order the hypotheses
    auto post = posterior_over_hypotheses(hyps, samples, obs);
    CHECK(std::accumulate(post.posterior.begin(), post.posterior.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("shard_cells") {
    std::mt19937_64 gen(6);
    auto g = oracle::random_graph(25, 0.3, gen);
    auto shards = shard_cells(g, 10);
    REQUIRE(shards.size() == 3);
    CHECK(shards[0].node_count() == 10);
    CHECK(shards[1].node_count() == 10);
    CHECK(shards[2].node_count() == 5);
    // node v lands in shard v / 10 at local id v % 10
    for (auto [u, v] : g.edges())
        if (u / 10 == v / 10) CHECK(shards[u / 10].has_edge(u % 10, v % 10));
    std::size_t inside = 0;
    for (const auto& s : shards) inside += s.edge_count();
    std::size_t expected = 0;
    for (auto [u, v] : g.edges()) expected += u / 10 == v / 10;
    CHECK(inside == expected);

    auto whole = shard_cells(g, 25);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == g);
    CHECK(shard_cells(g, 100)[0] == g);
}

TEST_CASE("consensus_merge") {
    std::vector<double> x{1.0, 2.0, 4.0, 7.0};
    auto same = consensus_merge({x});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(same[i] - x[i]) <= 1e-12);

    auto twice = consensus_merge({x, x, x});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(twice[i] - x[i]) <= 1e-12 * std::abs(x[i]));

    // y is a shifted copy of x: equal variances, so the merge is the mean
    std::vector<double> y{11.0, 12.0, 14.0, 17.0};
    auto mean = consensus_merge({x, y});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(mean[i] - (x[i] + y[i]) / 2) <= 1e-12);

    // variances 1 and 4 give weights 1 and 1/4
    std::vector<double> a{-1.0, 1.0, -1.0, 1.0}, b{-2.0, 2.0, -2.0, 2.0};
    // sample variances: a -> 4/3, b -> 16/3; ratio 4 as required
    auto w = consensus_merge({a, b});
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(w[i] - (a[i] + 0.25 * b[i]) / 1.25) <= 1e-12);

    // a zero-variance shard dominates through the capped weight
    std::vector<double> flat{5.0, 5.0, 5.0, 5.0};
    auto capped = consensus_merge({flat, x});
    for (double v : capped) CHECK(v == doctest::Approx(5.0).epsilon(1e-9));

    CHECK(code_of([] { consensus_merge({{1.0}}); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { consensus_merge({}); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { consensus_merge({{1.0, 2.0}, {1.0, 2.0, 3.0}}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("consensus_feature") {
    auto graphs = prior_predictive(er(40, PointPrior{0.3}), 6, 3);
    auto cf = consensus_feature(graphs, 10, FeatureKind{FeatureKind::Id::LinkDensity});
    CHECK(cf.shards_total == 4);
    CHECK(cf.shards_used == 4);
    CHECK(cf.merged.size() == 6);
    for (double v : cf.merged) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // single-node shards have no density and are dropped
    auto dropped = consensus_feature(graphs, 39, FeatureKind{FeatureKind::Id::LinkDensity});
    CHECK(dropped.shards_total == 2);
    CHECK(dropped.shards_used == 1);
}

TEST_CASE("simulate_features") {
    std::vector<FeatureKind> kinds{FeatureKind{FeatureKind::Id::TriangleCount}, FeatureKind{FeatureKind::Id::LinkDensity}};
    auto s = simulate_features(er(10, PointPrior{0.4}), kinds, 30, 4, 1, 0, "er");
    REQUIRE(s.size() == 2);
    CHECK(s[0].values.size() == 30);
    CHECK(s[0].model_id == "er");
    CHECK(s[0].values[0].is_discrete());
    CHECK_FALSE(s[1].values[0].is_discrete());
    auto graphs = prior_predictive(er(10, PointPrior{0.4}), 30, 4);
    for (std::size_t i = 0; i < 30; ++i)
        CHECK(s[0].values[i].as_integer() == static_cast<std::int64_t>(oracle::triangles(graphs[i])));
    for (unsigned t : {2u, 8u}) {
        auto p = simulate_features(er(10, PointPrior{0.4}), kinds, 30, 4, t, 0, "er");
        CHECK(p[0].values == s[0].values);
        CHECK(p[1].values == s[1].values);
    }

    // power-law exponent is undefined on empty graphs; those draws are dropped
    std::vector<FeatureKind> ple{FeatureKind{FeatureKind::Id::PowerLawExponent}};
    auto sparse = simulate_features(er(6, PointPrior{0.05}), ple, 200, 5);
    CHECK(sparse[0].values.size() < 200);
    CHECK(sparse[0].values.size() > 0);
    CHECK(code_of([&] { simulate_features(er(6, PointPrior{0.0}), ple, 10, 5); }) == ErrorCode::InvalidInput);
}
