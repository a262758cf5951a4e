#include "netsel/features.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "netsel/error.hpp"

namespace netsel {
namespace {

constexpr std::pair<FeatureKind::Id, std::string_view> kTokens[] = {
    {FeatureKind::Id::DegreeEntropy, "degree_entropy"},
    {FeatureKind::Id::PowerLawExponent, "power_law_exponent"},
    {FeatureKind::Id::BlockCount, "block_count"},
    {FeatureKind::Id::TriangleCount, "triangle_count"},
    {FeatureKind::Id::Diameter, "diameter"},
    {FeatureKind::Id::LinkDensity, "link_density"},
    {FeatureKind::Id::GlobalClustering, "global_clustering"},
};

}  // namespace

std::string_view feature_token(FeatureKind::Id id) {
    for (auto [k, tok] : kTokens)
        if (k == id) return tok;
    return "unknown";
}

std::string feature_label(const FeatureKind& kind) {
    std::string out(feature_token(kind.id));
    FeatureKind defaults{kind.id};
    if (kind.id == FeatureKind::Id::PowerLawExponent && kind.d_min != defaults.d_min)
        out += ":d_min=" + std::to_string(kind.d_min);
    if (kind.id == FeatureKind::Id::BlockCount && kind.k_max != defaults.k_max)
        out += ":k_max=" + std::to_string(kind.k_max);
    return out;
}

FeatureKind parse_feature_kind(std::string_view text) {
    auto colon = text.find(':');
    auto name = text.substr(0, colon);
    FeatureKind kind;
    bool found = false;
    for (auto [id, tok] : kTokens)
        if (tok == name) {
            kind.id = id;
            found = true;
        }
    if (!found) fail(ErrorCode::InvalidInput, "unknown feature '" + std::string(name) + "'");
    if (colon == std::string_view::npos) return kind;

    auto params = text.substr(colon + 1);
    while (!params.empty()) {
        auto comma = params.find(',');
        auto item = params.substr(0, comma);
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorCode::InvalidInput, "feature parameter must be key=value: " + std::string(item));
        auto key = item.substr(0, eq);
        auto val = item.substr(eq + 1);
        std::size_t x = 0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
        if (ec != std::errc{} || ptr != val.data() + val.size() || x < 1)
            fail(ErrorCode::InvalidInput, "feature parameter must be a positive integer: " +
                                              std::string(item));
        if (key == "d_min" && kind.id == FeatureKind::Id::PowerLawExponent) kind.d_min = x;
        else if (key == "k_max" && kind.id == FeatureKind::Id::BlockCount) kind.k_max = x;
        else fail(ErrorCode::InvalidInput, "parameter '" + std::string(key) + "' not valid for " +
                                               std::string(name));
        if (comma == std::string_view::npos) break;
        params.remove_prefix(comma + 1);
    }
    return kind;
}

FeatureValue extract_feature(const Graph& g, const FeatureKind& kind) {
    using Id = FeatureKind::Id;
    switch (kind.id) {
        case Id::DegreeEntropy:
            if (g.node_count() == 0) fail(ErrorCode::UndefinedFeature, "degree entropy of empty graph");
            return FeatureValue::continuous(degree_entropy(g));
        case Id::PowerLawExponent:
            return FeatureValue::continuous(fit_power_law_mle(g, kind.d_min));
        case Id::BlockCount:
            return FeatureValue::discrete(static_cast<std::int64_t>(estimate_block_count(g, kind.k_max)));
        case Id::TriangleCount:
            return FeatureValue::discrete(static_cast<std::int64_t>(count_triangles(g)));
        case Id::Diameter:
            if (g.node_count() == 0) fail(ErrorCode::UndefinedFeature, "diameter of empty graph");
            return FeatureValue::discrete(static_cast<std::int64_t>(diameter(g)));
        case Id::LinkDensity:
            return FeatureValue::continuous(density_and_clustering(g).link_density);
        case Id::GlobalClustering:
            return FeatureValue::continuous(density_and_clustering(g).global_clustering);
    }
    fail(ErrorCode::InvalidInput, "unsupported feature kind");
}

double degree_entropy(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0.0;
    std::map<std::size_t, std::size_t> counts;
    for (NodeId v = 0; v < n; ++v) ++counts[g.degree(v)];
    double h = 0.0;
    for (auto [deg, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(n);
        h -= p * std::log(p);
    }
    return h;
}

double fit_power_law_mle(std::span<const std::size_t> degrees, std::size_t d_min) {
    if (d_min < 1) fail(ErrorCode::InvalidInput, "d_min must be >= 1");
    const double shift = static_cast<double>(d_min) - 0.5;
    double sum_log = 0.0;
    std::size_t m = 0;
    for (auto d : degrees) {
        if (d < d_min) continue;
        sum_log += std::log(static_cast<double>(d) / shift);
        ++m;
    }
    if (m == 0)
        fail(ErrorCode::UndefinedFeature, "no degree >= d_min=" + std::to_string(d_min));
    return 1.0 + static_cast<double>(m) / sum_log;
}

double fit_power_law_mle(const Graph& g, std::size_t d_min) {
    auto degrees = degree_sequence(g);
    return fit_power_law_mle(degrees, d_min);
}

std::vector<double> normalized_adjacency_spectrum(const Graph& g) {
    // The matrix is block diagonal over connected components, so its spectrum
    // is the union of the per-component spectra.
    std::size_t ncomp = 0;
    auto label = connected_components(g, &ncomp);
    std::vector<std::vector<NodeId>> members(ncomp);
    for (NodeId v = 0; v < g.node_count(); ++v) members[label[v]].push_back(v);

    std::vector<double> spectrum;
    spectrum.reserve(g.node_count());
    std::vector<std::size_t> local(g.node_count());
    for (const auto& comp : members) {
        const auto s = comp.size();
        if (s == 1) {
            spectrum.push_back(0.0);
            continue;
        }
        if (s == 2) {
            spectrum.push_back(1.0);
            spectrum.push_back(-1.0);
            continue;
        }
        for (std::size_t i = 0; i < s; ++i) local[comp[i]] = i;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
        for (std::size_t i = 0; i < s; ++i) {
            NodeId u = comp[i];
            double du = static_cast<double>(g.degree(u));
            for (NodeId v : g.neighbors(u))
                m(i, local[v]) = 1.0 / std::sqrt(du * static_cast<double>(g.degree(v)));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
        const auto& ev = solver.eigenvalues();
        spectrum.insert(spectrum.end(), ev.data(), ev.data() + ev.size());
    }
    std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
    return spectrum;
}

std::size_t estimate_block_count(const Graph& g, std::size_t k_max) {
    const std::size_t n = g.node_count();
    if (n < 2) fail(ErrorCode::UndefinedFeature, "block count needs at least 2 nodes");
    if (k_max < 1) fail(ErrorCode::InvalidInput, "k_max must be >= 1");
    const std::size_t limit = std::min(k_max, n - 1);
    auto spectrum = normalized_adjacency_spectrum(g);

    constexpr double tie_tolerance = 1e-9;
    double best_gap = -INFINITY;
    for (std::size_t k = 1; k <= limit; ++k)
        best_gap = std::max(best_gap, spectrum[k - 1] - spectrum[k]);
    std::size_t best = 1;
    for (std::size_t k = 1; k <= limit; ++k)
        if (spectrum[k - 1] - spectrum[k] >= best_gap - tie_tolerance) best = k;
    return best;
}

std::size_t count_triangles(const Graph& g) {
    // Each triangle u < v < w is counted once from its lowest edge (u, v).
    std::size_t total = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto nu = g.neighbors(u);
        for (NodeId v : nu) {
            if (v <= u) continue;
            auto nv = g.neighbors(v);
            auto i = std::upper_bound(nu.begin(), nu.end(), v);
            auto j = std::upper_bound(nv.begin(), nv.end(), v);
            while (i != nu.end() && j != nv.end()) {
                if (*i < *j) ++i;
                else if (*j < *i) ++j;
                else {
                    ++total;
                    ++i;
                    ++j;
                }
            }
        }
    }
    return total;
}

std::size_t diameter(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0;
    std::size_t ncomp = 0;
    auto label = connected_components(g, &ncomp);
    std::vector<std::size_t> sizes(ncomp);
    for (auto l : label) ++sizes[l];
    // Labels follow the smallest member id, so max_element picks the
    // lowest-id component among equally large ones.
    auto largest = static_cast<std::size_t>(
        std::distance(sizes.begin(), std::max_element(sizes.begin(), sizes.end())));

    std::size_t best = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != largest) continue;
        for (const auto& d : shortest_path_distances(g, s))
            if (d) best = std::max<std::size_t>(best, *d);
    }
    return best;
}

DensityClustering density_and_clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n < 2) fail(ErrorCode::UndefinedFeature, "link density needs at least 2 nodes");
    DensityClustering out;
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    out.link_density = static_cast<double>(g.edge_count()) / pairs;
    double two_paths = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        double d = static_cast<double>(g.degree(v));
        two_paths += 0.5 * d * (d - 1.0);
    }
    if (two_paths > 0.0)
        out.global_clustering = 3.0 * static_cast<double>(count_triangles(g)) / two_paths;
    return out;
}

}  // namespace netsel
