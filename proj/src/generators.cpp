#include "netsel/generators.hpp"

#include <cmath>
#include <numeric>

#include "netsel/error.hpp"
#include "netsel/parallel.hpp"

namespace netsel {

Graph generate_er(std::size_t n, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidSpec, "p must lie in [0, 1]");
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

std::vector<std::size_t> equal_blocks(std::size_t n, std::size_t k) {
    std::vector<std::size_t> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = i * k / n;
    return z;
}

std::vector<std::vector<double>> planted_edge_probs(std::size_t k, double p_in, double p_out) {
    std::vector<std::vector<double>> P(k, std::vector<double>(k, p_out));
    for (std::size_t a = 0; a < k; ++a) P[a][a] = p_in;
    return P;
}

Graph generate_sbm(std::size_t n, std::size_t k, std::span<const std::size_t> membership,
                   const std::vector<std::vector<double>>& edge_probs, Rng& rng) {
    if (k < 1) fail(ErrorCode::InvalidSpec, "k must be >= 1");
    if (membership.size() != n) fail(ErrorCode::InvalidSpec, "membership length must equal n");
    if (edge_probs.size() != k) fail(ErrorCode::InvalidSpec, "edge_probs must be k x k");
    for (std::size_t a = 0; a < k; ++a) {
        if (edge_probs[a].size() != k) fail(ErrorCode::InvalidSpec, "edge_probs must be k x k");
        for (std::size_t b = 0; b < k; ++b) {
            if (!(edge_probs[a][b] >= 0.0 && edge_probs[a][b] <= 1.0))
                fail(ErrorCode::InvalidSpec, "edge_probs entries must lie in [0, 1]");
            if (edge_probs[a][b] != edge_probs[b][a])
                fail(ErrorCode::InvalidSpec, "edge_probs must be symmetric");
        }
    }
    for (auto z : membership)
        if (z >= k) fail(ErrorCode::InvalidSpec, "membership block id out of range");

    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(edge_probs[membership[u]][membership[v]])) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

std::vector<std::size_t> sample_powerlaw_degrees(std::size_t n, double alpha, std::size_t d_min,
                                                 Rng& rng) {
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        fail(ErrorCode::InvalidSpec, "power-law exponent must exceed 2");
    if (d_min < 1) fail(ErrorCode::InvalidSpec, "d_min must be >= 1");
    std::vector<std::size_t> degrees(n);
    if (n == 0) return degrees;
    const double cap = static_cast<double>(n - 1);
    const double exponent = -1.0 / (alpha - 1.0);
    std::size_t total = 0;
    for (auto& d : degrees) {
        double x = std::floor(static_cast<double>(d_min) * std::pow(rng.uniform_open(), exponent));
        d = static_cast<std::size_t>(std::min(x, cap));
        total += d;
    }
    if (total % 2 == 1) {
        auto& d = degrees[rng.below(n)];
        if (d < n - 1) ++d;
        else --d;
    }
    return degrees;
}

Graph generate_from_degrees(std::span<const std::size_t> degrees, Rng& rng) {
    const std::size_t n = degrees.size();
    std::size_t total = 0;
    for (auto d : degrees) {
        if (n > 0 && d > n - 1) fail(ErrorCode::InvalidSpec, "degree exceeds n - 1");
        total += d;
    }
    if (total % 2 == 1) fail(ErrorCode::InvalidSpec, "degree sum must be even");

    std::vector<NodeId> stubs;
    stubs.reserve(total);
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), degrees[v], v);
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);

    std::vector<Edge> edges;
    edges.reserve(total / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
        if (stubs[i] != stubs[i + 1]) edges.emplace_back(stubs[i], stubs[i + 1]);
    return Graph::from_edges(n, edges);  // collapses repeated pairs
}

ChainSettings default_chain_settings(std::size_t n) {
    return {10 * n * n, std::max<std::size_t>(n * n, 1)};
}

std::vector<Graph> mh_loglinear_sample(std::size_t n, const LogLinearModel& model, std::size_t count,
                                       const ChainSettings& chain, Rng& rng) {
    if (count < 1) fail(ErrorCode::InvalidInput, "count must be >= 1");
    if (chain.thin < 1) fail(ErrorCode::InvalidInput, "thin must be >= 1");
    Graph g(n);
    std::vector<Graph> out;
    out.reserve(count);
    if (n < 2) {
        out.assign(count, g);
        return out;
    }
    auto step = [&] {
        // u == v is a no-op proposal. Without it a chain that accepts every
        // toggle alternates edge-count parity and never mixes.
        NodeId u = static_cast<NodeId>(rng.below(n));
        NodeId v = static_cast<NodeId>(rng.below(n));
        if (u == v) {
            rng.uniform();
            return;
        }
        double delta = 0.0;
        for (const auto& term : model.terms)
            delta += term.weight * toggle_delta(term.function, g, u, v);
        delta *= model.lambda;
        // Draw the uniform unconditionally so the stream position does not
        // depend on the acceptance branch.
        double r = rng.uniform();
        if (delta >= 0.0 || r < std::exp(delta)) g.toggle_edge(u, v);
    };
    for (std::size_t s = 0; s < chain.burn_in; ++s) step();
    for (std::size_t c = 0; c < count; ++c) {
        for (std::size_t s = 0; s < chain.thin; ++s) step();
        out.push_back(g);
    }
    return out;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

Graph sample_graph(const ModelSpec& spec, Rng& rng) {
    const std::size_t n = spec.n;
    return std::visit(
        overloaded{
            [&](const ErdosRenyiModel& m) { return generate_er(n, sample_parameter(m.p, rng), rng); },
            [&](const SbmModel& m) {
                auto k = static_cast<std::size_t>(std::llround(sample_parameter(m.k, rng)));
                std::vector<std::vector<double>> probs;
                if (m.edge_probs) {
                    probs = *m.edge_probs;
                } else {
                    double p_in = sample_parameter(m.p_in, rng);
                    double p_out = sample_parameter(m.p_out, rng);
                    probs = planted_edge_probs(k, p_in, p_out);
                }
                std::vector<std::size_t> z;
                if (auto* fixed = std::get_if<FixedBlocks>(&m.membership)) {
                    z = fixed->assignment;
                } else if (auto* dir = std::get_if<DirichletBlocks>(&m.membership)) {
                    std::vector<double> w(k);
                    double total = 0.0;
                    for (auto& x : w) total += x = rng.gamma(dir->concentration);
                    z.resize(n);
                    for (auto& zi : z) {
                        double u = rng.uniform() * total;
                        std::size_t b = 0;
                        double acc = w[0];
                        while (u >= acc && b + 1 < k) acc += w[++b];
                        zi = b;
                    }
                } else {
                    z = equal_blocks(n, k);
                }
                return generate_sbm(n, k, z, probs, rng);
            },
            [&](const PowerLawModel& m) {
                double alpha = sample_parameter(m.alpha, rng);
                auto degrees = sample_powerlaw_degrees(n, alpha, m.d_min, rng);
                return generate_from_degrees(degrees, rng);
            },
            [&](const LogLinearModel& m) {
                ChainSettings chain = default_chain_settings(n);
                if (m.burn_in) chain.burn_in = *m.burn_in;
                if (m.thin) chain.thin = *m.thin;
                return std::move(mh_loglinear_sample(n, m, 1, chain, rng).front());
            },
        },
        spec.model);
}

std::vector<Graph> prior_predictive(const ModelSpec& spec, std::size_t count,
                                    std::uint64_t master_seed, unsigned threads,
                                    std::uint64_t stream) {
    if (count < 1) fail(ErrorCode::InvalidInput, "sample count must be >= 1");
    validate(spec);
    std::vector<Graph> out(count);
    parallel_for(count, threads, [&](std::size_t i) {
        Rng rng(derive_seed(master_seed, stream, i));
        out[i] = sample_graph(spec, rng);
    });
    return out;
}

}  // namespace netsel
