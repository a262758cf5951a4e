#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netsel/graph.hpp"
#include "netsel/model_spec.hpp"
#include "netsel/random.hpp"

namespace netsel {

/// G(n, p): each unordered pair independently with probability p.
Graph generate_er(std::size_t n, double p, Rng& rng);

/// Block ids 0..k-1 in contiguous runs whose sizes differ by at most one.
std::vector<std::size_t> equal_blocks(std::size_t n, std::size_t k);

/// k x k matrix with p_in on the diagonal and p_out elsewhere.
std::vector<std::vector<double>> planted_edge_probs(std::size_t k, double p_in, double p_out);

/// Stochastic block model. Pairs are visited in the same order as
/// generate_er, so k = 1 reproduces generate_er(n, P[0][0]) draw for draw.
Graph generate_sbm(std::size_t n, std::size_t k, std::span<const std::size_t> membership,
                   const std::vector<std::vector<double>>& edge_probs, Rng& rng);

/// Discrete Pareto degrees: min(n-1, floor(d_min * U^(-1/(alpha-1)))). An odd
/// total is fixed by moving one uniformly chosen entry by one (up, or down when
/// it already sits at n-1). alpha <= 2 throws InvalidSpec.
std::vector<std::size_t> sample_powerlaw_degrees(std::size_t n, double alpha, std::size_t d_min,
                                                 Rng& rng);

/// Erased configuration model: uniform stub matching, then self-loops and
/// repeated pairs are dropped.
Graph generate_from_degrees(std::span<const std::size_t> degrees, Rng& rng);

struct ChainSettings {
    std::size_t burn_in = 0;
    std::size_t thin = 1;
};

/// Default chain settings for n nodes: burn_in = 10 n^2, thin = n^2 proposals.
ChainSettings default_chain_settings(std::size_t n);

/// Metropolis–Hastings over graphs on n nodes targeting
/// P(G) ∝ exp(lambda * sum_i w_i f_i(G)). Proposals toggle a uniformly chosen
/// pair; the chain starts from the empty graph and keeps every thin-th state
/// after burn_in.
std::vector<Graph> mh_loglinear_sample(std::size_t n, const LogLinearModel& model, std::size_t count,
                                       const ChainSettings& chain, Rng& rng);

/// One prior-predictive draw: parameters from their priors, then a graph.
Graph sample_graph(const ModelSpec& spec, Rng& rng);

/// N prior-predictive draws. Draw i uses an engine seeded with
/// derive_seed(master_seed, stream, i), so the output does not depend on
/// `threads`.
std::vector<Graph> prior_predictive(const ModelSpec& spec, std::size_t count,
                                    std::uint64_t master_seed, unsigned threads = 1,
                                    std::uint64_t stream = 0);

}  // namespace netsel
