#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "netsel/graph.hpp"

namespace netsel {

struct FeatureKind {
    enum class Id {
        DegreeEntropy,
        PowerLawExponent,
        BlockCount,
        TriangleCount,
        Diameter,
        LinkDensity,
        GlobalClustering,
    };

    Id id = Id::DegreeEntropy;
    std::size_t d_min = 1;   // PowerLawExponent
    std::size_t k_max = 16;  // BlockCount

    bool is_discrete() const {
        return id == Id::BlockCount || id == Id::TriangleCount || id == Id::Diameter;
    }

    friend bool operator==(const FeatureKind&, const FeatureKind&) = default;
};

/// Lower-case token, e.g. "power_law_exponent".
std::string_view feature_token(FeatureKind::Id id);

/// Token with non-default parameters appended, e.g. "block_count:k_max=12".
std::string feature_label(const FeatureKind& kind);

/// Accepts "name" or "name:param=value[,...]" with param d_min or k_max.
FeatureKind parse_feature_kind(std::string_view text);

class FeatureValue {
public:
    static FeatureValue discrete(std::int64_t v) { return FeatureValue(v); }
    static FeatureValue continuous(double v) { return FeatureValue(v); }

    bool is_discrete() const { return std::holds_alternative<std::int64_t>(value_); }
    std::int64_t as_integer() const { return std::get<std::int64_t>(value_); }
    double as_double() const {
        return is_discrete() ? static_cast<double>(std::get<std::int64_t>(value_))
                             : std::get<double>(value_);
    }

    friend bool operator==(const FeatureValue&, const FeatureValue&) = default;

private:
    explicit FeatureValue(std::int64_t v) : value_(v) {}
    explicit FeatureValue(double v) : value_(v) {}
    std::variant<std::int64_t, double> value_;
};

/// Dispatches to the extractor for `kind`. Throws UndefinedFeature when the
/// graph violates that extractor's preconditions.
FeatureValue extract_feature(const Graph& g, const FeatureKind& kind);

/// Shannon entropy (nats) of the empirical degree distribution.
double degree_entropy(const Graph& g);

/// Continuous-approximation MLE of the power-law exponent over degrees >= d_min:
/// 1 + m / sum ln(d_i / (d_min - 0.5)).
double fit_power_law_mle(const Graph& g, std::size_t d_min);
double fit_power_law_mle(std::span<const std::size_t> degrees, std::size_t d_min);

/// Eigengap estimate of the number of blocks from the spectrum of
/// D^-1/2 A D^-1/2 (isolated nodes contribute eigenvalue 0). Returns the k in
/// [1, min(k_max, n-1)] maximizing lambda_k - lambda_{k+1}; gaps within 1e-9 of
/// the maximum count as ties and resolve to the larger k.
std::size_t estimate_block_count(const Graph& g, std::size_t k_max);

/// Eigenvalues of the normalized adjacency, sorted descending.
std::vector<double> normalized_adjacency_spectrum(const Graph& g);

std::size_t count_triangles(const Graph& g);

/// Largest eccentricity inside the largest connected component (lowest node id
/// wins ties between equally large components).
std::size_t diameter(const Graph& g);

struct DensityClustering {
    double link_density = 0.0;
    double global_clustering = 0.0;
};

/// |E| / C(n,2) and 3 * triangles / connected 2-paths (0 without 2-paths).
DensityClustering density_and_clustering(const Graph& g);

}  // namespace netsel
