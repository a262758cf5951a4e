#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "netsel/error.hpp"
#include "netsel/features.hpp"
#include "netsel/generators.hpp"
#include "netsel/graph.hpp"
#include "netsel/inference.hpp"
#include "netsel/json_io.hpp"
#include "netsel/random.hpp"
#include "netsel/netsel.h"
#include "netsel/workflows.hpp"

struct netsel_graph {
    netsel::Graph graph;
};

struct netsel_graph_list {
    std::vector<netsel_graph> graphs;
};

struct netsel_text {
    std::string data;
};

struct netsel_report {
    netsel::ComparisonReport report;
};

namespace {

thread_local std::string last_error;

netsel_status to_status(netsel::ErrorCode code) {
    using netsel::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidEdge: return NETSEL_E_INVALID_EDGE;
        case ErrorCode::InvalidNode: return NETSEL_E_INVALID_NODE;
        case ErrorCode::ParseError: return NETSEL_E_PARSE;
        case ErrorCode::InvalidSpec: return NETSEL_E_INVALID_SPEC;
        case ErrorCode::InvalidInput: return NETSEL_E_INVALID_INPUT;
        case ErrorCode::UndefinedFeature: return NETSEL_E_UNDEFINED_FEATURE;
        case ErrorCode::UndefinedBayesFactor: return NETSEL_E_UNDEFINED_BAYES_FACTOR;
        case ErrorCode::UndefinedPosterior: return NETSEL_E_UNDEFINED_POSTERIOR;
        case ErrorCode::DegenerateRatio: return NETSEL_E_DEGENERATE_RATIO;
        case ErrorCode::Io: return NETSEL_E_IO;
    }
    return NETSEL_E_INTERNAL;
}

// Runs fn and converts any exception into a status code plus message.
template <typename Fn>
netsel_status guard(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return NETSEL_OK;
    } catch (const netsel::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return NETSEL_E_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return NETSEL_E_INTERNAL;
    }
}

void require(const void* p, const char* name) {
    if (!p) netsel::fail(netsel::ErrorCode::InvalidInput, std::string(name) + " is NULL");
}

netsel_text* make_text(std::string s) { return new netsel_text{std::move(s)}; }

std::vector<netsel::FeatureKind> parse_feature_list(const char* features) {
    std::vector<netsel::FeatureKind> kinds;
    std::string_view rest(features);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        auto item = rest.substr(0, comma);
        if (!item.empty()) kinds.push_back(netsel::parse_feature_kind(item));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (kinds.empty()) netsel::fail(netsel::ErrorCode::InvalidInput, "feature list is empty");
    return kinds;
}

netsel::json parse_config(const char* text) {
    require(text, "config");
    return netsel::parse_json(text);
}

}  // namespace

extern "C" {

const char* netsel_version(void) { return "0.1.0"; }

const char* netsel_status_name(netsel_status status) {
    switch (status) {
        case NETSEL_OK: return "ok";
        case NETSEL_E_INVALID_EDGE: return "invalid_edge";
        case NETSEL_E_INVALID_NODE: return "invalid_node";
        case NETSEL_E_PARSE: return "parse_error";
        case NETSEL_E_INVALID_SPEC: return "invalid_spec";
        case NETSEL_E_INVALID_INPUT: return "invalid_input";
        case NETSEL_E_UNDEFINED_FEATURE: return "undefined_feature";
        case NETSEL_E_UNDEFINED_BAYES_FACTOR: return "undefined_bayes_factor";
        case NETSEL_E_UNDEFINED_POSTERIOR: return "undefined_posterior";
        case NETSEL_E_DEGENERATE_RATIO: return "degenerate_ratio";
        case NETSEL_E_IO: return "io_error";
        case NETSEL_E_NULL_ARGUMENT: return "null_argument";
        case NETSEL_E_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* netsel_last_error(void) { return last_error.c_str(); }

uint64_t netsel_derive_seed(uint64_t master, uint64_t stream, uint64_t index) {
    return netsel::derive_seed(master, stream, index);
}

int netsel_exit_code(netsel_status status) {
    switch (status) {
        case NETSEL_OK: return 0;
        case NETSEL_E_UNDEFINED_BAYES_FACTOR:
        case NETSEL_E_UNDEFINED_POSTERIOR:
        case NETSEL_E_DEGENERATE_RATIO: return 3;
        case NETSEL_E_INTERNAL: return 1;
        default: return 2;
    }
}

const char* netsel_text_data(const netsel_text* text) { return text ? text->data.c_str() : ""; }
size_t netsel_text_size(const netsel_text* text) { return text ? text->data.size() : 0; }
void netsel_text_free(netsel_text* text) { delete text; }

netsel_status netsel_graph_create(size_t node_count, const uint32_t* edge_pairs, size_t edge_count,
                                  netsel_graph** out) {
    if (!out || (!edge_pairs && edge_count > 0)) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        std::vector<netsel::Edge> edges;
        for (size_t i = 0; i < edge_count; ++i) edges.emplace_back(edge_pairs[2 * i], edge_pairs[2 * i + 1]);
        *out = new netsel_graph{netsel::build_graph(node_count, edges)};
    });
}

netsel_status netsel_graph_read_edge_list(const char* text, size_t length, netsel_graph** out) {
    if (!text || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] { *out = new netsel_graph{netsel::read_edge_list({text, length})}; });
}

netsel_status netsel_graph_read_labeled_edge_list(const char* text, size_t length, netsel_graph** out,
                                                  netsel_text** mapping) {
    if (!text || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto labeled = netsel::read_labeled_edge_list({text, length});
        std::unique_ptr<netsel_text> map;
        if (mapping) {
            std::ostringstream s;
            s << "# id\tlabel\n";
            for (size_t i = 0; i < labeled.labels.size(); ++i) s << i << '\t' << labeled.labels[i] << '\n';
            map.reset(make_text(s.str()));
        }
        *out = new netsel_graph{std::move(labeled.graph)};
        if (mapping) *mapping = map.release();
    });
}

netsel_status netsel_graph_write_edge_list(const netsel_graph* graph, netsel_text** out) {
    if (!graph || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] { *out = make_text(netsel::write_edge_list(graph->graph)); });
}

void netsel_graph_free(netsel_graph* graph) { delete graph; }

size_t netsel_graph_node_count(const netsel_graph* graph) { return graph ? graph->graph.node_count() : 0; }
size_t netsel_graph_edge_count(const netsel_graph* graph) { return graph ? graph->graph.edge_count() : 0; }

netsel_status netsel_graph_toggle_edge(netsel_graph* graph, uint32_t u, uint32_t v, int* present_after) {
    if (!graph) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        bool present = graph->graph.toggle_edge(u, v);
        if (present_after) *present_after = present ? 1 : 0;
    });
}

netsel_status netsel_graph_degrees(const netsel_graph* graph, size_t* out, size_t capacity) {
    if (!graph || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        if (capacity < graph->graph.node_count())
            netsel::fail(netsel::ErrorCode::InvalidInput, "degree buffer too small");
        auto degrees = netsel::degree_sequence(graph->graph);
        std::copy(degrees.begin(), degrees.end(), out);
    });
}

size_t netsel_graph_list_size(const netsel_graph_list* list) { return list ? list->graphs.size() : 0; }

const netsel_graph* netsel_graph_list_get(const netsel_graph_list* list, size_t index) {
    if (!list || index >= list->graphs.size()) return nullptr;
    return &list->graphs[index];
}

void netsel_graph_list_free(netsel_graph_list* list) { delete list; }

netsel_status netsel_spec_validate(const char* spec_json, netsel_text** canonical) {
    if (!spec_json) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto spec = netsel::parse_model_spec(spec_json);
        if (canonical) *canonical = make_text(netsel::to_json(spec).dump(2));
    });
}

netsel_status netsel_generate(const char* spec_json, size_t count, uint64_t seed, unsigned threads,
                              netsel_graph_list** out) {
    if (!spec_json || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto spec = netsel::parse_model_spec(spec_json);
        auto graphs = netsel::prior_predictive(spec, count, seed, threads);
        auto list = std::make_unique<netsel_graph_list>();
        list->graphs.reserve(graphs.size());
        for (auto& g : graphs) list->graphs.push_back({std::move(g)});
        *out = list.release();
    });
}

netsel_status netsel_feature_extract(const netsel_graph* graph, const char* feature,
                                     netsel_feature_value* out) {
    if (!graph || !feature || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto value = netsel::extract_feature(graph->graph, netsel::parse_feature_kind(feature));
        out->is_discrete = value.is_discrete() ? 1 : 0;
        out->discrete = value.is_discrete() ? value.as_integer() : 0;
        out->continuous = value.as_double();
    });
}

netsel_status netsel_features_table(const netsel_graph* graph, const char* features, netsel_format format,
                                    netsel_text** out) {
    if (!graph || !features || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto kinds = parse_feature_list(features);
        netsel::json rows = netsel::json::array();
        std::ostringstream csv;
        csv << "feature,variant,value\n";
        for (const auto& kind : kinds) {
            netsel::json row = netsel::to_json(kind);
            row["variant"] = kind.is_discrete() ? "discrete" : "continuous";
            std::string cell;
            try {
                auto value = netsel::extract_feature(graph->graph, kind);
                row["value"] = netsel::to_json(value);
                cell = value.is_discrete() ? std::to_string(value.as_integer())
                                           : netsel::format_number(value.as_double());
            } catch (const netsel::Error& e) {
                if (e.code() != netsel::ErrorCode::UndefinedFeature) throw;
                row["value"] = nullptr;
                row["note"] = e.what();
            }
            csv << netsel::feature_label(kind) << ',' << row["variant"].get<std::string>() << ',' << cell
                << '\n';
            rows.push_back(row);
        }
        *out = make_text(format == NETSEL_FORMAT_CSV ? csv.str() : rows.dump(2) + "\n");
    });
}

netsel_status netsel_shard_cells(const netsel_graph* graph, size_t cell_size, netsel_graph_list** out) {
    if (!graph || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto list = std::make_unique<netsel_graph_list>();
        for (auto& g : netsel::shard_cells(graph->graph, cell_size)) list->graphs.push_back({std::move(g)});
        *out = list.release();
    });
}

netsel_status netsel_consensus_merge(const double* draws, size_t shards, size_t draws_per_shard,
                                     double* out) {
    if (!draws || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        std::vector<std::vector<double>> per_shard(shards);
        for (size_t s = 0; s < shards; ++s)
            per_shard[s].assign(draws + s * draws_per_shard, draws + (s + 1) * draws_per_shard);
        auto merged = netsel::consensus_merge(per_shard);
        std::copy(merged.begin(), merged.end(), out);
    });
}

netsel_status netsel_consensus_features(const netsel_graph_list* graphs, size_t cell_size,
                                        const char* features, netsel_text** out) {
    if (!graphs || !features || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        std::vector<netsel::Graph> plain;
        for (const auto& g : graphs->graphs) plain.push_back(g.graph);
        std::ostringstream csv;
        csv << "feature,draw,value,shards_used,shards_total\n";
        for (const auto& kind : parse_feature_list(features)) {
            auto merged = netsel::consensus_feature(plain, cell_size, kind);
            for (size_t t = 0; t < merged.merged.size(); ++t)
                csv << netsel::feature_label(kind) << ',' << t << ','
                    << netsel::format_number(merged.merged[t]) << ',' << merged.shards_used << ','
                    << merged.shards_total << '\n';
        }
        *out = make_text(csv.str());
    });
}

netsel_status netsel_compare(const netsel_graph* data, const char* config_json, netsel_report** out) {
    if (!data || !config_json || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto config = netsel::compare_config_from_json(parse_config(config_json));
        *out = new netsel_report{netsel::run_compare(data->graph, config)};
    });
}

netsel_status netsel_report_render(const netsel_report* report, netsel_format format, netsel_text** out) {
    if (!report || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        *out = make_text(format == NETSEL_FORMAT_CSV ? netsel::comparison_report_csv(report->report)
                                                     : netsel::to_json(report->report).dump(2) + "\n");
    });
}

netsel_decision netsel_report_decision(const netsel_report* report) {
    if (!report) return NETSEL_DECISION_INDETERMINATE;
    switch (report->report.decision) {
        case netsel::Decision::Model1: return NETSEL_DECISION_MODEL_1;
        case netsel::Decision::Model2: return NETSEL_DECISION_MODEL_2;
        case netsel::Decision::Indeterminate: break;
    }
    return NETSEL_DECISION_INDETERMINATE;
}

double netsel_report_combined_ratio(const netsel_report* report) {
    return report ? report->report.combined_ratio : 0.0;
}

double netsel_report_posterior_odds(const netsel_report* report) {
    return report ? report->report.posterior_odds : 0.0;
}

void netsel_report_free(netsel_report* report) { delete report; }

netsel_status netsel_compare_plot_data(const netsel_graph* data, const char* config_json, netsel_text** out) {
    if (!data || !config_json || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto config = netsel::compare_config_from_json(parse_config(config_json));
        *out = make_text(netsel::compare_plot_csv(data->graph, config));
    });
}

netsel_status netsel_elicit(const char* config_json, netsel_format format, netsel_text** out) {
    if (!config_json || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto report = netsel::run_elicit(netsel::elicit_config_from_json(parse_config(config_json)));
        *out = make_text(format == NETSEL_FORMAT_CSV ? netsel::elicit_report_csv(report)
                                                     : netsel::to_json(report).dump(2) + "\n");
    });
}

netsel_status netsel_infer(const netsel_graph* data, const char* config_json, netsel_format format,
                           netsel_text** out) {
    if (!data || !config_json || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto report = netsel::run_infer(data->graph, netsel::infer_config_from_json(parse_config(config_json)));
        *out = make_text(format == NETSEL_FORMAT_CSV ? netsel::infer_report_csv(report)
                                                     : netsel::to_json(report).dump(2) + "\n");
    });
}

netsel_status netsel_simulate(const char* study_json, netsel_format format, netsel_text** out) {
    if (!study_json || !out) return NETSEL_E_NULL_ARGUMENT;
    return guard([&] {
        auto result = netsel::run_study(netsel::study_config_from_json(parse_config(study_json)));
        *out = make_text(format == NETSEL_FORMAT_CSV ? netsel::study_csv(result)
                                                     : netsel::to_json(result).dump(2) + "\n");
    });
}

}  // extern "C"
