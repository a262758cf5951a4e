// netsel command-line front end. Everything goes through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netsel/netsel.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Thrown for any failure; carries the process exit code.
struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{2, msg}; }

void check(netsel_status status, const std::string& context = {}) {
    if (status == NETSEL_OK) return;
    std::string msg = netsel_last_error();
    if (status == NETSEL_E_UNDEFINED_BAYES_FACTOR || status == NETSEL_E_UNDEFINED_POSTERIOR ||
        status == NETSEL_E_DEGENERATE_RATIO)
        msg = "indeterminate evidence: " + msg;
    if (!context.empty()) msg = context + ": " + msg;
    throw CliError{netsel_exit_code(status), msg};
}

struct GraphDeleter {
    void operator()(netsel_graph* g) const { netsel_graph_free(g); }
};
struct ListDeleter {
    void operator()(netsel_graph_list* l) const { netsel_graph_list_free(l); }
};
struct TextDeleter {
    void operator()(netsel_text* t) const { netsel_text_free(t); }
};
struct ReportDeleter {
    void operator()(netsel_report* r) const { netsel_report_free(r); }
};
using GraphPtr = std::unique_ptr<netsel_graph, GraphDeleter>;
using ListPtr = std::unique_ptr<netsel_graph_list, ListDeleter>;
using TextPtr = std::unique_ptr<netsel_text, TextDeleter>;
using ReportPtr = std::unique_ptr<netsel_report, ReportDeleter>;

std::string text_of(const TextPtr& t) { return std::string(netsel_text_data(t.get()), netsel_text_size(t.get())); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) usage_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
        usage_error("cannot write '" + path.string() + "'");
}

void emit(const std::string& out_path, const std::string& data) {
    if (out_path.empty() || out_path == "-") {
        std::fwrite(data.data(), 1, data.size(), stdout);
        std::fflush(stdout);
    } else {
        write_file(out_path, data);
    }
}

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        usage_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

bool has_size_header(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] != '#') return false;
        auto rest = line.substr(start + 1);
        rest.erase(0, rest.find_first_not_of(" \t"));
        if (rest.rfind("n=", 0) == 0) return true;
    }
    return false;
}

// Files with a "# n=" header are read strictly. Anything else is treated as a
// list of labeled edges; labels are remapped to 0..n-1 and the mapping written
// next to the data (or to node_map when given).
GraphPtr load_graph(const std::string& path, const std::string& node_map) {
    const std::string text = read_file(path);
    netsel_graph* g = nullptr;
    if (has_size_header(text)) {
        check(netsel_graph_read_edge_list(text.data(), text.size(), &g), path);
        return GraphPtr(g);
    }
    netsel_text* mapping = nullptr;
    check(netsel_graph_read_labeled_edge_list(text.data(), text.size(), &g, &mapping), path);
    GraphPtr graph(g);
    TextPtr map(mapping);
    const std::string map_path = node_map.empty() ? path + ".nodemap.tsv" : node_map;
    write_file(map_path, text_of(map));
    std::cerr << "note: '" << path << "' has no '# n=' header; node labels remapped, mapping written to '"
              << map_path << "'\n";
    return graph;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

// Each feature takes at most one parameter, so tokens never contain ','.
json feature_list(const std::string& s) {
    json arr = json::array();
    for (const auto& f : split(s, ',')) arr.push_back(f);
    if (arr.empty()) usage_error("--features needs at least one feature");
    return arr;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        usage_error("bad number '" + s + "' in " + what);
    }
}

// "feature:lo:hi"; the feature token itself may contain ':'.
json parse_range(const std::string& s) {
    auto hi_pos = s.rfind(':');
    if (hi_pos == std::string::npos || hi_pos == 0) usage_error("--range must be feature:lo:hi, got '" + s + "'");
    auto lo_pos = s.rfind(':', hi_pos - 1);
    if (lo_pos == std::string::npos) usage_error("--range must be feature:lo:hi, got '" + s + "'");
    double lo = parse_double(s.substr(lo_pos + 1, hi_pos - lo_pos - 1), "--range");
    double hi = parse_double(s.substr(hi_pos + 1), "--range");
    if (lo > hi) usage_error("--range '" + s + "': lo > hi");
    return {{"feature", s.substr(0, lo_pos)}, {"lo", lo}, {"hi", hi}};
}

struct GridArg {
    std::string param;
    std::vector<double> values;
};

GridArg parse_grid(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0) usage_error("--grid must be param:v1,v2,..., got '" + s + "'");
    GridArg g{s.substr(0, colon), {}};
    for (const auto& v : split(s.substr(colon + 1), ',')) g.values.push_back(parse_double(v, "--grid"));
    if (g.values.empty()) usage_error("--grid '" + s + "' lists no values");
    return g;
}

// Replaces a parameter of a model spec with a uniform grid prior.
void apply_grid(json& spec, const GridArg& grid) {
    json grid_prior = {{"grid", {{"values", grid.values}}}};
    if (spec.contains(grid.param)) {
        spec[grid.param] = grid_prior;
    } else if (spec.contains("edge_probs") && spec["edge_probs"].is_object() &&
               spec["edge_probs"].contains(grid.param)) {
        spec["edge_probs"][grid.param] = grid_prior;
    } else {
        usage_error("model has no parameter '" + grid.param + "'");
    }
}

// A model reference in a config is either an inline spec or a path relative
// to the config file.
json resolve_model(const json& ref, const fs::path& base) {
    if (!ref.is_string()) return ref;
    fs::path p = ref.get<std::string>();
    if (p.is_relative()) p = base / p;
    return load_json(p.string());
}

netsel_format parse_format(const std::string& s) {
    if (s == "json") return NETSEL_FORMAT_JSON;
    if (s == "csv") return NETSEL_FORMAT_CSV;
    usage_error("--format must be json or csv");
}

// Options shared by most commands. Unset optionals fall back to the config
// file, then to library defaults.
struct Common {
    std::string config_path;
    std::string model_path;
    std::vector<std::string> extra_models;
    std::string model2_path;
    std::string data_path;
    std::string node_map;
    std::string features;
    std::string loss;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
    std::string format;
    std::vector<std::string> ranges;
    std::vector<std::string> grids;
    std::string plot_data;
    bool independent_streams = false;
    std::size_t cell_size = 0;

    json config = json::object();
    fs::path config_dir = ".";

    void load_config() {
        if (config_path.empty()) return;
        config = load_json(config_path);
        if (!config.is_object()) usage_error("--config must hold a JSON object");
        config_dir = fs::path(config_path).parent_path();
        if (config_dir.empty()) config_dir = ".";
    }

    void apply_run_settings(json& j) const {
        if (samples) j["samples"] = *samples;
        if (seed) j["seed"] = *seed;
        if (threads) j["threads"] = *threads;
        if (!features.empty()) j["features"] = feature_list(features);
        if (!loss.empty()) j["loss"] = loss;
    }

    std::string data() const {
        if (!data_path.empty()) return data_path;
        if (config.contains("data") && config["data"].is_string()) {
            fs::path p = config["data"].get<std::string>();
            return (p.is_relative() ? config_dir / p : p).string();
        }
        usage_error("--data is required");
    }

    netsel_format output_format(const char* fallback) const {
        if (!format.empty()) return parse_format(format);
        if (config.contains("format") && config["format"].is_string())
            return parse_format(config["format"].get<std::string>());
        return parse_format(fallback);
    }
};

void add_run_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON config; command-line flags override its fields");
    cmd->add_option("--samples,-N", c.samples, "prior-predictive samples per model (default 100)");
    cmd->add_option("--seed", c.seed, "master seed (default 0)");
    cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores (default 1)");
    cmd->add_option("--out,-o", c.out, "output path (default stdout)");
    cmd->add_option("--format", c.format, "json or csv");
}

int cmd_generate(Common& c) {
    c.load_config();
    json spec;
    if (!c.model_path.empty()) spec = load_json(c.model_path);
    else if (c.config.contains("model")) spec = resolve_model(c.config["model"], c.config_dir);
    else usage_error("--model is required");

    json run = c.config;
    c.apply_run_settings(run);
    const std::size_t count = run.value("samples", std::size_t{100});
    const std::uint64_t seed = run.value("seed", std::uint64_t{0});
    const unsigned threads = run.value("threads", 1u);
    if (count < 1) usage_error("--samples must be >= 1");
    std::string out_dir = c.out.empty() ? c.config.value("out", std::string{}) : c.out;
    if (out_dir.empty()) usage_error("--out <directory> is required");

    const std::string spec_text = spec.dump();
    netsel_text* canonical = nullptr;
    check(netsel_spec_validate(spec_text.c_str(), &canonical), "model spec");
    TextPtr canonical_text(canonical);

    netsel_graph_list* list = nullptr;
    check(netsel_generate(spec_text.c_str(), count, seed, threads, &list));
    ListPtr graphs(list);

    fs::create_directories(out_dir);
    const std::size_t width = std::max<std::size_t>(4, std::to_string(count - 1).size());
    json files = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        std::string index = std::to_string(i);
        const std::string name =
            "graph_" + std::string(width - std::min<std::size_t>(width, index.size()), '0') + index + ".tsv";
        netsel_text* t = nullptr;
        check(netsel_graph_write_edge_list(netsel_graph_list_get(graphs.get(), i), &t));
        TextPtr text(t);
        write_file(fs::path(out_dir) / name, text_of(text));
        files.push_back({{"file", name}, {"index", i}, {"seed", netsel_derive_seed(seed, 0, i)}});
    }

    json manifest = {{"model", json::parse(text_of(canonical_text))},
                     {"master_seed", seed},
                     {"count", count},
                     {"graphs", files}};
    if (c.cell_size > 0) {
        if (!run.contains("features")) usage_error("--cell-size needs --features");
        std::string feats;
        for (const auto& f : run["features"]) feats += (feats.empty() ? "" : ",") + f.get<std::string>();
        netsel_text* t = nullptr;
        check(netsel_consensus_features(graphs.get(), c.cell_size, feats.c_str(), &t));
        TextPtr text(t);
        write_file(fs::path(out_dir) / "consensus.csv", text_of(text));
        manifest["consensus"] = {{"file", "consensus.csv"}, {"cell_size", c.cell_size}};
    }
    write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return 0;
}

int cmd_features(Common& c) {
    c.load_config();
    GraphPtr g = load_graph(c.data(), c.node_map);
    std::string feats = c.features;
    if (feats.empty() && c.config.contains("features")) {
        for (const auto& f : c.config["features"]) feats += (feats.empty() ? "" : ",") + f.get<std::string>();
    }
    if (feats.empty())
        feats = "degree_entropy,power_law_exponent,block_count,triangle_count,diameter,link_density,"
                "global_clustering";
    netsel_text* t = nullptr;
    check(netsel_features_table(g.get(), feats.c_str(), c.output_format("json"), &t));
    TextPtr text(t);
    emit(c.out, text_of(text));
    return 0;
}

int cmd_compare(Common& c) {
    c.load_config();
    json cfg = c.config;
    cfg.erase("data");
    cfg.erase("format");
    cfg.erase("out");
    if (!c.model_path.empty()) cfg["model_1"] = load_json(c.model_path);
    else if (cfg.contains("model_1")) cfg["model_1"] = resolve_model(cfg["model_1"], c.config_dir);
    else usage_error("--model is required");
    if (!c.model2_path.empty()) cfg["model_2"] = load_json(c.model2_path);
    else if (cfg.contains("model_2")) cfg["model_2"] = resolve_model(cfg["model_2"], c.config_dir);
    else usage_error("--model2 is required");
    c.apply_run_settings(cfg);
    if (c.independent_streams) cfg["independent_streams"] = true;
    if (!cfg.contains("features")) usage_error("--features is required");

    GraphPtr g = load_graph(c.data(), c.node_map);
    const std::string text = cfg.dump();

    if (!c.plot_data.empty()) {
        netsel_text* t = nullptr;
        check(netsel_compare_plot_data(g.get(), text.c_str(), &t));
        TextPtr plot(t);
        write_file(c.plot_data, text_of(plot));
    }

    netsel_report* r = nullptr;
    check(netsel_compare(g.get(), text.c_str(), &r));
    ReportPtr report(r);
    netsel_text* t = nullptr;
    check(netsel_report_render(report.get(), c.output_format("json"), &t));
    TextPtr rendered(t);
    emit(c.out, text_of(rendered));
    return 0;
}

int cmd_elicit(Common& c) {
    c.load_config();
    json cfg = c.config;
    cfg.erase("format");
    cfg.erase("out");
    json models = json::array();
    if (!c.model_path.empty()) models.push_back(load_json(c.model_path));
    for (const auto& m : c.extra_models) models.push_back(load_json(m));
    if (!c.model2_path.empty()) models.push_back(load_json(c.model2_path));
    if (models.empty() && cfg.contains("models"))
        for (const auto& m : cfg["models"]) models.push_back(resolve_model(m, c.config_dir));
    if (models.empty()) usage_error("at least one --model is required");
    cfg["models"] = models;

    if (!c.ranges.empty()) {
        cfg["ranges"] = json::array();
        for (const auto& r : c.ranges) cfg["ranges"].push_back(parse_range(r));
    } else if (cfg.contains("ranges")) {
        for (const auto& r : cfg["ranges"])
            if (r.contains("lo") && r.contains("hi") && r["lo"].is_number() && r["hi"].is_number() &&
                r["lo"].get<double>() > r["hi"].get<double>())
                usage_error("range on '" + r.value("feature", std::string{}) + "': lo > hi");
    } else {
        usage_error("at least one --range is required");
    }
    if (c.samples) cfg["samples"] = *c.samples;
    if (c.seed) cfg["seed"] = *c.seed;
    if (c.threads) cfg["threads"] = *c.threads;

    netsel_text* t = nullptr;
    check(netsel_elicit(cfg.dump().c_str(), c.output_format("json"), &t));
    TextPtr text(t);
    emit(c.out, text_of(text));
    return 0;
}

int cmd_infer(Common& c) {
    c.load_config();
    json cfg = c.config;
    cfg.erase("data");
    cfg.erase("format");
    cfg.erase("out");
    if (!c.model_path.empty()) cfg["model"] = load_json(c.model_path);
    else if (cfg.contains("model")) cfg["model"] = resolve_model(cfg["model"], c.config_dir);
    else usage_error("--model is required");
    for (const auto& g : c.grids) apply_grid(cfg["model"], parse_grid(g));
    c.apply_run_settings(cfg);
    cfg.erase("loss");
    if (!cfg.contains("features")) usage_error("--features is required");

    GraphPtr g = load_graph(c.data(), c.node_map);
    netsel_text* t = nullptr;
    check(netsel_infer(g.get(), cfg.dump().c_str(), c.output_format("json"), &t));
    TextPtr text(t);
    emit(c.out, text_of(text));
    return 0;
}

int cmd_simulate(Common& c) {
    if (c.config_path.empty()) usage_error("--config <study.json> is required");
    c.load_config();
    json cfg = c.config;
    cfg.erase("format");
    cfg.erase("out");
    if (cfg.contains("grids"))
        for (auto& grid : cfg["grids"])
            if (grid.contains("model")) grid["model"] = resolve_model(grid["model"], c.config_dir);
    if (cfg.contains("rows"))
        for (auto& row : cfg["rows"])
            for (const char* key : {"data", "model_1", "model_2"})
                if (row.contains(key)) row[key] = resolve_model(row[key], c.config_dir);

    // --grid name:values swaps the values of the grid prior in the named grid.
    for (const auto& arg : c.grids) {
        auto grid = parse_grid(arg);
        bool found = false;
        if (cfg.contains("grids")) {
            for (auto& entry : cfg["grids"]) {
                if (entry.value("name", std::string{}) != grid.param) continue;
                found = true;
                auto& model = entry["model"];
                json grid_prior = {{"grid", {{"values", grid.values}}}};
                bool replaced = false;
                for (auto& [key, value] : model.items())
                    if (value.is_object() && value.contains("grid")) value = grid_prior, replaced = true;
                if (model.contains("edge_probs") && model["edge_probs"].is_object())
                    for (auto& [key, value] : model["edge_probs"].items())
                        if (value.is_object() && value.contains("grid")) value = grid_prior, replaced = true;
                if (!replaced) usage_error("grid '" + grid.param + "' has no grid-valued parameter");
            }
        }
        if (!found) usage_error("study has no grid named '" + grid.param + "'");
    }
    if (c.samples) cfg["samples"] = *c.samples;
    if (c.seed) cfg["seed"] = *c.seed;
    if (c.threads) cfg["threads"] = *c.threads;

    netsel_text* t = nullptr;
    check(netsel_simulate(cfg.dump().c_str(), c.output_format("csv"), &t));
    TextPtr text(t);
    emit(c.out, text_of(text));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netsel: Bayesian model selection between random graph models"};
    app.set_version_flag("--version", std::string(netsel_version()));
    app.require_subcommand(1);
    Common c;

    auto* generate = app.add_subcommand("generate", "write prior-predictive graphs as edge lists plus a manifest");
    generate->add_option("--model", c.model_path, "model spec JSON");
    generate->add_option("--features", c.features, "features for --cell-size consensus output");
    generate->add_option("--cell-size", c.cell_size, "also write consensus features over cells of this size");
    add_run_options(generate, c);

    auto* features = app.add_subcommand("features", "feature table for an edge-list file");
    features->add_option("--data", c.data_path, "edge list");
    features->add_option("--node-map", c.node_map, "where to write the label mapping for unlabeled-header input");
    features->add_option("--features", c.features, "comma-separated features (default all)");
    features->add_option("--config", c.config_path, "JSON config");
    features->add_option("--out,-o", c.out, "output path (default stdout)");
    features->add_option("--format", c.format, "json or csv");

    auto* compare = app.add_subcommand("compare", "compare two models against a data graph");
    compare->add_option("--model", c.model_path, "first model spec JSON");
    compare->add_option("--model2", c.model2_path, "second model spec JSON");
    compare->add_option("--data", c.data_path, "edge list");
    compare->add_option("--node-map", c.node_map, "where to write the label mapping");
    compare->add_option("--features", c.features, "comma-separated features");
    compare->add_option("--loss", c.loss, "quadratic, absolute or zero_one");
    compare->add_option("--plot-data", c.plot_data, "write per-model density curves as CSV");
    compare->add_flag("--independent-streams", c.independent_streams,
                      "draw the two models from separate seed streams");
    add_run_options(compare, c);

    auto* elicit = app.add_subcommand("elicit", "prior-predictive probabilities of feature ranges");
    elicit->add_option("--model", c.model_path, "model spec JSON");
    elicit->add_option("--model2", c.model2_path, "second model spec JSON");
    elicit->add_option("--also", c.extra_models, "further model spec JSONs");
    elicit->add_option("--range", c.ranges, "feature:lo:hi (repeatable)");
    add_run_options(elicit, c);

    auto* infer = app.add_subcommand("infer", "posterior over a parameter grid given a data graph");
    infer->add_option("--model", c.model_path, "model spec JSON");
    infer->add_option("--grid", c.grids, "param:v1,v2,... replaces that parameter's prior");
    infer->add_option("--data", c.data_path, "edge list");
    infer->add_option("--node-map", c.node_map, "where to write the label mapping");
    infer->add_option("--features", c.features, "comma-separated features");
    add_run_options(infer, c);

    auto* simulate = app.add_subcommand("simulate", "run a study and emit the results table");
    simulate->add_option("--grid", c.grids, "name:v1,v2,... replaces the values of a study grid");
    add_run_options(simulate, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(generate)) return cmd_generate(c);
        if (app.got_subcommand(features)) return cmd_features(c);
        if (app.got_subcommand(compare)) return cmd_compare(c);
        if (app.got_subcommand(elicit)) return cmd_elicit(c);
        if (app.got_subcommand(infer)) return cmd_infer(c);
        if (app.got_subcommand(simulate)) return cmd_simulate(c);
    } catch (const CliError& e) {
        std::cerr << "netsel: " << e.message << '\n';
        return e.exit_code;
    } catch (const json::exception& e) {
        std::cerr << "netsel: bad config: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "netsel: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
