#include "netsel/json_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "netsel/error.hpp"

namespace netsel {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

[[noreturn]] void spec_error(const std::string& what) { fail(ErrorCode::InvalidSpec, what); }

const json& require(const json& j, const char* key, const char* context) {
    if (!j.is_object() || !j.contains(key))
        spec_error(std::string(context) + ": missing field '" + key + "'");
    return j.at(key);
}

double require_number(const json& j, const char* what) {
    if (!j.is_number()) spec_error(std::string(what) + " must be a number");
    return j.get<double>();
}

std::size_t require_count(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        spec_error(std::string(what) + " must be a non-negative integer");
    return j.get<std::size_t>();
}

// Runs fn, converting nlohmann exceptions into InvalidSpec.
template <typename Fn>
auto guarded(const char* context, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        spec_error(std::string(context) + ": " + e.what());
    }
}

json function_to_json(const ConcordanceFunction& f) {
    using K = ConcordanceFunction::Kind;
    switch (f.kind) {
        case K::EdgeCount: return "edge_count";
        case K::TriangleCount: return "triangle_count";
        case K::DegreeCount: return json{{"degree_count", f.target_degree}};
        case K::IndividualEdge: return json{{"individual_edge", {f.u, f.v}}};
    }
    return nullptr;
}

ConcordanceFunction function_from_json(const json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "edge_count") return ConcordanceFunction::edge_count();
        if (s == "triangle_count") return ConcordanceFunction::triangle_count();
        spec_error("unknown concordance function '" + s + "'");
    }
    if (j.is_object() && j.contains("degree_count"))
        return ConcordanceFunction::degree_count(require_count(j.at("degree_count"), "degree_count"));
    if (j.is_object() && j.contains("individual_edge")) {
        const auto& e = j.at("individual_edge");
        if (!e.is_array() || e.size() != 2) spec_error("individual_edge must be [u, v]");
        return ConcordanceFunction::individual_edge(
            static_cast<NodeId>(require_count(e[0], "individual_edge u")),
            static_cast<NodeId>(require_count(e[1], "individual_edge v")));
    }
    spec_error("unrecognized concordance function");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json feature_record_to_json(const FeatureRecord& r) {
    json j = to_json(r.kind);
    j["observed"] = to_json(r.observed);
    j["evidence_1"] = number_to_json(r.evidence_1);
    j["evidence_2"] = number_to_json(r.evidence_2);
    j["log_evidence_1"] = number_to_json(r.log_evidence_1);
    j["log_evidence_2"] = number_to_json(r.log_evidence_2);
    j["bayes_factor"] = number_to_json(r.bayes_factor);
    j["el_1"] = number_to_json(r.el_1);
    j["el_2"] = number_to_json(r.el_2);
    j["loss_ratio"] = number_to_json(r.loss_ratio);
    j["used_1"] = r.used_1;
    j["used_2"] = r.used_2;
    return j;
}

FeatureRecord feature_record_from_json(const json& j) {
    FeatureRecord r;
    r.kind = feature_kind_from_json(j);
    r.observed = feature_value_from_json(j.at("observed"));
    r.evidence_1 = number_from_json(j.at("evidence_1"));
    r.evidence_2 = number_from_json(j.at("evidence_2"));
    r.log_evidence_1 = number_from_json(j.at("log_evidence_1"));
    r.log_evidence_2 = number_from_json(j.at("log_evidence_2"));
    r.bayes_factor = number_from_json(j.at("bayes_factor"));
    r.el_1 = number_from_json(j.at("el_1"));
    r.el_2 = number_from_json(j.at("el_2"));
    r.loss_ratio = number_from_json(j.at("loss_ratio"));
    r.used_1 = j.at("used_1").get<std::size_t>();
    r.used_2 = j.at("used_2").get<std::size_t>();
    return r;
}

std::vector<FeatureKind> features_from_json(const json& j) {
    if (!j.is_array() || j.empty()) spec_error("'features' must be a non-empty array");
    std::vector<FeatureKind> out;
    for (const auto& f : j) out.push_back(feature_kind_from_json(f));
    return out;
}

ModelSpec labeled_spec(const json& j, const std::string& fallback) {
    ModelSpec s = model_spec_from_json(j);
    if (s.label.empty()) s.label = fallback;
    return s;
}

Decision decision_from_token(const std::string& s) {
    for (auto d : {Decision::Model1, Decision::Model2, Decision::Indeterminate})
        if (decision_token(d) == s) return d;
    fail(ErrorCode::ParseError, "unknown decision '" + s + "'");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

json number_to_json(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

double number_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    fail(ErrorCode::ParseError, "expected a number, got " + j.dump());
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
}

// Priors -----------------------------------------------------------------------

json to_json(const ParamPrior& prior) {
    return std::visit(overloaded{
                          [](const PointPrior& p) { return json{{"point", p.value}}; },
                          [](const UniformPrior& p) { return json{{"uniform", {p.lo, p.hi}}}; },
                          [](const GridPrior& p) {
                              return json{{"grid", {{"values", p.values}, {"weights", p.weights}}}};
                          },
                      },
                      prior);
}

ParamPrior prior_from_json(const json& j) {
    return guarded("parameter prior", [&]() -> ParamPrior {
        if (j.is_number()) return PointPrior{j.get<double>()};
        if (!j.is_object() || j.size() != 1)
            spec_error("prior must be {\"point\"|\"uniform\"|\"grid\": ...}");
        if (j.contains("point")) return PointPrior{require_number(j.at("point"), "point")};
        if (j.contains("uniform")) {
            const auto& r = j.at("uniform");
            if (!r.is_array() || r.size() != 2) spec_error("uniform prior must be [lo, hi]");
            return UniformPrior{require_number(r[0], "uniform lo"), require_number(r[1], "uniform hi")};
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            GridPrior p;
            p.values = require(g, "values", "grid prior").get<std::vector<double>>();
            if (g.contains("weights")) {
                p.weights = g.at("weights").get<std::vector<double>>();
            } else {
                p.weights.assign(p.values.size(), p.values.empty() ? 0.0 : 1.0 / p.values.size());
            }
            return p;
        }
        spec_error("unknown prior variant " + j.dump());
    });
}

// Model specs ------------------------------------------------------------------

json to_json(const ModelSpec& spec) {
    json j;
    j["type"] = model_type_name(spec);
    j["n"] = spec.n;
    if (!spec.label.empty()) j["label"] = spec.label;
    std::visit(overloaded{
                   [&](const ErdosRenyiModel& m) { j["p"] = to_json(m.p); },
                   [&](const SbmModel& m) {
                       j["k"] = to_json(m.k);
                       std::visit(overloaded{
                                      [&](const EqualBlocks&) { j["membership"] = "equal"; },
                                      [&](const DirichletBlocks& d) {
                                          j["membership"] = {{"dirichlet", d.concentration}};
                                      },
                                      [&](const FixedBlocks& f) {
                                          j["membership"] = {{"fixed", f.assignment}};
                                      },
                                  },
                                  m.membership);
                       if (m.edge_probs) j["edge_probs"] = *m.edge_probs;
                       else j["edge_probs"] = {{"p_in", to_json(m.p_in)}, {"p_out", to_json(m.p_out)}};
                   },
                   [&](const PowerLawModel& m) {
                       j["alpha"] = to_json(m.alpha);
                       j["d_min"] = m.d_min;
                   },
                   [&](const LogLinearModel& m) {
                       j["lambda"] = m.lambda;
                       json terms = json::array();
                       for (const auto& t : m.terms)
                           terms.push_back({{"weight", t.weight}, {"function", function_to_json(t.function)}});
                       j["terms"] = terms;
                       if (m.burn_in) j["burn_in"] = *m.burn_in;
                       if (m.thin) j["thin"] = *m.thin;
                   },
               },
               spec.model);
    return j;
}

ModelSpec model_spec_from_json(const json& j) {
    ModelSpec spec = guarded("model spec", [&] {
        if (!j.is_object()) spec_error("model spec must be a JSON object");
        ModelSpec s;
        const auto type = require(j, "type", "model spec").get<std::string>();
        s.n = require_count(require(j, "n", "model spec"), "n");
        if (j.contains("label")) s.label = j.at("label").get<std::string>();

        if (type == "er") {
            s.model = ErdosRenyiModel{prior_from_json(require(j, "p", "er"))};
        } else if (type == "sbm") {
            SbmModel m;
            m.k = prior_from_json(require(j, "k", "sbm"));
            if (j.contains("membership")) {
                const auto& mj = j.at("membership");
                if (mj.is_string() && mj.get<std::string>() == "equal") m.membership = EqualBlocks{};
                else if (mj.is_object() && mj.contains("dirichlet"))
                    m.membership = DirichletBlocks{require_number(mj.at("dirichlet"), "dirichlet")};
                else if (mj.is_object() && mj.contains("fixed"))
                    m.membership = FixedBlocks{mj.at("fixed").get<std::vector<std::size_t>>()};
                else spec_error("membership must be \"equal\", {\"dirichlet\": c} or {\"fixed\": [...]}");
            }
            const auto& ep = require(j, "edge_probs", "sbm");
            if (ep.is_array()) {
                m.edge_probs = ep.get<std::vector<std::vector<double>>>();
            } else {
                m.p_in = prior_from_json(require(ep, "p_in", "sbm edge_probs"));
                m.p_out = prior_from_json(require(ep, "p_out", "sbm edge_probs"));
            }
            s.model = std::move(m);
        } else if (type == "powerlaw") {
            PowerLawModel m;
            m.alpha = prior_from_json(require(j, "alpha", "powerlaw"));
            if (j.contains("d_min")) m.d_min = require_count(j.at("d_min"), "d_min");
            s.model = m;
        } else if (type == "loglinear") {
            LogLinearModel m;
            m.lambda = require_number(require(j, "lambda", "loglinear"), "lambda");
            const auto& terms = require(j, "terms", "loglinear");
            if (!terms.is_array()) spec_error("terms must be an array");
            for (const auto& t : terms) {
                LogLinearTerm term;
                if (t.contains("weight")) term.weight = require_number(t.at("weight"), "weight");
                term.function = function_from_json(require(t, "function", "loglinear term"));
                m.terms.push_back(term);
            }
            if (j.contains("burn_in")) m.burn_in = require_count(j.at("burn_in"), "burn_in");
            if (j.contains("thin")) m.thin = require_count(j.at("thin"), "thin");
            s.model = std::move(m);
        } else {
            spec_error("unknown model type '" + type + "'");
        }
        return s;
    });
    validate(spec);
    return spec;
}

ModelSpec parse_model_spec(std::string_view text) { return model_spec_from_json(parse_json(text)); }

// Features and losses ----------------------------------------------------------

json to_json(const FeatureKind& kind) {
    json j{{"kind", std::string(feature_token(kind.id))}};
    if (kind.id == FeatureKind::Id::PowerLawExponent) j["d_min"] = kind.d_min;
    if (kind.id == FeatureKind::Id::BlockCount) j["k_max"] = kind.k_max;
    return j;
}

FeatureKind feature_kind_from_json(const json& j) {
    if (j.is_string()) return parse_feature_kind(j.get<std::string>());
    return guarded("feature", [&] {
        FeatureKind k = parse_feature_kind(require(j, "kind", "feature").get<std::string>());
        if (j.contains("d_min") && k.id == FeatureKind::Id::PowerLawExponent)
            k.d_min = require_count(j.at("d_min"), "d_min");
        if (j.contains("k_max") && k.id == FeatureKind::Id::BlockCount)
            k.k_max = require_count(j.at("k_max"), "k_max");
        if (k.d_min < 1 || k.k_max < 1) spec_error("d_min and k_max must be >= 1");
        return k;
    });
}

json to_json(const FeatureValue& value) {
    if (value.is_discrete()) return value.as_integer();
    return number_to_json(value.as_double());
}

FeatureValue feature_value_from_json(const json& j) {
    if (j.is_number_integer()) return FeatureValue::discrete(j.get<std::int64_t>());
    return FeatureValue::continuous(number_from_json(j));
}

json to_json(const Loss& loss) {
    if (loss.kind == Loss::Kind::ZeroOne)
        return json{{"kind", std::string(loss_token(loss.kind))}, {"tolerance", loss.tolerance}};
    return std::string(loss_token(loss.kind));
}

Loss loss_from_json(const json& j) {
    if (j.is_string()) return parse_loss(j.get<std::string>());
    return guarded("loss", [&] {
        Loss l = parse_loss(require(j, "kind", "loss").get<std::string>());
        if (j.contains("tolerance")) l.tolerance = require_number(j.at("tolerance"), "tolerance");
        if (!(l.tolerance >= 0.0)) spec_error("loss tolerance must be >= 0");
        return l;
    });
}

// Reports ----------------------------------------------------------------------

json to_json(const ComparisonReport& r) {
    json j;
    j["model_1"] = r.model_1;
    j["model_2"] = r.model_2;
    j["n_samples"] = r.n_samples;
    j["master_seed"] = r.master_seed;
    j["loss"] = to_json(r.loss);
    j["features"] = json::array();
    for (const auto& f : r.features) j["features"].push_back(feature_record_to_json(f));
    j["combined_ratio"] = number_to_json(r.combined_ratio);
    j["model_priors"] = {r.model_priors[0], r.model_priors[1]};
    j["posterior"] = {number_to_json(r.posterior[0]), number_to_json(r.posterior[1])};
    j["posterior_odds"] = number_to_json(r.posterior_odds);
    j["decision"] = std::string(decision_token(r.decision));
    j["decision_rule"] = r.decision_rule;
    j["block_count_method"] = r.block_count_method;
    return j;
}

ComparisonReport comparison_report_from_json(const json& j) {
    try {
        ComparisonReport r;
        r.model_1 = j.at("model_1").get<std::string>();
        r.model_2 = j.at("model_2").get<std::string>();
        r.n_samples = j.at("n_samples").get<std::size_t>();
        r.master_seed = j.at("master_seed").get<std::uint64_t>();
        r.loss = loss_from_json(j.at("loss"));
        for (const auto& f : j.at("features")) r.features.push_back(feature_record_from_json(f));
        r.combined_ratio = number_from_json(j.at("combined_ratio"));
        r.model_priors = {j.at("model_priors")[0].get<double>(), j.at("model_priors")[1].get<double>()};
        r.posterior = {number_from_json(j.at("posterior")[0]), number_from_json(j.at("posterior")[1])};
        r.posterior_odds = number_from_json(j.at("posterior_odds"));
        r.decision = decision_from_token(j.at("decision").get<std::string>());
        r.decision_rule = j.at("decision_rule").get<std::string>();
        r.block_count_method = j.at("block_count_method").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string("malformed comparison report: ") + e.what());
    }
}

std::string comparison_report_csv(const ComparisonReport& r) {
    std::ostringstream out;
    out << "kind,observed,evidence_1,evidence_2,bayes_factor,el_1,el_2,loss_ratio\n";
    for (const auto& f : r.features) {
        out << csv_field(feature_label(f.kind)) << ','
            << (f.observed.is_discrete() ? std::to_string(f.observed.as_integer())
                                         : format_number(f.observed.as_double()))
            << ',' << format_number(f.evidence_1) << ',' << format_number(f.evidence_2) << ','
            << format_number(f.bayes_factor) << ',' << format_number(f.el_1) << ','
            << format_number(f.el_2) << ',' << format_number(f.loss_ratio) << '\n';
    }
    return out.str();
}

json to_json(const ElicitReport& r) {
    json j;
    j["models"] = r.models;
    j["n_samples"] = r.n_samples;
    j["master_seed"] = r.master_seed;
    j["ranges"] = json::array();
    for (std::size_t q = 0; q < r.ranges.size(); ++q) {
        json range = to_json(r.ranges[q].kind);
        range["lo"] = number_to_json(r.ranges[q].lo);
        range["hi"] = number_to_json(r.ranges[q].hi);
        json per_model = json::array();
        for (std::size_t m = 0; m < r.models.size(); ++m) {
            const auto& p = r.probabilities[m][q];
            per_model.push_back({{"model", r.models[m]},
                                 {"probability", p.probability},
                                 {"standard_error", p.standard_error},
                                 {"inside", p.inside},
                                 {"total", p.total}});
        }
        range["results"] = per_model;
        json ratios = json::array();
        for (std::size_t a = 0; a < r.models.size(); ++a) {
            json row = json::array();
            for (std::size_t b = 0; b < r.models.size(); ++b) row.push_back(number_to_json(r.ratio(q, a, b)));
            ratios.push_back(row);
        }
        range["ratios"] = ratios;
        j["ranges"].push_back(range);
    }
    return j;
}

std::string elicit_report_csv(const ElicitReport& r) {
    std::ostringstream out;
    out << "model,feature,lo,hi,probability,standard_error,inside,total\n";
    for (std::size_t m = 0; m < r.models.size(); ++m)
        for (std::size_t q = 0; q < r.ranges.size(); ++q) {
            const auto& p = r.probabilities[m][q];
            out << csv_field(r.models[m]) << ',' << csv_field(feature_label(r.ranges[q].kind)) << ','
                << format_number(r.ranges[q].lo) << ',' << format_number(r.ranges[q].hi) << ','
                << format_number(p.probability) << ',' << format_number(p.standard_error) << ','
                << p.inside << ',' << p.total << '\n';
        }
    return out.str();
}

json to_json(const StudyResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) {
        json windows = json::object();
        for (std::size_t w = 0; w < result.window_labels.size(); ++w)
            windows[result.window_labels[w]] = number_to_json(r.window_probabilities[w]);
        json features = json::array();
        for (const auto& f : r.features) features.push_back(feature_label(f));
        json el1 = json::array(), el2 = json::array();
        for (double x : r.el_1) el1.push_back(number_to_json(x));
        for (double x : r.el_2) el2.push_back(number_to_json(x));
        rows.push_back({{"real_param", r.real_param},
                        {"loss", to_json(r.loss)},
                        {"loss_ratio", number_to_json(r.loss_ratio)},
                        {"windows", windows},
                        {"features", features},
                        {"el_1", el1},
                        {"el_2", el2},
                        {"status", r.degenerate ? "degenerate_ratio" : "ok"}});
    }
    return json{{"rows", rows}};
}

json to_json(const InferReport& r) {
    json observed = json::array();
    for (const auto& o : r.observed) {
        json item = to_json(o.kind);
        item["value"] = to_json(o.value);
        observed.push_back(item);
    }
    json points = json::array();
    for (std::size_t j = 0; j < r.posterior.hypotheses.size(); ++j) {
        const auto& h = r.posterior.hypotheses[j];
        points.push_back({{"parameter", h.parameter},
                          {"value", h.value},
                          {"prior", h.prior_weight},
                          {"log_evidence", number_to_json(r.posterior.log_evidence[j])},
                          {"posterior", r.posterior.posterior[j]}});
    }
    return json{{"n_samples", r.n_samples},
                {"master_seed", r.master_seed},
                {"observed", observed},
                {"grid", points}};
}

std::string infer_report_csv(const InferReport& r) {
    std::ostringstream out;
    out << "parameter,value,prior,log_evidence,posterior\n";
    for (std::size_t j = 0; j < r.posterior.hypotheses.size(); ++j) {
        const auto& h = r.posterior.hypotheses[j];
        out << h.parameter << ',' << format_number(h.value) << ',' << format_number(h.prior_weight) << ','
            << format_number(r.posterior.log_evidence[j]) << ',' << format_number(r.posterior.posterior[j])
            << '\n';
    }
    return out.str();
}

// Configs ----------------------------------------------------------------------

CompareConfig compare_config_from_json(const json& j) {
    return guarded("compare config", [&] {
        CompareConfig c;
        c.model_1 = labeled_spec(require(j, "model_1", "compare config"), "model_1");
        c.model_2 = labeled_spec(require(j, "model_2", "compare config"), "model_2");
        c.features = features_from_json(require(j, "features", "compare config"));
        if (j.contains("loss")) c.loss = loss_from_json(j.at("loss"));
        if (j.contains("samples")) c.samples = require_count(j.at("samples"), "samples");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads")) c.threads = static_cast<unsigned>(require_count(j.at("threads"), "threads"));
        if (j.contains("model_priors")) {
            auto p = j.at("model_priors").get<std::vector<double>>();
            if (p.size() != 2) spec_error("model_priors must have two entries");
            c.model_priors = {p[0], p[1]};
        }
        if (j.contains("independent_streams")) c.independent_streams = j.at("independent_streams").get<bool>();
        if (j.contains("pseudo_count")) c.pseudo_count = require_number(j.at("pseudo_count"), "pseudo_count");
        if (c.samples < 1) spec_error("samples must be >= 1");
        return c;
    });
}

ElicitConfig elicit_config_from_json(const json& j) {
    return guarded("elicit config", [&] {
        ElicitConfig c;
        const auto& models = require(j, "models", "elicit config");
        if (!models.is_array() || models.empty()) spec_error("'models' must be a non-empty array");
        for (std::size_t i = 0; i < models.size(); ++i)
            c.models.push_back(labeled_spec(models[i], "model_" + std::to_string(i + 1)));
        const auto& ranges = require(j, "ranges", "elicit config");
        if (!ranges.is_array() || ranges.empty()) spec_error("'ranges' must be a non-empty array");
        for (const auto& r : ranges) {
            RangeQuery q;
            q.kind = feature_kind_from_json(require(r, "feature", "range"));
            q.lo = number_from_json(require(r, "lo", "range"));
            q.hi = number_from_json(require(r, "hi", "range"));
            c.ranges.push_back(q);
        }
        if (j.contains("samples")) c.samples = require_count(j.at("samples"), "samples");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads")) c.threads = static_cast<unsigned>(require_count(j.at("threads"), "threads"));
        if (c.samples < 1) spec_error("samples must be >= 1");
        return c;
    });
}

StudyConfig study_config_from_json(const json& j) {
    return guarded("study config", [&] {
        StudyConfig c;
        if (j.contains("samples")) c.samples = require_count(j.at("samples"), "samples");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads")) c.threads = static_cast<unsigned>(require_count(j.at("threads"), "threads"));
        if (j.contains("pseudo_count")) c.pseudo_count = require_number(j.at("pseudo_count"), "pseudo_count");
        if (j.contains("losses")) {
            c.losses.clear();
            for (const auto& l : j.at("losses")) c.losses.push_back(loss_from_json(l));
            if (c.losses.empty()) spec_error("'losses' must not be empty");
        }
        for (const auto& g : require(j, "grids", "study config"))
            c.grids.push_back({require(g, "name", "grid").get<std::string>(),
                               model_spec_from_json(require(g, "model", "grid"))});
        if (c.grids.empty()) spec_error("'grids' must not be empty");
        if (j.contains("windows"))
            for (const auto& w : j.at("windows"))
                c.windows.push_back({require(w, "label", "window").get<std::string>(),
                                     require(w, "grid", "window").get<std::string>(),
                                     number_from_json(require(w, "lo", "window")),
                                     number_from_json(require(w, "hi", "window"))});
        for (const auto& r : require(j, "rows", "study config")) {
            StudyRow row;
            row.real_param = require(r, "real_param", "row").get<std::string>();
            row.data = model_spec_from_json(require(r, "data", "row"));
            row.features = features_from_json(require(r, "features", "row"));
            row.model_1 = labeled_spec(require(r, "model_1", "row"), "model_1");
            row.model_2 = labeled_spec(require(r, "model_2", "row"), "model_2");
            c.rows.push_back(std::move(row));
        }
        if (c.rows.empty()) spec_error("'rows' must not be empty");
        if (c.samples < 1) spec_error("samples must be >= 1");
        return c;
    });
}

InferConfig infer_config_from_json(const json& j) {
    return guarded("infer config", [&] {
        InferConfig c;
        c.model = model_spec_from_json(require(j, "model", "infer config"));
        c.features = features_from_json(require(j, "features", "infer config"));
        if (j.contains("samples")) c.samples = require_count(j.at("samples"), "samples");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads")) c.threads = static_cast<unsigned>(require_count(j.at("threads"), "threads"));
        if (j.contains("pseudo_count")) c.pseudo_count = require_number(j.at("pseudo_count"), "pseudo_count");
        if (c.samples < 1) spec_error("samples must be >= 1");
        return c;
    });
}

}  // namespace netsel
