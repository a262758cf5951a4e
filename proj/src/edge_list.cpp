#include <charconv>
#include <sstream>
#include <unordered_map>

#include "netsel/error.hpp"
#include "netsel/graph.hpp"

namespace netsel {
namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        ++line_no;
        fn(line_no, line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        parse_fail(line, "expected a non-negative integer node id, got '" + std::string(tok) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Graph read_edge_list(std::string_view text) {
    std::optional<std::size_t> n;
    std::vector<std::pair<std::size_t, std::size_t>> raw;
    std::vector<std::size_t> raw_lines;

    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        line = trim(line);
        if (line.empty()) return;
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            if (body.starts_with("n=")) {
                if (n) parse_fail(line_no, "duplicate '# n=' header");
                n = parse_index(trim(body.substr(2)), line_no);
            }
            return;
        }
        auto fields = split_fields(line);
        if (fields.size() != 2) parse_fail(line_no, "expected 'u<TAB>v'");
        auto u = parse_index(fields[0], line_no);
        auto v = parse_index(fields[1], line_no);
        if (u == v) parse_fail(line_no, "self-loop on node " + std::to_string(u));
        raw.emplace_back(u, v);
        raw_lines.push_back(line_no);
    });

    if (!n) fail(ErrorCode::ParseError, "missing '# n=<N>' header");
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [u, v] = raw[i];
        if (u >= *n || v >= *n)
            parse_fail(raw_lines[i], "node id out of range for n=" + std::to_string(*n));
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return Graph::from_edges(*n, edges);
}

std::string write_edge_list(const Graph& g) {
    std::ostringstream out;
    out << "# n=" << g.node_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << '\t' << v << '\n';
    return out.str();
}

LabeledGraph read_labeled_edge_list(std::string_view text) {
    LabeledGraph result;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<Edge> edges;
    auto intern = [&](std::string_view label) {
        auto [it, inserted] = ids.try_emplace(std::string(label), static_cast<NodeId>(ids.size()));
        if (inserted) result.labels.emplace_back(label);
        return it->second;
    };
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        line = trim(line);
        if (line.empty() || line.front() == '#') return;
        auto fields = split_fields(line);
        if (fields.size() != 2) parse_fail(line_no, "expected two node labels");
        if (fields[0] == fields[1]) parse_fail(line_no, "self-loop on '" + std::string(fields[0]) + "'");
        NodeId u = intern(fields[0]);
        NodeId v = intern(fields[1]);
        edges.emplace_back(u, v);
    });
    result.graph = Graph::from_edges(result.labels.size(), edges);
    return result;
}

}  // namespace netsel
