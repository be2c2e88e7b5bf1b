#pragma once

// Line-oriented text formats. Tokens are whitespace separated, blank lines
// and lines starting with '#' are ignored.
//
//   digraph <n> | pattern <n>      colored <n>                 graph <n>
//   vertex <label>   (n times)     pattern-file <path>         vertex <label>
//   arc <u> <v>                    vertex <label>              edge <u> <v>
//                                  arc <u> <v> <color>

#include <hwalks/core.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hwalks {

namespace detail {

struct Line {
    std::size_t number = 0;
    std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        ++number;
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        std::istringstream in{std::string(raw)};
        Line line{number, {}};
        for (std::string tok; in >> tok;)
            line.tokens.push_back(tok);
        if (!line.tokens.empty() && line.tokens.front()[0] != '#')
            lines.push_back(std::move(line));
        if (end == text.size())
            break;
    }
    return lines;
}

inline std::size_t parse_count(const std::string& token, std::size_t line)
{
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(token, &used);
    } catch (const std::exception&) {
        throw ParseError("expected a vertex count, got '" + token + "'", line);
    }
    if (used != token.size() || token[0] == '-')
        throw ParseError("expected a vertex count, got '" + token + "'", line);
    return static_cast<std::size_t>(value);
}

// Header plus the n vertex lines; returns the labels and the index of the
// first line after them.
inline std::vector<std::string> read_header(const std::vector<Line>& lines, std::vector<std::string_view> keywords,
                                            std::size_t& cursor, bool expect_pattern_file,
                                            std::string* pattern_file = nullptr)
{
    if (lines.empty())
        throw ParseError("empty input", 1);
    const Line& head = lines[0];
    bool known = false;
    for (auto k : keywords)
        known = known || head.tokens[0] == k;
    if (!known || head.tokens.size() != 2)
        throw ParseError("malformed header '" + head.tokens[0] + "'", head.number);
    const std::size_t n = parse_count(head.tokens[1], head.number);
    cursor = 1;
    if (expect_pattern_file) {
        if (cursor >= lines.size() || lines[cursor].tokens[0] != "pattern-file" || lines[cursor].tokens.size() != 2)
            throw ParseError("expected 'pattern-file <path>'",
                             cursor < lines.size() ? lines[cursor].number : head.number);
        if (pattern_file)
            *pattern_file = lines[cursor].tokens[1];
        ++cursor;
    }
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> seen;
    while (labels.size() < n) {
        if (cursor >= lines.size())
            throw ParseError("expected " + std::to_string(n) + " vertex lines, found " + std::to_string(labels.size()),
                             lines.back().number);
        const Line& line = lines[cursor++];
        if (line.tokens[0] != "vertex" || line.tokens.size() != 2)
            throw ParseError("expected 'vertex <label>'", line.number);
        if (!seen.emplace(line.tokens[1], line.number).second)
            throw DuplicateVertex(line.tokens[1], line.number);
        labels.push_back(line.tokens[1]);
    }
    return labels;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace detail

/// Parses a digraph or pattern file. Errors carry the offending line.
inline Digraph parse_digraph(std::string_view text, bool loops_allowed)
{
    auto lines = detail::tokenize(text);
    std::size_t cursor = 0;
    auto labels = detail::read_header(lines, {"digraph", "pattern"}, cursor, false);
    std::unordered_map<std::string, VertexId> index;
    for (VertexId v = 0; v < labels.size(); ++v)
        index.emplace(labels[v], v);
    std::vector<Arc> arcs;
    std::set<Arc> seen;
    for (; cursor < lines.size(); ++cursor) {
        const auto& line = lines[cursor];
        if (line.tokens[0] != "arc" || line.tokens.size() != 3)
            throw ParseError("expected 'arc <u> <v>'", line.number);
        auto u = index.find(line.tokens[1]);
        auto v = index.find(line.tokens[2]);
        if (u == index.end())
            throw UnknownVertex(line.tokens[1], line.number);
        if (v == index.end())
            throw UnknownVertex(line.tokens[2], line.number);
        if (u->second == v->second && !loops_allowed)
            throw LoopForbidden(line.tokens[1], line.number);
        Arc a{u->second, v->second};
        if (!seen.insert(a).second)
            throw DuplicateArc(line.tokens[1], line.tokens[2], line.number);
        arcs.push_back(a);
    }
    return Digraph(std::move(labels), std::move(arcs), loops_allowed ? LoopPolicy::allowed : LoopPolicy::forbidden);
}

inline Pattern parse_pattern(std::string_view text) { return Pattern(parse_digraph(text, true)); }

/// Path named on the `pattern-file` line of a colored digraph file.
inline std::string read_pattern_ref(std::string_view text)
{
    auto lines = detail::tokenize(text);
    std::size_t cursor = 0;
    std::string path;
    detail::read_header(lines, {"colored"}, cursor, true, &path);
    return path;
}

inline ColoredDigraph parse_colored_digraph(std::string_view text, const Pattern& pattern)
{
    auto lines = detail::tokenize(text);
    std::size_t cursor = 0;
    auto labels = detail::read_header(lines, {"colored"}, cursor, true);
    std::unordered_map<std::string, VertexId> index;
    for (VertexId v = 0; v < labels.size(); ++v)
        index.emplace(labels[v], v);
    std::vector<std::pair<Arc, ColorId>> arcs;
    std::set<Arc> seen;
    for (; cursor < lines.size(); ++cursor) {
        const auto& line = lines[cursor];
        if (line.tokens[0] != "arc" || line.tokens.size() < 3 || line.tokens.size() > 4)
            throw ParseError("expected 'arc <u> <v> <color>'", line.number);
        if (line.tokens.size() == 3)
            throw MissingColor("(" + line.tokens[1] + ", " + line.tokens[2] + ")", line.number);
        auto u = index.find(line.tokens[1]);
        auto v = index.find(line.tokens[2]);
        if (u == index.end())
            throw UnknownVertex(line.tokens[1], line.number);
        if (v == index.end())
            throw UnknownVertex(line.tokens[2], line.number);
        if (u->second == v->second)
            throw LoopForbidden(line.tokens[1], line.number);
        auto color = pattern.graph().find(line.tokens[3]);
        if (!color)
            throw UnknownColor(line.tokens[3], line.number);
        Arc a{u->second, v->second};
        if (!seen.insert(a).second)
            throw DuplicateArc(line.tokens[1], line.tokens[2], line.number);
        arcs.push_back({a, *color});
    }
    return ColoredDigraph::from_arcs(std::move(labels), std::move(arcs), pattern);
}

inline Graph parse_graph(std::string_view text)
{
    auto lines = detail::tokenize(text);
    std::size_t cursor = 0;
    auto labels = detail::read_header(lines, {"graph"}, cursor, false);
    std::unordered_map<std::string, VertexId> index;
    for (VertexId v = 0; v < labels.size(); ++v)
        index.emplace(labels[v], v);
    std::vector<Edge> edges;
    std::set<Edge> seen;
    for (; cursor < lines.size(); ++cursor) {
        const auto& line = lines[cursor];
        if (line.tokens[0] != "edge" || line.tokens.size() != 3)
            throw ParseError("expected 'edge <u> <v>'", line.number);
        auto u = index.find(line.tokens[1]);
        auto v = index.find(line.tokens[2]);
        if (u == index.end())
            throw UnknownVertex(line.tokens[1], line.number);
        if (v == index.end())
            throw UnknownVertex(line.tokens[2], line.number);
        if (u->second == v->second)
            throw ParseError("self-edge on '" + line.tokens[1] + "'", line.number);
        Edge e{std::min(u->second, v->second), std::max(u->second, v->second)};
        if (!seen.insert(e).second)
            throw ParseError("duplicate edge {" + line.tokens[1] + ", " + line.tokens[2] + "}", line.number);
        edges.push_back(e);
    }
    return Graph(std::move(labels), std::move(edges));
}

inline std::string serialize(const Digraph& d, std::string_view keyword = "digraph")
{
    std::ostringstream out;
    out << keyword << ' ' << d.order() << '\n';
    for (const auto& label : d.labels())
        out << "vertex " << label << '\n';
    for (const Arc& a : d.arcs())
        out << "arc " << d.label(a.tail) << ' ' << d.label(a.head) << '\n';
    return out.str();
}

inline std::string serialize(const Pattern& p) { return serialize(p.graph(), "pattern"); }

inline std::string serialize(const ColoredDigraph& cd, std::string_view pattern_file)
{
    const Digraph& d = cd.digraph();
    std::ostringstream out;
    out << "colored " << d.order() << '\n';
    out << "pattern-file " << pattern_file << '\n';
    for (const auto& label : d.labels())
        out << "vertex " << label << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Arc& a = d.arcs()[i];
        out << "arc " << d.label(a.tail) << ' ' << d.label(a.head) << ' ' << cd.pattern().label(cd.color(i)) << '\n';
    }
    return out.str();
}

inline std::string serialize(const Graph& g)
{
    std::ostringstream out;
    out << "graph " << g.order() << '\n';
    for (const auto& label : g.labels())
        out << "vertex " << label << '\n';
    for (const Edge& e : g.edges())
        out << "edge " << g.label(e.u) << ' ' << g.label(e.v) << '\n';
    return out.str();
}

inline Digraph load_digraph(const std::filesystem::path& path)
{
    return parse_digraph(detail::read_file(path), false);
}

inline Pattern load_pattern(const std::filesystem::path& path) { return parse_pattern(detail::read_file(path)); }

inline Graph load_graph(const std::filesystem::path& path) { return parse_graph(detail::read_file(path)); }

/// Loads a colored digraph, resolving its pattern-file relative to the
/// directory of `path` unless `pattern` is supplied.
inline ColoredDigraph load_colored(const std::filesystem::path& path, const Pattern* pattern = nullptr)
{
    const std::string text = detail::read_file(path);
    if (pattern)
        return parse_colored_digraph(text, *pattern);
    std::filesystem::path ref = read_pattern_ref(text);
    if (ref.is_relative())
        ref = path.parent_path() / ref;
    return parse_colored_digraph(text, load_pattern(ref));
}

} // namespace hwalks
