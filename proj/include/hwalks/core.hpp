#pragma once

#include <hwalks/error.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hwalks {

using VertexId = std::size_t;
using ColorId = std::size_t;

struct Arc {
    VertexId tail = 0;
    VertexId head = 0;

    auto operator<=>(const Arc&) const = default;
};

enum class LoopPolicy { forbidden, allowed };

namespace detail {

inline std::unordered_map<std::string, VertexId> index_labels(const std::vector<std::string>& labels)
{
    std::unordered_map<std::string, VertexId> index;
    index.reserve(labels.size());
    for (VertexId v = 0; v < labels.size(); ++v) {
        if (labels[v].empty())
            throw Error("empty vertex label");
        if (!index.emplace(labels[v], v).second)
            throw DuplicateVertex(labels[v]);
    }
    return index;
}

// Compressed adjacency: row v occupies [offset[v], offset[v+1]) of targets.
struct Csr {
    std::vector<std::size_t> offset;
    std::vector<VertexId> targets;

    std::span<const VertexId> row(VertexId v) const
    {
        return {targets.data() + offset[v], offset[v + 1] - offset[v]};
    }
};

} // namespace detail

/// A finite digraph on string-labelled vertices. Declaration order of the
/// labels is the canonical vertex order; arcs are kept sorted by
/// (tail, head) in that order, so arc indices are stable and every
/// vertex's out-arcs form a contiguous block.
class Digraph {
public:
    Digraph() : out_{{0}, {}}, in_{{0}, {}} {}

    Digraph(std::vector<std::string> labels, std::vector<Arc> arcs, LoopPolicy policy)
        : labels_(std::move(labels)), arcs_(std::move(arcs)), policy_(policy)
    {
        index_ = detail::index_labels(labels_);
        std::sort(arcs_.begin(), arcs_.end());
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            const Arc& a = arcs_[i];
            if (a.tail >= labels_.size() || a.head >= labels_.size())
                throw UnknownVertex("#" + std::to_string(std::max(a.tail, a.head)));
            if (a.tail == a.head && policy_ == LoopPolicy::forbidden)
                throw LoopForbidden(labels_[a.tail]);
            if (i > 0 && arcs_[i - 1] == a)
                throw DuplicateArc(labels_[a.tail], labels_[a.head]);
        }
        build_adjacency();
    }

    /// Convenience constructor from label pairs.
    static Digraph from_labels(std::vector<std::string> labels,
                               const std::vector<std::pair<std::string, std::string>>& arcs,
                               LoopPolicy policy = LoopPolicy::forbidden)
    {
        auto index = detail::index_labels(labels);
        std::vector<Arc> ids;
        ids.reserve(arcs.size());
        for (const auto& [u, v] : arcs) {
            auto iu = index.find(u);
            auto iv = index.find(v);
            if (iu == index.end())
                throw UnknownVertex(u);
            if (iv == index.end())
                throw UnknownVertex(v);
            ids.push_back({iu->second, iv->second});
        }
        return Digraph(std::move(labels), std::move(ids), policy);
    }

    std::size_t order() const noexcept { return labels_.size(); }
    std::size_t size() const noexcept { return arcs_.size(); }
    LoopPolicy loop_policy() const noexcept { return policy_; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(VertexId v) const { return labels_.at(v); }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }

    std::optional<VertexId> find(std::string_view label) const
    {
        auto it = index_.find(std::string(label));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    VertexId index_of(std::string_view label) const
    {
        if (auto v = find(label))
            return *v;
        throw UnknownVertex(std::string(label));
    }

    std::span<const VertexId> out(VertexId v) const { return out_.row(v); }
    std::span<const VertexId> in(VertexId v) const { return in_.row(v); }
    std::size_t out_degree(VertexId v) const { return out(v).size(); }
    std::size_t in_degree(VertexId v) const { return in(v).size(); }

    /// Index of the first out-arc of v; out-arc j of v has index first_out_arc(v) + j.
    std::size_t first_out_arc(VertexId v) const { return out_.offset[v]; }

    std::optional<std::size_t> arc_index(VertexId u, VertexId v) const
    {
        auto row = out(u);
        auto it = std::lower_bound(row.begin(), row.end(), v);
        if (it == row.end() || *it != v)
            return std::nullopt;
        return out_.offset[u] + static_cast<std::size_t>(it - row.begin());
    }

    bool has_arc(VertexId u, VertexId v) const { return arc_index(u, v).has_value(); }
    bool has_loop(VertexId v) const { return has_arc(v, v); }
    bool is_digon(VertexId u, VertexId v) const { return u != v && has_arc(u, v) && has_arc(v, u); }
    bool adjacent(VertexId u, VertexId v) const { return has_arc(u, v) || has_arc(v, u); }

    bool has_loops() const
    {
        return std::any_of(arcs_.begin(), arcs_.end(), [](const Arc& a) { return a.tail == a.head; });
    }

    friend bool operator==(const Digraph& a, const Digraph& b)
    {
        return a.labels_ == b.labels_ && a.arcs_ == b.arcs_;
    }

private:
    void build_adjacency()
    {
        const std::size_t n = labels_.size();
        out_.offset.assign(n + 1, 0);
        in_.offset.assign(n + 1, 0);
        for (const Arc& a : arcs_) {
            ++out_.offset[a.tail + 1];
            ++in_.offset[a.head + 1];
        }
        for (std::size_t v = 0; v < n; ++v) {
            out_.offset[v + 1] += out_.offset[v];
            in_.offset[v + 1] += in_.offset[v];
        }
        out_.targets.resize(arcs_.size());
        in_.targets.resize(arcs_.size());
        std::vector<std::size_t> fill(in_.offset.begin(), in_.offset.end() - 1);
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            out_.targets[i] = arcs_[i].head;
            in_.targets[fill[arcs_[i].head]++] = arcs_[i].tail;
        }
    }

    std::vector<std::string> labels_;
    std::vector<Arc> arcs_;
    LoopPolicy policy_ = LoopPolicy::forbidden;
    std::unordered_map<std::string, VertexId> index_;
    detail::Csr out_;
    detail::Csr in_;
};

/// The digraph H whose vertices serve as arc colors. Loops are allowed and
/// significant: a loop on c lets two consecutive c-colored arcs form an H-walk.
class Pattern {
public:
    Pattern() = default;

    explicit Pattern(Digraph graph) : graph_(std::move(graph))
    {
        if (graph_.loop_policy() != LoopPolicy::allowed)
            graph_ = Digraph(graph_.labels(), graph_.arcs(), LoopPolicy::allowed);
        const std::size_t n = graph_.order();
        compatible_.assign(n * n, 0);
        for (const Arc& a : graph_.arcs())
            compatible_[a.tail * n + a.head] = 1;
    }

    const Digraph& graph() const noexcept { return graph_; }
    std::size_t order() const noexcept { return graph_.order(); }
    const std::string& label(ColorId c) const { return graph_.label(c); }

    /// True when a c1-colored arc may be followed by a c2-colored arc.
    bool compatible(ColorId c1, ColorId c2) const { return compatible_[c1 * order() + c2] != 0; }

    bool is_looped(ColorId c) const { return compatible(c, c); }

    bool is_fully_looped() const
    {
        for (ColorId c = 0; c < order(); ++c)
            if (!is_looped(c))
                return false;
        return true;
    }

    std::vector<ColorId> looped_vertices() const
    {
        std::vector<ColorId> out;
        for (ColorId c = 0; c < order(); ++c)
            if (is_looped(c))
                out.push_back(c);
        return out;
    }

    friend bool operator==(const Pattern& a, const Pattern& b) { return a.graph_ == b.graph_; }

private:
    Digraph graph_{{}, {}, LoopPolicy::allowed};
    std::vector<char> compatible_;
};

/// Pattern whose vertices are the given colors, each looped, with no other arcs.
inline Pattern looped_isolated_pattern(const std::vector<std::string>& colors)
{
    std::vector<Arc> loops;
    for (VertexId c = 0; c < colors.size(); ++c)
        loops.push_back({c, c});
    return Pattern(Digraph(colors, std::move(loops), LoopPolicy::allowed));
}

/// A loopless digraph D whose arcs are totally colored by the vertices of a
/// pattern H. colors()[i] is the color of arc i of digraph().
class ColoredDigraph {
public:
    ColoredDigraph() = default;

    ColoredDigraph(Digraph digraph, Pattern pattern, std::vector<ColorId> colors)
        : digraph_(std::move(digraph)), pattern_(std::move(pattern)), colors_(std::move(colors))
    {
        if (digraph_.has_loops()) {
            for (const Arc& a : digraph_.arcs())
                if (a.tail == a.head)
                    throw LoopForbidden(digraph_.label(a.tail));
        }
        if (colors_.size() != digraph_.size())
            throw Error("coloring covers " + std::to_string(colors_.size()) + " arcs, digraph has "
                        + std::to_string(digraph_.size()));
        for (ColorId c : colors_)
            if (c >= pattern_.order())
                throw UnknownColor("#" + std::to_string(c));
    }

    /// Builds from (tail, head, color) label triples.
    static ColoredDigraph from_labels(std::vector<std::string> labels,
                                      const std::vector<std::tuple<std::string, std::string, std::string>>& arcs,
                                      Pattern pattern)
    {
        auto index = detail::index_labels(labels);
        std::vector<std::pair<Arc, ColorId>> colored;
        for (const auto& [u, v, c] : arcs) {
            auto iu = index.find(u);
            auto iv = index.find(v);
            if (iu == index.end())
                throw UnknownVertex(u);
            if (iv == index.end())
                throw UnknownVertex(v);
            auto color = pattern.graph().find(c);
            if (!color)
                throw UnknownColor(c);
            colored.push_back({{iu->second, iv->second}, *color});
        }
        return from_arcs(std::move(labels), std::move(colored), std::move(pattern));
    }

    /// Builds from index arcs with colors in arbitrary order.
    static ColoredDigraph from_arcs(std::vector<std::string> labels, std::vector<std::pair<Arc, ColorId>> arcs,
                                    Pattern pattern)
    {
        std::sort(arcs.begin(), arcs.end());
        std::vector<Arc> plain;
        std::vector<ColorId> colors;
        plain.reserve(arcs.size());
        colors.reserve(arcs.size());
        for (const auto& [a, c] : arcs) {
            plain.push_back(a);
            colors.push_back(c);
        }
        return ColoredDigraph(Digraph(std::move(labels), std::move(plain), LoopPolicy::forbidden),
                              std::move(pattern), std::move(colors));
    }

    const Digraph& digraph() const noexcept { return digraph_; }
    const Pattern& pattern() const noexcept { return pattern_; }
    const std::vector<ColorId>& colors() const noexcept { return colors_; }
    ColorId color(std::size_t arc) const { return colors_.at(arc); }
    std::size_t order() const noexcept { return digraph_.order(); }

    std::optional<ColorId> color(VertexId u, VertexId v) const
    {
        if (auto i = digraph_.arc_index(u, v))
            return colors_[*i];
        return std::nullopt;
    }

    friend bool operator==(const ColoredDigraph& a, const ColoredDigraph& b)
    {
        return a.digraph_ == b.digraph_ && a.pattern_ == b.pattern_ && a.colors_ == b.colors_;
    }

private:
    Digraph digraph_;
    Pattern pattern_;
    std::vector<ColorId> colors_;
};

struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph. Edges are stored with u < v in declaration order.
class Graph {
public:
    Graph() = default;

    Graph(std::vector<std::string> labels, std::vector<Edge> edges)
        : labels_(std::move(labels)), edges_(std::move(edges))
    {
        index_ = detail::index_labels(labels_);
        for (Edge& e : edges_) {
            if (e.u >= labels_.size() || e.v >= labels_.size())
                throw UnknownVertex("#" + std::to_string(std::max(e.u, e.v)));
            if (e.u == e.v)
                throw Error("self-edge on '" + labels_[e.u] + "'");
            if (e.u > e.v)
                std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (edges_[i] == edges_[i - 1])
                throw Error("duplicate edge {" + labels_[edges_[i].u] + ", " + labels_[edges_[i].v] + "}");
        neighbors_.assign(labels_.size(), {});
        for (const Edge& e : edges_) {
            neighbors_[e.u].push_back(e.v);
            neighbors_[e.v].push_back(e.u);
        }
        for (auto& row : neighbors_)
            std::sort(row.begin(), row.end());
    }

    static Graph from_labels(std::vector<std::string> labels,
                             const std::vector<std::pair<std::string, std::string>>& edges)
    {
        auto index = detail::index_labels(labels);
        std::vector<Edge> ids;
        for (const auto& [u, v] : edges) {
            auto iu = index.find(u);
            auto iv = index.find(v);
            if (iu == index.end())
                throw UnknownVertex(u);
            if (iv == index.end())
                throw UnknownVertex(v);
            ids.push_back({iu->second, iv->second});
        }
        return Graph(std::move(labels), std::move(ids));
    }

    std::size_t order() const noexcept { return labels_.size(); }
    std::size_t size() const noexcept { return edges_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(VertexId v) const { return labels_.at(v); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const VertexId> neighbors(VertexId v) const { return neighbors_.at(v); }

    std::optional<VertexId> find(std::string_view label) const
    {
        auto it = index_.find(std::string(label));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    VertexId index_of(std::string_view label) const
    {
        if (auto v = find(label))
            return *v;
        throw UnknownVertex(std::string(label));
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, VertexId> index_;
    std::vector<std::vector<VertexId>> neighbors_;
};

/// Subdigraph induced by `subset` (any order, duplicates ignored). The result
/// lists the chosen vertices in their original declaration order.
inline Digraph induced_subdigraph(const Digraph& d, std::span<const VertexId> subset)
{
    std::vector<VertexId> keep(subset.begin(), subset.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<std::size_t> position(d.order(), d.order());
    std::vector<std::string> labels;
    for (VertexId v : keep) {
        if (v >= d.order())
            throw UnknownVertex("#" + std::to_string(v));
        position[v] = labels.size();
        labels.push_back(d.label(v));
    }
    std::vector<Arc> arcs;
    for (VertexId v : keep)
        for (VertexId w : d.out(v))
            if (position[w] != d.order())
                arcs.push_back({position[v], position[w]});
    return Digraph(std::move(labels), std::move(arcs), d.loop_policy());
}

inline Digraph induced_subdigraph(const Digraph& d, const std::vector<std::string>& subset)
{
    std::vector<VertexId> ids;
    ids.reserve(subset.size());
    for (const auto& label : subset)
        ids.push_back(d.index_of(label));
    return induced_subdigraph(d, std::span<const VertexId>(ids));
}

/// Copy of d with every loop removed.
inline Digraph without_loops(const Digraph& d)
{
    std::vector<Arc> arcs;
    for (const Arc& a : d.arcs())
        if (a.tail != a.head)
            arcs.push_back(a);
    return Digraph(d.labels(), std::move(arcs), LoopPolicy::forbidden);
}

/// Orients every edge from its earlier-declared end to its later-declared
/// end. The result is acyclic since declaration order is a topological order.
inline Digraph acyclic_orientation(const Graph& g)
{
    std::vector<Arc> arcs;
    arcs.reserve(g.size());
    for (const Edge& e : g.edges())
        arcs.push_back({e.u, e.v});
    return Digraph(g.labels(), std::move(arcs), LoopPolicy::forbidden);
}

} // namespace hwalks
