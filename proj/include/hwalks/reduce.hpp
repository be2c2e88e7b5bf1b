#pragma once

#include <hwalks/core.hpp>
#include <hwalks/io.hpp>
#include <hwalks/kernel.hpp>
#include <hwalks/partition.hpp>
#include <hwalks/reach.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hwalks {

enum class ReductionKind { all_red, subdivision, kcoloring, edge_coloring };

inline const char* to_string(ReductionKind k)
{
    switch (k) {
    case ReductionKind::all_red:
        return "all-red";
    case ReductionKind::subdivision:
        return "subdivide";
    case ReductionKind::kcoloring:
        return "kcol";
    case ReductionKind::edge_coloring:
        return "edge-color";
    }
    return "?";
}

inline ReductionKind parse_reduction_kind(const std::string& s)
{
    if (s == "all-red")
        return ReductionKind::all_red;
    if (s == "subdivide")
        return ReductionKind::subdivision;
    if (s == "kcol")
        return ReductionKind::kcoloring;
    if (s == "edge-color")
        return ReductionKind::edge_coloring;
    throw Error("unknown reduction kind '" + s + "'");
}

enum class OriginKind { original, mid, pendant, cycle, copy, quad };

/// Where a vertex of a constructed instance comes from.
///   original  source vertex `vertex`
///   mid       subdivision vertex of arc (vertex, other)
///   pendant   pendant vertex hanging off that subdivision vertex
///   cycle     vertex `index` (1..k) of the k-cycle of source vertex `vertex`
///   copy      copy of obstruction vertex `part` in the gadget of `vertex`
///   quad      vertex `part` (x, y, z or w) of gadget `index` of arc (vertex, other)
struct Origin {
    OriginKind kind = OriginKind::original;
    std::string vertex;
    std::string other;
    std::size_t index = 0;
    std::string part;

    friend bool operator==(const Origin&, const Origin&) = default;

    std::string tag() const
    {
        switch (kind) {
        case OriginKind::original:
            return "orig:" + vertex;
        case OriginKind::mid:
            return "mid:" + vertex + ":" + other;
        case OriginKind::pendant:
            return "pend:" + vertex + ":" + other;
        case OriginKind::cycle:
            return "cycle:" + vertex + ":" + std::to_string(index);
        case OriginKind::copy:
            return "copy:" + vertex + ":" + part;
        case OriginKind::quad:
            return "quad:" + vertex + ":" + other + ":" + std::to_string(index) + ":" + part;
        }
        return {};
    }

    static Origin parse(const std::string& tag)
    {
        std::vector<std::string> f;
        std::stringstream in(tag);
        for (std::string piece; std::getline(in, piece, ':');)
            f.push_back(piece);
        auto bad = [&] { return Error("malformed provenance tag '" + tag + "'"); };
        auto number = [&](const std::string& s) {
            try {
                return static_cast<std::size_t>(std::stoull(s));
            } catch (const std::exception&) {
                throw bad();
            }
        };
        if (f.empty())
            throw bad();
        if (f[0] == "orig" && f.size() == 2)
            return {OriginKind::original, f[1], {}, 0, {}};
        if (f[0] == "mid" && f.size() == 3)
            return {OriginKind::mid, f[1], f[2], 0, {}};
        if (f[0] == "pend" && f.size() == 3)
            return {OriginKind::pendant, f[1], f[2], 0, {}};
        if (f[0] == "cycle" && f.size() == 3)
            return {OriginKind::cycle, f[1], {}, number(f[2]), {}};
        if (f[0] == "copy" && f.size() == 3)
            return {OriginKind::copy, f[1], {}, 0, f[2]};
        if (f[0] == "quad" && f.size() == 5)
            return {OriginKind::quad, f[1], f[2], number(f[3]), f[4]};
        throw bad();
    }
};

/// A constructed kernel-by-H-walks instance together with the bookkeeping
/// needed to move certificates between it and its source instance.
struct ReductionArtifact {
    ReductionKind kind = ReductionKind::all_red;
    ColoredDigraph colored;
    std::vector<Origin> provenance; // one per vertex of `colored`
    std::size_t k = 0;
    std::optional<Roles> roles; // vertices of the pattern
    std::vector<std::string> source_vertices;
    std::vector<std::pair<std::string, std::string>> source_arcs;

    std::optional<VertexId> find(const Origin& origin) const
    {
        if (index_.empty())
            for (VertexId v = 0; v < provenance.size(); ++v)
                index_.emplace(provenance[v].tag(), v);
        auto it = index_.find(origin.tag());
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    VertexId at(const Origin& origin) const
    {
        if (auto v = find(origin))
            return *v;
        throw CertificateCorrupt("no vertex with provenance " + origin.tag());
    }

private:
    mutable std::map<std::string, VertexId> index_;
};

namespace detail {

inline void require_plain_labels(const std::vector<std::string>& labels)
{
    for (const auto& l : labels)
        if (l.find(':') != std::string::npos)
            throw PreconditionViolated("vertex label '" + l + "' contains ':', which provenance tags reserve");
}

inline std::string arc_name(const std::string& u, const std::string& v) { return u + "->" + v; }

// Accumulates vertices and colored arcs of a construction.
class Builder {
public:
    VertexId add(std::string label, Origin origin)
    {
        labels_.push_back(std::move(label));
        origins_.push_back(std::move(origin));
        return labels_.size() - 1;
    }

    void arc(VertexId u, VertexId v, ColorId c) { arcs_.push_back({{u, v}, c}); }

    void finish(ReductionArtifact& art, const Pattern& pattern)
    {
        art.colored = ColoredDigraph::from_arcs(std::move(labels_), std::move(arcs_), pattern);
        art.provenance = std::move(origins_);
    }

private:
    std::vector<std::string> labels_;
    std::vector<Origin> origins_;
    std::vector<std::pair<Arc, ColorId>> arcs_;
};

} // namespace detail

/// Colors every arc of D with a loopless color `red`. Then the only H-walks
/// are single arcs, so kernels of D and kernels by H-walks coincide.
inline ReductionArtifact reduce_all_red(const Digraph& d, const Pattern& h, ColorId red)
{
    if (red >= h.order())
        throw UnknownColor("#" + std::to_string(red));
    if (h.is_looped(red))
        throw PreconditionViolated("color '" + h.label(red) + "' carries a loop; the all-red reduction needs a loopless color");
    if (d.has_loops())
        throw PreconditionViolated("source digraph must be loopless");
    detail::require_plain_labels(d.labels());
    ReductionArtifact art;
    art.kind = ReductionKind::all_red;
    art.roles = Roles{red, red, red};
    art.source_vertices = d.labels();
    detail::Builder b;
    for (VertexId v = 0; v < d.order(); ++v)
        b.add(d.label(v), {OriginKind::original, d.label(v), {}, 0, {}});
    for (const Arc& a : d.arcs()) {
        b.arc(a.tail, a.head, red);
        art.source_arcs.push_back({d.label(a.tail), d.label(a.head)});
    }
    b.finish(art, h);
    return art;
}

/// Checks that red -> green is an asymmetric arc of H and red -> blue is not an arc.
inline void check_subdivision_roles(const Pattern& h, const Roles& r)
{
    const Digraph& g = h.graph();
    for (VertexId c : {r.red, r.green, r.blue})
        if (c >= h.order())
            throw UnknownColor("#" + std::to_string(c));
    if (r.red == r.green || r.red == r.blue || r.green == r.blue)
        throw PreconditionViolated("red, green and blue must be distinct colors");
    if (!g.has_arc(r.red, r.green) || g.has_arc(r.green, r.red))
        throw PreconditionViolated("(red, green) must be an asymmetric arc of H");
    if (g.has_arc(r.red, r.blue))
        throw PreconditionViolated("(red, blue) must not be an arc of H");
}

/// Subdivides each arc (x, y) by v(x,y) and hangs a pendant v'(x,y) off it:
/// (x, v) red, (v, y) green, (v, v') blue. D has a kernel iff the result has
/// a kernel by H-walks.
inline ReductionArtifact reduce_subdivision(const Digraph& d, const Pattern& h, const Roles& roles)
{
    check_subdivision_roles(h, roles);
    if (d.has_loops())
        throw PreconditionViolated("source digraph must be loopless");
    detail::require_plain_labels(d.labels());
    ReductionArtifact art;
    art.kind = ReductionKind::subdivision;
    art.roles = roles;
    art.source_vertices = d.labels();
    detail::Builder b;
    for (VertexId v = 0; v < d.order(); ++v)
        b.add(d.label(v), {OriginKind::original, d.label(v), {}, 0, {}});
    for (const Arc& a : d.arcs()) {
        const std::string& x = d.label(a.tail);
        const std::string& y = d.label(a.head);
        art.source_arcs.push_back({x, y});
        const VertexId mid = b.add(detail::arc_name(x, y) + "::mid::0", {OriginKind::mid, x, y, 0, {}});
        const VertexId pend = b.add(detail::arc_name(x, y) + "::pendant::0", {OriginKind::pendant, x, y, 0, {}});
        b.arc(a.tail, mid, roles.red);
        b.arc(mid, a.head, roles.green);
        b.arc(mid, pend, roles.blue);
    }
    b.finish(art, h);
    return art;
}

struct KColoringOptions {
    /// Keep only the F_v -> C_v arcs joining opposite sides of the
    /// bipartitions of F and of the (even) cycle.
    bool bipartite = false;
};

/// Proper 2-coloring of the underlying graph of d (first vertex of each
/// component on side 0), or nothing when d is not bipartite.
inline std::optional<std::vector<int>> bipartition(const Digraph& d)
{
    std::vector<int> side(d.order(), -1);
    for (VertexId s = 0; s < d.order(); ++s) {
        if (side[s] != -1)
            continue;
        side[s] = 0;
        std::vector<VertexId> stack{s};
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            auto relax = [&](VertexId w) {
                if (side[w] == -1) {
                    side[w] = 1 - side[v];
                    stack.push_back(w);
                    return true;
                }
                return side[w] != side[v];
            };
            for (VertexId w : d.out(v))
                if (!relax(w))
                    return std::nullopt;
            for (VertexId w : d.in(v))
                if (!relax(w))
                    return std::nullopt;
        }
    }
    return side;
}

/// Graph k-coloring to kernel by H-walks. Per vertex v of G: a green k-cycle
/// C_v and a copy F_v of the kernel-free F with green arcs from F_v to C_v.
/// Per arc (u, v) of the acyclic orientation and 1 <= i <= k: a green
/// triangle x -> y -> z -> x with a blue arc z -> w, and blue arcs
/// x_{u,i} -> x and x_{v,i} -> y. Cycle vertices only have blue out-arcs,
/// so no blue walk passes through a cycle; the sink w is in every kernel,
/// which then holds exactly one of x and y.
inline ReductionArtifact reduce_kcoloring(const Graph& g, std::size_t k, const Pattern& h, const Roles& roles,
                                          const ColoredDigraph& f, KColoringOptions options = {})
{
    if (k < 3)
        throw PreconditionViolated("k must be at least 3");
    for (VertexId c : {roles.red, roles.green, roles.blue})
        if (c >= h.order())
            throw UnknownColor("#" + std::to_string(c));
    if (!h.is_fully_looped())
        throw PreconditionViolated("the coloring gadget needs a looped pattern");
    if (roles.green == roles.blue || h.graph().adjacent(roles.green, roles.blue))
        throw PreconditionViolated("{green, blue} must be an independent pair of H");
    if (!(f.pattern() == h))
        throw PreconditionViolated("F must be colored with the same pattern H");
    if (f.order() == 0)
        throw PreconditionViolated("F must be non-empty");
    if (f.order() <= 20 && find_kernel_bruteforce(f).outcome == KernelOutcome::exists)
        throw PreconditionViolated("F has a kernel by H-walks");
    std::vector<int> f_side;
    if (options.bipartite) {
        if (k % 2 != 0)
            throw PreconditionViolated("the bipartite variant needs an even k");
        auto sides = bipartition(f.digraph());
        if (!sides)
            throw PreconditionViolated("the bipartite variant needs a bipartite F");
        f_side = *sides;
    }
    detail::require_plain_labels(g.labels());
    detail::require_plain_labels(f.digraph().labels());

    ReductionArtifact art;
    art.kind = ReductionKind::kcoloring;
    art.k = k;
    art.roles = roles;
    art.source_vertices = g.labels();
    const Digraph oriented = acyclic_orientation(g);
    for (const Arc& a : oriented.arcs())
        art.source_arcs.push_back({oriented.label(a.tail), oriented.label(a.head)});

    detail::Builder b;
    std::vector<std::vector<VertexId>> cycle(g.order());
    for (VertexId v = 0; v < g.order(); ++v) {
        const std::string& name = g.label(v);
        for (std::size_t i = 1; i <= k; ++i)
            cycle[v].push_back(b.add(name + "::cycle::" + std::to_string(i), {OriginKind::cycle, name, {}, i, {}}));
        std::vector<VertexId> copy;
        for (VertexId j = 0; j < f.order(); ++j)
            copy.push_back(b.add(name + "::F::" + std::to_string(j),
                                 {OriginKind::copy, name, {}, 0, f.digraph().label(j)}));
        for (std::size_t i = 0; i < k; ++i)
            b.arc(cycle[v][i], cycle[v][(i + 1) % k], roles.green);
        const auto& farcs = f.digraph().arcs();
        for (std::size_t a = 0; a < farcs.size(); ++a)
            b.arc(copy[farcs[a].tail], copy[farcs[a].head], f.color(a));
        for (VertexId j = 0; j < f.order(); ++j)
            for (std::size_t i = 1; i <= k; ++i) {
                const int cycle_side = static_cast<int>(i % 2);
                if (options.bipartite && f_side[j] == cycle_side)
                    continue;
                b.arc(copy[j], cycle[v][i - 1], roles.green);
            }
    }
    for (const Arc& a : oriented.arcs()) {
        const std::string& u = oriented.label(a.tail);
        const std::string& v = oriented.label(a.head);
        const std::string base = detail::arc_name(u, v);
        for (std::size_t i = 1; i <= k; ++i) {
            const std::string idx = std::to_string(i);
            const VertexId qx = b.add(base + "::qx::" + idx, {OriginKind::quad, u, v, i, "x"});
            const VertexId qy = b.add(base + "::qy::" + idx, {OriginKind::quad, u, v, i, "y"});
            const VertexId qz = b.add(base + "::qz::" + idx, {OriginKind::quad, u, v, i, "z"});
            const VertexId qw = b.add(base + "::qw::" + idx, {OriginKind::quad, u, v, i, "w"});
            b.arc(qx, qy, roles.green);
            b.arc(qy, qz, roles.green);
            b.arc(qz, qx, roles.green);
            b.arc(qz, qw, roles.blue);
            b.arc(cycle[a.tail][i - 1], qx, roles.blue);
            b.arc(cycle[a.head][i - 1], qy, roles.blue);
        }
    }
    b.finish(art, h);
    return art;
}

namespace detail {

inline void require_kcoloring(const ReductionArtifact& art)
{
    if (art.kind != ReductionKind::kcoloring)
        throw PreconditionViolated("artifact is not a k-coloring reduction");
}

inline std::map<std::string, std::size_t> source_index(const ReductionArtifact& art)
{
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < art.source_vertices.size(); ++i)
        index[art.source_vertices[i]] = i;
    return index;
}

} // namespace detail

/// Kernel by H-walks built from a proper coloring (values 1..k, aligned with
/// the source vertex order): x_{v,c(v)} for every v; for each arc (u, v) and
/// index j, the sink w_j together with y_j when j = c(u) and x_j otherwise.
inline std::vector<VertexId> kernel_from_coloring(const ReductionArtifact& art, const std::vector<std::size_t>& coloring)
{
    detail::require_kcoloring(art);
    if (coloring.size() != art.source_vertices.size())
        throw PreconditionViolated("coloring must assign a color to each of the "
                                   + std::to_string(art.source_vertices.size()) + " source vertices");
    const auto index = detail::source_index(art);
    for (std::size_t c : coloring)
        if (c < 1 || c > art.k)
            throw PreconditionViolated("colors must lie in 1.." + std::to_string(art.k));
    for (const auto& [u, v] : art.source_arcs)
        if (coloring[index.at(u)] == coloring[index.at(v)])
            throw PreconditionViolated("coloring is not proper on edge {" + u + ", " + v + "}");
    std::vector<VertexId> kernel;
    for (std::size_t s = 0; s < art.source_vertices.size(); ++s)
        kernel.push_back(art.at({OriginKind::cycle, art.source_vertices[s], {}, coloring[s], {}}));
    for (const auto& [u, v] : art.source_arcs) {
        const std::size_t i = coloring[index.at(u)];
        for (std::size_t j = 1; j <= art.k; ++j) {
            kernel.push_back(art.at({OriginKind::quad, u, v, j, j == i ? "y" : "x"}));
            kernel.push_back(art.at({OriginKind::quad, u, v, j, "w"}));
        }
    }
    std::sort(kernel.begin(), kernel.end());
    return kernel;
}

/// Reads the coloring off a kernel by H-walks: c(v) is the index of the
/// unique cycle vertex of v in the kernel. Throws CertificateCorrupt if a
/// cycle holds zero or several kernel vertices or the result is improper.
inline std::vector<std::size_t> extract_coloring(const ReductionArtifact& art, const std::vector<VertexId>& kernel,
                                                 bool verify_kernel = true)
{
    detail::require_kcoloring(art);
    if (verify_kernel && !is_kernel_by_h_walks(art.colored, kernel))
        throw PreconditionViolated("the given set is not a kernel by H-walks of the constructed instance");
    std::vector<bool> in(art.colored.order(), false);
    for (VertexId v : kernel) {
        if (v >= in.size())
            throw UnknownVertex("#" + std::to_string(v));
        in[v] = true;
    }
    std::vector<std::size_t> coloring;
    for (const auto& name : art.source_vertices) {
        std::size_t found = 0, count = 0;
        for (std::size_t i = 1; i <= art.k; ++i)
            if (in[art.at({OriginKind::cycle, name, {}, i, {}})]) {
                found = i;
                ++count;
            }
        if (count != 1)
            throw CertificateCorrupt("cycle of '" + name + "' holds " + std::to_string(count)
                                     + " kernel vertices, expected exactly one");
        coloring.push_back(found);
    }
    const auto index = detail::source_index(art);
    for (const auto& [u, v] : art.source_arcs)
        if (coloring[index.at(u)] == coloring[index.at(v)])
            throw CertificateCorrupt("recovered coloring is improper on {" + u + ", " + v + "}");
    return coloring;
}

inline constexpr std::size_t kArcColoringBacktrackLimit = 64;

namespace detail {

inline std::size_t underlying_max_degree(const Digraph& d)
{
    std::size_t best = 0;
    for (VertexId v = 0; v < d.order(); ++v)
        best = std::max(best, d.out_degree(v) + d.in_degree(v));
    return best;
}

// Colors arcs in order; every vertex keeps a table color -> arc.
class ArcColoring {
public:
    static constexpr std::size_t none = static_cast<std::size_t>(-1);

    ArcColoring(const Digraph& d, std::size_t colors)
        : d_(d), colors_(colors), color_(d.size(), none), at_(d.order(), std::vector<std::size_t>(colors, none))
    {
    }

    bool run()
    {
        for (std::size_t e = 0; e < d_.size(); ++e)
            if (!place(e))
                return false;
        return true;
    }

    std::vector<std::size_t> result() const { return color_; }

private:
    VertexId end(std::size_t e, int which) const { return which == 0 ? d_.arcs()[e].tail : d_.arcs()[e].head; }

    VertexId other(std::size_t e, VertexId v) const
    {
        return d_.arcs()[e].tail == v ? d_.arcs()[e].head : d_.arcs()[e].tail;
    }

    void set(std::size_t e, std::size_t c)
    {
        color_[e] = c;
        at_[end(e, 0)][c] = e;
        at_[end(e, 1)][c] = e;
    }

    void clear(std::size_t e)
    {
        const std::size_t c = color_[e];
        at_[end(e, 0)][c] = none;
        at_[end(e, 1)][c] = none;
        color_[e] = none;
    }

    bool place(std::size_t e)
    {
        const VertexId u = end(e, 0), v = end(e, 1);
        for (std::size_t c = 0; c < colors_; ++c)
            if (at_[u][c] == none && at_[v][c] == none) {
                set(e, c);
                return true;
            }
        // Kempe chain: a free at u, b free at v. Swap a/b along the chain
        // leaving v unless it ends at u.
        for (std::size_t a = 0; a < colors_; ++a) {
            if (at_[u][a] != none)
                continue;
            for (std::size_t b = 0; b < colors_; ++b) {
                if (b == a || at_[v][b] != none)
                    continue;
                std::vector<std::size_t> chain;
                VertexId cur = v;
                std::size_t want = a;
                bool hits_u = false;
                while (at_[cur][want] != none) {
                    const std::size_t next = at_[cur][want];
                    chain.push_back(next);
                    cur = other(next, cur);
                    if (cur == u) {
                        hits_u = true;
                        break;
                    }
                    want = want == a ? b : a;
                }
                if (hits_u)
                    continue;
                std::vector<std::size_t> old;
                for (std::size_t c : chain) {
                    old.push_back(color_[c]);
                    clear(c);
                }
                for (std::size_t i = 0; i < chain.size(); ++i)
                    set(chain[i], old[i] == a ? b : a);
                set(e, a);
                return true;
            }
        }
        return false;
    }

    const Digraph& d_;
    std::size_t colors_;
    std::vector<std::size_t> color_;
    std::vector<std::vector<std::size_t>> at_;
};

inline bool backtrack_arc_coloring(const Digraph& d, std::size_t colors, std::vector<std::size_t>& color,
                                   std::size_t e)
{
    if (e == d.size())
        return true;
    const Arc& a = d.arcs()[e];
    for (std::size_t c = 0; c < colors; ++c) {
        bool clash = false;
        for (std::size_t f = 0; f < e && !clash; ++f) {
            const Arc& b = d.arcs()[f];
            const bool share = a.tail == b.tail || a.tail == b.head || a.head == b.tail || a.head == b.head;
            clash = share && color[f] == c;
        }
        if (clash)
            continue;
        color[e] = c;
        if (backtrack_arc_coloring(d, colors, color, e + 1))
            return true;
    }
    return false;
}

} // namespace detail

/// Colors the arcs so that arcs sharing an end (in the underlying graph)
/// get different colors, using at most max_colors colors. Greedy with
/// Kempe-chain repair, exhaustive backtracking when that fails.
inline std::vector<std::size_t> proper_arc_coloring(const Digraph& d, std::size_t max_colors)
{
    if (d.has_loops())
        throw PreconditionViolated("arc coloring needs a loopless digraph");
    for (const Arc& a : d.arcs())
        if (d.has_arc(a.head, a.tail))
            throw PreconditionViolated("arc coloring needs a simple underlying graph; digon {" + d.label(a.tail)
                                       + ", " + d.label(a.head) + "}");
    if (detail::underlying_max_degree(d) > max_colors)
        throw PreconditionViolated("maximum degree " + std::to_string(detail::underlying_max_degree(d))
                                   + " needs more than " + std::to_string(max_colors) + " colors");
    detail::ArcColoring greedy(d, max_colors);
    if (greedy.run())
        return greedy.result();
    if (d.size() > kArcColoringBacktrackLimit)
        throw SizeLimitExceeded("arc coloring fallback supports at most "
                                + std::to_string(kArcColoringBacktrackLimit) + " arcs");
    std::vector<std::size_t> color(d.size(), 0);
    if (!detail::backtrack_arc_coloring(d, max_colors, color, 0))
        throw PreconditionViolated("no proper arc coloring with " + std::to_string(max_colors) + " colors");
    return color;
}

/// True when arcs sharing an end never share a color.
inline bool is_proper_arc_coloring(const Digraph& d, const std::vector<std::size_t>& color)
{
    if (color.size() != d.size())
        return false;
    for (VertexId v = 0; v < d.order(); ++v) {
        std::vector<std::size_t> seen;
        const std::size_t first = d.first_out_arc(v);
        for (std::size_t j = 0; j < d.out_degree(v); ++j)
            seen.push_back(color[first + j]);
        for (VertexId w : d.in(v))
            seen.push_back(color[*d.arc_index(w, v)]);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            return false;
    }
    return true;
}

/// Pattern with the given number of looped, pairwise non-adjacent colors c1, c2, ...
inline Pattern monochromatic_pattern(std::size_t colors)
{
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= colors; ++i)
        names.push_back("c" + std::to_string(i));
    return looped_isolated_pattern(names);
}

/// Properly 4-colors the arcs of a digraph with maximum degree 3. Walks of
/// length two are never monochromatic, so kernels of D are exactly the
/// kernels by monochromatic paths of the result.
inline ReductionArtifact reduce_edge_coloring(const Digraph& d)
{
    if (detail::underlying_max_degree(d) > 3)
        throw PreconditionViolated("the edge-coloring reduction needs maximum degree at most 3");
    detail::require_plain_labels(d.labels());
    const auto color = proper_arc_coloring(d, 4);
    ReductionArtifact art;
    art.kind = ReductionKind::edge_coloring;
    art.source_vertices = d.labels();
    detail::Builder b;
    for (VertexId v = 0; v < d.order(); ++v)
        b.add(d.label(v), {OriginKind::original, d.label(v), {}, 0, {}});
    for (std::size_t e = 0; e < d.size(); ++e) {
        const Arc& a = d.arcs()[e];
        b.arc(a.tail, a.head, color[e]);
        art.source_arcs.push_back({d.label(a.tail), d.label(a.head)});
    }
    b.finish(art, monochromatic_pattern(4));
    return art;
}

/// Source digraph recorded in an artifact (for kcol: the acyclic orientation of G).
inline Digraph source_digraph(const ReductionArtifact& art)
{
    return Digraph::from_labels(art.source_vertices, art.source_arcs);
}

/// Maps a kernel of the source digraph (labels) to a kernel by H-walks of the
/// constructed instance. Not defined for the k-coloring construction, whose
/// source certificate is a coloring (see kernel_from_coloring).
inline std::vector<VertexId> kernel_to_target(const ReductionArtifact& art, const std::vector<std::string>& kernel)
{
    std::vector<VertexId> out;
    switch (art.kind) {
    case ReductionKind::all_red:
    case ReductionKind::edge_coloring:
        for (const auto& v : kernel)
            out.push_back(art.at({OriginKind::original, v, {}, 0, {}}));
        break;
    case ReductionKind::subdivision:
        for (const auto& v : kernel)
            out.push_back(art.at({OriginKind::original, v, {}, 0, {}}));
        for (VertexId v = 0; v < art.provenance.size(); ++v)
            if (art.provenance[v].kind == OriginKind::pendant)
                out.push_back(v);
        break;
    case ReductionKind::kcoloring:
        throw PreconditionViolated("k-coloring certificates are colorings; use kernel_from_coloring");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Maps a kernel by H-walks of the constructed instance back to a kernel of
/// the source digraph (labels in source order).
inline std::vector<std::string> kernel_to_source(const ReductionArtifact& art, const std::vector<VertexId>& kernel)
{
    if (art.kind == ReductionKind::kcoloring)
        throw PreconditionViolated("k-coloring certificates are colorings; use extract_coloring");
    std::vector<bool> in(art.colored.order(), false);
    for (VertexId v : kernel) {
        if (v >= in.size())
            throw UnknownVertex("#" + std::to_string(v));
        in[v] = true;
        if (art.provenance[v].kind == OriginKind::mid)
            throw CertificateCorrupt("subdivision vertex " + art.colored.digraph().label(v)
                                     + " cannot belong to a kernel by H-walks");
    }
    std::vector<std::string> out;
    for (const auto& name : art.source_vertices)
        if (in[art.at({OriginKind::original, name, {}, 0, {}})])
            out.push_back(name);
    return out;
}

/// Sidecar text: reduction parameters followed by one `<tag> <vertex>` line
/// per constructed vertex, in vertex order.
inline std::string serialize_provenance(const ReductionArtifact& art)
{
    std::ostringstream out;
    const Pattern& h = art.colored.pattern();
    out << "provenance " << to_string(art.kind) << '\n';
    if (art.k)
        out << "k " << art.k << '\n';
    if (art.roles) {
        out << "role red " << h.label(art.roles->red) << '\n';
        out << "role green " << h.label(art.roles->green) << '\n';
        out << "role blue " << h.label(art.roles->blue) << '\n';
    }
    for (const auto& v : art.source_vertices)
        out << "source-vertex " << v << '\n';
    for (const auto& [u, v] : art.source_arcs)
        out << "source-arc " << u << ' ' << v << '\n';
    for (VertexId v = 0; v < art.provenance.size(); ++v)
        out << art.provenance[v].tag() << ' ' << art.colored.digraph().label(v) << '\n';
    return out.str();
}

/// Rebuilds an artifact from the constructed instance and its sidecar.
inline ReductionArtifact parse_provenance(std::string_view text, ColoredDigraph colored)
{
    ReductionArtifact art;
    const Pattern& h = colored.pattern();
    std::vector<std::optional<Origin>> origins(colored.order());
    std::optional<VertexId> red, green, blue;
    bool header = false;
    for (const auto& line : detail::tokenize(text)) {
        const auto& t = line.tokens;
        auto need = [&](std::size_t n) {
            if (t.size() != n)
                throw ParseError("malformed provenance line", line.number);
        };
        if (t[0] == "provenance") {
            need(2);
            art.kind = parse_reduction_kind(t[1]);
            header = true;
        } else if (t[0] == "k") {
            need(2);
            art.k = detail::parse_count(t[1], line.number);
        } else if (t[0] == "role") {
            need(3);
            auto c = h.graph().find(t[2]);
            if (!c)
                throw UnknownColor(t[2], line.number);
            (t[1] == "red" ? red : t[1] == "green" ? green : blue) = *c;
        } else if (t[0] == "source-vertex") {
            need(2);
            art.source_vertices.push_back(t[1]);
        } else if (t[0] == "source-arc") {
            need(3);
            art.source_arcs.push_back({t[1], t[2]});
        } else if (t[0].find(':') != std::string::npos) {
            need(2);
            auto v = colored.digraph().find(t[1]);
            if (!v)
                throw UnknownVertex(t[1], line.number);
            origins[*v] = Origin::parse(t[0]);
        } else {
            throw ParseError("unknown provenance line '" + t[0] + "'", line.number);
        }
    }
    if (!header)
        throw ParseError("missing 'provenance <kind>' header", 1);
    if (red && green && blue)
        art.roles = Roles{*red, *green, *blue};
    for (VertexId v = 0; v < origins.size(); ++v) {
        if (!origins[v])
            throw Error("provenance does not cover vertex '" + colored.digraph().label(v) + "'");
        art.provenance.push_back(*origins[v]);
    }
    art.colored = std::move(colored);
    return art;
}

} // namespace hwalks
