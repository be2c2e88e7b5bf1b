#pragma once

#include <hwalks/core.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <thread>
#include <vector>

namespace hwalks {

/// Vertices reached by H-walks from `source`, always including the source.
struct ReachSet {
    VertexId source = 0;
    std::vector<VertexId> members; // sorted

    bool contains(VertexId v) const { return std::binary_search(members.begin(), members.end(), v); }
};

/// How the BFS over (vertex, entering color) states is started.
enum class Seeding {
    /// Enqueue (x, c(v, x)) for each out-neighbour x of the source.
    out_arcs,
    /// Enqueue (v, c) for every color c of H. Misses a first arc whose color
    /// has no in-neighbour in H; kept for differential testing only.
    all_colors,
};

struct ReachOptions {
    Seeding seeding = Seeding::out_arcs;
    /// When non-null, incremented once per (state, out-arc) examination.
    std::size_t* explorations = nullptr;
};

namespace detail {

// Reusable scratch space for repeated searches on one colored digraph.
// States are marked with an epoch stamp so resets are O(1).
class ReachScratch {
public:
    explicit ReachScratch(const ColoredDigraph& d)
        : colors_(d.pattern().order()), state_mark_(d.order() * colors_, 0), vertex_mark_(d.order(), 0)
    {
    }

    void run(const ColoredDigraph& d, VertexId source, const ReachOptions& options, std::vector<VertexId>& members)
    {
        ++epoch_;
        members.clear();
        queue_.clear();
        const Digraph& g = d.digraph();
        const Pattern& h = d.pattern();
        std::size_t explored = 0;

        auto visit = [&](VertexId y, ColorId c) {
            std::uint32_t& mark = state_mark_[y * colors_ + c];
            if (mark == epoch_)
                return false;
            mark = epoch_;
            if (vertex_mark_[y] != epoch_) {
                vertex_mark_[y] = epoch_;
                members.push_back(y);
            }
            queue_.push_back({y, c});
            return true;
        };

        vertex_mark_[source] = epoch_;
        members.push_back(source);
        if (options.seeding == Seeding::out_arcs) {
            const std::size_t base = g.first_out_arc(source);
            const auto heads = g.out(source);
            for (std::size_t j = 0; j < heads.size(); ++j)
                visit(heads[j], d.color(base + j));
        } else {
            for (ColorId c = 0; c < colors_; ++c) {
                state_mark_[source * colors_ + c] = epoch_;
                queue_.push_back({source, c});
            }
        }

        while (!queue_.empty()) {
            const auto [x, c] = queue_.front();
            queue_.pop_front();
            const std::size_t base = g.first_out_arc(x);
            const auto heads = g.out(x);
            for (std::size_t j = 0; j < heads.size(); ++j) {
                ++explored;
                const ColorId next = d.color(base + j);
                if (h.compatible(c, next))
                    visit(heads[j], next);
            }
        }
        std::sort(members.begin(), members.end());
        if (options.explorations)
            *options.explorations += explored;
    }

private:
    struct State {
        VertexId vertex;
        ColorId color;
    };

    std::size_t colors_;
    std::vector<std::uint32_t> state_mark_;
    std::vector<std::uint32_t> vertex_mark_;
    std::uint32_t epoch_ = 0;
    std::deque<State> queue_;
};

} // namespace detail

/// Breadth-first search over (vertex, color of the entering arc) pairs. Each
/// pair is queued at most once; a head (x, c) follows out-arc (x, y) only when
/// (c, c(x, y)) is an arc of H. A single arc is always an H-walk.
inline ReachSet reach_by_h_walks(const ColoredDigraph& d, VertexId source, const ReachOptions& options = {})
{
    if (source >= d.order())
        throw UnknownVertex("#" + std::to_string(source));
    detail::ReachScratch scratch(d);
    ReachSet out{source, {}};
    scratch.run(d, source, options, out.members);
    return out;
}

inline ReachSet reach_by_h_walks(const ColoredDigraph& d, std::string_view source, const ReachOptions& options = {})
{
    return reach_by_h_walks(d, d.digraph().index_of(source), options);
}

/// Reference answer by walk length: layer[l] holds the (vertex, last color)
/// pairs ending an H-walk of length exactly l from the source. Layers are
/// iterated |V_D| * |V_H| times, which bounds the number of distinct states.
inline ReachSet reach_oracle(const ColoredDigraph& d, VertexId source)
{
    const std::size_t n = d.order();
    const std::size_t k = d.pattern().order();
    if (source >= n)
        throw UnknownVertex("#" + std::to_string(source));

    // color_of[u][v] = 1 + color, 0 when (u, v) is not an arc
    std::vector<std::vector<std::size_t>> color_of(n, std::vector<std::size_t>(n, 0));
    const auto& arcs = d.digraph().arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        color_of[arcs[i].tail][arcs[i].head] = 1 + d.color(i);

    std::vector<std::vector<bool>> layer(n, std::vector<bool>(k, false));
    std::vector<bool> reached(n, false);
    reached[source] = true;
    for (VertexId y = 0; y < n; ++y)
        if (color_of[source][y]) {
            layer[y][color_of[source][y] - 1] = true;
            reached[y] = true;
        }

    for (std::size_t length = 2; length <= n * k; ++length) {
        std::vector<std::vector<bool>> next(n, std::vector<bool>(k, false));
        bool any = false;
        for (VertexId y = 0; y < n; ++y)
            for (ColorId c = 0; c < k; ++c) {
                if (!layer[y][c])
                    continue;
                for (VertexId z = 0; z < n; ++z) {
                    const std::size_t code = color_of[y][z];
                    if (code && d.pattern().graph().has_arc(c, code - 1)) {
                        next[z][code - 1] = true;
                        reached[z] = true;
                        any = true;
                    }
                }
            }
        layer.swap(next);
        if (!any)
            break;
    }

    ReachSet out{source, {}};
    for (VertexId v = 0; v < n; ++v)
        if (reached[v])
            out.members.push_back(v);
    return out;
}

/// Reach sets from every source, computed on up to `threads` workers.
inline std::vector<std::vector<VertexId>> reach_sets(const ColoredDigraph& d, std::size_t threads = 1,
                                                     const ReachOptions& options = {})
{
    const std::size_t n = d.order();
    std::vector<std::vector<VertexId>> rows(n);
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        detail::ReachScratch scratch(d);
        for (VertexId v = 0; v < n; ++v)
            scratch.run(d, v, options, rows[v]);
        return rows;
    }
    std::vector<std::size_t> counts(threads, 0);
    {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < threads; ++t)
            workers.emplace_back([&, t] {
                detail::ReachScratch scratch(d);
                ReachOptions local = options;
                local.explorations = options.explorations ? &counts[t] : nullptr;
                for (VertexId v = t; v < n; v += threads)
                    scratch.run(d, v, local, rows[v]);
            });
    }
    if (options.explorations)
        for (std::size_t c : counts)
            *options.explorations += c;
    return rows;
}

/// Digraph on V_D with an arc (u, v) whenever u != v and u reaches v by H-walks.
inline Digraph reachability_closure(const ColoredDigraph& d, std::size_t threads = 1)
{
    auto rows = reach_sets(d, threads);
    std::vector<Arc> arcs;
    std::size_t total = 0;
    for (const auto& row : rows)
        total += row.size();
    arcs.reserve(total);
    for (VertexId u = 0; u < rows.size(); ++u)
        for (VertexId v : rows[u])
            if (v != u)
                arcs.push_back({u, v});
    return Digraph(d.digraph().labels(), std::move(arcs), LoopPolicy::forbidden);
}

} // namespace hwalks
