#pragma once

#include <hwalks/canonical.hpp>
#include <hwalks/core.hpp>
#include <hwalks/kernel.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace hwalks {

struct SearchConstraints {
    bool bipartite = false;
    bool tournament = false;
    bool digon_free = false;
};

inline constexpr std::size_t kSearchLimit = 9;

struct SearchSpec {
    Pattern pattern;
    std::size_t max_n = 0;
    SearchConstraints constraints;
    /// Allowed arc colors; empty means every color of the pattern.
    std::vector<ColorId> colors;
    std::size_t threads = 1;
};

namespace detail {

inline void validate(const SearchSpec& spec)
{
    if (spec.max_n > kSearchLimit)
        throw SizeLimitExceeded("search supports max_n <= " + std::to_string(kSearchLimit));
    if (spec.pattern.order() == 0)
        throw PreconditionViolated("pattern has no colors");
    if (spec.pattern.order() > 250)
        throw SizeLimitExceeded("search supports at most 250 colors");
    for (ColorId c : spec.colors)
        if (c >= spec.pattern.order())
            throw UnknownColor("#" + std::to_string(c));
}

inline std::vector<ColorId> allowed_colors(const SearchSpec& spec)
{
    std::vector<ColorId> colors = spec.colors;
    if (colors.empty())
        for (ColorId c = 0; c < spec.pattern.order(); ++c)
            colors.push_back(c);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    return colors;
}

inline std::vector<PairChoice> colored_pair_choices(const std::vector<ColorId>& colors, const SearchConstraints& c)
{
    std::vector<std::uint8_t> codes{0};
    for (ColorId col : colors)
        codes.push_back(static_cast<std::uint8_t>(1 + col));
    std::vector<PairChoice> out;
    for (auto to : codes)
        for (auto from : codes) {
            if ((c.tournament || c.digon_free) && to && from)
                continue;
            out.push_back({to, from});
        }
    return out;
}

// Hereditary: for tournaments every pair is joined by exactly one arc; for
// bipartite tournaments non-adjacency is an equivalence with at most two
// classes; for plain bipartite the underlying graph has no odd cycle.
inline std::function<bool(const CodeMatrix&)> constraint_predicate(const SearchConstraints& c)
{
    if (!c.bipartite && !c.tournament)
        return nullptr;
    return [c](const CodeMatrix& m) {
        const std::size_t n = m.n;
        auto adjacent = [&](VertexId u, VertexId v) { return m.at(u, v) || m.at(v, u); };
        if (c.tournament && !c.bipartite) {
            for (VertexId u = 0; u < n; ++u)
                for (VertexId v = u + 1; v < n; ++v)
                    if (!adjacent(u, v))
                        return false;
            return true;
        }
        if (c.tournament) {
            // complete bipartite: non-adjacency is an equivalence with at most two classes
            std::vector<int> cls(n, -1);
            int classes = 0;
            for (VertexId u = 0; u < n; ++u) {
                if (cls[u] != -1)
                    continue;
                if (++classes > 2)
                    return false;
                cls[u] = classes;
                for (VertexId v = u + 1; v < n; ++v)
                    if (!adjacent(u, v))
                        cls[v] = classes;
            }
            for (VertexId u = 0; u < n; ++u)
                for (VertexId v = u + 1; v < n; ++v)
                    if (adjacent(u, v) == (cls[u] == cls[v]))
                        return false;
            return true;
        }
        std::vector<int> side(n, -1);
        for (VertexId s = 0; s < n; ++s) {
            if (side[s] != -1)
                continue;
            side[s] = 0;
            std::vector<VertexId> stack{s};
            while (!stack.empty()) {
                const VertexId v = stack.back();
                stack.pop_back();
                for (VertexId w = 0; w < n; ++w) {
                    if (w == v || !adjacent(v, w))
                        continue;
                    if (side[w] == -1) {
                        side[w] = 1 - side[v];
                        stack.push_back(w);
                    } else if (side[w] == side[v]) {
                        return false;
                    }
                }
            }
        }
        return true;
    };
}

} // namespace detail

/// Candidate enumeration shared by the streaming API and the search.
class ColoredCandidates {
public:
    explicit ColoredCandidates(const SearchSpec& spec)
        : pattern_(spec.pattern),
          enumerator_(detail::colored_pair_choices(detail::allowed_colors(spec), spec.constraints),
                      detail::constraint_predicate(spec.constraints))
    {
        detail::validate(spec);
    }

    const std::vector<ClassRep>& level(std::size_t n) { return enumerator_.level(n); }

    ColoredDigraph build(const ClassRep& rep) const { return colored_from_codes(rep.matrix, pattern_); }

private:
    Pattern pattern_;
    IsoClassEnumerator enumerator_;
};

/// Streams one colored digraph per color-preserving isomorphism class that
/// satisfies the constraints, for n = 1..max_n, ordered by vertex count,
/// arc count, then canonical key. Return false from the callback to stop.
inline void enumerate_colored_digraphs(const SearchSpec& spec, const std::function<bool(const ColoredDigraph&)>& visit)
{
    ColoredCandidates candidates(spec);
    for (std::size_t n = 1; n <= spec.max_n; ++n)
        for (const ClassRep& rep : candidates.level(n))
            if (!visit(candidates.build(rep)))
                return;
}

inline std::vector<ColoredDigraph> colored_digraphs(const SearchSpec& spec)
{
    std::vector<ColoredDigraph> out;
    enumerate_colored_digraphs(spec, [&](const ColoredDigraph& d) {
        out.push_back(d);
        return true;
    });
    return out;
}

struct LevelTally {
    std::size_t n = 0;
    std::size_t candidates = 0; // classes at this size
    std::size_t examined = 0;   // classes solved before the search stopped
    std::size_t kernel_free = 0;
};

struct SearchReport {
    std::size_t max_n = 0;
    std::size_t examined = 0;
    std::vector<LevelTally> levels;
    bool found = false;
    std::string key; // canonical key of the instance, when found
};

struct SearchResult {
    std::optional<ColoredDigraph> instance;
    SearchReport report;
};

/// True when no vertex subset at all is a kernel by H-walks.
inline bool kernel_free_by_subset_scan(const ColoredDigraph& d)
{
    if (d.order() > kBruteForceLimit)
        throw SizeLimitExceeded("subset scan supports at most " + std::to_string(kBruteForceLimit) + " vertices");
    std::vector<VertexId> subset;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d.order()); ++mask) {
        subset.clear();
        for (VertexId v = 0; v < d.order(); ++v)
            if (mask >> v & 1)
                subset.push_back(v);
        if (is_kernel_by_h_walks(d, subset).valid)
            return false;
    }
    return true;
}

/// First candidate in enumeration order without a kernel by H-walks. The
/// whole level containing it is still solved, so per-size tallies are exact
/// for every fully examined size.
inline SearchResult search_kernel_free(const SearchSpec& spec)
{
    ColoredCandidates candidates(spec);
    SearchResult result;
    result.report.max_n = spec.max_n;
    for (std::size_t n = 1; n <= spec.max_n; ++n) {
        const auto& level = candidates.level(n);
        std::vector<char> free(level.size(), 0);
        const std::size_t threads = std::max<std::size_t>(1, std::min(spec.threads, level.size()));
        {
            std::atomic<std::size_t> next{0};
            auto work = [&] {
                for (std::size_t i = next++; i < level.size(); i = next++)
                    free[i] = find_kernel_bruteforce(candidates.build(level[i])).outcome == KernelOutcome::not_exists;
            };
            std::vector<std::jthread> workers;
            for (std::size_t t = 1; t < threads; ++t)
                workers.emplace_back(work);
            work();
        }
        LevelTally tally{n, level.size(), level.size(), 0};
        for (char f : free)
            tally.kernel_free += f ? 1 : 0;
        result.report.examined += level.size();
        result.report.levels.push_back(tally);
        auto hit = std::find(free.begin(), free.end(), 1);
        if (hit != free.end()) {
            const ClassRep& rep = level[static_cast<std::size_t>(hit - free.begin())];
            ColoredDigraph instance = candidates.build(rep);
            if (!kernel_free_by_subset_scan(instance))
                throw Error("internal: candidate failed kernel-freeness re-verification");
            result.report.found = true;
            result.report.key = rep.key;
            result.instance = std::move(instance);
            return result;
        }
    }
    return result;
}

} // namespace hwalks
