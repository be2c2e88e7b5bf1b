#pragma once

#include <hwalks/core.hpp>
#include <hwalks/reach.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hwalks {

enum class KernelKind { classic, hwalks };

struct KernelCertificate {
    KernelKind kind = KernelKind::hwalks;
    std::vector<VertexId> members; // sorted
};

/// Result of checking a candidate set. When invalid, exactly one witness is
/// set: two members where the first reaches the second, or an outside vertex
/// that reaches no member.
struct KernelCheck {
    bool valid = false;
    std::optional<std::pair<VertexId, VertexId>> dependent_pair;
    std::optional<VertexId> unabsorbed;

    explicit operator bool() const noexcept { return valid; }
};

namespace detail {

inline std::vector<bool> membership(std::size_t n, std::span<const VertexId> set)
{
    std::vector<bool> in(n, false);
    for (VertexId v : set) {
        if (v >= n)
            throw UnknownVertex("#" + std::to_string(v));
        in[v] = true;
    }
    return in;
}

// Kernel test against an adjacency relation given as sorted out-rows.
// Self-entries in a row are ignored: only distinct pairs matter.
template <typename Rows>
KernelCheck check_kernel_rows(const Rows& rows, std::size_t n, std::span<const VertexId> set)
{
    const auto in = membership(n, set);
    KernelCheck result;
    for (VertexId u = 0; u < n; ++u) {
        if (!in[u])
            continue;
        for (VertexId w : rows(u))
            if (w != u && in[w]) {
                result.dependent_pair = {u, w};
                return result;
            }
    }
    for (VertexId u = 0; u < n; ++u) {
        if (in[u])
            continue;
        bool absorbed = false;
        for (VertexId w : rows(u))
            if (w != u && in[w]) {
                absorbed = true;
                break;
            }
        if (!absorbed) {
            result.unabsorbed = u;
            return result;
        }
    }
    result.valid = true;
    return result;
}

} // namespace detail

/// Classic kernel: independent and absorbent with respect to the arcs of d.
inline KernelCheck is_kernel(const Digraph& d, std::span<const VertexId> set)
{
    return detail::check_kernel_rows([&](VertexId v) { return d.out(v); }, d.order(), set);
}

/// Kernel by H-walks: no member reaches another member by an H-walk and
/// every other vertex reaches some member.
inline KernelCheck is_kernel_by_h_walks(const ColoredDigraph& d, std::span<const VertexId> set)
{
    const auto rows = reach_sets(d);
    return detail::check_kernel_rows([&](VertexId v) { return std::span<const VertexId>(rows[v]); }, d.order(), set);
}

inline std::vector<VertexId> resolve_labels(const Digraph& d, const std::vector<std::string>& labels)
{
    std::vector<VertexId> ids;
    for (const auto& label : labels)
        ids.push_back(d.index_of(label));
    return ids;
}

enum class KernelOutcome { exists, not_exists, budget_exhausted };

struct KernelStats {
    std::uint64_t nodes = 0;    // search nodes (or subsets scanned)
    std::uint64_t branches = 0; // branching decisions
    std::chrono::nanoseconds elapsed{0};
};

struct KernelVerdict {
    KernelOutcome outcome = KernelOutcome::not_exists;
    std::optional<KernelCertificate> certificate;
    KernelStats stats;
};

inline const char* to_string(KernelOutcome o)
{
    switch (o) {
    case KernelOutcome::exists:
        return "exists";
    case KernelOutcome::not_exists:
        return "not-exists";
    case KernelOutcome::budget_exhausted:
        return "budget-exhausted";
    }
    return "?";
}

inline constexpr std::size_t kBruteForceLimit = 25;

namespace detail {

// Scans subsets in increasing bitmask order (bit v = vertex v) and returns
// the first kernel of the relation given as bitmask rows.
inline KernelVerdict bruteforce_rows(const std::vector<std::uint32_t>& rows, KernelKind kind)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = rows.size();
    if (n > kBruteForceLimit)
        throw SizeLimitExceeded("brute-force kernel search supports at most " + std::to_string(kBruteForceLimit)
                                + " vertices, got " + std::to_string(n));
    KernelVerdict verdict;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        ++verdict.stats.nodes;
        const auto set = static_cast<std::uint32_t>(mask);
        bool ok = true;
        for (VertexId v = 0; v < n && ok; ++v) {
            const bool member = (set >> v) & 1U;
            ok = member ? (rows[v] & set) == 0 : (rows[v] & set) != 0;
        }
        if (ok) {
            verdict.outcome = KernelOutcome::exists;
            KernelCertificate cert{kind, {}};
            for (VertexId v = 0; v < n; ++v)
                if ((set >> v) & 1U)
                    cert.members.push_back(v);
            verdict.certificate = std::move(cert);
            break;
        }
    }
    verdict.stats.elapsed = std::chrono::steady_clock::now() - start;
    return verdict;
}

} // namespace detail

/// Exhaustive classic-kernel search; at most 25 vertices.
inline KernelVerdict find_kernel_bruteforce(const Digraph& d)
{
    if (d.order() > kBruteForceLimit)
        throw SizeLimitExceeded("brute-force kernel search supports at most " + std::to_string(kBruteForceLimit)
                                + " vertices, got " + std::to_string(d.order()));
    std::vector<std::uint32_t> rows(d.order(), 0);
    for (const Arc& a : d.arcs())
        if (a.tail != a.head)
            rows[a.tail] |= std::uint32_t{1} << a.head;
    return detail::bruteforce_rows(rows, KernelKind::classic);
}

/// Exhaustive kernel-by-H-walks search; at most 25 vertices.
inline KernelVerdict find_kernel_bruteforce(const ColoredDigraph& d)
{
    if (d.order() > kBruteForceLimit)
        throw SizeLimitExceeded("brute-force kernel search supports at most " + std::to_string(kBruteForceLimit)
                                + " vertices, got " + std::to_string(d.order()));
    const auto sets = reach_sets(d);
    std::vector<std::uint32_t> rows(d.order(), 0);
    for (VertexId u = 0; u < d.order(); ++u)
        for (VertexId v : sets[u])
            if (v != u)
                rows[u] |= std::uint32_t{1} << v;
    return detail::bruteforce_rows(rows, KernelKind::hwalks);
}

struct BacktrackOptions {
    /// Maximum number of search nodes; 0 means unlimited.
    std::uint64_t node_budget = 0;
};

namespace detail {

// Classic-kernel search with propagation over an explicit relation R.
//
// Each vertex is IN, OUT or undecided. For every vertex we track how many
// out-neighbours are IN and how many are undecided. Propagation:
//   - an IN vertex forces all its in- and out-neighbours OUT;
//   - an undecided vertex whose out-neighbours are all OUT must be IN
//     (nothing can absorb it); this covers sinks at the root;
//   - an OUT vertex with no IN out-neighbour and exactly one undecided one
//     forces that one IN; with none left it is a conflict.
class KernelSearch {
public:
    KernelSearch(const Digraph& relation, BacktrackOptions options)
        : r_(relation), options_(options), n_(relation.order()), state_(n_, State::undecided),
          in_count_(n_, 0), open_count_(n_, 0)
    {
        for (VertexId v = 0; v < n_; ++v)
            open_count_[v] = out_size(v);
        order_.resize(n_);
        for (VertexId v = 0; v < n_; ++v)
            order_[v] = v;
        std::stable_sort(order_.begin(), order_.end(),
                         [&](VertexId a, VertexId b) { return out_size(a) > out_size(b); });
    }

    KernelVerdict run()
    {
        const auto start = std::chrono::steady_clock::now();
        KernelVerdict verdict;
        for (VertexId v = 0; v < n_; ++v)
            if (open_count_[v] == 0)
                pending_.push_back({v, State::in});
        bool found = false;
        if (propagate())
            found = search();
        verdict.stats = stats_;
        if (exhausted_) {
            verdict.outcome = KernelOutcome::budget_exhausted;
        } else if (found) {
            verdict.outcome = KernelOutcome::exists;
            KernelCertificate cert{KernelKind::classic, {}};
            for (VertexId v = 0; v < n_; ++v)
                if (state_[v] == State::in)
                    cert.members.push_back(v);
            verdict.certificate = std::move(cert);
        } else {
            verdict.outcome = KernelOutcome::not_exists;
        }
        verdict.stats.elapsed = std::chrono::steady_clock::now() - start;
        return verdict;
    }

private:
    enum class State : std::uint8_t { undecided, in, out };

    struct Assignment {
        VertexId vertex;
        State value;
    };

    std::size_t out_size(VertexId v) const { return r_.out(v).size(); }

    bool search()
    {
        ++stats_.nodes;
        if (options_.node_budget && stats_.nodes > options_.node_budget) {
            exhausted_ = true;
            return false;
        }
        VertexId pick = n_;
        for (VertexId v : order_)
            if (state_[v] == State::undecided) {
                pick = v;
                break;
            }
        if (pick == n_)
            return true;
        ++stats_.branches;
        for (State value : {State::in, State::out}) {
            const std::size_t mark = trail_.size();
            pending_.clear();
            pending_.push_back({pick, value});
            if (propagate() && search())
                return true;
            undo(mark);
            if (exhausted_)
                return false;
        }
        return false;
    }

    // Applies pending assignments to a fixpoint; false on conflict.
    bool propagate()
    {
        while (!pending_.empty()) {
            const Assignment a = pending_.back();
            pending_.pop_back();
            if (state_[a.vertex] == a.value)
                continue;
            if (state_[a.vertex] != State::undecided) {
                pending_.clear();
                return false;
            }
            assign(a.vertex, a.value);
            if (!(a.value == State::in ? after_in(a.vertex) : after_out(a.vertex))) {
                pending_.clear();
                return false;
            }
        }
        return true;
    }

    void assign(VertexId v, State value)
    {
        state_[v] = value;
        trail_.push_back(v);
        for (VertexId w : r_.in(v)) {
            --open_count_[w];
            if (value == State::in)
                ++in_count_[w];
        }
    }

    void undo(std::size_t mark)
    {
        while (trail_.size() > mark) {
            const VertexId v = trail_.back();
            trail_.pop_back();
            for (VertexId w : r_.in(v)) {
                ++open_count_[w];
                if (state_[v] == State::in)
                    --in_count_[w];
            }
            state_[v] = State::undecided;
        }
    }

    bool after_in(VertexId v)
    {
        for (VertexId w : r_.out(v)) {
            if (state_[w] == State::in)
                return false;
            if (state_[w] == State::undecided)
                pending_.push_back({w, State::out});
        }
        for (VertexId w : r_.in(v)) {
            if (state_[w] == State::in)
                return false;
            if (state_[w] == State::undecided)
                pending_.push_back({w, State::out});
        }
        return true;
    }

    bool after_out(VertexId v)
    {
        if (!check_support(v))
            return false;
        for (VertexId w : r_.in(v)) {
            if (state_[w] == State::out) {
                if (!check_support(w))
                    return false;
            } else if (state_[w] == State::undecided && in_count_[w] == 0 && open_count_[w] == 0) {
                pending_.push_back({w, State::in});
            }
        }
        return true;
    }

    // An OUT vertex needs an IN out-neighbour or at least one undecided one.
    bool check_support(VertexId v)
    {
        if (in_count_[v] > 0)
            return true;
        if (open_count_[v] == 0)
            return false;
        if (open_count_[v] == 1)
            for (VertexId w : r_.out(v))
                if (state_[w] == State::undecided) {
                    pending_.push_back({w, State::in});
                    break;
                }
        return true;
    }

    const Digraph& r_;
    BacktrackOptions options_;
    std::size_t n_;
    std::vector<State> state_;
    std::vector<std::size_t> in_count_;   // IN out-neighbours
    std::vector<std::size_t> open_count_; // undecided out-neighbours
    std::vector<VertexId> order_;
    std::vector<VertexId> trail_;
    std::vector<Assignment> pending_;
    KernelStats stats_;
    bool exhausted_ = false;
};

} // namespace detail

/// Classic kernel of an arbitrary loopless digraph by propagation and
/// branching (undecided vertex of largest out-degree first, IN before OUT).
inline KernelVerdict find_classic_kernel_backtracking(const Digraph& d, BacktrackOptions options = {})
{
    return detail::KernelSearch(d, options).run();
}

/// Kernel by H-walks: a classic kernel of the reachability closure.
inline KernelVerdict find_kernel_backtracking(const ColoredDigraph& d, BacktrackOptions options = {})
{
    const Digraph closure = reachability_closure(d);
    KernelVerdict verdict = find_classic_kernel_backtracking(closure, options);
    if (verdict.certificate)
        verdict.certificate->kind = KernelKind::hwalks;
    return verdict;
}

} // namespace hwalks
