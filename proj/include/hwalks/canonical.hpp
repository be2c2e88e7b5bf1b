#pragma once

#include <hwalks/core.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace hwalks {

/// Dense description of a small digraph: entry (u, v) is 0 when there is no
/// arc u -> v and otherwise a positive code (1 for plain digraphs, 1 + color
/// for colored ones). The diagonal holds loops.
struct CodeMatrix {
    std::size_t n = 0;
    std::vector<std::uint8_t> code;

    explicit CodeMatrix(std::size_t order = 0) : n(order), code(order * order, 0) {}

    std::uint8_t at(VertexId u, VertexId v) const { return code[u * n + v]; }
    std::uint8_t& at(VertexId u, VertexId v) { return code[u * n + v]; }

    std::size_t arc_count() const
    {
        return static_cast<std::size_t>(std::count_if(code.begin(), code.end(), [](auto c) { return c != 0; }));
    }
};

inline CodeMatrix code_matrix(const Digraph& d)
{
    CodeMatrix m(d.order());
    for (const Arc& a : d.arcs())
        m.at(a.tail, a.head) = 1;
    return m;
}

inline CodeMatrix code_matrix(const ColoredDigraph& cd)
{
    CodeMatrix m(cd.order());
    const auto& arcs = cd.digraph().arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        m.at(arcs[i].tail, arcs[i].head) = static_cast<std::uint8_t>(1 + cd.color(i));
    return m;
}

namespace detail {

// Colour refinement: repeatedly split vertex classes by the multiset of
// (code, neighbour class) pairs on out- and in-arcs. Class ids are assigned by
// sorting signatures, so they are isomorphism invariant.
inline std::vector<int> refine_classes(const CodeMatrix& m)
{
    const std::size_t n = m.n;
    std::vector<int> cls(n, 0);
    std::size_t count = 0;
    for (int round = 0; round <= static_cast<int>(n); ++round) {
        std::vector<std::vector<int>> sig(n);
        for (VertexId v = 0; v < n; ++v) {
            std::vector<int> outs, ins;
            for (VertexId w = 0; w < n; ++w) {
                if (w == v)
                    continue;
                if (m.at(v, w))
                    outs.push_back(m.at(v, w) * 64 + cls[w]);
                if (m.at(w, v))
                    ins.push_back(m.at(w, v) * 64 + cls[w]);
            }
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            sig[v] = {cls[v], m.at(v, v), static_cast<int>(outs.size()), static_cast<int>(ins.size())};
            sig[v].insert(sig[v].end(), outs.begin(), outs.end());
            sig[v].push_back(-1);
            sig[v].insert(sig[v].end(), ins.begin(), ins.end());
        }
        std::map<std::vector<int>, int> ids;
        for (const auto& s : sig)
            ids.emplace(s, 0);
        int next = 0;
        for (auto& [s, id] : ids)
            id = next++;
        for (VertexId v = 0; v < n; ++v)
            cls[v] = ids[sig[v]];
        if (ids.size() == count)
            break;
        count = ids.size();
    }
    return cls;
}

} // namespace detail

/// Canonical byte key of a code matrix: the lexicographically least
/// row-major code sequence over all vertex orders that list refinement
/// classes in increasing order. Equal keys iff isomorphic (codes preserved).
inline std::string canonical_key(const CodeMatrix& m)
{
    const std::size_t n = m.n;
    const auto cls = detail::refine_classes(m);
    std::vector<VertexId> order(n);
    for (VertexId v = 0; v < n; ++v)
        order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return cls[a] < cls[b]; });
    std::vector<std::size_t> cell_start;
    for (std::size_t i = 0; i < n; ++i)
        if (i == 0 || cls[order[i]] != cls[order[i - 1]])
            cell_start.push_back(i);
    cell_start.push_back(n);

    std::string best;
    std::string current(n * n, '\0');
    std::function<void(std::size_t)> permute = [&](std::size_t cell) {
        if (cell + 1 == cell_start.size()) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    current[i * n + j] = static_cast<char>(m.at(order[i], order[j]));
            if (best.empty() || current < best)
                best = current;
            return;
        }
        auto first = order.begin() + static_cast<std::ptrdiff_t>(cell_start[cell]);
        auto last = order.begin() + static_cast<std::ptrdiff_t>(cell_start[cell + 1]);
        std::sort(first, last);
        do {
            permute(cell + 1);
        } while (std::next_permutation(first, last));
    };
    permute(0);
    std::string key(1, static_cast<char>(n));
    key += best;
    return key;
}

inline constexpr std::size_t kCanonicalLimit = 8;
inline constexpr std::size_t kColoredCanonicalLimit = 9;

/// Canonical key of a digraph with at most 8 vertices (loops included).
inline std::string canonical_form(const Digraph& d)
{
    if (d.order() > kCanonicalLimit)
        throw SizeLimitExceeded("canonical_form supports at most " + std::to_string(kCanonicalLimit) + " vertices, got "
                                + std::to_string(d.order()));
    return canonical_key(code_matrix(d));
}

/// Canonical key of a colored digraph; isomorphisms must preserve colors.
inline std::string canonical_form(const ColoredDigraph& cd)
{
    if (cd.order() > kColoredCanonicalLimit)
        throw SizeLimitExceeded("colored canonical form supports at most " + std::to_string(kColoredCanonicalLimit)
                                + " vertices");
    return canonical_key(code_matrix(cd));
}

/// Printable rendering of a key: "n:" followed by the hex row-major codes.
inline std::string key_to_hex(const std::string& key)
{
    static const char* digits = "0123456789abcdef";
    std::string out = std::to_string(key.empty() ? 0 : static_cast<unsigned char>(key[0])) + ":";
    for (std::size_t i = 1; i < key.size(); ++i) {
        auto c = static_cast<unsigned char>(key[i]);
        if (c >= 16)
            out += digits[c >> 4];
        out += digits[c & 15];
    }
    return out;
}

/// Rebuilds a digraph from a plain (0/1) code matrix, labelling vertices a, b, c, ...
inline std::vector<std::string> default_labels(std::size_t n)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "v" + std::to_string(i));
    return labels;
}

inline Digraph digraph_from_codes(const CodeMatrix& m, LoopPolicy policy = LoopPolicy::forbidden)
{
    std::vector<Arc> arcs;
    for (VertexId u = 0; u < m.n; ++u)
        for (VertexId v = 0; v < m.n; ++v)
            if (m.at(u, v))
                arcs.push_back({u, v});
    return Digraph(default_labels(m.n), std::move(arcs), policy);
}

inline ColoredDigraph colored_from_codes(const CodeMatrix& m, const Pattern& pattern)
{
    std::vector<std::pair<Arc, ColorId>> arcs;
    for (VertexId u = 0; u < m.n; ++u)
        for (VertexId v = 0; v < m.n; ++v)
            if (m.at(u, v))
                arcs.push_back({{u, v}, static_cast<ColorId>(m.at(u, v) - 1)});
    return ColoredDigraph::from_arcs(default_labels(m.n), std::move(arcs), pattern);
}

/// Connection choices for a new vertex towards one existing vertex:
/// (code of arc old -> new, code of arc new -> old).
struct PairChoice {
    std::uint8_t to_new = 0;
    std::uint8_t from_new = 0;
};

/// One isomorphism class, stored as the representative in canonical order.
struct ClassRep {
    CodeMatrix matrix;
    std::string key;
};

/// Enumerates loopless code matrices up to isomorphism, level by level, by
/// adding one vertex to each representative of the previous level in every
/// allowed way. Complete for any hereditary `accept` predicate. Within a level
/// classes are ordered by arc count, then key.
class IsoClassEnumerator {
public:
    using Accept = std::function<bool(const CodeMatrix&)>;

    IsoClassEnumerator(std::vector<PairChoice> choices, Accept accept)
        : choices_(std::move(choices)), accept_(std::move(accept))
    {
    }

    /// Classes on `n` vertices. Levels are built lazily and cached.
    const std::vector<ClassRep>& level(std::size_t n)
    {
        while (levels_.size() <= n)
            build_next();
        return levels_[n];
    }

private:
    void build_next()
    {
        const std::size_t n = levels_.size();
        std::vector<ClassRep> next;
        if (n == 0) {
            next.push_back({CodeMatrix(0), canonical_key(CodeMatrix(0))});
        } else {
            std::unordered_set<std::string> seen;
            const std::size_t old = n - 1;
            for (const ClassRep& base : levels_[old]) {
                std::vector<std::size_t> pick(old, 0);
                while (true) {
                    CodeMatrix m(n);
                    for (VertexId u = 0; u < old; ++u)
                        for (VertexId v = 0; v < old; ++v)
                            m.at(u, v) = base.matrix.at(u, v);
                    for (VertexId u = 0; u < old; ++u) {
                        m.at(u, old) = choices_[pick[u]].to_new;
                        m.at(old, u) = choices_[pick[u]].from_new;
                    }
                    if (!accept_ || accept_(m)) {
                        std::string key = canonical_key(m);
                        if (seen.insert(key).second)
                            next.push_back({std::move(m), std::move(key)});
                    }
                    std::size_t i = 0;
                    while (i < old && ++pick[i] == choices_.size())
                        pick[i++] = 0;
                    if (i == old)
                        break;
                }
            }
            for (ClassRep& rep : next)
                rep.matrix = relabel_canonically(rep.matrix);
        }
        std::sort(next.begin(), next.end(), [](const ClassRep& a, const ClassRep& b) {
            const auto ca = a.matrix.arc_count(), cb = b.matrix.arc_count();
            return ca != cb ? ca < cb : a.key < b.key;
        });
        levels_.push_back(std::move(next));
    }

    static CodeMatrix relabel_canonically(const CodeMatrix& m)
    {
        // The key itself is the canonical matrix.
        const std::string key = canonical_key(m);
        CodeMatrix out(m.n);
        for (std::size_t i = 0; i < m.n * m.n; ++i)
            out.code[i] = static_cast<std::uint8_t>(key[1 + i]);
        return out;
    }

    std::vector<PairChoice> choices_;
    Accept accept_;
    std::vector<std::vector<ClassRep>> levels_;
};

/// Pair choices for plain loopless digraphs: none, forward, backward, digon.
inline std::vector<PairChoice> plain_pair_choices()
{
    return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
}

/// Loopless digraphs on exactly n vertices, one per isomorphism class.
inline std::vector<Digraph> digraphs_up_to_isomorphism(std::size_t n)
{
    if (n > kCanonicalLimit)
        throw SizeLimitExceeded("enumeration supports at most " + std::to_string(kCanonicalLimit) + " vertices");
    IsoClassEnumerator enumerator(plain_pair_choices(), nullptr);
    std::vector<Digraph> out;
    for (const ClassRep& rep : enumerator.level(n))
        out.push_back(digraph_from_codes(rep.matrix));
    return out;
}

} // namespace hwalks
