#pragma once

#include <hwalks/canonical.hpp>
#include <hwalks/core.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hwalks {

enum class Entry : std::uint8_t { zero, one, any };

/// 2x2 constraint matrix over {0, 1, *}. Entry (i, j) says whether every
/// vertex of part i must (1) or must not (0) dominate every vertex of part j;
/// on the diagonal this means strong clique / independent set.
struct MatrixSpec {
    std::array<std::array<Entry, 2>, 2> entry{};

    friend bool operator==(const MatrixSpec&, const MatrixSpec&) = default;
};

inline constexpr MatrixSpec kM1{{{{Entry::one, Entry::one}, {Entry::any, Entry::one}}}};
inline constexpr MatrixSpec kM2{{{{Entry::one, Entry::zero}, {Entry::zero, Entry::one}}}};

inline std::string to_string(const MatrixSpec& m)
{
    auto c = [](Entry e) { return e == Entry::zero ? '0' : e == Entry::one ? '1' : '*'; };
    return std::string{'(', c(m.entry[0][0]), ' ', c(m.entry[0][1]), ' ', '/', ' ',
                       c(m.entry[1][0]), ' ', c(m.entry[1][1]), ')'};
}

struct PartitionCertificate {
    std::vector<VertexId> part1;
    std::vector<VertexId> part2;
    MatrixSpec matrix;
};

/// Checks a certificate on the loopless part of d: parts are disjoint,
/// cover V, and every ordered pair of distinct vertices obeys the matrix.
inline bool validate_partition(const Digraph& d, const PartitionCertificate& cert)
{
    std::vector<int> part(d.order(), -1);
    for (VertexId v : cert.part1) {
        if (v >= d.order() || part[v] != -1)
            return false;
        part[v] = 0;
    }
    for (VertexId v : cert.part2) {
        if (v >= d.order() || part[v] != -1)
            return false;
        part[v] = 1;
    }
    for (VertexId u = 0; u < d.order(); ++u) {
        if (part[u] == -1)
            return false;
        for (VertexId v = 0; v < d.order(); ++v) {
            if (u == v)
                continue;
            const Entry e = cert.matrix.entry[part[u]][part[v]];
            if (e == Entry::one && !d.has_arc(u, v))
                return false;
            if (e == Entry::zero && d.has_arc(u, v))
                return false;
        }
    }
    return true;
}

inline constexpr std::size_t kPartitionBruteForceLimit = 20;

/// Tries all 2^n assignments in lexicographic order (first vertex most
/// significant, part 1 before part 2) and returns the first valid one.
inline std::optional<PartitionCertificate> m_partition_bruteforce(const Digraph& d, const MatrixSpec& m)
{
    const std::size_t n = d.order();
    if (n > kPartitionBruteForceLimit)
        throw SizeLimitExceeded("brute-force M-partition supports at most "
                                + std::to_string(kPartitionBruteForceLimit) + " vertices");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        PartitionCertificate cert{{}, {}, m};
        for (VertexId v = 0; v < n; ++v)
            ((mask >> (n - 1 - v)) & 1U ? cert.part2 : cert.part1).push_back(v);
        if (validate_partition(d, cert))
            return cert;
    }
    return std::nullopt;
}

/// M1-partition: two strong cliques with every part-1 vertex dominating
/// every part-2 vertex. Every pair must be adjacent, the tail of an
/// asymmetric arc goes to part 1 and its head to part 2; vertices incident
/// only to digons may sit anywhere and are placed in part 1.
inline std::optional<PartitionCertificate> m1_partition(const Digraph& d)
{
    const std::size_t n = d.order();
    enum : std::uint8_t { free_, first, second };
    std::vector<std::uint8_t> forced(n, free_);
    auto force = [&](VertexId v, std::uint8_t side) {
        if (forced[v] != free_ && forced[v] != side)
            return false;
        forced[v] = side;
        return true;
    };
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) {
            const bool uv = d.has_arc(u, v), vu = d.has_arc(v, u);
            if (!uv && !vu)
                return std::nullopt;
            if (uv && !vu && !(force(u, first) && force(v, second)))
                return std::nullopt;
            if (vu && !uv && !(force(v, first) && force(u, second)))
                return std::nullopt;
        }
    PartitionCertificate cert{{}, {}, kM1};
    for (VertexId v = 0; v < n; ++v)
        (forced[v] == second ? cert.part2 : cert.part1).push_back(v);
    if (validate_partition(d, cert))
        return cert;
    // Not reachable for loopless input; the oracle settles it regardless.
    if (n <= kPartitionBruteForceLimit)
        return m_partition_bruteforce(d, kM1);
    return std::nullopt;
}

namespace detail {

// Union-find with parity: parity(v) is v's side relative to its root.
class ParityUnionFind {
public:
    explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0)
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::pair<std::size_t, int> find(std::size_t v)
    {
        int p = 0;
        std::size_t root = v;
        while (parent_[root] != root) {
            p ^= parity_[root];
            root = parent_[root];
        }
        // path compression
        int q = p;
        while (parent_[v] != root) {
            const std::size_t next = parent_[v];
            const int old = parity_[v];
            parent_[v] = root;
            parity_[v] = q;
            q ^= old;
            v = next;
        }
        return {root, p};
    }

    // Requires side(a) xor side(b) == diff; false on contradiction.
    bool relate(std::size_t a, std::size_t b, int diff)
    {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb)
            return (pa ^ pb) == diff;
        parent_[rb] = ra;
        parity_[rb] = pa ^ pb ^ diff;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> parity_;
};

} // namespace detail

/// M2-partition: two strong cliques with no arcs between them. Impossible
/// with an asymmetric arc; otherwise digon pairs share a part and
/// non-adjacent pairs are split, solved as a parity union-find.
inline std::optional<PartitionCertificate> m2_partition(const Digraph& d)
{
    const std::size_t n = d.order();
    detail::ParityUnionFind uf(n);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) {
            const bool uv = d.has_arc(u, v), vu = d.has_arc(v, u);
            if (uv != vu)
                return std::nullopt;
            if (!uf.relate(u, v, uv ? 0 : 1))
                return std::nullopt;
        }
    PartitionCertificate cert{{}, {}, kM2};
    for (VertexId v = 0; v < n; ++v)
        (uf.find(v).second == 0 ? cert.part1 : cert.part2).push_back(v);
    if (!validate_partition(d, cert))
        return std::nullopt;
    return cert;
}

inline bool panchromatic_partitionable(const Digraph& d)
{
    return m1_partition(d).has_value() || m2_partition(d).has_value();
}

/// A loopless digraph that is a minimal obstruction for at least one of
/// the three properties (M1-partition, M2-partition, either of them).
struct ObstructionRecord {
    Digraph graph;
    std::string key;
    bool m1_minimal = false;
    bool m2_minimal = false;
    bool panchromatic_minimal = false;
};

inline constexpr std::size_t kObstructionLimit = 5;

/// Enumerates loopless digraphs on up to max_n vertices up to isomorphism and
/// keeps the minimal obstructions. Since the properties are hereditary,
/// minimality only needs the one-vertex-deleted subdigraphs.
inline std::vector<ObstructionRecord> minimal_obstruction_family(std::size_t max_n)
{
    if (max_n > kObstructionLimit)
        throw SizeLimitExceeded("obstruction enumeration supports at most " + std::to_string(kObstructionLimit)
                                + " vertices");
    IsoClassEnumerator enumerator(plain_pair_choices(), nullptr);
    std::vector<ObstructionRecord> records;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (const ClassRep& rep : enumerator.level(n)) {
            Digraph d = digraph_from_codes(rep.matrix);
            const bool has1 = m1_partition(d).has_value();
            const bool has2 = m2_partition(d).has_value();
            if (has1 && has2)
                continue;
            bool subs1 = true, subs2 = true, subs_any = true;
            for (VertexId drop = 0; drop < n; ++drop) {
                std::vector<VertexId> keep;
                for (VertexId v = 0; v < n; ++v)
                    if (v != drop)
                        keep.push_back(v);
                const Digraph sub = induced_subdigraph(d, keep);
                const bool s1 = m1_partition(sub).has_value();
                const bool s2 = m2_partition(sub).has_value();
                subs1 = subs1 && s1;
                subs2 = subs2 && s2;
                subs_any = subs_any && (s1 || s2);
            }
            ObstructionRecord rec{std::move(d), rep.key, !has1 && subs1, !has2 && subs2, !has1 && !has2 && subs_any};
            if (rec.m1_minimal || rec.m2_minimal || rec.panchromatic_minimal)
                records.push_back(std::move(rec));
        }
    }
    return records;
}

/// A member F_i of the forbidden family.
struct FamilyMember {
    int index = 0;
    Digraph graph;
    std::string key;
};

namespace detail {

inline bool is_empty_triple(const Digraph& d) { return d.order() == 3 && d.size() == 0; }

// a <-> b <-> c with a, c non-adjacent
inline bool is_digon_path(const Digraph& d)
{
    if (d.order() != 3 || d.size() != 4)
        return false;
    for (VertexId mid = 0; mid < 3; ++mid) {
        const VertexId a = (mid + 1) % 3, c = (mid + 2) % 3;
        if (d.is_digon(mid, a) && d.is_digon(mid, c) && !d.adjacent(a, c))
            return true;
    }
    return false;
}

} // namespace detail

/// The eleven three-vertex minimal panchromatic obstructions, indexed 1..11.
/// F1 is the independent triple and F8 the digon path; F9-F11 are the
/// three-vertex minimal M1-obstructions and F2-F7 the rest, each group in
/// canonical-key order.
inline const std::vector<FamilyMember>& panchromatic_family()
{
    static const std::vector<FamilyMember> family = [] {
        std::vector<FamilyMember> f1, f8, m1, rest;
        for (auto& rec : minimal_obstruction_family(3)) {
            if (!rec.panchromatic_minimal || rec.graph.order() != 3)
                continue;
            FamilyMember m{0, rec.graph, rec.key};
            if (detail::is_empty_triple(rec.graph))
                f1.push_back(std::move(m));
            else if (detail::is_digon_path(rec.graph))
                f8.push_back(std::move(m));
            else if (rec.m1_minimal)
                m1.push_back(std::move(m));
            else
                rest.push_back(std::move(m));
        }
        auto by_key = [](const FamilyMember& a, const FamilyMember& b) { return a.key < b.key; };
        std::sort(m1.begin(), m1.end(), by_key);
        std::sort(rest.begin(), rest.end(), by_key);
        std::vector<FamilyMember> out;
        auto take = [&](std::vector<FamilyMember>& group) {
            for (auto& m : group) {
                m.index = static_cast<int>(out.size()) + 1;
                out.push_back(std::move(m));
            }
        };
        take(f1);
        if (rest.size() >= 6) {
            std::vector<FamilyMember> head(rest.begin(), rest.begin() + 6);
            std::vector<FamilyMember> tail(rest.begin() + 6, rest.end());
            take(head);
            take(f8);
            take(m1);
            take(tail);
        } else {
            take(rest);
            take(f8);
            take(m1);
        }
        return out;
    }();
    return family;
}

struct ObstructionWitness {
    std::vector<VertexId> vertices; // sorted
    std::string key;
    int family_index = 0;
};

namespace detail {

template <typename Visit>
void for_each_subset(std::size_t n, std::size_t size, Visit&& visit)
{
    std::vector<VertexId> pick(size);
    std::function<bool(std::size_t, VertexId)> rec = [&](std::size_t depth, VertexId from) {
        if (depth == size)
            return visit(std::as_const(pick));
        for (VertexId v = from; v < n; ++v) {
            pick[depth] = v;
            if (!rec(depth + 1, v + 1))
                return false;
        }
        return true;
    };
    rec(0, 0);
}

} // namespace detail

/// Every induced copy of a family member, ordered by subset size and then
/// lexicographically. Loops of d are ignored.
inline std::vector<ObstructionWitness> scan_forbidden_all(const Digraph& d, const std::vector<FamilyMember>& family)
{
    const Digraph plain = d.has_loops() ? without_loops(d) : d;
    std::vector<ObstructionWitness> out;
    std::vector<std::size_t> sizes;
    for (const auto& m : family)
        if (std::find(sizes.begin(), sizes.end(), m.graph.order()) == sizes.end())
            sizes.push_back(m.graph.order());
    std::sort(sizes.begin(), sizes.end());
    for (std::size_t size : sizes) {
        if (size > 3)
            throw PreconditionViolated("family members must have at most 3 vertices");
        detail::for_each_subset(plain.order(), size, [&](const std::vector<VertexId>& pick) {
            const std::string key = canonical_form(induced_subdigraph(plain, pick));
            for (const auto& m : family)
                if (m.key == key) {
                    out.push_back({pick, key, m.index});
                    break;
                }
            return true;
        });
    }
    return out;
}

/// First induced copy of a family member, if any.
inline std::optional<ObstructionWitness> scan_forbidden(const Digraph& d, const std::vector<FamilyMember>& family)
{
    auto all = scan_forbidden_all(d, family);
    if (all.empty())
        return std::nullopt;
    return all.front();
}

/// Role assignment for the constructions; vertices of H (or of a witness).
struct Roles {
    VertexId red = 0;
    VertexId green = 0;
    VertexId blue = 0;

    friend bool operator==(const Roles&, const Roles&) = default;
};

/// First (red, green, blue) over lexicographic vertex orders such that
/// red -> green is an asymmetric arc and red -> blue is not an arc.
inline std::optional<Roles> subdivision_roles(const Digraph& f)
{
    if (f.order() != 3)
        throw PreconditionViolated("role search needs exactly 3 vertices, got " + std::to_string(f.order()));
    for (VertexId red = 0; red < 3; ++red)
        for (VertexId green = 0; green < 3; ++green) {
            if (green == red)
                continue;
            const VertexId blue = 3 - red - green;
            if (f.has_arc(red, green) && !f.has_arc(green, red) && !f.has_arc(red, blue))
                return Roles{red, green, blue};
        }
    return std::nullopt;
}

/// Roles for the coloring gadget: {green, blue} is the first non-adjacent
/// pair of the three vertices, red is the remaining one.
inline std::optional<Roles> gadget_roles(const Digraph& f)
{
    if (f.order() != 3)
        throw PreconditionViolated("role search needs exactly 3 vertices, got " + std::to_string(f.order()));
    for (VertexId g = 0; g < 3; ++g)
        for (VertexId b = g + 1; b < 3; ++b)
            if (!f.adjacent(g, b))
                return Roles{3 - g - b, g, b};
    return std::nullopt;
}

enum class ReductionCase { none, all_red, subdivision, coloring_gadget };

inline const char* to_string(ReductionCase c)
{
    switch (c) {
    case ReductionCase::none:
        return "none";
    case ReductionCase::all_red:
        return "all-red";
    case ReductionCase::subdivision:
        return "subdivision";
    case ReductionCase::coloring_gadget:
        return "coloring-gadget";
    }
    return "?";
}

struct PatternClassification {
    bool panchromatic = false;
    std::optional<VertexId> loopless_vertex;           // all-red evidence
    std::optional<ObstructionWitness> witness;         // obstruction evidence
    std::optional<PartitionCertificate> partition;     // panchromatic evidence
    ReductionCase reduction = ReductionCase::none;
    std::optional<Roles> roles;                        // vertices of H
};

/// Decides whether H is a panchromatic pattern. Non-panchromatic answers
/// name the construction that applies and the roles it needs.
inline PatternClassification classify_pattern(const Pattern& h)
{
    PatternClassification out;
    const Digraph& g = h.graph();
    for (VertexId v = 0; v < g.order(); ++v)
        if (!h.is_looped(v)) {
            out.loopless_vertex = v;
            out.reduction = ReductionCase::all_red;
            out.roles = Roles{v, v, v};
            return out;
        }
    const Digraph plain = without_loops(g);
    const auto witnesses = scan_forbidden_all(plain, panchromatic_family());
    if (witnesses.empty()) {
        out.panchromatic = true;
        if (auto c = m1_partition(plain))
            out.partition = std::move(c);
        else
            out.partition = m2_partition(plain);
        return out;
    }
    for (const auto& w : witnesses) {
        if (auto r = subdivision_roles(induced_subdigraph(plain, w.vertices))) {
            out.witness = w;
            out.reduction = ReductionCase::subdivision;
            out.roles = Roles{w.vertices[r->red], w.vertices[r->green], w.vertices[r->blue]};
            return out;
        }
    }
    const auto& w = witnesses.front();
    out.witness = w;
    out.reduction = ReductionCase::coloring_gadget;
    if (auto r = gadget_roles(induced_subdigraph(plain, w.vertices)))
        out.roles = Roles{w.vertices[r->red], w.vertices[r->green], w.vertices[r->blue]};
    return out;
}

/// Re-checks the evidence carried by a classification against H.
inline bool verify_classification(const Pattern& h, const PatternClassification& c)
{
    const Digraph plain = without_loops(h.graph());
    if (c.panchromatic)
        return h.is_fully_looped() && c.partition && validate_partition(plain, *c.partition)
               && !scan_forbidden(plain, panchromatic_family());
    if (c.reduction == ReductionCase::all_red)
        return c.loopless_vertex && !h.is_looped(*c.loopless_vertex);
    if (!c.witness || !c.roles || !h.is_fully_looped())
        return false;
    if (canonical_form(induced_subdigraph(plain, c.witness->vertices)) != c.witness->key)
        return false;
    const Roles& r = *c.roles;
    if (c.reduction == ReductionCase::subdivision)
        return plain.has_arc(r.red, r.green) && !plain.has_arc(r.green, r.red) && !plain.has_arc(r.red, r.blue);
    if (c.reduction == ReductionCase::coloring_gadget)
        return !plain.adjacent(r.green, r.blue);
    return false;
}

} // namespace hwalks
