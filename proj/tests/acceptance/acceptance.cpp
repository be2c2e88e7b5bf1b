#include <hwalks/hwalks.hpp>

#include <generators.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace hwalks;
using namespace hwalks::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome within(Outcome o, double elapsed, double limit)
{
    if (elapsed >= limit) {
        o.pass = false;
        o.detail += "; exceeded " + std::to_string(static_cast<int>(limit)) + " s";
    }
    return o;
}

Outcome reach_oracle_equivalence()
{
    Rng rng(1);
    std::size_t instances = 0, sources = 0, mismatches = 0;
    for (int t = 0; t < 1200; ++t) {
        const Pattern h = random_pattern(rng, 1 + t % 4, 0.2 + 0.1 * (t % 6));
        const auto d = random_colored(rng, 1 + t % 8, 0.05 + 0.1 * (t % 9), h);
        ++instances;
        for (VertexId v = 0; v < d.order(); ++v, ++sources)
            if (reach_by_h_walks(d, v).members != reach_oracle(d, v).members)
                ++mismatches;
    }
    return {mismatches == 0, std::to_string(instances) + " instances, " + std::to_string(sources) + " sources, "
                                 + std::to_string(mismatches) + " mismatches"};
}

Outcome reach_scaling()
{
    Rng rng(2);
    const Pattern h = random_pattern(rng, 4, 0.5);
    std::vector<double> ratio;
    std::ostringstream detail;
    for (std::size_t n : {100, 200, 400, 800}) {
        const std::size_t m = 4 * n;
        const auto d = random_coloring(rng, random_digraph_m(rng, n, m), h);
        double best = 1e30;
        double spent = 0;
        for (int rep = 0; rep < 7 || spent < 0.2; ++rep) {
            const auto start = Clock::now();
            const auto rows = reach_sets(d, 1);
            const double s = seconds_since(start);
            spent += s;
            best = std::min(best, s);
            if (rows.size() != n)
                return {false, "closure has wrong size"};
        }
        ratio.push_back(best / static_cast<double>(n * m));
        detail << "n=" << n << " t=" << best * 1e3 << "ms ";
    }
    bool ok = true;
    for (std::size_t i = 1; i < ratio.size(); ++i) {
        const double growth = ratio[i] / ratio[i - 1];
        detail << "growth" << i << "=" << growth << ' ';
        ok = ok && growth <= 1.5;
    }
    return {ok, detail.str()};
}

Outcome obstruction_census()
{
    std::size_t two = 0, m1_indep = 0, m2_arc = 0, three = 0;
    for (const auto& r : minimal_obstruction_family(3)) {
        if (r.graph.order() == 2) {
            ++two;
            m1_indep += r.m1_minimal && r.graph.size() == 0;
            m2_arc += r.m2_minimal && r.graph.size() == 1;
        }
        if (r.graph.order() == 3 && r.panchromatic_minimal)
            ++three;
    }
    const bool ok = two == 2 && m1_indep == 1 && m2_arc == 1 && three == 11;
    return {ok, std::to_string(two) + " two-vertex (independent pair for M1: " + std::to_string(m1_indep)
                    + ", asymmetric arc for M2: " + std::to_string(m2_arc) + "), " + std::to_string(three)
                    + " three-vertex panchromatic"};
}

Outcome partition_characterization()
{
    std::size_t checked = 0, bad = 0;
    for (std::size_t n = 0; n <= 4; ++n)
        for (const Digraph& d : digraphs_up_to_isomorphism(n)) {
            ++checked;
            if (panchromatic_partitionable(d) != !scan_forbidden(d, panchromatic_family()).has_value())
                ++bad;
        }
    return {bad == 0, std::to_string(checked) + " digraphs, " + std::to_string(bad) + " discrepancies"};
}

Outcome partition_oracles()
{
    std::size_t checked = 0, bad = 0;
    for (std::size_t n = 0; n <= 5; ++n)
        for (const Digraph& d : digraphs_up_to_isomorphism(n)) {
            ++checked;
            const auto a1 = m1_partition(d), a2 = m2_partition(d);
            bad += a1.has_value() != m_partition_bruteforce(d, kM1).has_value();
            bad += a2.has_value() != m_partition_bruteforce(d, kM2).has_value();
            bad += a1 && !validate_partition(d, *a1);
            bad += a2 && !validate_partition(d, *a2);
        }
    return {bad == 0, std::to_string(checked) + " digraphs, " + std::to_string(bad) + " discrepancies"};
}

Outcome two_colors_always_have_kernels()
{
    Rng rng(6);
    const Pattern h = looped_isolated_pattern({"red", "blue"});
    std::size_t exists = 0, verified = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + t % 40;
        const auto d = random_colored(rng, n, 0.02 + 0.03 * (t % 12), h);
        const auto v = find_kernel_backtracking(d);
        if (v.outcome == KernelOutcome::exists) {
            ++exists;
            verified += is_kernel_by_h_walks(d, v.certificate->members).valid;
        }
    }
    return {exists == 500 && verified == 500,
            std::to_string(exists) + "/500 exists, " + std::to_string(verified) + " certificates re-verified"};
}

// Directed triangle on the first three vertices plus random arcs up to m.
Digraph with_planted_triangle(Rng& rng, std::size_t n, std::size_t m)
{
    std::set<std::pair<VertexId, VertexId>> arcs{{0, 1}, {1, 2}, {2, 0}};
    std::uniform_int_distribution<VertexId> pick(0, n - 1);
    while (arcs.size() < m) {
        const VertexId u = pick(rng), v = pick(rng);
        if (u != v)
            arcs.insert({u, v});
    }
    std::vector<Arc> list;
    for (const auto& [u, v] : arcs)
        list.push_back({u, v});
    return Digraph(names(n), std::move(list), LoopPolicy::forbidden);
}

Outcome subdivision_biconditional()
{
    Rng rng(7);
    const Pattern h(Digraph::from_labels({"red", "green", "blue"},
                                         {{"red", "red"}, {"green", "green"}, {"blue", "blue"}, {"red", "green"}},
                                         LoopPolicy::allowed));
    const Roles roles{0, 1, 2};
    std::size_t bad = 0, with_kernel = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 8;
        // D' has n + 2m vertices and must stay within brute-force range
        const std::size_t m = std::min<std::size_t>({n * (n - 1), (kBruteForceLimit - n) / 2,
                                                      static_cast<std::size_t>(3 + t % 6)});
        const auto d = t % 2 && n >= 3 ? with_planted_triangle(rng, n, m) : random_digraph_m(rng, n, m);
        const auto art = reduce_subdivision(d, h, roles);
        const auto src = find_kernel_bruteforce(d);
        const auto dst = find_kernel_bruteforce(art.colored);
        bad += src.outcome != dst.outcome;
        if (src.certificate) {
            ++with_kernel;
            const auto k = kernel_to_target(art, labels_of(d, src.certificate->members));
            bad += !is_kernel_by_h_walks(art.colored, k).valid;
        }
        if (dst.certificate) {
            const auto back = kernel_to_source(art, dst.certificate->members);
            bad += !is_kernel(d, resolve_labels(d, back)).valid;
        }
        for (VertexId x = 0; x < d.order(); ++x) {
            std::vector<VertexId> expected{x};
            for (VertexId y : d.out(x)) {
                expected.push_back(y);
                expected.push_back(art.at({OriginKind::mid, d.label(x), d.label(y), 0, {}}));
            }
            std::sort(expected.begin(), expected.end());
            bad += reach_by_h_walks(art.colored, x).members != expected;
        }
    }
    return {bad == 0, "200 instances (" + std::to_string(with_kernel) + " with kernels), " + std::to_string(bad)
                          + " discrepancies"};
}

std::optional<std::vector<std::size_t>> color_graph(const Graph& g, std::size_t k)
{
    std::vector<std::size_t> c(g.order(), 0);
    std::function<bool(VertexId)> go = [&](VertexId v) {
        if (v == g.order())
            return true;
        for (std::size_t i = 1; i <= k; ++i) {
            bool free = true;
            for (VertexId w : g.neighbors(v))
                free = free && c[w] != i;
            if (!free)
                continue;
            c[v] = i;
            if (go(v + 1))
                return true;
        }
        c[v] = 0;
        return false;
    };
    if (!go(0))
        return std::nullopt;
    return c;
}

Graph cycle_graph(std::size_t n)
{
    std::vector<std::string> labels = names(n);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < n; ++i)
        edges.push_back({labels[i], labels[(i + 1) % n]});
    return Graph::from_labels(labels, edges);
}

Graph petersen()
{
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < 5; ++i)
        labels.push_back("o" + std::to_string(i));
    for (int i = 0; i < 5; ++i)
        labels.push_back("i" + std::to_string(i));
    for (int i = 0; i < 5; ++i) {
        edges.push_back({"o" + std::to_string(i), "o" + std::to_string((i + 1) % 5)});
        edges.push_back({"i" + std::to_string(i), "i" + std::to_string((i + 2) % 5)});
        edges.push_back({"o" + std::to_string(i), "i" + std::to_string(i)});
    }
    return Graph::from_labels(labels, edges);
}

Graph k4()
{
    return Graph::from_labels({"a", "b", "c", "d"},
                              {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
}

const Pattern& mono3()
{
    static const Pattern h = looped_isolated_pattern({"c1", "c2", "c3"});
    return h;
}

// Independent count of bipartite-tournament classes: labeled code matrices
// filtered by a split search, then pairwise isomorphism tests.
std::size_t direct_bipartite_tournament_count(std::size_t n, std::uint8_t colors)
{
    std::vector<CodeMatrix> kept;
    for (const auto& m : all_labeled(n, colors)) {
        bool digon = false;
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = u + 1; v < n; ++v)
                digon = digon || (m.at(u, v) && m.at(v, u));
        if (digon)
            continue;
        bool ok = false;
        for (std::uint32_t side = 0; side < (1U << n) && !ok; ++side) {
            ok = true;
            for (VertexId u = 0; u < n && ok; ++u)
                for (VertexId v = u + 1; v < n && ok; ++v)
                    ok = (m.at(u, v) || m.at(v, u)) == ((side >> u & 1) != (side >> v & 1));
        }
        if (ok)
            kept.push_back(m);
    }
    return count_classes_pairwise(kept);
}

struct SearchOutcome {
    Outcome outcome;
    std::optional<ColoredDigraph> f;
};

SearchOutcome kernel_free_search()
{
    const SearchResult r = search_kernel_free(SearchSpec{mono3(), 8, {true, true, false}, {}, 4});
    std::ostringstream detail;
    bool ok = true;
    for (const auto& level : r.report.levels)
        if (level.n <= 3) {
            const std::size_t direct = direct_bipartite_tournament_count(level.n, 3);
            detail << "n=" << level.n << " candidates " << level.candidates << " (direct " << direct << ") ";
            ok = ok && direct == level.candidates;
        }
    if (r.instance) {
        const bool scan = kernel_free_by_subset_scan(*r.instance);
        detail << "found on " << r.instance->order() << " vertices, subset scan "
               << (scan ? "confirms" : "REFUTES") << " kernel-freeness";
        ok = ok && scan;
    } else {
        detail << "not found up to " << r.report.max_n << " vertices";
    }
    return {{ok, detail.str()}, r.instance};
}

ColoredDigraph hand_supplied_f()
{
    return ColoredDigraph::from_labels({"p", "q", "r"}, {{"p", "q", "c1"}, {"q", "r", "c2"}, {"r", "p", "c3"}},
                                       mono3());
}

Outcome gadget_positive(const ColoredDigraph& f, const std::string& source)
{
    const Roles roles = *classify_pattern(mono3()).roles;
    const std::vector<std::pair<std::string, Graph>> graphs{
        {"P3", Graph::from_labels({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}})}, {"C5", cycle_graph(5)},
        {"Petersen", petersen()}};
    std::ostringstream detail;
    detail << "F from " << source << " (" << f.order() << " vertices): ";
    bool ok = true;
    for (const auto& [name, g] : graphs) {
        const auto coloring = color_graph(g, 3);
        if (!coloring)
            return {false, name + " has no 3-coloring"};
        const auto art = reduce_kcoloring(g, 3, mono3(), roles, f);
        const auto k = kernel_from_coloring(art, *coloring);
        const bool verified = is_kernel_by_h_walks(art.colored, k).valid;
        const bool round_trip = verified && extract_coloring(art, k) == *coloring;
        detail << name << " |V|=" << art.colored.order() << (verified ? " verified" : " NOT a kernel")
               << (round_trip ? ", round-trips; " : ", no round trip; ");
        ok = ok && verified && round_trip;
    }
    return {ok, detail.str()};
}

Outcome gadget_negative(const ColoredDigraph& f)
{
    const auto art = reduce_kcoloring(k4(), 3, mono3(), *classify_pattern(mono3()).roles, f);
    const auto v = find_kernel_backtracking(art.colored, {10'000'000});
    return {v.outcome == KernelOutcome::not_exists,
            "K4, k=3, |V(D_G)|=" + std::to_string(art.colored.order()) + ": " + to_string(v.outcome) + " after "
                + std::to_string(v.stats.nodes) + " nodes"};
}

Outcome dispatch_coverage()
{
    std::size_t without = 0, with_pair = 0;
    for (const auto& member : panchromatic_family()) {
        if (subdivision_roles(member.graph))
            continue;
        ++without;
        if (auto g = gadget_roles(member.graph); g && !member.graph.adjacent(g->green, g->blue))
            ++with_pair;
    }
    std::size_t patterns = 0, dispatched = 0, non_panchromatic = 0;
    for (std::size_t n = 1; n <= 4; ++n)
        for (const Digraph& d : digraphs_up_to_isomorphism(n)) {
            std::vector<Arc> arcs = d.arcs();
            for (VertexId v = 0; v < n; ++v)
                arcs.push_back({v, v});
            const Pattern h(Digraph(d.labels(), arcs, LoopPolicy::allowed));
            const auto c = classify_pattern(h);
            ++patterns;
            if (!c.panchromatic) {
                ++non_panchromatic;
                dispatched += c.reduction != ReductionCase::none && c.roles && verify_classification(h, c);
            }
        }
    const bool ok = without == 4 && with_pair == 4 && dispatched == non_panchromatic;
    return {ok, std::to_string(without) + " members without subdivision roles, " + std::to_string(with_pair)
                    + " with an independent pair; " + std::to_string(dispatched) + "/"
                    + std::to_string(non_panchromatic) + " non-panchromatic looped patterns dispatched (of "
                    + std::to_string(patterns) + " on <= 4 colors)"};
}

Outcome edge_coloring_biconditional()
{
    Rng rng(12);
    std::size_t bad = 0, max_colors = 0;
    for (int t = 0; t < 100; ++t) {
        const auto d = random_low_degree_digraph(rng, 1 + t % 10, 40);
        const auto colors = proper_arc_coloring(d, 4);
        bad += !is_proper_arc_coloring(d, colors);
        for (auto c : colors)
            max_colors = std::max(max_colors, c + 1);
        const auto art = reduce_edge_coloring(d);
        const auto src = find_kernel_bruteforce(d);
        const auto dst = find_kernel_bruteforce(art.colored);
        bad += src.outcome != dst.outcome;
        if (dst.certificate)
            bad += !is_kernel(d, dst.certificate->members).valid;
    }
    return {bad == 0 && max_colors <= 4,
            "100 instances, at most " + std::to_string(max_colors) + " colors, " + std::to_string(bad)
                + " discrepancies"};
}

} // namespace

int main()
{
    std::map<int, std::pair<std::string, Outcome>> results;
    std::map<int, double> times;
    auto run = [&](int id, const std::string& title, double limit, const std::function<Outcome()>& body) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = seconds_since(start);
        times[id] = elapsed;
        results[id] = {title, limit > 0 ? within(o, elapsed, limit) : o};
    };

    run(1, "reachability matches the product-graph oracle", 30, reach_oracle_equivalence);
    run(2, "closure time grows like n*m", 60, reach_scaling);
    run(3, "obstruction census", 10, obstruction_census);
    run(4, "partitionable iff F-free on <= 4 vertices", 120, partition_characterization);
    run(5, "partition algorithms agree with brute force on <= 5 vertices", 0, partition_oracles);
    run(6, "two looped colors always give a kernel", 120, two_colors_always_have_kernels);
    run(7, "subdivision reduction biconditional", 0, subdivision_biconditional);

    std::optional<ColoredDigraph> f;
    run(10, "kernel-free search soundness", 0, [&] {
        auto s = kernel_free_search();
        f = s.f;
        return s.outcome;
    });
    const ColoredDigraph gadget_f = f ? *f : hand_supplied_f();
    const std::string f_source = f ? "criterion 10 search" : "hand-supplied F (criterion 10 found none)";
    run(8, "coloring gadget, positive side", 60, [&] { return gadget_positive(gadget_f, f_source); });
    run(9, "coloring gadget, negative side", 0, [&] {
        Outcome o = gadget_negative(gadget_f);
        o.detail += "; F from " + f_source;
        return o;
    });
    run(11, "dispatch coverage", 5, dispatch_coverage);
    run(12, "edge-coloring reduction biconditional", 0, edge_coloring_biconditional);

    int failures = 0;
    for (const auto& [id, entry] : results) {
        const auto& [title, o] = entry;
        failures += !o.pass;
        std::printf("%s criterion %d: %s (%.2f s) - %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), times[id],
                    o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures, results.size());
    return failures == 0 ? 0 : 1;
}
