#include <gtest/gtest.h>

#include <generators.hpp>

using namespace hwalks;
using namespace hwalks::testing;

namespace {

const Digraph c3 = Digraph::from_labels({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
const Digraph single_arc = Digraph::from_labels({"a", "b"}, {{"a", "b"}});

Pattern subdivision_pattern()
{
    return Pattern(Digraph::from_labels({"red", "green", "blue"},
                                        {{"red", "red"}, {"green", "green"}, {"blue", "blue"}, {"red", "green"}},
                                        LoopPolicy::allowed));
}

const Pattern mono3 = looped_isolated_pattern({"c1", "c2", "c3"});

// Rainbow directed triangle: no two consecutive arcs form an H-walk.
ColoredDigraph rainbow_triangle()
{
    return ColoredDigraph::from_labels({"p", "q", "r"}, {{"p", "q", "c1"}, {"q", "r", "c2"}, {"r", "p", "c3"}}, mono3);
}

Roles gadget_roles_of(const Pattern& h) { return *classify_pattern(h).roles; }

Graph path3() { return Graph::from_labels({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}); }
Graph triangle() { return Graph::from_labels({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}); }

} // namespace

TEST(AllRed, Examples)
{
    const Pattern h(Digraph::from_labels({"r"}, {}, LoopPolicy::allowed));
    const auto arc = reduce_all_red(single_arc, h, 0);
    const auto k = find_kernel_bruteforce(arc.colored);
    ASSERT_EQ(k.outcome, KernelOutcome::exists);
    EXPECT_EQ(k.certificate->members, (std::vector<VertexId>{1}));
    EXPECT_EQ(find_kernel_bruteforce(reduce_all_red(c3, h, 0).colored).outcome, KernelOutcome::not_exists);
    const auto arcless = reduce_all_red(Digraph::from_labels({"a", "b"}, {}), h, 0);
    EXPECT_TRUE(is_kernel_by_h_walks(arcless.colored, std::vector<VertexId>{0, 1}).valid);
    EXPECT_THROW(reduce_all_red(c3, looped_isolated_pattern({"r"}), 0), PreconditionViolated);
}

TEST(AllRed, KernelsCoincide)
{
    Rng rng(31);
    const Pattern h(Digraph::from_labels({"r", "g"}, {{"g", "g"}, {"r", "g"}}, LoopPolicy::allowed));
    for (int t = 0; t < 200; ++t) {
        const auto d = random_digraph(rng, 1 + t % 8, 0.3);
        const auto art = reduce_all_red(d, h, 0);
        EXPECT_EQ(find_kernel_bruteforce(d).outcome, find_kernel_bruteforce(art.colored).outcome);
    }
}

TEST(Subdivision, SingleArc)
{
    const auto art = reduce_subdivision(single_arc, subdivision_pattern(), {0, 1, 2});
    EXPECT_EQ(art.colored.order(), 4u);
    EXPECT_EQ(art.colored.digraph().size(), 3u);
    const VertexId mid = art.at({OriginKind::mid, "a", "b", 0, {}});
    const VertexId pend = art.at({OriginKind::pendant, "a", "b", 0, {}});
    EXPECT_EQ(art.colored.digraph().label(mid), "a->b::mid::0");
    EXPECT_EQ(art.colored.digraph().label(pend), "a->b::pendant::0");
    EXPECT_EQ(reach_by_h_walks(art.colored, 0).members, (std::vector<VertexId>{0, 1, mid}));
    const auto k = kernel_to_target(art, {"b"});
    EXPECT_EQ(k, (std::vector<VertexId>{1, pend}));
    EXPECT_TRUE(is_kernel_by_h_walks(art.colored, k).valid);
    EXPECT_EQ(kernel_to_source(art, k), (std::vector<std::string>{"b"}));
}

TEST(Subdivision, ThreeCycleHasNoKernel)
{
    const auto art = reduce_subdivision(c3, subdivision_pattern(), {0, 1, 2});
    EXPECT_EQ(find_kernel_bruteforce(art.colored).outcome, KernelOutcome::not_exists);
}

TEST(Subdivision, RolePreconditions)
{
    const Pattern h = subdivision_pattern();
    EXPECT_THROW(reduce_subdivision(c3, h, {1, 0, 2}), PreconditionViolated); // green -> red missing
    EXPECT_THROW(reduce_subdivision(c3, h, {0, 0, 2}), PreconditionViolated);
    const Pattern both(Digraph::from_labels({"r", "g", "b"}, {{"r", "g"}, {"g", "r"}}, LoopPolicy::allowed));
    EXPECT_THROW(reduce_subdivision(c3, both, {0, 1, 2}), PreconditionViolated);
    const Pattern rb(Digraph::from_labels({"r", "g", "b"}, {{"r", "g"}, {"r", "b"}}, LoopPolicy::allowed));
    EXPECT_THROW(reduce_subdivision(c3, rb, {0, 1, 2}), PreconditionViolated);
    EXPECT_THROW(reduce_subdivision(Digraph::from_labels({"a:b"}, {}), h, {0, 1, 2}), PreconditionViolated);
}

TEST(Subdivision, BiconditionalAndReachFormula)
{
    Rng rng(71);
    const Pattern h = subdivision_pattern();
    for (int t = 0; t < 100; ++t) {
        const auto d = random_digraph_m(rng, 1 + t % 6, std::min<std::size_t>(t % 7, (1 + t % 6) * (t % 6)));
        const auto art = reduce_subdivision(d, h, {0, 1, 2});
        const auto src = find_kernel_bruteforce(d);
        const auto dst = find_kernel_bruteforce(art.colored);
        ASSERT_EQ(src.outcome, dst.outcome);
        for (VertexId x = 0; x < d.order(); ++x) {
            std::vector<VertexId> expected{x};
            for (VertexId y : d.out(x)) {
                expected.push_back(y);
                expected.push_back(art.at({OriginKind::mid, d.label(x), d.label(y), 0, {}}));
            }
            std::sort(expected.begin(), expected.end());
            EXPECT_EQ(reach_by_h_walks(art.colored, x).members, expected);
        }
        if (src.certificate) {
            const auto k = kernel_to_target(art, labels_of(d, src.certificate->members));
            EXPECT_TRUE(is_kernel_by_h_walks(art.colored, k).valid);
        }
        if (dst.certificate) {
            const auto back = kernel_to_source(art, dst.certificate->members);
            EXPECT_TRUE(is_kernel(d, resolve_labels(d, back)).valid);
        }
    }
}

TEST(KColoring, VertexCountAndNaming)
{
    const auto f = rainbow_triangle();
    const auto art = reduce_kcoloring(triangle(), 3, mono3, gadget_roles_of(mono3), f);
    EXPECT_EQ(art.colored.order(), 3u * (3 + f.order()) + 4u * 3 * 3);
    const VertexId x = art.at({OriginKind::cycle, "b", {}, 2, {}});
    EXPECT_EQ(art.colored.digraph().label(x), "b::cycle::2");
    const VertexId q = art.at({OriginKind::quad, "a", "c", 3, "z"});
    EXPECT_EQ(art.colored.digraph().label(q), "a->c::qz::3");
    EXPECT_EQ(art.colored.digraph().label(art.at({OriginKind::copy, "c", {}, 0, "q"})), "c::F::1");
}

TEST(KColoring, StructuralAudit)
{
    const Roles roles = gadget_roles_of(mono3);
    const auto art = reduce_kcoloring(triangle(), 4, mono3, roles, rainbow_triangle());
    const auto& g = art.colored.digraph();
    std::size_t green_cycle_arcs = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Origin& from = art.provenance[g.arcs()[i].tail];
        const Origin& to = art.provenance[g.arcs()[i].head];
        const ColorId c = art.colored.color(i);
        const bool into_cycle = to.kind == OriginKind::cycle, out_of_cycle = from.kind == OriginKind::cycle;
        if (into_cycle && out_of_cycle) {
            EXPECT_EQ(from.vertex, to.vertex);
            EXPECT_EQ(c, roles.green);
            ++green_cycle_arcs;
        } else if (into_cycle && from.kind == OriginKind::copy) {
            EXPECT_EQ(from.vertex, to.vertex);
            EXPECT_EQ(c, roles.green);
        } else if (into_cycle || out_of_cycle) {
            EXPECT_EQ(c, roles.blue);
        }
        if (from.kind == OriginKind::quad && to.kind == OriginKind::quad) {
            EXPECT_EQ(c, to.part == "w" ? roles.blue : roles.green);
        }
        if (into_cycle) {
            EXPECT_NE(c, roles.blue);
        }
    }
    EXPECT_EQ(green_cycle_arcs, 3u * 4);
    EXPECT_EQ(art.provenance.size(), g.order());
}

TEST(KColoring, ColoringsGiveKernels)
{
    const auto f = rainbow_triangle();
    const Roles roles = gadget_roles_of(mono3);
    const auto edge = Graph::from_labels({"a", "b"}, {{"a", "b"}});
    const auto e = reduce_kcoloring(edge, 3, mono3, roles, f);
    EXPECT_TRUE(is_kernel_by_h_walks(e.colored, kernel_from_coloring(e, {1, 2})).valid);

    const auto p = reduce_kcoloring(path3(), 3, mono3, roles, f);
    const auto kp = kernel_from_coloring(p, {1, 2, 1});
    EXPECT_TRUE(is_kernel_by_h_walks(p.colored, kp).valid);
    EXPECT_EQ(extract_coloring(p, kp), (std::vector<std::size_t>{1, 2, 1}));

    const auto t = reduce_kcoloring(triangle(), 3, mono3, roles, f);
    const auto kt = kernel_from_coloring(t, {3, 1, 2});
    EXPECT_TRUE(is_kernel_by_h_walks(t.colored, kt).valid);
    EXPECT_EQ(extract_coloring(t, kt), (std::vector<std::size_t>{3, 1, 2}));

    EXPECT_THROW(kernel_from_coloring(p, {1, 1, 2}), PreconditionViolated);
    EXPECT_THROW(kernel_from_coloring(p, {1, 4, 2}), PreconditionViolated);
}

TEST(KColoring, TwoColorablePathsKeepKernels)
{
    // long directed paths in the orientation must not chain constraints
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < 6; ++i) {
        labels.push_back("v" + std::to_string(i));
        if (i)
            edges.push_back({labels[i - 1], labels[i]});
    }
    const auto art = reduce_kcoloring(Graph::from_labels(labels, edges), 3, mono3, gadget_roles_of(mono3),
                                      rainbow_triangle());
    const auto v = find_kernel_backtracking(art.colored, {1000000});
    ASSERT_EQ(v.outcome, KernelOutcome::exists);
    EXPECT_TRUE(is_kernel_by_h_walks(art.colored, kernel_from_coloring(art, {1, 2, 1, 2, 1, 2})).valid);
}

TEST(KColoring, SolverKernelYieldsProperColoring)
{
    const auto t = reduce_kcoloring(triangle(), 3, mono3, gadget_roles_of(mono3), rainbow_triangle());
    const auto v = find_kernel_backtracking(t.colored, {1000000});
    ASSERT_EQ(v.outcome, KernelOutcome::exists);
    const auto c = extract_coloring(t, v.certificate->members);
    EXPECT_NE(c[0], c[1]);
    EXPECT_NE(c[1], c[2]);
    EXPECT_NE(c[0], c[2]);
}

TEST(KColoring, CorruptCertificates)
{
    const auto p = reduce_kcoloring(path3(), 3, mono3, gadget_roles_of(mono3), rainbow_triangle());
    auto k = kernel_from_coloring(p, {1, 2, 1});
    const VertexId drop = p.at({OriginKind::cycle, "a", {}, 1, {}});
    k.erase(std::find(k.begin(), k.end(), drop));
    EXPECT_THROW(extract_coloring(p, k, false), CertificateCorrupt);
    EXPECT_THROW(extract_coloring(p, k, true), PreconditionViolated);
}

TEST(KColoring, Preconditions)
{
    const auto f = rainbow_triangle();
    const Roles roles = gadget_roles_of(mono3);
    EXPECT_THROW(reduce_kcoloring(path3(), 2, mono3, roles, f), PreconditionViolated);
    EXPECT_THROW(reduce_kcoloring(path3(), 3, mono3, {0, 1, 1}, f), PreconditionViolated);
    const auto with_kernel = ColoredDigraph::from_labels({"p", "q"}, {{"p", "q", "c1"}}, mono3);
    EXPECT_THROW(reduce_kcoloring(path3(), 3, mono3, roles, with_kernel), PreconditionViolated);
    const Pattern other = looped_isolated_pattern({"c1", "c2", "c3", "c4"});
    EXPECT_THROW(reduce_kcoloring(path3(), 3, other, roles, f), PreconditionViolated);
    EXPECT_THROW(reduce_kcoloring(path3(), 4, mono3, roles, f, {true}), PreconditionViolated); // F not bipartite
    EXPECT_THROW(reduce_kcoloring(path3(), 3, mono3, roles, f, {true}), PreconditionViolated); // odd k
}

TEST(KColoring, BipartiteVariantKeepsCrossArcsOnly)
{
    // a kernel-free bipartite tournament from the search module
    SearchSpec spec{mono3, 5, {true, true, false}, {}, 1};
    const auto found = search_kernel_free(spec);
    ASSERT_TRUE(found.instance);
    const auto& f = *found.instance;
    const auto sides = *bipartition(f.digraph());
    const Roles roles = gadget_roles_of(mono3);
    const auto art = reduce_kcoloring(path3(), 4, mono3, roles, f, {true});
    const auto& g = art.colored.digraph();
    std::size_t cross = 0;
    for (const Arc& a : g.arcs()) {
        const Origin& from = art.provenance[a.tail];
        const Origin& to = art.provenance[a.head];
        if (from.kind == OriginKind::copy && to.kind == OriginKind::cycle) {
            const VertexId j = f.digraph().index_of(from.part);
            EXPECT_NE(sides[j], static_cast<int>(to.index % 2));
            ++cross;
        }
    }
    EXPECT_EQ(cross, 3u * f.order() * 2);
    EXPECT_TRUE(is_kernel_by_h_walks(art.colored, kernel_from_coloring(art, {1, 2, 1})).valid);
}

TEST(ArcColoring, Examples)
{
    const auto c4 = Digraph::from_labels({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}});
    const auto col4 = proper_arc_coloring(c4, 2);
    EXPECT_TRUE(is_proper_arc_coloring(c4, col4));
    const auto col3 = proper_arc_coloring(c3, 3);
    EXPECT_TRUE(is_proper_arc_coloring(c3, col3));
    EXPECT_THROW(proper_arc_coloring(c3, 2), PreconditionViolated);
    EXPECT_THROW(proper_arc_coloring(c3, 1), PreconditionViolated);
    EXPECT_THROW(proper_arc_coloring(Digraph::from_labels({"a", "b"}, {{"a", "b"}, {"b", "a"}}), 4),
                 PreconditionViolated);
}

TEST(ArcColoring, SubcubicRandom)
{
    Rng rng(91);
    for (int t = 0; t < 300; ++t) {
        const auto d = random_low_degree_digraph(rng, 4 + t % 12, 60);
        const auto col = proper_arc_coloring(d, 4);
        EXPECT_TRUE(is_proper_arc_coloring(d, col));
        for (auto c : col)
            EXPECT_LT(c, 4u);
    }
}

TEST(ArcColoring, PetersenNeedsFourColors)
{
    const auto p = acyclic_orientation(load_graph(std::string(HWALKS_SAMPLES) + "/petersen.graph"));
    EXPECT_THROW(proper_arc_coloring(p, 3), PreconditionViolated); // class two: backtracking refutes 3
    EXPECT_TRUE(is_proper_arc_coloring(p, proper_arc_coloring(p, 4)));
}

TEST(EdgeColoring, Examples)
{
    const auto arc = reduce_edge_coloring(single_arc);
    const auto k = find_kernel_bruteforce(arc.colored);
    ASSERT_EQ(k.outcome, KernelOutcome::exists);
    EXPECT_EQ(k.certificate->members, (std::vector<VertexId>{1}));
    EXPECT_EQ(find_kernel_bruteforce(reduce_edge_coloring(c3).colored).outcome, KernelOutcome::not_exists);
    const auto star = Digraph::from_labels({"a", "b", "c", "d", "e"}, {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"e", "a"}});
    EXPECT_THROW(reduce_edge_coloring(star), PreconditionViolated);
}

TEST(Provenance, RoundTrip)
{
    const auto art = reduce_kcoloring(path3(), 3, mono3, gadget_roles_of(mono3), rainbow_triangle());
    const auto back = parse_provenance(serialize_provenance(art), art.colored);
    EXPECT_EQ(back.kind, art.kind);
    EXPECT_EQ(back.k, art.k);
    EXPECT_EQ(back.roles, art.roles);
    EXPECT_EQ(back.provenance, art.provenance);
    EXPECT_EQ(back.source_vertices, art.source_vertices);
    EXPECT_EQ(back.source_arcs, art.source_arcs);
    for (const auto& o : art.provenance)
        EXPECT_EQ(Origin::parse(o.tag()), o);
    EXPECT_THROW(Origin::parse("quad:a:b"), Error);
    EXPECT_THROW(parse_provenance("k 3\n", art.colored), ParseError);
}
