#include <hwalks/hwalks.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hwalks;

namespace {

constexpr int kPositive = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct Globals {
    bool json = false;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::uint64_t budget = 0;
};

std::string fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

std::string file_hash(const fs::path& p) { return fnv1a64(detail::read_file(p)); }

json envelope(const std::string& command, const std::string& input_hash)
{
    json j;
    j["schema"] = 1;
    j["command"] = command;
    if (!input_hash.empty())
        j["input_hash"] = input_hash;
    return j;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty())
            out.push_back(item);
    return out;
}

json labels_of(const Digraph& d, const std::vector<VertexId>& ids)
{
    json a = json::array();
    for (VertexId v : ids)
        a.push_back(d.label(v));
    return a;
}

std::string joined(const Digraph& d, const std::vector<VertexId>& ids)
{
    std::string s;
    for (VertexId v : ids)
        s += (s.empty() ? "" : " ") + d.label(v);
    return s;
}

std::string check_reason(const Digraph& d, const KernelCheck& c, bool walks)
{
    if (c.valid)
        return "valid";
    if (c.dependent_pair)
        return "not independent: " + d.label(c.dependent_pair->first) + (walks ? " reaches " : " -> ")
               + d.label(c.dependent_pair->second);
    return "not absorbent: " + d.label(*c.unabsorbed) + " reaches no member";
}

// Input is a colored digraph or a plain digraph.
struct KernelInput {
    std::optional<ColoredDigraph> colored;
    std::optional<Digraph> plain;
    std::string hash;

    const Digraph& digraph() const { return colored ? colored->digraph() : *plain; }
};

KernelInput load_kernel_input(const std::string& colored, const std::string& digraph)
{
    KernelInput in;
    if (!colored.empty() == !digraph.empty())
        throw CLI::ValidationError("exactly one of --colored and --digraph is required");
    if (!colored.empty()) {
        in.colored = load_colored(colored);
        in.hash = file_hash(colored);
    } else {
        in.plain = load_digraph(digraph);
        in.hash = file_hash(digraph);
    }
    return in;
}

json roles_json(const Pattern& h, const Roles& r)
{
    return json{{"red", h.label(r.red)}, {"green", h.label(r.green)}, {"blue", h.label(r.blue)}};
}

ColorId color_named(const Pattern& h, const std::string& name)
{
    auto c = h.graph().find(name);
    if (!c)
        throw UnknownColor(name);
    return *c;
}

// Writes <out>, <out>.pat and <out>.prov.
void write_artifact(const ReductionArtifact& art, const fs::path& out)
{
    const fs::path pat = fs::path(out.string() + ".pat");
    const fs::path prov = fs::path(out.string() + ".prov");
    std::ofstream(pat) << serialize(art.colored.pattern());
    std::ofstream(out) << serialize(art.colored, pat.filename().string());
    std::ofstream(prov) << serialize_provenance(art);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kernels by H-walks: reachability, kernel solvers, pattern classification, reductions and search"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "Emit JSON (schema 1)");
    app.add_option("--seed", g.seed, "Seed for randomized generation");
    app.add_option("--threads", g.threads, "Worker cap")->check(CLI::PositiveNumber);
    app.add_option("--budget", g.budget, "Node budget for the backtracking solver (0 = unlimited)");

    int code = kPositive;
    std::function<void()> action;

    // reach
    auto* reach = app.add_subcommand("reach", "Vertices reached by H-walks");
    reach->fallthrough();
    std::string reach_file, reach_from;
    reach->add_option("--colored", reach_file, "Colored digraph file")->required()->check(CLI::ExistingFile);
    reach->add_option("--from", reach_from, "Source vertex (all vertices when omitted)");
    reach->callback([&] {
        action = [&] {
            const auto d = load_colored(reach_file);
            json j = envelope("reach", file_hash(reach_file));
            json sets = json::object();
            auto rows = reach_sets(d, g.threads);
            std::vector<VertexId> sources;
            if (!reach_from.empty())
                sources.push_back(d.digraph().index_of(reach_from));
            else
                for (VertexId v = 0; v < d.order(); ++v)
                    sources.push_back(v);
            for (VertexId s : sources) {
                sets[d.digraph().label(s)] = labels_of(d.digraph(), rows[s]);
                if (!g.json) {
                    if (sources.size() > 1)
                        std::cout << d.digraph().label(s) << ":";
                    for (VertexId v : rows[s])
                        std::cout << (sources.size() > 1 ? " " : "") << d.digraph().label(v)
                                  << (sources.size() > 1 ? "" : "\n");
                    if (sources.size() > 1)
                        std::cout << '\n';
                }
            }
            j["reach"] = sets;
            if (g.json)
                emit(j);
        };
    });

    // kernel verify / find
    auto* kernel = app.add_subcommand("kernel", "Kernel verification and search");
    kernel->require_subcommand(1);
    kernel->fallthrough();
    auto* verify = kernel->add_subcommand("verify", "Check a candidate set");
    verify->fallthrough();
    std::string kv_colored, kv_digraph, kv_set;
    verify->add_option("--colored", kv_colored, "Colored digraph (kernel by H-walks)")->check(CLI::ExistingFile);
    verify->add_option("--digraph", kv_digraph, "Plain digraph (classic kernel)")->check(CLI::ExistingFile);
    verify->add_option("--set", kv_set, "Comma-separated vertex labels")->required();
    verify->callback([&] {
        action = [&] {
            const auto in = load_kernel_input(kv_colored, kv_digraph);
            const auto ids = resolve_labels(in.digraph(), split_list(kv_set));
            const KernelCheck c = in.colored ? is_kernel_by_h_walks(*in.colored, ids) : is_kernel(*in.plain, ids);
            const std::string reason = check_reason(in.digraph(), c, in.colored.has_value());
            if (g.json) {
                json j = envelope("kernel verify", in.hash);
                j["kind"] = in.colored ? "h-walks" : "classic";
                j["set"] = labels_of(in.digraph(), ids);
                j["valid"] = c.valid;
                if (!c.valid)
                    j["reason"] = reason;
                emit(j);
            } else {
                std::cout << reason << '\n';
            }
            code = c.valid ? kPositive : kNegative;
        };
    });

    auto* find = kernel->add_subcommand("find", "Decide whether a kernel exists");
    find->fallthrough();
    std::string kf_colored, kf_digraph, kf_method;
    find->add_option("--colored", kf_colored, "Colored digraph (kernel by H-walks)")->check(CLI::ExistingFile);
    find->add_option("--digraph", kf_digraph, "Plain digraph (classic kernel)")->check(CLI::ExistingFile);
    find->add_option("--method", kf_method, "brute or backtrack (default: brute up to 20 vertices)")
        ->check(CLI::IsMember({"brute", "backtrack"}));
    find->callback([&] {
        action = [&] {
            const auto in = load_kernel_input(kf_colored, kf_digraph);
            std::string method = kf_method;
            if (method.empty())
                method = in.digraph().order() <= 20 ? "brute" : "backtrack";
            KernelVerdict v;
            const BacktrackOptions options{g.budget};
            if (method == "brute")
                v = in.colored ? find_kernel_bruteforce(*in.colored) : find_kernel_bruteforce(*in.plain);
            else
                v = in.colored ? find_kernel_backtracking(*in.colored, options)
                               : find_classic_kernel_backtracking(*in.plain, options);
            if (g.json) {
                json j = envelope("kernel find", in.hash);
                j["kind"] = in.colored ? "h-walks" : "classic";
                j["method"] = method;
                j["outcome"] = to_string(v.outcome);
                if (v.certificate)
                    j["certificate"] = json{{"members", labels_of(in.digraph(), v.certificate->members)},
                                            {"input_hash", in.hash}};
                j["stats"] = json{{"nodes", v.stats.nodes}, {"branches", v.stats.branches}};
                emit(j);
            } else {
                std::cout << to_string(v.outcome) << '\n';
                if (v.certificate)
                    std::cout << "kernel: " << joined(in.digraph(), v.certificate->members) << '\n';
            }
            code = v.outcome == KernelOutcome::exists       ? kPositive
                   : v.outcome == KernelOutcome::not_exists ? kNegative
                                                            : kUsage;
            if (v.outcome == KernelOutcome::budget_exhausted)
                std::cerr << "node budget of " << g.budget << " exhausted\n";
        };
    });

    // pattern classify
    auto* pattern = app.add_subcommand("pattern", "Pattern classification");
    pattern->require_subcommand(1);
    pattern->fallthrough();
    auto* classify = pattern->add_subcommand("classify", "Panchromatic or not, with evidence");
    classify->fallthrough();
    std::string pc_file;
    classify->add_option("file", pc_file, "Pattern file")->required()->check(CLI::ExistingFile);
    classify->callback([&] {
        action = [&] {
            const Pattern h = load_pattern(pc_file);
            const auto c = classify_pattern(h);
            const Digraph& hg = h.graph();
            if (g.json) {
                json j = envelope("pattern classify", file_hash(pc_file));
                j["panchromatic"] = c.panchromatic;
                j["reduction"] = to_string(c.reduction);
                if (c.loopless_vertex)
                    j["loopless_vertex"] = hg.label(*c.loopless_vertex);
                if (c.partition)
                    j["partition"] = json{{"matrix", to_string(c.partition->matrix)},
                                          {"part1", labels_of(hg, c.partition->part1)},
                                          {"part2", labels_of(hg, c.partition->part2)}};
                if (c.witness)
                    j["witness"] = json{{"family_index", c.witness->family_index},
                                        {"vertices", labels_of(hg, c.witness->vertices)},
                                        {"key", key_to_hex(c.witness->key)}};
                if (c.roles)
                    j["roles"] = roles_json(h, *c.roles);
                emit(j);
            } else {
                std::cout << (c.panchromatic ? "panchromatic" : "not-panchromatic") << '\n';
                if (c.partition)
                    std::cout << "partition " << to_string(c.partition->matrix) << ": {"
                              << joined(hg, c.partition->part1) << "} {" << joined(hg, c.partition->part2) << "}\n";
                if (c.loopless_vertex)
                    std::cout << "loopless vertex: " << hg.label(*c.loopless_vertex) << '\n';
                if (c.witness)
                    std::cout << "induced F" << c.witness->family_index << " on " << joined(hg, c.witness->vertices)
                              << '\n';
                std::cout << "reduction: " << to_string(c.reduction) << '\n';
                if (c.roles)
                    std::cout << "roles: red=" << h.label(c.roles->red) << " green=" << h.label(c.roles->green)
                              << " blue=" << h.label(c.roles->blue) << '\n';
            }
            code = c.panchromatic ? kPositive : kNegative;
        };
    });

    // obstructions
    auto* obstructions = app.add_subcommand("obstructions", "Minimal obstructions up to isomorphism");
    obstructions->fallthrough();
    std::size_t ob_max = 3;
    obstructions->add_option("--max-n", ob_max, "Largest order")->check(CLI::Range(1, 5));
    obstructions->callback([&] {
        action = [&] {
            const auto records = minimal_obstruction_family(ob_max);
            const auto& family = panchromatic_family();
            json list = json::array();
            for (const auto& r : records) {
                int index = 0;
                for (const auto& f : family)
                    if (f.key == r.key)
                        index = f.index;
                json rec{{"n", r.graph.order()},
                         {"key", key_to_hex(r.key)},
                         {"m1_minimal", r.m1_minimal},
                         {"m2_minimal", r.m2_minimal},
                         {"panchromatic_minimal", r.panchromatic_minimal}};
                json arcs = json::array();
                for (const Arc& a : r.graph.arcs())
                    arcs.push_back({r.graph.label(a.tail), r.graph.label(a.head)});
                rec["arcs"] = arcs;
                if (index)
                    rec["family_index"] = index;
                if (r.graph.order() == 3 && index) {
                    const auto roles = subdivision_roles(r.graph);
                    rec["reduction"] = roles ? "subdivision" : "coloring-gadget";
                }
                list.push_back(rec);
                if (!g.json) {
                    std::cout << (index ? "F" + std::to_string(index) : std::string("-")) << "\tn=" << r.graph.order()
                              << "\t" << key_to_hex(r.key) << "\t";
                    std::vector<std::string> tags;
                    if (r.m1_minimal)
                        tags.push_back("M1");
                    if (r.m2_minimal)
                        tags.push_back("M2");
                    if (r.panchromatic_minimal)
                        tags.push_back("panchromatic");
                    for (std::size_t i = 0; i < tags.size(); ++i)
                        std::cout << (i ? "," : "") << tags[i];
                    if (rec.contains("reduction"))
                        std::cout << "\t" << rec["reduction"].get<std::string>();
                    std::cout << '\n';
                }
            }
            if (g.json) {
                json j = envelope("obstructions", "");
                j["max_n"] = ob_max;
                j["records"] = list;
                emit(j);
            }
        };
    });

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Build a kernel-by-H-walks instance from a source instance");
    reduce->require_subcommand(1);
    reduce->fallthrough();
    std::string rd_digraph, rd_graph, rd_pattern, rd_out, rd_f, rd_red, rd_green, rd_blue;
    std::size_t rd_k = 3;
    bool rd_bipartite = false;
    std::string rd_hash;

    auto finish_reduce = [&](const ReductionArtifact& art, const std::string& name) {
        write_artifact(art, rd_out);
        if (g.json) {
            json j = envelope("reduce " + name, rd_hash);
            j["out"] = rd_out;
            j["provenance"] = rd_out + ".prov";
            j["vertices"] = art.colored.order();
            j["arcs"] = art.colored.digraph().size();
            if (art.roles)
                j["roles"] = roles_json(art.colored.pattern(), *art.roles);
            if (art.k)
                j["k"] = art.k;
            emit(j);
        } else {
            std::cout << "wrote " << rd_out << " (" << art.colored.order() << " vertices, "
                      << art.colored.digraph().size() << " arcs) and " << rd_out << ".prov\n";
        }
    };

    auto pick_roles = [&](const Pattern& h) {
        std::optional<Roles> roles;
        if (!rd_red.empty() || !rd_green.empty() || !rd_blue.empty()) {
            if (rd_red.empty() || rd_green.empty() || rd_blue.empty())
                throw CLI::ValidationError("--red, --green and --blue go together");
            roles = Roles{color_named(h, rd_red), color_named(h, rd_green), color_named(h, rd_blue)};
        } else {
            roles = classify_pattern(h).roles;
        }
        return roles;
    };

    auto* all_red = reduce->add_subcommand("all-red", "Color every arc with a loopless color");
    all_red->add_option("--digraph", rd_digraph)->required()->check(CLI::ExistingFile);
    all_red->add_option("--pattern", rd_pattern)->required()->check(CLI::ExistingFile);
    all_red->add_option("--red", rd_red, "Loopless color (default: first loopless vertex)");
    all_red->add_option("--out", rd_out)->required();
    all_red->callback([&] {
        action = [&] {
            const Digraph d = load_digraph(rd_digraph);
            const Pattern h = load_pattern(rd_pattern);
            rd_hash = file_hash(rd_digraph);
            ColorId red = 0;
            if (!rd_red.empty()) {
                red = color_named(h, rd_red);
            } else {
                auto c = classify_pattern(h);
                if (!c.loopless_vertex)
                    throw PreconditionViolated("pattern has no loopless color");
                red = *c.loopless_vertex;
            }
            finish_reduce(reduce_all_red(d, h, red), "all-red");
        };
    });

    auto* subdivide = reduce->add_subcommand("subdivide", "Subdivide every arc with a pendant");
    subdivide->add_option("--digraph", rd_digraph)->required()->check(CLI::ExistingFile);
    subdivide->add_option("--pattern", rd_pattern)->required()->check(CLI::ExistingFile);
    subdivide->add_option("--red", rd_red);
    subdivide->add_option("--green", rd_green);
    subdivide->add_option("--blue", rd_blue);
    subdivide->add_option("--out", rd_out)->required();
    subdivide->callback([&] {
        action = [&] {
            const Digraph d = load_digraph(rd_digraph);
            const Pattern h = load_pattern(rd_pattern);
            rd_hash = file_hash(rd_digraph);
            auto roles = pick_roles(h);
            if (!roles)
                throw PreconditionViolated("pattern admits no role assignment; pass --red/--green/--blue");
            finish_reduce(reduce_subdivision(d, h, *roles), "subdivide");
        };
    });

    auto* kcol = reduce->add_subcommand("kcol", "Graph k-coloring gadget");
    kcol->add_option("--graph", rd_graph)->required()->check(CLI::ExistingFile);
    kcol->add_option("--k", rd_k)->check(CLI::Range(3, 64));
    kcol->add_option("--pattern", rd_pattern)->required()->check(CLI::ExistingFile);
    kcol->add_option("--f", rd_f, "Kernel-free colored digraph over the same pattern")
        ->required()
        ->check(CLI::ExistingFile);
    kcol->add_option("--red", rd_red);
    kcol->add_option("--green", rd_green);
    kcol->add_option("--blue", rd_blue);
    kcol->add_flag("--bipartite", rd_bipartite, "Even k, cross-bipartition F-to-cycle arcs only");
    kcol->add_option("--out", rd_out)->required();
    kcol->callback([&] {
        action = [&] {
            const Graph gr = load_graph(rd_graph);
            const Pattern h = load_pattern(rd_pattern);
            const ColoredDigraph f = load_colored(rd_f, &h);
            rd_hash = file_hash(rd_graph);
            auto roles = pick_roles(h);
            if (!roles)
                throw PreconditionViolated("pattern admits no role assignment; pass --red/--green/--blue");
            finish_reduce(reduce_kcoloring(gr, rd_k, h, *roles, f, {rd_bipartite}), "kcol");
        };
    });

    auto* edge = reduce->add_subcommand("edge-color", "Proper 4-coloring of the arcs");
    edge->add_option("--digraph", rd_digraph)->required()->check(CLI::ExistingFile);
    edge->add_option("--out", rd_out)->required();
    edge->callback([&] {
        action = [&] {
            const Digraph d = load_digraph(rd_digraph);
            rd_hash = file_hash(rd_digraph);
            finish_reduce(reduce_edge_coloring(d), "edge-color");
        };
    });
    for (auto* sub : {all_red, subdivide, kcol, edge})
        sub->fallthrough();

    // certify
    auto* certify = app.add_subcommand("certify", "Translate certificates across a reduction");
    certify->require_subcommand(1);
    certify->fallthrough();
    std::string ct_colored, ct_prov, ct_set, ct_coloring;
    auto load_art = [&] {
        const fs::path prov = ct_prov.empty() ? fs::path(ct_colored + ".prov") : fs::path(ct_prov);
        return parse_provenance(detail::read_file(prov), load_colored(ct_colored));
    };

    auto* to_target = certify->add_subcommand("to-target", "Source certificate to a kernel by H-walks");
    to_target->fallthrough();
    to_target->add_option("--colored", ct_colored, "Constructed instance")->required()->check(CLI::ExistingFile);
    to_target->add_option("--provenance", ct_prov, "Sidecar (default: <colored>.prov)");
    to_target->add_option("--set", ct_set, "Kernel of the source digraph (labels)");
    to_target->add_option("--coloring", ct_coloring, "k-coloring as v=i pairs, for kcol");
    to_target->callback([&] {
        action = [&] {
            const ReductionArtifact art = load_art();
            const Digraph& d = art.colored.digraph();
            std::vector<VertexId> target;
            bool source_ok = true;
            std::string problem;
            if (art.kind == ReductionKind::kcoloring) {
                std::map<std::string, std::size_t> given;
                for (const auto& item : split_list(ct_coloring)) {
                    const auto eq = item.find('=');
                    if (eq == std::string::npos)
                        throw CLI::ValidationError("--coloring expects v=i pairs");
                    given[item.substr(0, eq)] = std::stoul(item.substr(eq + 1));
                }
                std::vector<std::size_t> coloring;
                for (const auto& v : art.source_vertices) {
                    if (!given.count(v))
                        throw CLI::ValidationError("--coloring misses vertex " + v);
                    coloring.push_back(given[v]);
                }
                try {
                    target = kernel_from_coloring(art, coloring);
                } catch (const PreconditionViolated& e) {
                    source_ok = false;
                    problem = e.what();
                }
            } else {
                const Digraph src = source_digraph(art);
                const auto members = split_list(ct_set);
                const auto check = is_kernel(src, resolve_labels(src, members));
                if (!check.valid) {
                    source_ok = false;
                    problem = "source set is not a kernel: " + check_reason(src, check, false);
                } else {
                    target = kernel_to_target(art, members);
                }
            }
            const bool ok = source_ok && is_kernel_by_h_walks(art.colored, target).valid;
            if (g.json) {
                json j = envelope("certify to-target", file_hash(ct_colored));
                j["valid"] = ok;
                if (source_ok)
                    j["certificate"] = json{{"members", labels_of(d, target)}, {"input_hash", file_hash(ct_colored)}};
                else
                    j["reason"] = problem;
                emit(j);
            } else if (source_ok) {
                std::cout << joined(d, target) << '\n';
            } else {
                std::cout << problem << '\n';
            }
            code = ok ? kPositive : kNegative;
        };
    });

    auto* to_source = certify->add_subcommand("to-source", "Kernel by H-walks back to a source certificate");
    to_source->fallthrough();
    to_source->add_option("--colored", ct_colored, "Constructed instance")->required()->check(CLI::ExistingFile);
    to_source->add_option("--provenance", ct_prov, "Sidecar (default: <colored>.prov)");
    to_source->add_option("--set", ct_set, "Kernel by H-walks of the constructed instance (labels)")->required();
    to_source->callback([&] {
        action = [&] {
            const ReductionArtifact art = load_art();
            const Digraph& d = art.colored.digraph();
            const auto ids = resolve_labels(d, split_list(ct_set));
            const auto check = is_kernel_by_h_walks(art.colored, ids);
            json j = envelope("certify to-source", file_hash(ct_colored));
            if (!check.valid) {
                j["valid"] = false;
                j["reason"] = check_reason(d, check, true);
                if (g.json)
                    emit(j);
                else
                    std::cout << j["reason"].get<std::string>() << '\n';
                code = kNegative;
                return;
            }
            if (art.kind == ReductionKind::kcoloring) {
                const auto coloring = extract_coloring(art, ids, false);
                json c = json::object();
                std::string text;
                for (std::size_t i = 0; i < coloring.size(); ++i) {
                    c[art.source_vertices[i]] = coloring[i];
                    text += (i ? "," : "") + art.source_vertices[i] + "=" + std::to_string(coloring[i]);
                }
                j["valid"] = true;
                j["coloring"] = c;
                if (g.json)
                    emit(j);
                else
                    std::cout << text << '\n';
            } else {
                const auto members = kernel_to_source(art, ids);
                const Digraph src = source_digraph(art);
                const bool ok = is_kernel(src, resolve_labels(src, members)).valid;
                j["valid"] = ok;
                j["certificate"] = json{{"members", members}};
                if (g.json) {
                    emit(j);
                } else {
                    std::string s;
                    for (const auto& m : members)
                        s += (s.empty() ? "" : " ") + m;
                    std::cout << s << '\n';
                }
                code = ok ? kPositive : kNegative;
            }
        };
    });

    // search
    auto* search = app.add_subcommand("search", "Exhaustive search");
    search->require_subcommand(1);
    search->fallthrough();
    auto* kernel_free = search->add_subcommand("kernel-free", "Smallest colored digraph without a kernel by H-walks");
    kernel_free->fallthrough();
    std::string sk_pattern, sk_colors, sk_out, sk_report;
    std::size_t sk_max = 0;
    SearchConstraints sk_constraints;
    kernel_free->add_option("--pattern", sk_pattern)->required()->check(CLI::ExistingFile);
    kernel_free->add_option("--max-n", sk_max)->required()->check(CLI::Range(std::size_t{1}, kSearchLimit));
    kernel_free->add_flag("--bipartite", sk_constraints.bipartite);
    kernel_free->add_flag("--tournament", sk_constraints.tournament);
    kernel_free->add_flag("--digon-free", sk_constraints.digon_free);
    kernel_free->add_option("--colors", sk_colors, "Comma-separated allowed colors");
    kernel_free->add_option("--out", sk_out, "Write the instance found here (pattern to <out>.pat)");
    kernel_free->add_option("--report", sk_report, "Write the JSON-lines report here");
    kernel_free->callback([&] {
        action = [&] {
            const Pattern h = load_pattern(sk_pattern);
            SearchSpec spec{h, sk_max, sk_constraints, {}, g.threads};
            for (const auto& c : split_list(sk_colors))
                spec.colors.push_back(color_named(h, c));
            const SearchResult r = search_kernel_free(spec);
            const std::string hash = file_hash(sk_pattern);
            std::vector<json> lines;
            for (const auto& t : r.report.levels)
                lines.push_back(json{{"schema", 1},
                                     {"record", "level"},
                                     {"n", t.n},
                                     {"candidates", t.candidates},
                                     {"kernel_free", t.kernel_free}});
            json summary = envelope("search kernel-free", hash);
            summary["record"] = "summary";
            summary["max_n"] = r.report.max_n;
            summary["examined"] = r.report.examined;
            summary["outcome"] = r.report.found ? "found" : "not-found";
            if (r.instance) {
                summary["n"] = r.instance->order();
                summary["key"] = key_to_hex(r.report.key);
                summary["instance"] = serialize(*r.instance, sk_out.empty() ? "<pattern>" : sk_out + ".pat");
            }
            lines.push_back(summary);
            if (!sk_report.empty()) {
                std::ofstream rep(sk_report);
                for (const auto& l : lines)
                    rep << l.dump() << '\n';
            }
            if (r.instance && !sk_out.empty()) {
                std::ofstream(sk_out + ".pat") << serialize(h);
                std::ofstream(sk_out) << serialize(*r.instance, fs::path(sk_out + ".pat").filename().string());
            }
            if (g.json) {
                for (const auto& l : lines)
                    emit(l);
            } else {
                for (const auto& t : r.report.levels)
                    std::cout << "n=" << t.n << " candidates=" << t.candidates << " kernel-free=" << t.kernel_free
                              << '\n';
                if (r.instance)
                    std::cout << "found kernel-free instance on " << r.instance->order() << " vertices\n"
                              << serialize(*r.instance, sk_out.empty() ? "<pattern>" : sk_out + ".pat");
                else
                    std::cout << "not found up to n=" << sk_max << '\n';
            }
            code = r.report.found ? kPositive : kNegative;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kUsage;
    }
    try {
        if (action)
            action();
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return code;
}
