// causal-forge: evolve rewriting systems, explore multiway graphs, analyze
// causal structure, curvature and dimension, and export the results.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "causalforge/causal.hpp"
#include "causalforge/dimension.hpp"
#include "causalforge/errors.hpp"
#include "causalforge/geometry.hpp"
#include "causalforge/invariance.hpp"
#include "causalforge/multiway.hpp"
#include "causalforge/ruleparse.hpp"
#include "causalforge/transport.hpp"
#include "causalforge/util.hpp"

namespace cf = causalforge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAnalysis = 3;
constexpr int kExitBudget = 4;

struct Output {
    fs::path dir = ".";
    json manifest;

    void init(const std::string& command, const json& config) {
        manifest["tool"] = "causal-forge";
        manifest["version"] = "0.1.0";
        manifest["command"] = command;
        manifest["config"] = config;
        manifest["artifacts"] = json::array();
    }

    void write(const std::string& name, const std::string& content) {
        fs::create_directories(dir);
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw cf::InputError("cannot write " + (dir / name).string());
        out << content;
        manifest["artifacts"].push_back(name);
    }

    void finish() {
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cf::InputError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --rule accepts inline text or @path
std::string load_rule_text(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@') return slurp(arg.substr(1));
    return arg;
}

struct InitState {
    bool is_string = false;
    std::string string_state;
    cf::Hypergraph hypergraph_state;
};

InitState load_init(const std::string& arg, bool want_string) {
    std::string text = arg;
    if (!text.empty() && text.front() == '@') text = slurp(text.substr(1));
    InitState st;
    // JSON object, brace literal, or a bare string state
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        if (text.find('"') != std::string::npos) {
            st.hypergraph_state = cf::Hypergraph::from_json(text);
        } else {
            st.hypergraph_state = cf::parse_hypergraph_literal(text);
        }
        st.is_string = false;
        if (want_string) throw cf::InputError("string rules need a string initial state");
    } else {
        st.is_string = true;
        while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
        st.string_state = text;
        if (!want_string) throw cf::InputError("hypergraph rules need a hypergraph initial state");
    }
    return st;
}

json rules_json(const cf::RuleSet& rules) {
    json out = json::array();
    for (const auto& r : rules.hypergraph_rules) out.push_back(cf::print_rule(r));
    for (const auto& r : rules.string_rules) out.push_back(cf::print_rule(r));
    return out;
}

json trace_json(const cf::EvolutionTrace& trace) {
    json j;
    j["initial"] = json::parse(trace.initial.to_json());
    j["final"] = json::parse(trace.final_state.to_json());
    j["halted_early"] = trace.halted_early;
    j["steps_requested"] = trace.steps_requested;
    j["events"] = json::array();
    for (const auto& ev : trace.events) {
        j["events"].push_back({{"id", ev.id},
                               {"rule", ev.rule_index},
                               {"consumed", ev.consumed},
                               {"created", ev.created},
                               {"step", ev.step}});
    }
    return j;
}

json trace_json(const cf::StringEvolution& evo) {
    json j;
    j["initial"] = evo.initial;
    j["final"] = evo.final_state;
    j["halted_early"] = evo.halted_early;
    j["steps_requested"] = evo.steps_requested;
    j["events"] = json::array();
    for (const auto& ev : evo.events) {
        j["events"].push_back({{"id", ev.id},
                               {"rule", ev.rule_index},
                               {"pos", ev.pos},
                               {"consumed", ev.consumed},
                               {"created", ev.created},
                               {"step", ev.step}});
    }
    return j;
}

std::string causal_dot(const cf::CausalGraph& cg) {
    auto [foliation, coords] = cf::foliate_standard(cg);
    (void)foliation;
    return cg.to_dot(&coords);
}

// ---------------------------------------------------------------------------

int cmd_evolve(const std::string& rule_arg, const std::string& init_arg,
               const std::string& scheme_name, int steps, std::uint64_t seed, Output& out) {
    auto rules = cf::parse_rules(load_rule_text(rule_arg));
    auto scheme = cf::parse_scheme(scheme_name);
    auto init = load_init(init_arg, rules.is_string_system());
    out.init("evolve", {{"rule", rules_json(rules)},
                        {"init", init.is_string ? json(init.string_state)
                                                : json::parse(init.hypergraph_state.to_json())},
                        {"scheme", scheme_name},
                        {"steps", steps},
                        {"seed", seed}});
    if (rules.is_string_system()) {
        auto evo = cf::evolve_string(init.string_state, rules.string_rules, scheme, steps, seed);
        out.write("trace.json", trace_json(evo).dump(2) + "\n");
        out.write("final.txt", evo.final_state + "\n");
        auto cg = cf::CausalGraph::build(cf::event_records(evo));
        out.write("causal.dot", causal_dot(cg));
    } else {
        auto trace = cf::evolve(init.hypergraph_state, rules.hypergraph_rules, scheme, steps, seed);
        out.write("trace.json", trace_json(trace).dump(2) + "\n");
        out.write("final.json", trace.final_state.to_json() + "\n");
        auto cg = cf::CausalGraph::build(cf::event_records(trace));
        out.write("causal.dot", causal_dot(cg));
    }
    return kExitOk;
}

int cmd_multiway(const std::string& rule_arg, const std::string& init_arg, int depth,
                 const std::string& confluence, int join_budget, Output& out) {
    auto rules = cf::parse_rules(load_rule_text(rule_arg));
    auto init = load_init(init_arg, rules.is_string_system());
    out.init("multiway", {{"rule", rules_json(rules)},
                          {"init", init.is_string ? json(init.string_state)
                                                  : json::parse(init.hypergraph_state.to_json())},
                          {"depth", depth},
                          {"confluence", confluence},
                          {"join_budget", join_budget}});

    json report;
    std::string dot;
    auto run = [&](const auto& system, const auto& state) {
        auto mw = cf::explore(system, state, depth);
        dot = mw.to_dot();
        report["states"] = mw.states.size();
        report["transitions"] = mw.transitions.size();
        report["truncated"] = mw.truncated;
        if (!confluence.empty()) {
            auto variant = cf::parse_confluence_variant(confluence);
            auto cr = cf::analyze_confluence(system, state, depth, variant, join_budget);
            report["confluence"] = {{"variant", cf::confluence_variant_name(cr.variant)},
                                    {"holds", cf::tristate_name(cr.holds)},
                                    {"pairs_checked", cr.pairs_checked},
                                    {"pairs_undecided", cr.pairs_undecided}};
            if (cr.witness) {
                report["confluence"]["witness"] = {cr.witness->first, cr.witness->second};
            }
        }
    };
    if (rules.is_string_system()) {
        run(cf::StringSystem{rules.string_rules}, init.string_state);
    } else {
        run(cf::HypergraphSystem{rules.hypergraph_rules}, init.hypergraph_state);
    }
    out.write("multiway.dot", dot);
    out.write("report.json", report.dump(2) + "\n");
    return kExitOk;
}

int cmd_causal_invariance(const std::string& rule_arg, const std::string& init_arg, int depth,
                          Output& out) {
    auto rules = cf::parse_rules(load_rule_text(rule_arg));
    auto init = load_init(init_arg, rules.is_string_system());
    out.init("causal-invariance",
             {{"rule", rules_json(rules)},
              {"init", init.is_string ? json(init.string_state)
                                      : json::parse(init.hypergraph_state.to_json())},
              {"depth", depth}});
    cf::InvarianceReport report;
    if (rules.is_string_system()) {
        report = cf::causal_invariant(cf::StringSystem{rules.string_rules}, init.string_state,
                                      depth);
    } else {
        report = cf::causal_invariant(cf::HypergraphSystem{rules.hypergraph_rules},
                                      init.hypergraph_state, depth);
    }
    json j;
    j["verdict"] = cf::verdict_name(report.verdict);
    j["depth"] = report.depth;
    j["distinct_causal_graphs"] = report.distinct_keys.size();
    j["configurations"] = report.configurations;
    j["budget_hit"] = report.budget_hit;
    if (report.witness) {
        auto order_json = [](const std::vector<cf::UpdateOrderStep>& order) {
            json arr = json::array();
            for (const auto& step : order) {
                arr.push_back({{"rule", step.rule_index}, {"site", step.site}});
            }
            return arr;
        };
        j["witness"] = {order_json(report.witness->first), order_json(report.witness->second)};
    }
    out.write("invariance.json", j.dump(2) + "\n");
    std::cout << "causal invariance: " << cf::verdict_name(report.verdict) << "\n";
    return report.verdict == cf::Verdict::Unknown && report.budget_hit ? kExitBudget : kExitOk;
}

int cmd_boost(const std::string& rule_arg, const std::string& init_arg, int steps,
              const std::string& velocity, Output& out) {
    auto rules = cf::parse_rules(load_rule_text(rule_arg));
    if (!rules.is_string_system()) {
        throw cf::InputError("boost demo drives a string system evolution");
    }
    auto init = load_init(init_arg, true);
    out.init("boost", {{"rule", rules_json(rules)},
                       {"init", init.string_state},
                       {"steps", steps},
                       {"v", velocity}});

    auto evo = cf::evolve_string(init.string_state, rules.string_rules,
                                 cf::UpdateScheme::Parallel, steps, 0);
    auto cg = cf::CausalGraph::build(cf::event_records(evo));
    auto [foliation, coords] = cf::foliate_standard(cg);

    cf::Rapidity rapidity{cf::parse_rational(velocity), {1}};
    auto boosted = cf::boost(coords, rapidity);
    auto result = cf::refoliate(cg, boosted);

    json j;
    j["accepted"] = result.accepted;
    j["exact"] = boosted.exact;
    j["events"] = cg.size();
    if (result.accepted) {
        out.write("foliation.json", result.foliation.to_json() + "\n");
        j["slices"] = result.foliation.slices.size();
        // replay the induced order and compare causal structure
        std::vector<std::size_t> order;
        std::map<cf::EventId, std::size_t> index;
        for (std::size_t i = 0; i < evo.events.size(); ++i) index[evo.events[i].id] = i;
        for (cf::EventId e : result.induced_order) order.push_back(index.at(e));
        auto replayed = cf::replay_string_order(init.string_state, rules.string_rules, evo, order);
        auto cg2 = cf::CausalGraph::build(cf::event_records(replayed));
        j["replay_isomorphic"] = cg2.canonical_key_dag() == cg.canonical_key_dag();
    } else if (result.violation) {
        j["violation"] = {result.violation->first, result.violation->second};
    }
    out.write("causal.dot", causal_dot(cg));
    out.write("boost.json", j.dump(2) + "\n");
    std::cout << "boost v=" << velocity << ": " << (result.accepted ? "accepted" : "rejected")
              << "\n";
    return kExitOk;
}

int cmd_curvature(const std::string& in_arg, const std::string& mode, Output& out) {
    auto text = in_arg;
    if (!text.empty() && text.front() == '@') text = slurp(text.substr(1));
    auto first = text.find_first_not_of(" \t\r\n");
    cf::Hypergraph h = (first != std::string::npos && text.find('"') != std::string::npos)
                           ? cf::Hypergraph::from_json(text)
                           : cf::parse_hypergraph_literal(text);
    out.init("curvature", {{"in", "hypergraph"}, {"mode", mode},
                           {"edges", h.edge_count()}, {"vertices", h.vertex_count()}});
    std::ostringstream csv;
    if (mode == "pairs") {
        csv << "u,v,kappa\n";
        std::set<std::pair<cf::VertexId, cf::VertexId>> done;
        for (cf::VertexId v : h.vertices()) {
            for (cf::VertexId u : h.neighbors(v)) {
                auto key = std::minmax(u, v);
                if (!done.emplace(key.first, key.second).second) continue;
                csv << key.first << "," << key.second << ","
                    << cf::to_double(cf::ollivier_ricci_pair(h, key.first, key.second)) << "\n";
            }
        }
    } else if (mode == "hyperedges") {
        csv << "edge,kappa\n";
        for (const auto& e : h.edges()) {
            if (e.vertices.size() < 2) continue;
            csv << e.id << "," << cf::to_double(cf::ollivier_ricci_hyperedge(h, e.id)) << "\n";
        }
    } else {
        throw cf::InputError("curvature mode must be 'pairs' or 'hyperedges'");
    }
    out.write("curvature.csv", csv.str());
    return kExitOk;
}

int cmd_dimension(const std::string& in_arg, long center, int r_max, int w_lo, int w_hi,
                  Output& out) {
    auto text = in_arg;
    if (!text.empty() && text.front() == '@') text = slurp(text.substr(1));
    cf::Hypergraph h = (text.find('"') != std::string::npos)
                           ? cf::Hypergraph::from_json(text)
                           : cf::parse_hypergraph_literal(text);
    cf::VertexId c = center >= 0 ? static_cast<cf::VertexId>(center) : h.vertices().front();
    out.init("dimension",
             {{"center", c}, {"r_max", r_max}, {"window", {w_lo, w_hi}}});
    auto series = cf::ball_series(h, c, r_max);
    out.write("growth.csv", series.to_csv());
    std::optional<cf::Window> window;
    if (w_lo >= 0 && w_hi >= w_lo) window = cf::Window{w_lo, w_hi};
    json j;
    auto logdim = cf::log_dimension(series, window);
    j["log_slope"] = logdim.aggregate_slope;
    j["shell_dimension"] = cf::shell_dimension(series, window);
    j["window"] = {logdim.window.first, logdim.window.second};
    try {
        auto fit = cf::fit_curvature_correction(series, window);
        j["fit"] = json::parse(fit.to_json());
    } catch (const cf::FitError& e) {
        j["fit_error"] = e.what();
    }
    out.write("dimension.json", j.dump(2) + "\n");
    std::cout << "n_hat(shell) = " << j["shell_dimension"] << "\n";
    return kExitOk;
}

int cmd_planarity(const std::string& in_arg, bool tangles, Output& out) {
    auto text = in_arg;
    if (!text.empty() && text.front() == '@') text = slurp(text.substr(1));
    cf::Hypergraph h = (text.find('"') != std::string::npos)
                           ? cf::Hypergraph::from_json(text)
                           : cf::parse_hypergraph_literal(text);
    out.init("planarity", {{"tangles", tangles}});
    auto report = tangles ? cf::count_tangles(h) : cf::is_planar(h);
    json j;
    j["planar"] = report.planar;
    j["tangle_count"] = report.witnesses.size();
    j["witnesses"] = json::array();
    for (const auto& w : report.witnesses) {
        json edges = json::array();
        for (const auto& [a, b] : w.edges) edges.push_back({a, b});
        j["witnesses"].push_back(
            {{"type", w.type == cf::TangleType::K5 ? "K5" : "K33"}, {"edges", edges}});
    }
    out.write("planarity.json", j.dump(2) + "\n");
    if (!report.planar) out.write("witness.dot", cf::witness_dot(h, report.witnesses));
    std::cout << (report.planar ? "planar" : "nonplanar") << ", tangles: "
              << report.witnesses.size() << "\n";
    return kExitOk;
}

int cmd_bundle(const std::string& in_arg, const std::string& seeds_arg, int steps, Output& out) {
    auto text = in_arg;
    if (!text.empty() && text.front() == '@') text = slurp(text.substr(1));
    cf::Hypergraph h = (text.find('"') != std::string::npos)
                           ? cf::Hypergraph::from_json(text)
                           : cf::parse_hypergraph_literal(text);
    // seeds: "start:dir,start:dir,..."
    std::vector<cf::RaySeed> seeds;
    std::istringstream in(seeds_arg);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw cf::InputError("seed format is start:direction");
        seeds.push_back({static_cast<cf::VertexId>(std::stoul(item.substr(0, colon))),
                         static_cast<cf::VertexId>(std::stoul(item.substr(colon + 1)))});
    }
    out.init("bundle", {{"seeds", seeds_arg}, {"steps", steps}});
    auto profile = cf::bundle_divergence(h, seeds, steps);
    out.write("bundle.csv", profile.to_csv());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal-forge: hypergraph/string rewriting, causal structure, discrete geometry"};
    app.require_subcommand(1);

    std::string rule, init, scheme = "sequential", confluence, velocity = "0", in_state,
                seeds, out_dir = ".", mode = "pairs";
    int steps = 10, depth = 4, join_budget = -1, r_max = 12, w_lo = -1, w_hi = -1;
    long center = -1;
    std::uint64_t seed = 0;
    bool tangles = false;

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    };

    auto* evolve = app.add_subcommand("evolve", "run one evolution and export the trace");
    evolve->add_option("--rule", rule, "rule text or @file")->required();
    evolve->add_option("--init", init, "initial state (string, literal, JSON, or @file)")->required();
    evolve->add_option("--scheme", scheme, "sequential | parallel | random")->capture_default_str();
    evolve->add_option("--steps", steps)->capture_default_str();
    evolve->add_option("--seed", seed)->capture_default_str();
    add_out(evolve);

    auto* multiway = app.add_subcommand("multiway", "breadth-first multiway exploration");
    multiway->add_option("--rule", rule)->required();
    multiway->add_option("--init", init)->required();
    multiway->add_option("--depth", depth)->capture_default_str();
    multiway->add_option("--confluence", confluence, "local|semi|strong|diamond|global");
    multiway->add_option("--join-budget", join_budget, "extra join search depth (default 2*depth)");
    add_out(multiway);

    auto* invariance = app.add_subcommand("causal-invariance",
                                          "compare causal graphs over all update orders");
    invariance->add_option("--rule", rule)->required();
    invariance->add_option("--init", init)->required();
    invariance->add_option("--depth", depth, "event depth (causal chain bound)")->capture_default_str();
    add_out(invariance);

    auto* boost_cmd = app.add_subcommand("boost", "discrete Lorentz boost of a causal foliation");
    boost_cmd->add_option("--rule", rule)->required();
    boost_cmd->add_option("--init", init)->required();
    boost_cmd->add_option("--steps", steps)->capture_default_str();
    boost_cmd->add_option("--v", velocity, "normalized velocity, e.g. 5/13")->required();
    add_out(boost_cmd);

    auto* curvature = app.add_subcommand("curvature", "Ollivier-Ricci curvature export");
    curvature->add_option("--in", in_state, "hypergraph literal, JSON, or @file")->required();
    curvature->add_option("--mode", mode, "pairs | hyperedges")->capture_default_str();
    add_out(curvature);

    auto* dimension = app.add_subcommand("dimension", "ball growth and dimension estimates");
    dimension->add_option("--in", in_state)->required();
    dimension->add_option("--center", center, "center vertex (default: first)");
    dimension->add_option("--r-max", r_max)->capture_default_str();
    dimension->add_option("--window-lo", w_lo);
    dimension->add_option("--window-hi", w_hi);
    add_out(dimension);

    auto* planarity = app.add_subcommand("planarity", "Kuratowski tangle detection");
    planarity->add_option("--in", in_state)->required();
    planarity->add_flag("--tangles", tangles, "greedy edge-disjoint tangle extraction");
    add_out(planarity);

    auto* bundle = app.add_subcommand("bundle", "geodesic bundle divergence profile");
    bundle->add_option("--in", in_state)->required();
    bundle->add_option("--seeds", seeds, "start:dir,start:dir,...")->required();
    bundle->add_option("--steps", steps)->capture_default_str();
    add_out(bundle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    Output out;
    out.dir = out_dir;
    try {
        int rc = kExitOk;
        if (evolve->parsed()) rc = cmd_evolve(rule, init, scheme, steps, seed, out);
        else if (multiway->parsed()) rc = cmd_multiway(rule, init, depth, confluence, join_budget, out);
        else if (invariance->parsed()) rc = cmd_causal_invariance(rule, init, depth, out);
        else if (boost_cmd->parsed()) rc = cmd_boost(rule, init, steps, velocity, out);
        else if (curvature->parsed()) rc = cmd_curvature(in_state, mode, out);
        else if (dimension->parsed()) rc = cmd_dimension(in_state, center, r_max, w_lo, w_hi, out);
        else if (planarity->parsed()) rc = cmd_planarity(in_state, tangles, out);
        else if (bundle->parsed()) rc = cmd_bundle(in_state, seeds, steps, out);
        out.finish();
        return rc;
    } catch (const cf::BudgetError& e) {
        std::cerr << json({{"error", "budget"}, {"message", e.what()}}).dump() << "\n";
        return kExitBudget;
    } catch (const cf::InputError& e) {
        std::cerr << json({{"error", "config"}, {"message", e.what()}}).dump() << "\n";
        return kExitConfig;
    } catch (const cf::Error& e) {
        std::cerr << json({{"error", "analysis"}, {"message", e.what()}}).dump() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << json({{"error", "analysis"}, {"message", e.what()}}).dump() << "\n";
        return kExitAnalysis;
    }
}
