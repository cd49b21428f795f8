#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bpmncheck/benchgen.hpp"
#include "bpmncheck/bpmn_xml.hpp"
#include "bpmncheck/ctl.hpp"
#include "bpmncheck/explore.hpp"
#include "bpmncheck/generate.hpp"
#include "bpmncheck/groove.hpp"
#include "bpmncheck/properties.hpp"

namespace {

using namespace bpmncheck;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTruncated = 3;

struct CommonOptions {
    std::size_t max_states = ExploreLimits{}.max_states;
    std::int64_t max_millis = ExploreLimits{}.max_millis;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--max-states", opts.max_states, "State limit for exploration");
    cmd->add_option("--max-millis", opts.max_millis, "Time limit for exploration (ms)");
    cmd->add_option("--threads", opts.threads, "Worker threads for exploration")
        ->envname("BPMN_VERIFY_THREADS");
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        std::cerr << (d.severity == Severity::Error ? "error" : "warning");
        if (!d.node_id.empty()) std::cerr << " [" << d.node_id << "]";
        std::cerr << ": " << d.message << "\n";
    }
}

// Loads, validates and transforms a model; exits with kExitUsage on errors.
struct Pipeline {
    BpmnModel model;
    RuleSet ruleset;
    Lts lts;
};

int prepare(const std::string& path, const CommonOptions& opts, Pipeline& out) {
    try {
        out.model = load_bpmn_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    auto diags = validate_model(out.model);
    print_diagnostics(diags);
    if (has_errors(diags)) return kExitUsage;

    out.ruleset = generate_rules(out.model);
    print_diagnostics(out.ruleset.diagnostics);
    out.lts = explore(out.ruleset, {opts.max_states, opts.max_millis}, opts.threads);
    return kExitOk;
}

std::string annotate_rule(const RuleSet& ruleset, const std::string& rule_name) {
    const Rule* rule = ruleset.find_rule(rule_name);
    if (!rule || rule->source_node.empty()) return rule_name;
    const FlowNode* node = ruleset.model->find_node(rule->source_node);
    if (!node) return rule_name;
    return rule_name + " (" + (node->name.empty() ? node->id : node->name) + ")";
}

void print_verdict(const Verdict& v, const Pipeline& p) {
    std::cout << v.name << ": "
              << (v.inconclusive ? "INCONCLUSIVE (exploration truncated)"
                                 : (v.holds ? "holds" : "VIOLATED"))
              << "\n";
    if (!v.holds && !v.witness.empty()) {
        std::cout << "  witness:";
        for (const auto& step : v.witness) std::cout << " " << annotate_rule(p.ruleset, step);
        std::cout << "\n";
    }
    if (!v.witness_note.empty() && !v.holds) std::cout << "  note: " << v.witness_note << "\n";
    if (!v.dead_activities.empty()) {
        std::cout << "  dead activities:";
        for (const auto& id : v.dead_activities) std::cout << " " << id;
        std::cout << "\n";
    }
}

json verdict_json(const Verdict& v) {
    json j;
    j["name"] = v.name;
    j["holds"] = v.holds;
    if (v.inconclusive) j["inconclusive"] = true;
    if (!v.witness.empty()) j["witness"] = v.witness;
    if (!v.witness_note.empty()) j["witnessNote"] = v.witness_note;
    if (!v.dead_activities.empty()) j["deadActivities"] = v.dead_activities;
    return j;
}

int run_check(const std::string& path, const CommonOptions& opts, bool safeness, bool soundness,
              const std::string& props_path, const std::vector<std::string>& ctl_texts,
              bool as_json) {
    Pipeline p;
    if (int rc = prepare(path, opts, p); rc != kExitOk) return rc;

    std::vector<Verdict> verdicts;
    if (safeness) verdicts.push_back(check_safeness(p.lts, p.model));
    if (soundness) {
        verdicts.push_back(check_option_to_complete(p.lts));
        verdicts.push_back(check_proper_completion(p.lts, p.ruleset));
        verdicts.push_back(check_no_dead_activities(p.lts, p.ruleset));
    }

    if (!ctl_texts.empty()) {
        std::vector<Proposition> props = builtin_propositions(p.model);
        for (auto& prop : extension_propositions(p.model)) props.push_back(std::move(prop));
        if (!props_path.empty()) {
            std::ifstream in(props_path);
            if (!in) {
                std::cerr << "error: cannot open propositions file '" << props_path << "'\n";
                return kExitUsage;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            std::vector<Proposition> user;
            try {
                user = load_propositions_json(buf.str());
            } catch (const std::exception& e) {
                std::cerr << "error: " << props_path << ": " << e.what() << "\n";
                return kExitUsage;
            }
            for (const auto& prop : user) {
                if (prop.name == kUnsafeName || prop.name == kAllTerminatedName) {
                    std::cerr << "error: proposition name '" << prop.name << "' is reserved\n";
                    return kExitUsage;
                }
            }
            for (auto& prop : user) props.push_back(std::move(prop));
        }
        try {
            check_propositions_resolve(props, p.model);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }

        Labeling labeling = compute_labeling(p.lts, props);
        for (const auto& text : ctl_texts) {
            CtlPtr formula;
            try {
                formula = parse_ctl(text);
            } catch (const CtlSyntaxError& e) {
                std::cerr << "error: CTL formula '" << text << "': " << e.what() << "\n";
                return kExitUsage;
            }
            Verdict v;
            v.name = text;
            v.inconclusive = p.lts.stats.truncated;
            try {
                CtlResult result = check_ctl(p.lts, labeling, *formula);
                v.holds = result.holds;
                v.witness = std::move(result.witness);
                v.witness_note = std::move(result.witness_note);
            } catch (const UnknownAtomError& e) {
                std::cerr << "error: CTL formula '" << text << "': " << e.what() << "\n";
                return kExitUsage;
            }
            verdicts.push_back(std::move(v));
        }
    }

    if (as_json) {
        json j;
        j["model"] = {{"nodes", p.model.flow_node_count()},
                      {"flows", p.model.sequence_flow_count()}};
        j["rules"] = {{"count", p.ruleset.rules.size()}};
        j["lts"] = {{"states", p.lts.stats.state_count},
                    {"transitions", p.lts.stats.transition_count},
                    {"truncated", p.lts.stats.truncated},
                    {"timeMs", p.lts.stats.exploration_time_ms}};
        j["verdicts"] = json::array();
        for (const auto& v : verdicts) j["verdicts"].push_back(verdict_json(v));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "model: " << p.model.flow_node_count() << " flow nodes, "
                  << p.model.sequence_flow_count() << " sequence flows\n";
        std::cout << "rules: " << p.ruleset.rules.size() << "\n";
        std::cout << "state space: " << p.lts.stats.state_count << " states, "
                  << p.lts.stats.transition_count << " transitions"
                  << (p.lts.stats.truncated ? " (truncated)" : "") << " in "
                  << p.lts.stats.exploration_time_ms << " ms\n";
        for (const auto& v : verdicts) print_verdict(v, p);
    }

    if (p.lts.stats.truncated) return kExitTruncated;
    for (const auto& v : verdicts)
        if (!v.holds) return kExitViolated;
    return kExitOk;
}

int run_explore(const std::string& path, const CommonOptions& opts, bool as_json,
                const std::string& dump_states_dir, const std::string& dump_rules_file) {
    Pipeline p;
    if (int rc = prepare(path, opts, p); rc != kExitOk) return rc;

    if (!dump_rules_file.empty()) {
        std::ofstream out(dump_rules_file);
        if (!out) {
            std::cerr << "error: cannot write '" << dump_rules_file << "'\n";
            return kExitUsage;
        }
        out << rules_to_json(p.ruleset.rules);
    }
    if (!dump_states_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dump_states_dir, ec);
        if (ec) {
            std::cerr << "error: cannot create '" << dump_states_dir << "'\n";
            return kExitUsage;
        }
        char name[32];
        for (std::size_t i = 0; i < p.lts.states.size(); ++i) {
            std::snprintf(name, sizeof name, "state_%06zu.json", i);
            std::ofstream out(std::filesystem::path(dump_states_dir) / name);
            out << state_to_json(p.lts.states[i]) << "\n";
        }
    }

    if (as_json) {
        json j = {{"states", p.lts.stats.state_count},
                  {"transitions", p.lts.stats.transition_count},
                  {"truncated", p.lts.stats.truncated},
                  {"timeMs", p.lts.stats.exploration_time_ms}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << p.lts.stats.state_count << " states, " << p.lts.stats.transition_count
                  << " transitions" << (p.lts.stats.truncated ? " (truncated)" : "") << " in "
                  << p.lts.stats.exploration_time_ms << " ms\n";
    }
    return p.lts.stats.truncated ? kExitTruncated : kExitOk;
}

int run_generate(const std::string& path, const std::string& out_dir) {
    BpmnModel model;
    try {
        model = load_bpmn_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    auto diags = validate_model(model);
    print_diagnostics(diags);
    if (has_errors(diags)) return kExitUsage;

    RuleSet ruleset = generate_rules(model);
    print_diagnostics(ruleset.diagnostics);
    try {
        GrammarDir dir = export_gps(ruleset, out_dir);
        std::cout << "wrote " << dir.path << " (" << dir.files.size() << " files)\n";
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int write_model(const BpmnModel& model, const std::string& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kExitUsage;
    }
    out << serialize_bpmn(model);
    return kExitOk;
}

int run_bench_parallel(int n, const std::string& out_path, bool emit_table) {
    if (!out_path.empty()) {
        if (int rc = write_model(gen_parallel(n), out_path); rc != kExitOk) return rc;
    }
    if (emit_table) {
        std::cout << "branches,flowNodes,gateways,rules,states,transitions\n";
        for (int i = 1; i <= n; ++i) {
            BpmnModel model = gen_parallel(i);
            RuleSet ruleset = generate_rules(model);
            Lts lts = explore(ruleset);
            int gateways = 0;
            for (const auto& node : model.processes[0].flow_nodes)
                if (is_gateway(node.kind)) ++gateways;
            std::cout << i << "," << model.flow_node_count() << "," << gateways << ","
                      << ruleset.rules.size() << "," << lts.stats.state_count << ","
                      << lts.stats.transition_count << "\n";
        }
    }
    return kExitOk;
}

int run_bench_blocks(int k, const std::string& out_path, bool emit_table) {
    if (!out_path.empty()) {
        if (int rc = write_model(gen_blocks(k), out_path); rc != kExitOk) return rc;
    }
    if (emit_table) {
        std::cout << "blocks,gateways,flowNodes,sequenceFlows,totalElements\n";
        for (int i = 1; i <= k; ++i) {
            BpmnModel model = gen_blocks(i);
            int gateways = 0;
            for (const auto& node : model.processes[0].flow_nodes)
                if (is_gateway(node.kind)) ++gateways;
            std::size_t nodes = model.flow_node_count();
            std::size_t flows = model.sequence_flow_count();
            std::cout << i << "," << gateways << "," << nodes << "," << flows << ","
                      << (nodes + flows) << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Token-game verification for BPMN 2.0 collaborations"};
    app.require_subcommand(1);

    // check
    auto* check = app.add_subcommand("check", "Verify properties of a model");
    std::string check_path;
    check->add_option("model", check_path, "BPMN file")->required();
    bool safeness = false, soundness = false, check_json = false;
    std::string props_path;
    std::vector<std::string> ctl_texts;
    CommonOptions check_opts;
    check->add_flag("--safeness", safeness, "Check safeness");
    check->add_flag("--soundness", soundness,
                    "Check option to complete, proper completion and no dead activities");
    check->add_option("--props", props_path, "Propositions file (JSON)");
    check->add_option("--ctl", ctl_texts, "CTL formula (repeatable)");
    check->add_flag("--json", check_json, "Machine-readable report");
    add_common(check, check_opts);

    // explore
    auto* explore_cmd = app.add_subcommand("explore", "Explore the state space and print stats");
    std::string explore_path, dump_states_dir, dump_rules_file;
    bool explore_json = false;
    CommonOptions explore_opts;
    explore_cmd->add_option("model", explore_path, "BPMN file")->required();
    explore_cmd->add_flag("--json", explore_json, "Machine-readable stats");
    explore_cmd->add_option("--dump-states", dump_states_dir, "Write one JSON file per state");
    explore_cmd->add_option("--dump-rules", dump_rules_file, "Write the generated rules as JSON");
    add_common(explore_cmd, explore_opts);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "Export the rule system for Groove");
    std::string generate_path, generate_out;
    generate_cmd->add_option("model", generate_path, "BPMN file")->required();
    generate_cmd->add_option("--out", generate_out, "Output grammar directory (.gps)")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Generate benchmark models");
    bench->require_subcommand(1);
    auto* bench_parallel = bench->add_subcommand("parallel", "Parallel-branch family");
    int parallel_n = 1;
    std::string parallel_out;
    bool parallel_table = false;
    bench_parallel->add_option("--n", parallel_n, "Branch count")
        ->required()
        ->check(CLI::PositiveNumber);
    bench_parallel->add_option("--out", parallel_out, "Write the n-branch model");
    bench_parallel->add_flag("--emit-table", parallel_table, "CSV summary for 1..n");

    auto* bench_blocks = bench->add_subcommand("blocks", "Block-composed family");
    int blocks_k = 1;
    std::string blocks_out;
    bool blocks_table = false;
    bench_blocks->add_option("--k", blocks_k, "Block count")
        ->required()
        ->check(CLI::PositiveNumber);
    bench_blocks->add_option("--out", blocks_out, "Write the k-block model");
    bench_blocks->add_flag("--emit-table", blocks_table, "CSV summary for 1..k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed())
            return run_check(check_path, check_opts, safeness, soundness, props_path, ctl_texts,
                             check_json);
        if (explore_cmd->parsed())
            return run_explore(explore_path, explore_opts, explore_json, dump_states_dir,
                               dump_rules_file);
        if (generate_cmd->parsed()) return run_generate(generate_path, generate_out);
        if (bench->parsed()) {
            if (bench_parallel->parsed()) {
                if (parallel_out.empty() && !parallel_table) {
                    std::cerr << "error: bench parallel needs --out and/or --emit-table\n";
                    return kExitUsage;
                }
                return run_bench_parallel(parallel_n, parallel_out, parallel_table);
            }
            if (bench_blocks->parsed()) {
                if (blocks_out.empty() && !blocks_table) {
                    std::cerr << "error: bench blocks needs --out and/or --emit-table\n";
                    return kExitUsage;
                }
                return run_bench_blocks(blocks_k, blocks_out, blocks_table);
            }
        }
    } catch (const std::bad_alloc&) {
        std::cerr << "fatal: out of memory during exploration; rerun with --max-states\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
