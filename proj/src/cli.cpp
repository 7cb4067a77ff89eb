// Command-line driver: scenario validation, planning, degradation, path
// comparison, offensive/defensive evaluation and DOT export.

#include "pnet/cli.hpp"

#include "pnet/dot_export.hpp"
#include "pnet/error.hpp"
#include "pnet/harness.hpp"
#include "pnet/json_io.hpp"
#include "pnet/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace pnet {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError(path + ": cannot open file for writing");
    out << content;
}

std::optional<std::uint64_t> env_seed() {
    const char* env = std::getenv("PNET_SEED");
    if (!env || !*env) return std::nullopt;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw ConfigError(std::string("PNET_SEED is not an integer: '") + env + "'");
    }
}

struct DegradeFlags {
    bool enabled = false;
    std::optional<double> hide_links;
    std::optional<double> perturb;
    std::optional<double> perturb_magnitude;
    std::optional<double> spurious;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd, bool with_enable) {
        if (with_enable) {
            cmd->add_flag("--degrade", enabled, "degrade the view handed to the tool under test");
        }
        cmd->add_option("--hide-links", hide_links, "probability of hiding each link");
        cmd->add_option("--perturb", perturb, "probability of perturbing each fact");
        cmd->add_option("--perturb-magnitude", perturb_magnitude,
                        "relative scale of numeric perturbation");
        cmd->add_option("--spurious", spurious, "expected spurious facts per container");
        cmd->add_option("--seed", seed, "degradation seed (PNET_SEED when unset)");
    }

    bool any_flag() const {
        return hide_links || perturb || perturb_magnitude || spurious || seed;
    }

    // Scenario settings first, explicit flags on top, PNET_SEED as the
    // final fallback for an unset seed.
    DegradationSpec resolve(const std::optional<DegradationSpec>& from_scenario) const {
        DegradationSpec spec = from_scenario.value_or(DegradationSpec{});
        if (hide_links) spec.hide_link_prob = *hide_links;
        if (perturb) spec.perturb_fact_prob = *perturb;
        if (perturb_magnitude) spec.perturb_magnitude = *perturb_magnitude;
        if (spurious) spec.spurious_fact_rate = *spurious;
        if (seed) {
            spec.seed = *seed;
        } else if (!from_scenario || from_scenario->seed == 0) {
            if (auto s = env_seed()) spec.seed = *s;
        }
        return spec;
    }
};

SimilarityConfig resolve_similarity(const Scenario& scenario, std::optional<double> alpha,
                                    std::optional<double> tau) {
    SimilarityConfig cfg = scenario.similarity.value_or(SimilarityConfig{});
    if (alpha) cfg.alpha = *alpha;
    if (tau) cfg.tau = *tau;
    return cfg;
}

SutAdapter parse_sut(const std::string& text) {
    if (text == "greedy") return sut_greedy();
    if (text.rfind("random:", 0) == 0) {
        try {
            return sut_random(std::stoull(text.substr(7)));
        } catch (const std::exception&) {
            throw ConfigError("--sut random needs an integer seed, got '" + text + "'");
        }
    }
    if (text.rfind("weighted:", 0) == 0) {
        std::istringstream in(text.substr(9));
        GoodnessWeights w{};
        char c1 = 0;
        char c2 = 0;
        if (!(in >> w.w_steps >> c1 >> w.w_time >> c2 >> w.w_detection) || c1 != ',' || c2 != ',') {
            throw ConfigError("--sut weighted needs w_steps,w_time,w_detection");
        }
        if (w.w_steps < 0 || w.w_time < 0 || w.w_detection < 0 ||
            (w.w_steps == 0 && w.w_time == 0 && w.w_detection == 0)) {
            throw ConfigError("--sut weighted needs non-negative weights, at least one positive");
        }
        return sut_weighted(w);
    }
    throw ConfigError("unknown SUT '" + text + "' (greedy | random:SEED | weighted:w1,w2,w3)");
}

DefenderAdapter parse_defender(const std::string& text) {
    if (text == "noop") return defender_noop();
    if (text.rfind("scripted:", 0) == 0) {
        std::string file = text.substr(9);
        Json j = load_json_file(file);
        return defender_scripted(defense_actions_from_json(j, file));
    }
    if (text.rfind("threshold:", 0) == 0) {
        try {
            return defender_threshold(std::stoi(text.substr(10)));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("--defender threshold needs an integer k, got '" + text + "'");
        }
    }
    throw ConfigError("unknown defender '" + text + "' (noop | scripted:file | threshold:K)");
}

void emit(const std::string& content, const std::string& out_path, std::ostream& out,
          const std::string& summary) {
    if (out_path.empty()) {
        out << content;
    } else {
        write_file(out_path, content);
        out << summary;
    }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pnet: ground-truth attack simulation for scoring security tooling"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;

    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", scenario_path)->required();

    auto* plan_cmd = app.add_subcommand("plan", "plan the reference attack path");
    plan_cmd->add_option("scenario", scenario_path)->required();
    SearchLimits limits;
    plan_cmd->add_option("--max-depth", limits.max_depth, "maximum path length");
    plan_cmd->add_option("--max-expansions", limits.max_expansions, "search expansion cap");
    plan_cmd->add_option("--out", out_path, "write the path JSON here");

    auto* enumerate_cmd = app.add_subcommand("enumerate", "list every goal-reaching path");
    enumerate_cmd->add_option("scenario", scenario_path)->required();
    int enum_depth = 0;
    enumerate_cmd->add_option("--max-depth", enum_depth, "maximum path length")->required();
    enumerate_cmd->add_option("--out", out_path, "write the path array here");

    auto* degrade_cmd = app.add_subcommand("degrade", "emit a degraded copy of a scenario");
    degrade_cmd->add_option("scenario", scenario_path)->required();
    DegradeFlags degrade_flags;
    degrade_flags.attach(degrade_cmd, false);
    degrade_cmd->add_option("--out", out_path, "write the degraded scenario here")->required();
    std::string log_path;
    degrade_cmd->add_option("--log", log_path, "write the degradation log here");

    auto* compare_cmd = app.add_subcommand("compare", "similarity report for two paths");
    std::string path_a;
    std::string path_b;
    compare_cmd->add_option("pathA", path_a)->required();
    compare_cmd->add_option("pathB", path_b)->required();
    std::optional<double> alpha;
    std::optional<double> tau;
    compare_cmd->add_option("--alpha", alpha, "sequence-vs-technique weight");
    compare_cmd->add_option("--tau", tau, "structural prefilter threshold");
    std::string compare_scenario;
    compare_cmd->add_option("--scenario", compare_scenario,
                            "scenario supplying technique labels (rule ids otherwise)");
    compare_cmd->add_option("--out", out_path, "write the report here");

    auto* offense_cmd = app.add_subcommand("eval-offense", "score a tool against the reference attacker");
    offense_cmd->add_option("scenario", scenario_path)->required();
    std::string sut_text;
    offense_cmd->add_option("--sut", sut_text, "greedy | random:SEED | weighted:w1,w2,w3")
        ->required();
    DegradeFlags offense_degrade;
    offense_degrade.attach(offense_cmd, true);
    offense_cmd->add_option("--alpha", alpha, "sequence-vs-technique weight");
    offense_cmd->add_option("--tau", tau, "structural prefilter threshold");
    offense_cmd->add_option("--out", out_path, "write the report here");

    auto* defense_cmd = app.add_subcommand("eval-defense", "score a defender in the attack loop");
    defense_cmd->add_option("scenario", scenario_path)->required();
    std::string defender_text;
    defense_cmd->add_option("--defender", defender_text, "noop | scripted:file | threshold:K")
        ->required();
    std::string updates_text = "none";
    defense_cmd->add_option("--updates", updates_text,
                            "attacker model refresh: none | post-proactive | every-iteration");
    int max_iters = 25;
    defense_cmd->add_option("--max-iters", max_iters, "iteration cap");
    DegradeFlags defense_degrade;
    defense_degrade.attach(defense_cmd, true);
    defense_cmd->add_option("--out", out_path, "write the report here");

    auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz export with optional path overlay");
    dot_cmd->add_option("scenario", scenario_path)->required();
    std::string paths_file;
    dot_cmd->add_option("--paths", paths_file, "JSON path or path array to overlay");
    dot_cmd->add_option("--out", out_path, "write the DOT text here")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (validate->parsed()) {
        load_scenario(scenario_path);
        out << "OK\n";
        return 0;
    }

    if (plan_cmd->parsed()) {
        Scenario s = load_scenario(scenario_path);
        PlanResult result = plan(s.network, s.ruleset, s.attacker.start, s.attacker.goal,
                                 s.attacker.weights, limits);
        std::ostringstream summary;
        if (result.path) {
            summary << "path with " << result.path->steps.size() << " step(s), cost " << result.cost;
        } else {
            summary << "no goal-reaching path within the limits";
        }
        summary << ", expansions " << result.expansions_used
                << (result.exhausted ? ", exhausted\n" : "\n");
        emit(dump_json(plan_result_to_json(result)), out_path, out, summary.str());
        return 0;
    }

    if (enumerate_cmd->parsed()) {
        Scenario s = load_scenario(scenario_path);
        std::vector<AttackPath> paths =
            enumerate_paths(s.network, s.ruleset, s.attacker.start, s.attacker.goal, enum_depth);
        Json arr = Json::array();
        for (const auto& p : paths) arr.push_back(path_to_json(p));
        std::ostringstream summary;
        summary << paths.size() << " goal-reaching path(s)\n";
        emit(dump_json(arr), out_path, out, summary.str());
        return 0;
    }

    if (degrade_cmd->parsed()) {
        Scenario s = load_scenario(scenario_path);
        DegradationSpec spec = degrade_flags.resolve(s.degradation);
        Degraded degraded = degrade_network(s.network, spec);
        Scenario copy = s;
        copy.network = degraded.network;
        copy.degradation = spec;
        write_file(out_path, save_scenario(copy));
        if (!log_path.empty()) {
            write_file(log_path, dump_json(degradation_log_to_json(degraded.log)));
        }
        out << "hidden " << degraded.log.hidden_links.size() << " link(s), perturbed "
            << degraded.log.perturbed.size() << " fact(s), injected "
            << degraded.log.spurious.size() << " fact(s)\n";
        return 0;
    }

    if (compare_cmd->parsed()) {
        AttackPath p1 = path_from_json(load_json_file(path_a), path_a);
        AttackPath p2 = path_from_json(load_json_file(path_b), path_b);
        SimilarityConfig cfg;
        std::optional<Scenario> s;
        if (!compare_scenario.empty()) {
            s = load_scenario(compare_scenario);
            cfg = resolve_similarity(*s, alpha, tau);
        } else {
            if (alpha) cfg.alpha = *alpha;
            if (tau) cfg.tau = *tau;
        }
        SimilarityReport report = compare_paths(p1, p2, cfg, s ? &s->ruleset : nullptr);
        emit(dump_json(similarity_report_to_json(report)), out_path, out, "");
        if (!out_path.empty()) out << "overall " << report.overall << "\n";
        return 0;
    }

    if (offense_cmd->parsed()) {
        Scenario s = load_scenario(scenario_path);
        SutAdapter sut = parse_sut(sut_text);
        std::optional<DegradationSpec> spec;
        if (offense_degrade.enabled || offense_degrade.any_flag()) {
            spec = offense_degrade.resolve(s.degradation);
        }
        OffensiveEvalReport report =
            eval_offense(s, sut, spec, resolve_similarity(s, alpha, tau));
        emit(dump_json(offensive_report_to_json(report)), out_path, out, "");
        if (!out_path.empty()) out << "overall " << report.similarity.overall << "\n";
        return report.sut_violations.empty() ? 0 : 1;
    }

    if (defense_cmd->parsed()) {
        Scenario s = load_scenario(scenario_path);
        DefenderAdapter defender = parse_defender(defender_text);
        auto updates = model_updates_from_name(updates_text);
        if (!updates) {
            throw ConfigError("unknown --updates '" + updates_text +
                              "' (none | post-proactive | every-iteration)");
        }
        std::optional<DegradationSpec> spec;
        if (defense_degrade.enabled || defense_degrade.any_flag()) {
            spec = defense_degrade.resolve(s.degradation);
        }
        Constraints constraints = s.constraints.value_or(Constraints{});
        DefensiveEvalReport report = eval_defense(s, s.attacker.weights, defender, constraints,
                                                  spec, *updates, max_iters);
        emit(dump_json(defensive_report_to_json(report)), out_path, out, "");
        if (!out_path.empty()) {
            out << "score " << report.score << (report.goal_reached ? ", goal reached\n" : "\n");
        }
        return 0;
    }

    if (dot_cmd->parsed()) {
        Scenario s = load_scenario(scenario_path);
        std::string dot;
        if (!paths_file.empty()) {
            std::vector<AttackPath> paths = paths_from_json(load_json_file(paths_file), paths_file);
            PathUsageOverlay overlay = build_overlay(paths);
            dot = export_dot(s.network, &overlay);
        } else {
            dot = export_dot(s.network, nullptr);
        }
        write_file(out_path, dot);
        out << "wrote " << out_path << "\n";
        return 0;
    }

    err << app.help();
    return 2;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pnet
