#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdsim/compile.hpp"
#include "sdsim/csv.hpp"
#include "sdsim/errors.hpp"
#include "sdsim/experiments.hpp"
#include "sdsim/format.hpp"
#include "sdsim/frs.hpp"
#include "sdsim/jsonio.hpp"
#include "sdsim/parser.hpp"
#include "sdsim/simulate.hpp"
#include "sdsim/svg.hpp"
#include "sdsim/unitcheck.hpp"

namespace {

using namespace sdsim;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
    for (const Diagnostic& d : diags) {
        std::cerr << (d.severity == Severity::Error ? "error: " : "warning: ") << d.message;
        if (d.span.first > 0) {
            std::cerr << " (lines " << d.span.first << "-" << d.span.last << ")";
        }
        std::cerr << "\n";
    }
}

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// --set tokens look like NAME=VALUE; NAME may carry the model file's double
// quotes, which are stripped so both spellings address the same variable.
bool parse_assignment(const std::string& token, std::string& name, double& value) {
    std::size_t eq = token.find('=');
    if (eq == std::string::npos) return false;
    name = trim(token.substr(0, eq));
    if (name.size() >= 2 && name.front() == '"' && name.back() == '"') {
        name = name.substr(1, name.size() - 2);
    }
    if (name.empty()) return false;
    std::string raw = trim(token.substr(eq + 1));
    if (raw.empty()) return false;
    char* end = nullptr;
    value = std::strtod(raw.c_str(), &end);
    return end == raw.c_str() + raw.size();
}

struct ParseCmd {
    std::string file;
    bool json = false;
};

struct CheckCmd {
    std::string file;
    bool json = false;
};

struct RunCmd {
    std::string file;
    std::string builtin;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<std::string> sets;
    double final_time = 0.0;
    bool final_time_given = false;
    double dt = 0.0;
    bool dt_given = false;
    std::string noise = "on";
    std::string out;
    std::string svg;
};

struct ExperimentCmd {
    std::string which;
    unsigned seeds = 20;
    std::string outdir;
};

struct SweepCmd {
    std::string param;
    std::vector<double> values;
    unsigned seeds = 20;
    std::string outdir = "out/sweep";
};

int do_parse(const ParseCmd& cmd) {
    ParseResult res = parse_model(read_file(cmd.file));
    if (cmd.json) {
        ordered_json out;
        out["ok"] = res.ok();
        out["diagnostics"] = diagnostics_json(res.diagnostics);
        if (res.spec) out["model"] = model_json(*res.spec);
        std::cout << out.dump(2) << "\n";
    } else {
        print_diagnostics(res.diagnostics);
        if (res.spec) {
            int stocks = 0, constants = 0, auxes = 0, controls = 0;
            for (const VariableDef& def : res.spec->variables) {
                switch (def.kind) {
                    case VarKind::Stock: ++stocks; break;
                    case VarKind::Constant: ++constants; break;
                    case VarKind::Auxiliary: ++auxes; break;
                    case VarKind::Control: ++controls; break;
                }
            }
            std::cout << "parsed " << res.spec->variables.size() << " definitions: " << stocks
                      << " stocks, " << constants << " constants, " << auxes
                      << " auxiliaries, " << controls << " controls\n";
        }
    }
    return res.has_errors() ? 1 : 0;
}

int do_check_units(const CheckCmd& cmd) {
    ParseResult res = parse_model(read_file(cmd.file));
    if (!res.spec) {
        print_diagnostics(res.diagnostics);
        return 1;
    }
    std::vector<UnitMismatch> mismatches = check_model(*res.spec);
    if (cmd.json) {
        ordered_json out;
        out["count"] = mismatches.size();
        out["mismatches"] = mismatches_json(mismatches);
        std::cout << out.dump(2) << "\n";
    } else {
        for (const UnitMismatch& m : mismatches) std::cout << render(m) << "\n";
        std::cout << mismatches.size() << " mismatches\n";
    }
    return mismatches.empty() ? 0 : 1;
}

int do_run(const RunCmd& cmd) {
    if (cmd.file.empty() == cmd.builtin.empty()) {
        return usage_error("run needs a model file or --builtin, not both");
    }
    if (!cmd.builtin.empty() && cmd.builtin != "frs") {
        return usage_error("unknown built-in model: " + cmd.builtin);
    }

    ModelSpec spec;
    if (!cmd.builtin.empty()) {
        spec = build_frs_model();
    } else {
        ParseResult res = parse_model(read_file(cmd.file));
        if (!res.spec || res.has_errors()) {
            print_diagnostics(res.diagnostics);
            return 1;
        }
        spec = *res.spec;
    }

    Overrides overrides;
    for (const std::string& token : cmd.sets) {
        std::string name;
        double value = 0.0;
        if (!parse_assignment(token, name, value)) {
            return usage_error("bad --set, expected NAME=VALUE: " + token);
        }
        overrides.emplace_back(name, value);
    }

    CompiledModel model = compile(spec);
    SimControl control = model.spec.control;
    if (cmd.final_time_given) control.final_time = cmd.final_time;
    if (cmd.dt_given) control.set_dt(cmd.dt);

    RngPolicy policy;
    policy.mode = cmd.noise == "off" ? NoiseMode::NoiseOff : NoiseMode::Stochastic;
    std::optional<std::uint64_t> explicit_seed;
    if (cmd.seed_given) explicit_seed = cmd.seed;
    policy.seed = resolve_seed(model, overrides, explicit_seed);

    RunResult result = simulate(model, policy, overrides, control);

    if (!cmd.out.empty()) {
        write_csv(result, cmd.out);
        std::cerr << "wrote " << cmd.out << " (" << result.times.size() << " rows)\n";
    } else {
        std::cout << csv_text(result);
    }
    if (!cmd.svg.empty()) {
        std::vector<Series> series;
        for (const VariableDef& def : model.spec.variables) {
            if (def.kind == VarKind::Stock && result.has(def.name)) {
                series.push_back({def.name, result.times, result.at(def.name)});
            }
        }
        if (result.has("Avg Quality")) {
            series.push_back({"Avg Quality", result.times, result.at("Avg Quality")});
        }
        if (series.empty() && !result.names.empty()) {
            series.push_back({result.names[0], result.times, result.at(result.names[0])});
        }
        std::string title = !cmd.builtin.empty()
                                ? cmd.builtin
                                : std::filesystem::path(cmd.file).stem().string();
        write_chart(series, title + " trajectories", cmd.svg);
        std::cerr << "wrote " << cmd.svg << "\n";
    }
    return 0;
}

int do_experiment(const ExperimentCmd& cmd) {
    std::string outdir = cmd.outdir.empty() ? "out/" + cmd.which : cmd.outdir;
    std::vector<std::uint64_t> seeds = default_seeds(cmd.seeds);
    ExperimentReport report;
    if (cmd.which == "base") {
        report = run_base(seeds, outdir);
    } else if (cmd.which == "activation") {
        report = run_activation(seeds, outdir);
    } else if (cmd.which == "distributions") {
        report = run_distributions(seeds, outdir);
    } else {
        report = run_interventions(seeds, outdir);
    }
    std::cout << report_markdown(report);
    std::cerr << "wrote " << outdir << "/report.json\n";
    return 0;
}

int do_sweep(const SweepCmd& cmd) {
    ExperimentReport report =
        run_sweep(cmd.param, cmd.values, default_seeds(cmd.seeds), cmd.outdir);
    std::cout << report_markdown(report);
    std::cerr << "wrote " << cmd.outdir << "/report.json\n";
    return 0;
}

int do_presets() {
    for (const std::string& name : preset_names()) {
        Preset p = preset(name);
        std::cout << name << "\n  " << p.description << "\n";
        for (const auto& [var, value] : p.overrides) {
            std::cout << "  " << var << " = " << format_double(value) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stock-and-flow model simulator"};
    app.require_subcommand(1);

    ParseCmd parse_cmd;
    auto* parse_sub = app.add_subcommand("parse", "parse a model file and report diagnostics");
    parse_sub->add_option("file", parse_cmd.file, "model file")->required();
    parse_sub->add_flag("--json", parse_cmd.json, "emit model and diagnostics as JSON");

    CheckCmd check_cmd;
    auto* check_sub = app.add_subcommand("check-units", "dimensional audit of a model file");
    check_sub->add_option("file", check_cmd.file, "model file")->required();
    check_sub->add_flag("--json", check_cmd.json, "emit mismatches as JSON");

    RunCmd run_cmd;
    auto* run_sub = app.add_subcommand("run", "simulate a model and emit CSV");
    run_sub->add_option("file", run_cmd.file, "model file");
    run_sub->add_option("--builtin", run_cmd.builtin, "use a built-in model (frs)");
    auto* seed_opt = run_sub->add_option("--seed", run_cmd.seed, "noise seed");
    run_sub->add_option("--set", run_cmd.sets,
                        "override a constant or stock initial value, NAME=VALUE");
    auto* ft_opt = run_sub->add_option("--final-time", run_cmd.final_time, "simulation end time");
    auto* dt_opt = run_sub->add_option("--dt", run_cmd.dt, "integration step");
    run_sub->add_option("--noise", run_cmd.noise, "noise mode")
        ->check(CLI::IsMember({"on", "off"}));
    run_sub->add_option("--out", run_cmd.out, "CSV output path (default: stdout)");
    run_sub->add_option("--svg", run_cmd.svg, "also write a trajectory chart");

    ExperimentCmd exp_cmd;
    auto* exp_sub = app.add_subcommand("experiment", "run a canned multi-scenario study");
    exp_sub->add_option("which", exp_cmd.which, "study name")
        ->required()
        ->check(CLI::IsMember({"base", "activation", "distributions", "interventions"}));
    exp_sub->add_option("--seeds", exp_cmd.seeds, "number of seeds (1..N)")
        ->check(CLI::PositiveNumber);
    exp_sub->add_option("--outdir", exp_cmd.outdir, "output directory (default: out/<which>)");

    SweepCmd sweep_cmd;
    auto* sweep_sub = app.add_subcommand("sweep", "sweep one constant over several values");
    sweep_sub->add_option("--param", sweep_cmd.param, "variable to override")->required();
    sweep_sub->add_option("--values", sweep_cmd.values, "comma-separated values")
        ->required()
        ->delimiter(',');
    sweep_sub->add_option("--seeds", sweep_cmd.seeds, "number of seeds (1..N)")
        ->check(CLI::PositiveNumber);
    sweep_sub->add_option("--outdir", sweep_cmd.outdir, "output directory");

    auto* presets_sub = app.add_subcommand("presets", "list built-in scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    run_cmd.seed_given = seed_opt->count() > 0;
    run_cmd.final_time_given = ft_opt->count() > 0;
    run_cmd.dt_given = dt_opt->count() > 0;

    try {
        if (parse_sub->parsed()) return do_parse(parse_cmd);
        if (check_sub->parsed()) return do_check_units(check_cmd);
        if (run_sub->parsed()) return do_run(run_cmd);
        if (exp_sub->parsed()) return do_experiment(exp_cmd);
        if (sweep_sub->parsed()) return do_sweep(sweep_cmd);
        if (presets_sub->parsed()) return do_presets();
    } catch (const SdError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
