// Batch command-line front end: `icalign run` executes a Monte-Carlo sweep
// (preset or scenario file) and writes one record per
// (axis point, realization, algorithm); `icalign summarize` reduces records
// to per-(algorithm, axis) means with standard errors.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icalign/harness.hpp"
#include "icalign/scenario.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative precoder design sweeps for the K-user MIMO interference channel"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write records");
    std::string preset_name, config_path, algorithms_arg, output_path, format = "csv",
                axis_name;
    int realizations = -1, iterations = -1, inits = -1, threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false, per_init = false;
    double epsilon = -1.0, axis_start = 0.0, axis_stop = 0.0, axis_step = 0.0;
    bool axis_start_set = false, axis_stop_set = false, axis_step_set = false;

    auto* preset_opt = run->add_option("--preset", preset_name,
                                       "Scenario preset: fig3|fig4|fig5|fig6|fig7");
    auto* config_opt =
        run->add_option("--config", config_path, "Scenario JSON file (see README for the schema)");
    preset_opt->excludes(config_opt);
    run->add_option("--algorithms", algorithms_arg,
                    "Comma-separated algorithms, e.g. IterIA,MinINL,JointMMSE@500");
    run->add_option("--realizations", realizations, "Channel realizations per axis point");
    run->add_option("--iterations", iterations, "Iteration cap per run");
    run->add_option("--inits", inits, "Random initializations per realization");
    run->add_option("--seed", seed, "Master seed (64-bit)")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--epsilon", epsilon, "Convergence threshold");
    run->add_option("--axis", axis_name, "Sweep axis: rho_db|alpha_db");
    run->add_option("--axis-start", axis_start, "Axis start (dB)")->each([&](const std::string&) {
        axis_start_set = true;
    });
    run->add_option("--axis-stop", axis_stop, "Axis stop (dB)")->each([&](const std::string&) {
        axis_stop_set = true;
    });
    run->add_option("--axis-step", axis_step, "Axis step (dB)")->each([&](const std::string&) {
        axis_step_set = true;
    });
    run->add_flag("--per-init", per_init, "Record every initialization instead of best-of-N");
    run->add_option("--output", output_path, "Output file (default: stdout)");
    run->add_option("--format", format, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--threads", threads, "Worker threads (0 = hardware)");

    // --- summarize ---
    auto* summ = app.add_subcommand("summarize", "Reduce records to per-point means");
    std::string in_path, summ_out_path;
    summ->add_option("--input", in_path, "Records file (.csv or .json)")->required();
    summ->add_option("--output", summ_out_path, "Summary CSV (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            icalign::SweepSpec spec;
            if (!preset_name.empty()) {
                spec = icalign::preset(preset_name);
            } else if (!config_path.empty()) {
                spec.scenario_name = config_path;
                spec.base_config = icalign::load_scenario(config_path);
                spec.axis_stop_db = spec.axis_start_db = 0.0;
            } else {
                std::cerr << "error: one of --preset or --config is required\n";
                return 2;
            }
            if (!algorithms_arg.empty()) {
                spec.algorithms.clear();
                for (const auto& name : split_list(algorithms_arg))
                    spec.algorithms.push_back(icalign::AlgorithmSpec::parse(name));
            }
            if (spec.algorithms.empty())
                spec.algorithms.push_back(icalign::AlgorithmSpec::parse("IterIA"));
            if (realizations > 0) spec.realizations = realizations;
            if (iterations > 0) spec.iterations = iterations;
            if (inits > 0) spec.inits = inits;
            if (seed_set) spec.master_seed = seed;
            if (epsilon >= 0.0) spec.epsilon = epsilon;
            if (!axis_name.empty()) {
                if (axis_name == "rho_db")
                    spec.axis = icalign::SweepAxis::RhoDb;
                else if (axis_name == "alpha_db")
                    spec.axis = icalign::SweepAxis::AlphaDb;
                else
                    throw icalign::ContractViolation("unknown axis: " + axis_name);
            }
            if (axis_start_set) spec.axis_start_db = axis_start;
            if (axis_stop_set) spec.axis_stop_db = axis_stop;
            if (axis_step_set) spec.axis_step_db = axis_step;
            if (per_init) spec.record_per_init = true;
            spec.threads = threads;

            const auto records = icalign::run_sweep(spec);

            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!output_path.empty()) {
                file.open(output_path);
                if (!file) throw icalign::ContractViolation("cannot open output: " + output_path);
                os = &file;
            }
            if (format == "json")
                icalign::write_records_json(records, *os);
            else
                icalign::write_records_csv(records, *os);
            size_t failed = 0;
            for (const auto& r : records)
                if (!r.ok) ++failed;
            if (failed > 0)
                std::cerr << "note: " << failed << " of " << records.size()
                          << " records are failed rows\n";
            return 0;
        }

        if (summ->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw icalign::ContractViolation("cannot open input: " + in_path);
            const auto records = ends_with(in_path, ".json") ? icalign::read_records_json(in)
                                                             : icalign::read_records_csv(in);
            const auto rows = icalign::summarize(records);
            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!summ_out_path.empty()) {
                file.open(summ_out_path);
                if (!file)
                    throw icalign::ContractViolation("cannot open output: " + summ_out_path);
                os = &file;
            }
            icalign::write_summary_csv(rows, *os);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
