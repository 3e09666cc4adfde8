#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "icalign/algorithms.hpp"
#include "icalign/errors.hpp"
#include "icalign/metrics.hpp"
#include "icalign/network.hpp"
#include "icalign/rng.hpp"

namespace icalign {

// Batch Monte-Carlo driver: one channel draw per (axis point, realization)
// shared by every algorithm and initialization at that point; per-run seeds
// derived from (master seed, axis index, realization index, init index) so
// output is reproducible for any worker count.

struct AlgorithmSpec {
    AlgorithmKind kind;
    int iterations = 0; // 0 -> the sweep-wide default
    std::string label;

    static AlgorithmSpec parse(const std::string& text) {
        AlgorithmSpec a;
        const auto at = text.find('@');
        if (at == std::string::npos) {
            a.kind = algorithm_from_string(text);
            a.label = text;
        } else {
            a.kind = algorithm_from_string(text.substr(0, at));
            a.iterations = std::stoi(text.substr(at + 1));
            if (a.iterations < 1)
                throw ContractViolation("algorithm spec: iteration override must be >= 1");
            a.label = text;
        }
        return a;
    }
};

enum class SweepAxis { RhoDb, AlphaDb };

inline std::string to_string(SweepAxis a) {
    return a == SweepAxis::RhoDb ? "rho_db" : "alpha_db";
}

struct SweepSpec {
    std::string scenario_name = "custom";
    NetworkConfig base_config;
    std::vector<AlgorithmSpec> algorithms;
    SweepAxis axis = SweepAxis::RhoDb;
    double axis_start_db = 0.0;
    double axis_stop_db = 0.0;
    double axis_step_db = 5.0;
    int realizations = 1000;
    int iterations = 100;
    int inits = 5;
    std::uint64_t master_seed = 20100609ULL;
    double epsilon = 1e-8;
    bool record_per_init = false; // one record per initialization instead of best-of-N
    int threads = 0;              // 0 -> hardware concurrency

    std::vector<double> axis_points() const {
        if (!(axis_step_db > 0.0)) throw ContractViolation("SweepSpec: axis step must be > 0");
        std::vector<double> pts;
        for (double v = axis_start_db; v <= axis_stop_db + 1e-9; v += axis_step_db)
            pts.push_back(v);
        if (pts.empty()) throw ContractViolation("SweepSpec: empty axis range");
        return pts;
    }

    void validate() const {
        if (realizations < 1) throw ContractViolation("SweepSpec: realizations must be >= 1");
        if (iterations < 1) throw ContractViolation("SweepSpec: iterations must be >= 1");
        if (inits < 1) throw ContractViolation("SweepSpec: inits must be >= 1");
        if (algorithms.empty()) throw ContractViolation("SweepSpec: no algorithms selected");
        (void)axis_points();
        base_config.validate();
    }
};

struct SweepRecord {
    std::string scenario;
    std::string algorithm;
    double axis_value_db = 0.0;
    int realization_index = 0;
    int best_init_index = 0;
    int iterations_run = 0;
    double sum_rate_bits = 0.0;
    double final_objective = 0.0;
    bool ok = true;
    std::string error;
};

namespace detail {

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kInitStream = 2;

inline NetworkConfig config_at(const SweepSpec& spec, double axis_db) {
    NetworkConfig cfg = spec.base_config;
    if (spec.axis == SweepAxis::RhoDb)
        cfg.set_all_rho(db_to_linear(axis_db));
    else
        cfg.set_cross_alpha(db_to_linear(axis_db));
    return cfg;
}

struct RunOutcome {
    bool ok = false;
    int iterations_run = 0;
    double rate = 0.0;
    double objective = 0.0;
    std::string error;
};

inline RunOutcome run_one(const AlgorithmSpec& alg, const SweepSpec& spec,
                          const NetworkConfig& cfg, const ChannelRealization& real,
                          const NoiseModel& noise, std::uint64_t seed) {
    RunOutcome out;
    const int iters = alg.iterations > 0 ? alg.iterations : spec.iterations;
    try {
        Rng rng(seed);
        AlgorithmTrace tr = run_algorithm(alg.kind, cfg, real, rng, iters, spec.epsilon);
        out.ok = true;
        out.iterations_run = tr.iterations_run;
        out.rate = sum_rate(cfg, real, tr.final_state.F, noise);
        out.objective = tr.objective.empty() ? 0.0 : tr.objective.back();
    } catch (const NumericFailure& e) {
        out.error = e.what();
    } catch (const SingularMatrix& e) {
        out.error = e.what();
    }
    return out;
}

} // namespace detail

/// Run the full sweep. Returns records ordered by (axis point, realization,
/// algorithm, init); a pure function of (spec, master_seed).
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::vector<double> points = spec.axis_points();
    const size_t n_tasks = points.size() * static_cast<size_t>(spec.realizations);
    std::vector<std::vector<SweepRecord>> slots(n_tasks);

    auto do_task = [&](size_t task) {
        const size_t a = task / spec.realizations;
        const int r = static_cast<int>(task % spec.realizations);
        const NetworkConfig cfg = detail::config_at(spec, points[a]);
        Rng channel_rng(derive_seed(spec.master_seed, {detail::kChannelStream, a, (std::uint64_t)r}));
        const ChannelRealization real = draw_realization(cfg, channel_rng);
        const NoiseModel noise = effective_noise_cov(cfg, real);
        std::vector<SweepRecord>& out = slots[task];

        for (const AlgorithmSpec& alg : spec.algorithms) {
            SweepRecord rec;
            rec.scenario = spec.scenario_name;
            rec.algorithm = alg.label;
            rec.axis_value_db = points[a];
            rec.realization_index = r;

            if (spec.record_per_init) {
                for (int i = 0; i < spec.inits; ++i) {
                    const auto o = detail::run_one(
                        alg, spec, cfg, real, noise,
                        derive_seed(spec.master_seed,
                                    {detail::kInitStream, a, (std::uint64_t)r, (std::uint64_t)i}));
                    SweepRecord one = rec;
                    one.best_init_index = i;
                    one.ok = o.ok;
                    one.iterations_run = o.iterations_run;
                    one.sum_rate_bits = o.rate;
                    one.final_objective = o.objective;
                    one.error = o.error;
                    out.push_back(std::move(one));
                }
                continue;
            }

            bool any_ok = false;
            detail::RunOutcome best;
            int best_init = 0;
            std::string first_error;
            for (int i = 0; i < spec.inits; ++i) {
                const auto o = detail::run_one(
                    alg, spec, cfg, real, noise,
                    derive_seed(spec.master_seed,
                                {detail::kInitStream, a, (std::uint64_t)r, (std::uint64_t)i}));
                if (!o.ok) {
                    if (first_error.empty()) first_error = o.error;
                    continue;
                }
                if (!any_ok || o.rate > best.rate) {
                    best = o;
                    best_init = i;
                }
                any_ok = true;
            }
            if (any_ok) {
                rec.best_init_index = best_init;
                rec.iterations_run = best.iterations_run;
                rec.sum_rate_bits = best.rate;
                rec.final_objective = best.objective;
            } else {
                rec.ok = false;
                rec.error = first_error;
            }
            out.push_back(std::move(rec));
        }
    };

    int n_threads = spec.threads > 0 ? spec.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (n_threads == 1 || n_tasks == 1) {
        for (size_t t = 0; t < n_tasks; ++t) do_task(t);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const size_t t = next.fetch_add(1);
                if (t >= n_tasks) return;
                do_task(t);
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<SweepRecord> records;
    for (auto& s : slots)
        for (auto& r : s) records.push_back(std::move(r));
    return records;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Named experiment presets on the symmetric (2,2,3) single-stream channel.
///   fig3: one realization, per-initialization records at 10 and 40 dB
///   fig4: rank-one interferer, power tracking the swept rho
///   fig5: rank-one interferer fixed at 0 dB (MMSE also run at 500 iterations)
///   fig6: tracking interferer sensed only at receiver 1
///   fig7: no interferer, cross-link path loss swept, direct SNR fixed at 40 dB
inline SweepSpec preset(const std::string& name) {
    SweepSpec spec;
    spec.scenario_name = name;
    spec.base_config = NetworkConfig::symmetric(3, 2, 2, 1, 1.0);
    auto algs = [&spec](std::initializer_list<const char*> names) {
        for (const char* n : names) spec.algorithms.push_back(AlgorithmSpec::parse(n));
    };
    if (name == "fig3") {
        spec.axis_start_db = 10.0;
        spec.axis_stop_db = 40.0;
        spec.axis_step_db = 30.0;
        spec.realizations = 1;
        spec.inits = 10;
        spec.record_per_init = true;
        algs({"IterIA", "MinINL", "JointMMSE", "MaxSINR", "ApproxMaxSINR"});
    } else if (name == "fig4" || name == "fig6") {
        InterfererConfig ic;
        ic.track_rho = true;
        ic.alpha_e = (name == "fig4") ? std::vector<double>{1.0, 1.0, 1.0}
                                      : std::vector<double>{1.0, 0.0, 0.0};
        spec.base_config.interferer = ic;
        spec.axis_start_db = 0.0;
        spec.axis_stop_db = 40.0;
        spec.axis_step_db = 5.0;
        algs({"IterIA", "MinINL", "JointMMSE", "MaxSINR", "ApproxMaxSINR", "Greedy", "RandomBF",
              "ClosedFormIA3"});
    } else if (name == "fig5") {
        InterfererConfig ic;
        ic.rho_e = 1.0; // 0 dB, fixed
        ic.alpha_e = {1.0, 1.0, 1.0};
        spec.base_config.interferer = ic;
        spec.axis_start_db = 0.0;
        spec.axis_stop_db = 40.0;
        spec.axis_step_db = 5.0;
        algs({"IterIA", "MinINL", "JointMMSE", "JointMMSE@500", "MaxSINR", "ApproxMaxSINR",
              "Greedy", "RandomBF", "ClosedFormIA3"});
    } else if (name == "fig7") {
        spec.base_config.set_all_rho(db_to_linear(40.0)); // gamma_kk = 40 dB
        spec.axis = SweepAxis::AlphaDb;
        spec.axis_start_db = -30.0;
        spec.axis_stop_db = 0.0;
        spec.axis_step_db = 5.0;
        algs({"IterIA", "MinINL", "JointMMSE", "MaxSINR", "ApproxMaxSINR", "Greedy", "RandomBF",
              "ClosedFormIA3"});
    } else {
        throw ContractViolation("unknown preset: " + name +
                                " (expected fig3|fig4|fig5|fig6|fig7)");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Summaries and record I/O
// ---------------------------------------------------------------------------

struct SummaryRow {
    std::string scenario;
    std::string algorithm;
    double axis_value_db = 0.0;
    int n = 0;
    double mean_sum_rate_bits = 0.0;
    double stderr_sum_rate_bits = 0.0;
};

/// Per-(scenario, algorithm, axis point) sample mean and standard error
/// over the successful records, in first-appearance order.
inline std::vector<SummaryRow> summarize(const std::vector<SweepRecord>& records) {
    std::vector<SummaryRow> rows;
    std::map<std::tuple<std::string, std::string, double>, size_t> index;
    std::vector<std::vector<double>> samples;
    for (const auto& r : records) {
        if (!r.ok) continue;
        const auto key = std::make_tuple(r.scenario, r.algorithm, r.axis_value_db);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, rows.size());
            rows.push_back({r.scenario, r.algorithm, r.axis_value_db, 0, 0.0, 0.0});
            samples.emplace_back();
            it = index.find(key);
        }
        samples[it->second].push_back(r.sum_rate_bits);
    }
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& s = samples[i];
        rows[i].n = static_cast<int>(s.size());
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= s.size();
        rows[i].mean_sum_rate_bits = mean;
        if (s.size() > 1) {
            double var = 0.0;
            for (double v : s) var += (v - mean) * (v - mean);
            var /= (s.size() - 1);
            rows[i].stderr_sum_rate_bits = std::sqrt(var / s.size());
        }
    }
    return rows;
}

namespace detail {

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

inline void write_records_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
    os << "scenario,algorithm,axis_value_db,realization_index,best_init_index,iterations_run,"
          "sum_rate_bits,final_objective,status\n";
    for (const auto& r : records)
        os << detail::csv_escape(r.scenario) << ',' << detail::csv_escape(r.algorithm) << ','
           << detail::fmt_g(r.axis_value_db) << ',' << r.realization_index << ','
           << r.best_init_index << ',' << r.iterations_run << ',' << detail::fmt_g(r.sum_rate_bits)
           << ',' << detail::fmt_g(r.final_objective) << ',' << (r.ok ? "ok" : "failed") << '\n';
}

inline void write_records_json(const std::vector<SweepRecord>& records, std::ostream& os) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j{{"scenario", r.scenario},
                         {"algorithm", r.algorithm},
                         {"axis_value_db", r.axis_value_db},
                         {"realization_index", r.realization_index},
                         {"best_init_index", r.best_init_index},
                         {"iterations_run", r.iterations_run},
                         {"sum_rate_bits", r.sum_rate_bits},
                         {"final_objective", r.final_objective},
                         {"status", r.ok ? "ok" : "failed"}};
        if (!r.ok) j["error"] = r.error;
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
}

inline std::vector<SweepRecord> read_records_csv(std::istream& is) {
    std::vector<SweepRecord> records;
    std::string line;
    if (!std::getline(is, line)) throw ContractViolation("records csv: empty input");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::csv_split(line);
        if (f.size() < 9) throw ContractViolation("records csv: malformed row: " + line);
        SweepRecord r;
        r.scenario = f[0];
        r.algorithm = f[1];
        r.axis_value_db = std::stod(f[2]);
        r.realization_index = std::stoi(f[3]);
        r.best_init_index = std::stoi(f[4]);
        r.iterations_run = std::stoi(f[5]);
        r.sum_rate_bits = std::stod(f[6]);
        r.final_objective = std::stod(f[7]);
        r.ok = (f[8] == "ok");
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<SweepRecord> read_records_json(std::istream& is) {
    nlohmann::json arr;
    is >> arr;
    std::vector<SweepRecord> records;
    for (const auto& j : arr) {
        SweepRecord r;
        r.scenario = j.at("scenario").get<std::string>();
        r.algorithm = j.at("algorithm").get<std::string>();
        r.axis_value_db = j.at("axis_value_db").get<double>();
        r.realization_index = j.at("realization_index").get<int>();
        r.best_init_index = j.at("best_init_index").get<int>();
        r.iterations_run = j.at("iterations_run").get<int>();
        r.sum_rate_bits = j.at("sum_rate_bits").get<double>();
        r.final_objective = j.at("final_objective").get<double>();
        r.ok = j.at("status").get<std::string>() == "ok";
        records.push_back(std::move(r));
    }
    return records;
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
    os << "scenario,algorithm,axis_value_db,n,mean_sum_rate_bits,stderr_sum_rate_bits\n";
    for (const auto& r : rows)
        os << detail::csv_escape(r.scenario) << ',' << detail::csv_escape(r.algorithm) << ','
           << detail::fmt_g(r.axis_value_db) << ',' << r.n << ','
           << detail::fmt_g(r.mean_sum_rate_bits) << ','
           << detail::fmt_g(r.stderr_sum_rate_bits) << '\n';
}

} // namespace icalign
