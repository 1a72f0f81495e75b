#include "ppsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppsim/approx.hpp"
#include "ppsim/errors.hpp"
#include "ppsim/estimate.hpp"
#include "ppsim/hawkes.hpp"
#include "ppsim/inar.hpp"
#include "ppsim/io.hpp"
#include "ppsim/parallel.hpp"
#include "ppsim/stats.hpp"

namespace ppsim::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 12345;
    std::optional<std::size_t> reps;
    std::string out;
};

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigInvalid(std::string("config: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback) {
    const double v = get_num(j, key, static_cast<double>(fallback));
    if (v < 0 || v != std::floor(v))
        throw ConfigInvalid(std::string("config: '") + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

Window get_window(const json& j, Window fallback) {
    if (!j.contains("window")) return fallback;
    const auto& w = j.at("window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        throw ConfigInvalid("config: 'window' must be [a, b]");
    Window out{w[0].get<double>(), w[1].get<double>()};
    if (!(out.b > out.a)) throw ConfigInvalid("config: 'window' must satisfy a < b");
    return out;
}

hawkes::Model model_from_config(const json& cfg) {
    if (!cfg.contains("eta") || !cfg.contains("kernel"))
        throw ConfigInvalid("config: continuous model needs 'eta' and 'kernel'");
    return hawkes::Model(get_num(cfg, "eta", 0.0), io::kernel_from_json(cfg.at("kernel")));
}

// Either a direct {"alpha0", "alphas"} block or the discretized continuous model.
InarParams params_from_config(const json& cfg) {
    if (cfg.contains("alpha0")) {
        std::vector<double> alphas;
        if (cfg.contains("alphas")) {
            if (!cfg.at("alphas").is_array()) throw ConfigInvalid("config: 'alphas' must be an array");
            for (const auto& a : cfg.at("alphas")) {
                if (!a.is_number()) throw ConfigInvalid("config: 'alphas' must be numbers");
                alphas.push_back(a.get<double>());
            }
        }
        return InarParams(get_num(cfg, "alpha0", 0.0), std::move(alphas));
    }
    if (cfg.contains("eta") && cfg.contains("kernel") && cfg.contains("delta")) {
        const auto doc = io::model_from_json(cfg);
        return discretize(doc.eta, doc.kernel, doc.delta);
    }
    throw ConfigInvalid("config: need either 'alpha0'/'alphas' or 'eta'+'kernel'+'delta'");
}

std::filesystem::path sibling_json(const std::filesystem::path& p) {
    auto q = p;
    q.replace_extension(".json");
    return q;
}

int cmd_simulate_inar(const Options& opt) {
    const auto params = params_from_config(opt.config);
    const std::size_t n_steps = get_count(opt.config, "n_steps", 1000);
    const std::size_t burn_in = get_count(opt.config, "burn_in", inar::default_burn_in(params));
    const std::size_t reps = opt.reps.value_or(1);
    if (reps == 0 || n_steps == 0) throw ConfigInvalid("config: reps and n_steps must be positive");

    RngStream rng(opt.seed);
    std::vector<CountSeries> all(reps);
    parallel_for(reps, [&](std::size_t r) {
        RngStream sub = rng.substream(r);
        all[r] = inar::simulate(params, n_steps, burn_in, sub);
    });
    double total = 0.0;
    for (const auto& s : all)
        for (auto c : s.counts) total += static_cast<double>(c);
    const double mean = total / (static_cast<double>(reps) * static_cast<double>(n_steps));
    if (!opt.out.empty())
        io::atomic_write(opt.out, [&](std::ostream& os) { io::write_csv(os, all.front()); });
    std::cout << "simulate-inar: n_steps=" << n_steps << " reps=" << reps
              << " mean=" << fmt6(mean) << " theory_mean=" << fmt6(inar::mean(params))
              << (opt.out.empty() ? "" : " out=" + opt.out) << "\n";
    return 0;
}

int cmd_simulate_hawkes(const Options& opt) {
    const auto model = model_from_config(opt.config);
    const Window window = get_window(opt.config, Window{0.0, 100.0});
    const double lookback =
        get_num(opt.config, "lookback", hawkes::default_lookback(model));
    std::string method = "cluster";
    if (opt.config.contains("method")) method = opt.config.at("method").get<std::string>();
    if (method != "cluster" && method != "thinning")
        throw ConfigInvalid("config: 'method' must be 'cluster' or 'thinning'");
    const std::size_t reps = opt.reps.value_or(1);
    if (reps == 0) throw ConfigInvalid("config: reps must be positive");

    RngStream rng(opt.seed);
    std::vector<std::size_t> counts(reps, 0);
    hawkes::ClusterRealization first_cluster;
    PointPattern first_pattern;
    parallel_for(reps, [&](std::size_t r) {
        RngStream sub = rng.substream(r);
        if (method == "cluster") {
            auto c = hawkes::simulate_cluster(model, window, lookback, sub);
            counts[r] = c.pattern.times.size();
            if (r == 0) first_cluster = std::move(c);
        } else {
            auto p = hawkes::simulate_thinning(model, window, lookback, sub);
            counts[r] = p.times.size();
            if (r == 0) first_pattern = std::move(p);
        }
    });
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    const double rate = total / (static_cast<double>(reps) * window.length());
    const double target = model.eta() / (1.0 - model.kernel().mass());
    if (!opt.out.empty()) {
        io::atomic_write(opt.out, [&](std::ostream& os) {
            if (method == "cluster")
                io::write_csv(os, first_cluster);
            else
                io::write_csv(os, first_pattern);
        });
    }
    std::cout << "simulate-hawkes: method=" << method << " window=(" << io::fmt_double(window.a)
              << "," << io::fmt_double(window.b) << "] reps=" << reps << " rate=" << fmt6(rate)
              << " target_rate=" << fmt6(target)
              << (opt.out.empty() ? "" : " out=" + opt.out) << "\n";
    return 0;
}

int cmd_theory(const Options& opt) {
    const auto params = params_from_config(opt.config);
    const std::size_t max_lag = get_count(opt.config, "max_lag", 5);
    const auto r = inar::autocovariance(params, max_lag, 1e-10);
    const double yw = approx::yule_walker_residual(params, std::max<std::size_t>(max_lag, 1));
    std::ostringstream line;
    line << "theory: mean=" << fmt6(inar::mean(params));
    for (std::size_t j = 0; j <= max_lag; ++j) line << " R(" << j << ")=" << fmt6(r[j]);
    line << " K=" << fmt6(params.reproduction_mean()) << " yw_residual=" << io::fmt_double(yw);
    if (!opt.out.empty()) {
        io::atomic_write(opt.out, [&](std::ostream& os) {
            os << "lag,r\n";
            for (std::size_t j = 0; j <= max_lag; ++j) os << j << ',' << io::fmt_double(r[j]) << '\n';
        });
        line << " out=" << opt.out;
    }
    std::cout << line.str() << "\n";
    return 0;
}

int cmd_converge(const Options& opt) {
    const auto model = model_from_config(opt.config);
    std::vector<double> deltas{0.2, 0.1, 0.05};
    if (opt.config.contains("deltas")) {
        deltas.clear();
        for (const auto& d : opt.config.at("deltas")) {
            if (!d.is_number()) throw ConfigInvalid("config: 'deltas' must be numbers");
            deltas.push_back(d.get<double>());
        }
        if (deltas.empty()) throw ConfigInvalid("config: 'deltas' must be non-empty");
    }
    const Window window = get_window(opt.config, Window{0.0, 2.0});
    const std::size_t reps = opt.reps.value_or(10000);

    RngStream rng(opt.seed);
    const auto report = approx::convergence_sweep(model, deltas, window, reps, rng);
    if (!opt.out.empty()) {
        io::atomic_write(opt.out, [&](std::ostream& os) { io::write_csv(os, report); });
        io::atomic_write(sibling_json(opt.out), [&](std::ostream& os) {
            os << io::report_to_json(report).dump(2) << "\n";
        });
    }
    std::ostringstream line;
    line << "converge: reps=" << reps << " target_rate=" << fmt6(report.target_rate) << " w1_window1=[";
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        line << (i ? " " : "") << fmt6(report.rows[i].w1_window1);
    line << "]";
    if (!opt.out.empty()) line << " out=" << opt.out;
    std::cout << line.str() << "\n";
    return 0;
}

int cmd_estimate(const Options& opt) {
    const std::size_t p = get_count(opt.config, "p", 20);
    const double delta = get_num(opt.config, "delta", 0.0);
    if (!(delta > 0.0)) throw ConfigInvalid("config: estimate needs 'delta' > 0");

    CountSeries series;
    if (opt.config.contains("input")) {
        const std::string path = opt.config.at("input").get<std::string>();
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open input '" + path + "'");
        std::string header;
        std::getline(is, header);
        if (!header.empty() && header.back() == '\r') header.pop_back();
        is.seekg(0);
        if (header == "index,count") {
            series = io::read_count_series_csv(is);
            series.delta = delta;
        } else if (header == "time") {
            const auto times = io::read_times_csv(is);
            const Window window = get_window(
                opt.config, Window{0.0, times.empty() ? delta : std::ceil(times.back() / delta) * delta});
            PointPattern pattern;
            pattern.window = window;
            for (double t : times)
                if (window.contains(t)) pattern.times.push_back(t);
            pattern.validate();
            series = hawkes::bin_counts(pattern, delta, window);
        } else {
            throw IoError("input '" + path + "': expected header 'time' or 'index,count'");
        }
    } else {
        // No input file: simulate the configured model and fit its bins.
        const auto model = model_from_config(opt.config);
        const Window window = get_window(opt.config, Window{0.0, 1000.0});
        RngStream rng(opt.seed);
        RngStream sub = rng.substream(0);
        const auto cluster =
            hawkes::simulate_cluster(model, window, hawkes::default_lookback(model), sub);
        series = hawkes::bin_counts(cluster.pattern, delta, window);
    }

    const auto est = estimate::kernel_from_bins(series, delta, p);
    if (!opt.out.empty()) {
        io::atomic_write(opt.out, [&](std::ostream& os) { io::write_csv(os, est); });
        io::atomic_write(sibling_json(opt.out), [&](std::ostream& os) {
            os << io::estimate_header_json(est).dump(2) << "\n";
        });
    }
    double k_hat = 0.0;
    for (double h : est.h_hat) k_hat += h * delta;
    std::cout << "estimate: p=" << p << " delta=" << io::fmt_double(delta)
              << " eta_hat=" << fmt6(est.eta_hat) << " K_hat=" << fmt6(k_hat)
              << " residual_variance=" << fmt6(est.residual_variance)
              << (opt.out.empty() ? "" : " out=" + opt.out) << "\n";
    return 0;
}

int dispatch(const Options& opt) {
    if (opt.command == "simulate-inar") return cmd_simulate_inar(opt);
    if (opt.command == "simulate-hawkes") return cmd_simulate_hawkes(opt);
    if (opt.command == "theory") return cmd_theory(opt);
    if (opt.command == "converge") return cmd_converge(opt);
    if (opt.command == "estimate") return cmd_estimate(opt);
    throw ConfigInvalid("unknown command '" + opt.command + "'");
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Hawkes / INAR(infinity) simulation, convergence and estimation toolkit"};
    app.require_subcommand(1);

    struct Shared {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> reps;
        std::string out;
    };
    static const char* kCommands[] = {"simulate-hawkes", "simulate-inar", "theory", "converge",
                                      "estimate"};
    static const char* kDescriptions[] = {
        "Simulate a Hawkes point process (cluster or thinning method)",
        "Simulate an INAR count series",
        "Closed-form moments and identities for INAR parameters",
        "Run the discretization convergence sweep",
        "Least-squares kernel estimation from bin counts"};
    std::map<std::string, Shared> shared;
    for (std::size_t i = 0; i < std::size(kCommands); ++i) {
        auto* sub = app.add_subcommand(kCommands[i], kDescriptions[i]);
        auto& s = shared[kCommands[i]];
        sub->add_option("--config", s.config_path, "JSON config file");
        sub->add_option("--seed", s.seed, "RNG seed (overrides config)");
        sub->add_option("--reps", s.reps, "Replicates (overrides config)");
        sub->add_option("--out", s.out, "Output file (overrides config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        const Shared& s = shared[sub->get_name()];
        Options opt;
        opt.command = sub->get_name();
        if (!s.config_path.empty()) {
            std::ifstream is(s.config_path, std::ios::binary);
            if (!is) throw IoError("cannot open config '" + s.config_path + "'");
            try {
                is >> opt.config;
            } catch (const json::exception& e) {
                throw ConfigInvalid(std::string("config: ") + e.what());
            }
            if (!opt.config.is_object()) throw ConfigInvalid("config: top level must be an object");
        }
        opt.seed = s.seed.value_or(
            static_cast<std::uint64_t>(get_num(opt.config, "seed", 12345.0)));
        if (s.reps)
            opt.reps = s.reps;
        else if (opt.config.contains("reps"))
            opt.reps = get_count(opt.config, "reps", 1);
        opt.out = !s.out.empty() ? s.out
                                 : (opt.config.contains("out")
                                        ? opt.config.at("out").get<std::string>()
                                        : std::string());
        return dispatch(opt);
    } catch (const MassNotSubcritical& e) {
        std::cerr << "ppsim: error: " << e.what() << "\n";
        return 3;
    } catch (const DiscretizationSupercritical& e) {
        std::cerr << "ppsim: error: " << e.what() << "\n";
        return 3;
    } catch (const TailTooHeavy& e) {
        std::cerr << "ppsim: error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "ppsim: error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "ppsim: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ppsim: error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ppsim::cli
