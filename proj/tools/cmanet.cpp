// cmanet: run scenarios, sweeps and the table reproductions, validate
// inputs, and cross-check the math core against the reference oracles.
//
// Exit codes: 0 ok, 1 oracle or acceptance breach, 2 I/O, 3 validation.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmanet/engine.hpp"
#include "cmanet/error.hpp"
#include "cmanet/linkmodel.hpp"
#include "cmanet/metrics.hpp"
#include "cmanet/numerics.hpp"
#include "cmanet/oracles/oracles.hpp"
#include "cmanet/scenario.hpp"
#include "cmanet/sweep.hpp"
#include "cmanet/tables.hpp"

namespace fs = std::filesystem;
using namespace cmanet;

namespace {

enum Exit { kOk = 0, kBreach = 1, kIo = 2, kInvalid = 3 };

struct Options {
    std::string scenario;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    int jobs = 1;
    int table = 0;
    std::string format = "csv";
    std::string rate_table;
    std::string axis;
    std::string values;
    int cases = 1000;
};

fs::path out_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("CMANET_OUT"); env != nullptr && *env != '\0') return env;
    return "cmanet-out";
}

ScenarioConfig load_config(const Options& o) {
    if (o.scenario.empty() == o.preset.empty())
        throw ValidationError({"give exactly one of --scenario or --preset"});
    ScenarioConfig c;
    if (!o.preset.empty()) {
        c = preset(o.preset);
    } else {
        if (!fs::exists(o.scenario)) throw Error(Errc::Io, "scenario file not found: " + o.scenario);
        c = load_scenario(o.scenario);
    }
    if (o.seed) c.seed = *o.seed;
    if (!o.rate_table.empty()) c.rates = linkmodel::RateTable::load_csv(o.rate_table);
    c.validate();
    return c;
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << body;
}

int cmd_simulate(const Options& o) {
    const ScenarioConfig c = load_config(o);
    const RunResult r = run(c);
    const fs::path dir = out_dir(o);
    write_artifacts(r, dir);
    if (o.format == "json") {
        Json j{{"scenario", c.name}, {"seed", c.seed}, {"trace_sha256", r.digest}, {"artifacts", dir.string()},
               {"summary", summary_json(r.summary)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "scenario " << c.name << "\n"
                  << "trace_sha256 " << r.digest << "\n"
                  << "artifacts " << dir.string() << "\n";
    }
    return kOk;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ValidationError({"--values: '" + cell + "' is not a number"});
        }
    }
    return out;
}

int cmd_sweep(const Options& o) {
    const ScenarioConfig c = load_config(o);
    if (!parse_axis(o.axis)) throw ValidationError({"unknown sweep axis '" + o.axis + "' (devices, epsilon_k, range, speed)"});
    const auto values = parse_values(o.values);
    if (values.empty()) throw ValidationError({"--values must list at least one value"});
    const auto results = sweep(c, o.axis, values, o.jobs);

    const fs::path dir = out_dir(o);
    std::string csv = "metric,scenario,epsilon_k,devices,value\n";
    Json runs = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        write_artifacts(results[i], dir / (o.axis + "-" + std::to_string(i)));
        csv += metrics_csv(results[i].metrics, false);
        runs.push_back(Json{{"axis", o.axis},
                            {"value", values[i]},
                            {"seed", results[i].config.seed},
                            {"trace_sha256", results[i].digest},
                            {"summary", summary_json(results[i].summary)}});
    }
    write_file(dir / "sweep.csv", csv);
    if (o.format == "json") {
        std::cout << runs.dump(2) << "\n";
    } else {
        std::cout << csv;
    }
    return kOk;
}

int cmd_tables(const Options& o) {
    if (o.table < 1 || o.table > 5) throw ValidationError({"unknown table " + std::to_string(o.table) + " (expected 1 to 5)"});
    const auto rates = o.rate_table.empty() ? linkmodel::RateTable::defaults() : linkmodel::RateTable::load_csv(o.rate_table);
    const std::uint64_t seed = o.seed.value_or(preset("table1").seed);
    const TableOutput t = make_table(o.table, seed, o.jobs, rates);
    if (!o.out.empty() || std::getenv("CMANET_OUT") != nullptr) {
        const fs::path dir = out_dir(o);
        fs::create_directories(dir);
        write_file(dir / ("table" + std::to_string(o.table) + ".csv"), t.csv);
        write_file(dir / ("table" + std::to_string(o.table) + "_metrics.csv"), metrics_csv(t.metrics));
    }
    if (o.format == "json") {
        std::cout << t.json.dump(2) << "\n";
    } else {
        std::cout << t.csv;
    }
    if (!t.passed) {
        std::cerr << (o.table <= 2 ? "device-count ordering does not hold in every column\n"
                                   : "a cell deviates by more than 5% from the reference\n");
        return kBreach;
    }
    return kOk;
}

int cmd_validate(const Options& o) {
    if (!o.rate_table.empty()) linkmodel::RateTable::load_csv(o.rate_table);
    if (!o.scenario.empty() || !o.preset.empty()) load_config(o);
    if (o.rate_table.empty() && o.scenario.empty() && o.preset.empty())
        throw ValidationError({"nothing to validate: give --scenario, --preset or --rate-table"});
    std::cout << "valid\n";
    return kOk;
}

struct OracleLine {
    std::string name;
    int cases = 0;
    double max_dev = 0.0;
    double tol = 0.0;
    std::string worst;

    bool ok() const { return max_dev <= tol; }
};

void track(OracleLine& line, double dev, const std::string& where) {
    if (!(dev <= line.max_dev)) {
        line.max_dev = std::isnan(dev) ? INFINITY : dev;
        line.worst = where;
    }
}

std::string args(std::initializer_list<double> v) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    bool first = true;
    for (double x : v) {
        os << (first ? "" : ", ") << x;
        first = false;
    }
    os << ")";
    return os.str();
}

int cmd_oracle(const Options& o) {
    if (o.cases < 1) throw ValidationError({"--cases must be >= 1"});
    if (!o.rate_table.empty()) {
        const auto rates = linkmodel::RateTable::load_csv(o.rate_table);
        (void)rates;
    }
    const std::uint64_t seed = o.seed.value_or(12345);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<OracleLine> lines;

    {
        OracleLine l{"marcum_q1_vs_quadrature", o.cases, 0.0, 1e-8, ""};
        for (int i = 0; i < o.cases; ++i) {
            const double a = 5.0 * u(rng);
            const double b = 5.0 * u(rng);
            track(l, std::fabs(numerics::marcum_q1({a, b}) - oracles::marcum_q1_quadrature(a, b)), args({a, b}));
        }
        lines.push_back(l);
    }
    {
        OracleLine l{"erf_vs_taylor", o.cases, 0.0, 1e-12, ""};
        for (int i = 0; i < o.cases; ++i) {
            const double x = -2.0 + 4.0 * u(rng);
            track(l, std::fabs(numerics::erf(x) - oracles::erf_taylor(x, 60)), args({x}));
        }
        lines.push_back(l);
    }
    {
        const int cases = std::min(o.cases, 200);
        OracleLine l{"chi_square_vs_gamma_form", cases, 0.0, 1e-10, ""};
        for (int i = 0; i < cases; ++i) {
            const double dof = 0.5 + 9.5 * u(rng);
            const double x = 0.1 + 19.9 * u(rng);
            track(l, std::fabs(numerics::chi_square_weight(dof, x) - oracles::chi_square_gamma_form(dof, x)), args({dof, x}));
        }
        lines.push_back(l);
    }
    {
        OracleLine l{"symbol_entropy_vs_bruteforce", o.cases, 0.0, 1e-12, ""};
        auto axis = [&](int k) {
            std::vector<double> p(static_cast<std::size_t>(k));
            double s = 0.0;
            for (auto& v : p) s += v = u(rng);
            for (auto& v : p) v /= s;
            return p;
        };
        for (int i = 0; i < o.cases; ++i) {
            const auto px = axis(1 + static_cast<int>(4 * u(rng)));
            const auto py = axis(1 + static_cast<int>(4 * u(rng)));
            const auto pz = axis(1 + static_cast<int>(4 * u(rng)));
            const double ours = metrics::symbol_entropy(metrics::SymbolDistribution(px, py, pz), 1.0);
            track(l, std::fabs(ours - oracles::symbol_entropy_bruteforce(px, py, pz)), "case " + std::to_string(i));
        }
        lines.push_back(l);
    }
    {
        OracleLine l{"chain_entropy_vs_power_iteration", o.cases, 0.0, 1e-9, ""};
        for (int i = 0; i < o.cases; ++i) {
            const int k = 2 + static_cast<int>(5 * u(rng));
            oracles::Matrix p(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
            for (auto& row : p) {
                double s = 0.0;
                for (auto& v : row) s += v = 0.05 + u(rng);
                for (auto& v : row) v /= s;
            }
            const metrics::TransitionMatrix m(p);
            const double ours = metrics::chain_entropy(m, metrics::stationary_distribution(m), metrics::LogBase::Two);
            const double ref = oracles::chain_entropy_bruteforce(p, oracles::stationary_power_iteration(p), 2.0);
            track(l, std::fabs(ours - ref), "K=" + std::to_string(k) + " case " + std::to_string(i));
        }
        lines.push_back(l);
    }
    {
        // 27-point grid; the Monte Carlo sample count scales with --cases.
        const std::uint64_t samples = std::min<std::uint64_t>(1000ULL * static_cast<std::uint64_t>(o.cases), 2'000'000ULL);
        OracleLine l{"session_life_vs_monte_carlo_rel", 27, 0.0, 0.01, ""};
        for (double mu : {0.0, 1.5, 3.0})
            for (double sigma : {0.2, 0.7, 1.2})
                for (double f : {0.0, 1.5, 3.0}) {
                    const double elapsed = f * std::exp(mu);
                    const double ours = linkmodel::session_life({numerics::LogNormalParams(mu, sigma), elapsed});
                    const auto mc = oracles::lognormal_conditional_mc_mean(mu, sigma, elapsed, samples, rng());
                    track(l, std::fabs(ours - mc.mean) / mc.mean, args({mu, sigma, elapsed}));
                }
        lines.push_back(l);
    }

    bool all = true;
    for (const auto& l : lines) {
        std::cout << "oracle " << l.name << " cases=" << l.cases << " max_dev=" << l.max_dev << " tol=" << l.tol << " "
                  << (l.ok() ? "PASS" : "FAIL");
        if (!l.ok()) std::cout << " worst=" << l.worst;
        std::cout << "\n";
        all = all && l.ok();
    }
    return all ? kOk : kBreach;
}

int report(const std::exception& e, int code) {
    std::cerr << "cmanet: " << e.what() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cloud-MANET discrete-event simulator"};
    app.require_subcommand(1, 1);
    Options o;

    auto scenario_flags = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "Scenario TOML file");
        sub->add_option("--preset", o.preset, "Built-in scenario (table1..table5, relay-demo)");
        sub->add_option("--seed", o.seed, "Override the scenario seed");
        sub->add_option("--rate-table", o.rate_table, "Rate table CSV (data_type,range,mbps)");
    };
    auto output_flags = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Output directory (default: $CMANET_OUT or ./cmanet-out)");
        sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write trace, metrics and summary");
    scenario_flags(simulate);
    output_flags(simulate);

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per value of one parameter");
    scenario_flags(sweep_cmd);
    output_flags(sweep_cmd);
    sweep_cmd->add_option("--axis", o.axis, "devices, epsilon_k, range or speed")->required();
    sweep_cmd->add_option("--values", o.values, "Comma-separated values")->required();
    sweep_cmd->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);

    auto* tables = app.add_subcommand("tables", "Reproduce one of tables 1 to 5");
    tables->add_option("--table,table", o.table, "Table id")->required();
    tables->add_option("--seed", o.seed, "Base seed for tables 1 and 2");
    tables->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    tables->add_option("--rate-table", o.rate_table, "Rate table CSV used by the simulation");
    output_flags(tables);

    auto* validate = app.add_subcommand("validate", "Check a scenario or rate table without running it");
    scenario_flags(validate);

    auto* oracle = app.add_subcommand("oracle", "Compare the math core against the reference oracles");
    oracle->add_option("--cases", o.cases, "Random cases per oracle");
    oracle->add_option("--seed", o.seed, "Seed for the random cases");
    oracle->add_option("--rate-table", o.rate_table, "Rate table CSV to validate first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
        if (tables->parsed()) return cmd_tables(o);
        if (validate->parsed()) return cmd_validate(o);
        if (oracle->parsed()) return cmd_oracle(o);
    } catch (const ValidationError& e) {
        std::cerr << "cmanet: invalid input\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return kInvalid;
    } catch (const Error& e) {
        switch (e.code()) {
            case Errc::Io: return report(e, kIo);
            case Errc::InvalidArgument:
            case Errc::UnknownAxis:
            case Errc::Validation: return report(e, kInvalid);
            default: return report(e, kBreach);
        }
    } catch (const std::exception& e) {
        return report(e, kIo);
    }
    return kOk;
}
