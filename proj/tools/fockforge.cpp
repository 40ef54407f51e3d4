// fockforge: run model files and verification suites, emit JSON / CSV reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 schema or model error,
// 3 numerical failure.

#include "model.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace fockforge;
namespace fs = std::filesystem;

enum Exit { exit_pass = 0, exit_check = 1, exit_schema = 2, exit_numeric = 3 };

struct Options {
    std::string model;
    std::string out;
    std::string format = "json";
    std::string suite;
    std::string out_dir = "fockforge-reports";
    std::uint64_t seed = 42;
    bool wall_times = false;
};

std::string render(const Report& r, const std::string& format) {
    return format == "csv" ? to_csv_text(r) : to_json_text(r);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

bool finite_residuals(const Report& r) {
    for (const auto& c : r.checks)
        if (!std::isfinite(c.residual)) return false;
    return true;
}

int verdict(const Report& r) {
    if (!finite_residuals(r)) {
        std::cerr << r.task << ": non-finite residual\n";
        return exit_numeric;
    }
    if (const auto* bad = r.first_failure()) {
        std::cerr << r.task << ": check " << bad->name << " failed, residual " << bad->residual << " > tolerance "
                  << bad->tolerance << "\n";
        return exit_check;
    }
    if (r.checks.empty()) {
        std::cerr << r.task << ": no checks ran\n";
        return exit_check;
    }
    return exit_pass;
}

// Library and schema errors are model errors; non-convergence is numerical.
template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return exit_schema;
    } catch (const Error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return exit_schema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
}

int run_command(const Options& opt) {
    return guarded([&] {
        std::ifstream in(opt.model);
        if (!in) throw cli::SchemaError("cannot read model file " + opt.model);
        const auto model = nlohmann::json::parse(in);
        const auto t0 = std::chrono::steady_clock::now();
        Report rep = cli::run_model(model, opt.seed);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << rep.task << ": " << secs << " s\n";
        if (opt.wall_times) rep.timing.emplace_back("wall_seconds", secs);
        const std::string text = render(rep, opt.format);
        if (opt.out.empty()) std::cout << text;
        else write_file(opt.out, text);
        return verdict(rep);
    });
}

int suite_command(const Options& opt) {
    return guarded([&] {
        const auto entries = suite_entries(opt.suite);
        std::map<std::string, double> wall;
        auto reports = run_entries(entries, opt.seed, [&](const BatteryEntry& e, double secs) {
            std::cerr << e.name << ": " << secs << " s\n";
            wall[e.name] = secs;
        });
        if (opt.wall_times)
            for (auto& rep : reports) rep.timing.emplace_back("wall_seconds", wall[rep.task]);
        fs::create_directories(opt.out_dir);
        int worst = exit_pass;
        for (const auto& rep : reports) {
            write_file(fs::path(opt.out_dir) / (rep.task + (opt.format == "csv" ? ".csv" : ".json")),
                       render(rep, opt.format));
            worst = std::max(worst, verdict(rep));
        }
        std::cerr << reports.size() << " reports written to " << opt.out_dir << "\n";
        return worst;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fockforge: CCR/CAR representations on Fock spaces, checked numerically"};
    app.require_subcommand(1);
    Options opt;

    auto* run = app.add_subcommand("run", "Run the checks described by a model file");
    run->add_option("model", opt.model, "Model file (JSON)")->required();
    run->add_option("--out", opt.out, "Report path (default: stdout)");
    run->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--seed", opt.seed, "Seed for randomized checks");
    run->add_flag("--wall-times", opt.wall_times, "Record wall-clock seconds (breaks byte stability)");

    auto* suite = app.add_subcommand("suite", "Run a verification suite, one report per check");
    suite->add_option("name", opt.suite, "smoke or full")->required();
    suite->add_option("--out-dir", opt.out_dir, "Directory for the reports");
    suite->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    suite->add_option("--seed", opt.seed, "Seed for randomized checks");
    suite->add_flag("--wall-times", opt.wall_times, "Record wall-clock seconds (breaks byte stability)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_schema;
    }
    if (*run) return run_command(opt);
    return suite_command(opt);
}
