// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-10 run the battery
// in-process against their runtime budgets; criterion 11 runs the CLI suite twice.

#include <fockforge/battery.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace fockforge;

namespace {

const std::map<int, std::string> titles = {
    {1, "CAR exactness"},
    {2, "CCR on the sub-cutoff sectors"},
    {3, "determinant and trace identities"},
    {4, "Shale, Pin and metaplectic implementers"},
    {5, "Gaussian kernel conditions"},
    {6, "thermal two-point functions"},
    {7, "modular data"},
    {8, "KMS condition and mismatch witness"},
    {9, "fermionic lattice duality"},
    {10, "confined Pauli-Fierz spectra"},
    {11, "suite determinism"},
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

void line(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d  %s  %-40s %s\n", criterion, pass ? "PASS" : "FAIL", titles.at(criterion).c_str(),
                detail.c_str());
    std::fflush(stdout);
}

bool run_criterion(int criterion, const std::vector<BatteryEntry>& all) {
    std::vector<BatteryEntry> mine;
    for (const auto& e : all)
        if (e.criterion == criterion) mine.push_back(e);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Report> reports;
    try {
        for (const auto& e : mine) reports.push_back(run_entry(e, 42));
    } catch (const std::exception& ex) {
        line(criterion, false, std::string("exception: ") + ex.what());
        return false;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Report the first failing check, or else the one closest to its tolerance.
    const CheckRecord* worst = nullptr;
    double worst_ratio = -1.0;
    for (const auto& r : reports)
        for (const auto& c : r.checks) {
            if (!c.pass) {
                if (!worst || worst->pass) worst = &c;
                continue;
            }
            const double ratio = c.tolerance > 0.0 ? c.residual / c.tolerance : 0.0;
            if (!worst || (worst->pass && ratio > worst_ratio)) {
                worst = &c;
                worst_ratio = ratio;
            }
        }
    const bool pass = worst && worst->pass;
    const double budget = criterion_budget(criterion);
    const bool in_time = secs <= budget;
    std::ostringstream detail;
    if (worst) detail << "worst " << worst->name << " " << fmt(worst->residual) << " vs " << fmt(worst->tolerance) << ", ";
    detail << fmt(secs) << " s of " << budget << " s";
    if (!in_time) detail << " (over budget)";
    line(criterion, pass && in_time, detail.str());
    return pass && in_time;
}

std::map<std::string, std::string> read_reports(const fs::path& dir) {
    std::map<std::string, std::string> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream text;
        text << in.rdbuf();
        out[entry.path().filename().string()] = text.str();
    }
    return out;
}

bool suite_determinism() {
    const fs::path root = fs::temp_directory_path() / ("fockforge-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    int codes[2];
    for (int k = 0; k < 2; ++k) {
        const fs::path dir = root / ("run" + std::to_string(k));
        const std::string cmd = std::string("\"") + FOCKFORGE_CLI_PATH + "\" suite full --seed 42 --out-dir \"" +
                                dir.string() + "\" 2> \"" + (root / "stderr.txt").string() + "\"";
        codes[k] = std::system(cmd.c_str());
    }
    const auto a = read_reports(root / "run0"), b = read_reports(root / "run1");
    fs::remove_all(root);
    const bool same = !a.empty() && a == b;
    line(11, codes[0] == 0 && codes[1] == 0 && same,
         std::to_string(a.size()) + " reports, " + (same ? "byte-identical" : "differ") +
             ", exit codes " + std::to_string(codes[0]) + " and " + std::to_string(codes[1]));
    return codes[0] == 0 && codes[1] == 0 && same;
}

}  // namespace

int main() {
    const auto all = battery_entries();
    int failed = 0;
    for (int c = 1; c <= 10; ++c) failed += run_criterion(c, all) ? 0 : 1;
    failed += suite_determinism() ? 0 : 1;
    std::printf("%d of 11 criteria pass\n", 11 - failed);
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
