#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hslab/config.hpp"
#include "hslab/properties.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success; 1 structural or verification failure; 2 stability
// falsifier found a witness; 3 incomplete results (no convergence, oracle
// short); 64 config or usage error.
constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kWitness = 2;
constexpr int kIncomplete = 3;
constexpr int kUsage = 64;

std::string fmt17(double x) {
    char b[48];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

// HS_LAB_JOBS beats the flag so wrappers can pin the worker count.
int resolve_jobs(int flag_value) {
    if (const char* env = std::getenv("HS_LAB_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return flag_value > 0 ? flag_value : 1;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw hslab::Error("cannot write output file: " + path);
    f << text;
}

// Every file output gets a sibling <out>.manifest.json identifying the run.
void write_manifest(const std::string& out_path, const std::string& command,
                    const std::string& config_path,
                    const std::map<std::string, std::string>& parameters,
                    long long seed) {
    const nlohmann::json j{{"command", command},
                           {"operator_config_path", config_path},
                           {"parameters", parameters},
                           {"tool_version", kToolVersion},
                           {"seed", seed}};
    write_file(out_path + ".manifest.json", j.dump(2) + "\n");
}

// --- diagnose ---

int run_diagnose(const std::string& config_path, int samples, long long seed) {
    const hslab::DifferentialOperator t = hslab::load_operator_file(config_path);
    const hslab::HpDiagnostics d =
        hslab::diagnose(t, static_cast<std::uint64_t>(seed), samples);

    nlohmann::json j{{"fuchs_index", d.fuchs_index},
                     {"nondegenerate", d.nondegenerate},
                     {"degree_bounds_ok", d.degree_bounds_ok},
                     {"leading_poly", d.leading_poly.coeffs()},
                     {"leading_poly_ok", d.leading_poly_ok},
                     {"coefficient_chain_ok", d.coefficient_chain_ok},
                     {"leading_sign", d.leading_sign},
                     {"samples_used", d.samples_used},
                     {"structural_ok", d.structural_ok()},
                     {"witness", nullptr}};
    if (d.witness)
        j["witness"] = {{"z_re", d.witness->z_re},
                        {"z_im", d.witness->z_im},
                        {"w_re", d.witness->w_re},
                        {"w_im", d.witness->w_im}};
    std::printf("%s\n", j.dump(2).c_str());

    if (d.witness) return kWitness;
    return d.structural_ok() ? kOk : kFail;
}

// --- solve ---

void append_pair_rows(std::string& csv, const hslab::StieltjesPair& p) {
    const std::string pat = hslab::pattern_to_string(p.pattern.a);
    const std::string tail = fmt17(p.residual) + ";" + std::to_string(p.iterations);
    if (p.v_roots.empty()) {
        // Degree-0 Van Vleck: one row carrying the constant itself.
        csv += pat + ";v;0;" + fmt17(p.v.coeff(0)) + ";" + tail + "\n";
    } else {
        for (std::size_t i = 0; i < p.v_roots.size(); ++i)
            csv += pat + ";v;" + std::to_string(i + 1) + ";" + fmt17(p.v_roots[i]) +
                   ";" + tail + "\n";
    }
    for (std::size_t i = 0; i < p.f_roots.size(); ++i)
        csv += pat + ";f;" + std::to_string(i + 1) + ";" + fmt17(p.f_roots[i]) + ";" +
               tail + "\n";
}

void append_failure_row(std::string& csv, const hslab::ZeroPattern& pattern) {
    csv += hslab::pattern_to_string(pattern.a) + ";error;0;nan;nan;0\n";
}

int run_solve(const std::string& config_path, int n, const std::string& pattern_text,
              double tol, int max_iter, int jobs, const std::string& out) {
    const hslab::DifferentialOperator t = hslab::load_operator_file(config_path);
    hslab::SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.jobs = jobs;

    std::string csv = "pattern_a;kind;root_index;value;residual;iterations\n";
    std::size_t converged = 0;
    std::size_t failed = 0;

    if (!pattern_text.empty()) {
        const int r = t.fuchs_index();
        if (r < 0)
            throw hslab::NegativeFuchsIndexError("operator has negative Fuchs index");
        hslab::ZeroPattern zp;
        try {
            const std::vector<int> labels = hslab::parse_pattern(pattern_text);
            if (static_cast<int>(labels.size()) != r) {
                std::fprintf(stderr,
                             "usage error: --pattern needs exactly %d label(s) "
                             "for this operator\n",
                             r);
                return kUsage;
            }
            zp = hslab::ZeroPattern::from_a(n + r, labels);
        } catch (const hslab::Error& e) {
            std::fprintf(stderr, "usage error: bad --pattern: %s\n", e.what());
            return kUsage;
        }
        try {
            append_pair_rows(csv, hslab::solve_pair(t, zp, opts));
            ++converged;
        } catch (const hslab::NoConvergenceError& e) {
            std::fprintf(stderr, "no convergence: %s\n", e.what());
            append_failure_row(csv, zp);
            ++failed;
        }
    } else {
        const hslab::SolveReport rep = hslab::solve_all(t, n, opts);
        for (const hslab::StieltjesPair& p : rep.pairs) append_pair_rows(csv, p);
        for (const hslab::SolveFailure& f : rep.failures) {
            std::fprintf(stderr, "no convergence: %s\n", f.message.c_str());
            append_failure_row(csv, f.pattern);
        }
        if (rep.hypothesis_warning)
            std::fprintf(stderr, "warning: %s\n", rep.hypothesis_warning->c_str());
        converged = rep.pairs.size();
        failed = rep.failures.size();
    }

    write_file(out, csv);
    write_manifest(out, "solve", config_path,
                   {{"n", std::to_string(n)},
                    {"pattern", pattern_text},
                    {"tol", fmt17(tol)},
                    {"max_iter", std::to_string(max_iter)},
                    {"jobs", std::to_string(jobs)},
                    {"out", out}},
                   0);
    std::printf("wrote %s: %zu pair(s), %zu failure(s)\n", out.c_str(), converged,
                failed);
    return failed == 0 ? kOk : kIncomplete;
}

// --- verify ---

int run_verify(const std::string& config_path, int n, int jobs, bool inject,
               const std::string& out) {
    const hslab::DifferentialOperator t = hslab::load_operator_file(config_path);
    hslab::SolveOptions opts;
    opts.jobs = jobs;

    hslab::SolveReport lower = hslab::solve_all(t, n, opts);
    const hslab::SolveReport upper = hslab::solve_all(t, n + 1, opts);
    if (inject && !lower.pairs.empty()) {
        // Testing hook: plant a duplicated root so the checks must fail.
        std::vector<double>& fr = lower.pairs.front().f_roots;
        if (fr.size() >= 2)
            fr[0] = fr[1];
        else if (!lower.pairs.front().v_roots.empty())
            fr[0] = lower.pairs.front().v_roots[0];
    }

    const hslab::VerificationReport rep = hslab::verify_all(t, lower, upper);
    write_file(out, rep.to_json() + "\n");
    write_manifest(out, "verify", config_path,
                   {{"n", std::to_string(n)},
                    {"inject_fixture", inject ? "true" : "false"},
                    {"jobs", std::to_string(jobs)},
                    {"out", out}},
                   0);

    for (const hslab::CheckEntry& e : rep.checks)
        std::printf("%-26s %s  margin %.6g\n", e.name.c_str(),
                    e.pass ? "pass" : "FAIL", e.margin);
    std::printf("overall: %s\n", rep.overall() ? "pass" : "FAIL");

    if (!lower.failures.empty() || !upper.failures.empty()) return kIncomplete;
    return rep.overall() ? kOk : kFail;
}

// --- spectral ---

int run_spectral(const std::string& config_path, int nmax, int jobs,
                 const std::string& out) {
    const hslab::DifferentialOperator t = hslab::load_operator_file(config_path);
    if (t.fuchs_index() != 1) {
        std::fprintf(stderr, "spectral polynomials need Fuchs index 1; this operator has %d\n",
                     t.fuchs_index());
        return kFail;
    }
    hslab::SolveOptions opts;
    opts.jobs = jobs;

    std::vector<hslab::SpectralPolynomial> sps;
    for (int n = 1; n <= nmax; ++n) {
        const hslab::SolveReport rep = hslab::solve_all(t, n, opts);
        if (!rep.failures.empty()) {
            std::fprintf(stderr, "no convergence at degree %d: %s\n", n,
                         rep.failures.front().message.c_str());
            return kIncomplete;
        }
        sps.push_back(hslab::spectral_polynomial(t, rep));
    }

    std::string csv = "kind;n;index;value\n";
    for (const hslab::SpectralPolynomial& sp : sps) {
        const std::vector<double> roots = hslab::real_roots(sp.p).roots;
        for (std::size_t i = 0; i < roots.size(); ++i)
            csv += "root;" + std::to_string(sp.n) + ";" + std::to_string(i + 1) + ";" +
                   fmt17(roots[i]) + "\n";
    }
    bool all_pass = true;
    for (std::size_t i = 0; i + 1 < sps.size(); ++i) {
        const hslab::CheckEntry e = hslab::verify_spectral_interlacing(sps[i], sps[i + 1]);
        all_pass = all_pass && e.pass;
        csv += "verdict;" + std::to_string(sps[i].n) + ";0;" + (e.pass ? "1" : "0") + "\n";
    }

    write_file(out, csv);
    write_manifest(out, "spectral", config_path,
                   {{"nmax", std::to_string(nmax)},
                    {"jobs", std::to_string(jobs)},
                    {"out", out}},
                   0);
    std::printf("wrote %s: %d block(s), %d verdict(s)\n", out.c_str(), nmax,
                nmax > 0 ? nmax - 1 : 0);
    return all_pass ? kOk : kFail;
}

// --- oracle ---

int run_oracle(const std::string& config_path, int n, long long seed) {
    const hslab::DifferentialOperator t = hslab::load_operator_file(config_path);
    const hslab::SolveReport rep = hslab::solve_all(t, n);
    const hslab::OracleResult oracle =
        hslab::brute_force_oracle(t, n, static_cast<std::uint64_t>(seed));

    if (!oracle.complete) {
        std::printf("oracle found %zu of %d solutions; incomplete\n",
                    oracle.pairs.size(), oracle.expected);
        return kIncomplete;
    }

    std::vector<std::vector<double>> oracle_roots;
    for (const hslab::OraclePair& op : oracle.pairs) {
        std::vector<double> v =
            op.v.degree() >= 1 ? hslab::real_roots(op.v).roots : std::vector<double>{};
        const std::vector<double> f = hslab::real_roots(op.f).roots;
        v.insert(v.end(), f.begin(), f.end());
        oracle_roots.push_back(std::move(v));
    }

    std::size_t matched = 0;
    double worst = 0.0;
    std::vector<bool> used(oracle_roots.size(), false);
    for (const hslab::StieltjesPair& p : rep.pairs) {
        std::vector<double> mine = p.v_roots;
        mine.insert(mine.end(), p.f_roots.begin(), p.f_roots.end());
        double best = HUGE_VAL;
        std::size_t best_j = oracle_roots.size();
        for (std::size_t j = 0; j < oracle_roots.size(); ++j) {
            if (used[j] || oracle_roots[j].size() != mine.size()) continue;
            double d = 0.0;
            for (std::size_t i = 0; i < mine.size(); ++i)
                d = std::max(d, std::fabs(mine[i] - oracle_roots[j][i]));
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j == oracle_roots.size()) {
            std::printf("pattern [%s]: no oracle counterpart\n",
                        hslab::pattern_to_string(p.pattern.a).c_str());
            continue;
        }
        used[best_j] = true;
        ++matched;
        worst = std::max(worst, best);
        std::printf("pattern [%s]: max root distance %.3g\n",
                    hslab::pattern_to_string(p.pattern.a).c_str(), best);
    }

    std::printf("matched %zu of %zu (oracle expected %d)\n", matched, rep.pairs.size(),
                oracle.expected);
    const bool ok = rep.failures.empty() && matched == rep.pairs.size() &&
                    static_cast<int>(matched) == oracle.expected && worst < 1e-6;
    return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stieltjes/Van Vleck pair solver and verifier for "
                 "hyperbolicity-preserving differential operators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    const int default_jobs =
        std::max(1u, std::thread::hardware_concurrency());

    std::string config_path;
    long long seed = 0;
    int samples = 1000;
    int n = 1;
    int nmax = 1;
    int jobs = default_jobs;
    int max_iter = 5000;
    double tol = 1e-11;
    std::string pattern_text;
    std::string out;
    bool inject = false;

    CLI::App* diag = app.add_subcommand("diagnose", "Check the structural conditions "
                                                    "and hunt for a stability witness");
    diag->add_option("config", config_path, "operator config JSON")->required();
    diag->add_option("--samples", samples, "falsifier sample budget")
        ->default_val(1000);
    diag->add_option("--seed", seed, "falsifier RNG seed")->default_val(0);

    CLI::App* solve = app.add_subcommand("solve", "Compute all (v, f) pairs at one degree");
    solve->add_option("config", config_path, "operator config JSON")->required();
    solve->add_option("--n", n, "Stieltjes degree")->required()->check(CLI::PositiveNumber);
    solve->add_option("--pattern", pattern_text, "a-labels of a single pattern, e.g. \"1,3\"");
    solve->add_option("--tol", tol, "root-vector stop tolerance")->default_val(1e-11);
    solve->add_option("--max-iter", max_iter, "iteration budget")->default_val(5000);
    solve->add_option("--jobs", jobs, "worker threads")->default_val(default_jobs);
    solve->add_option("--out", out, "CSV output path")->required();

    CLI::App* verify = app.add_subcommand("verify", "Run the full structural check suite");
    verify->add_option("config", config_path, "operator config JSON")->required();
    verify->add_option("--n", n, "Stieltjes degree")->required()->check(CLI::PositiveNumber);
    verify->add_option("--jobs", jobs, "worker threads")->default_val(default_jobs);
    verify->add_option("--out", out, "JSON report path")->required();
    verify->add_flag("--inject-fixture", inject,
                     "corrupt one converged pair first (harness self-test)");

    CLI::App* spectral = app.add_subcommand("spectral", "Spectral polynomial roots and "
                                                        "interlacing verdicts");
    spectral->add_option("config", config_path, "operator config JSON")->required();
    spectral->add_option("--nmax", nmax, "largest degree")->required()->check(CLI::PositiveNumber);
    spectral->add_option("--jobs", jobs, "worker threads")->default_val(default_jobs);
    spectral->add_option("--out", out, "CSV output path")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "Cross-check the iteration against "
                                                    "the brute-force solver");
    oracle->add_option("config", config_path, "operator config JSON")->required();
    oracle->add_option("--n", n, "Stieltjes degree")->required()->check(CLI::PositiveNumber);
    oracle->add_option("--seed", seed, "multistart RNG seed")->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (diag->parsed()) return run_diagnose(config_path, samples, seed);
        if (solve->parsed())
            return run_solve(config_path, n, pattern_text, tol, max_iter,
                             resolve_jobs(jobs), out);
        if (verify->parsed())
            return run_verify(config_path, n, resolve_jobs(jobs), inject, out);
        if (spectral->parsed())
            return run_spectral(config_path, nmax, resolve_jobs(jobs), out);
        if (oracle->parsed()) {
            if (n > 3) {
                std::fprintf(stderr, "usage error: oracle supports --n up to 3\n");
                return kUsage;
            }
            return run_oracle(config_path, n, seed);
        }
    } catch (const hslab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kUsage;
    } catch (const hslab::NoConvergenceError& e) {
        std::fprintf(stderr, "no convergence: %s\n", e.what());
        return kIncomplete;
    } catch (const hslab::FuchsIndexNotOneError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFail;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFail;
    }
    return kUsage;
}
