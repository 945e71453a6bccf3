// rcpd: experiment driver for the relativistic two-step integrators.
//
//   rcpd convergence  [--problem p1,p2] [--method M1,M2] [--kmin k] [--kmax k] [--tau-end T]
//   rcpd longrun      --problem p --method M --h h [--tau-end T] [--stride s]
//   rcpd volume       --problem p [--h h] [--n-points n] [--seed s]
//   rcpd list-problems
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcpd/errors.hpp"
#include "rcpd/harness.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

rcpd::ProblemId to_problem(const std::string& s) {
    if (auto id = rcpd::parse_problem(s)) return *id;
    throw std::invalid_argument("unknown problem '" + s + "' (expected tokamak, quadratic, nonquadratic, constB, strongB)");
}

rcpd::MethodId to_method(const std::string& s) {
    if (auto id = rcpd::parse_method(s)) return *id;
    throw std::invalid_argument("unknown method '" + s + "' (expected M1, M2, M3, M4)");
}

// Writes through `emit` into --out, or stdout when no path was given.
template <typename Emit>
void with_output(const std::string& path, Emit&& emit) {
    if (path.empty() || path == "-") {
        emit(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file '" + path + "'");
    emit(os);
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-step symmetric integrators for relativistic charged-particle dynamics"};
    app.set_version_flag("--version", std::string(rcpd::kVersion));
    app.require_subcommand(1);

    std::string out_path;
    double eps = rcpd::kDefaultStrongFieldEpsilon;
    double ref_rtol = 1e-12, ref_atol = 1e-12;

    // convergence
    auto* conv = app.add_subcommand("convergence", "global errors at tau_end over h = 2^-k, with order fits");
    std::vector<std::string> conv_problems{"tokamak", "quadratic", "nonquadratic", "constB"};
    std::vector<std::string> conv_methods{"M1", "M2", "M3", "M4"};
    int kmin = -1, kmax = -1;
    double conv_tau_end = 1.0;
    conv->add_option("--problem", conv_problems, "comma-separated problem ids")->delimiter(',');
    conv->add_option("--method", conv_methods, "comma-separated methods")->delimiter(',');
    conv->add_option("--kmin", kmin, "smallest k (default 4, strongB 8)");
    conv->add_option("--kmax", kmax, "largest k (default 9, strongB 14)");
    conv->add_option("--tau-end", conv_tau_end, "final proper time")->capture_default_str();
    conv->add_option("--eps", eps, "strongB field scale epsilon")->capture_default_str();
    conv->add_option("--ref-rtol", ref_rtol, "reference solver rtol")->capture_default_str();
    conv->add_option("--ref-atol", ref_atol, "reference solver atol")->capture_default_str();
    conv->add_option("--out", out_path, "output CSV (default stdout)");

    // longrun
    auto* lr = app.add_subcommand("longrun", "energy and mass-shell errors over a long window");
    // "--h" is the step size, so help is reachable as --help only.
    lr->set_help_flag("--help", "print this help message and exit");
    std::string lr_problem, lr_method;
    rcpd::RunConfig run;
    lr->add_option("--problem", lr_problem, "problem id")->required();
    lr->add_option("--method", lr_method, "M1..M4")->required();
    lr->add_option("--h", run.h, "step size")->required();
    lr->add_option("--tau-end", run.tau_end, "final proper time (1e5 for the full window)")->capture_default_str();
    lr->add_option("--stride", run.stride, "record every n-th step (default: <= 1e5 rows)");
    lr->add_option("--eps", eps, "strongB field scale epsilon")->capture_default_str();
    lr->add_option("--out", out_path, "output CSV (default stdout)");

    // volume
    auto* vol = app.add_subcommand("volume", "Jacobian determinant of the M1 map at seeded phase points");
    vol->set_help_flag("--help", "print this help message and exit");
    std::string vol_problem;
    rcpd::VolumeConfig vcfg;
    vol->add_option("--problem", vol_problem, "problem id")->required();
    vol->add_option("--h", vcfg.h, "step size")->capture_default_str();
    vol->add_option("--n-points", vcfg.n_points, "number of phase points")->capture_default_str();
    vol->add_option("--seed", vcfg.seed, "random seed")->capture_default_str();
    vol->add_option("--eps", eps, "strongB field scale epsilon")->capture_default_str();
    vol->add_option("--out", out_path, "output CSV (default stdout)");

    auto* list = app.add_subcommand("list-problems", "print the problem catalog");
    list->add_option("--eps", eps, "strongB field scale epsilon")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (conv->parsed()) {
            rcpd::ConvergenceConfig cfg;
            cfg.problems.clear();
            for (const auto& p : conv_problems) cfg.problems.push_back(to_problem(p));
            cfg.methods.clear();
            for (const auto& m : conv_methods) cfg.methods.push_back(to_method(m));
            if (kmin >= 0) cfg.kmin = kmin;
            if (kmax >= 0) cfg.kmax = kmax;
            cfg.tau_end = conv_tau_end;
            cfg.epsilon = eps;
            cfg.ref = {ref_rtol, ref_atol};
            cfg.validate();
            const auto table = rcpd::run_convergence(cfg);
            with_output(out_path, [&](std::ostream& os) { rcpd::write_convergence_csv(os, cfg, table); });
            return table.any_failure() ? kExitNumerical : 0;
        }
        if (lr->parsed()) {
            run.problem = to_problem(lr_problem);
            run.method = to_method(lr_method);
            run.epsilon = eps;
            if (lr->count("--stride") && run.stride < 1) throw std::invalid_argument("--stride must be >= 1");
            run.validate();
            const auto result = rcpd::run_longrun(run);
            with_output(out_path, [&](std::ostream& os) { rcpd::write_longrun_csv(os, run, result); });
            return 0;
        }
        if (vol->parsed()) {
            vcfg.problem = to_problem(vol_problem);
            vcfg.epsilon = eps;
            vcfg.validate();
            const auto rows = rcpd::run_volume(vcfg);
            with_output(out_path, [&](std::ostream& os) { rcpd::write_volume_csv(os, vcfg, rows); });
            return 0;
        }
        if (list->parsed()) {
            rcpd::write_problem_table(std::cout, eps);
            return 0;
        }
    } catch (const rcpd::NumericalError& e) {
        std::cerr << "numerical failure";
        if (e.step) std::cerr << " at step " << *e.step;
        std::cerr << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
