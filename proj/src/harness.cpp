#include "rcpd/harness.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rcpd/diagnostics.hpp"
#include "rcpd/errors.hpp"

namespace rcpd {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

namespace {

void write_metadata(std::ostream& os, const char* command) {
    os << "# tool=rcpd\n# version=" << kVersion << "\n# command=" << command << "\n";
}

std::string join_problems(const std::vector<ProblemId>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ';';
        out += problem_name(ids[i]);
    }
    return out;
}

std::string join_methods(const std::vector<MethodId>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ';';
        out += method_name(ids[i]);
    }
    return out;
}

void check_tolerances(const ReferenceOptions& ref) {
    if (!(ref.rtol >= 1e-14 && ref.rtol <= 1e-6) || !(ref.atol >= 1e-14 && ref.atol <= 1e-6))
        throw std::invalid_argument("reference tolerances must lie in [1e-14, 1e-6]");
}

void check_epsilon(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("--eps must be positive");
}

}  // namespace

void RunConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("--h must be positive");
    if (!(tau_end >= h) || !std::isfinite(tau_end)) throw std::invalid_argument("--tau-end must be >= h");
    if (stride < 0) throw std::invalid_argument("--stride must be >= 1");
    check_epsilon(epsilon);
    check_tolerances(ref);
}

void ConvergenceConfig::validate() const {
    if (problems.empty()) throw std::invalid_argument("no problems selected");
    if (methods.empty()) throw std::invalid_argument("no methods selected");
    if (kmin && *kmin < 0) throw std::invalid_argument("--kmin must be >= 0");
    if (kmin && kmax && *kmax < *kmin + 2)
        throw std::invalid_argument("--kmax must be at least --kmin + 2 (three points for a slope fit)");
    if (!(tau_end > 0.0) || !std::isfinite(tau_end)) throw std::invalid_argument("--tau-end must be positive");
    for (ProblemId p : problems) {
        const auto [lo, hi] = k_range(*this, p);
        if (hi < lo + 2) throw std::invalid_argument("k range must contain at least three step sizes");
        if (std::ldexp(1.0, -lo) > tau_end) throw std::invalid_argument("largest step exceeds --tau-end");
    }
    check_epsilon(epsilon);
    check_tolerances(ref);
}

bool ConvergenceTable::any_failure() const {
    for (const auto& r : rows)
        if (!r.message.empty()) return true;
    for (const auto& s : slopes)
        if (!s.message.empty()) return true;
    return false;
}

std::pair<int, int> k_range(const ConvergenceConfig& cfg, ProblemId problem) {
    const bool strong = problem == ProblemId::StrongB;
    return {cfg.kmin.value_or(strong ? 8 : 4), cfg.kmax.value_or(strong ? 14 : 9)};
}

ConvergenceTable run_convergence(const ConvergenceConfig& cfg) {
    cfg.validate();
    ConvergenceTable table;
    for (ProblemId pid : cfg.problems) {
        const Problem problem = make_problem(pid, cfg.epsilon);
        const auto [lo, hi] = k_range(cfg, pid);
        std::optional<State> reference;
        std::string ref_failure;
        try {
            reference = reference_solution(problem, cfg.tau_end, cfg.ref);
        } catch (const NumericalError& e) {
            ref_failure = std::string("reference: ") + e.what();
        }
        for (MethodId mid : cfg.methods) {
            std::vector<double> hs, ex, ev;
            for (int k = lo; k <= hi; ++k) {
                ConvergenceRow row{pid, mid, std::ldexp(1.0, -k), 0.0, 0.0, {}};
                if (!reference) {
                    row.message = ref_failure;
                } else {
                    try {
                        const auto steps = static_cast<std::int64_t>(std::llround(cfg.tau_end / row.h));
                        const Trajectory traj = integrate(problem, mid, row.h, cfg.tau_end, steps);
                        const RelativeErrors err = relative_errors(traj.final_state, *reference);
                        row.error_x = err.error_x;
                        row.error_v = err.error_v;
                        hs.push_back(row.h);
                        ex.push_back(err.error_x);
                        ev.push_back(err.error_v);
                    } catch (const NumericalError& e) {
                        row.message = e.what();
                        if (e.step) row.message += " (step " + std::to_string(*e.step) + ")";
                    }
                }
                table.rows.push_back(std::move(row));
            }
            SlopeRow slope{pid, mid, 0.0, 0.0, {}};
            try {
                slope.slope_x = fit_order(hs, ex);
                slope.slope_v = fit_order(hs, ev);
            } catch (const std::invalid_argument& e) {
                slope.message = std::string("slope fit: ") + e.what();
            }
            table.slopes.push_back(std::move(slope));
        }
    }
    return table;
}

namespace {

std::string csv_message(std::string msg) {
    for (char& c : msg)
        if (c == ',' || c == '\n' || c == '"') c = ' ';
    return msg;
}

}  // namespace

void write_convergence_csv(std::ostream& os, const ConvergenceConfig& cfg, const ConvergenceTable& table) {
    write_metadata(os, "convergence");
    os << "# problems=" << join_problems(cfg.problems) << "\n";
    os << "# methods=" << join_methods(cfg.methods) << "\n";
    for (ProblemId p : cfg.problems) {
        const auto [lo, hi] = k_range(cfg, p);
        os << "# k_range." << problem_name(p) << "=" << lo << ".." << hi << "\n";
    }
    os << "# tau_end=" << format_real(cfg.tau_end) << "\n";
    os << "# eps=" << format_real(cfg.epsilon) << "\n";
    os << "# ref_rtol=" << format_real(cfg.ref.rtol) << "\n# ref_atol=" << format_real(cfg.ref.atol) << "\n";
    os << "# slope rows carry the fitted order of error_x and error_v in those columns\n";
    os << "kind,problem,method,h,error_x,error_v,message\n";
    for (const auto& r : table.rows) {
        os << "data," << problem_name(r.problem) << ',' << method_name(r.method) << ',' << format_real(r.h)
           << ',';
        if (r.message.empty())
            os << format_real(r.error_x) << ',' << format_real(r.error_v) << ",\n";
        else
            os << ",," << csv_message(r.message) << "\n";
    }
    for (const auto& s : table.slopes) {
        os << "slope," << problem_name(s.problem) << ',' << method_name(s.method) << ",,";
        if (s.message.empty())
            os << format_real(s.slope_x) << ',' << format_real(s.slope_v) << ",\n";
        else
            os << ",," << csv_message(s.message) << "\n";
    }
}

std::int64_t effective_stride(const RunConfig& cfg) {
    if (cfg.stride >= 1) return cfg.stride;
    const auto steps = static_cast<std::int64_t>(std::llround(cfg.tau_end / cfg.h));
    return std::max<std::int64_t>(1, (steps + kMaxLongrunSamples - 1) / kMaxLongrunSamples);
}

LongrunResult run_longrun(const RunConfig& cfg) {
    cfg.validate();
    const Problem problem = make_problem(cfg.problem, cfg.epsilon);
    LongrunResult out;
    out.trajectory = integrate(problem, cfg.method, cfg.h, cfg.tau_end, effective_stride(cfg));
    out.max_e_H = out.trajectory.max_e_H;
    out.max_e_M = out.trajectory.max_e_M;
    const auto& samples = out.trajectory.samples;
    if (samples.size() >= 10) {
        std::vector<double> t, eh, em;
        for (const auto& s : samples) {
            t.push_back(s.tau);
            eh.push_back(s.e_H);
            em.push_back(s.e_M);
        }
        out.drift_e_H = drift_slope(t, eh);
        out.drift_e_M = drift_slope(t, em);
    }
    return out;
}

void write_longrun_csv(std::ostream& os, const RunConfig& cfg, const LongrunResult& result) {
    write_metadata(os, "longrun");
    os << "# problem=" << problem_name(cfg.problem) << "\n# method=" << method_name(cfg.method) << "\n";
    os << "# h=" << format_real(cfg.h) << "\n# tau_end=" << format_real(cfg.tau_end) << "\n";
    os << "# stride=" << effective_stride(cfg) << "\n# eps=" << format_real(cfg.epsilon) << "\n";
    if (cfg.tau_end < kFullLongrunTauEnd)
        os << "# note=desk-scale window; the full window is tau_end=" << format_real(kFullLongrunTauEnd)
           << "\n";
    os << "tau,e_H,e_M\n";
    for (const auto& s : result.trajectory.samples)
        os << format_real(s.tau) << ',' << format_real(s.e_H) << ',' << format_real(s.e_M) << "\n";
    os << "# summary max_e_H=" << format_real(result.max_e_H) << "\n";
    os << "# summary max_e_M=" << format_real(result.max_e_M) << "\n";
    os << "# summary drift_e_H=" << format_real(result.drift_e_H) << "\n";
    os << "# summary drift_e_M=" << format_real(result.drift_e_M) << "\n";
}

void VolumeConfig::validate() const {
    if (n_points < 1) throw std::invalid_argument("--n-points must be >= 1");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("--h must be positive");
    check_epsilon(epsilon);
}

std::vector<State> volume_points(const Problem& problem, int n_points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-0.5, 0.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<State> pts;
    pts.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        State s;
        for (int c = 0; c < 3; ++c) s.x[c] = problem.x0[c] + offset(rng);
        s.tbar = unit(rng);
        for (int c = 0; c < 3; ++c) s.v[c] = problem.v0[c] + offset(rng);
        s.gamma = std::sqrt(1.0 + dot(s.v, s.v));
        pts.push_back(s);
    }
    return pts;
}

std::vector<VolumeRow> run_volume(const VolumeConfig& cfg) {
    cfg.validate();
    const Problem problem = make_problem(cfg.problem, cfg.epsilon);
    std::vector<VolumeRow> rows;
    int i = 0;
    for (const State& p : volume_points(problem, cfg.n_points, cfg.seed)) {
        const double det = volume_jacobian_det(problem, p, cfg.h);
        rows.push_back({i++, det, std::fabs(det - 1.0)});
    }
    return rows;
}

void write_volume_csv(std::ostream& os, const VolumeConfig& cfg, const std::vector<VolumeRow>& rows) {
    write_metadata(os, "volume");
    os << "# problem=" << problem_name(cfg.problem) << "\n# method=M1\n# h=" << format_real(cfg.h) << "\n";
    os << "# n_points=" << cfg.n_points << "\n# seed=" << cfg.seed << "\n# eps=" << format_real(cfg.epsilon)
       << "\n# fd_perturbation=" << format_real(kJacobianPerturbation) << "\n";
    os << "point_index,det,abs_dev\n";
    for (const auto& r : rows) os << r.index << ',' << format_real(r.det) << ',' << format_real(r.abs_dev) << "\n";
}

void write_problem_table(std::ostream& os, double epsilon) {
    auto vec = [](const Vec3& v) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", v[0], v[1], v[2]);
        return std::string(buf);
    };
    char line[512];
    std::snprintf(line, sizeof line, "%-13s %-38s %-28s %-10s %s\n", "id", "x0", "v0", "gamma0", "fields");
    os << line;
    for (ProblemId id : all_problem_ids()) {
        const Problem p = make_problem(id, epsilon);
        std::string desc = p.description;
        if (id == ProblemId::StrongB) desc += " (eps=" + format_real(p.epsilon) + ")";
        std::snprintf(line, sizeof line, "%-13s %-38s %-28s %-10.8f %s\n", std::string(problem_name(id)).c_str(),
                      vec(p.x0).c_str(), vec(p.v0).c_str(), p.gamma0, desc.c_str());
        os << line;
    }
}

}  // namespace rcpd
