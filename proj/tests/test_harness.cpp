#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "rcpd/harness.hpp"

using namespace rcpd;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const std::regex kReal(R"(-?[0-9]\.[0-9]{16}e[+-][0-9]{2,3})");

std::string convergence_csv(const ConvergenceConfig& cfg) {
    std::ostringstream os;
    write_convergence_csv(os, cfg, run_convergence(cfg));
    return os.str();
}

int run_cli(const std::string& args, const std::string& capture = "/dev/null") {
    const std::string cmd = std::string(RCPD_CLI_PATH) + " " + args + " > " + capture + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("real formatting") {
    CHECK(format_real(1.0) == "1.0000000000000000e+00");
    CHECK(format_real(-0.125) == "-1.2500000000000000e-01");
    CHECK(format_real(6.02e23) == "6.0200000000000000e+23");
    CHECK(std::stod(format_real(0.1)) == 0.1);
}

TEST_CASE("config validation") {
    RunConfig run;
    CHECK_NOTHROW(run.validate());
    run.h = 0.0;
    CHECK_THROWS_AS(run.validate(), std::invalid_argument);
    run = RunConfig{};
    run.tau_end = 0.01;
    CHECK_THROWS_AS(run.validate(), std::invalid_argument);
    run = RunConfig{};
    run.epsilon = -1;
    CHECK_THROWS_AS(run.validate(), std::invalid_argument);
    run = RunConfig{};
    run.ref.rtol = 1e-3;
    CHECK_THROWS_AS(run.validate(), std::invalid_argument);

    ConvergenceConfig conv;
    CHECK_NOTHROW(conv.validate());
    conv.kmin = 5;
    conv.kmax = 6;
    CHECK_THROWS_AS(conv.validate(), std::invalid_argument);
    conv = ConvergenceConfig{};
    conv.methods.clear();
    CHECK_THROWS_AS(conv.validate(), std::invalid_argument);

    VolumeConfig vol;
    vol.n_points = 0;
    CHECK_THROWS_AS(vol.validate(), std::invalid_argument);
}

TEST_CASE("convergence step ranges") {
    ConvergenceConfig cfg;
    CHECK(k_range(cfg, ProblemId::Quadratic) == std::pair{4, 9});
    CHECK(k_range(cfg, ProblemId::StrongB) == std::pair{8, 14});
    cfg.kmin = 3;
    CHECK(k_range(cfg, ProblemId::StrongB) == std::pair{3, 14});
}

TEST_CASE("convergence CSV layout") {
    const ConvergenceConfig cfg;
    const std::string csv = convergence_csv(cfg);
    const auto lines = lines_of(csv);
    std::size_t data = 0, slope = 0, header_at = 0;
    bool in_meta = true;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& l = lines[i];
        if (in_meta) {
            if (l.rfind("# ", 0) == 0) {
                if (l.find('=') == std::string::npos) continue;
                CHECK(l.find(' ', 2) == std::string::npos);  // "# key=value"
                continue;
            }
            CHECK(l == "kind,problem,method,h,error_x,error_v,message");
            header_at = i;
            in_meta = false;
            continue;
        }
        const auto f = split(l);
        REQUIRE(f.size() == 7);
        if (f[0] == "data") {
            ++data;
            CHECK(std::regex_match(f[3], kReal));
            CHECK(std::regex_match(f[4], kReal));
            CHECK(std::regex_match(f[5], kReal));
            CHECK(f[6].empty());
        } else {
            CHECK(f[0] == "slope");
            ++slope;
            CHECK(f[3].empty());
            CHECK(std::regex_match(f[4], kReal));
            CHECK(std::regex_match(f[5], kReal));
        }
    }
    CHECK(header_at > 0);
    CHECK(data == 96);
    CHECK(slope == 16);
    CHECK(csv.find("# version=" + std::string(kVersion)) != std::string::npos);
    CHECK(csv.find("# k_range.quadratic=4..9") != std::string::npos);
    CHECK(csv.find("# tau_end=1.0000000000000000e+00") != std::string::npos);
}

TEST_CASE("convergence rerun is byte-identical") {
    ConvergenceConfig cfg;
    cfg.problems = {ProblemId::NonQuadratic};
    cfg.methods = {MethodId::M2, MethodId::M4};
    CHECK(convergence_csv(cfg) == convergence_csv(cfg));
}

TEST_CASE("convergence records failures and keeps going") {
    ConvergenceConfig cfg;
    cfg.problems = {ProblemId::StrongB};
    cfg.methods = {MethodId::M1, MethodId::M4};
    cfg.kmin = 2;  // h = 1/4: kernel argument 12.5 > pi/2 for M1
    cfg.kmax = 5;
    const auto table = run_convergence(cfg);
    CHECK(table.any_failure());
    REQUIRE(table.rows.size() == 8);
    CHECK_FALSE(table.rows[0].message.empty());
    for (std::size_t i = 4; i < 8; ++i) CHECK(table.rows[i].message.empty());  // M4 has no pole guard
    std::ostringstream os;
    write_convergence_csv(os, cfg, table);
    for (const auto& l : lines_of(os.str()))
        if (l.rfind("data,strongB,M1,2.5", 0) == 0) CHECK(split(l).back().find("pi/2") != std::string::npos);
}

TEST_CASE("longrun CSV") {
    RunConfig cfg;
    cfg.problem = ProblemId::Quadratic;
    cfg.method = MethodId::M3;
    cfg.h = 0.1;
    cfg.tau_end = 20.0;
    cfg.stride = 10;
    const auto result = run_longrun(cfg);
    std::ostringstream os;
    write_longrun_csv(os, cfg, result);
    const auto lines = lines_of(os.str());
    std::size_t rows = 0;
    bool header = false;
    for (const auto& l : lines) {
        if (l == "tau,e_H,e_M") {
            header = true;
            continue;
        }
        if (l.rfind('#', 0) == 0) continue;
        const auto f = split(l);
        REQUIRE(f.size() == 3);
        for (const auto& x : f) CHECK(std::regex_match(x, kReal));
        ++rows;
    }
    CHECK(header);
    CHECK(rows == 21);  // n = 0, 10, ..., 200
    CHECK(os.str().find("# summary max_e_H=" + format_real(result.max_e_H)) != std::string::npos);
    CHECK(os.str().find("# note=desk-scale window") != std::string::npos);
    CHECK(os.str().find("# stride=10") != std::string::npos);
}

TEST_CASE("automatic longrun stride caps the row count") {
    RunConfig cfg;
    cfg.h = 0.01;
    cfg.tau_end = 1e4;  // 1e6 steps
    CHECK(effective_stride(cfg) == 10);
    cfg.h = 0.1;
    CHECK(effective_stride(cfg) == 1);
    cfg.stride = 3;
    CHECK(effective_stride(cfg) == 3);
}

TEST_CASE("volume rows are seeded and reproducible") {
    VolumeConfig cfg;
    cfg.problem = ProblemId::ConstB;
    cfg.n_points = 5;
    cfg.seed = 42;
    auto render = [&] {
        std::ostringstream os;
        write_volume_csv(os, cfg, run_volume(cfg));
        return os.str();
    };
    const std::string a = render();
    CHECK(a == render());
    CHECK(a.find("point_index,det,abs_dev\n") != std::string::npos);
    CHECK(a.find("# seed=42") != std::string::npos);
    cfg.seed = 43;
    CHECK(a != render());
    const auto pts = volume_points(make_problem(ProblemId::ConstB), 50, 1);
    for (const auto& p : pts) CHECK(p.gamma * p.gamma - dot(p.v, p.v) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("problem table") {
    std::ostringstream os;
    write_problem_table(os);
    const std::string t = os.str();
    CHECK(t.find("tokamak") != std::string::npos);
    CHECK(t.find("strongB") != std::string::npos);
    for (const auto& l : lines_of(t))
        if (l.rfind("nonquadratic", 0) == 0) CHECK(l.find("(0.09, 0.55, 0.2)") != std::string::npos);
}

TEST_CASE("command-line exit codes") {
    CHECK(run_cli("list-problems") == 0);
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("bogus") == 1);
    CHECK(run_cli("volume --problem quadratic --n-points 0") == 1);
    CHECK(run_cli("volume --problem nowhere") == 1);
    CHECK(run_cli("longrun --problem quadratic --method M9 --h 0.1") == 1);
    CHECK(run_cli("longrun --problem quadratic --method M1 --h 0.1 --unknown-flag 1") == 1);
    CHECK(run_cli("longrun --problem quadratic --method M1 --h 0.1 --tau-end 10 --stride 0") == 1);
    CHECK(run_cli("convergence --problem strongB --method M1 --kmin 2 --kmax 5") == 2);
    // h|B|/2 = 5 is past the kernel pole
    CHECK(run_cli("longrun --problem strongB --method M1 --h 0.1 --tau-end 1") == 2);
}

TEST_CASE("command-line output files are byte-identical across runs") {
    const std::string a = "rcpd_cli_a.csv", b = "rcpd_cli_b.csv";
    REQUIRE(run_cli("volume --problem tokamak --n-points 7 --seed 3 --out " + a) == 0);
    REQUIRE(run_cli("volume --problem tokamak --n-points 7 --seed 3 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("point_index,det,abs_dev") != std::string::npos);
    REQUIRE(run_cli("longrun --problem constB --method M2 --h 0.1 --tau-end 10", a) == 0);
    REQUIRE(run_cli("longrun --problem constB --method M2 --h 0.1 --tau-end 10", b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("tau,e_H,e_M") != std::string::npos);
    std::remove(a.c_str());
    std::remove(b.c_str());
}
