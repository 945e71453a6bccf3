#include "rcpd/fieldmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "rcpd/errors.hpp"

namespace rcpd {

namespace {

struct PotentialValue {
    double U;
    Vec3 E;
};

// U = x1^2 + 2 x2^2 + 3 x3^2 - x1
PotentialValue quadratic_potential(const Vec3& x) {
    return {x[0] * x[0] + 2.0 * x[1] * x[1] + 3.0 * x[2] * x[2] - x[0],
            {1.0 - 2.0 * x[0], -4.0 * x[1], -6.0 * x[2]}};
}

// U = (x1^3 - x2^3 + x1^4/5 + x2^4 + x3^4) / 10
PotentialValue quartic_potential(const Vec3& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    const double U = (x1 * x1 * x1 - x2 * x2 * x2 + x1 * x1 * x1 * x1 / 5.0 + x2 * x2 * x2 * x2 +
                      x3 * x3 * x3 * x3) /
                     10.0;
    const Vec3 grad{(3.0 * x1 * x1 + 0.8 * x1 * x1 * x1) / 10.0,
                    (-3.0 * x2 * x2 + 4.0 * x2 * x2 * x2) / 10.0, 0.4 * x3 * x3 * x3};
    return {U, -1.0 * grad};
}

Vec3 trig_magnetic(const Vec3& x) {
    return {std::cos(x[1]) - x[0], 1.0 + std::sin(x[2]), std::cos(x[0]) + x[2]};
}

Problem with_initial(ProblemId id, double eps, Vec3 x0, Vec3 v0, std::string description) {
    Problem p;
    p.id = id;
    p.epsilon = eps;
    p.x0 = x0;
    p.tbar0 = 0.0;
    p.v0 = v0;
    p.gamma0 = std::sqrt(1.0 + dot(v0, v0));
    p.description = std::move(description);
    return p;
}

}  // namespace

Problem make_problem(ProblemId id, double epsilon) {
    switch (id) {
        case ProblemId::Tokamak:
            return with_initial(id, 1.0, {1.05, 0.0, 0.0}, {2.1e-3, 4.3e-4, 0.0},
                                "tokamak magnetic field, no electric field");
        case ProblemId::Quadratic:
            return with_initial(id, 1.0, {1.0 / 3.0, 1.0 / 4.0, 1.0 / 2.0},
                                {2.0 / 5.0, 2.0 / 3.0, 1.0 / 6.0},
                                "quadratic electric potential, trigonometric B/2");
        case ProblemId::NonQuadratic:
            return with_initial(id, 1.0, {0.0, 1.0, 0.1}, {0.09, 0.55, 0.2},
                                "quartic electric potential, trigonometric B");
        case ProblemId::ConstB:
            return with_initial(id, 1.0, {0.0, 1.0, 0.1}, {0.09, 0.55, 0.3},
                                "constant B = (0,0,1), quartic electric potential");
        case ProblemId::StrongB:
            if (!(epsilon > 0.0) || !std::isfinite(epsilon))
                throw std::invalid_argument("epsilon must be a positive finite number");
            return with_initial(id, epsilon, {0.0, 1.0, 0.1}, {0.09, 0.55, 0.3},
                                "strong constant B = (0,0,1)/eps, quadratic electric potential");
    }
    throw std::invalid_argument("unknown problem id");
}

std::vector<Problem> catalog() {
    std::vector<Problem> out;
    for (ProblemId id : all_problem_ids()) out.push_back(make_problem(id));
    return out;
}

FieldSample eval_fields(const Problem& problem, const Vec3& x) {
    FieldSample s;
    switch (problem.id) {
        case ProblemId::Tokamak: {
            const double R2 = x[0] * x[0] + x[1] * x[1];
            const double R = std::sqrt(R2);
            if (!(R > 0.0)) throw FieldDomainError("tokamak field is singular on the axis R = 0");
            s.B = {-(2.0 * x[1] + x[0] * x[2]) / (2.0 * R2), (2.0 * x[0] - x[1] * x[2]) / (2.0 * R2),
                   (R - 1.0) / (2.0 * R)};
            return s;
        }
        case ProblemId::Quadratic: {
            const auto pot = quadratic_potential(x);
            s.U = pot.U;
            s.E = pot.E;
            s.B = 0.5 * trig_magnetic(x);
            return s;
        }
        case ProblemId::NonQuadratic: {
            const auto pot = quartic_potential(x);
            s.U = pot.U;
            s.E = pot.E;
            s.B = trig_magnetic(x);
            return s;
        }
        case ProblemId::ConstB: {
            const auto pot = quartic_potential(x);
            s.U = pot.U;
            s.E = pot.E;
            s.B = {0.0, 0.0, 1.0};
            return s;
        }
        case ProblemId::StrongB: {
            const auto pot = quadratic_potential(x);
            s.U = pot.U;
            s.E = pot.E;
            s.B = {0.0, 0.0, 1.0 / problem.epsilon};
            return s;
        }
    }
    throw std::invalid_argument("unknown problem id");
}

LorentzInvariants lorentz_invariants(const FieldSample& s) {
    return {dot(s.E, s.E) - dot(s.B, s.B), -dot(s.E, s.B)};
}

std::string_view problem_name(ProblemId id) {
    switch (id) {
        case ProblemId::Tokamak: return "tokamak";
        case ProblemId::Quadratic: return "quadratic";
        case ProblemId::NonQuadratic: return "nonquadratic";
        case ProblemId::ConstB: return "constB";
        case ProblemId::StrongB: return "strongB";
    }
    return "unknown";
}

std::optional<ProblemId> parse_problem(std::string_view name) {
    for (ProblemId id : all_problem_ids())
        if (problem_name(id) == name) return id;
    return std::nullopt;
}

std::vector<ProblemId> all_problem_ids() {
    return {ProblemId::Tokamak, ProblemId::Quadratic, ProblemId::NonQuadratic, ProblemId::ConstB,
            ProblemId::StrongB};
}

}  // namespace rcpd
