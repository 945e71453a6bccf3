#pragma once

// Static electromagnetic environments and the five-problem test catalog.
//
// All quantities are in normalized units (rest mass, charge and speed of
// light equal to one). A problem supplies B(x), E(x) = -grad U(x) and U(x)
// in closed form together with its initial state.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcpd/linalg.hpp"

namespace rcpd {

struct FieldSample {
    Vec3 B{};
    Vec3 E{};
    double U = 0.0;
};

enum class ProblemId { Tokamak, Quadratic, NonQuadratic, ConstB, StrongB };

inline constexpr double kDefaultStrongFieldEpsilon = 0.01;

struct Problem {
    ProblemId id = ProblemId::Tokamak;
    double epsilon = 1.0;  // only P5 uses it; B is scaled by 1/epsilon there
    Vec3 x0{};
    double tbar0 = 0.0;
    Vec3 v0{};
    double gamma0 = 1.0;
    std::string description;
};

/// Builds one catalog problem. `epsilon` is honoured for StrongB only and must be > 0.
Problem make_problem(ProblemId id, double epsilon = kDefaultStrongFieldEpsilon);

/// All five problems, P1..P5 in order, P5 at the default epsilon.
std::vector<Problem> catalog();

/// B, E and U at position x. Throws FieldDomainError on the tokamak axis.
FieldSample eval_fields(const Problem& problem, const Vec3& x);

struct LorentzInvariants {
    double r1 = 0.0;  // |E|^2 - |B|^2
    double r2 = 0.0;  // -E.B
};

LorentzInvariants lorentz_invariants(const FieldSample& s);

/// CLI identifiers: "tokamak", "quadratic", "nonquadratic", "constB", "strongB".
std::string_view problem_name(ProblemId id);
std::optional<ProblemId> parse_problem(std::string_view name);
std::vector<ProblemId> all_problem_ids();

}  // namespace rcpd
