#pragma once

#include <complex>
#include <vector>

#include "tyc/params.hpp"

namespace tyc {

// Steady-state and linear-stability analysis of the spatially
// homogeneous two-species reduction (f, m).

enum class BranchLabel { origin, plus_branch, minus_branch };
enum class Stability { stable, unstable, non_hyperbolic };

const char* to_string(BranchLabel b);
const char* to_string(Stability s);

struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

using Eigenpair = std::array<std::complex<double>, 2>;

struct SteadyState {
    BranchLabel branch = BranchLabel::origin;
    double f_star = 0, m_star = 0;
    Mat2 jac{};
    Eigenpair eigenvalues{};
    Stability classification = Stability::stable;
};

// Critical birth rate beta0 = 8 (d1 + d2) / K: below it only extinction
// persists, at it one interior state appears, above it two.
double critical_beta(double d1, double d2, double K);

// b = sqrt(1 - 8(d1+d2)/(K beta)) in [0, 1), defined for beta >= beta0;
// throws std::domain_error below beta0.
double branch_parameter(double beta, double d1, double d2, double K);

// All spatially homogeneous steady states of the reduction at these
// parameters, each with its Jacobian, eigenvalues and classification:
//   beta <  beta0: [origin]
//   beta == beta0: [origin, tangency point (4 d2/beta, 4 d1/beta)]
//   beta >  beta0: [origin, plus-branch, minus-branch] with
//   f = K d2 (1 +- b) / (2(d1+d2)), m = K d1 (1 +- b) / (2(d1+d2)).
// Every returned state has reduced-reaction residual below
// 1e-10 * beta * K^2 (checked; violation -> NumericalError).
std::vector<SteadyState> steady_states(const Parameters& p);

// Jacobian of the reduction at (f, m), g1 = 1 - (f+m)/K:
//   d F_f/d f = (beta m/2)(g1 - f/K) - d1,  d F_f/d m = (beta f/2)(g1 - m/K)
//   d F_m/d f = (beta m/2)(g1 - f/K),       d F_m/d m = (beta f/2)(g1 - m/K) - d2
double growth_factor_reduced(double f, double m, double K);
Mat2 jacobian(double f, double m, const Parameters& p);

// Eigenvalues of a real 2x2 matrix via the characteristic polynomial,
// numerically stable for both real and complex pairs: the sum equals the
// trace and the product the determinant to roundoff.
Eigenpair eigenvalues_2x2(const Mat2& A);

// Spectral-abscissa classification with absolute tolerance 1e-10:
// stable when max Re(lambda) < -tol, unstable when > +tol, otherwise
// non-hyperbolic.
Stability classify(const Eigenpair& ev);

// Textbook planar rule on the hyperbolic set: stable iff tr < 0 and
// det > 0; det < 0 is a saddle. Used as a cross-check against the
// eigenvalue route.
Stability classify_trace_det(const Mat2& A);

// 8(d1+d2)/(K (1-b)^2): the birth rate at which the minus-branch
// determinant changes sign; algebraically equal to beta (1+b)/(1-b).
// Reported alongside the numerical classification. Requires beta >
// beta0 (throws std::domain_error otherwise).
double stability_threshold_minus_branch(const Parameters& p);

} // namespace tyc
