#include "tyc/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tyc/errors.hpp"
#include "tyc/model.hpp"

namespace tyc {

namespace {
// Absolute tolerance on the spectral abscissa separating stable /
// unstable / non-hyperbolic verdicts.
constexpr double kHyperbolicTol = 1e-10;
} // namespace

const char* to_string(BranchLabel b) {
    switch (b) {
    case BranchLabel::origin: return "origin";
    case BranchLabel::plus_branch: return "plus-branch";
    case BranchLabel::minus_branch: return "minus-branch";
    }
    return "?";
}

const char* to_string(Stability s) {
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::non_hyperbolic: return "non-hyperbolic";
    }
    return "?";
}

double critical_beta(double d1, double d2, double K) {
    return 8.0 * (d1 + d2) / K;
}

double branch_parameter(double beta, double d1, double d2, double K) {
    const double beta0 = critical_beta(d1, d2, K);
    if (beta < beta0)
        throw std::domain_error("branch_parameter: beta = " + std::to_string(beta) +
                                " lies below the critical value " + std::to_string(beta0));
    const double arg = 1.0 - beta0 / beta;
    return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

double growth_factor_reduced(double f, double m, double K) {
    return 1.0 - (f + m) / K;
}

Mat2 jacobian(double f, double m, const Parameters& p) {
    const double g1 = growth_factor_reduced(f, m, p.K);
    const double cf = 0.5 * p.beta * m * (g1 - f / p.K);
    const double cm = 0.5 * p.beta * f * (g1 - m / p.K);
    return {cf - p.d1, cm, cf, cm - p.d2};
}

Eigenpair eigenvalues_2x2(const Mat2& A) {
    const double tr = A.trace();
    const double det = A.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        // Avoid cancellation: compute the larger-magnitude root first and
        // recover the other from the product when possible.
        double r1, r2;
        if (tr >= 0.0)
            r1 = 0.5 * (tr + sq);
        else
            r1 = 0.5 * (tr - sq);
        if (r1 != 0.0)
            r2 = det / r1;
        else
            r2 = 0.0; // tr = det = 0: both roots vanish
        return {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
    }
    const double re = 0.5 * tr;
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

Stability classify(const Eigenpair& ev) {
    const double abscissa = std::max(ev[0].real(), ev[1].real());
    if (abscissa < -kHyperbolicTol)
        return Stability::stable;
    if (abscissa > kHyperbolicTol)
        return Stability::unstable;
    return Stability::non_hyperbolic;
}

Stability classify_trace_det(const Mat2& A) {
    const double tr = A.trace();
    const double det = A.det();
    // Scale-aware zero test so the rule matches the eigenvalue route on
    // hyperbolic matrices of any magnitude.
    const double scale = std::max({std::abs(A.a11), std::abs(A.a12),
                                   std::abs(A.a21), std::abs(A.a22), 1.0});
    const double det_tol = kHyperbolicTol * scale;
    if (det < -det_tol)
        return Stability::unstable; // saddle
    if (det > det_tol) {
        if (tr < -kHyperbolicTol)
            return Stability::stable;
        if (tr > kHyperbolicTol)
            return Stability::unstable;
    }
    return Stability::non_hyperbolic;
}

namespace {

SteadyState make_state(BranchLabel label, double f, double m, const Parameters& p) {
    SteadyState st;
    st.branch = label;
    st.f_star = f;
    st.m_star = m;
    st.jac = jacobian(f, m, p);
    st.eigenvalues = eigenvalues_2x2(st.jac);
    st.classification = classify(st.eigenvalues);

    const auto res = reaction_reduced(f, m, p);
    const double lim = 1e-10 * p.beta * p.K * p.K;
    if (std::abs(res[0]) > lim || std::abs(res[1]) > lim)
        throw NumericalError(std::string("steady_states: ") + to_string(label) +
                             " residual exceeds 1e-10 * beta * K^2");
    return st;
}

} // namespace

std::vector<SteadyState> steady_states(const Parameters& p) {
    validate_params_or_throw(p);
    std::vector<SteadyState> out;
    out.push_back(make_state(BranchLabel::origin, 0.0, 0.0, p));

    const double beta0 = critical_beta(p.d1, p.d2, p.K);
    if (p.beta < beta0)
        return out;

    const double b = branch_parameter(p.beta, p.d1, p.d2, p.K);
    const double denom = 2.0 * (p.d1 + p.d2);
    const double fp = p.K * p.d2 * (1.0 + b) / denom;
    const double mp = p.K * p.d1 * (1.0 + b) / denom;
    out.push_back(make_state(BranchLabel::plus_branch, fp, mp, p));

    if (p.beta > beta0) {
        const double fm = p.K * p.d2 * (1.0 - b) / denom;
        const double mm = p.K * p.d1 * (1.0 - b) / denom;
        out.push_back(make_state(BranchLabel::minus_branch, fm, mm, p));
    }
    return out;
}

double stability_threshold_minus_branch(const Parameters& p) {
    const double beta0 = critical_beta(p.d1, p.d2, p.K);
    if (p.beta <= beta0)
        throw std::domain_error(
            "stability_threshold_minus_branch: defined only for beta above the critical value " +
            std::to_string(beta0));
    const double b = branch_parameter(p.beta, p.d1, p.d2, p.K);
    const double omb = 1.0 - b;
    return 8.0 * (p.d1 + p.d2) / (p.K * omb * omb);
}

} // namespace tyc
