// Independent reference implementations used only by tests. These
// deliberately re-derive the kinetics and numerics from scratch rather
// than calling library code, so agreement is meaningful.
#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

using V4 = std::array<double, 4>;

struct Kinetics {
    double beta, K, d1, d2, d3, d4, mu;
    bool clip_all_growth = false;
};

// Four-species kinetics written out longhand: half of matings with wild
// females produce wild females, introduced genotypes feed the male and
// supermale pools, and the introduction term mu*r*g feeds females(r).
inline V4 rhs_modified(const V4& u, const Kinetics& k) {
    const double f = u[0], m = u[1], s = u[2], r = u[3];
    const double g = 1.0 - (f + m + s + r) / k.K;
    const double gp = g > 0.0 ? g : 0.0;
    const double gf = k.clip_all_growth ? gp : g;
    V4 out;
    out[0] = 0.5 * k.beta * f * m * gf - k.d1 * f;
    out[1] = k.beta * (0.5 * f * m + 0.5 * r * m + f * s) * gp - k.d2 * m;
    out[2] = k.beta * (0.5 * r * m + r * s) * gp - k.d3 * s;
    out[3] = k.mu * r * gf - k.d4 * r;
    return out;
}

inline V4 rhs_original(const V4& u, double beta, double K, double d, double mu) {
    const double f = u[0], m = u[1], s = u[2], r = u[3];
    const double g = 1.0 - (f + m + s + r) / K;
    V4 out;
    out[0] = 0.5 * beta * f * m * g - d * f;
    out[1] = beta * (0.5 * f * m + 0.5 * r * m + f * s) * g - d * m;
    out[2] = beta * (0.5 * r * m + r * s) * g - d * s;
    out[3] = mu - d * r;
    return out;
}

// Classic RK4 with fixed step; rhs may be time dependent.
inline V4 rk4(V4 u, double t0, double t1, double dt,
              const std::function<V4(const V4&, double)>& rhs) {
    double t = t0;
    while (t < t1 - 1e-15) {
        const double h = std::min(dt, t1 - t);
        const V4 k1 = rhs(u, t);
        V4 u2;
        for (int i = 0; i < 4; ++i) u2[i] = u[i] + 0.5 * h * k1[i];
        const V4 k2 = rhs(u2, t + 0.5 * h);
        for (int i = 0; i < 4; ++i) u2[i] = u[i] + 0.5 * h * k2[i];
        const V4 k3 = rhs(u2, t + 0.5 * h);
        for (int i = 0; i < 4; ++i) u2[i] = u[i] + h * k3[i];
        const V4 k4 = rhs(u2, t + h);
        for (int i = 0; i < 4; ++i)
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
    }
    return u;
}

// Central-difference Jacobian of the two-species subsystem
//   f' = (beta/2) f m (1 - (f+m)/K) - d1 f
//   m' = (beta/2) f m (1 - (f+m)/K) - d2 m
// evaluated without any analytic simplification.
inline std::array<double, 4> fd_jacobian_reduced(double f, double m, double beta,
                                                 double K, double d1, double d2) {
    auto F1 = [&](double x, double y) {
        return 0.5 * beta * x * y * (1.0 - (x + y) / K) - d1 * x;
    };
    auto F2 = [&](double x, double y) {
        return 0.5 * beta * x * y * (1.0 - (x + y) / K) - d2 * y;
    };
    const double h = 1e-6 * std::max({1.0, std::abs(f), std::abs(m)});
    return {
        (F1(f + h, m) - F1(f - h, m)) / (2.0 * h),
        (F1(f, m + h) - F1(f, m - h)) / (2.0 * h),
        (F2(f + h, m) - F2(f - h, m)) / (2.0 * h),
        (F2(f, m + h) - F2(f, m - h)) / (2.0 * h),
    };
}

} // namespace oracle
