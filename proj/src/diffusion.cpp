#include "tyc/diffusion.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tyc/errors.hpp"

namespace tyc {

namespace {
void require_match(const Field& u, const Grid& g, const char* op) {
    if (static_cast<int>(u.size()) != g.cell_count())
        throw ConfigError(std::string(op) + ": field has " + std::to_string(u.size()) +
                          " values but the grid has " + std::to_string(g.cell_count()) +
                          " cells");
}
} // namespace

void diffusion_apply(const Field& u, const Field& a, const Grid& g, Field& out) {
    require_match(u, g, "diffusion_apply");
    require_match(a, g, "diffusion_apply (coefficients)");

    const int nx = g.nx(), ny = g.ny();
    out.v.assign(u.size(), 0.0);

    // x faces: flux = a_face (u_right - u_left) / hx, a_face the
    // arithmetic mean; each cell accumulates net incoming flux / hx.
    const double ihx2 = 1.0 / (g.h[0] * g.h[0]);
    for (int j = 0; j < ny; ++j) {
        const int row = j * nx;
        for (int i = 0; i + 1 < nx; ++i) {
            const int c = row + i;
            const double aface = 0.5 * (a[c] + a[c + 1]);
            const double flux = aface * (u[c + 1] - u[c]) * ihx2;
            out[c] += flux;
            out[c + 1] -= flux;
        }
    }

    if (g.dim == 2) {
        const double ihy2 = 1.0 / (g.h[1] * g.h[1]);
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int c = j * nx + i;
                const int n = c + nx;
                const double aface = 0.5 * (a[c] + a[n]);
                const double flux = aface * (u[n] - u[c]) * ihy2;
                out[c] += flux;
                out[n] -= flux;
            }
        }
    }
}

Field diffusion_apply(const Field& u, const Field& a, const Grid& g) {
    Field out;
    diffusion_apply(u, a, g, out);
    return out;
}

int implicit_diffusion_solve(const Field& rhs, const Field& a, const Grid& g,
                             double dt, Field& x, double rel_tol, int max_iter) {
    require_match(rhs, g, "implicit_diffusion_solve");
    require_match(a, g, "implicit_diffusion_solve (coefficients)");

    const size_t n = rhs.size();
    double bnorm2 = 0.0;
    for (double v : rhs.v)
        bnorm2 += v * v;
    if (bnorm2 == 0.0) {
        x.v.assign(n, 0.0);
        return 0;
    }
    const double tol2 = rel_tol * rel_tol * bnorm2;

    // Matrix-free CG on M = I - dt*A, symmetric positive definite
    // (eigenvalues >= 1) under zero-flux boundaries.
    Field Au;
    auto apply_M = [&](const Field& in, Field& out_) {
        diffusion_apply(in, a, g, Au);
        out_.v.resize(n);
        for (size_t i = 0; i < n; ++i)
            out_[i] = in[i] - dt * Au[i];
    };

    x = rhs; // warm start: for small dt the solution stays near rhs
    Field r, p, Mp;
    apply_M(x, r);
    for (size_t i = 0; i < n; ++i)
        r[i] = rhs[i] - r[i];
    p = r;

    double rr = 0.0;
    for (double v : r.v)
        rr += v * v;

    for (int it = 0; it < max_iter; ++it) {
        if (rr <= tol2)
            return it;
        apply_M(p, Mp);
        double pMp = 0.0;
        for (size_t i = 0; i < n; ++i)
            pMp += p[i] * Mp[i];
        if (!(pMp > 0.0))
            throw NumericalError("implicit_diffusion_solve: operator lost positive definiteness");
        const double alpha = rr / pMp;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Mp[i];
        }
        double rr_new = 0.0;
        for (double v : r.v)
            rr_new += v * v;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i)
            p[i] = r[i] + beta * p[i];
    }
    if (rr <= tol2)
        return max_iter;
    throw NumericalError("implicit_diffusion_solve: no convergence in " +
                         std::to_string(max_iter) + " iterations (residual " +
                         std::to_string(std::sqrt(rr / bnorm2)) + " relative)");
}

} // namespace tyc
