#pragma once

#include "tyc/grid.hpp"

namespace tyc {

// Apply the finite-volume diffusion operator A u = div(a grad u) with
// zero-flux boundaries: per interior face the flux is
// a_face * (u_nb - u_cell) / h with a_face the arithmetic mean of the
// adjacent cell coefficients; boundary faces carry no flux. out[i] is
// the net incoming flux of cell i divided by h per axis.
// The operator is linear, conserves sum(u)*vol, and is symmetric
// negative semidefinite; second-order accurate on smooth compatible
// fields. Throws ConfigError on grid mismatch.
void diffusion_apply(const Field& u, const Field& a, const Grid& g, Field& out);
Field diffusion_apply(const Field& u, const Field& a, const Grid& g);

// Solve (I - dt*A) x = rhs by conjugate gradients (the operator is
// symmetric positive definite for dt >= 0). Converges when
// ||rhs - Mx|| <= rel_tol * ||rhs||; returns the iteration count.
// Throws NumericalError when max_iter is exhausted.
int implicit_diffusion_solve(const Field& rhs, const Field& a, const Grid& g,
                             double dt, Field& x, double rel_tol, int max_iter);

} // namespace tyc
