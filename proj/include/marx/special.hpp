#pragma once

namespace marx::special {

/// Digamma function psi(x) for x > 0.
double digamma(double x);

/// ln B(a, b) = lnG(a) + lnG(b) - lnG(a + b).
double log_beta(double a, double b);

/// Log of the multivariate gamma function Gamma_p(a).
double log_multigamma(double a, int p);

}  // namespace marx::special
