#pragma once

namespace fradi {

/// Gamma function via the Lanczos approximation (g=7, 9 terms),
/// accurate to ~14 significant digits on the real line away from poles.
double gamma_fn(double x);

}  // namespace fradi
