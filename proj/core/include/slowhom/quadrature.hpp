#pragma once

#include <functional>

namespace slowhom {

struct QuadResult {
    double value = 0;
    double error = 0;  // estimated absolute error
    int evaluations = 0;
    bool converged = false;
};

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) on [a, b]. Intervals are refined largest
// error first; the final sum runs in left-to-right order so results do not
// depend on the refinement order.
QuadResult integrate_gk(const RealFn& f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-12,
                        int max_intervals = 20000);

// Filon-type rule for int_a^b f(x) cos(w x + phi) dx: f is interpolated by
// quadratics on `panels` panels and the oscillatory moments are integrated
// exactly. The error is estimated by doubling the panel count until the two
// estimates agree.
QuadResult integrate_filon_cos(const RealFn& f, double a, double b, double w, double phi = 0.0,
                               double abs_tol = 1e-12, int min_panels = 64, int max_panels = 1 << 20);

}  // namespace slowhom
