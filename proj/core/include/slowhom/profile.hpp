#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowhom/quadrature.hpp"

namespace slowhom {

// Integrand family representative F: R -> R (the d-1 = 1 case).
struct Profile {
    std::string name;
    nlohmann::json spec;
    RealFn F;
    RealFn dF;
    // Whole-line profiles certify int_{|x - center| >= A} |F| <= tail(A).
    std::function<double(double)> tail;
    // Ball-supported profiles: support is [center - radius, center + radius].
    std::optional<double> radius;
    double center = 0;
    // Certified upper bounds.
    double norm_l1 = 0;
    double norm_grad_l1 = 0;
    double norm_sup = 0;
    // Reference value of int F (closed form when available).
    std::optional<double> exact_integral;

    bool compact() const { return radius.has_value(); }
    // Truncation half-width with tail(A) <= tol (the support radius for balls).
    double truncation(double tol) const;
};

// amplitude * exp(-x^2 / width^2)
Profile gaussian_profile(double amplitude = 1.0, double width = 1.0);
// amplitude * exp(-1 / (1 - (x/r)^2)) on |x| < r
Profile bump_profile(double radius = 1.0, double amplitude = 1.0);
// Half-plane Poisson kernel h / (pi (x^2 + h^2)) at height h.
Profile poisson_profile(double height);
// Piecewise-linear interpolation of samples on [x0, x1], zero outside.
Profile tabulated_profile(double x0, double x1, std::vector<double> values);
Profile zero_profile();

// "gaussian", "gaussian:amp:width", "bump:radius", "poisson:h".
Profile parse_profile(const std::string& spec);

struct IntegralEstimate {
    double value = 0;
    double error = 0;  // quadrature error plus truncated tail
};

// int_{|x - center| <= A} F (A = +inf for the whole line).
IntegralEstimate profile_integral(const Profile& p, double A = std::numeric_limits<double>::infinity());
IntegralEstimate profile_abs_integral(const Profile& p, double A = std::numeric_limits<double>::infinity());

// int F(x) cos(2 pi a x + phi) dx with backend choice by |a| * extent.
struct OscillatoryEstimate {
    double value = 0;
    double error = 0;
    std::string backend;
    bool resolved = true;
};
OscillatoryEstimate profile_cos_integral(const Profile& p, double a, double phi = 0.0, double tol = 1e-13);

}  // namespace slowhom
