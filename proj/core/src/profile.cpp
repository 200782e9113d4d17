#include "slowhom/profile.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace slowhom {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

double Profile::truncation(double tol) const {
    if (radius) return *radius;
    double A = 1;
    while (tail(A) > tol && A < 1e12) A *= 2;
    double lo = A / 2, hi = A;
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (lo + hi);
        (tail(m) > tol ? lo : hi) = m;
    }
    return hi;
}

Profile gaussian_profile(double amplitude, double width) {
    if (!(width > 0)) throw std::invalid_argument("gaussian width must be positive");
    Profile p;
    p.name = "gaussian";
    p.spec = {{"kind", "gaussian"}, {"amplitude", amplitude}, {"width", width}};
    p.F = [=](double x) { return amplitude * std::exp(-(x * x) / (width * width)); };
    p.dF = [=](double x) { return -2 * x / (width * width) * amplitude * std::exp(-(x * x) / (width * width)); };
    const double a = std::fabs(amplitude);
    p.tail = [=](double A) { return a * width * std::sqrt(kPi) * std::erfc(A / width); };
    p.norm_l1 = a * width * std::sqrt(kPi);
    p.norm_grad_l1 = 2 * a;
    p.norm_sup = a;
    p.exact_integral = amplitude * width * std::sqrt(kPi);
    return p;
}

Profile bump_profile(double radius, double amplitude) {
    if (!(radius > 0)) throw std::invalid_argument("bump radius must be positive");
    Profile p;
    p.name = "bump";
    p.spec = {{"kind", "bump"}, {"radius", radius}, {"amplitude", amplitude}};
    p.F = [=](double x) {
        const double u = x / radius;
        return std::fabs(u) < 1 ? amplitude * std::exp(-1 / (1 - u * u)) : 0.0;
    };
    p.dF = [=](double x) {
        const double u = x / radius;
        if (std::fabs(u) >= 1) return 0.0;
        const double q = 1 - u * u;
        return amplitude * std::exp(-1 / q) * (-2 * u / (q * q)) / radius;
    };
    p.tail = [](double) { return 0.0; };
    p.radius = radius;
    const double a = std::fabs(amplitude);
    p.norm_sup = a * std::exp(-1.0);
    p.norm_grad_l1 = 2 * p.norm_sup;
    // Certified upper bound: quadrature value plus its error estimate.
    const QuadResult q = integrate_gk([&](double x) { return std::fabs(p.F(x)); }, -radius, radius);
    p.norm_l1 = q.value + q.error;
    return p;
}

Profile poisson_profile(double height) {
    if (!(height > 0)) throw std::invalid_argument("poisson height must be positive");
    Profile p;
    p.name = "poisson";
    p.spec = {{"kind", "poisson"}, {"height", height}};
    const double h = height;
    p.F = [=](double x) { return h / (kPi * (x * x + h * h)); };
    p.dF = [=](double x) { return -2 * h * x / (kPi * (x * x + h * h) * (x * x + h * h)); };
    p.tail = [=](double A) { return 1 - 2 / kPi * std::atan(A / h); };
    p.norm_l1 = 1;
    p.norm_sup = 1 / (kPi * h);
    p.norm_grad_l1 = 2 * p.norm_sup;
    p.exact_integral = 1;
    return p;
}

Profile tabulated_profile(double x0, double x1, std::vector<double> values) {
    if (!(x1 > x0) || values.size() < 2) throw std::invalid_argument("tabulated profile needs x1 > x0 and >= 2 samples");
    Profile p;
    p.name = "table";
    p.spec = {{"kind", "table"}, {"x0", x0}, {"x1", x1}, {"values", values}};
    const auto vals = std::make_shared<std::vector<double>>(std::move(values));
    const int n = static_cast<int>(vals->size()) - 1;
    const double h = (x1 - x0) / n;
    p.F = [=](double x) {
        if (x < x0 || x > x1) return 0.0;
        const int i = std::min(n - 1, static_cast<int>((x - x0) / h));
        const double u = (x - x0) / h - i;
        return (*vals)[i] * (1 - u) + (*vals)[i + 1] * u;
    };
    p.dF = [=](double x) {
        if (x < x0 || x > x1) return 0.0;
        const int i = std::min(n - 1, static_cast<int>((x - x0) / h));
        return ((*vals)[i + 1] - (*vals)[i]) / h;
    };
    p.tail = [](double) { return 0.0; };
    p.center = 0.5 * (x0 + x1);
    p.radius = 0.5 * (x1 - x0);
    double l1 = 0, tv = std::fabs(vals->front()) + std::fabs(vals->back()), sup = 0;
    for (int i = 0; i < n; ++i) {
        const double a = (*vals)[i], b = (*vals)[i + 1];
        // exact integral of |linear| over the cell
        if (a * b >= 0) {
            l1 += 0.5 * h * (std::fabs(a) + std::fabs(b));
        } else {
            l1 += 0.5 * h * (a * a + b * b) / (std::fabs(a) + std::fabs(b));
        }
        tv += std::fabs(b - a);
        sup = std::max(sup, std::fabs(a));
    }
    sup = std::max(sup, std::fabs(vals->back()));
    p.norm_l1 = l1;
    // Jumps at the support edges count towards the variation.
    p.norm_grad_l1 = tv;
    p.norm_sup = sup;
    return p;
}

Profile zero_profile() {
    Profile p;
    p.name = "zero";
    p.spec = {{"kind", "zero"}};
    p.F = [](double) { return 0.0; };
    p.dF = [](double) { return 0.0; };
    p.tail = [](double) { return 0.0; };
    p.radius = 1.0;
    p.exact_integral = 0;
    return p;
}

Profile parse_profile(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.empty()) throw std::invalid_argument("empty profile spec");
    auto num = [&](std::size_t i, double def) { return parts.size() > i ? std::stod(parts[i]) : def; };
    if (parts[0] == "gaussian") return gaussian_profile(num(1, 1.0), num(2, 1.0));
    if (parts[0] == "bump") return bump_profile(num(1, 1.0), num(2, 1.0));
    if (parts[0] == "poisson") return poisson_profile(num(1, 1.0));
    if (parts[0] == "zero") return zero_profile();
    throw std::invalid_argument("unknown profile '" + spec + "'");
}

namespace {

IntegralEstimate integrate_window(const Profile& p, double A, const RealFn& g) {
    IntegralEstimate est;
    double half = A;
    double tail_err = 0;
    const double full = p.truncation(1e-16);
    if (half >= full) {
        tail_err = p.compact() ? 0.0 : p.tail(full);
        half = full;
    }
    // Split at the center so kinks of tabulated data fall on panel edges.
    const QuadResult l = integrate_gk(g, p.center - half, p.center);
    const QuadResult r = integrate_gk(g, p.center, p.center + half);
    est.value = l.value + r.value;
    est.error = l.error + r.error + tail_err;
    return est;
}

}  // namespace

IntegralEstimate profile_integral(const Profile& p, double A) {
    return integrate_window(p, A, p.F);
}

IntegralEstimate profile_abs_integral(const Profile& p, double A) {
    return integrate_window(p, A, [&](double x) { return std::fabs(p.F(x)); });
}

OscillatoryEstimate profile_cos_integral(const Profile& p, double a, double phi, double tol) {
    OscillatoryEstimate out;
    const double half = p.truncation(tol * 1e-3);
    const double tail_err = p.compact() ? 0.0 : p.tail(half);
    const double freq = std::fabs(a) * half;
    const double w = 2 * kPi * a;
    const double lo = p.center - half, hi = p.center + half;
    if (freq <= 1e3) {
        const int pieces = std::max(1, static_cast<int>(std::ceil(freq)));
        double v = 0, e = 0;
        for (int i = 0; i < pieces; ++i) {
            const double x0 = lo + (hi - lo) * i / pieces, x1 = lo + (hi - lo) * (i + 1) / pieces;
            const QuadResult q = integrate_gk([&](double x) { return p.F(x) * std::cos(w * x + phi); }, x0, x1,
                                              tol / pieces, 1e-14);
            v += q.value;
            e += q.error;
        }
        out.value = v;
        out.error = e + tail_err;
        out.backend = "quadrature";
        return out;
    }
    if (freq <= 1e6) {
        const int min_panels = static_cast<int>(std::min(1e6, std::max(64.0, 4 * std::sqrt(freq))));
        const QuadResult q = integrate_filon_cos(p.F, lo, hi, w, phi, tol, min_panels, 1 << 22);
        out.value = q.value;
        out.error = q.error + tail_err;
        out.backend = "filon";
        out.resolved = q.converged;
        return out;
    }
    // Integration by parts: |int F e^{i w x}| <= ||F'||_1 / |w|.
    out.value = 0;
    out.error = p.norm_grad_l1 / std::fabs(w);
    out.backend = "ibp";
    return out;
}

}  // namespace slowhom
