#include "slowhom/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace slowhom {

namespace {

constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
};

Piece gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kWgk[7], g = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double s = f(c - x) + f(c + x);
        k += kWgk[j] * s;
        if (j % 2 == 1) g += kWg[j / 2] * s;
    }
    k *= h;
    g *= h;
    const double err = std::fabs(k - g);
    // Round-off floor so that smooth pieces are not refined forever.
    const double floor = 50 * std::numeric_limits<double>::epsilon() * std::fabs(k);
    return {a, b, k, std::max(err, floor)};
}

}  // namespace

QuadResult integrate_gk(const RealFn& f, double a, double b, double abs_tol, double rel_tol, int max_intervals) {
    QuadResult r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    auto cmp = [](const Piece& x, const Piece& y) { return x.error < y.error; };
    std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);
    heap.push(gk15(f, a, b));
    r.evaluations = 15;
    double total = heap.top().value, err = heap.top().error;
    while (err > std::max(abs_tol, rel_tol * std::fabs(total)) && static_cast<int>(heap.size()) < max_intervals) {
        const Piece p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            heap.push(p);
            break;
        }
        const Piece l = gk15(f, p.a, m), rr = gk15(f, m, p.b);
        r.evaluations += 30;
        total += l.value + rr.value - p.value;
        err += l.error + rr.error - p.error;
        heap.push(l);
        heap.push(rr);
    }
    std::vector<Piece> pieces;
    pieces.reserve(heap.size());
    while (!heap.empty()) {
        pieces.push_back(heap.top());
        heap.pop();
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    r.value = 0;
    r.error = 0;
    for (const auto& p : pieces) {
        r.value += p.value;
        r.error += p.error;
    }
    r.converged = r.error <= std::max(abs_tol, rel_tol * std::fabs(r.value));
    return r;
}

namespace {

// Filon-Simpson on 2n sub-intervals (n panels of width 2h).
double filon_once(const RealFn& f, double a, double b, double w, double phi, int panels, int* evals) {
    const int n2 = 2 * panels;
    const double h = (b - a) / n2;
    const double th = w * h;
    double alpha, beta, gamma;
    if (std::fabs(th) < 1e-3) {
        const double t2 = th * th, t3 = t2 * th, t4 = t2 * t2, t5 = t4 * th, t6 = t3 * t3, t7 = t6 * th;
        alpha = 2 * t3 / 45 - 2 * t5 / 315 + 2 * t7 / 4725;
        beta = 2.0 / 3 + 2 * t2 / 15 - 4 * t4 / 105 + 2 * t6 / 567;
        gamma = 4.0 / 3 - 2 * t2 / 15 + t4 / 210 - t6 / 11340;
    } else {
        const double s = std::sin(th), c = std::cos(th);
        const double t2 = th * th, t3 = t2 * th;
        alpha = (t2 + th * s * c - 2 * s * s) / t3;
        beta = 2 * (th * (1 + c * c) - 2 * s * c) / t3;
        gamma = 4 * (s - th * c) / t3;
    }
    double c_even = 0, c_odd = 0;
    std::vector<double> fv(n2 + 1);
    for (int i = 0; i <= n2; ++i) fv[i] = f(a + i * h);
    *evals += n2 + 1;
    for (int i = 0; i <= n2; ++i) {
        const double x = a + i * h;
        const double cv = std::cos(w * x + phi);
        if (i % 2 == 0) {
            const double wt = (i == 0 || i == n2) ? 0.5 : 1.0;
            c_even += wt * fv[i] * cv;
        } else {
            c_odd += fv[i] * cv;
        }
    }
    const double edge = fv[n2] * std::sin(w * b + phi) - fv[0] * std::sin(w * a + phi);
    return h * (alpha * edge + beta * c_even + gamma * c_odd);
}

}  // namespace

QuadResult integrate_filon_cos(const RealFn& f, double a, double b, double w, double phi, double abs_tol,
                               int min_panels, int max_panels) {
    QuadResult r;
    int panels = std::max(1, min_panels);
    double prev = filon_once(f, a, b, w, phi, panels, &r.evaluations);
    while (panels < max_panels) {
        panels *= 2;
        const double cur = filon_once(f, a, b, w, phi, panels, &r.evaluations);
        // Filon-Simpson converges like h^4 in the amplitude; the difference
        // over-estimates the error of the finer value by about 15x.
        const double err = std::fabs(cur - prev);
        r.value = cur;
        r.error = err;
        prev = cur;
        if (err <= abs_tol) {
            r.converged = true;
            return r;
        }
    }
    r.converged = false;
    return r;
}

}  // namespace slowhom
