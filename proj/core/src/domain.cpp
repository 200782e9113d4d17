#include "slowhom/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace slowhom {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 8> kGlX = {-0.960289856497536231683560868569473, -0.796666477413626739591553936475830,
                                        -0.525532409916328985817739049189246, -0.183434642495649804939476142360184,
                                        0.183434642495649804939476142360184,  0.525532409916328985817739049189246,
                                        0.796666477413626739591553936475830,  0.960289856497536231683560868569473};
constexpr std::array<double, 8> kGlW = {0.101228536290376259152531354309962, 0.222381034453374470544355994426241,
                                        0.313706645877887287337962201986601, 0.362683783378361982965150449277196,
                                        0.362683783378361982965150449277196, 0.313706645877887287337962201986601,
                                        0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

template <class F>
double gauss8(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 8; ++i) s += kGlW[i] * f(c + h * kGlX[i]);
    return s * h;
}

double smooth_step(double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    const double a = std::exp(-1 / x), b = std::exp(-1 / (1 - x));
    return a / (a + b);
}

double wrap(double s, double L) {
    double r = std::fmod(s, L);
    if (r < 0) r += L;
    return r;
}

class PrototypeCurve final : public CurveImpl {
public:
    explicit PrototypeCurve(const PrototypeParams& p) : p_(p) {
        if (!(p.flat_len > 0)) throw std::invalid_argument("prototype domain: flat_len must be positive");
        if (!(p.blend > 0 && p.blend < 0.5)) throw std::invalid_argument("prototype domain: blend must lie in (0, 1/2)");
        if (!(p.gamma >= 0 && p.power > 0)) throw std::invalid_argument("prototype domain: gamma >= 0 and power > 0");
        Kc_.assign(kSeg + 1, 0.0);
        for (int i = 0; i < kSeg; ++i) Kc_[i + 1] = Kc_[i] + gauss8([&](double u) { return raw_kappa(u); }, u_at(i), u_at(i + 1));
        T_ = Kc_[kSeg];
        Cc_.assign(kSeg + 1, 0.0);
        Sc_.assign(kSeg + 1, 0.0);
        for (int i = 0; i < kSeg; ++i) {
            Cc_[i + 1] = Cc_[i] + gauss8([&](double u) { return std::cos(angle(u)); }, u_at(i), u_at(i + 1));
            Sc_[i + 1] = Sc_[i] + gauss8([&](double u) { return std::sin(angle(u)); }, u_at(i), u_at(i + 1));
        }
        J_ = Cc_[kSeg];
        if (!(J_ < 0)) throw std::invalid_argument("prototype domain: arc parameters do not close the curve (J >= 0)");
        Lc_ = p.flat_len / -J_;
        for (int i = 0; i <= 64; ++i)
            if (raw_kappa(i / 64.0) < 0) throw std::invalid_argument("prototype domain: negative curvature");
    }

    double length() const override { return p_.flat_len + Lc_; }

    Vec2 point(double s) const override {
        const double h = 0.5 * p_.flat_len;
        if (s <= h) return {s, 0.0};
        if (s >= h + Lc_) return {s - length(), 0.0};
        const double u = (s - h) / Lc_;
        const int i = seg(u);
        const double c = Cc_[i] + gauss8([&](double v) { return std::cos(angle(v)); }, u_at(i), u);
        const double sn = Sc_[i] + gauss8([&](double v) { return std::sin(angle(v)); }, u_at(i), u);
        return {h + Lc_ * c, Lc_ * sn};
    }

    Vec2 tangent(double s) const override {
        const double h = 0.5 * p_.flat_len;
        if (s <= h || s >= h + Lc_) return {1.0, 0.0};
        const double b = angle((s - h) / Lc_);
        return {std::cos(b), std::sin(b)};
    }

    double curvature(double s) const override {
        const double h = 0.5 * p_.flat_len;
        if (s <= h || s >= h + Lc_) return 0.0;
        return 2 * kPi * raw_kappa((s - h) / Lc_) / (T_ * Lc_);
    }

    std::optional<std::pair<double, double>> flat_window() const override {
        return std::make_pair(-0.5 * p_.flat_len, 0.5 * p_.flat_len);
    }

    nlohmann::json describe() const override {
        return {{"kind", "prototype"}, {"params", p_.to_json()}, {"curved_length", Lc_}, {"J", J_}};
    }

    double closure_y() const { return Lc_ * Sc_[kSeg]; }

private:
    static constexpr int kSeg = 4096;
    static double u_at(int i) { return static_cast<double>(i) / kSeg; }
    static int seg(double u) { return std::clamp(static_cast<int>(u * kSeg), 0, kSeg - 1); }

    double raw_kappa(double u) const {
        const double beta = smooth_step(u / p_.blend) * smooth_step((1 - u) / p_.blend);
        const double q = 4 * (u - 0.5) * (u - 0.5);
        return beta * (1 + p_.gamma * std::pow(q, p_.power));
    }
    double angle(double u) const {
        const int i = seg(u);
        const double k = Kc_[i] + gauss8([&](double v) { return raw_kappa(v); }, u_at(i), u);
        return 2 * kPi * k / T_;
    }

    PrototypeParams p_;
    std::vector<double> Kc_, Cc_, Sc_;
    double T_ = 1, J_ = 0, Lc_ = 1;
};

class CircleCurve final : public CurveImpl {
public:
    CircleCurve(double r, Vec2 c) : r_(r), c_(std::move(c)) {
        if (!(r > 0)) throw std::invalid_argument("disk radius must be positive");
    }
    double length() const override { return 2 * kPi * r_; }
    Vec2 point(double s) const override { return c_ + r_ * Vec2(std::cos(s / r_), std::sin(s / r_)); }
    Vec2 tangent(double s) const override { return {-std::sin(s / r_), std::cos(s / r_)}; }
    double curvature(double) const override { return 1 / r_; }
    nlohmann::json describe() const override {
        return {{"kind", "disk"}, {"radius", r_}, {"center", {c_.x(), c_.y()}}};
    }

private:
    double r_;
    Vec2 c_;
};

}  // namespace

nlohmann::json PrototypeParams::to_json() const {
    return {{"flat_len", flat_len}, {"blend", blend}, {"gamma", gamma}, {"power", power}};
}

Domain::Domain(std::shared_ptr<const CurveImpl> curve) : curve_(std::move(curve)) {}

Vec2 Domain::point(double s) const { return R_ * curve_->point(wrap(s, length())) + x0_; }
Vec2 Domain::tangent(double s) const { return R_ * curve_->tangent(wrap(s, length())); }
Vec2 Domain::normal(double s) const {
    const Vec2 t = curve_->tangent(wrap(s, length()));
    return R_ * Vec2(t.y(), -t.x());
}
double Domain::curvature(double s) const { return curve_->curvature(wrap(s, length())); }

bool Domain::on_flat(double s) const {
    const auto fw = flat_window();
    if (!fw) return false;
    const double L = length();
    double r = wrap(s - fw->first, L);
    return r <= fw->second - fw->first;
}

std::vector<std::pair<double, double>> Domain::curved_windows() const {
    const auto fw = flat_window();
    if (!fw) return {{0.0, length()}};
    return {{fw->second, fw->first + length()}};
}

BoundaryNodes Domain::sample(int n) const {
    if (n < 3) throw std::invalid_argument("Domain::sample: need at least 3 nodes");
    BoundaryNodes b;
    b.length = length();
    b.weight = b.length / n;
    for (int j = 0; j < n; ++j) {
        const double s = j * b.weight;
        b.s.push_back(s);
        b.x.push_back(point(s));
        b.tangent.push_back(tangent(s));
        b.normal.push_back(normal(s));
        b.kappa.push_back(curvature(s));
        b.flat.push_back(on_flat(s));
    }
    return b;
}

Domain Domain::transformed(const Eigen::Matrix2d& R, const Vec2& x0) const {
    Domain d = *this;
    d.R_ = R * R_;
    d.x0_ = R * x0_ + x0;
    d.polygon_.reset();
    return d;
}

double Domain::closure_error() const {
    const double L = length();
    const Vec2 a = curve_->point(0.0);
    const Vec2 b = curve_->point(std::nextafter(L, 0.0));
    double err = (a - b).norm();
    if (auto* pc = dynamic_cast<const PrototypeCurve*>(curve_.get())) err = std::max(err, std::fabs(pc->closure_y()));
    return err;
}

double Domain::area() const {
    const BoundaryNodes b = sample(4096);
    double a = 0;
    for (int j = 0; j < b.size(); ++j) a += 0.5 * (b.x[j].x() * b.tangent[j].y() - b.x[j].y() * b.tangent[j].x());
    return std::fabs(a * b.weight);
}

Vec2 Domain::centroid() const {
    const BoundaryNodes b = sample(4096);
    double a = 0, mx = 0, my = 0;
    for (int j = 0; j < b.size(); ++j) {
        const Vec2& x = b.x[j];
        const Vec2& t = b.tangent[j];
        a += 0.5 * (x.x() * t.y() - x.y() * t.x());
        mx += 0.5 * x.x() * x.x() * t.y();
        my -= 0.5 * x.y() * x.y() * t.x();
    }
    return Vec2(mx, my) / a;
}

const std::vector<Vec2>& Domain::polygon() const {
    if (!polygon_) {
        auto poly = std::make_shared<std::vector<Vec2>>(sample(8192).x);
        polygon_ = poly;
    }
    return *polygon_;
}

double Domain::distance_to_boundary(const Vec2& x) const {
    const auto& p = polygon();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % p.size()];
        const Vec2 ab = b - a;
        const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (a + t * ab - x).norm());
    }
    return best;
}

bool Domain::contains(const Vec2& x) const {
    const auto& p = polygon();
    bool inside = false;
    for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
        if (((p[i].y() > x.y()) != (p[j].y() > x.y())) &&
            (x.x() < (p[j].x() - p[i].x()) * (x.y() - p[i].y()) / (p[j].y() - p[i].y()) + p[i].x()))
            inside = !inside;
    }
    return inside;
}

std::pair<double, Vec2> Domain::inradius() const {
    const auto& p = polygon();
    Vec2 lo = p[0], hi = p[0];
    for (const auto& q : p) {
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
    }
    Vec2 best = centroid();
    double bd = contains(best) ? distance_to_boundary(best) : 0;
    const int g = 24;
    for (int i = 1; i < g; ++i)
        for (int j = 1; j < g; ++j) {
            const Vec2 x(lo.x() + (hi.x() - lo.x()) * i / g, lo.y() + (hi.y() - lo.y()) * j / g);
            if (!contains(x)) continue;
            const double d = distance_to_boundary(x);
            if (d > bd) {
                bd = d;
                best = x;
            }
        }
    double step = (hi - lo).maxCoeff() / g;
    while (step > 1e-6) {
        bool moved = false;
        for (const Vec2& dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
            const Vec2 x = best + step * dir;
            if (!contains(x)) continue;
            const double d = distance_to_boundary(x);
            if (d > bd) {
                bd = d;
                best = x;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    return {bd, best};
}

nlohmann::json Domain::describe() const {
    nlohmann::json j = curve_->describe();
    j["rotation"] = {R_(0, 0), R_(0, 1), R_(1, 0), R_(1, 1)};
    j["offset"] = {x0_.x(), x0_.y()};
    j["length"] = length();
    return j;
}

Domain build_prototype_domain(const PrototypeParams& params) {
    return Domain(std::make_shared<PrototypeCurve>(params));
}

Domain disk_domain(double radius, const Vec2& center) {
    return Domain(std::make_shared<CircleCurve>(radius, center));
}

double kappa_delta(const Domain& domain, double delta) {
    const auto fw = domain.flat_window();
    const auto cw = domain.curved_windows();
    if (!fw) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : cw)
            for (int i = 0; i <= 4096; ++i) m = std::min(m, domain.curvature(a + (b - a) * i / 4096));
        return m;
    }
    const Vec2 pa = domain.point(fw->first), pb = domain.point(fw->second);
    auto dist = [&](double s) {
        const Vec2 x = domain.point(s);
        const Vec2 ab = pb - pa;
        const double t = std::clamp((x - pa).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        return (pa + t * ab - x).norm();
    };
    double m = std::numeric_limits<double>::infinity();
    const int n = 8192;
    for (const auto& [a, b] : cw) {
        double prev_s = a;
        bool prev_in = dist(a) >= delta;
        for (int i = 0; i <= n; ++i) {
            const double s = a + (b - a) * i / n;
            const bool in = dist(s) >= delta;
            if (in) m = std::min(m, domain.curvature(s));
            if (i > 0 && in != prev_in) {
                double lo = prev_s, hi = s;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    ((dist(mid) >= delta) == prev_in ? lo : hi) = mid;
                }
                m = std::min(m, domain.curvature(prev_in ? lo : hi));
            }
            prev_s = s;
            prev_in = in;
        }
    }
    if (!std::isfinite(m)) throw std::invalid_argument("kappa_delta: no boundary point at distance >= delta from the flat part");
    return m;
}

double supporting_line_defect(const Domain& domain, int samples) {
    const BoundaryNodes b = domain.sample(samples);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) worst = std::min(worst, b.normal[i].dot(b.x[i] - b.x[j]));
    return worst;
}

}  // namespace slowhom
