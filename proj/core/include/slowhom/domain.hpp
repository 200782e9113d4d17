#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace slowhom {

using Vec2 = Eigen::Vector2d;

// Samples at uniform arclength s_j = j L / n; weights are the trapezoid L/n.
struct BoundaryNodes {
    std::vector<Vec2> x, tangent, normal;  // normal points outward
    std::vector<double> s, kappa;
    std::vector<bool> flat;
    double length = 0;
    double weight = 0;
    int size() const { return static_cast<int>(x.size()); }
};

// Closed, counter-clockwise, arclength-parameterized planar curve.
class CurveImpl {
public:
    virtual ~CurveImpl() = default;
    virtual double length() const = 0;
    // s in [0, length)
    virtual Vec2 point(double s) const = 0;
    virtual Vec2 tangent(double s) const = 0;
    virtual double curvature(double s) const = 0;
    // Flat portion as an arclength window [a, b] (a may be negative, wrapping).
    virtual std::optional<std::pair<double, double>> flat_window() const { return std::nullopt; }
    virtual nlohmann::json describe() const = 0;
};

struct PrototypeParams {
    double flat_len = 1.0;
    double blend = 0.08;  // width of the curvature ramp at each junction, in curved-part parameter units
    double gamma = 3.0;   // curvature boost towards the junction sides
    double power = 1.0;

    nlohmann::json to_json() const;
};

class Domain {
public:
    Domain() = default;
    explicit Domain(std::shared_ptr<const CurveImpl> curve);

    double length() const { return curve_->length(); }
    Vec2 point(double s) const;
    Vec2 tangent(double s) const;
    Vec2 normal(double s) const;
    double curvature(double s) const;
    bool on_flat(double s) const;
    std::optional<std::pair<double, double>> flat_window() const { return curve_->flat_window(); }
    // Arclength windows of the curved part.
    std::vector<std::pair<double, double>> curved_windows() const;

    BoundaryNodes sample(int n) const;
    // y = R x + x0
    Domain transformed(const Eigen::Matrix2d& R, const Vec2& x0) const;
    const Eigen::Matrix2d& rotation() const { return R_; }
    const Vec2& offset() const { return x0_; }

    double closure_error() const;
    double area() const;
    Vec2 centroid() const;
    // max over interior points of the distance to the boundary, and its argmax
    std::pair<double, Vec2> inradius() const;
    double distance_to_boundary(const Vec2& x) const;
    bool contains(const Vec2& x) const;
    nlohmann::json describe() const;

private:
    std::shared_ptr<const CurveImpl> curve_;
    Eigen::Matrix2d R_ = Eigen::Matrix2d::Identity();
    Vec2 x0_ = Vec2::Zero();
    mutable std::shared_ptr<const std::vector<Vec2>> polygon_;
    const std::vector<Vec2>& polygon() const;
};

// Flat segment [-l/2, l/2] x {0}; the rest is a closed convex arc whose
// curvature ramps in from zero through a C-infinity blend.
Domain build_prototype_domain(const PrototypeParams& params);
Domain disk_domain(double radius = 1.0, const Vec2& center = Vec2::Zero());

// min curvature over boundary points at distance >= delta from the flat part.
double kappa_delta(const Domain& domain, double delta);

// Minimum of x . n over boundary samples minus the supporting line offset;
// >= 0 up to rounding for convex curves.
double supporting_line_defect(const Domain& domain, int samples = 1000);

}  // namespace slowhom
