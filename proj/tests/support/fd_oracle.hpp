#pragma once

#include <functional>
#include <vector>

#include "slowhom/domain.hpp"

namespace slowhom::testing {

// Shortley-Weller finite differences for the interior Dirichlet Laplace
// problem on an n x n grid over the bounding box. Boundary crossings come
// from exact segment intersections with a fine boundary polygon.
struct FDSolution {
    double x0 = 0, y0 = 0, h = 0;
    int n = 0;
    std::vector<int> index;  // -1 outside
    std::vector<double> u;

    Vec2 node(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
    bool interior(int i, int j) const { return index[j * n + i] >= 0; }
    double value(int i, int j) const { return u[index[j * n + i]]; }
};

FDSolution solve_fd_dirichlet(const Domain& domain, const std::function<double(const Vec2&)>& g, int n = 512,
                              int polygon_points = 32768);

}  // namespace slowhom::testing
