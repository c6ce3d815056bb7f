#pragma once

// Uniform tensor-product grids on (0,1)^d with homogeneous Dirichlet boundary,
// d in {1,2}. A Field stores values at the n^d interior nodes; boundary values
// are implicit zeros ("ghosts") wherever differences reach the boundary.

#include <array>
#include <cstddef>
#include <vector>

#include "mshom/exec.hpp"

namespace mshom {

struct Grid {
  int dim = 1;   // 1 or 2
  int n = 3;     // interior points per axis
  double h = 0;  // spacing, h*(n+1) == 1

  std::size_t dof() const {
    return dim == 1 ? static_cast<std::size_t>(n)
                    : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  // interior coordinate of index i on one axis, i in [0, n)
  double coord(int i) const { return (i + 1) * h; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(i);
  }
  std::array<double, 2> point(std::size_t p) const {
    if (dim == 1) return {coord(static_cast<int>(p)), 0.0};
    const int i = static_cast<int>(p % static_cast<std::size_t>(n));
    const int j = static_cast<int>(p / static_cast<std::size_t>(n));
    return {coord(i), coord(j)};
  }
  double cell_volume() const { return dim == 1 ? h : h * h; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

// throws ConfigError if d not in {1,2} or n < 3
Grid build_grid(int dim, int n);

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.dof(), 0.0) {}
  Field(const Grid& g, double v) : grid(g), values(g.dof(), v) {}

  double& operator[](std::size_t p) { return values[p]; }
  double operator[](std::size_t p) const { return values[p]; }
  std::size_t size() const { return values.size(); }
};

struct FieldNorms {
  double l2 = 0;       // sqrt(h^d sum v^2)
  double h1_semi = 0;  // one-sided differences incl. boundary ghosts
  double linf = 0;
};

FieldNorms norms(const Field& f, Exec exec = Exec::parallel);

double inner(const Field& a, const Field& b, Exec exec = Exec::parallel);  // h^d <a,b>

// samples an analytic function at the interior nodes
template <class F>
Field sample_field(const Grid& g, F&& f) {
  Field out(g);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto x = g.point(p);
    out[p] = f(x[0], x[1]);
  }
  return out;
}

}  // namespace mshom
