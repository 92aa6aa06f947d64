#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "fbp/common.hpp"

namespace fbp {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// uniform partition of the unit interval
struct IntervalMesh {
  int n = 0;  // element count

  static IntervalMesh uniform(int n_elems);

  double h() const { return 1.0 / n; }
  int n_nodes() const { return n + 1; }
  double node(int i) const { return static_cast<double>(i) / n; }
};

// uniform grid on the unit square; the top edge x2 = 1 carries the free
// boundary, the two lateral edges and the bottom are the fixed part
struct SquareMesh {
  int n1 = 0;
  int n2 = 0;

  static SquareMesh uniform(int nx, int ny);

  double h1() const { return 1.0 / n1; }
  double h2() const { return 1.0 / n2; }
  int n_nodes() const { return (n1 + 1) * (n2 + 1); }
  int node_index(int i, int j) const { return i + j * (n1 + 1); }
  double x1(int i) const { return static_cast<double>(i) / n1; }
  double x2(int j) const { return static_cast<double>(j) / n2; }

  bool on_top(int i, int j) const { return j == n2 && i > 0 && i < n1; }
  // lateral sides plus bottom (includes the two top corners)
  bool on_fixed_boundary(int i, int j) const { return i == 0 || i == n1 || j == 0; }
  bool on_boundary(int i, int j) const { return on_fixed_boundary(i, j) || j == n2; }

  IntervalMesh top_interval() const { return IntervalMesh{n1}; }
};

// piecewise linear function on the interval, no boundary condition; used for
// controls, gradients and 1d data
struct Profile1D {
  IntervalMesh mesh;
  Eigen::VectorXd values;  // n+1 nodal values

  static Profile1D zero(const IntervalMesh& m);
  static Profile1D from_function(const IntervalMesh& m, const Fn1& f);

  double value_at(double x) const;
  double slope(int elem) const { return (values[elem + 1] - values[elem]) * mesh.n; }
};

// controls live in L2(I) with no endpoint condition, same data layout
using ControlProfile = Profile1D;

// piecewise linear boundary curve with both endpoints pinned to exactly zero
struct BoundaryCurve {
  IntervalMesh mesh;
  Eigen::VectorXd values;  // n+1 nodal values, values[0] == values[n] == 0

  static BoundaryCurve zero(const IntervalMesh& m);
  // throws unless the endpoint entries are exactly zero
  static BoundaryCurve from_nodal(const IntervalMesh& m, const Eigen::VectorXd& nodal);
  // pads interior values with zero endpoints
  static BoundaryCurve from_interior(const IntervalMesh& m, const Eigen::VectorXd& interior);

  double value_at(double x) const;
  double slope(int elem) const { return (values[elem + 1] - values[elem]) * mesh.n; }
  Eigen::VectorXd interior() const { return values.segment(1, mesh.n - 1); }
};

enum class FieldTag {
  free,              // no boundary condition
  zero_on_fixed,     // vanishes on sides and bottom
  zero_on_boundary,  // vanishes on the whole boundary
};

// bilinear function on the square grid
struct BulkField {
  SquareMesh mesh;
  Eigen::VectorXd values;  // nodal, indexed by SquareMesh::node_index
  FieldTag tag = FieldTag::free;

  static BulkField zero(const SquareMesh& m, FieldTag tag);
  // interpolates f at the nodes; boundary rows implied by the tag are forced
  // to exact zero and a mismatch beyond roundoff is an error
  static BulkField from_function(const SquareMesh& m, const Fn2& f, FieldTag tag);
  static BulkField from_nodal(const SquareMesh& m, const Eigen::VectorXd& nodal, FieldTag tag);

  double value(int i, int j) const { return values[mesh.node_index(i, j)]; }
  double value_at(double x1, double x2) const;
};

// vertical lift zeta(x1) * x2 of a boundary function; exactly representable on
// the grid, vanishes on the fixed boundary and restricts to zeta on top
BulkField extend(const BoundaryCurve& zeta, const SquareMesh& m);

struct NormKind {
  enum class Tag { W1inf0, W1p0, L2, Linf } tag = Tag::L2;
  double p = 2.0;

  static NormKind W1inf0() { return {Tag::W1inf0, 0.0}; }
  static NormKind W1p0(double p) { return {Tag::W1p0, p}; }
  static NormKind L2() { return {Tag::L2, 0.0}; }
  static NormKind Linf() { return {Tag::Linf, 0.0}; }
};

double compute_norm(const NormKind& kind, const Profile1D& f);
double compute_norm(const NormKind& kind, const BoundaryCurve& f);
double compute_norm(const NormKind& kind, const BulkField& f);

// full W^{1,p} norm (values plus gradient), quadrature based
double sobolev_norm_w1p(const BulkField& f, double p);

}  // namespace fbp
