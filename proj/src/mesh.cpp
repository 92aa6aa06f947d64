#include "fbp/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "fbp/quadrature.hpp"

namespace fbp {

IntervalMesh IntervalMesh::uniform(int n_elems) {
  if (n_elems < 2) throw ConfigError("interval mesh needs at least 2 elements");
  return IntervalMesh{n_elems};
}

SquareMesh SquareMesh::uniform(int nx, int ny) {
  if (nx < 2 || ny < 2) throw ConfigError("square mesh needs at least 2 elements per direction");
  return SquareMesh{nx, ny};
}

Profile1D Profile1D::zero(const IntervalMesh& m) {
  return Profile1D{m, Eigen::VectorXd::Zero(m.n_nodes())};
}

Profile1D Profile1D::from_function(const IntervalMesh& m, const Fn1& f) {
  Eigen::VectorXd v(m.n_nodes());
  for (int i = 0; i <= m.n; ++i) v[i] = f(m.node(i));
  return Profile1D{m, std::move(v)};
}

namespace {
double p1_value_at(const IntervalMesh& m, const Eigen::VectorXd& vals, double x) {
  const double clamped = std::clamp(x, 0.0, 1.0);
  int e = std::min(static_cast<int>(clamped * m.n), m.n - 1);
  const double t = clamped * m.n - e;
  return vals[e] * (1.0 - t) + vals[e + 1] * t;
}
}  // namespace

double Profile1D::value_at(double x) const { return p1_value_at(mesh, values, x); }

BoundaryCurve BoundaryCurve::zero(const IntervalMesh& m) {
  return BoundaryCurve{m, Eigen::VectorXd::Zero(m.n_nodes())};
}

BoundaryCurve BoundaryCurve::from_nodal(const IntervalMesh& m, const Eigen::VectorXd& nodal) {
  if (nodal.size() != m.n_nodes()) throw ConfigError("curve nodal vector has wrong length");
  if (nodal[0] != 0.0 || nodal[m.n] != 0.0) {
    throw ConfigError("boundary curve endpoints must be exactly zero");
  }
  return BoundaryCurve{m, nodal};
}

BoundaryCurve BoundaryCurve::from_interior(const IntervalMesh& m, const Eigen::VectorXd& interior) {
  if (interior.size() != m.n - 1) throw ConfigError("curve interior vector has wrong length");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.n_nodes());
  v.segment(1, m.n - 1) = interior;
  return BoundaryCurve{m, std::move(v)};
}

double BoundaryCurve::value_at(double x) const { return p1_value_at(mesh, values, x); }

BulkField BulkField::zero(const SquareMesh& m, FieldTag tag) {
  return BulkField{m, Eigen::VectorXd::Zero(m.n_nodes()), tag};
}

namespace {
void enforce_tag(const SquareMesh& m, Eigen::VectorXd& v, FieldTag tag) {
  if (tag == FieldTag::free) return;
  const double scale = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-12 * (1.0 + scale);
  for (int j = 0; j <= m.n2; ++j) {
    for (int i = 0; i <= m.n1; ++i) {
      const bool constrained = (tag == FieldTag::zero_on_boundary) ? m.on_boundary(i, j)
                                                                   : m.on_fixed_boundary(i, j);
      if (!constrained) continue;
      double& x = v[m.node_index(i, j)];
      if (std::abs(x) > tol) throw ConfigError("field does not satisfy its boundary tag");
      x = 0.0;
    }
  }
}
}  // namespace

BulkField BulkField::from_function(const SquareMesh& m, const Fn2& f, FieldTag tag) {
  Eigen::VectorXd v(m.n_nodes());
  for (int j = 0; j <= m.n2; ++j)
    for (int i = 0; i <= m.n1; ++i) v[m.node_index(i, j)] = f(m.x1(i), m.x2(j));
  enforce_tag(m, v, tag);
  return BulkField{m, std::move(v), tag};
}

BulkField BulkField::from_nodal(const SquareMesh& m, const Eigen::VectorXd& nodal, FieldTag tag) {
  if (nodal.size() != m.n_nodes()) throw ConfigError("bulk nodal vector has wrong length");
  Eigen::VectorXd v = nodal;
  enforce_tag(m, v, tag);
  return BulkField{m, std::move(v), tag};
}

double BulkField::value_at(double x1, double x2) const {
  const double cx = std::clamp(x1, 0.0, 1.0);
  const double cy = std::clamp(x2, 0.0, 1.0);
  int e1 = std::min(static_cast<int>(cx * mesh.n1), mesh.n1 - 1);
  int e2 = std::min(static_cast<int>(cy * mesh.n2), mesh.n2 - 1);
  const double s = cx * mesh.n1 - e1;
  const double t = cy * mesh.n2 - e2;
  const double v00 = value(e1, e2), v10 = value(e1 + 1, e2);
  const double v11 = value(e1 + 1, e2 + 1), v01 = value(e1, e2 + 1);
  return v00 * (1 - s) * (1 - t) + v10 * s * (1 - t) + v11 * s * t + v01 * (1 - s) * t;
}

BulkField extend(const BoundaryCurve& zeta, const SquareMesh& m) {
  if (zeta.mesh.n != m.n1) throw ConfigError("extend: curve mesh does not match square grid");
  Eigen::VectorXd v(m.n_nodes());
  for (int j = 0; j <= m.n2; ++j)
    for (int i = 0; i <= m.n1; ++i) v[m.node_index(i, j)] = zeta.values[i] * m.x2(j);
  return BulkField{m, std::move(v), FieldTag::zero_on_fixed};
}

namespace {

double norm_1d(const NormKind& kind, const IntervalMesh& m, const Eigen::VectorXd& vals) {
  switch (kind.tag) {
    case NormKind::Tag::W1inf0: {
      double best = 0.0;
      for (int e = 0; e < m.n; ++e)
        best = std::max(best, std::abs((vals[e + 1] - vals[e]) * m.n));
      return best;
    }
    case NormKind::Tag::W1p0: {
      if (!(kind.p >= 1.0)) throw ConfigError("norm exponent must be >= 1");
      double acc = 0.0;
      for (int e = 0; e < m.n; ++e)
        acc += m.h() * std::pow(std::abs((vals[e + 1] - vals[e]) * m.n), kind.p);
      return std::pow(acc, 1.0 / kind.p);
    }
    case NormKind::Tag::L2: {
      double acc = 0.0;
      for (int e = 0; e < m.n; ++e) {
        for (const auto& q : quad::gauss2(m.node(e), m.node(e + 1))) {
          const double t = q.x * m.n - e;
          const double val = vals[e] * (1.0 - t) + vals[e + 1] * t;
          acc += q.w * val * val;
        }
      }
      return std::sqrt(acc);
    }
    case NormKind::Tag::Linf:
      return vals.size() ? vals.cwiseAbs().maxCoeff() : 0.0;
  }
  throw ConfigError("unknown norm kind");
}

// gradient of the bilinear interpolant at local coordinates (s,t) of element (e1,e2)
std::array<double, 2> q1_gradient(const SquareMesh& m, const Eigen::VectorXd& v, int e1, int e2,
                                  double s, double t) {
  const double v00 = v[m.node_index(e1, e2)];
  const double v10 = v[m.node_index(e1 + 1, e2)];
  const double v11 = v[m.node_index(e1 + 1, e2 + 1)];
  const double v01 = v[m.node_index(e1, e2 + 1)];
  const double ds = (v10 - v00) * (1.0 - t) + (v11 - v01) * t;
  const double dt = (v01 - v00) * (1.0 - s) + (v11 - v10) * s;
  return {ds / m.h1(), dt / m.h2()};
}

}  // namespace

double compute_norm(const NormKind& kind, const Profile1D& f) {
  return norm_1d(kind, f.mesh, f.values);
}

double compute_norm(const NormKind& kind, const BoundaryCurve& f) {
  return norm_1d(kind, f.mesh, f.values);
}

double compute_norm(const NormKind& kind, const BulkField& f) {
  const SquareMesh& m = f.mesh;
  switch (kind.tag) {
    case NormKind::Tag::Linf:
      return f.values.size() ? f.values.cwiseAbs().maxCoeff() : 0.0;
    case NormKind::Tag::W1inf0: {
      // |grad|^2 is convex on each element, so corners suffice
      double best = 0.0;
      for (int e2 = 0; e2 < m.n2; ++e2)
        for (int e1 = 0; e1 < m.n1; ++e1)
          for (double s : {0.0, 1.0})
            for (double t : {0.0, 1.0}) {
              const auto g = q1_gradient(m, f.values, e1, e2, s, t);
              best = std::max(best, std::hypot(g[0], g[1]));
            }
      return best;
    }
    case NormKind::Tag::W1p0:
    case NormKind::Tag::L2: {
      const bool grad = kind.tag == NormKind::Tag::W1p0;
      const double p = grad ? kind.p : 2.0;
      if (grad && !(p >= 1.0)) throw ConfigError("norm exponent must be >= 1");
      double acc = 0.0;
      for (int e2 = 0; e2 < m.n2; ++e2) {
        for (int e1 = 0; e1 < m.n1; ++e1) {
          for (const auto& qx : quad::gauss2(m.x1(e1), m.x1(e1 + 1))) {
            for (const auto& qy : quad::gauss2(m.x2(e2), m.x2(e2 + 1))) {
              const double s = qx.x * m.n1 - e1;
              const double t = qy.x * m.n2 - e2;
              double val;
              if (grad) {
                const auto g = q1_gradient(m, f.values, e1, e2, s, t);
                val = std::hypot(g[0], g[1]);
              } else {
                const double v00 = f.value(e1, e2), v10 = f.value(e1 + 1, e2);
                const double v11 = f.value(e1 + 1, e2 + 1), v01 = f.value(e1, e2 + 1);
                val = v00 * (1 - s) * (1 - t) + v10 * s * (1 - t) + v11 * s * t + v01 * (1 - s) * t;
              }
              acc += qx.w * qy.w * std::pow(std::abs(val), p);
            }
          }
        }
      }
      return std::pow(acc, 1.0 / p);
    }
  }
  throw ConfigError("unknown norm kind");
}

double sobolev_norm_w1p(const BulkField& f, double p) {
  const double grad_part = compute_norm(NormKind::W1p0(p), f);
  // value part with the same quadrature as the gradient part
  const SquareMesh& m = f.mesh;
  double acc = 0.0;
  for (int e2 = 0; e2 < m.n2; ++e2)
    for (int e1 = 0; e1 < m.n1; ++e1)
      for (const auto& qx : quad::gauss2(m.x1(e1), m.x1(e1 + 1)))
        for (const auto& qy : quad::gauss2(m.x2(e2), m.x2(e2 + 1)))
          acc += qx.w * qy.w * std::pow(std::abs(f.value_at(qx.x, qy.x)), p);
  return std::pow(acc + std::pow(grad_part, p), 1.0 / p);
}

}  // namespace fbp
