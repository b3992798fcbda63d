#pragma once

// Bernstein shape functions of degree 1..3 on the segment (Dim=1) and the
// triangle (Dim=2), expressed through barycentric multi-indices. DoF layout is
// vertices first, then edge DoFs (walking each edge), then interior. All
// reference integrals are exact, via the factorial formula for barycentric
// monomials, and are stored normalized by the cell measure.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rdmood {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Exact integral of prod lambda_i^a_i over the reference simplex, divided by
/// its measure: d! * prod(a_i!) / (sum a_i + d)!.
template <int Dim>
double barycentric_monomial_integral(const std::array<int, Dim + 1>& a) {
  int total = 0;
  double num = 1.0;
  for (int i = 0; i <= Dim; ++i) {
    num *= factorial(a[i]);
    total += a[i];
  }
  return factorial(Dim) * num / factorial(total + Dim);
}

template <int Dim>
class BernsteinElement {
 public:
  static constexpr int NVerts = Dim + 1;
  using Bary = Eigen::Matrix<double, NVerts, 1>;

  explicit BernsteinElement(int degree) : degree_(degree) {
    if (degree < 1 || degree > 3) throw std::invalid_argument("Bernstein degree must be 1..3");
    build_layout();
    build_reference_integrals();
  }

  int degree() const { return degree_; }
  int n_dof() const { return static_cast<int>(alpha_.size()); }

  /// Barycentric multi-index of DoF i (components sum to the degree).
  const std::array<int, NVerts>& multi_index(int i) const { return alpha_[i]; }

  /// Equispaced barycentric node of DoF i (used for output coordinates only;
  /// Bernstein coefficients are not nodal values).
  Bary node(int i) const {
    Bary b;
    for (int v = 0; v < NVerts; ++v) b[v] = double(alpha_[i][v]) / degree_;
    return b;
  }

  double eval_one(int i, const Bary& x) const {
    double p = coef_[i];
    for (int v = 0; v < NVerts; ++v) p *= ipow(x[v], alpha_[i][v]);
    return p;
  }

  Eigen::VectorXd eval(const Bary& x) const {
    Eigen::VectorXd out(n_dof());
    for (int i = 0; i < n_dof(); ++i) out[i] = eval_one(i, x);
    return out;
  }

  /// d phi_i / d lambda_v at a barycentric point.
  double deriv_one(int i, int v, const Bary& x) const {
    const int a = alpha_[i][v];
    if (a == 0) return 0.0;
    double p = coef_[i] * a * ipow(x[v], a - 1);
    for (int w = 0; w < NVerts; ++w)
      if (w != v) p *= ipow(x[w], alpha_[i][w]);
    return p;
  }

  /// d^2 phi_i / (d lambda_v d lambda_w).
  double deriv2_one(int i, int v, int w, const Bary& x) const {
    const auto& a = alpha_[i];
    double p = coef_[i];
    std::array<int, NVerts> b = a;
    if (v == w) {
      if (a[v] < 2) return 0.0;
      p *= a[v] * (a[v] - 1);
      b[v] -= 2;
    } else {
      if (a[v] == 0 || a[w] == 0) return 0.0;
      p *= a[v] * a[w];
      b[v] -= 1;
      b[w] -= 1;
    }
    for (int u = 0; u < NVerts; ++u) p *= ipow(x[u], b[u]);
    return p;
  }

  // --- exact reference integrals (all divided by the cell measure) ---

  /// int phi_i phi_j / |K|.
  const Eigen::MatrixXd& mass_ref() const { return mass_; }
  /// int phi_i / |K| (lumped mass weights; strictly positive).
  const Eigen::VectorXd& lumped_ref() const { return lumped_; }
  /// int (d phi_i / d lambda_v) phi_j / |K|.
  const Eigen::MatrixXd& grad_mass_ref(int v) const { return grad_mass_[v]; }
  /// int (d phi_i / d lambda_v) / |K|.
  double grad_int_ref(int i, int v) const { return grad_int_(i, v); }

  /// Face f of a triangle is opposite vertex f; in 1D face f is vertex f
  /// itself. Returns int_f phi_i phi_j / |f| (point evaluation in 1D).
  const Eigen::MatrixXd& face_mass_ref(int f) const { return face_mass_[f]; }

  /// Local DoFs with support on face f, in order of increasing barycentric
  /// weight on the face's second vertex (2D) / just the vertex DoF (1D).
  const std::vector<int>& face_dofs(int f) const { return face_dofs_[f]; }

  /// The two (2D) or one (1D) local vertices forming face f.
  std::array<int, Dim> face_vertices(int f) const {
    if constexpr (Dim == 1) {
      return {f};
    } else {
      return {(f + 1) % 3, (f + 2) % 3};
    }
  }

 private:
  static double ipow(double x, int n) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= x;
    return p;
  }

  void push(std::array<int, NVerts> a) {
    double c = factorial(degree_);
    for (int v = 0; v < NVerts; ++v) c /= factorial(a[v]);
    alpha_.push_back(a);
    coef_.push_back(c);
  }

  void build_layout() {
    const int k = degree_;
    if constexpr (Dim == 1) {
      push({k, 0});
      push({0, k});
      for (int j = 1; j < k; ++j) push({k - j, j});
    } else {
      push({k, 0, 0});
      push({0, k, 0});
      push({0, 0, k});
      // edges (0,1), (1,2), (2,0), walking away from the first vertex
      for (int j = 1; j < k; ++j) push({k - j, j, 0});
      for (int j = 1; j < k; ++j) push({0, k - j, j});
      for (int j = 1; j < k; ++j) push({j, 0, k - j});
      if (k == 3) push({1, 1, 1});
    }
  }

  double monomial_product_integral(const std::array<int, NVerts>& a,
                                   const std::array<int, NVerts>& b) const {
    std::array<int, NVerts> s;
    for (int v = 0; v < NVerts; ++v) s[v] = a[v] + b[v];
    return barycentric_monomial_integral<Dim>(s);
  }

  void build_reference_integrals() {
    const int n = n_dof();
    mass_.resize(n, n);
    lumped_.resize(n);
    grad_int_.resize(n, NVerts);
    for (int v = 0; v < NVerts; ++v) grad_mass_[v].resize(n, n);

    for (int i = 0; i < n; ++i) {
      lumped_[i] = coef_[i] * barycentric_monomial_integral<Dim>(alpha_[i]);
      for (int j = 0; j < n; ++j)
        mass_(i, j) = coef_[i] * coef_[j] * monomial_product_integral(alpha_[i], alpha_[j]);
      for (int v = 0; v < NVerts; ++v) {
        // d/d lambda_v of the monomial, integrated against phi_j
        const int a = alpha_[i][v];
        if (a == 0) {
          grad_int_(i, v) = 0.0;
          for (int j = 0; j < n; ++j) grad_mass_[v](i, j) = 0.0;
          continue;
        }
        std::array<int, NVerts> da = alpha_[i];
        da[v] -= 1;
        const double c = coef_[i] * a;
        grad_int_(i, v) = c * barycentric_monomial_integral<Dim>(da);
        for (int j = 0; j < n; ++j)
          grad_mass_[v](i, j) = c * coef_[j] * monomial_product_integral(da, alpha_[j]);
      }
    }

    // face restrictions
    for (int f = 0; f < NVerts; ++f) {
      face_mass_[f].setZero(n, n);
      face_dofs_[f].clear();
      if constexpr (Dim == 1) {
        for (int i = 0; i < n; ++i) {
          if (alpha_[i][f] == degree_) face_dofs_[f].push_back(i);
          for (int j = 0; j < n; ++j)
            face_mass_[f](i, j) =
                (alpha_[i][f] == degree_ && alpha_[j][f] == degree_) ? 1.0 : 0.0;
        }
      } else {
        const int va = (f + 1) % 3, vb = (f + 2) % 3;
        std::vector<std::pair<int, int>> on_face;  // (weight on vb, dof)
        for (int i = 0; i < n; ++i)
          if (alpha_[i][f] == 0) on_face.push_back({alpha_[i][vb], i});
        std::sort(on_face.begin(), on_face.end());
        for (auto& [w, i] : on_face) face_dofs_[f].push_back(i);
        for (int i = 0; i < n; ++i) {
          if (alpha_[i][f] != 0) continue;
          for (int j = 0; j < n; ++j) {
            if (alpha_[j][f] != 0) continue;
            // restriction is a 1D Bernstein monomial pair in (lambda_va, lambda_vb)
            const std::array<int, 2> s = {alpha_[i][va] + alpha_[j][va],
                                          alpha_[i][vb] + alpha_[j][vb]};
            face_mass_[f](i, j) =
                coef_[i] * coef_[j] * barycentric_monomial_integral<1>(s);
          }
        }
      }
    }
  }

  int degree_;
  std::vector<std::array<int, NVerts>> alpha_;
  std::vector<double> coef_;
  Eigen::MatrixXd mass_;
  Eigen::VectorXd lumped_;
  Eigen::MatrixXd grad_int_;
  std::array<Eigen::MatrixXd, NVerts> grad_mass_;
  std::array<Eigen::MatrixXd, NVerts> face_mass_;
  std::array<std::vector<int>, NVerts> face_dofs_;
};

}  // namespace rdmood
