#pragma once

#include "jordantp/core.hpp"

#include <type_traits>

namespace jordantp {

/**
 * Self-adjoint n x n matrices over Scalar (double or std::complex<double>)
 * with the usual order, unit = identity and rank-one projections as atoms.
 *
 * Coordinates: the n diagonal entries, then the strict upper triangle in
 * row-major order; for complex entries each off-diagonal entry contributes
 * its (re, im) pair. Coordinates are raw matrix entries, so the Euclidean dot
 * of coordinate vectors is not the trace pairing.
 */
template <class Scalar>
class MatrixAlgebra {
 public:
  static constexpr bool is_complex = !std::is_same_v<Scalar, double>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit MatrixAlgebra(int n) {
    if (n < 1) throw InvalidArgument("matrix model needs n >= 1");
    desc_.kind = is_complex ? BackendKind::herm_matrices : BackendKind::sym_matrices;
    desc_.n = n;
    const auto nn = static_cast<std::size_t>(n);
    desc_.ambient_dim = nn + (is_complex ? 2 : 1) * (nn * (nn - 1) / 2);
    desc_.info_capacity = nn;
    desc_.symmetric_tp = true;
    desc_.has_inner_product = true;
    desc_.validate();
  }

  const ModelDescriptor& descriptor() const { return desc_; }
  Eigen::Index n() const { return desc_.n; }

  Matrix to_matrix(const Element& a) const {
    Matrix m(n(), n());
    Eigen::Index idx = n();
    for (Eigen::Index i = 0; i < n(); ++i) m(i, i) = Scalar(a.coords[i]);
    for (Eigen::Index i = 0; i < n(); ++i) {
      for (Eigen::Index j = i + 1; j < n(); ++j) {
        if constexpr (is_complex) {
          m(i, j) = Scalar(a.coords[idx], a.coords[idx + 1]);
          idx += 2;
        } else {
          m(i, j) = a.coords[idx++];
        }
        m(j, i) = conj(m(i, j));
      }
    }
    return m;
  }

  /// Packs the self-adjoint part of m.
  Element from_matrix(const Matrix& m) const {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::VectorXd c(static_cast<Eigen::Index>(desc_.ambient_dim));
    Eigen::Index idx = n();
    for (Eigen::Index i = 0; i < n(); ++i) c[i] = std::real(h(i, i));
    for (Eigen::Index i = 0; i < n(); ++i) {
      for (Eigen::Index j = i + 1; j < n(); ++j) {
        if constexpr (is_complex) {
          c[idx++] = h(i, j).real();
          c[idx++] = h(i, j).imag();
        } else {
          c[idx++] = h(i, j);
        }
      }
    }
    return Element(std::move(c));
  }

  Element projector(const Vector& v) const { return from_matrix(v * v.adjoint()); }

  Element order_unit() const { return from_matrix(Matrix::Identity(n(), n())); }

  SpectralForm spectral(const Element& a, const Tolerance& tol) const {
    const Matrix m = to_matrix(a);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw Error("self-adjoint eigensolver failed");
    // Eigen sorts ascending; walk from the top.
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const Matrix& evecs = solver.eigenvectors();
    const Eigen::Index dim = n();
    const double diameter = evals[dim - 1] - evals[0];

    std::vector<SpectralPair> pairs;
    pairs.reserve(static_cast<std::size_t>(dim));
    Eigen::Index hi = dim - 1;
    while (hi >= 0) {
      Eigen::Index lo = hi;
      while (lo > 0 && evals[lo] - evals[lo - 1] <= tol.eig_cluster * diameter) --lo;
      if (lo == hi) {
        pairs.push_back({evals[hi], projector(evecs.col(hi))});
      } else {
        const Matrix basis = rebase_eigenspace(evecs.middleCols(lo, hi - lo + 1));
        for (Eigen::Index k = 0; k < basis.cols(); ++k) {
          const Vector v = basis.col(k);
          pairs.push_back({std::real((v.adjoint() * m * v)(0, 0)), projector(v)});
        }
      }
      hi = lo - 1;
    }
    return detail::sorted_form(std::move(pairs));
  }

  /// tr(e b): the state of a rank-one projection e, and the trace pairing.
  double state_value(const Element& e, const Element& b) const { return trace_pairing(to_matrix(e), to_matrix(b)); }
  double native_inner(const Element& a, const Element& b) const { return trace_pairing(to_matrix(a), to_matrix(b)); }

  Element atom_from_param(const AtomParam& param, const Tolerance& tol) const {
    if (param.direction.size() != n()) throw InvalidArgument("atom direction has wrong length");
    if (std::abs(param.direction.norm() - 1.0) > tol.check_tol) throw InvalidArgument("atom direction is not a unit vector");
    if constexpr (is_complex) {
      return projector(param.direction);
    } else {
      if (!param.is_real(tol.check_tol)) throw InvalidArgument("real symmetric model needs a real atom direction");
      return projector(param.real_part());
    }
  }

  /// Columns of a Haar-distributed unitary (QR of a Gaussian matrix).
  Matrix random_unitary(Rng& rng) const {
    Matrix g(n(), n());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index j = 0; j < n(); ++j) {
      for (Eigen::Index i = 0; i < n(); ++i) {
        if constexpr (is_complex) {
          const double re = normal(rng);
          const double im = normal(rng);
          g(i, j) = Scalar(re, im);
        } else {
          g(i, j) = normal(rng);
        }
      }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n(), n());
  }

  std::vector<Element> random_frame(Rng& rng) const {
    const Matrix q = random_unitary(rng);
    std::vector<Element> frame;
    for (Eigen::Index k = 0; k < n(); ++k) frame.push_back(projector(q.col(k)));
    return frame;
  }

  Element random_coords(Rng& rng) const {
    return Element(gaussian_vector(rng, static_cast<Eigen::Index>(desc_.ambient_dim)));
  }

  std::optional<Eigen::VectorXd> evaluation_point(const Element&) const { return std::nullopt; }

 private:
  static Scalar conj(const Scalar& s) {
    if constexpr (is_complex) {
      return std::conj(s);
    } else {
      return s;
    }
  }

  static double trace_pairing(const Matrix& a, const Matrix& b) {
    return std::real(a.cwiseProduct(b.conjugate()).sum());
  }

  /// Deterministic orthonormal basis of span(cols): Gram-Schmidt on the
  /// columns of the eigenspace projector, always taking the column with the
  /// largest remaining norm (lowest index on ties), then fixing the phase so
  /// the first nonzero coordinate is real and positive. Depends only on the
  /// eigenspace, not on the basis the solver happened to return.
  static Matrix rebase_eigenspace(const Matrix& cols) {
    const Eigen::Index dim = cols.rows();
    const Eigen::Index k = cols.cols();
    Matrix residual = cols * cols.adjoint();
    Matrix basis(dim, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      Eigen::Index best = 0;
      double best_norm = -1.0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double nrm = residual.col(j).norm();
        if (nrm > best_norm * (1.0 + 1e-12)) {
          best_norm = nrm;
          best = j;
        }
      }
      Vector v = residual.col(best) / best_norm;
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(v[i]) > 1e-12) {
          v *= std::abs(v[i]) / v[i];
          break;
        }
      }
      basis.col(c) = v;
      residual -= v * (v.adjoint() * residual);
    }
    return basis;
  }

  ModelDescriptor desc_;
};

using SymMatrices = MatrixAlgebra<double>;
using HermMatrices = MatrixAlgebra<std::complex<double>>;

}  // namespace jordantp
