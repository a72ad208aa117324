#pragma once

#include "nilgeo/report.hpp"
#include "nilgeo/subspace.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>
#include <string>
#include <vector>

namespace nilgeo {

using RMatrix = Matrix<Rational>;
using RVector = Vector<Rational>;

inline RVector flatten(const RMatrix& m) {
  RVector v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

/// Real Lie algebra of m x m rational matrices given by a basis. The first
/// entries of `split_cartan` index a maximal split abelian subalgebra.
class MatrixLieAlgebra {
 public:
  MatrixLieAlgebra() = default;

  /// Checks independence, bracket closure (NotClosed names the pair) and that
  /// the cartan elements commute and act semisimply with real spectrum.
  MatrixLieAlgebra(std::string name, std::vector<RMatrix> basis, std::vector<std::size_t> split_cartan)
      : name_(std::move(name)), basis_(std::move(basis)), cartan_(std::move(split_cartan)) {
    if (basis_.empty()) throw DimensionMismatch("matrix algebra needs a nonempty basis");
    size_ = basis_.front().rows();
    std::vector<RVector> flat;
    for (const auto& b : basis_) {
      if (b.rows() != size_ || b.cols() != size_) throw DimensionMismatch("basis matrices differ in size");
      flat.push_back(flatten(b));
    }
    try {
      coords_ = LinearCoordinates<Rational>(size_ * size_, flat);
    } catch (const SingularMatrix&) {
      throw DimensionMismatch("basis matrices are linearly dependent");
    }
    const std::size_t n = dim();
    ad_.assign(n, RMatrix(n, n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto c = coords_.coordinates(flatten(commutator(basis_[i], basis_[j])));
        if (!c)
          throw NotClosed("[b" + std::to_string(i + 1) + ", b" + std::to_string(j + 1) +
                          "] leaves the span of the basis");
        for (std::size_t k = 0; k < n; ++k) ad_[i](k, j) = (*c)[k];
      }
    check_cartan();
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  std::size_t matrix_size() const { return size_; }
  std::size_t rank() const { return cartan_.size(); }
  const std::vector<RMatrix>& basis() const { return basis_; }
  const std::vector<std::size_t>& split_cartan() const { return cartan_; }

  RMatrix element(const RVector& x) const {
    check(x);
    RMatrix m(size_, size_);
    for (std::size_t i = 0; i < dim(); ++i)
      if (x[i] != 0) m = m + x[i] * basis_[i];
    return m;
  }

  /// Coordinates of a matrix in the basis; nullopt if it lies outside the algebra.
  std::optional<RVector> coordinates(const RMatrix& m) const { return coords_.coordinates(flatten(m)); }

  RVector bracket(const RVector& x, const RVector& y) const { return ad(x).apply(y); }

  /// Matrix of y -> [x, y] in the basis coordinates.
  RMatrix ad(const RVector& x) const {
    check(x);
    RMatrix m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      if (x[i] != 0) m = m + x[i] * ad_[i];
    return m;
  }
  const RMatrix& ad_basis(std::size_t i) const { return ad_.at(i); }

  RVector cartan_vector(std::size_t i) const { return unit<Rational>(dim(), cartan_.at(i)); }

  /// tr(ad x ad y).
  Rational killing(const RVector& x, const RVector& y) const { return trace(ad(x) * ad(y)); }

  /// Fixed points of the Cartan involution X -> -X^T.
  Subspace<Rational> compact_part() const {
    std::vector<RVector> cols;
    for (const auto& b : basis_) cols.push_back(flatten(b + b.transpose()));
    return Subspace<Rational>::span(dim(), kernel(RMatrix::from_columns(cols, size_ * size_)));
  }

  void check(const RVector& x) const {
    if (x.size() != dim()) throw DimensionMismatch("vector length differs from algebra dimension");
  }

  friend bool operator==(const MatrixLieAlgebra& a, const MatrixLieAlgebra& b) {
    return a.name_ == b.name_ && a.basis_ == b.basis_ && a.cartan_ == b.cartan_;
  }

 private:
  void check_cartan() const {
    if (cartan_.empty()) throw BadCartan("split cartan is empty");
    for (auto c : cartan_)
      if (c >= dim()) throw BadCartan("split cartan index " + std::to_string(c + 1) + " is out of range");
    for (std::size_t a = 0; a < cartan_.size(); ++a)
      for (std::size_t b = a + 1; b < cartan_.size(); ++b)
        if (!commutator(basis_[cartan_[a]], basis_[cartan_[b]]).is_zero_matrix())
          throw BadCartan("split cartan elements " + std::to_string(cartan_[a] + 1) + " and " +
                          std::to_string(cartan_[b] + 1) + " do not commute");
    for (auto c : cartan_) {
      const std::string which = "ad of split cartan element " + std::to_string(c + 1);
      Eigen::MatrixXd m(dim(), dim());
      for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(ad_[c](i, j));
      Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
      std::vector<Rational> values;
      bool snapped = true;
      for (const auto& ev : solver.eigenvalues()) {
        if (std::abs(ev.imag()) > 1e-9) throw BadCartan(which + " has a non-real eigenvalue");
        Rational q = rationalize(ev.real());
        if (std::abs(to_double(q) - ev.real()) > 1e-9) snapped = false;
        if (std::find(values.begin(), values.end(), q) == values.end()) values.push_back(q);
      }
      // Irrational spectra are reported by restricted_roots.
      if (!snapped) continue;
      std::size_t total = 0;
      for (const auto& q : values) total += kernel(RMatrix(ad_[c] - q * RMatrix::identity(dim()))).size();
      if (total != dim()) throw BadCartan(which + " is not diagonalizable");
    }
  }

  std::string name_;
  std::size_t size_ = 0;
  std::vector<RMatrix> basis_;
  std::vector<std::size_t> cartan_;
  LinearCoordinates<Rational> coords_;
  std::vector<RMatrix> ad_;
};

/// Eigenvalues of a rational matrix, estimated in binary64 and snapped to
/// rationals with denominator <= 1000 (tolerance 1e-9). Throws
/// NonSemisimpleResidue if a real eigenvalue does not snap, or if the exact
/// eigenspaces of the snapped values do not fill the space.
inline std::vector<Rational> rational_spectrum(const RMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      d(i, j) = to_double(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(d, false);
  std::vector<Rational> values;
  for (const auto& ev : solver.eigenvalues()) {
    if (std::abs(ev.imag()) > 1e-9) throw NonSemisimpleResidue("non-real eigenvalue");
    Rational q = rationalize(ev.real());
    if (std::abs(to_double(q) - ev.real()) > 1e-9)
      throw NonSemisimpleResidue("eigenvalue " + std::to_string(ev.real()) + " has no small rational form");
    if (std::find(values.begin(), values.end(), q) == values.end()) values.push_back(q);
  }
  std::sort(values.begin(), values.end());
  std::size_t total = 0;
  for (const auto& q : values) total += kernel(RMatrix(m - q * RMatrix::identity(m.rows()))).size();
  if (total != m.rows()) throw NonSemisimpleResidue("eigenspaces do not span: not diagonalizable over Q");
  return values;
}

}  // namespace nilgeo
