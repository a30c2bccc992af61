#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dca {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform partition of the truncated size domain [0, x_max] into cells
///
///   cell i = [(i - 1/2) eps, (i + 1/2) eps),   i = 1, ..., m,
///
/// with m = floor(x_max / eps - 1/2). Cell numbers are 1-based everywhere in
/// the public API; Eigen storage is 0-based, so cell i lives at index i - 1.
/// The strip [0, eps/2) below cell 1 carries no unknown.
template <typename Scalar>
class BasicGrid {
 public:
  BasicGrid(Scalar epsilon, Scalar x_max) : epsilon_(epsilon), x_max_(x_max) {
    if (!(epsilon > Scalar(0) && epsilon < Scalar(1))) {
      throw std::domain_error("grid: epsilon must lie in (0, 1)");
    }
    if (!(x_max >= Scalar(3) * epsilon) || !std::isfinite(static_cast<double>(x_max))) {
      throw std::domain_error("grid: x_max must hold at least 3 cells");
    }
    using std::floor;
    m_ = static_cast<Index>(floor(x_max / epsilon - Scalar(0.5)));
    // The quotient may land one ulp on the wrong side of an integer.
    while (m_ > 0 && right(m_) > x_max) --m_;
    while (right(m_ + 1) <= x_max) ++m_;
    if (m_ < 3) {
      throw std::domain_error("grid: fewer than 3 cells (m = " + std::to_string(m_) + ")");
    }
  }

  /// Test-scale grid with exactly m >= 2 cells and x_max = (m + 1/2) eps.
  static BasicGrid with_cells(Scalar epsilon, Index m) {
    if (!(epsilon > Scalar(0) && epsilon < Scalar(1))) {
      throw std::domain_error("grid: epsilon must lie in (0, 1)");
    }
    if (m < 2) throw std::domain_error("grid: need at least 2 cells");
    return BasicGrid(epsilon, (Scalar(m) + Scalar(0.5)) * epsilon, m);
  }

  Scalar epsilon() const noexcept { return epsilon_; }
  Scalar x_max() const noexcept { return x_max_; }
  /// Number of cells m.
  Index size() const noexcept { return m_; }

  Scalar left(Index i) const noexcept { return (Scalar(i) - Scalar(0.5)) * epsilon_; }
  Scalar right(Index i) const noexcept { return (Scalar(i) + Scalar(0.5)) * epsilon_; }
  Scalar center(Index i) const noexcept { return Scalar(i) * epsilon_; }
  /// Right end of the last cell, (m + 1/2) eps.
  Scalar upper() const noexcept { return right(m_); }

  /// Cell number containing x, or nothing for x in the dust strip [0, eps/2)
  /// or beyond the truncation point.
  std::optional<Index> cell_of(Scalar x) const {
    if (x < Scalar(0)) throw std::domain_error("grid: negative size");
    const Index i = extended_index(x);
    if (i < 1 || i > m_) return std::nullopt;
    return i;
  }

  /// Right end of the (possibly extended) cell holding x:
  /// (floor(x/eps + 1/2) + 1/2) eps. Satisfies |r - x| <= eps.
  Scalar cell_right_end(Scalar x) const {
    if (x < Scalar(0)) throw std::domain_error("grid: negative size");
    return right(extended_index(x));
  }

  bool operator==(const BasicGrid& other) const noexcept {
    return epsilon_ == other.epsilon_ && m_ == other.m_;
  }

 private:
  // floor(x/eps + 1/2), corrected so that left(i) <= x < right(i) holds with
  // the same arithmetic as left()/right().
  Index extended_index(Scalar x) const {
    using std::floor;
    Index i = static_cast<Index>(floor(x / epsilon_ + Scalar(0.5)));
    if (x < left(i)) --i;
    else if (x >= right(i)) ++i;
    return i;
  }

  BasicGrid(Scalar epsilon, Scalar x_max, Index m) : epsilon_(epsilon), x_max_(x_max), m_(m) {}

  Scalar epsilon_;
  Scalar x_max_;
  Index m_ = 0;
};

using Grid = BasicGrid<double>;

}  // namespace dca
