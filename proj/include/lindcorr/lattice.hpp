#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lindcorr {

using cd = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// Integer lattice translation vector, one component per spatial dimension.
using Displacement = std::vector<int>;

enum class Statistics { Fermion, Boson };

std::string_view statistics_name(Statistics s);
Statistics parse_statistics(std::string_view name);

/// Square lattice with `bands` modes per cell. An empty `extent` means the
/// infinite lattice, which only the momentum-space and asymptotic analyses
/// accept.
struct LatticeSpec {
  int dims = 1;
  int bands = 1;
  std::vector<int> extent;

  static LatticeSpec infinite(int dims, int bands = 1);
  static LatticeSpec finite(std::vector<int> extent, int bands = 1);

  bool is_finite() const { return !extent.empty(); }
  /// Number of unit cells; requires a finite lattice.
  std::size_t cells() const;
  /// Mode count N = bands * cells.
  std::size_t modes() const { return cells() * static_cast<std::size_t>(bands); }
  /// Majorana block size 2b.
  int block() const { return 2 * bands; }

  /// Reduces r modulo the extent into [0, L_a).
  Displacement wrap(const Displacement& r) const;
  /// Minimal-image representative in (-L_a/2, L_a/2].
  Displacement minimal_image(const Displacement& r) const;
  /// Row-major linear cell index of a wrapped displacement.
  std::size_t cell_index(const Displacement& r) const;
  Displacement cell_at(std::size_t index) const;

  void check() const;
};

/// Uniform grid over a box of per-dimension sizes; row-major, last axis fastest.
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int dims() const { return static_cast<int>(sizes_.size()); }
  std::size_t points() const { return points_; }

  std::size_t index(const Displacement& r) const;  // wraps periodically
  Displacement at(std::size_t index) const;
  /// Momentum vector k_a = 2 pi m_a / L_a of a grid index.
  std::vector<double> momentum(std::size_t index) const;

 private:
  std::vector<int> sizes_;
  std::size_t points_ = 0;
};

int max_abs_component(const Displacement& r);
Displacement negate(const Displacement& r);
Displacement add(const Displacement& a, const Displacement& b);
Displacement subtract(const Displacement& a, const Displacement& b);
double dot(const std::vector<double>& k, const Displacement& r);
std::string format_displacement(const Displacement& r);

/// Worker count from LINDCORR_THREADS, defaulting to hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over worker_count() threads in contiguous
/// chunks. The first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lindcorr
