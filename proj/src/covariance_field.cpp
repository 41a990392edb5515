#include "lindcorr/covariance_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "lindcorr/error.hpp"

namespace lindcorr {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place transform of `howmany` contiguous arrays laid out on the grid.
void fft_many(std::vector<cd>& buf, const GridShape& grid, int howmany, int sign) {
  const int rank = grid.dims();
  std::vector<int> n(grid.sizes().begin(), grid.sizes().end());
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  const int dist = static_cast<int>(grid.points());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(rank, n.data(), howmany, data, nullptr, 1, dist, data, nullptr, 1,
                              dist, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw Error(ErrorKind::InvalidArgument, "FFT planning failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

void CovarianceField::allocate_real() { real_data.assign(grid.points() * block_size(), 0.0); }

void CovarianceField::allocate_momentum() {
  momentum_data.assign(grid.points() * block_size(), cd(0));
}

RMatrix CovarianceField::gamma(const Displacement& r) const {
  if (!has_real()) throw Error(ErrorKind::MissingRepresentation, "no real-space data");
  const int n = block();
  return Eigen::Map<const RMatrix>(real_data.data() + grid.index(r) * block_size(), n, n);
}

double CovarianceField::entry(const Displacement& r, int p, int q) const {
  if (!has_real()) throw Error(ErrorKind::MissingRepresentation, "no real-space data");
  return real_data[grid.index(r) * block_size() + static_cast<std::size_t>(q * block() + p)];
}

void CovarianceField::set_gamma(const Displacement& r, const RMatrix& g) {
  const int n = block();
  Eigen::Map<RMatrix>(real_data.data() + grid.index(r) * block_size(), n, n) = g;
}

CMatrix CovarianceField::gamma_k(std::size_t index) const {
  if (!has_momentum()) throw Error(ErrorKind::MissingRepresentation, "no momentum-space data");
  const int n = block();
  return Eigen::Map<const CMatrix>(momentum_data.data() + index * block_size(), n, n);
}

void CovarianceField::set_gamma_k(std::size_t index, const CMatrix& g) {
  const int n = block();
  Eigen::Map<CMatrix>(momentum_data.data() + index * block_size(), n, n) = g;
}

CovarianceField fourier_pair(const CovarianceField& field, FourierDirection direction) {
  CovarianceField out = field;
  const std::size_t P = field.grid.points();
  const std::size_t E = field.block_size();
  std::vector<cd> buf(P * E);
  if (direction == FourierDirection::ToMomentum) {
    if (!field.has_real()) throw Error(ErrorKind::MissingRepresentation, "no real-space data");
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t e = 0; e < E; ++e) buf[e * P + p] = field.real_data[p * E + e];
    fft_many(buf, field.grid, static_cast<int>(E), FFTW_FORWARD);
    out.allocate_momentum();
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t e = 0; e < E; ++e) out.momentum_data[p * E + e] = buf[e * P + p];
  } else {
    if (!field.has_momentum())
      throw Error(ErrorKind::MissingRepresentation, "no momentum-space data");
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t e = 0; e < E; ++e) buf[e * P + p] = field.momentum_data[p * E + e];
    fft_many(buf, field.grid, static_cast<int>(E), FFTW_BACKWARD);
    out.allocate_real();
    const double inv = 1.0 / static_cast<double>(P);
    double imag = 0.0;
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t e = 0; e < E; ++e) {
        const cd v = buf[e * P + p] * inv;
        out.real_data[p * E + e] = v.real();
        imag = std::max(imag, std::abs(v.imag()));
      }
    out.imag_residue = imag;
  }
  return out;
}

}  // namespace lindcorr
