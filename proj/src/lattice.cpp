#include "lindcorr/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "lindcorr/error.hpp"

namespace lindcorr {

std::string_view statistics_name(Statistics s) {
  return s == Statistics::Fermion ? "fermion" : "boson";
}

Statistics parse_statistics(std::string_view name) {
  if (name == "fermion" || name == "Fermion") return Statistics::Fermion;
  if (name == "boson" || name == "Boson") return Statistics::Boson;
  throw Error(ErrorKind::ParseError, "unknown statistics '" + std::string(name) + "'");
}

LatticeSpec LatticeSpec::infinite(int dims, int bands) {
  LatticeSpec l;
  l.dims = dims;
  l.bands = bands;
  l.check();
  return l;
}

LatticeSpec LatticeSpec::finite(std::vector<int> extent, int bands) {
  LatticeSpec l;
  l.dims = static_cast<int>(extent.size());
  l.bands = bands;
  l.extent = std::move(extent);
  l.check();
  return l;
}

void LatticeSpec::check() const {
  if (dims < 1) throw Error(ErrorKind::InvalidArgument, "lattice needs dims >= 1");
  if (bands < 1) throw Error(ErrorKind::InvalidArgument, "lattice needs bands >= 1");
  if (is_finite()) {
    if (static_cast<int>(extent.size()) != dims)
      throw Error(ErrorKind::InvalidArgument, "extent length does not match dims");
    for (int L : extent)
      if (L < 1) throw Error(ErrorKind::InvalidArgument, "extent entries must be >= 1");
  }
}

std::size_t LatticeSpec::cells() const {
  if (!is_finite())
    throw Error(ErrorKind::InvalidArgument, "cell count requested for an infinite lattice");
  std::size_t n = 1;
  for (int L : extent) n *= static_cast<std::size_t>(L);
  return n;
}

Displacement LatticeSpec::wrap(const Displacement& r) const {
  Displacement w(r.size());
  for (std::size_t a = 0; a < r.size(); ++a) {
    const int L = extent[a];
    w[a] = ((r[a] % L) + L) % L;
  }
  return w;
}

Displacement LatticeSpec::minimal_image(const Displacement& r) const {
  Displacement w = wrap(r);
  for (std::size_t a = 0; a < w.size(); ++a)
    if (2 * w[a] > extent[a]) w[a] -= extent[a];
  return w;
}

std::size_t LatticeSpec::cell_index(const Displacement& r) const {
  const Displacement w = wrap(r);
  std::size_t idx = 0;
  for (std::size_t a = 0; a < w.size(); ++a)
    idx = idx * static_cast<std::size_t>(extent[a]) + static_cast<std::size_t>(w[a]);
  return idx;
}

Displacement LatticeSpec::cell_at(std::size_t index) const {
  Displacement r(extent.size());
  for (std::size_t a = extent.size(); a-- > 0;) {
    r[a] = static_cast<int>(index % static_cast<std::size_t>(extent[a]));
    index /= static_cast<std::size_t>(extent[a]);
  }
  return r;
}

GridShape::GridShape(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw Error(ErrorKind::InvalidArgument, "grid needs at least one axis");
  points_ = 1;
  for (int s : sizes_) {
    if (s < 1) throw Error(ErrorKind::InvalidArgument, "grid sizes must be >= 1");
    points_ *= static_cast<std::size_t>(s);
  }
}

std::size_t GridShape::index(const Displacement& r) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < sizes_.size(); ++a) {
    const int L = sizes_[a];
    const int w = ((r[a] % L) + L) % L;
    idx = idx * static_cast<std::size_t>(L) + static_cast<std::size_t>(w);
  }
  return idx;
}

Displacement GridShape::at(std::size_t index) const {
  Displacement r(sizes_.size());
  for (std::size_t a = sizes_.size(); a-- > 0;) {
    r[a] = static_cast<int>(index % static_cast<std::size_t>(sizes_[a]));
    index /= static_cast<std::size_t>(sizes_[a]);
  }
  return r;
}

std::vector<double> GridShape::momentum(std::size_t index) const {
  const Displacement m = at(index);
  std::vector<double> k(m.size());
  for (std::size_t a = 0; a < m.size(); ++a) k[a] = 2.0 * M_PI * m[a] / sizes_[a];
  return k;
}

int max_abs_component(const Displacement& r) {
  int m = 0;
  for (int v : r) m = std::max(m, std::abs(v));
  return m;
}

Displacement negate(const Displacement& r) {
  Displacement n(r.size());
  for (std::size_t a = 0; a < r.size(); ++a) n[a] = -r[a];
  return n;
}

Displacement add(const Displacement& a, const Displacement& b) {
  Displacement s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

Displacement subtract(const Displacement& a, const Displacement& b) {
  Displacement s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] - b[i];
  return s;
}

double dot(const std::vector<double>& k, const Displacement& r) {
  double s = 0.0;
  for (std::size_t a = 0; a < r.size(); ++a) s += k[a] * r[a];
  return s;
}

std::string format_displacement(const Displacement& r) {
  std::ostringstream os;
  os << '[';
  for (std::size_t a = 0; a < r.size(); ++a) os << (a ? "," : "") << r[a];
  os << ']';
  return os.str();
}

unsigned worker_count() {
  if (const char* env = std::getenv("LINDCORR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lindcorr
