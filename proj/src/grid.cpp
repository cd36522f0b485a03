#include "zk/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zk {

namespace {

void check_axis(const char* name, int n, double l) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument(std::string("grid axis ") + name +
                                ": point count must be even and >= 8, got " +
                                std::to_string(n));
  if (!(l > 0.0))
    throw std::invalid_argument(std::string("grid axis ") + name +
                                ": half-period must be positive");
}

// DFT ordering m = 0..n/2, -(n/2-1)..-1; k = pi*m/L.
std::vector<double> axis_wavenumbers(int n, double l, bool reduced) {
  const double dk = std::numbers::pi / l;
  const int count = reduced ? n / 2 + 1 : n;
  std::vector<double> k(count);
  for (int i = 0; i < count; ++i) {
    const int m = (i <= n / 2) ? i : i - n;
    k[i] = dk * m;
  }
  return k;
}

}  // namespace

Grid3::Grid3(int nx, int ny1, int ny2, double lx, double ly1, double ly2)
    : nx_(nx), ny1_(ny1), ny2_(ny2), lx_(lx), ly1_(ly1), ly2_(ly2) {
  check_axis("x", nx, lx);
  check_axis("y1", ny1, ly1);
  check_axis("y2", ny2, ly2);
  kx_ = axis_wavenumbers(nx_, lx_, false);
  ky1_ = axis_wavenumbers(ny1_, ly1_, false);
  ky2_ = axis_wavenumbers(ny2_, ly2_, true);
}

double Grid3::kmax_radial() const {
  return std::sqrt(kx_nyquist() * kx_nyquist() +
                   ky1_nyquist() * ky1_nyquist() +
                   ky2_nyquist() * ky2_nyquist());
}

}  // namespace zk
