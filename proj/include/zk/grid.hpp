#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace zk {

// Uniform periodic grid on the box [-Lx,Lx) x [-Ly1,Ly1) x [-Ly2,Ly2).
// Physical storage is row-major with x slowest and y2 fastest; spectral
// storage uses the real-input (half-complex) layout with the y2 axis reduced
// to ny2/2+1 entries. Wavenumbers are k = pi * m / L in DFT ordering.
class Grid3 {
 public:
  Grid3(int nx, int ny1, int ny2, double lx, double ly1, double ly2);

  static std::shared_ptr<const Grid3> cubic(int n, double l) {
    return std::make_shared<const Grid3>(n, n, n, l, l, l);
  }
  static std::shared_ptr<const Grid3> make(int nx, int ny1, int ny2, double lx,
                                           double ly1, double ly2) {
    return std::make_shared<const Grid3>(nx, ny1, ny2, lx, ly1, ly2);
  }

  int nx() const { return nx_; }
  int ny1() const { return ny1_; }
  int ny2() const { return ny2_; }
  double lx() const { return lx_; }
  double ly1() const { return ly1_; }
  double ly2() const { return ly2_; }

  double hx() const { return 2.0 * lx_ / nx_; }
  double hy1() const { return 2.0 * ly1_ / ny1_; }
  double hy2() const { return 2.0 * ly2_ / ny2_; }

  std::size_t point_count() const {
    return static_cast<std::size_t>(nx_) * ny1_ * ny2_;
  }
  int ny2_modes() const { return ny2_ / 2 + 1; }
  std::size_t mode_count() const {
    return static_cast<std::size_t>(nx_) * ny1_ * ny2_modes();
  }

  double cell_volume() const { return hx() * hy1() * hy2(); }
  double box_volume() const { return 8.0 * lx_ * ly1_ * ly2_; }

  // Coordinates of grid point i along each axis, starting at -L.
  double x(int i) const { return -lx_ + i * hx(); }
  double y1(int j) const { return -ly1_ + j * hy1(); }
  double y2(int k) const { return -ly2_ + k * hy2(); }

  const std::vector<double>& kx() const { return kx_; }
  const std::vector<double>& ky1() const { return ky1_; }
  const std::vector<double>& ky2() const { return ky2_; }

  double kx_nyquist() const { return kx_[nx_ / 2]; }
  double ky1_nyquist() const { return ky1_[ny1_ / 2]; }
  double ky2_nyquist() const { return ky2_[ny2_ / 2]; }
  // Largest |k| over retained modes (the spectral corner).
  double kmax_radial() const;

  std::size_t ridx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny1_ + j) * ny2_ + k;
  }
  std::size_t cidx(int i, int j, int m) const {
    return (static_cast<std::size_t>(i) * ny1_ + j) * ny2_modes() + m;
  }

  // Multiplicity of a retained mode under the Hermitian extension:
  // interior y2 modes stand for a conjugate pair.
  double hermitian_weight(int m) const {
    return (m == 0 || m == ny2_ / 2) ? 1.0 : 2.0;
  }

  bool operator==(const Grid3& o) const {
    return nx_ == o.nx_ && ny1_ == o.ny1_ && ny2_ == o.ny2_ && lx_ == o.lx_ &&
           ly1_ == o.ly1_ && ly2_ == o.ly2_;
  }

 private:
  int nx_, ny1_, ny2_;
  double lx_, ly1_, ly2_;
  std::vector<double> kx_, ky1_, ky2_;
};

using GridPtr = std::shared_ptr<const Grid3>;

}  // namespace zk
