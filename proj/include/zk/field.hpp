#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

// Scalar field in physical space, one value per grid point.
struct RealField {
  GridPtr grid;
  std::vector<double> v;

  RealField() = default;
  explicit RealField(GridPtr g) : grid(std::move(g)), v(grid->point_count()) {}

  double& at(int i, int j, int k) { return v[grid->ridx(i, j, k)]; }
  double at(int i, int j, int k) const { return v[grid->ridx(i, j, k)]; }
};

// Scalar field in Fourier space, half-complex layout along y2.
struct SpectralField {
  GridPtr grid;
  std::vector<std::complex<double>> c;

  SpectralField() = default;
  explicit SpectralField(GridPtr g)
      : grid(std::move(g)), c(grid->mode_count()) {}

  std::complex<double>& at(int i, int j, int m) {
    return c[grid->cidx(i, j, m)];
  }
  std::complex<double> at(int i, int j, int m) const {
    return c[grid->cidx(i, j, m)];
  }
};

// Index of the first non-finite entry, or npos when the field is clean.
std::size_t first_nonfinite(const RealField& u);
inline constexpr std::size_t field_npos = static_cast<std::size_t>(-1);

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);

}  // namespace zk
