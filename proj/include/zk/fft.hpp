#pragma once

#include <complex>

#include "zk/grid.hpp"

namespace zk::fft {

// Raw transforms, no normalization: r2c computes the plain DFT sum, c2r the
// plain inverse sum (so c2r(r2c(u)) = N*u). Plans are cached per grid shape
// and created with FFTW_ESTIMATE so plan selection is deterministic.
void r2c(const Grid3& g, const double* in, std::complex<double>* out);
void c2r(const Grid3& g, const std::complex<double>* in, double* out);

}  // namespace zk::fft
