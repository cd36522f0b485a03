#include "zk/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>
#include <vector>

namespace zk::fft {

namespace {

// One plan pair per grid shape, with private buffers so callers never have
// to care about FFTW alignment, and a mutex because c2r destroys its input
// and the buffers are shared.
struct PlanSet {
  int nx, ny1, ny2;
  std::size_t rn, cn;
  double* rbuf;
  fftw_complex* cbuf;
  fftw_plan fwd;
  fftw_plan bwd;
  std::mutex mu;

  PlanSet(int nx_, int ny1_, int ny2_) : nx(nx_), ny1(ny1_), ny2(ny2_) {
    rn = static_cast<std::size_t>(nx) * ny1 * ny2;
    cn = static_cast<std::size_t>(nx) * ny1 * (ny2 / 2 + 1);
    rbuf = fftw_alloc_real(rn);
    cbuf = fftw_alloc_complex(cn);
    fwd = fftw_plan_dft_r2c_3d(nx, ny1, ny2, rbuf, cbuf, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_3d(nx, ny1, ny2, cbuf, rbuf, FFTW_ESTIMATE);
  }
  ~PlanSet() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }
};

std::mutex registry_mu;
std::vector<std::unique_ptr<PlanSet>>& registry() {
  static std::vector<std::unique_ptr<PlanSet>> r;
  return r;
}

PlanSet& plans_for(const Grid3& g) {
  std::lock_guard<std::mutex> lock(registry_mu);
  for (auto& p : registry())
    if (p->nx == g.nx() && p->ny1 == g.ny1() && p->ny2 == g.ny2()) return *p;
  registry().push_back(std::make_unique<PlanSet>(g.nx(), g.ny1(), g.ny2()));
  return *registry().back();
}

}  // namespace

void r2c(const Grid3& g, const double* in, std::complex<double>* out) {
  PlanSet& p = plans_for(g);
  std::lock_guard<std::mutex> lock(p.mu);
  std::memcpy(p.rbuf, in, p.rn * sizeof(double));
  fftw_execute(p.fwd);
  std::memcpy(out, p.cbuf, p.cn * sizeof(fftw_complex));
}

void c2r(const Grid3& g, const std::complex<double>* in, double* out) {
  PlanSet& p = plans_for(g);
  std::lock_guard<std::mutex> lock(p.mu);
  std::memcpy(p.cbuf, in, p.cn * sizeof(fftw_complex));
  fftw_execute(p.bwd);
  std::memcpy(out, p.rbuf, p.rn * sizeof(double));
}

}  // namespace zk::fft
