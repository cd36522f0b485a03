#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "zk/nonlinearity.hpp"
#include "zk/random_fields.hpp"
#include "zk/spectral.hpp"

using namespace zk;
using zktest::max_abs_diff;

TEST_SUITE_BEGIN("nonlinearity");

TEST_CASE("flux of a constant vanishes") {
  auto g = Grid3::cubic(12, 2.0);
  RealField u(g);
  for (auto& v : u.v) v = 0.8;
  const RealField f = flux(u, 1.5);
  CHECK(max_abs(f) < 1e-13);
}

TEST_CASE("flux of a field with no x dependence vanishes") {
  auto g = Grid3::cubic(12, 2.0);
  RealField u(g);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 12; ++k)
        u.at(i, j, k) = std::sin(g->y1(j)) + 0.3 * std::cos(g->y2(k));
  const RealField f = flux(u, 1.5);
  CHECK(max_abs(f) < 1e-12);
}

TEST_CASE("flux is odd under u -> -u") {
  auto g = Grid3::cubic(16, 2.0);
  const RealField u = random_schwartz_field(g, 11, 0.25);
  const RealField a = flux(u, 1.5);
  const RealField b = flux(-1.0 * u, 1.5);
  CHECK(max_abs_diff(a, -1.0 * b) < 1e-12);
}

TEST_CASE("flux has zero spatial mean") {
  auto g = Grid3::cubic(16, 2.0);
  const RealField u = random_schwartz_field(g, 13);
  CHECK(std::abs(integral(flux(u, 1.5))) < 1e-12);
  const MollifierSpec m{0.3, MollifierSpec::Kind::sharp_cutoff};
  CHECK(std::abs(integral(mollified_flux(u, m, 1.5))) < 1e-12);
}

TEST_CASE("mollifier cutoff is the dyadic edge below 1/eps") {
  CHECK(mollifier_cutoff(0.25) == doctest::Approx(4.0));
  CHECK(mollifier_cutoff(0.2) == doctest::Approx(4.0));
  CHECK(mollifier_cutoff(1.0 / 17.0) == doctest::Approx(16.0));
  CHECK(mollifier_cutoff(2.0) == doctest::Approx(0.5));
  CHECK_THROWS(mollifier_cutoff(0.0));
}

TEST_CASE("extreme cutoff keeps only the mean") {
  auto g = Grid3::cubic(12, 2.0);
  RealField u = random_schwartz_field(g, 17);
  for (auto& v : u.v) v += 1.3;
  const MollifierSpec m{1e4, MollifierSpec::Kind::sharp_cutoff};
  const RealField r = mollify(u, m);
  const double mean = integral(u) / g->box_volume();
  for (double v : r.v) CHECK(v == doctest::Approx(mean).epsilon(1e-10));
}

TEST_CASE("cutoff beyond the Nyquist wavenumber is the identity") {
  auto g = Grid3::cubic(12, 2.0);
  const RealField u = random_schwartz_field(g, 19);
  // Choose eps so the dyadic edge clears the spectral corner.
  const double eps = 1.0 / (2.0 * g->kmax_radial());
  REQUIRE(mollifier_cutoff(eps) >= g->kmax_radial());
  const RealField r = mollify(u, {eps, MollifierSpec::Kind::sharp_cutoff});
  CHECK(max_abs_diff(u, r) < 1e-13);
}

TEST_CASE("sharp cutoff is idempotent") {
  auto g = Grid3::cubic(16, 2.0);
  const SpectralField U = forward_transform(random_schwartz_field(g, 23));
  const MollifierSpec m{0.4, MollifierSpec::Kind::sharp_cutoff};
  const SpectralField once = mollify(U, m);
  const SpectralField twice = mollify(once, m);
  CHECK(max_abs_diff(once, twice) == 0.0);
}

TEST_CASE("mollifier contracts every H^s norm") {
  auto g = Grid3::cubic(16, 2.0);
  const SpectralField U = forward_transform(random_schwartz_field(g, 29));
  for (auto kind :
       {MollifierSpec::Kind::sharp_cutoff, MollifierSpec::Kind::gaussian}) {
    const SpectralField V = mollify(U, {0.3, kind});
    for (double s : {-1.0, 0.0, 1.0, 2.0})
      CHECK(hs_norm_direct(V, s) <= hs_norm_direct(U, s) * (1.0 + 1e-13));
  }
}

TEST_CASE("mollification error decays monotonically on power-law spectra") {
  auto g = Grid3::cubic(32, 4.0);
  const double s_reg = 1.4;
  const RealField u = synthetic_sobolev_field(g, s_reg, 31);
  const SpectralField U = forward_transform(u);
  const double r = 0.7;  // measure in H^r, r < s
  double prev = -1.0;
  // Tail-sum oracle: the H^r mass above the cutoff, computed directly.
  for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
    const SpectralField M = mollify(U, {eps, MollifierSpec::Kind::sharp_cutoff});
    const double err = hs_norm_direct(U - M, r);
    const double kcut = mollifier_cutoff(eps);
    double tail_sq = 0.0;
    const Grid3& gg = *g;
    for (int i = 0; i < gg.nx(); ++i)
      for (int j = 0; j < gg.ny1(); ++j)
        for (int m = 0; m < gg.ny2_modes(); ++m) {
          const double k = std::sqrt(gg.kx()[i] * gg.kx()[i] +
                                     gg.ky1()[j] * gg.ky1()[j] +
                                     gg.ky2()[m] * gg.ky2()[m]);
          if (k <= kcut) continue;
          tail_sq += gg.hermitian_weight(m) * std::pow(1.0 + k, 2.0 * r) *
                     std::norm(U.at(i, j, m));
        }
    CHECK(err == doctest::Approx(std::sqrt(tail_sq / gg.box_volume()))
                     .epsilon(1e-10));
    if (prev >= 0.0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("mollified flux reduces to the plain flux at identity regime") {
  auto g = Grid3::cubic(16, 2.0);
  const RealField u = random_schwartz_field(g, 37, 0.5);
  const double eps = 1.0 / (2.0 * g->kmax_radial());
  const MollifierSpec m{eps, MollifierSpec::Kind::sharp_cutoff};
  CHECK(max_abs_diff(mollified_flux(u, m, 1.5), flux(u, 1.5)) < 1e-12);
}

TEST_CASE("mollified flux of a constant vanishes") {
  auto g = Grid3::cubic(12, 2.0);
  RealField u(g);
  for (auto& v : u.v) v = -0.6;
  const MollifierSpec m{0.5, MollifierSpec::Kind::sharp_cutoff};
  CHECK(max_abs(mollified_flux(u, m, 1.5)) < 1e-13);
}

TEST_CASE("mollified flux approaches the flux as eps halves") {
  auto g = Grid3::cubic(64, 4.0);
  // Smooth field with content well past the first few dyadic shells.
  RealField u = random_schwartz_field(g, 41, 0.4);
  const RealField f = flux(u, 1.5);
  double prev = -1.0;
  for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
    const MollifierSpec m{eps, MollifierSpec::Kind::sharp_cutoff};
    const double d = l2_norm(mollified_flux(u, m, 1.5) - f);
    if (prev >= 0.0) CHECK(d < prev);
    prev = d;
  }
  CHECK(prev > 0.0);
}

TEST_SUITE_END();
