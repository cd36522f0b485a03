#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "test_util.hpp"
#include "zk/random_fields.hpp"
#include "zk/reduce.hpp"
#include "zk/snapshot.hpp"
#include "zk/spectral.hpp"

using namespace zk;
using zktest::max_abs_diff;
using zktest::rel_err;

namespace zktest {

RealField band_limited_field(GridPtr grid, std::uint64_t seed,
                             double amplitude) {
  const Grid3& g = *grid;
  SpectralField U(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const int mx = (i <= g.nx() / 2) ? i : i - g.nx();
        const int my = (j <= g.ny1() / 2) ? j : j - g.ny1();
        if (std::abs(mx) > g.nx() / 3 || std::abs(my) > g.ny1() / 3 ||
            m > g.ny2() / 3)
          continue;
        U.c[g.cidx(i, j, m)] =
            std::complex<double>(gauss(rng), gauss(rng));
      }
  enforce_hermitian(U);
  RealField u = inverse_transform(U);
  const double n = l2_norm(u);
  if (n > 0)
    for (auto& v : u.v) v *= amplitude / n;
  return u;
}

const GroundState& shared_ground_state(int n, double box) {
  static std::map<std::pair<int, double>, GroundState> cache;
  auto key = std::make_pair(n, box);
  auto it = cache.find(key);
  if (it == cache.end()) {
    PetviashviliParams p;
    p.tol = 1e-10;
    it = cache.emplace(key, petviashvili_solve(Grid3::cubic(n, box), p)).first;
  }
  return it->second;
}

}  // namespace zktest

TEST_SUITE_BEGIN("spectral_core");

TEST_CASE("grid validation and wavenumber layout") {
  CHECK_THROWS(Grid3(6, 8, 8, 1, 1, 1));
  CHECK_THROWS(Grid3(9, 8, 8, 1, 1, 1));
  CHECK_THROWS(Grid3(8, 8, 8, -1, 1, 1));

  auto g = Grid3::cubic(16, 4.0);
  CHECK(g->kx().size() == 16);
  CHECK(g->ky2().size() == 9);
  // Symmetric apart from the single Nyquist entry.
  for (int m = 1; m < 8; ++m)
    CHECK(g->kx()[m] == doctest::Approx(-g->kx()[16 - m]));
  CHECK(g->kx()[1] == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(g->hx() == doctest::Approx(0.5));
}

TEST_CASE("zero field transforms to zero coefficients") {
  auto g = Grid3::cubic(8, 2.0);
  RealField u(g);
  const SpectralField U = forward_transform(u);
  for (const auto& c : U.c) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("cos(pi x / L) occupies exactly the two conjugate modes") {
  auto g = Grid3::cubic(16, 3.0);
  RealField u(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k)
        u.at(i, j, k) = std::cos(std::numbers::pi * g->x(i) / g->lx());
  const SpectralField U = forward_transform(u);
  int nonzero = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int m = 0; m < g->ny2_modes(); ++m)
        if (std::abs(U.at(i, j, m)) > 1e-10) {
          ++nonzero;
          CHECK(j == 0);
          CHECK(m == 0);
          CHECK((i == 1 || i == 15));
        }
  CHECK(nonzero == 2);
}

TEST_CASE("Parseval against a direct mode sum at 8^3") {
  auto g = Grid3::cubic(8, 1.5);
  const RealField u = zktest::band_limited_field(g, 11);
  const SpectralField U = forward_transform(u);

  // Direct DFT oracle over all modes and points.
  const double h3 = g->cell_volume();
  double direct_phys = 0.0;
  for (double v : u.v) direct_phys += v * v;
  direct_phys *= h3;

  CHECK(rel_err(l2_norm_sq(u), direct_phys) < 1e-12);
  CHECK(rel_err(l2_norm_sq(U), direct_phys) < 1e-12);
  CHECK(rel_err(l2_norm(U), l2_norm(u)) < 1e-12);
}

TEST_CASE("non-finite input is rejected with a located diagnostic") {
  auto g = Grid3::cubic(8, 1.0);
  RealField u(g);
  u.at(3, 4, 5) = std::nan("");
  CHECK_THROWS_WITH_AS(forward_transform(u),
                       doctest::Contains("(3,4,5)"), std::domain_error);
}

TEST_CASE("round trip inverse(forward(u)) over random fields") {
  auto g = Grid3::make(16, 12, 8, 2.0, 1.0, 3.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RealField u = random_schwartz_field(g, s);
    const RealField v = inverse_transform(forward_transform(u));
    CHECK(max_abs_diff(u, v) < 1e-12);
  }
}

TEST_CASE("forward(inverse(U)) reproduces coefficients") {
  auto g = Grid3::cubic(12, 2.0);
  const SpectralField U = forward_transform(random_schwartz_field(g, 3));
  const SpectralField V = forward_transform(inverse_transform(U));
  double scale = 0.0;
  for (const auto& c : U.c) scale = std::max(scale, std::abs(c));
  CHECK(max_abs_diff(U, V) < 1e-12 * scale);
}

TEST_CASE("transforms and derivatives are linear") {
  auto g = Grid3::cubic(12, 1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = coef(rng), b = coef(rng);
    const RealField u = random_schwartz_field(g, 100 + trial);
    const RealField v = random_schwartz_field(g, 200 + trial);
    const RealField w = a * u + b * v;
    const SpectralField lhs = forward_transform(w);
    const SpectralField rhs = a * forward_transform(u) + b * forward_transform(v);
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);

    const SpectralField dl = spectral_derivative(lhs, Axis::y1, 1);
    const SpectralField dr = a * spectral_derivative(forward_transform(u), Axis::y1, 1) +
                             b * spectral_derivative(forward_transform(v), Axis::y1, 1);
    CHECK(max_abs_diff(dl, dr) < 1e-11);
  }
}

TEST_CASE("d/dx of sin(pi x / L) is exact") {
  auto g = Grid3::cubic(16, 2.5);
  const double k = std::numbers::pi / g->lx();
  RealField u(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int m = 0; m < 16; ++m) u.at(i, j, m) = std::sin(k * g->x(i));
  const RealField du =
      inverse_transform(spectral_derivative(forward_transform(u), Axis::x, 1));
  double err = 0.0;
  for (int i = 0; i < 16; ++i)
    err = std::max(err, std::abs(du.at(i, 3, 7) - k * std::cos(k * g->x(i))));
  CHECK(err < 1e-12);
}

TEST_CASE("Laplacian of a single mode is an eigenfunction") {
  auto g = Grid3::cubic(12, 2.0);
  SpectralField U(g);
  U.at(2, 1, 3) = 1.0;
  enforce_hermitian(U);
  const double k2 = g->kx()[2] * g->kx()[2] + g->ky1()[1] * g->ky1()[1] +
                    g->ky2()[3] * g->ky2()[3];
  SpectralField lap(g);
  for (Axis ax : {Axis::x, Axis::y1, Axis::y2})
    lap = lap + spectral_derivative(U, ax, 2);
  for (std::size_t q = 0; q < U.c.size(); ++q)
    CHECK(std::abs(lap.c[q] - (-k2) * U.c[q]) < 1e-13);
}

TEST_CASE("bilaplacian equals the Laplacian applied twice") {
  auto g = Grid3::cubic(16, 1.5);
  const SpectralField U = forward_transform(zktest::band_limited_field(g, 21));
  auto laplacian = [&](const SpectralField& f) {
    SpectralField out(f.grid);
    for (Axis ax : {Axis::x, Axis::y1, Axis::y2})
      out = out + spectral_derivative(f, ax, 2);
    return out;
  };
  SpectralField twice = laplacian(laplacian(U));
  SpectralField direct(g);
  for (Axis a : {Axis::x, Axis::y1, Axis::y2})
    for (Axis b : {Axis::x, Axis::y1, Axis::y2})
      direct = direct + spectral_derivative(spectral_derivative(U, a, 2), b, 2);
  CHECK(max_abs_diff(twice, direct) < 1e-10);

  // Composition oracle for the 4th order derivative per axis.
  const SpectralField d4 = spectral_derivative(U, Axis::x, 4);
  const SpectralField d22 =
      spectral_derivative(spectral_derivative(U, Axis::x, 2), Axis::x, 2);
  CHECK(max_abs_diff(d4, d22) < 1e-10);
}

TEST_CASE("derivative order above 4 is rejected") {
  auto g = Grid3::cubic(8, 1.0);
  SpectralField U(g);
  CHECK_THROWS(spectral_derivative(U, Axis::x, 5));
}

TEST_CASE("odd derivatives kill the Nyquist mode") {
  auto g = Grid3::cubic(8, 1.0);
  SpectralField U(g);
  for (auto& c : U.c) c = 1.0;
  enforce_hermitian(U);
  const SpectralField D = spectral_derivative(U, Axis::x, 1);
  for (int j = 0; j < 8; ++j)
    for (int m = 0; m < 5; ++m) CHECK(std::abs(D.at(4, j, m)) == 0.0);
  const SpectralField D2 = spectral_derivative(U, Axis::x, 2);
  CHECK(std::abs(D2.at(4, 0, 0)) > 0.0);
}

TEST_CASE("real cube root powers") {
  CHECK(real_power(1.0, {7, 3}) == doctest::Approx(1.0));
  CHECK(real_power(-1.0, {7, 3}) == doctest::Approx(-1.0));
  CHECK(real_power(-1.0, {10, 3}) == doctest::Approx(1.0));
  CHECK(real_power(-8.0, {1, 3}) == doctest::Approx(-2.0));
  CHECK(real_power(2.0, {7, 3}) == doctest::Approx(std::pow(2.0, 7.0 / 3.0)));
  CHECK(real_power(-2.0, {7, 3}) ==
        doctest::Approx(-std::pow(2.0, 7.0 / 3.0)));
}

TEST_CASE("dealias_pad_multiply on constants") {
  auto g = Grid3::cubic(8, 1.0);
  RealField one(g);
  for (auto& v : one.v) v = 1.0;
  const RealField p1 = dealias_pad_multiply(one, {7, 3}, 1.5);
  for (double v : p1.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

  RealField neg(g);
  for (auto& v : neg.v) v = -1.0;
  const RealField p2 = dealias_pad_multiply(neg, {7, 3}, 1.5);
  for (double v : p2.v) CHECK(v == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("pad embed and truncate round trip, Nyquist included") {
  auto g = Grid3::cubic(8, 1.0);
  auto f = padded_grid(*g, 1.5);
  const SpectralField U = forward_transform(random_schwartz_field(g, 9));
  const SpectralField back = pad_truncate(pad_embed(U, f), g);
  CHECK(max_abs_diff(U, back) < 1e-13);

  // The embedded field interpolates the coarse one at coarse points.
  const RealField coarse = inverse_transform(U);
  const RealField fine = inverse_transform(pad_embed(U, f));
  // Coarse point (i,j,k) sits at fine index (i*12/8, ...) only when the
  // ratio is integral; with 8 -> 12 every second coarse point matches.
  for (int i = 0; i < 8; i += 2)
    for (int j = 0; j < 8; j += 2)
      for (int k = 0; k < 8; k += 2)
        CHECK(coarse.at(i, j, k) ==
              doctest::Approx(fine.at(i * 3 / 2, j * 3 / 2, k * 3 / 2))
                  .epsilon(1e-12));
}

TEST_CASE("pad consistency for smooth data at 64^3") {
  auto g = Grid3::cubic(64, 8.0);
  // Small band-limited ripple on a positive offset: the power stays on the
  // smooth branch, so the two oversampling factors must agree closely.
  RealField u = zktest::band_limited_field(g, 31, 0.05);
  for (auto& v : u.v) v += 0.3;
  const RealField a = dealias_pad_multiply(u, {7, 3}, 1.5);
  const RealField b = dealias_pad_multiply(u, {7, 3}, 2.0);
  CHECK(l2_norm(a - b) < 1e-8);
}

TEST_CASE("hs_norm_direct on a single mode") {
  auto g = Grid3::cubic(16, 4.0);
  SpectralField U(g);
  U.at(3, 0, 0) = 1.0;
  enforce_hermitian(U);
  const double k = g->kx()[3];
  const double mass = l2_norm(U);
  for (double s : {0.0, 0.7, 1.0, 2.0}) {
    const double want = std::pow(1.0 + k, s) * mass;
    CHECK(rel_err(hs_norm_direct(U, s), want) < 1e-12);
  }
}

TEST_CASE("hs_norm_direct at s = 0 is the L2 norm") {
  auto g = Grid3::cubic(16, 2.0);
  const RealField u = random_schwartz_field(g, 17);
  const SpectralField U = forward_transform(u);
  CHECK(rel_err(hs_norm_direct(U, 0.0), l2_norm(u)) < 1e-12);
}

TEST_CASE("hs_norm_direct against a brute-force mode sum at 8^3") {
  auto g = Grid3::cubic(8, 1.0);
  const SpectralField U = forward_transform(random_schwartz_field(g, 23));
  const double s = 1.0;
  double acc = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int m = 0; m < 5; ++m) {
        const double k = std::sqrt(g->kx()[i] * g->kx()[i] +
                                   g->ky1()[j] * g->ky1()[j] +
                                   g->ky2()[m] * g->ky2()[m]);
        acc += g->hermitian_weight(m) * std::pow(1.0 + k, 2.0 * s) *
               std::norm(U.at(i, j, m));
      }
  const double want = std::sqrt(acc / g->box_volume());
  CHECK(rel_err(hs_norm_direct(U, s), want) < 1e-12);
}

TEST_CASE("hs_norm_direct is monotone in s") {
  auto g = Grid3::cubic(12, 2.0);
  const SpectralField U = forward_transform(random_schwartz_field(g, 29));
  double prev = hs_norm_direct(U, -1.0);
  for (double s : {-0.5, 0.0, 0.5, 1.0, 1.7, 2.5}) {
    const double cur = hs_norm_direct(U, s);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("direct and bessel weights are equivalent within [2^{-s/2}, 1]") {
  auto g = Grid3::cubic(16, 2.0);
  const SpectralField U = forward_transform(random_schwartz_field(g, 37));
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    const double ratio = hs_norm_bessel(U, s) / hs_norm_direct(U, s);
    CHECK(ratio <= 1.0 + 1e-12);
    CHECK(ratio >= std::exp2(-0.5 * s) - 1e-12);
  }
}

TEST_CASE("derivative consistency: composed first derivatives vs |k|^2") {
  auto g = Grid3::cubic(12, 1.5);
  const SpectralField U = forward_transform(zktest::band_limited_field(g, 41));
  SpectralField twice(g);
  for (Axis ax : {Axis::x, Axis::y1, Axis::y2})
    twice = twice +
            spectral_derivative(spectral_derivative(U, ax, 1), ax, 1);
  const Grid3& gg = *g;
  SpectralField mult(g);
  for (int i = 0; i < gg.nx(); ++i)
    for (int j = 0; j < gg.ny1(); ++j)
      for (int m = 0; m < gg.ny2_modes(); ++m) {
        const double k2 = gg.kx()[i] * gg.kx()[i] + gg.ky1()[j] * gg.ky1()[j] +
                          gg.ky2()[m] * gg.ky2()[m];
        mult.at(i, j, m) = -k2 * U.at(i, j, m);
      }
  // Band-limited data has no Nyquist content, so the odd-order zeroing
  // does not enter.
  CHECK(max_abs_diff(twice, mult) < 1e-12);
}

TEST_CASE("snapshot round trip is bit exact") {
  auto g = Grid3::make(8, 12, 10, 1.0, 2.0, 0.5);
  const RealField u = random_schwartz_field(g, 43);
  const double t = 0.6180339887498949;
  const auto path = std::filesystem::temp_directory_path() / "zk_test.zkf";
  write_snapshot(path, u, t);
  const Snapshot s = read_snapshot(path);
  CHECK(s.time == t);
  CHECK(*s.field.grid == *g);
  for (std::size_t i = 0; i < u.v.size(); ++i) CHECK(s.field.v[i] == u.v[i]);
  std::filesystem::remove(path);
}

TEST_CASE("snapshot reader rejects foreign files") {
  const auto path = std::filesystem::temp_directory_path() / "zk_bad.zkf";
  {
    std::ofstream os(path, std::ios::binary);
    os << "not a snapshot";
  }
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::remove(path);
}

TEST_CASE("pairwise_sum matches long double accumulation") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> xs(10000);
  long double acc = 0.0;
  for (auto& x : xs) {
    x = d(rng);
    acc += x;
  }
  CHECK(std::abs(pairwise_sum(xs) - static_cast<double>(acc)) < 1e-11);
}

TEST_SUITE_END();
