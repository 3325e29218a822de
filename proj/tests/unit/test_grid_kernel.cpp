#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/error.hpp"
#include "frontlab/grid.hpp"
#include "frontlab/interpolation.hpp"
#include "frontlab/kernel.hpp"
#include "gen.hpp"

using namespace frontlab;

namespace {

// Brute-force sum over the closure-extended field.
std::vector<double> naive_convolve(const Kernel& k, const std::vector<double>& u, double left, double right) {
  const int n = static_cast<int>(u.size());
  std::vector<double> out(u.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int m = -k.half_width; m <= k.half_width; ++m) {
      const int j = i - m;
      const double v = j < 0 ? left : (j >= n ? right : u[static_cast<std::size_t>(j)]);
      s += k.weight(m) * v;
    }
    out[static_cast<std::size_t>(i)] = s * k.dx;
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("grid_kernel") {
  TEST_CASE("grid coordinates") {
    const Grid1D g = Grid1D::centered(0.1, 1024);
    CHECK(g.n == 1024);
    CHECK(g.x(512) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.length() == doctest::Approx(102.3));
    Grid1D h = g;
    h.shift_cells = 7;
    CHECK(h.absolute(0) == doctest::Approx(g.x(0) + 0.7));
    CHECK(h.to_window(h.absolute(10)) == doctest::Approx(g.x(10)));
    CHECK(g.same_lattice(g));
    CHECK_FALSE(g.same_lattice(h));
  }

  TEST_CASE("gaussian half width is the first offset with tail below the tolerance") {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const Kernel k = make_kernel(KernelFamily::gaussian, sigma, 0.1, 1e-12);
      int M = 0;
      while (std::erfc(M * 0.1 / (sigma * std::sqrt(2.0))) >= 1e-12) ++M;
      CHECK(k.half_width == M);
    }
    CHECK(make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12).half_width == 72);
  }

  TEST_CASE("kernels are admissible") {
    for (auto fam : {KernelFamily::gaussian, KernelFamily::uniform, KernelFamily::laplace})
      for (double dx : {0.05, 0.1, 0.2}) {
        const Kernel k = make_kernel(fam, 1.0, dx, 1e-12);
        const KernelReport r = validate_kernel(k);
        CHECK(r.admissible());
        CHECK(r.mass_error <= 1e-12);
        CHECK(r.symmetry_error == 0.0);
      }
    CHECK_FALSE(validate_kernel(make_kernel(KernelFamily::uniform, 1.0, 0.1, 1e-12)).differentiable);
    CHECK(validate_kernel(make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12)).differentiable);
  }

  TEST_CASE("gaussian weights follow the density up to normalization") {
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    const double c = k.weight(0) * std::sqrt(2.0 * std::numbers::pi);
    for (int m : {1, 10, 30})
      CHECK(k.weight(m) == doctest::Approx(c * std::exp(-0.5 * (0.1 * m) * (0.1 * m)) / std::sqrt(2.0 * std::numbers::pi)));
    CHECK(c == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("bad kernel arguments are rejected") {
    CHECK_THROWS_AS(make_kernel(KernelFamily::gaussian, -1.0, 0.1, 1e-12), Error);
    CHECK_THROWS_AS(make_kernel(KernelFamily::gaussian, 1.0, 0.1, 0.1), Error);
    CHECK_THROWS_AS(make_kernel(KernelFamily::gaussian, 0.01, 0.1, 1e-12), Error);
    CHECK_THROWS_AS(parse_kernel_family("cauchy"), Error);
  }

  TEST_CASE("twice-iterated gaussian approximates the wider gaussian") {
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    const Kernel k2 = iterate_kernel(k, 2);
    CHECK(k2.power == 2);
    CHECK(k2.half_width == 2 * k.half_width);
    CHECK(k2.mass() == doctest::Approx(1.0).epsilon(1e-12));
    const double s = std::sqrt(2.0);
    for (int m : {0, 5, 20, 40}) {
      const double x = 0.1 * m;
      const double exact = std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
      CHECK(k2.weight(m) == doctest::Approx(exact).epsilon(1e-8));
    }
  }

  TEST_CASE("uniform kernel powers spread support by one width each") {
    const Kernel k = make_kernel(KernelFamily::uniform, 1.0, 0.1, 1e-12);
    CHECK(k.half_width == 10);
    const Kernel k3 = iterate_kernel(k, 3);
    CHECK(k3.half_width == 30);
    CHECK(k3.weight(30) > 0.0);
    CHECK_THROWS_AS(iterate_kernel(k, 3, 20), Error);
  }

  TEST_CASE("constants are reproduced under every closure") {
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    const std::vector<double> ones(300, 1.0), zeros(300, 0.0);
    for (auto path : {ConvolutionPath::direct, ConvolutionPath::fft}) {
      for (double v : convolve(k, ones, Closure::constant(1.0, 1.0), 0.1, path)) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
      for (double v : convolve(k, zeros, Closure::zero(), 0.1, path)) CHECK(std::abs(v) <= 1e-15);
    }
  }

  TEST_CASE("property: direct and fft paths match a brute-force sum") {
    for (int trial = 0; trial < 40; ++trial) {
      const int n = gen::integer(16, 400);
      const double dx = gen::uniform(0.05, 0.2);
      const double sigma = gen::uniform(0.3, 2.0);
      const auto fam = static_cast<KernelFamily>(gen::integer(0, 2));
      if (sigma < 0.5 * dx) continue;
      const Kernel k = make_kernel(fam, sigma, dx, 1e-10);
      const std::vector<double> u = gen::field(n, -0.5, 1.5);
      Closure c = trial % 3 == 0 ? Closure::front() : (trial % 3 == 1 ? Closure::zero() : Closure::constant(0.3, 0.7));
      const double l = c.kind == ClosureKind::zero ? 0.0 : c.left;
      const double r = c.kind == ClosureKind::zero ? 0.0 : c.right;
      const auto ref = naive_convolve(k, u, l, r);
      CHECK(max_abs_diff(convolve(k, u, c, dx, ConvolutionPath::direct), ref) <= 1e-13);
      CHECK(max_abs_diff(convolve(k, u, c, dx, ConvolutionPath::fft), ref) <= 1e-12);
    }
  }

  TEST_CASE("property: convolution is order preserving") {
    const Kernel k = make_kernel(KernelFamily::laplace, 0.7, 0.1, 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = gen::integer(50, 300);
      auto u = gen::field(n, 0.0, 1.0);
      auto v = u;
      for (double& x : v) x += gen::uniform(0.0, 0.1);
      const auto a = convolve(k, u, Closure::front(), 0.1);
      const auto b = convolve(k, v, Closure::front(), 0.1);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= b[i] + 1e-15);
    }
  }

  TEST_CASE("convolver reports its path and rejects wrong sizes") {
    const Kernel wide = make_kernel(KernelFamily::gaussian, 20.0, 0.1, 1e-12);
    Convolver c(wide, 2048);
    CHECK(c.uses_fft());
    Convolver d(make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12), 2048);
    CHECK_FALSE(d.uses_fft());
    CHECK_THROWS_AS(d.apply(std::vector<double>(10, 0.0), Closure::front()), Error);
  }

  TEST_CASE("property: six-point weights reproduce quintics") {
    for (int trial = 0; trial < 50; ++trial) {
      const double r = gen::uniform(0.0, 1.0);
      const auto w = lagrange6_weights(r);
      double sum = 0.0;
      for (double x : w) sum += x;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      for (int p = 1; p <= 5; ++p) {
        double s = 0.0;
        for (int j = -2; j <= 3; ++j) s += w[static_cast<std::size_t>(j + 2)] * std::pow(j, p);
        CHECK(s == doctest::Approx(std::pow(r, p)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("shifted samples a smooth profile to interpolation accuracy") {
    const Grid1D g = Grid1D::centered(0.1, 400);
    std::vector<double> u(400);
    for (int i = 0; i < g.n; ++i) u[static_cast<std::size_t>(i)] = 0.5 * (1.0 - std::tanh(g.x(i)));
    const double s = 0.537;
    const auto v = shifted(u, 0.1, s, Closure::front());
    for (int i = 10; i < g.n - 10; ++i)
      CHECK(v[static_cast<std::size_t>(i)] == doctest::Approx(0.5 * (1.0 - std::tanh(g.x(i) - s))).epsilon(1e-6));
    CHECK(refine_crossing(u, g, 0.25, 0.5, Closure::front()) == doctest::Approx(std::atanh(0.5)).epsilon(1e-6));
    CHECK(sample_at(u, g, -1000.0, Closure::front()) == 1.0);
  }

  TEST_CASE("reference kernel values") {
    const Kernel u = make_kernel(KernelFamily::uniform, 1.0, 0.1, 1e-10);
    for (int m = -u.half_width; m <= u.half_width; ++m)
      if (std::abs(m * 0.1) < 1.0 - 1e-9) CHECK(u.weight(m) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-12));
    const Kernel g = make_kernel(KernelFamily::gaussian, 1.0, 0.05, 1e-12);
    CHECK(g.weight(0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
  }

  TEST_CASE("a front-closed indicator convolves to one half at the origin") {
    const Grid1D g = Grid1D::centered(0.1, 401);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    std::vector<double> u(401);
    int i0 = 0;
    for (int i = 0; i < g.n; ++i) {
      u[i] = g.x(i) < 0.0 ? 1.0 : 0.0;
      if (std::abs(g.x(i)) < std::abs(g.x(i0))) i0 = i;
    }
    const std::vector<double> r = convolve(k, u, Closure::front(), 0.1);
    CHECK(std::abs(r[i0] - 0.5) <= 0.5 * k.weight(0) * 0.1 + 1e-12);
    CHECK_THROWS_AS(convolve(k, u, Closure::front(), 0.05), Error);
  }

  TEST_CASE("gaussian on a gaussian bump gives the wider gaussian") {
    const double dx = 0.02;
    const Grid1D g = Grid1D::centered(dx, 2001);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, dx, 1e-12);
    auto density = [](double x, double s) { return std::exp(-x * x / (2 * s * s)) / (s * std::sqrt(2 * std::numbers::pi)); };
    std::vector<double> u(g.n);
    for (int i = 0; i < g.n; ++i) u[i] = density(g.x(i), 1.0);
    const std::vector<double> r = convolve(k, u, Closure::zero(), dx);
    // oracle: midpoint quadrature of the continuous integral at ten times the resolution
    double err = 0.0;
    for (int i = 0; i < g.n; i += 50) {
      const double x = g.x(i);
      double q = 0.0;
      const double h = dx / 10;
      for (double y = -15.0 + h / 2; y < 15.0; y += h) q += density(y, 1.0) * density(x - y, 1.0) * h;
      CHECK(q == doctest::Approx(density(x, std::sqrt(2.0))).epsilon(1e-9).scale(1e-9));
      err = std::max(err, std::abs(r[i] - q));
    }
    CHECK(err < 1e-6);
  }

  TEST_CASE("uniform kernel powers have the expected shape") {
    const Kernel u = make_kernel(KernelFamily::uniform, 1.0, 0.1, 1e-10);
    const Kernel one = iterate_kernel(u, 1);
    CHECK(one.weights == u.weights);
    const Kernel two = iterate_kernel(u, 2);
    CHECK(two.weight(0) == doctest::Approx(0.5).epsilon(0.05));
    for (int m = -two.half_width; m <= two.half_width; ++m) {
      const double hat = std::max(0.0, (2.0 - std::abs(m * 0.1)) / 4.0);
      CHECK(std::abs(two.weight(m) - hat) < 0.03);
    }
    const Kernel four = iterate_kernel(u, 4);
    double lo = 1.0;
    for (int m = -20; m <= 20; ++m) lo = std::min(lo, four.weight(m));
    CHECK(lo > 0.0);
    CHECK_THROWS_AS(iterate_kernel(u, 4, 25), Error);
  }
}
