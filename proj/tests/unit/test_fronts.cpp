#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "frontlab/error.hpp"
#include "frontlab/fronts.hpp"
#include "gen.hpp"

using namespace frontlab;

namespace {

FieldState profile(const Grid1D& g, double (*fn)(double)) {
  FieldState s = FieldState::zeros(g);
  for (int i = 0; i < g.n; ++i) s[i] = fn(g.absolute(i));
  return s;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(x)); }

}  // namespace

TEST_SUITE("fronts") {
  TEST_CASE("property: line fit recovers exact lines") {
    for (int trial = 0; trial < 20; ++trial) {
      const double a = gen::uniform(-3, 3), b = gen::uniform(-3, 3);
      std::vector<double> x, y;
      for (int i = 0; i < gen::integer(2, 30); ++i) {
        x.push_back(gen::uniform(-10, 10));
        y.push_back(a + b * x.back());
      }
      const LineFit f = fit_line(x, y);
      CHECK(f.slope == doctest::Approx(b).epsilon(1e-9));
      CHECK(f.intercept == doctest::Approx(a).scale(1.0).epsilon(1e-9));
      CHECK(f.max_residual < 1e-9);
    }
    std::vector<double> same{1.0, 1.0};
    CHECK_THROWS_AS(fit_line(same, same), Error);
  }

  TEST_CASE("interface locations of a logistic profile") {
    Grid1D g = Grid1D::centered(0.1, 400);
    g.shift_cells = 13;
    const FieldState s = profile(g, logistic);
    for (double lv : {0.1, 0.5, 0.8}) {
      const Crossing c = interface_locations(s, lv);
      const double exact = std::log(1.0 / lv - 1.0);
      CHECK(c.x_minus == doctest::Approx(exact).epsilon(2e-3).scale(1.0));
      CHECK(c.x_plus == doctest::Approx(c.x_minus));
    }
  }

  TEST_CASE("leftmost and rightmost crossings of a non-monotone front") {
    const Grid1D g = Grid1D::centered(0.05, 800);
    auto fn = [](double x) { return logistic(x) + 0.6 * std::exp(-(x - 6.0) * (x - 6.0)); };
    FieldState s = FieldState::zeros(g);
    for (int i = 0; i < g.n; ++i) s[i] = fn(g.x(i));
    // right edge of the bump by bisection
    double a = 6.0, b = 9.0;
    for (int k = 0; k < 60; ++k) (fn(0.5 * (a + b)) > 0.5 ? a : b) = 0.5 * (a + b);
    const Crossing c = interface_locations(s, 0.5);
    CHECK(c.x_minus == doctest::Approx(0.0).scale(1.0).epsilon(2e-3));
    CHECK(c.x_plus == doctest::Approx(a).epsilon(2e-3));
  }

  TEST_CASE("steepness of the logistic is its derivative peak") {
    const Grid1D g = Grid1D::centered(0.01, 2000);
    const FieldState s = profile(g, logistic);
    CHECK(steepness(s, 0.0, 1.0) == doctest::Approx(-logistic(1.0) * (1 - logistic(1.0))).epsilon(1e-4));
    CHECK(steepness(s, 5.0, 0.1) > -0.01);
    CHECK_THROWS_AS(steepness(s, 0.0, 50.0), Error);
  }

  TEST_CASE("decay fit of exact exponential tails") {
    const Grid1D g = Grid1D::centered(0.1, 600);
    FieldState s = FieldState::zeros(g);
    const double cp = 0.8, cm = 1.3, hp = 0.4, hm = -0.2;
    for (int i = 0; i < g.n; ++i) {
      const double x = g.x(i);
      s[i] = x > 0 ? std::exp(-cp * (x - hp)) : 1.0 - std::exp(cm * (x + hm));
    }
    const DecayFit d = fit_decay(s, 0.0, 3.0, 10.0);
    CHECK(d.c_plus == doctest::Approx(cp).epsilon(1e-10));
    CHECK(d.h_plus == doctest::Approx(hp).epsilon(1e-9));
    CHECK(d.c_minus == doctest::Approx(cm).epsilon(1e-10));
    CHECK(d.h_minus == doctest::Approx(hm).epsilon(1e-9));
    CHECK_THROWS_AS(fit_decay_right(s, 0.0, 5.0, 2.0), Error);
  }

  TEST_CASE("width between two levels") {
    const Grid1D g = Grid1D::centered(0.05, 800);
    const FieldState s = profile(g, logistic);
    const double exact = std::log(1 / 0.05 - 1) - std::log(1 / 0.95 - 1);
    CHECK(width_diagnostic(s, 0.05, 0.95) == doctest::Approx(exact).epsilon(1e-3));
    CHECK_THROWS_AS(width_diagnostic(s, 0.9, 0.1), Error);
  }

  TEST_CASE("interface track of a translating profile") {
    InterfaceTrack tr({0.2, 0.5});
    Grid1D g = Grid1D::centered(0.1, 300);
    for (int k = 0; k <= 10; ++k) {
      FieldState s = FieldState::zeros(g, 0.5 * k);
      for (int i = 0; i < g.n; ++i) s[i] = logistic(g.x(i) - 0.3 * s.t);
      tr.record(s);
    }
    tr.fit_speeds();
    CHECK(tr.speeds[1] == doctest::Approx(0.3).epsilon(1e-3));
    for (double v : interface_velocity(tr, 0.5)) CHECK(v == doctest::Approx(0.3).epsilon(5e-3));
    CHECK(width_diagnostic(tr, 0.2, 0.5) == doctest::Approx(std::log(4.0)).epsilon(5e-3));
  }

  TEST_CASE("ramp crossings and translation") {
    Grid1D g = Grid1D::centered(0.1, 200);
    auto ramp = [](double x) { return std::clamp(1.0 - x, 0.0, 1.0); };
    FieldState s = FieldState::zeros(g);
    for (int i = 0; i < g.n; ++i) s[i] = ramp(g.x(i));
    const Crossing c = interface_locations(s, 0.5);
    CHECK(std::abs(c.x_minus - 0.5) <= 0.05);
    CHECK(std::abs(c.x_plus - 0.5) <= 0.05);
    CHECK(width_diagnostic(s, 0.25, 0.75) == doctest::Approx(0.5).epsilon(0.2));
    CHECK(width_diagnostic(s, 0.5, 0.5) <= 0.1);
    g.shift_cells = 30;
    FieldState t = s;
    t.grid = g;
    const Crossing d = interface_locations(t, 0.5);
    CHECK(d.x_minus - c.x_minus == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d.x_plus - c.x_plus == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(interface_locations(FieldState::zeros(g), 0.5), Error);
  }

  TEST_CASE("steepness at the window edge and of a constant") {
    const Grid1D g = Grid1D::centered(0.01, 2000);
    FieldState s = FieldState::zeros(g);
    for (int i = 0; i < g.n; ++i) s[i] = 0.5 * (1.0 - std::tanh(g.x(i) / 2.0));
    const double sech = 1.0 / std::cosh(1.0);
    CHECK(steepness(s, 0.0, 2.0) == doctest::Approx(-sech * sech / 4.0).epsilon(1e-3));
    CHECK(steepness(s, 0.0, 2.0) == doctest::Approx(-0.1049).epsilon(1e-3));
    std::fill(s.values.begin(), s.values.end(), 0.7);
    CHECK(steepness(s, 0.0, 2.0) == 0.0);
  }

  TEST_CASE("decay fit of a clipped exponential, with and without noise") {
    const Grid1D g = Grid1D::centered(0.1, 400);
    FieldState s = FieldState::zeros(g);
    for (int i = 0; i < g.n; ++i) s[i] = std::min(1.0, std::exp(-2.0 * (g.x(i) - 1.0)));
    const DecayFit d = fit_decay_right(s, 0.0, 2.0, 5.0);
    CHECK(d.c_plus == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(d.h_plus == doctest::Approx(1.0).epsilon(1e-8));
    FieldState noisy = s;
    for (auto& v : noisy.values) v *= 1.0 + gen::uniform(-0.01, 0.01);
    CHECK(fit_decay_right(noisy, 0.0, 2.0, 5.0).c_plus == doctest::Approx(2.0).epsilon(0.02));
    for (int i = 0; i < g.n; ++i)
      if (std::abs(g.x(i) - 3.0) < 0.05) noisy[i] = 0.0;
    CHECK_THROWS_AS(fit_decay_right(noisy, 0.0, 2.0, 5.0), Error);
  }
}
