#include <doctest.h>

#include <cmath>

#include "frontlab/error.hpp"
#include "frontlab/evolve.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/waves.hpp"
#include "gen.hpp"

using namespace frontlab;

namespace {

SolverConfig rk4(double dt = 0.1) {
  SolverConfig c;
  c.scheme = Scheme::rk4;
  c.dt = dt;
  return c;
}

const Kernel& gauss() {
  static const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
  return k;
}

// frozen regression value, gaussian scale 1, dx 0.1, n 1024, rk4 dt 0.1
constexpr double kSpeedQuarter = 0.23323794431992353;

}  // namespace

TEST_SUITE("waves") {
  TEST_CASE("reaction integral of the cubic") {
    for (double th : {0.1, 0.25, 0.5, 0.7}) {
      const Nonlinearity nl = Nonlinearity::cubic(TimeSignal::constant(th));
      CHECK(reaction_integral(nl) == doctest::Approx((1.0 - 2.0 * th) / 12.0).scale(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(reaction_integral(Nonlinearity::cubic(TimeSignal::periodic(0.25, 0.05, 2.0))), Error);
  }

  TEST_CASE("wave speed regression and reflection symmetry") {
    const TravelingWave a = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.25)), gauss(), rk4(), 0.5, 400.0);
    const TravelingWave b = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.75)), gauss(), rk4(), 0.5, 400.0);
    CHECK(a.speed == doctest::Approx(kSpeedQuarter).epsilon(1e-6));
    // u -> 1 - u, x -> -x maps theta to 1 - theta and reverses the speed
    CHECK(b.speed == doctest::Approx(-a.speed).epsilon(1e-5));
    CHECK(a.max_increase <= 1e-10);
    CHECK(a.sample(0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(a.trailing_change < 1e-7);
  }

  TEST_CASE("balanced cubic does not move") {
    const TravelingWave w = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.5)), gauss(), rk4(), 0.5, 400.0);
    CHECK(std::abs(w.speed) <= 1e-3);
  }

  TEST_CASE("speed grows as the threshold drops") {
    double prev = -1.0;
    for (double th : {0.45, 0.35, 0.25, 0.15}) {
      const double c = compute_wave(Nonlinearity::cubic(TimeSignal::constant(th)), gauss(), rk4(), 0.5, 400.0).speed;
      CHECK(c > prev);
      prev = c;
    }
  }

  TEST_CASE("wave needs a time-constant medium and a valid pin") {
    CHECK_THROWS_AS(compute_wave(Nonlinearity::cubic(TimeSignal::periodic(0.25, 0.05, 2.0)), gauss(), rk4(), 0.5, 400.0),
                    Error);
    CHECK_THROWS_AS(compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.25)), gauss(), rk4(), 1.5, 400.0), Error);
    WaveOptions o;
    o.tolerance = 1e-14;
    CHECK_THROWS_AS(compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.25)), gauss(), rk4(), 0.5, 30.0, o), Error);
  }

  TEST_CASE("property: optimal shift recovers a translation") {
    const TravelingWave w = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.25)), gauss(), rk4(), 0.5, 400.0);
    for (int trial = 0; trial < 10; ++trial) {
      const double y = gen::uniform(-0.8, 0.8);
      const FieldState moved = w.place(w.grid, y);
      const ShiftMatch m = optimal_shift(moved.values, w.profile, w.grid);
      CHECK(m.shift == doctest::Approx(y).epsilon(1e-4).scale(1.0));
      CHECK(m.distance < 1e-4);
      CHECK(shifted_distance(moved.values, w.profile, 0.1, y) < 1e-6);
    }
  }

  TEST_CASE("unbalanced check") {
    const UnbalancedCheck u = check_unbalanced(Nonlinearity::cubic(TimeSignal::periodic(0.25, 0.05, 2.0)), gauss(), rk4(), 400.0);
    CHECK(u.pass);
    CHECK(u.theta_B == doctest::Approx(0.3));
    CHECK(u.integral_fB > 0.0);
    const UnbalancedCheck b = check_unbalanced(Nonlinearity::cubic(TimeSignal::constant(0.5)), gauss(), rk4(), 400.0);
    CHECK_FALSE(b.pass);
    CHECK(b.unresolved_sign);
  }

  TEST_CASE("pointwise speed of the wave is its speed") {
    const Nonlinearity nl = Nonlinearity::cubic(TimeSignal::constant(0.25));
    const TravelingWave w = compute_wave(nl, gauss(), rk4(), 0.5, 400.0);
    CHECK(pointwise_front_speed(w.as_state(), nl, gauss(), 0.5) == doctest::Approx(w.speed).epsilon(1e-3));
    CHECK(pointwise_front_speed(w.as_state(), nl, gauss(), 0.3) == doctest::Approx(w.speed).epsilon(1e-3));
    FieldState flat = w.as_state();
    for (int i = 0; i < flat.grid.n; ++i) flat[i] = 0.5 - 1e-9 * flat.grid.x(i);
    CHECK_THROWS_AS(pointwise_front_speed(flat, nl, gauss(), 0.5), Error);
  }

  TEST_CASE("finer grid speed and threshold ordering") {
    const Kernel fine = make_kernel(KernelFamily::gaussian, 1.0, 0.05, 1e-12);
    WaveOptions o;
    o.n = 2048;
    const double c = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.25)), fine, rk4(0.05), 0.5, 400.0, o).speed;
    CHECK(c == doctest::Approx(kSpeedQuarter).epsilon(0.01));
    const double c2 = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.2)), gauss(), rk4(), 0.5, 400.0).speed;
    const double c3 = compute_wave(Nonlinearity::cubic(TimeSignal::constant(0.3)), gauss(), rk4(), 0.5, 400.0).speed;
    CHECK(c2 > c3);
    CHECK(c3 > 0.0);
    const UnbalancedCheck u = check_unbalanced(Nonlinearity::cubic(TimeSignal::constant(0.3)), gauss(), rk4(), 400.0);
    CHECK(u.integral_fB == doctest::Approx(1.0 / 12 - 0.3 / 6).epsilon(1e-12));
    CHECK(u.pass);
  }
}
