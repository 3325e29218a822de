#include <doctest.h>

#include <cmath>
#include <vector>

#include "frontlab/error.hpp"
#include "frontlab/evolve.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/kernel.hpp"
#include "gen.hpp"

using namespace frontlab;

namespace {

const Nonlinearity& periodic_medium() {
  static const Nonlinearity nl = Nonlinearity::cubic(TimeSignal::periodic(0.25, 0.05, 2.0));
  return nl;
}

SolverConfig euler(const Nonlinearity& nl, double dx) {
  SolverConfig c;
  c.dt = 0.9 * monotone_dt_limit(nl, 0.0, dx);
  c.recenter = false;
  return c;
}

FieldState tanh_state(const Grid1D& g, double x0 = 0.0) {
  FieldState s = FieldState::zeros(g);
  for (int i = 0; i < g.n; ++i) s[i] = 0.5 * (1.0 - std::tanh(g.x(i) - x0));
  return s;
}

Observer every(Observer::Kind kind, double cadence) {
  Observer o;
  o.kind = kind;
  o.cadence = cadence;
  return o;
}

}  // namespace

TEST_SUITE("evolve") {
  TEST_CASE("monotone number and limit") {
    const Nonlinearity& nl = periodic_medium();
    SolverConfig c;
    c.dt = 0.1;
    c.epsilon = 0.01;
    CHECK(monotone_number(c, nl, 0.1) == doctest::Approx(0.1 * (1.0 + nl.lipschitz() + 2.0)));
    c.dt = monotone_dt_limit(nl, 0.01, 0.1);
    CHECK(monotone_number(c, nl, 0.1) == doctest::Approx(1.0));
    c.dt *= 1.01;
    CHECK_THROWS_AS(validate_solver_config(c, nl, Grid1D::centered(0.1, 64)), Error);
    c.scheme = Scheme::rk4;
    CHECK_NOTHROW(validate_solver_config(c, nl, Grid1D::centered(0.1, 64)));
  }

  TEST_CASE("lipschitz constant of the cubic on the extended range") {
    // |f_u| peaks at u = 2 for the smaller threshold: 12 - 4(1+theta) + theta
    CHECK(periodic_medium().lipschitz() == doctest::Approx(12 - 4 * 1.2 + 0.2).epsilon(1e-9));
  }

  TEST_CASE("one euler step matches a hand-rolled update") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 80);
    const Kernel k = make_kernel(KernelFamily::gaussian, 0.5, 0.1, 1e-12);
    SolverConfig c = euler(nl, 0.1);
    c.epsilon = 0.001;
    c.dt = 0.9 * monotone_dt_limit(nl, c.epsilon, 0.1);
    FieldState s = tanh_state(g);
    s.t = 0.7;
    const FieldState next = step(s, nl, k, c);
    for (int i = 0; i < g.n; ++i) {
      double conv = 0.0;
      for (int m = -k.half_width; m <= k.half_width; ++m) {
        const int j = i - m;
        conv += k.weight(m) * (j < 0 ? 1.0 : (j >= g.n ? 0.0 : s[j]));
      }
      conv *= 0.1;
      const double um = i > 0 ? s[i - 1] : 1.0, up = i + 1 < g.n ? s[i + 1] : 0.0;
      const double rhs = conv - s[i] + c.epsilon * (up - 2 * s[i] + um) / 0.01 + nl.f(0.7, s[i]);
      CHECK(next[i] == doctest::Approx(s[i] + c.dt * rhs).epsilon(1e-13));
    }
    CHECK(next.t == doctest::Approx(0.7 + c.dt));
  }

  TEST_CASE("rk4 converges at fourth order in time") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 256);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    auto run = [&](double dt) {
      SolverConfig c;
      c.scheme = Scheme::rk4;
      c.dt = dt;
      c.recenter = false;
      FieldState s = tanh_state(g);
      Evolver ev(nl, k, c, g);
      const int steps = static_cast<int>(std::lround(2.0 / dt));
      for (int i = 0; i < steps; ++i) ev.step(s);
      return s.values;
    };
    const auto a = run(0.2), b = run(0.1), c = run(0.05);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      e1 = std::max(e1, std::abs(a[i] - b[i]));
      e2 = std::max(e2, std::abs(b[i] - c[i]));
    }
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
  }

  TEST_CASE("equilibria are fixed by every scheme") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 128);
    const Kernel k = make_kernel(KernelFamily::laplace, 1.0, 0.1, 1e-12);
    for (Scheme sc : {Scheme::euler_monotone, Scheme::rk4})
      for (double v : {0.0, 1.0}) {
        SolverConfig c = euler(nl, 0.1);
        c.scheme = sc;
        c.closure = Closure::constant(v, v);
        FieldState s = FieldState::zeros(g);
        std::fill(s.values.begin(), s.values.end(), v);
        Evolver ev(nl, k, c, g);
        for (int i = 0; i < 10; ++i) ev.step(s);
        for (double x : s.values) CHECK(std::abs(x - v) <= 1e-12);
      }
  }

  TEST_CASE("property: the monotone scheme preserves order") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 128);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    SolverConfig c = euler(nl, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
      FieldState a = FieldState::zeros(g), b = FieldState::zeros(g);
      a.values = gen::field(g.n, -0.2, 1.0);
      b.values = a.values;
      for (double& v : b.values) v = std::min(1.2, v + gen::uniform(0.0, 0.3));
      Evolver ev(nl, k, c, g);
      for (int i = 0; i < 50; ++i) {
        ev.step(a);
        ev.step(b);
      }
      for (int i = 0; i < g.n; ++i) CHECK(a[i] <= b[i] + 1e-12);
    }
  }

  TEST_CASE("cell translation shifts values and bookkeeping") {
    const Grid1D g = Grid1D::centered(0.1, 50);
    FieldState s = tanh_state(g);
    const FieldState before = s;
    translate_cells(s, 3, Closure::front());
    CHECK(s.grid.shift_cells == 3);
    for (int i = 0; i + 3 < g.n; ++i) CHECK(s[i] == before[i + 3]);
    CHECK(s[g.n - 1] == 0.0);
    translate_cells(s, -5, Closure::front());
    CHECK(s[0] == 1.0);
    CHECK(s.grid.shift_cells == -2);
  }

  TEST_CASE("recentering keeps the interface in absolute coordinates") {
    const Nonlinearity nl = Nonlinearity::cubic(TimeSignal::constant(0.25));
    const Grid1D g = Grid1D::centered(0.1, 512);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    SolverConfig c = euler(nl, 0.1);
    auto [moving, rec] = evolve_to(tanh_state(g), nl, k, c, 60.0, {every(Observer::Kind::interface, 1.0)});
    c.recenter = true;
    auto [framed, rec2] = evolve_to(tanh_state(g), nl, k, c, 60.0, {every(Observer::Kind::interface, 1.0)});
    CHECK(rec2.recenter_events > 0);
    CHECK(framed.grid.shift_cells != 0);
    CHECK(interface_locations(framed, 0.5).x_minus ==
          doctest::Approx(interface_locations(moving, 0.5).x_minus).epsilon(1e-6));
    CHECK(rec.track.size() == rec2.track.size());
  }

  TEST_CASE("non-finite values abort") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 64);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    SolverConfig c;
    c.scheme = Scheme::rk4;
    c.dt = 5.0;
    c.recenter = false;
    FieldState s = FieldState::zeros(g);
    std::fill(s.values.begin(), s.values.end(), 1.9);
    CHECK_THROWS_AS(evolve_to(s, nl, k, c, 200.0), Error);
  }

  TEST_CASE("residual of a solution is at truncation level") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 256);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    SolverConfig c;
    c.scheme = Scheme::rk4;
    c.dt = 0.01;
    c.recenter = false;
    auto [end, rec] = evolve_to(tanh_state(g), nl, k, c, 2.0, {every(Observer::Kind::snapshot, 0.1)});
    const ResidualField r = residual(rec.snapshots, nl, k, c);
    CHECK(r.max_abs < 5e-4);
    CHECK(r.times.size() + 2 == rec.snapshots.size());
  }

  TEST_CASE("evolving to the current time is the identity") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 128);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    FieldState s = tanh_state(g);
    s.t = 3.0;
    auto [end, rec] = evolve_to(s, nl, k, euler(nl, 0.1), 3.0);
    CHECK(end.values == s.values);
    CHECK(end.t == 3.0);
    CHECK(rec.snapshots.empty());
    CHECK(rec.recenter_events == 0);
  }

  TEST_CASE("recenter moves by whole cells") {
    const Grid1D g = Grid1D::centered(0.1, 256);
    FieldState s = tanh_state(g);
    CHECK(recenter(s, 0.5, 0.0) == 0);
    FieldState t = tanh_state(g, 0.73);
    const double before = interface_locations(t, 0.5).x_minus;
    CHECK(recenter(t, 0.5, 0.0) == 7);
    CHECK(t.grid.shift_cells == 7);
    CHECK(interface_locations(t, 0.5).x_minus == doctest::Approx(before).epsilon(1e-12));
    FieldState flat = FieldState::zeros(g);
    CHECK_THROWS_AS(recenter(flat, 0.5, 0.0), Error);
  }

  TEST_CASE("autonomous front moves at the wave speed") {
    const Nonlinearity nl = Nonlinearity::cubic(TimeSignal::constant(0.25));
    const Grid1D g = Grid1D::centered(0.1, 1024);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    SolverConfig c;
    c.scheme = Scheme::rk4;
    c.dt = 0.1;
    auto [end, rec] = evolve_to(tanh_state(g), nl, k, c, 50.0, {every(Observer::Kind::interface, 0.5)});
    const auto& xs = rec.track.x_minus[0];
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
    std::vector<double> t2, x2;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (rec.track.times[i] >= 25.0) {
        t2.push_back(rec.track.times[i]);
        x2.push_back(xs[i]);
      }
    CHECK(fit_line(t2, x2).slope == doctest::Approx(0.23323794431992353).epsilon(0.02));
  }

  TEST_CASE("residual vanishes on equilibria and converges in the sampling step") {
    const Nonlinearity& nl = periodic_medium();
    const Grid1D g = Grid1D::centered(0.1, 256);
    const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
    SolverConfig c;
    c.scheme = Scheme::rk4;
    c.recenter = false;
    std::vector<FieldState> ones;
    for (int j = 0; j < 4; ++j) {
      FieldState s = FieldState::zeros(g, 0.1 * j);
      std::fill(s.values.begin(), s.values.end(), 1.0);
      ones.push_back(s);
    }
    c.dt = 0.1;
    CHECK(residual(ones, nl, k, c).max_abs < 1e-12);
    ones.resize(2);
    CHECK_THROWS_AS(residual(ones, nl, k, c), Error);
    double prev = 0.0;
    for (double dt : {0.1, 0.05}) {
      c.dt = dt;
      auto [end, rec] = evolve_to(tanh_state(g), nl, k, c, 2.0, {every(Observer::Kind::snapshot, dt)});
      const double r = residual(rec.snapshots, nl, k, c).max_abs;
      if (prev > 0.0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.25));
      prev = r;
    }
  }
}
