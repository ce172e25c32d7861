#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "taubnut/model.hpp"

using namespace taubnut;

namespace {

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Richardson-extrapolated central difference, error ~h^4.
template <typename F>
double fd_derivative(const F& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

// Scalar curvature of the conformally flat metric g = e^{2 sigma} delta from
// the standard conformal transformation law,
//   R = -2 (N-1) e^{-2 sigma} [ Lap(sigma) + (N-2)/2 |grad sigma|^2 ],
// with sigma(r) = (1/2) log(1 + eta/r) evaluated by finite differences.  This
// never touches the closed-form curvature expression.
double curvature_fd_oracle(double r, double eta, int dim) {
  const auto sigma = [eta](double s) { return 0.5 * std::log(1.0 + eta / s); };
  const double h = 1e-4 * r;
  const double s1 = fd_derivative(sigma, r, h);
  const auto ds = [&](double s) { return fd_derivative(sigma, s, 1e-4 * s); };
  const double s2 = fd_derivative(ds, r, h);
  const double lap = s2 + (dim - 1) * s1 / r;
  return -2.0 * (dim - 1) * std::exp(-2.0 * sigma(r)) *
         (lap + 0.5 * (dim - 2) * s1 * s1);
}

}  // namespace

TEST_CASE("params validate their domain") {
  CHECK_NOTHROW(ModelParams(0.0, 1.0, 1.0, 2));
  CHECK_NOTHROW(ModelParams(2.5, -1.0, 0.1, 7));
  CHECK_THROWS_AS(ModelParams(-0.1, 1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, -1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, 1.0, 1), std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(ModelParams(nan, 1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.0, nan, 1.0, 3), std::invalid_argument);

  const ModelParams def;
  CHECK(def.eta == 0.0);
  CHECK(def.k == 1.0);
  CHECK(def.hbar == 1.0);
  CHECK(def.dim == 3);
  CHECK(def == ModelParams(0.0, 1.0, 1.0, 3));
}

TEST_CASE("hamiltonian anchors") {
  const PhaseState rest{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK(hamiltonian(rest, ModelParams(0.0, 1.0, 1.0, 3)) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(hamiltonian(rest, ModelParams(1.0, 1.0, 1.0, 3)) == doctest::Approx(-0.5).epsilon(1e-15));

  // T = r p^2 / (2(eta+r)) = 1/(2*2) at r = |p| = eta = 1, k = 0.
  const PhaseState moving{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  CHECK(hamiltonian(moving, ModelParams(1.0, 0.0, 1.0, 3)) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(hamiltonian(PhaseState{{0.0, 0.0}, {1.0, 0.0}}, ModelParams()),
                  std::domain_error);
  CHECK_THROWS_AS(hamiltonian(PhaseState{{1.0, 0.0}, {1.0}}, ModelParams()),
                  std::domain_error);
}

TEST_CASE("eta = 0 reduces to the flat Kepler-Coulomb Hamiltonian") {
  std::mt19937_64 rng(11);
  const ModelParams par(0.0, 1.7, 1.0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    PhaseState s{std::vector<double>(4), std::vector<double>(4)};
    for (int i = 0; i < 4; ++i) {
      s.q[i] = 2.0 * unit_double(rng) - 1.0;
      s.p[i] = 2.0 * unit_double(rng) - 1.0;
    }
    const double r = norm(s.q);
    if (r < 1e-2) continue;
    const double flat = 0.5 * dot(s.p, s.p) - par.k / r;
    CHECK(hamiltonian(s, par) == doctest::Approx(flat).epsilon(1e-14));
  }
}

TEST_CASE("metric factor and conformal factor") {
  const ModelParams flat(0.0, 1.0, 1.0, 3);
  CHECK(metric_factor(1.0, flat) == 1.0);
  CHECK(metric_factor(1.0, ModelParams(1.0, 1.0, 1.0, 3)) == 2.0);
  CHECK(metric_factor(0.5, ModelParams(0.2, 1.0, 1.0, 3)) == doctest::Approx(1.4).epsilon(1e-15));
  const ModelParams par(0.7, 1.0, 1.0, 3);
  for (double r : {0.1, 1.0, 5.0})
    CHECK(conformal_factor(r, par) == doctest::Approx(std::sqrt(metric_factor(r, par))));
  CHECK_THROWS_AS(metric_factor(0.0, par), std::domain_error);
  CHECK_THROWS_AS(metric_factor(-1.0, par), std::domain_error);
}

TEST_CASE("scalar curvature closed form") {
  // Flat limit and the degenerate-dimension guard.
  for (double r : {0.3, 1.0, 7.0}) {
    CHECK(scalar_curvature(r, 0.0, 3) == 0.0);
    CHECK(scalar_curvature(r, 2.0, 1) == 0.0);
  }
  // N = 3 reduction 3 eta^2 / (2 r (eta+r)^3).
  CHECK(scalar_curvature(1.0, 1.0, 3) == doctest::Approx(0.1875).epsilon(1e-15));
  for (double eta : {0.2, 1.0, 3.0})
    for (double r : {0.5, 1.0, 4.0})
      CHECK(scalar_curvature(r, eta, 3) ==
            doctest::Approx(3.0 * eta * eta / (2.0 * r * std::pow(eta + r, 3))).epsilon(1e-14));
  // params overload agrees.
  const ModelParams par(0.4, 1.0, 1.0, 5);
  CHECK(scalar_curvature(2.0, par) == scalar_curvature(2.0, 0.4, 5));
}

TEST_CASE("scalar curvature matches the conformal-transformation oracle") {
  std::mt19937_64 rng(23);
  for (int dim : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 25; ++trial) {
      const double r = 0.3 + 3.0 * unit_double(rng);
      const double eta = 0.1 + 2.0 * unit_double(rng);
      const double oracle = curvature_fd_oracle(r, eta, dim);
      const double closed = scalar_curvature(r, eta, dim);
      CHECK(closed == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("green function anchors and derivative") {
  CHECK(green_radial(2.0, ModelParams(0.0, 1.0, 1.0, 3)) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(green_radial(1.0, ModelParams(1.0, 1.0, 1.0, 3)) ==
        doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-15));
  const ModelParams par(1.0, 1.0, 1.0, 3);
  CHECK(green_radial_derivative(1.0, par) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  // d/dr of the closed form matches the defining integrand 1/(r^2 f).
  for (double eta : {0.0, 0.5, 2.0}) {
    const ModelParams pe(eta, 1.0, 1.0, 3);
    for (double r : {0.2, 1.0, 3.0, 8.0}) {
      const double fd = fd_derivative([&pe](double s) { return green_radial(s, pe); }, r, 1e-4 * r);
      CHECK(fd == doctest::Approx(green_radial_derivative(r, pe)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(green_radial(0.0, par), std::domain_error);
}

TEST_CASE("green function is the antiderivative of 1/(r^2 f)") {
  boost::math::quadrature::tanh_sinh<double> quad;
  for (double eta : {0.0, 0.3, 1.0, 4.0}) {
    const ModelParams par(eta, 1.0, 1.0, 3);
    const auto integrand = [&par](double s) { return green_radial_derivative(s, par); };
    for (auto [a, b] : {std::pair{0.1, 1.0}, std::pair{1.0, 2.5}, std::pair{0.5, 20.0}}) {
      const double integral = quad.integrate(integrand, a, b);
      CHECK(integral == doctest::Approx(green_radial(b, par) - green_radial(a, par)).epsilon(1e-10));
    }
  }
}

TEST_CASE("green function satisfies the defining radial ODE") {
  // The first integral r^2 f(r) U'(r) is constant away from the origin, with
  // U' recovered from the closed-form U by finite differences.
  for (double eta : {0.3, 1.0, 2.5}) {
    const ModelParams par(eta, 1.0, 1.0, 3);
    const auto flux = [&par](double r) {
      const double du = fd_derivative([&par](double s) { return green_radial(s, par); }, r, 1e-4 * r);
      return r * r * conformal_factor(r, par) * du;
    };
    const double ref = flux(1.0);
    for (double r = 0.1; r <= 10.0; r *= 1.7)
      CHECK(flux(r) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("intrinsic potentials") {
  const ModelParams par(1.0, 1.0, 1.0, 3);
  // Oscillator branch equals the deformed Coulomb potential with C = k/eta, D = -C.
  const IntrinsicPotentials po = intrinsic_potentials(1.0, par, {0.0, 0.0, 1.0, -1.0});
  CHECK(po.oscillator == doctest::Approx(-0.5).epsilon(1e-15));
  const IntrinsicPotentials pk = intrinsic_potentials(1.0, par, {1.0, 0.0, 0.0, 0.0});
  CHECK(pk.kepler_coulomb == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  for (double k : {1.0, 2.0}) {
    for (double eta : {0.3, 1.0, 5.0}) {
      const ModelParams pe(eta, k, 1.0, 3);
      const IntrinsicConstants c = deformed_coulomb_constants(pe);
      CHECK(c.C == doctest::Approx(k / eta));
      CHECK(c.D == doctest::Approx(-k / eta));
      for (double r : {0.1, 1.0, 10.0}) {
        const IntrinsicPotentials p = intrinsic_potentials(r, pe, c);
        CHECK(p.oscillator == doctest::Approx(-k / (eta + r)).epsilon(1e-14));
      }
    }
  }
  CHECK_THROWS_AS(deformed_coulomb_constants(ModelParams(0.0, 1.0, 1.0, 3)), std::domain_error);
}

TEST_CASE("hyperspherical chart anchors") {
  const HypersphericalPoint polar = to_hyperspherical({0.0, 1.0});
  CHECK(polar.r == doctest::Approx(1.0));
  REQUIRE(polar.theta.size() == 1);
  CHECK(polar.theta[0] == doctest::Approx(std::acos(-1.0) / 2.0));

  // q_1 = r cos t1, q_2 = r sin t1 cos t2, q_3 = r sin t1 sin t2.
  HypersphericalPoint h;
  h.r = 1.0;
  h.theta = {std::acos(-1.0) / 2.0, 0.0};
  const std::vector<double> q = from_hyperspherical(h);
  REQUIRE(q.size() == 3);
  CHECK(std::fabs(q[0]) < 1e-15);
  CHECK(q[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(q[2]) < 1e-15);

  CHECK_THROWS_AS(to_hyperspherical({0.0, 0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(from_hyperspherical(HypersphericalPoint{-1.0, {0.5}}), std::domain_error);
  CHECK_THROWS_AS(from_hyperspherical(HypersphericalPoint{1.0, {4.0, 0.5}}), std::domain_error);
  CHECK_THROWS_AS(from_hyperspherical(HypersphericalPoint{1.0, {0.5, 7.0}}), std::domain_error);
}

TEST_CASE("hyperspherical round-trip over nine decades of radius") {
  std::mt19937_64 rng(37);
  for (int dim : {2, 3, 5}) {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      // log-uniform radius in [1e-3, 1e3], uniform direction.
      const double r = std::pow(10.0, -3.0 + 6.0 * unit_double(rng));
      std::vector<double> q(dim);
      double n2 = 0.0;
      do {
        n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
          q[i] = 2.0 * unit_double(rng) - 1.0;
          n2 += q[i] * q[i];
        }
      } while (n2 < 1e-6);
      const double scale = r / std::sqrt(n2);
      for (int i = 0; i < dim; ++i) q[i] *= scale;

      const std::vector<double> back = from_hyperspherical(to_hyperspherical(q));
      REQUIRE(back.size() == q.size());
      for (int i = 0; i < dim; ++i)
        worst = std::max(worst, std::fabs(back[i] - q[i]) / r);
    }
    CHECK(worst < 1e-12);
  }
}
