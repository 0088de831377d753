#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "crossdiff/particle_sim.hpp"
#include "doctest.h"

using namespace crossdiff;

namespace {

ParticleEnsemble make_ensemble(std::vector<double> p1, std::vector<double> p2,
                               double sigma = 0.0, std::uint64_t seed = 1) {
  ParticleEnsemble ens;
  ens.positions = {std::move(p1), std::move(p2)};
  ens.sigma = {sigma, sigma};
  ens.rng_seed = seed;
  ens.left = 0.0;
  ens.right = 1.0;
  return ens;
}

}  // namespace

TEST_CASE("mollifier kernel") {
  const KernelSpec k(0.5);

  SUBCASE("unit integral, checked against an independent trapezoid rule") {
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double y = -0.5 + static_cast<double>(i) / n;
      acc += ((i == 0 || i == n) ? 0.5 : 1.0) * k.value(y);
    }
    acc /= n;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("compact support and symmetry") {
    CHECK(k.value(0.5) == 0.0);
    CHECK(k.value(-0.7) == 0.0);
    CHECK(k.value(0.2) == doctest::Approx(k.value(-0.2)).epsilon(1e-15));
    CHECK(k.value(0.0) > k.value(0.3));
    CHECK(k.derivative(0.0) == 0.0);
    CHECK(k.derivative(0.6) == 0.0);
    CHECK(k.derivative(0.2) == doctest::Approx(-k.derivative(-0.2)).epsilon(1e-13));
    CHECK(k.derivative(0.2) < 0.0);  // decreasing away from the center
  }
  SUBCASE("derivative matches a centered difference") {
    for (const double y : {-0.35, -0.1, 0.05, 0.3}) {
      const double d = 1e-6;
      const double fd = (k.value(y + d) - k.value(y - d)) / (2.0 * d);
      CHECK(k.derivative(y) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  SUBCASE("scaling moves mass, not shape") {
    const KernelSpec narrow(0.1), wide(1.0);
    CHECK(narrow.value(0.0) == doctest::Approx(10.0 * wide.value(0.0)).epsilon(1e-13));
    CHECK(narrow.support() == 0.1);
  }
  SUBCASE("invalid width") {
    CHECK_THROWS_AS(KernelSpec(0.0), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec(-1.0), std::invalid_argument);
  }
}

TEST_CASE("ensemble validation") {
  ParticleEnsemble ens = make_ensemble({0.5}, {0.5});
  CHECK_NOTHROW(ens.validate());
  ens.positions[0].push_back(0.7);
  CHECK_THROWS_AS(ens.validate(), std::invalid_argument);  // unequal counts
  ens = make_ensemble({1.5}, {0.5});
  CHECK_THROWS_AS(ens.validate(), std::invalid_argument);  // outside the domain
  ens = make_ensemble({0.5}, {0.5});
  ens.sigma[1] = -1.0;
  CHECK_THROWS_AS(ens.validate(), std::invalid_argument);
}

TEST_CASE("pairwise drift") {
  const KernelSpec k(0.2);
  const Matrix2 a_same = {{{1.0, 0.0}, {0.0, 1.0}}};

  SUBCASE("a lone particle feels only the potential") {
    const auto d = interaction_drift(make_ensemble({0.5}, {0.4}), k, a_same, {2.0, -3.0},
                                     [](double x) { return x; });
    CHECK(d[0][0] == doctest::Approx(2.0 * 0.5).epsilon(1e-14));
    CHECK(d[1][0] == doctest::Approx(-3.0 * 0.4).epsilon(1e-14));
  }
  SUBCASE("coincident particles do not move") {
    const auto d = interaction_drift(make_ensemble({0.5, 0.5}, {0.3, 0.3}), k, a_same,
                                     {0.0, 0.0}, {});
    for (int i = 0; i < 2; ++i) {
      CHECK(d[i][0] == 0.0);
      CHECK(d[i][1] == 0.0);
    }
  }
  SUBCASE("close neighbours repel symmetrically") {
    const auto d =
        interaction_drift(make_ensemble({0.45, 0.55}, {0.1, 0.9}), k, a_same, {0.0, 0.0}, {});
    CHECK(d[0][0] < 0.0);
    CHECK(d[0][1] > 0.0);
    CHECK(d[0][0] == doctest::Approx(-d[0][1]).epsilon(1e-13));
    // second species particles sit farther apart than the support
    CHECK(d[1][0] == 0.0);
    CHECK(d[1][1] == 0.0);
  }
  SUBCASE("zero coupling ignores the other species") {
    const Matrix2 a_cross = {{{0.0, 0.0}, {1.0, 0.0}}};
    const auto d =
        interaction_drift(make_ensemble({0.45}, {0.55}), k, a_cross, {0.0, 0.0}, {});
    CHECK(d[0][0] == 0.0);   // a_11 = a_12 = 0
    CHECK(d[1][0] != 0.0);   // a_21 = 1 sees species 1
  }
  SUBCASE("windowed sum agrees with the brute-force double loop") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    const int n = 50;
    std::vector<double> p1(n), p2(n);
    for (int j = 0; j < n; ++j) {
      p1[j] = pos(rng);
      p2[j] = pos(rng);
    }
    const Matrix2 a = {{{1.0, 0.5}, {0.25, 2.0}}};
    const std::array<double, 2> b = {1.0, -2.0};
    const auto grad_phi = [](double x) { return std::sin(x); };
    const ParticleEnsemble ens = make_ensemble(p1, p2);
    const auto got = interaction_drift(ens, k, a, b, grad_phi);

    const std::array<const std::vector<double>*, 2> all = {&p1, &p2};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = ens.positions[i][static_cast<size_t>(j)];
        double acc = b[i] * grad_phi(x);
        for (int s = 0; s < 2; ++s) {
          double sum = 0.0;
          for (double y : *all[s]) sum += k.derivative(x - y);
          acc -= a[i][s] / n * sum;
        }
        CHECK(got[i][static_cast<size_t>(j)] == doctest::Approx(acc).epsilon(1e-12));
      }
    }
  }
  SUBCASE("intra-species forces cancel in the mean") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.3, 0.7);
    std::vector<double> p1(20), p2(20);
    for (auto& v : p1) v = pos(rng);
    for (auto& v : p2) v = pos(rng);
    const auto d = interaction_drift(make_ensemble(p1, p2), k, a_same, {0.0, 0.0}, {});
    for (int i = 0; i < 2; ++i) {
      const double total = std::accumulate(d[i].begin(), d[i].end(), 0.0);
      CHECK(std::abs(total) <= 1e-10);
    }
  }
}

TEST_CASE("explicit step") {
  const KernelSpec k(0.2);
  const Matrix2 a0{};

  SUBCASE("noise-free step is the exact drift update") {
    ParticleEnsemble ens = make_ensemble({0.3}, {0.6});
    ens = em_step(ens, k, a0, {1.0, -1.0}, [](double) { return 0.5; }, 0.1);
    CHECK(ens.positions[0][0] == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(ens.positions[1][0] == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(ens.step_count == 1);
  }
  SUBCASE("walls reflect") {
    ParticleEnsemble ens = make_ensemble({0.9}, {0.1});
    ens = em_step(ens, k, a0, {1.0, -1.0}, [](double) { return 3.0; }, 0.1);
    CHECK(ens.positions[0][0] == doctest::Approx(0.8).epsilon(1e-13));  // 1.2 folds back
    CHECK(ens.positions[1][0] == doctest::Approx(0.2).epsilon(1e-13));  // -0.2 folds back
  }
  SUBCASE("same seed, same path") {
    auto run = [&] {
      ParticleEnsemble ens = make_ensemble({0.2, 0.5, 0.8}, {0.3, 0.6, 0.9}, 0.3, 42);
      for (int s = 0; s < 10; ++s) {
        ens = em_step(ens, k, {{{1.0, 1.0}, {1.0, 1.0}}}, {0.0, 0.0}, {}, 1e-3);
      }
      return ens;
    };
    const ParticleEnsemble x = run(), y = run();
    for (int i = 0; i < 2; ++i) {
      for (size_t j = 0; j < x.positions[i].size(); ++j) {
        CHECK(x.positions[i][j] == y.positions[i][j]);
      }
    }
  }
  SUBCASE("a different seed decorrelates") {
    ParticleEnsemble x = make_ensemble({0.5}, {0.5}, 0.5, 1);
    ParticleEnsemble y = make_ensemble({0.5}, {0.5}, 0.5, 2);
    x = em_step(std::move(x), k, a0, {0.0, 0.0}, {}, 1e-2);
    y = em_step(std::move(y), k, a0, {0.0, 0.0}, {}, 1e-2);
    CHECK(x.positions[0][0] != y.positions[0][0]);
  }
  SUBCASE("diffusion keeps everything inside") {
    std::vector<double> p(200);
    for (size_t j = 0; j < p.size(); ++j) p[j] = (0.5 + static_cast<double>(j)) / 200.0;
    ParticleEnsemble ens = make_ensemble(p, p, 1.0, 7);
    for (int s = 0; s < 20; ++s) ens = em_step(std::move(ens), k, a0, {0.0, 0.0}, {}, 1e-2);
    CHECK_NOTHROW(ens.validate());
    CHECK(ens.step_count == 20);
  }
  SUBCASE("nonpositive dt is rejected") {
    CHECK_THROWS_AS(em_step(make_ensemble({0.5}, {0.5}), k, a0, {0.0, 0.0}, {}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("kernel density estimate") {
  const Mesh1D mesh(0.0, 1.0, 100);

  SUBCASE("always a unit lumped mass") {
    const auto rho =
        empirical_density(make_ensemble({0.2, 0.6, 0.9}, {0.5, 0.5, 0.5}), mesh, 0.05);
    const NodalField ones(mesh, 1.0);
    CHECK(lumped_inner(rho[0], ones) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lumped_inner(rho[1], ones) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("a uniform cloud flattens in the interior") {
    const int n = 10000;
    std::vector<double> p(n);
    for (int j = 0; j < n; ++j) p[j] = (0.5 + j) / n;
    const auto rho = empirical_density(make_ensemble(p, p), mesh, 0.05);
    for (int j = 0; j < mesh.num_nodes(); ++j) {
      const double x = mesh.node(j);
      if (x >= 0.15 && x <= 0.85) {
        CHECK(rho[0][j] == doctest::Approx(1.0).epsilon(0.1));
      }
    }
  }
  SUBCASE("rejects degenerate input") {
    CHECK_THROWS_AS(empirical_density(make_ensemble({0.5}, {0.5}), mesh, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(empirical_density(make_ensemble({}, {}), mesh, 0.05),
                    std::invalid_argument);
  }
}

TEST_CASE("field comparison in L1") {
  const Mesh1D mesh(0.0, 1.0, 10);

  SUBCASE("scaling the reference changes nothing") {
    const NodalField rho = interpolate(
        [](double x) { return std::exp(-10.0 * (x - 0.5) * (x - 0.5)); }, mesh);
    NodalField scaled = rho;
    for (double& v : scaled.values) v *= 2.0;
    // normalize the first argument to unit mass as the estimator guarantees
    NodalField unit = rho;
    const double mass = lumped_inner(unit, NodalField(mesh, 1.0));
    for (double& v : unit.values) v /= mass;
    CHECK(compare_to_pde(unit, rho) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(compare_to_pde(unit, scaled) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("disjoint unit masses are distance two") {
    NodalField a(mesh), b(mesh);
    a[0] = 1.0 / lumped_weight(mesh, 0);
    b[10] = 1.0 / lumped_weight(mesh, 10);
    CHECK(compare_to_pde(a, b) == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("rejects bad input") {
    const NodalField a(mesh, 1.0);
    CHECK_THROWS_AS(compare_to_pde(a, NodalField(Mesh1D(0.0, 1.0, 11), 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(compare_to_pde(a, NodalField(mesh, 0.0)), std::invalid_argument);
  }
}

TEST_CASE("density sampling") {
  const Mesh1D mesh(0.0, 1.0, 50);

  SUBCASE("deterministic per seed and species") {
    const NodalField rho(mesh, 1.0);
    const auto a = sample_from_density(rho, 100, 9, 0);
    const auto b = sample_from_density(rho, 100, 9, 0);
    const auto c = sample_from_density(rho, 100, 9, 1);
    CHECK(a == b);
    CHECK(a != c);
    for (double x : a) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
  SUBCASE("uniform density samples uniformly") {
    const NodalField rho(mesh, 1.0);
    const int n = 20000;
    const auto xs = sample_from_density(rho, n, 3, 0);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
    const auto below = std::count_if(xs.begin(), xs.end(), [](double x) { return x < 0.25; });
    CHECK(static_cast<double>(below) / n == doctest::Approx(0.25).epsilon(0.05));
  }
  SUBCASE("mass concentrated left stays left") {
    const NodalField rho =
        interpolate([](double x) { return x < 0.5 ? 1.0 : 0.0; }, mesh);
    for (double x : sample_from_density(rho, 500, 4, 0)) {
      CHECK(x <= 0.5 + mesh.h());
    }
  }
  SUBCASE("overall scale of the density is irrelevant") {
    const NodalField rho = interpolate([](double x) { return 0.2 + x * x; }, mesh);
    NodalField scaled = rho;
    for (double& v : scaled.values) v *= 4.0;  // exact in floating point
    CHECK(sample_from_density(rho, 64, 11, 0) == sample_from_density(scaled, 64, 11, 0));
  }
  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(sample_from_density(NodalField(mesh, 1.0), 0, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_from_density(NodalField(mesh, -1.0), 5, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_from_density(NodalField(mesh, 0.0), 5, 1, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("boundary mass fraction") {
  const Mesh1D mesh(0.0, 1.0, 10);

  SUBCASE("uniform field") {
    const NodalField u(mesh, 1.0);
    CHECK(boundary_mass_fraction(u, 0.1) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(boundary_mass_fraction(u, 0.0) == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(boundary_mass_fraction(u, 0.5) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("centered spike never touches the walls") {
    NodalField u(mesh);
    u[5] = 3.0;
    CHECK(boundary_mass_fraction(u, 0.2) == 0.0);
  }
  SUBCASE("zero field reports zero") {
    CHECK(boundary_mass_fraction(NodalField(mesh, 0.0), 0.1) == 0.0);
  }
  SUBCASE("negative margin is rejected") {
    CHECK_THROWS_AS(boundary_mass_fraction(NodalField(mesh, 1.0), -0.1),
                    std::invalid_argument);
  }
}
