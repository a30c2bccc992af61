#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"

using namespace dca;

namespace {
const KernelFunction unit{KernelFamily::constant, 1.0};
}

TEST_CASE("naive transcription, two cells") {
  const auto Q = oracle::naive_rhs(Eigen::Vector2d(1.0, 1.0), KernelSpec::scaled(unit, 1.0), 0.1);
  CHECK(Q(0) == doctest::Approx(-0.7).epsilon(1e-15));
  CHECK(Q(1) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(oracle::naive_rhs(Eigen::VectorXd::Zero(5), KernelSpec::scaled(unit, 1.0), 0.1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("size guard") {
  CHECK_THROWS_AS(oracle::naive_rhs(Eigen::VectorXd::Ones(65), KernelSpec::scaled(unit, 1.0), 0.01),
                  std::length_error);
  CHECK_NOTHROW(oracle::naive_rhs(Eigen::VectorXd::Ones(64), KernelSpec::scaled(unit, 1.0), 0.01));
}

TEST_CASE("lambda 1 equals an independent copy of K") {
  const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(12, 0.3, 1.7);
  const KernelFunction prod{KernelFamily::product, 1.0};
  const auto a = oracle::naive_rhs(c, KernelSpec::scaled(prod, 1.0), 0.05);
  const auto b = oracle::naive_rhs(c, KernelSpec::independent(prod, prod), 0.05);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("discrepancies") {
  const auto r = oracle::compare(Eigen::Vector2d(1.0, -2.0), Eigen::Vector2d(1.0, -2.5));
  CHECK(r.abs_discrepancy == 0.5);
  CHECK(r.rel_discrepancy == 0.25);
  CHECK(oracle::compare(0.0, 1e-3).rel_discrepancy == 1e-3);
}

TEST_CASE("RK4 reference") {
  const Grid g(0.1, 1.0);
  const State zero(g);
  const auto dk = discretize(KernelSpec::scaled(unit, 1.0), g);
  CHECK(oracle::rk4_reference(zero, dk, 1e-2, 1.0).c.cwiseAbs().maxCoeff() == 0.0);

  const State s0(g, Eigen::VectorXd::Ones(g.size()));
  auto decay = [](const Eigen::VectorXd& c, Eigen::VectorXd& out) { out = -c; };
  const double e1 = std::abs(oracle::rk4_reference(s0, decay, 0.1, 1.0).c(0) - std::exp(-1.0));
  const double e2 = std::abs(oracle::rk4_reference(s0, decay, 0.05, 1.0).c(0) - std::exp(-1.0));
  CHECK(e1 < 1e-6);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.05));
  const auto end = oracle::rk4_reference(s0, decay, 0.3, 1.0);
  CHECK(end.t == 1.0);
  CHECK_THROWS_AS(oracle::rk4_reference(s0, decay, 1e-8, 1.0), std::length_error);
  CHECK_THROWS_AS(oracle::rk4_reference(s0, decay, 0.0, 1.0), std::invalid_argument);
}
