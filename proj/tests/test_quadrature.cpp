#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lmgent/quadrature.hpp"

using namespace lmgent;
using doctest::Approx;
using std::numbers::pi;

TEST_CASE("Kronrod weights integrate constants") {
  const auto& r = quad::gk15();
  double sk = r.wk[0], sg = r.wg[0];
  for (int i = 1; i < 8; ++i) sk += 2 * r.wk[i];
  for (int i = 1; i < 4; ++i) sg += 2 * r.wg[i];
  CHECK(sk == Approx(2.0).epsilon(1e-15));
  CHECK(sg == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("single panel is exact for degree 22 polynomials") {
  std::vector<double> br = {-1.0, 1.0};
  auto est = quad::integrate<2>(
      [](double x) { return quad::VecK<2>{std::pow(x, 22), std::pow(x, 21) + x * x}; }, br,
      {1e-14, 1e-14}, 1);
  CHECK(est.value[0] == Approx(2.0 / 23.0).epsilon(1e-14));
  CHECK(est.value[1] == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(est.evaluations == 15);
}

TEST_CASE("adaptive integration of smooth and peaked integrands") {
  std::vector<double> br = {0.0, pi};
  auto est = quad::integrate<3>(
      [](double x) {
        return quad::VecK<3>{std::sin(x), std::exp(-400.0 * (x - 1.0) * (x - 1.0)),
                             1.0 / (1e-4 + (x - 2.0) * (x - 2.0))};
      },
      br, {1e-12, 1e-12, 1e-10});
  CHECK(est.converged);
  CHECK(est.value[0] == Approx(2.0).epsilon(1e-12));
  CHECK(est.value[1] == Approx(std::sqrt(pi / 400.0)).epsilon(1e-12));
  const double lor = (std::atan((pi - 2.0) / 1e-2) + std::atan(2.0 / 1e-2)) / 1e-2;
  CHECK(est.value[2] == Approx(lor).epsilon(1e-10));
  CHECK(est.error[0] <= 1e-12);
}

TEST_CASE("error estimate bounds the true error") {
  std::vector<double> br = {0.0, 1.0};
  for (double tol : {1e-4, 1e-7, 1e-10}) {
    auto est = quad::integrate<1>([](double x) { return quad::VecK<1>{std::sqrt(x)}; }, br, {tol});
    CHECK(est.converged);
    CHECK(std::abs(est.value[0] - 2.0 / 3.0) <= tol);
  }
}

TEST_CASE("interval budget") {
  std::vector<double> br = {0.0, 1.0};
  auto est = quad::integrate<1>([](double x) { return quad::VecK<1>{1.0 / std::sqrt(x + 1e-300)}; },
                                br, {1e-15}, 10);
  CHECK(!est.converged);
  CHECK(est.intervals <= 10);
}

TEST_CASE("zero tolerance component does not drive refinement") {
  std::vector<double> br = {0.0, 1.0};
  auto est = quad::integrate<2>(
      [](double x) { return quad::VecK<2>{x * x, std::exp(x)}; }, br, {1e-13, 1e300});
  CHECK(est.value[0] == Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(est.value[1] == Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("partition") {
  std::vector<double> extra = {0.25, 0.3, 2.0, -1.0};
  auto br = quad::partition(0.0, 1.0, 4, extra);
  std::vector<double> expect = {0.0, 0.25, 0.3, 0.5, 0.75, 1.0};
  REQUIRE(br.size() == expect.size());
  for (std::size_t i = 0; i < br.size(); ++i) CHECK(br[i] == Approx(expect[i]).epsilon(1e-15));
  auto one = quad::partition(-2.0, 3.0, 1, {});
  REQUIRE(one.size() == 2);
  CHECK(one.front() == -2.0);
  CHECK(one.back() == 3.0);
}
