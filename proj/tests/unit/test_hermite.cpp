#include <doctest.h>

#include <cmath>
#include <vector>

#include "sdairp/hermite.hpp"

using namespace sdairp;

namespace {

// 12-sample regression fixture: post-decision inventories at step 3 against
// the stock-out cost observed at the horizon (rho = 10).
const std::vector<double> kX3 = {0.724, 0.588, 1.000, 1.000, 1.000, 0.590,
                                 0.578, 0.547, 0.614, 0.546, 0.440, 0.410};
const std::vector<double> kSO = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 10, 10};
const std::vector<double> kPredicted = {-0.019, -0.253, 0.000, 0.000, 0.000, -0.209,
                                        -0.350, 0.198,  0.441, 0.245, 9.900, 10.047};

}  // namespace

TEST_CASE("He_0 is identically one") {
  for (double x : {-3.0, -0.5, 0.0, 0.724, 10.0}) CHECK(hermite_eval(0, x) == 1.0);
}

TEST_CASE("recurrence equals the closed forms on a grid") {
  for (double x = -2.0; x <= 2.0; x += 0.125) {
    CHECK(hermite_eval(1, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(hermite_eval(2, x) == doctest::Approx(x * x - 1).epsilon(1e-12));
    CHECK(hermite_eval(3, x) == doctest::Approx(x * x * x - 3 * x).epsilon(1e-12));
    CHECK(hermite_eval(4, x) ==
          doctest::Approx(std::pow(x, 4) - 6 * x * x + 3).epsilon(1e-12));
    CHECK(hermite_eval(5, x) ==
          doctest::Approx(std::pow(x, 5) - 10 * std::pow(x, 3) + 15 * x).epsilon(1e-12));
  }
}

TEST_CASE("basis row fixture at x = 0.724") {
  const double expected[] = {0.724, -0.476, -1.792, 0.132, 7.264};
  HermiteBasis basis{5};
  const auto row = basis.row(0.724);
  CHECK(row[0] == 1.0);
  for (int n = 1; n <= 5; ++n) {
    CHECK(std::fabs(row[n] - expected[n - 1]) < 5e-3);
    CHECK(row[n] == doctest::Approx(hermite_eval(n, 0.724)).epsilon(1e-14));
  }
}

TEST_CASE("M=5 fit reproduces the predicted stock-out column") {
  FitResult f = fit(kX3, kSO, 5);
  REQUIRE(f.fitted.size() == kX3.size());
  for (std::size_t i = 0; i < kX3.size(); ++i) CHECK(std::fabs(f.fitted[i] - kPredicted[i]) < 0.1);
  CHECK(f.rank == 6);
  CHECK(f.condition > 1e5);  // clustered inputs make the basis nearly collinear

  SUBCASE("raw prediction at 0.410 and the clamp") {
    CHECK(predict(f, 0.410) == doctest::Approx(10.047).epsilon(2e-3));
    CHECK(predict(f, 0.410, 10.0) == 10.0);
    CHECK(predict(f, 0.588, 10.0) == 0.0);  // raw -0.253 clamps up to zero
  }

  SUBCASE("separation: stock-out points high, calm training points low") {
    CHECK(f.fitted[10] > 9.5);
    CHECK(f.fitted[11] > 9.5);
    for (std::size_t i = 0; i < kX3.size(); ++i)
      if (kX3[i] >= 0.6) CHECK(f.fitted[i] < 0.5);
  }

  SUBCASE("predict at training points equals fitted values") {
    for (std::size_t i = 0; i < kX3.size(); ++i)
      CHECK(predict(f, kX3[i]) == doctest::Approx(f.fitted[i]).epsilon(1e-6));
  }
}

TEST_CASE("training RSS is nonincreasing in the basis size") {
  double prev = std::numeric_limits<double>::infinity();
  for (int M : {2, 4, 5}) {
    FitResult f = fit(kX3, kSO, M);
    double rss = 0;
    for (std::size_t i = 0; i < kSO.size(); ++i)
      rss += (f.fitted[i] - kSO[i]) * (f.fitted[i] - kSO[i]);
    CHECK(rss <= prev + 1e-9);
    prev = rss;
  }
  CHECK(prev < 1.0);  // M=5 nearly interpolates this fixture
}

TEST_CASE("projection idempotence") {
  FitResult f = fit(kX3, kSO, 5);
  FitResult g = fit(kX3, f.fitted, 5);
  for (std::size_t i = 0; i < kX3.size(); ++i)
    CHECK(g.fitted[i] == doctest::Approx(f.fitted[i]).epsilon(1e-8));
}

TEST_CASE("degenerate inputs still produce the projection") {
  SUBCASE("all-zero targets fit to zero") {
    FitResult f = fit(kX3, std::vector<double>(kX3.size(), 0.0), 5);
    for (double v : f.fitted) CHECK(v == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(predict(f, 0.3) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("single distinct x is rank one") {
    FitResult f = fit({0.4, 0.4, 0.4}, {1.0, 2.0, 3.0}, 5);
    CHECK(f.rank == 1);
    for (double v : f.fitted) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("zero-coefficient fit predicts zero everywhere") {
    FitResult f;
    f.M = 5;
    f.beta.assign(6, 0.0);
    CHECK(predict(f, 0.77) == 0.0);
  }
}
