#include <doctest.h>

#include <stdexcept>

#include "cv2x/analytic.hpp"

using namespace cv2x::analytic;

TEST_CASE("no peers means no collision") {
  CHECK(p_no_collision({0.3, 0.2, 10, 1, 3}) == 1.0);
}

TEST_CASE("nobody selecting means no collision") {
  CHECK(p_no_collision({0.0, 0.2, 100, 30, 20}) == 1.0);
}

TEST_CASE("scalar evaluation") {
  // [1 - (1 - 0.99 * (1 - 0.01/0.99)) * 0.5 / 8]^2, evaluated at 40 digits.
  CHECK(p_no_collision({0.01, 0.5, 10, 3, 2}) == doctest::Approx(0.9975015625).epsilon(1e-13));
}

TEST_CASE("always reselecting removes the collision term") {
  CHECK(p_no_collision({0.2, 1.0, 100, 30, 3}) == 1.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(p_no_collision({0.01, 0.5, 10, 11, 2}), std::domain_error);
  CHECK_THROWS_AS(p_no_collision({0.6, 0.5, 100, 3, 3}), std::domain_error);
  CHECK_THROWS_AS(p_no_collision({-0.1, 0.5, 100, 3, 3}), std::domain_error);
  CHECK_THROWS_AS(p_no_collision({0.1, 1.5, 100, 3, 3}), std::domain_error);
}

TEST_CASE("estimate pi from telemetry") {
  CHECK(estimate_pi({1000, 0}) == 0.0);
  CHECK(estimate_pi({5000, 50}) == doctest::Approx(0.01));
  CHECK_THROWS_AS(estimate_pi({0, 0}), std::invalid_argument);
}
