// Copyright 2026 The radiogen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "common/error.h"
#include "kernels/kernels.h"

namespace radiogen::kernels {
namespace {

double Dot(const Vector& a, const Vector& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

TEST(RmsNormTest, HandValues) {
  const Vector y = RmsNorm(std::vector<double>{3.0, 4.0}, 1e-12);
  const double rms = std::sqrt(12.5);
  EXPECT_NEAR(y[0], 3.0 / rms, 1e-12);
  EXPECT_NEAR(y[1], 4.0 / rms, 1e-12);
  EXPECT_NEAR(Dot(y, y) / 2.0, 1.0, 1e-9);
}

TEST(RmsNormTest, RejectsBadInput) {
  EXPECT_THROW(RmsNorm(std::vector<double>{}, 1e-6), Error);
  EXPECT_THROW(RmsNorm(std::vector<double>{1.0}, 0.0), Error);
  EXPECT_THROW(RmsNorm(std::vector<double>{std::nan("")}, 1e-6), Error);
}

TEST(RopeTest, AnglesAndNorm) {
  EXPECT_DOUBLE_EQ(RopeAngle(3, 0, 8, 10000.0), 3.0);
  EXPECT_NEAR(RopeAngle(1, 1, 4, 10000.0), 0.01, 1e-15);
  const Vector x = {1.0, 0.0, 0.5, -2.0};
  const Vector r = Rope(x, 7);
  EXPECT_NEAR(r[0], std::cos(7.0), 1e-12);
  EXPECT_NEAR(r[1], std::sin(7.0), 1e-12);
  EXPECT_NEAR(Dot(r, r), Dot(x, x), 1e-12);
  EXPECT_EQ(Rope(x, 0), x);
  EXPECT_THROW(Rope(std::vector<double>{1.0, 2.0, 3.0}, 1), Error);
  EXPECT_THROW(Rope(x, -1), Error);
  EXPECT_THROW(Rope(x, 1, 1.0), Error);
}

TEST(RopeTest, ScoreDependsOnlyOnOffset) {
  const Vector q = {0.3, -1.2, 2.0, 0.7, -0.4, 1.1};
  const Vector k = {1.5, 0.2, -0.6, 0.9, 0.8, -1.3};
  const double base = Dot(Rope(q, 5), Rope(k, 2));
  EXPECT_NEAR(Dot(Rope(q, 105), Rope(k, 102)), base, 1e-9);
  EXPECT_NEAR(Dot(Rope(q, 3), Rope(k, 0)), base, 1e-9);
}

TEST(SwishTest, DerivativeMatchesFiniteDifference) {
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double z : {-3.0, -0.5, 0.0, 0.8, 4.0}) {
      const double h = 1e-6;
      const double fd = (Swish(z + h, beta) - Swish(z - h, beta)) / (2 * h);
      EXPECT_NEAR(SwishDerivative(z, beta), fd, 1e-7);
    }
  }
  EXPECT_DOUBLE_EQ(Sigmoid(0.0), 0.5);
  EXPECT_DOUBLE_EQ(Swish(0.0, 1.0), 0.0);
}

TEST(SwiGluTest, HandValueAndJacobian) {
  Matrix w(2, 1);
  Matrix v(2, 1);
  w(0, 0) = 1.0;
  w(1, 0) = -1.0;
  v(0, 0) = 2.0;
  v(1, 0) = 0.5;
  const std::vector<double> b = {0.25};
  const std::vector<double> c = {-1.0};
  const std::vector<double> x = {0.7, 0.2};
  const double gate = 0.7 - 0.2 + 0.25;
  const double lin = 1.4 + 0.1 - 1.0;
  const Vector y = SwiGlu(x, w, v, b, c, 1.0);
  ASSERT_EQ(y.size(), 1u);
  EXPECT_NEAR(y[0], gate / (1.0 + std::exp(-gate)) * lin, 1e-12);

  const Matrix jac = SwiGluJacobian(x, w, v, b, c, 1.0);
  ASSERT_EQ(jac.rows, 1u);
  ASSERT_EQ(jac.cols, 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> hi = x;
    std::vector<double> lo = x;
    hi[i] += 1e-6;
    lo[i] -= 1e-6;
    const double fd = (SwiGlu(hi, w, v, b, c, 1.0)[0] - SwiGlu(lo, w, v, b, c, 1.0)[0]) / 2e-6;
    EXPECT_NEAR(jac(0, i), fd, 1e-7);
  }
}

TEST(SwiGluTest, ShapeMismatchRejected) {
  const Matrix w(3, 2);
  const Matrix v(3, 2);
  const std::vector<double> b = {0.0, 0.0};
  EXPECT_THROW(SwiGlu(std::vector<double>{1.0, 2.0}, w, v, b, b, 1.0), Error);
}

TEST(SelftestTest, AllChecksPass) {
  const auto checks = RunSelftest(11, 50);
  ASSERT_FALSE(checks.empty());
  for (const SelftestCheck& c : checks) {
    EXPECT_TRUE(c.passed) << c.name << " worst " << c.worst;
    EXPECT_EQ(c.cases, 50u);
  }
}

}  // namespace
}  // namespace radiogen::kernels
