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

#ifndef RADIOGEN_KERNELS_KERNELS_H_
#define RADIOGEN_KERNELS_KERNELS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace radiogen::kernels {

using Vector = std::vector<double>;

// Dense row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

inline constexpr double kDefaultRopeBase = 10000.0;

// Throws Error(kValidation) on an empty vector or a NaN/Inf element.
void RequireFinite(std::span<const double> x, const char* what);

// y_i = x_i / sqrt(mean(x^2) + eps). Requires eps > 0.
Vector RmsNorm(std::span<const double> x, double eps);

// x (row vector, length n) times M (n x m).
Vector RowTimes(std::span<const double> x, const Matrix& m);

double Sigmoid(double z);
// z * sigmoid(beta * z)
double Swish(double z, double beta);
double SwishDerivative(double z, double beta);

// Swish_beta(xW + b) * (xV + c), elementwise. W and V are n x m, b and c
// have length m.
Vector SwiGlu(std::span<const double> x, const Matrix& w, const Matrix& v,
              std::span<const double> b, std::span<const double> c, double beta);

// d output_j / d x_i as an m x n matrix.
Matrix SwiGluJacobian(std::span<const double> x, const Matrix& w, const Matrix& v,
                      std::span<const double> b, std::span<const double> c,
                      double beta);

// Angle of pair i: position * base^(-2i/d).
double RopeAngle(std::int64_t position, std::size_t pair, std::size_t d, double base);

// Rotates each (x_{2i}, x_{2i+1}) by RopeAngle(position, i, d, base).
// Requires an even dimension, position >= 0 and base > 1.
Vector Rope(std::span<const double> x, std::int64_t position,
            double base = kDefaultRopeBase);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest observed error
  double tolerance = 0.0;
  std::size_t cases = 0;
};

// Randomized property suite over the three kernels.
std::vector<SelftestCheck> RunSelftest(std::uint64_t seed, std::size_t cases);

}  // namespace radiogen::kernels

#endif  // RADIOGEN_KERNELS_KERNELS_H_
