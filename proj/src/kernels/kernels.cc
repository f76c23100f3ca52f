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

#include "kernels/kernels.h"

#include <cmath>

#include "common/error.h"

namespace radiogen::kernels {

void RequireFinite(std::span<const double> x, const char* what) {
  if (x.empty()) ThrowValidation(std::string(what) + ": empty vector");
  for (double v : x) {
    if (!std::isfinite(v)) ThrowValidation(std::string(what) + ": non-finite element");
  }
}

Vector RmsNorm(std::span<const double> x, double eps) {
  RequireFinite(x, "rms_norm");
  if (!(eps > 0)) ThrowValidation("rms_norm: eps must be positive");
  double sum_sq = 0.0;
  for (double v : x) sum_sq += v * v;
  const double scale = 1.0 / std::sqrt(sum_sq / static_cast<double>(x.size()) + eps);
  Vector y(x.begin(), x.end());
  for (double& v : y) v *= scale;
  return y;
}

Vector RowTimes(std::span<const double> x, const Matrix& m) {
  if (x.size() != m.rows) {
    ThrowValidation("shape mismatch: vector of " + std::to_string(x.size()) +
                    " times matrix with " + std::to_string(m.rows) + " rows");
  }
  Vector out(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += x[i] * m(i, j);
  }
  return out;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Swish(double z, double beta) { return z * Sigmoid(beta * z); }

double SwishDerivative(double z, double beta) {
  const double s = Sigmoid(beta * z);
  return s + beta * z * s * (1.0 - s);
}

namespace {

void CheckSwiGluShapes(std::span<const double> x, const Matrix& w, const Matrix& v,
                       std::span<const double> b, std::span<const double> c) {
  RequireFinite(x, "swiglu");
  if (w.rows != x.size() || v.rows != x.size()) {
    ThrowValidation("swiglu: W and V need one row per input element");
  }
  if (w.cols != v.cols) ThrowValidation("swiglu: xW and xV differ in dimension");
  if (b.size() != w.cols || c.size() != v.cols) {
    ThrowValidation("swiglu: bias length does not match output dimension");
  }
}

}  // namespace

Vector SwiGlu(std::span<const double> x, const Matrix& w, const Matrix& v,
              std::span<const double> b, std::span<const double> c, double beta) {
  CheckSwiGluShapes(x, w, v, b, c);
  const Vector u = RowTimes(x, w);
  const Vector g = RowTimes(x, v);
  Vector out(w.cols);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = Swish(u[j] + b[j], beta) * (g[j] + c[j]);
  }
  return out;
}

Matrix SwiGluJacobian(std::span<const double> x, const Matrix& w, const Matrix& v,
                      std::span<const double> b, std::span<const double> c,
                      double beta) {
  CheckSwiGluShapes(x, w, v, b, c);
  const Vector u = RowTimes(x, w);
  const Vector g = RowTimes(x, v);
  Matrix jac(w.cols, x.size());
  for (std::size_t j = 0; j < w.cols; ++j) {
    const double pre = u[j] + b[j];
    const double gate = g[j] + c[j];
    const double s = Swish(pre, beta);
    const double ds = SwishDerivative(pre, beta);
    for (std::size_t i = 0; i < x.size(); ++i) {
      jac(j, i) = ds * w(i, j) * gate + s * v(i, j);
    }
  }
  return jac;
}

double RopeAngle(std::int64_t position, std::size_t pair, std::size_t d, double base) {
  const double exponent = -2.0 * static_cast<double>(pair) / static_cast<double>(d);
  return static_cast<double>(position) * std::pow(base, exponent);
}

Vector Rope(std::span<const double> x, std::int64_t position, double base) {
  RequireFinite(x, "rope");
  if (x.size() % 2 != 0) ThrowValidation("rope: dimension must be even");
  if (position < 0) ThrowValidation("rope: position must be >= 0");
  if (!(base > 1.0) || !std::isfinite(base)) ThrowValidation("rope: base must be > 1");
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size() / 2; ++i) {
    const double theta = RopeAngle(position, i, x.size(), base);
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const double a = x[2 * i];
    const double bb = x[2 * i + 1];
    y[2 * i] = a * cs - bb * sn;
    y[2 * i + 1] = a * sn + bb * cs;
  }
  return y;
}

}  // namespace radiogen::kernels
