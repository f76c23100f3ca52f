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

#include <algorithm>
#include <cmath>
#include <random>

#include "kernels/kernels.h"

namespace radiogen::kernels {

namespace {

double Norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Vector RandomVector(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(n);
  for (double& e : v) e = dist(rng);
  return v;
}

Matrix RandomMatrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  m.data = RandomVector(rng, r * c, 1.0);
  return m;
}

SelftestCheck Finish(std::string name, double worst, double tolerance, std::size_t cases) {
  return {std::move(name), worst <= tolerance, worst, tolerance, cases};
}

}  // namespace

std::vector<SelftestCheck> RunSelftest(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> half_dim(1, 32);
  std::uniform_int_distribution<std::int64_t> pos(0, 4096);
  std::vector<SelftestCheck> checks;

  double norm_err = 0.0;
  double additivity_err = 0.0;
  for (std::size_t k = 0; k < cases; ++k) {
    const Vector x = RandomVector(rng, 2 * half_dim(rng), 10.0);
    const std::int64_t p1 = pos(rng);
    const std::int64_t p2 = pos(rng);
    const Vector y = Rope(x, p1);
    norm_err = std::max(norm_err, std::abs(Norm(y) - Norm(x)) / std::max(1.0, Norm(x)));
    const Vector composed = Rope(Rope(x, p2), p1);
    const Vector direct = Rope(x, p1 + p2);
    for (std::size_t i = 0; i < x.size(); ++i) {
      additivity_err = std::max(additivity_err, std::abs(composed[i] - direct[i]) /
                                                    std::max(1.0, Norm(x)));
    }
  }
  checks.push_back(Finish("rope_norm_preservation", norm_err, 1e-12, cases));
  checks.push_back(Finish("rope_angle_additivity", additivity_err, 1e-9, cases));

  double const_err = 0.0;
  const double eps = 1e-12;
  std::uniform_real_distribution<double> mag(0.1, 100.0);
  for (std::size_t k = 0; k < cases; ++k) {
    const Vector x(half_dim(rng), mag(rng));
    for (double v : RmsNorm(x, eps)) const_err = std::max(const_err, std::abs(v - 1.0));
  }
  checks.push_back(Finish("rms_norm_constant_vector", const_err, 1e-9, cases));

  double jac_err = 0.0;
  std::uniform_int_distribution<std::size_t> small(1, 4);
  std::uniform_real_distribution<double> beta_dist(0.1, 3.0);
  const std::size_t swiglu_cases = std::min<std::size_t>(cases, 100);
  for (std::size_t k = 0; k < swiglu_cases; ++k) {
    const std::size_t n = small(rng);
    const std::size_t m = small(rng);
    const Vector x = RandomVector(rng, n, 2.0);
    const Matrix w = RandomMatrix(rng, n, m);
    const Matrix v = RandomMatrix(rng, n, m);
    const Vector b = RandomVector(rng, m, 1.0);
    const Vector c = RandomVector(rng, m, 1.0);
    const double beta = beta_dist(rng);
    const Matrix jac = SwiGluJacobian(x, w, v, b, c, beta);
    const double h = 1e-6;
    for (std::size_t i = 0; i < n; ++i) {
      Vector xp = x;
      Vector xm = x;
      xp[i] += h;
      xm[i] -= h;
      const Vector fp = SwiGlu(xp, w, v, b, c, beta);
      const Vector fm = SwiGlu(xm, w, v, b, c, beta);
      for (std::size_t j = 0; j < m; ++j) {
        jac_err = std::max(jac_err, std::abs((fp[j] - fm[j]) / (2 * h) - jac(j, i)));
      }
    }
  }
  checks.push_back(Finish("swiglu_jacobian", jac_err, 1e-5, swiglu_cases));
  return checks;
}

}  // namespace radiogen::kernels
