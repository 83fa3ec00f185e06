#pragma once

#include <Eigen/Dense>
#include <random>

#include "hypan/poly.hpp"

namespace testutil {

inline hypan::Polynomial random_poly(int nvars, int max_deg, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::normal_distribution<double> coeff;
  hypan::Polynomial p(nvars);
  for (int k = 0; k < terms; ++k) {
    std::vector<int> mono(static_cast<size_t>(nvars), 0);
    int budget = deg(rng);
    for (int b = 0; b < budget; ++b)
      mono[static_cast<size_t>(std::uniform_int_distribution<int>(0, nvars - 1)(rng))] += 1;
    p.add_term(mono, hypan::cplx(coeff(rng), coeff(rng)));
  }
  return p;
}

inline Eigen::VectorXd random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * gauss(rng);
  return v;
}

inline Eigen::MatrixXcd random_cmat(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = hypan::cplx(gauss(rng), gauss(rng));
  return m;
}

}  // namespace testutil
