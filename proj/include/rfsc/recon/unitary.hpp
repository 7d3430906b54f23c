#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sim/circuit.hpp"

namespace rfsc {

// Minimal dense complex matrix, enough for building and checking gate
// unitaries on small qudit spaces.
struct CMat {
  std::size_t n = 0;
  std::vector<std::complex<double>> a;  // row-major

  CMat() = default;
  explicit CMat(std::size_t dim) : n(dim), a(dim * dim, {0.0, 0.0}) {}

  static CMat identity(std::size_t dim) {
    CMat m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::complex<double>& operator()(std::size_t r, std::size_t c) {
    return a[r * n + c];
  }
  const std::complex<double>& operator()(std::size_t r, std::size_t c) const {
    return a[r * n + c];
  }

  CMat operator*(const CMat& o) const {
    CMat out(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> v = (*this)(i, k);
        if (v == std::complex<double>{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < n; ++j) out(i, j) += v * o(k, j);
      }
    }
    return out;
  }

  CMat operator+(const CMat& o) const {
    CMat out = *this;
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] += o.a[i];
    return out;
  }

  CMat scaled(std::complex<double> s) const {
    CMat out = *this;
    for (auto& v : out.a) v *= s;
    return out;
  }

  CMat adjoint() const {
    CMat out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  double max_abs_diff(const CMat& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      m = std::max(m, std::abs(a[i] - o.a[i]));
    return m;
  }

  double one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += std::abs((*this)(i, j));
      best = std::max(best, col);
    }
    return best;
  }

  std::vector<std::complex<double>> apply(
      const std::vector<std::complex<double>>& v) const {
    std::vector<std::complex<double>> out(n, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }
};

inline CMat kron(const CMat& x, const CMat& y) {
  CMat out(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l)
          out(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
  return out;
}

// exp(M) by scaling-and-squaring with a truncated Taylor series. The
// generators here have small norm, so this is exact to machine precision.
inline CMat expm(const CMat& m) {
  int s = 0;
  double norm = m.one_norm();
  while (norm > 0.5) {
    norm /= 2.0;
    ++s;
  }
  CMat x = m.scaled(1.0 / std::pow(2.0, s));
  CMat sum = CMat::identity(m.n);
  CMat term = CMat::identity(m.n);
  for (int k = 1; k <= 24; ++k) {
    term = term * x;
    term = term.scaled(1.0 / static_cast<double>(k));
    sum = sum + term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// Equatorial Pauli on the {i, j} transition embedded in a d-level space:
// sigma_phi = cos(phi) sigma_x + sin(phi) sigma_y.
inline CMat sigma_phi(int dim, int i, int j, double phi) {
  if (i < 0 || j <= i || j >= dim)
    throw InvalidLevels("levels must satisfy 0 <= i < j < dim");
  CMat m(static_cast<std::size_t>(dim));
  const std::complex<double> upper{std::cos(phi), -std::sin(phi)};
  m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = upper;
  m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = std::conj(upper);
  return m;
}

// Unitary of one native gate. Single-ion rotations act on a d-dimensional
// space: identity outside the {i, j} block, cos(theta/2) I - i sin(theta/2)
// sigma_phi inside. MS acts on the d^2-dimensional two-ion space as
// exp(-i theta/4 (sigma_phi x 1 + 1 x sigma_phi)^2).
inline CMat gate_unitary(const NativeGate& gate, int qudit_dim) {
  if (qudit_dim < 2) throw InvalidLevels("qudit dimension must be at least 2");
  if (gate.level_i < 0 || gate.level_j <= gate.level_i ||
      gate.level_j >= qudit_dim)
    throw InvalidLevels("gate levels do not fit the qudit dimension");
  const double theta = gate.theta_rad;
  const double phi = gate.phi_rad();

  if (!gate.two_ion()) {
    CMat u = CMat::identity(static_cast<std::size_t>(qudit_dim));
    const auto i = static_cast<std::size_t>(gate.level_i);
    const auto j = static_cast<std::size_t>(gate.level_j);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::complex<double> upper{std::cos(phi), -std::sin(phi)};
    u(i, i) = c;
    u(j, j) = c;
    u(i, j) = std::complex<double>{0.0, -s} * upper;
    u(j, i) = std::complex<double>{0.0, -s} * std::conj(upper);
    return u;
  }

  const CMat sig = sigma_phi(qudit_dim, gate.level_i, gate.level_j, phi);
  const CMat eye = CMat::identity(static_cast<std::size_t>(qudit_dim));
  const CMat sum = kron(sig, eye) + kron(eye, sig);
  const CMat gen = (sum * sum).scaled(std::complex<double>{0.0, -theta / 4.0});
  return expm(gen);
}

}  // namespace rfsc
