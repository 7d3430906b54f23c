#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace rfsc {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Forward DFT plan, self-contained. Radix-2 iterative Cooley-Tukey for
// power-of-two sizes, direct evaluation otherwise (only hit by exotic
// segment lengths; the default analysis segment is 2048).
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (is_pow2(n_) && n_ > 1) {
      rev_.resize(n_);
      rev_[0] = 0;
      for (std::size_t i = 1; i < n_; ++i)
        rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1u) ? n_ >> 1 : 0);
      for (std::size_t len = 2; len <= n_; len <<= 1) {
        const double step = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t j = 0; j < len / 2; ++j)
          tw_.push_back(std::polar(1.0, step * static_cast<double>(j)));
      }
    } else if (n_ > 1) {
      // one full row of roots for the direct transform
      const double step = -2.0 * std::numbers::pi / static_cast<double>(n_);
      for (std::size_t i = 0; i < n_; ++i)
        tw_.push_back(std::polar(1.0, step * static_cast<double>(i)));
    }
  }

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* a) const {
    if (n_ <= 1) return;
    if (!rev_.empty()) {
      pow2(a);
      return;
    }
    std::vector<std::complex<double>> out(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t t = 0; t < n_; ++t) acc += a[t] * tw_[(k * t) % n_];
      out[k] = acc;
    }
    for (std::size_t k = 0; k < n_; ++k) a[k] = out[k];
  }

 private:
  void pow2(std::complex<double>* a) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (static_cast<std::size_t>(rev_[i]) > i) std::swap(a[i], a[rev_[i]]);
    std::size_t tw_off = 0;
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const std::complex<double> u = a[i + j];
          const std::complex<double> v = a[i + j + half] * tw_[tw_off + j];
          a[i + j] = u + v;
          a[i + j + half] = u - v;
        }
      }
      tw_off += half;
    }
  }

  std::size_t n_;
  std::vector<std::uint32_t> rev_;
  std::vector<std::complex<double>> tw_;
};

}  // namespace rfsc
