#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace phasemod::detail {

// Table of e^{2 pi i r / n}, indexed by r mod n.
class RootTable {
 public:
  explicit RootTable(std::size_t n) : n_(static_cast<long long>(n)), roots_(n) {
    for (std::size_t r = 0; r < n; ++r) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
      roots_[r] = {std::cos(angle), std::sin(angle)};
    }
  }

  std::complex<double> operator()(long long r) const {
    long long m = r % n_;
    if (m < 0) m += n_;
    return roots_[static_cast<std::size_t>(m)];
  }

  // e^{2 pi i x_j xi_k} for centered indices j, k on an axis and its dual.
  std::complex<double> centered(std::size_t j, std::size_t k) const {
    const long long h = n_ / 2;
    return (*this)((static_cast<long long>(j) - h) * (static_cast<long long>(k) - h));
  }

 private:
  long long n_;
  std::vector<std::complex<double>> roots_;
};

}  // namespace phasemod::detail
