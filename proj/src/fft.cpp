#include "phasemod/detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace phasemod::detail {
namespace {

using PlanKey = std::tuple<std::vector<std::size_t>, std::vector<std::size_t>, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::span<const std::size_t> shape, std::span<const std::size_t> axes, int sign,
                fftw_complex* data) {
    PlanKey key{{shape.begin(), shape.end()}, {axes.begin(), axes.end()}, sign};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
    std::vector<bool> transformed(shape.size(), false);
    std::vector<fftw_iodim> dims;
    for (auto a : axes) {
      if (a >= shape.size() || transformed[a]) throw std::invalid_argument("dft_axes: bad axis list");
      transformed[a] = true;
      dims.push_back({static_cast<int>(shape[a]), static_cast<int>(strides[a]),
                      static_cast<int>(strides[a])});
    }
    std::vector<fftw_iodim> loops;
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (!transformed[i]) {
        loops.push_back({static_cast<int>(shape[i]), static_cast<int>(strides[i]),
                         static_cast<int>(strides[i])});
      }
    }
    fftw_plan plan = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(),
                                        static_cast<int>(loops.size()), loops.data(), data, data,
                                        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("dft_axes: FFTW planning failed");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dft_axes(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
              std::span<const std::size_t> axes, int sign) {
  if (axes.empty() || data.empty()) return;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = cache().get(shape, axes, sign, ptr);
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace phasemod::detail
