#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace amod::detail {
namespace {

struct FftwBuffer {
  fftw_complex* ptr = nullptr;
  explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan(int dim, int samples, int sign) {
  static std::map<std::tuple<int, int, int>, PlanHandle> plans;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_tuple(dim, samples, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second.get();

  std::size_t total = 1;
  std::vector<int> shape(dim, samples);
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(samples);
  FftwBuffer scratch(total);
  fftw_plan p = fftw_plan_dft(dim, shape.data(), scratch.ptr, scratch.ptr,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!p) throw std::runtime_error("fftw: planning failed");
  auto [it, ok] = plans.emplace(key, PlanHandle(p));
  return it->second.get();
}

}  // namespace

void dft_inplace(std::span<std::complex<double>> data, int dim, int samples, int sign) {
  fftw_plan plan = cached_plan(dim, samples, sign);
  // fftw_execute_dft requires the same alignment the plan was made with.
  FftwBuffer buf(data.size());
  auto* raw = reinterpret_cast<std::complex<double>*>(buf.ptr);
  std::copy(data.begin(), data.end(), raw);
  fftw_execute_dft(plan, buf.ptr, buf.ptr);
  std::copy(raw, raw + data.size(), data.begin());
}

}  // namespace amod::detail
