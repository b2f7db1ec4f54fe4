#include "fdkp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "fdkp/errors.hpp"

namespace fdkp::spectral::fft {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex plan_mutex;

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft is.
// Plans are created with FFTW_ESTIMATE so results are machine-deterministic
// across runs, and with a dedicated scratch buffer so the "new-array" execute
// interface is valid for arbitrary caller buffers of the same shape.
PlanPair& plans_for(const Grid& grid) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(grid.points_x, grid.points_y);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::size_t n = grid.size();
  fftw_complex* buf = fftw_alloc_complex(n);
  // FFTW_UNALIGNED: the plan is executed later on caller-owned vectors whose
  // alignment is weaker than fftw_alloc's.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pair;
  pair.forward = fftw_plan_dft_2d(grid.points_y, grid.points_x, buf, buf,
                                  FFTW_FORWARD, flags);
  pair.backward = fftw_plan_dft_2d(grid.points_y, grid.points_x, buf, buf,
                                   FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (!pair.forward || !pair.backward) throw Error("fft: plan creation failed");
  return cache.emplace(key, pair).first->second;
}

void execute(const Grid& grid, const std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out, bool forward_dir) {
  if (in.size() != grid.size()) throw FieldError("fft: input size does not match grid");
  out.resize(grid.size());
  PlanPair& pair = plans_for(grid);
  // in-place-capable plans accept distinct buffers with identical alignment
  // requirements; copy input to output and transform in place to keep it simple.
  if (&out != &in) out = in;
  auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(forward_dir ? pair.forward : pair.backward, ptr, ptr);
}

}  // namespace

void forward(const Grid& grid, const std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out) {
  execute(grid, in, out, true);
}

void backward(const Grid& grid, const std::vector<std::complex<double>>& in,
              std::vector<std::complex<double>>& out) {
  execute(grid, in, out, false);
}

}  // namespace fdkp::spectral::fft
