#pragma once

#include <omp.h>

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace bipoisson {

/// Serial evaluation is the reference; parallel evaluation must reproduce it
/// bit for bit. Every sampled loop takes one of these.
enum class Execution { serial, parallel };

/// results[i] = fn(i) for i in [0, count). Each index writes its own slot and
/// draws from its own random stream, so the result does not depend on the
/// schedule. The first exception (lowest index) is rethrown after the loop.
template <typename T>
std::vector<T> sample_map(Execution exec, int count, const std::function<T(int)>& fn) {
  std::vector<T> results(static_cast<std::size_t>(std::max(count, 0)));
  if (exec == Execution::serial) {
    for (int i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::exception_ptr> errors(results.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    try {
      results[i] = fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// Max of a vector in index order (NaN propagates).
inline double ordered_max(const std::vector<double>& values, double init = 0.0) {
  double m = init;
  for (double v : values) {
    if (v != v) return v;
    m = std::max(m, v);
  }
  return m;
}

inline double ordered_min(const std::vector<double>& values, double init) {
  double m = init;
  for (double v : values) {
    if (v != v) return v;
    m = std::min(m, v);
  }
  return m;
}

}  // namespace bipoisson
