#include "magnls/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

namespace magnls {

namespace {
std::string quad_message(double a, double b, double estimate) {
  std::ostringstream os;
  os.precision(17);
  os << "adaptive quadrature did not converge on segment [" << a << ", " << b
     << "], last error estimate " << estimate;
  return os.str();
}

std::string loss_message(double fraction, double limit) {
  std::ostringstream os;
  os << "shift moves mass fraction " << fraction << " out of the window (limit " << limit << ")";
  return os.str();
}

std::mutex& warn_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::string>& warn_store() {
  static std::vector<std::string> store;
  return store;
}
}  // namespace

QuadratureError::QuadratureError(double a, double b, double estimate)
    : NumericalError(quad_message(a, b, estimate)), a_(a), b_(b), estimate_(estimate) {}

MassLossError::MassLossError(double fraction, double limit)
    : NumericalError(loss_message(fraction, limit)), fraction_(fraction) {}

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MAGNLS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
  }
  return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double ordered_sum(const std::vector<double>& partials) {
  double s = 0.0;
  for (double v : partials) s += v;
  return s;
}

namespace diagnostics {
void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(warn_mutex());
  warn_store().push_back(message);
}

std::vector<std::string> drain() {
  std::lock_guard<std::mutex> lock(warn_mutex());
  std::vector<std::string> out;
  out.swap(warn_store());
  return out;
}
}  // namespace diagnostics

}  // namespace magnls
