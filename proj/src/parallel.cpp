#include "candual/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace candual {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const char* serial_env = std::getenv("CANDUAL_SERIAL");
  const unsigned hw = std::thread::hardware_concurrency();
  const bool serial = count < 2 || hw < 2 || (serial_env && serial_env[0] != '\0');
  if (serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  const std::size_t workers = std::min<std::size_t>(hw, count);
  const std::size_t chunk = std::max<std::size_t>(1, count / (workers * 8));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace candual
