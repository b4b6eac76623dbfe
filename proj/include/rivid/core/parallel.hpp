#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rivid {

/// Persistent worker pool for index-parallel loops.
///
/// Work is split into one contiguous chunk per worker (static partition), and
/// every reduction that feeds a result is performed afterwards in index order
/// by the caller. Consequence: results are bit-identical for any worker count,
/// which is what lets --workers be a pure throughput knob.
class ThreadPool {
 public:
  explicit ThreadPool(int workers) { start(workers < 1 ? 1 : workers); }

  ~ThreadPool() { stop(); }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int workers() const { return static_cast<int>(threads_.size()) + 1; }

  /// Runs fn(i) for i in [0, n). Blocks until done. fn must only write to
  /// per-index slots; cross-index accumulation belongs to the caller.
  void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    const int total = workers();
    if (total == 1 || n == 1) {
      for (std::int64_t i = 0; i < n; ++i) fn(i);
      return;
    }
    {
      std::lock_guard<std::mutex> lk(mu_);
      job_ = &fn;
      job_n_ = n;
      pending_ = static_cast<int>(threads_.size());
      ++epoch_;
    }
    cv_.notify_all();
    run_range(0, total, n, fn);  // main thread takes slice 0
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [this] { return pending_ == 0; });
    job_ = nullptr;
  }

  static ThreadPool& global() {
    static ThreadPool pool(default_workers());
    return pool;
  }

  /// Must be called before the first global() use (the CLI does this from
  /// --workers). Later calls are ignored.
  static void set_default_workers(int n) { default_workers_slot() = n; }

 private:
  static int& default_workers_slot() {
    static int n = 0;
    return n;
  }
  static int default_workers() {
    int n = default_workers_slot();
    if (n > 0) return n;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }

  static void run_range(int slot, int total, std::int64_t n,
                        const std::function<void(std::int64_t)>& fn) {
    const std::int64_t lo = n * slot / total;
    const std::int64_t hi = n * (slot + 1) / total;
    for (std::int64_t i = lo; i < hi; ++i) fn(i);
  }

  void start(int workers) {
    for (int w = 1; w < workers; ++w) {
      threads_.emplace_back([this, w] { worker_loop(w); });
    }
  }

  void worker_loop(int slot) {
    std::uint64_t seen = 0;
    while (true) {
      const std::function<void(std::int64_t)>* job = nullptr;
      std::int64_t n = 0;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return stop_ || epoch_ != seen; });
        if (stop_) return;
        seen = epoch_;
        job = job_;
        n = job_n_;
      }
      run_range(slot, static_cast<int>(threads_.size()) + 1, n, *job);
      {
        std::lock_guard<std::mutex> lk(mu_);
        if (--pending_ == 0) done_cv_.notify_all();
      }
    }
  }

  void stop() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_, done_cv_;
  const std::function<void(std::int64_t)>* job_ = nullptr;
  std::int64_t job_n_ = 0;
  int pending_ = 0;
  std::uint64_t epoch_ = 0;
  bool stop_ = false;
};

inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  ThreadPool::global().parallel_for(n, fn);
}

}  // namespace rivid
