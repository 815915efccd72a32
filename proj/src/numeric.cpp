#include "nonloclaw/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace nonloclaw {

namespace {
std::atomic<int> g_threads{1};

// Below this many cells the thread start-up cost dominates.
constexpr std::size_t kParallelThreshold = 4096;
constexpr std::size_t kPrintedWarnings = 10;

std::mutex g_warn_mutex;
std::size_t g_warnings = 0;
std::function<void(const std::string&)> g_sink;
}  // namespace

void warn(const std::string& message)
{
    std::lock_guard lock(g_warn_mutex);
    ++g_warnings;
    if (g_warnings > kPrintedWarnings)
        return;
    if (g_sink) {
        g_sink(message);
        return;
    }
    std::cerr << "warning: " << message << '\n';
    if (g_warnings == kPrintedWarnings)
        std::cerr << "warning: further warnings suppressed\n";
}

std::size_t warning_count()
{
    std::lock_guard lock(g_warn_mutex);
    return g_warnings;
}

void set_warning_sink(std::function<void(const std::string&)> sink)
{
    std::lock_guard lock(g_warn_mutex);
    g_sink = std::move(sink);
}

void set_thread_count(int n)
{
    g_threads.store(std::max(1, n));
}

int thread_count()
{
    return g_threads.load();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body)
{
    const auto workers = static_cast<std::size_t>(thread_count());
    if (workers <= 1 || n < kParallelThreshold) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t begin = 0; begin < n; begin += chunk)
        pool.emplace_back([&body, begin, end = std::min(n, begin + chunk)] { body(begin, end); });
}

}  // namespace nonloclaw
