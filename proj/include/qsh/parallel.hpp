#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qsh {

/// Worker count used by parallel_for; 1 runs inline.
void set_thread_count(int n);
int thread_count();

/// Calls body(k) for k in [0, n). Each worker takes a contiguous block so that
/// results written by index are independent of the thread count. The first
/// exception thrown by any worker is rethrown on the caller's thread.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace qsh
