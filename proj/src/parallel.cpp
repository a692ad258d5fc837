#include "bll/parallel.hpp"

namespace bll {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() { return g_threads.load(); }
void set_thread_count(int k) { g_threads.store(std::max(1, k)); }

}  // namespace bll
