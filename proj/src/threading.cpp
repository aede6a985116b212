#include "ssr/threading.hpp"

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

unsigned worker_count() {
    if (const char* env = std::getenv("SRTOOL_THREADS")) {
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(env, &pos);
        } catch (const std::exception&) {
            throw invalid_input_error(std::string("SRTOOL_THREADS: not a number: ") + env);
        }
        if (pos != std::string(env).size() || v < 1)
            throw invalid_input_error(std::string("SRTOOL_THREADS: expected a positive integer, got ") + env);
        return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t workers = worker_count();
    if (workers > n) workers = n;
    if (workers == 1) {
        fn(0, n);
        return;
    }

    std::size_t chunk = n / workers;
    std::size_t extra = n % workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    threads.reserve(workers - 1);

    std::size_t begin = 0;
    for (std::size_t t = 0; t < workers; ++t) {
        std::size_t end = begin + chunk + (t < extra ? 1 : 0);
        if (t + 1 == workers) {
            try {
                fn(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        } else {
            threads.emplace_back([&fn, &errors, t, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        begin = end;
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace ssr
