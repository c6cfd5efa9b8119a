#pragma once

#include <algorithm>
#include <exception>
#include <string>
#include <vector>

namespace groundkit {

// Runs fn(0..count-1) with a bounded worker pool. Each index owns its output
// slot, so results stay ordered no matter the schedule. Exceptions are
// captured per index (empty string = clean) because they must not cross the
// OpenMP region boundary. workers <= 1 selects the plain serial path, which
// is also the reference the benchmarks compare against.
template <typename Fn>
std::vector<std::string> run_batch(int count, int workers, Fn&& fn) {
    std::vector<std::string> errors(std::size_t(std::max(count, 0)));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[std::size_t(i)] = e.what();
            } catch (...) {
                errors[std::size_t(i)] = "unknown error";
            }
        }
        return errors;
    }

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < count; ++i) {
        try {
            fn(i);
        } catch (const std::exception& e) {
            errors[std::size_t(i)] = e.what();
        } catch (...) {
            errors[std::size_t(i)] = "unknown error";
        }
    }
    return errors;
}

}  // namespace groundkit
