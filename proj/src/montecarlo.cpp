#include "stoconv/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace stoconv {

Eigen::MatrixXd run_paths(std::size_t paths, std::uint64_t seed, std::size_t threads,
                          const PathFunction& fn)
{
    if (paths == 0) {
        throw std::invalid_argument("Monte Carlo run needs at least one path");
    }
    std::vector<Eigen::VectorXd> rows(paths);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    constexpr std::size_t block = 64;

    auto worker = [&] {
        try {
            for (;;) {
                const std::size_t begin = next.fetch_add(block);
                if (begin >= paths) {
                    return;
                }
                const std::size_t end = std::min(paths, begin + block);
                for (std::size_t i = begin; i < end; ++i) {
                    RandomStream stream(derive_seed(seed, i));
                    rows[i] = fn(i, stream);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> guard(failure_lock);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(paths);
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, paths));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    const Eigen::Index cols = rows.front().size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(paths), cols);
    for (std::size_t i = 0; i < paths; ++i) {
        if (rows[i].size() != cols) {
            throw std::logic_error("path function returned rows of different lengths");
        }
        out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    return out;
}

} // namespace stoconv
