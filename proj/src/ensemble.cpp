#include "mfp/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mfp {

void parallel_for_indices(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers < 1) workers = 1;
    const std::size_t hw = std::thread::hardware_concurrency();
    workers = static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(hw, 1)));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    constexpr std::size_t kBlock = 256;
    std::atomic<std::size_t> next_block{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&]() {
        for (;;) {
            const std::size_t block = next_block.fetch_add(1);
            const std::size_t begin = block * kBlock;
            if (begin >= n) return;
            const std::size_t end = std::min(begin + kBlock, n);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(body);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

Eigen::MatrixXd sample_lmf_ensemble(const LmfModel& model, std::span<const double> times,
                                    std::size_t n_paths, std::uint64_t seed, int workers) {
    std::vector<double> log_u;
    log_u.reserve(times.size());
    for (const double t : times) log_u.push_back(std::log(t / model.time_scale));
    const PreparedStationarySampler prepared(model.stationary, log_u);

    Eigen::MatrixXd out(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(times.size()));
    parallel_for_indices(n_paths, workers, [&](std::size_t i) {
        RngStream levy_rng(seed, "lmf.levy", i);
        RngStream y_rng(seed, "lmf.y", i);
        const auto sample = sample_lmf_path_coupled(model, times, prepared, levy_rng, y_rng);
        for (std::size_t j = 0; j < times.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sample.path.values[j];
    });
    return out;
}

Eigen::MatrixXd sample_cascade_ensemble(const CascadeSpec& spec, std::size_t n_replicas,
                                        std::uint64_t seed, int workers) {
    const CascadeSimulator simulator(spec);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n_replicas),
                        static_cast<Eigen::Index>(spec.resolution));
    parallel_for_indices(n_replicas, workers, [&](std::size_t i) {
        RngStream rng(seed, "cascade", i);
        const auto sample = simulator.simulate(rng);
        for (std::size_t j = 0; j < sample.cumulative.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sample.cumulative[j];
    });
    return out;
}

}  // namespace mfp
