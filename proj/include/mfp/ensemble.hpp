#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>

#include "mfp/cascade.hpp"
#include "mfp/lmf.hpp"

namespace mfp {

// Runs fn(i) for i in [0, n). Work item i depends only on i, so results are
// identical for any worker count.
void parallel_for_indices(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// One row per path, one column per time point. Path i draws from substreams
// (seed, "lmf.levy", i) and (seed, "lmf.y", i).
Eigen::MatrixXd sample_lmf_ensemble(const LmfModel& model, std::span<const double> times,
                                    std::size_t n_paths, std::uint64_t seed, int workers);

// One row per replica of cumulative cascade measure on the full grid.
// Replica i draws from (seed, "cascade", i).
Eigen::MatrixXd sample_cascade_ensemble(const CascadeSpec& spec, std::size_t n_replicas,
                                        std::uint64_t seed, int workers);

}  // namespace mfp
