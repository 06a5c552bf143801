#ifndef MIXKIT_SIMULATE_HPP
#define MIXKIT_SIMULATE_HPP

#include "mixkit/dataset.hpp"
#include "mixkit/model.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

struct SimulatedData {
    Dataset data;
    Allocation truth;
};

// n observations from the mixture: label from the weights, observation
// from the labelled component.
SimulatedData simulate_mixture(const ComponentFamily& family, const MixtureParams& params,
                               std::size_t n, RngStream& rng);

// The two-component t benchmark: p = (0.3, 0.7), mu = (0, 5),
// sigma2 = (1, 1), nu = (5, 11).
MixtureParams t_benchmark_params();
SimulatedData simulate_t_benchmark(std::size_t n, std::uint64_t seed);

// k rows drawn without replacement, in original order.
Dataset subsample_rows(const Dataset& data, std::size_t k, std::uint64_t seed);

}  // namespace mixkit

#endif
