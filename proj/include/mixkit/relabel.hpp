#ifndef MIXKIT_RELABEL_HPP
#define MIXKIT_RELABEL_HPP

#include <cstddef>
#include <vector>

#include "mixkit/mcmc.hpp"
#include "mixkit/model.hpp"

namespace mixkit {

// Index of the retained draw with the largest log posterior
// (log-likelihood plus log prior); ties resolve to the smallest index.
std::size_t approximate_map(const Trace& trace, const PriorSpec& prior);

// Distance coordinates used for label matching: weights first, then each
// component's parameters with variances and degrees of freedom on the log
// scale. Means and probabilities enter untransformed.
std::vector<double> relabel_coordinates(const ComponentFamily& family,
                                        const MixtureParams& params);

// Squared Euclidean distance between the coordinate vectors of
// `params.permuted(perm)` and `reference`.
double relabel_distance(const ComponentFamily& family, const MixtureParams& params,
                        const std::vector<int>& perm, const MixtureParams& reference);

// Best permutation for one draw against the reference, by exhaustive
// search over all J! permutations (J <= 8); ties resolve to the
// lexicographically smallest permutation.
std::vector<int> best_permutation(const ComponentFamily& family, const MixtureParams& params,
                                  const MixtureParams& reference);

// Permutes every retained draw (and stored allocations) towards the
// posterior-mode reference draw. Log-likelihoods are label-invariant and
// carried over unchanged; applying the operation twice is a no-op.
Trace reorder_trace(const Trace& trace, const PriorSpec& prior);

// Per-parameter posterior means and standard deviations over a trace.
struct PointEstimates {
    MixtureParams mean;
    MixtureParams stddev;
};

PointEstimates point_estimates(const Trace& trace);

}  // namespace mixkit

#endif
