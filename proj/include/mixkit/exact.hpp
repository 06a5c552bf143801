#ifndef MIXKIT_EXACT_HPP
#define MIXKIT_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/logsum.hpp"
#include "mixkit/model.hpp"

namespace mixkit {

using BigInt = boost::multiprecision::cpp_int;

// log(v) for an arbitrary-precision nonnegative integer.
double log_big(const BigInt& v);

// Exact binomial coefficient C(n+J-1, n): the number of count-vector
// decompositions of n into J parts.
BigInt partition_class_count(long long n, int J);

// Per-component occupancy counts n_1..n_J and accumulated statistics
// S_j = sum_{z_i=j} R(x_i), flattened as J blocks of stat_dim entries.
struct SufficientStat {
    std::vector<int> counts;
    std::vector<long long> stats;

    bool operator<(const SufficientStat& other) const {
        if (counts != other.counts) return counts < other.counts;
        return stats < other.stats;
    }
    bool operator==(const SufficientStat& other) const {
        return counts == other.counts && stats == other.stats;
    }
};

// Associative table from sufficient statistic to exact allocation
// multiplicity; iteration order is lexicographic on (counts, stats).
struct StatTable {
    std::map<SufficientStat, BigInt> entries;
    int n = 0;
    int J = 0;
    ComponentFamily family;

    BigInt total_multiplicity() const;
    std::size_t distinct_count_vectors() const;
};

inline constexpr std::size_t kDefaultEntryCap = 10'000'000;

// Layer-by-layer recursion over the observations: mu_1(e_j, R(x_1) e_j) = 1
// and mu_n(n,S) = sum_j mu_{n-1}(n - e_j, S - R(x_n) e_j). Exact
// multiplicities; throws ResourceError when the table would exceed `cap`
// entries and UnsupportedFamilyError for non-discrete families.
StatTable enumerate_stats(const Dataset& data, int J, const ComponentFamily& family,
                          std::size_t cap = kDefaultEntryCap);

// Unnormalised log posterior weight omega for one allocation carrying this
// statistic (multiplicity excluded). Includes the Dirichlet weight ratio
// and the conjugate normalising-constant ratios; the data-only constant
// reported by log_data_constant() is omitted.
LogValue partition_log_weight(const ComponentFamily& family, const SufficientStat& stat,
                              const PriorSpec& prior);

// The omitted data-only factor: -sum log x_i! for Poisson, the row
// multinomial coefficients for multinomial data, zero for binary data.
LogValue log_data_constant(const ComponentFamily& family, const Dataset& data);

// log m(x) excluding log_data_constant(): log sum over table entries of
// multiplicity * weight.
LogValue exact_log_marginal(const Dataset& data, int J, const ComponentFamily& family,
                            const PriorSpec& prior, std::size_t cap = kDefaultEntryCap);
LogValue exact_log_marginal(const StatTable& table, const PriorSpec& prior);

// Exact posterior density of the first weight for a two-component discrete
// conjugate mixture, evaluated on `grid` in (0,1) and renormalised so the
// trapezoidal integral equals one.
std::vector<double> exact_weight_posterior(const Dataset& data, const ComponentFamily& family,
                                           const PriorSpec& prior, const std::vector<double>& grid,
                                           std::size_t cap = kDefaultEntryCap);

struct RankedPartition {
    SufficientStat stat;
    BigInt multiplicity;
    LogValue log_weight;          // per-allocation weight
    LogValue log_posterior_mass;  // multiplicity * weight / m(x)
};

// The k statistics of greatest per-allocation weight, ties broken
// lexicographically on the statistic.
std::vector<RankedPartition> top_partitions(const Dataset& data, int J,
                                            const ComponentFamily& family, const PriorSpec& prior,
                                            std::size_t k, std::size_t cap = kDefaultEntryCap);

// Exact marginal posterior density of one Poisson rate (two-component
// model), on `grid` (positive), renormalised on the grid.
std::vector<double> exact_component_marginal(const Dataset& data, const ComponentFamily& family,
                                             const PriorSpec& prior, int component,
                                             const std::vector<double>& grid,
                                             std::size_t cap = kDefaultEntryCap);

// CSV export: n_1..n_J, flattened S components, multiplicity (decimal
// string), log_weight.
std::string stat_table_csv(const StatTable& table, const PriorSpec& prior);

}  // namespace mixkit

#endif
