#include "mixkit/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "mixkit/errors.hpp"

namespace mixkit {

SimulatedData simulate_mixture(const ComponentFamily& family, const MixtureParams& params,
                               std::size_t n, RngStream& rng) {
    validate_params(family, params);
    if (n == 0) throw UsageError("simulate: need at least one observation");

    SimulatedData out;
    out.truth.labels.resize(n);
    Dataset& d = out.data;
    d.kind = family.expected_kind();
    d.columns = family.tag == FamilyTag::MultinomialProfile ? family.modalities
                : family.tag == FamilyTag::BernoulliProduct ? family.variables
                                                            : 0;

    for (std::size_t i = 0; i < n; ++i) {
        const int j = rng.categorical(params.weights);
        out.truth.labels[i] = j;
        const auto& theta = params.components[j];
        switch (family.tag) {
            case FamilyTag::Poisson:
                d.counts.push_back(rng.poisson(theta[0]));
                break;
            case FamilyTag::MultinomialProfile: {
                // Fixed per-row total 20, the repeated-observation design.
                const auto counts = rng.multinomial(20, theta);
                d.rows.emplace_back(counts.begin(), counts.end());
                break;
            }
            case FamilyTag::BernoulliProduct: {
                std::vector<long long> row(family.variables);
                for (int v = 0; v < family.variables; ++v) row[v] = rng.bernoulli(theta[v]);
                d.rows.push_back(std::move(row));
                break;
            }
            case FamilyTag::Normal:
                d.reals.push_back(rng.normal(theta[0], std::sqrt(theta[1])));
                break;
            case FamilyTag::StudentT:
                d.reals.push_back(rng.student_t(theta[2], theta[0], std::sqrt(theta[1])));
                break;
        }
    }
    validate_dataset(d);
    return out;
}

MixtureParams t_benchmark_params() {
    MixtureParams p;
    p.weights = {0.3, 0.7};
    p.components = {{0.0, 1.0, 5.0}, {5.0, 1.0, 11.0}};
    return p;
}

SimulatedData simulate_t_benchmark(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed);
    return simulate_mixture(ComponentFamily::student_t(), t_benchmark_params(), n, rng);
}

Dataset subsample_rows(const Dataset& data, std::size_t k, std::uint64_t seed) {
    const std::size_t n = data.size();
    if (k == 0 || k > n) throw UsageError("subsample: size must be in [1, n]");
    RngStream rng(seed);
    std::vector<int> order = rng.permutation(static_cast<int>(n));
    std::vector<int> keep(order.begin(), order.begin() + static_cast<long>(k));
    std::sort(keep.begin(), keep.end());

    Dataset out;
    out.kind = data.kind;
    out.columns = data.columns;
    for (int idx : keep) {
        switch (data.kind) {
            case DataKind::UnivariateReal: out.reals.push_back(data.reals[idx]); break;
            case DataKind::UnivariateCount: out.counts.push_back(data.counts[idx]); break;
            case DataKind::MultinomialRows:
            case DataKind::BinaryMatrix: out.rows.push_back(data.rows[idx]); break;
        }
    }
    return out;
}

}  // namespace mixkit
