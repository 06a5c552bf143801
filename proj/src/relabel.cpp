#include "mixkit/relabel.hpp"

#include <algorithm>
#include <cmath>

#include "mixkit/errors.hpp"

namespace mixkit {

std::size_t approximate_map(const Trace& trace, const PriorSpec& prior) {
    if (trace.size() == 0) throw UsageError("relabel: empty trace");
    std::size_t best = 0;
    LogValue best_score = kLogZero;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const LogValue score = trace.log_lik[t] + log_prior(prior, trace.family, trace.draws[t]);
        if (t == 0 || score > best_score) {
            best = t;
            best_score = score;
        }
    }
    return best;
}

std::vector<double> relabel_coordinates(const ComponentFamily& family,
                                        const MixtureParams& params) {
    std::vector<double> coords(params.weights);
    for (const auto& theta : params.components) {
        switch (family.tag) {
            case FamilyTag::Poisson:
                coords.push_back(std::log(theta[0]));
                break;
            case FamilyTag::MultinomialProfile:
            case FamilyTag::BernoulliProduct:
                coords.insert(coords.end(), theta.begin(), theta.end());
                break;
            case FamilyTag::Normal:
                coords.push_back(theta[0]);
                coords.push_back(std::log(theta[1]));
                break;
            case FamilyTag::StudentT:
                coords.push_back(theta[0]);
                coords.push_back(std::log(theta[1]));
                coords.push_back(std::log(theta[2]));
                break;
        }
    }
    return coords;
}

double relabel_distance(const ComponentFamily& family, const MixtureParams& params,
                        const std::vector<int>& perm, const MixtureParams& reference) {
    const std::vector<double> a = relabel_coordinates(family, params.permuted(perm));
    const std::vector<double> b = relabel_coordinates(family, reference);
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        d += diff * diff;
    }
    return d;
}

std::vector<int> best_permutation(const ComponentFamily& family, const MixtureParams& params,
                                  const MixtureParams& reference) {
    const int J = params.component_count();
    if (J > 8) throw ResourceError("relabel: exhaustive search limited to 8 components", 0);
    std::vector<int> perm(J);
    for (int j = 0; j < J; ++j) perm[j] = j;

    std::vector<int> best = perm;
    double best_dist = relabel_distance(family, params, perm, reference);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double d = relabel_distance(family, params, perm, reference);
        if (d < best_dist) {
            best = perm;
            best_dist = d;
        }
    }
    return best;
}

Trace reorder_trace(const Trace& trace, const PriorSpec& prior) {
    const std::size_t map_idx = approximate_map(trace, prior);
    const MixtureParams& reference = trace.draws[map_idx];
    const int J = reference.component_count();

    Trace out = trace;
    out.relabeled = true;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const std::vector<int> perm = best_permutation(trace.family, trace.draws[t], reference);
        out.draws[t] = trace.draws[t].permuted(perm);
        if (t < trace.allocations.size()) {
            // out.draws[t] component j holds old component perm[j]; labels
            // follow through the inverse map.
            std::vector<int> inv(J);
            for (int j = 0; j < J; ++j) inv[perm[j]] = j;
            for (int& label : out.allocations[t].labels) label = inv[label];
        }
    }
    return out;
}

PointEstimates point_estimates(const Trace& trace) {
    if (trace.size() == 0) throw UsageError("relabel: empty trace");
    const std::size_t T = trace.size();
    const int J = trace.draws[0].component_count();

    PointEstimates est;
    est.mean.weights.assign(J, 0.0);
    est.stddev.weights.assign(J, 0.0);
    est.mean.components.resize(J);
    est.stddev.components.resize(J);
    for (int j = 0; j < J; ++j) {
        est.mean.components[j].assign(trace.draws[0].components[j].size(), 0.0);
        est.stddev.components[j].assign(trace.draws[0].components[j].size(), 0.0);
    }

    for (const auto& draw : trace.draws) {
        for (int j = 0; j < J; ++j) {
            est.mean.weights[j] += draw.weights[j];
            for (std::size_t k = 0; k < draw.components[j].size(); ++k)
                est.mean.components[j][k] += draw.components[j][k];
        }
    }
    for (int j = 0; j < J; ++j) {
        est.mean.weights[j] /= static_cast<double>(T);
        for (double& v : est.mean.components[j]) v /= static_cast<double>(T);
    }

    for (const auto& draw : trace.draws) {
        for (int j = 0; j < J; ++j) {
            const double dw = draw.weights[j] - est.mean.weights[j];
            est.stddev.weights[j] += dw * dw;
            for (std::size_t k = 0; k < draw.components[j].size(); ++k) {
                const double d = draw.components[j][k] - est.mean.components[j][k];
                est.stddev.components[j][k] += d * d;
            }
        }
    }
    const double denom = static_cast<double>(T > 1 ? T - 1 : 1);
    for (int j = 0; j < J; ++j) {
        est.stddev.weights[j] = std::sqrt(est.stddev.weights[j] / denom);
        for (double& v : est.stddev.components[j]) v = std::sqrt(v / denom);
    }
    return est;
}

}  // namespace mixkit
