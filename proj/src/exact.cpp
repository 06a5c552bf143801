#include "mixkit/exact.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"

namespace mixkit {

double log_big(const BigInt& v) {
    if (v < 0) throw ValidationError("log_big: negative value");
    if (v == 0) return kLogZero;
    const auto bits = boost::multiprecision::msb(v);
    if (bits < 1000) {
        const double d = v.convert_to<double>();
        if (std::isfinite(d)) return std::log(d);
    }
    // Take the top 53 bits as a mantissa and scale back.
    const unsigned shift = bits - 52;
    const BigInt mant = v >> shift;
    return std::log(mant.convert_to<double>()) + static_cast<double>(shift) * 0.6931471805599453;
}

BigInt partition_class_count(long long n, int J) {
    if (n < 0 || J < 1) throw ValidationError("partition_class_count: need n >= 0, J >= 1");
    // C(n+J-1, n) built multiplicatively, exact at every step.
    BigInt result = 1;
    for (long long i = 1; i < J; ++i) {
        result *= (n + i);
        result /= i;
    }
    return result;
}

BigInt StatTable::total_multiplicity() const {
    BigInt total = 0;
    for (const auto& [stat, mult] : entries) total += mult;
    return total;
}

std::size_t StatTable::distinct_count_vectors() const {
    std::set<std::vector<int>> seen;
    for (const auto& [stat, mult] : entries) seen.insert(stat.counts);
    return seen.size();
}

namespace {

// R(x_i) for observation i, as a stat_dim-length integer vector.
std::vector<long long> observation_stat(const ComponentFamily& family, const Dataset& data,
                                        std::size_t i) {
    switch (family.tag) {
        case FamilyTag::Poisson: return {data.counts[i]};
        case FamilyTag::MultinomialProfile:
        case FamilyTag::BernoulliProduct: return data.rows[i];
        default:
            throw UnsupportedFamilyError("exact enumeration requires a discrete conjugate family, got " +
                                         family.name());
    }
}

}  // namespace

StatTable enumerate_stats(const Dataset& data, int J, const ComponentFamily& family,
                          std::size_t cap) {
    if (!family.is_discrete_conjugate())
        throw UnsupportedFamilyError("exact enumeration requires a discrete conjugate family, got " +
                                     family.name());
    if (data.kind != family.expected_kind())
        throw ValidationError("enumerate_stats: dataset kind does not match family");
    const std::size_t n = data.size();
    if (n == 0) throw UsageError("enumerate_stats: empty dataset");
    if (J < 1) throw ValidationError("enumerate_stats: J must be >= 1");

    const int sdim = family.stat_dim();
    StatTable table;
    table.n = static_cast<int>(n);
    table.J = J;
    table.family = family;

    std::map<SufficientStat, BigInt> layer;
    {
        SufficientStat empty;
        empty.counts.assign(static_cast<std::size_t>(J), 0);
        empty.stats.assign(static_cast<std::size_t>(J * sdim), 0);
        layer.emplace(std::move(empty), BigInt(1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = observation_stat(family, data, i);
        std::map<SufficientStat, BigInt> next;
        for (const auto& [stat, mult] : layer) {
            for (int j = 0; j < J; ++j) {
                SufficientStat moved = stat;
                ++moved.counts[static_cast<std::size_t>(j)];
                for (int v = 0; v < sdim; ++v)
                    moved.stats[static_cast<std::size_t>(j * sdim + v)] += r[static_cast<std::size_t>(v)];
                next[std::move(moved)] += mult;
            }
            if (next.size() > cap)
                throw ResourceError("enumerate_stats: table exceeds entry cap of " + std::to_string(cap) +
                                        " while processing observation " + std::to_string(i + 1),
                                    cap);
        }
        layer = std::move(next);
    }
    table.entries = std::move(layer);
    return table;
}

LogValue partition_log_weight(const ComponentFamily& family, const SufficientStat& stat,
                              const PriorSpec& prior) {
    const int J = static_cast<int>(stat.counts.size());
    const int sdim = family.stat_dim();
    if (static_cast<int>(stat.stats.size()) != J * sdim)
        throw ValidationError("partition_log_weight: statistic dimension mismatch");
    validate_prior(prior, family, J);

    // Dirichlet ratio over the weights.
    double alpha_sum = 0.0, lw = 0.0;
    long long n = 0;
    for (int j = 0; j < J; ++j) {
        const double a = prior.dirichlet_alpha[static_cast<std::size_t>(j)];
        alpha_sum += a;
        lw += std::lgamma(a + stat.counts[static_cast<std::size_t>(j)]) - std::lgamma(a);
        n += stat.counts[static_cast<std::size_t>(j)];
    }
    lw += std::lgamma(alpha_sum) - std::lgamma(alpha_sum + static_cast<double>(n));

    // Conjugate normalising-constant ratios K(posterior)/K(prior).
    for (int j = 0; j < J; ++j) {
        const double nj = stat.counts[static_cast<std::size_t>(j)];
        switch (family.tag) {
            case FamilyTag::Poisson: {
                const double tau = prior.poisson_rate[static_cast<std::size_t>(j)];
                const double S = static_cast<double>(stat.stats[static_cast<std::size_t>(j)]);
                lw += std::log(tau) + std::lgamma(S + 1.0) - (S + 1.0) * std::log(tau + nj);
                break;
            }
            case FamilyTag::MultinomialProfile: {
                const double a = prior.categorical_alpha;
                const int m = family.modalities;
                double Sdot = 0.0;
                for (int v = 0; v < m; ++v) {
                    const double S = static_cast<double>(stat.stats[static_cast<std::size_t>(j * m + v)]);
                    lw += std::lgamma(a + S) - std::lgamma(a);
                    Sdot += S;
                }
                lw += std::lgamma(a * m) - std::lgamma(a * m + Sdot);
                break;
            }
            case FamilyTag::BernoulliProduct: {
                const double a = prior.categorical_alpha;
                for (int v = 0; v < family.variables; ++v) {
                    const double s =
                        static_cast<double>(stat.stats[static_cast<std::size_t>(j * family.variables + v)]);
                    lw += log_beta_fn(a + s, a + nj - s) - log_beta_fn(a, a);
                }
                break;
            }
            default:
                throw UnsupportedFamilyError("partition_log_weight: non-conjugate family " + family.name());
        }
    }
    return lw;
}

LogValue log_data_constant(const ComponentFamily& family, const Dataset& data) {
    switch (family.tag) {
        case FamilyTag::Poisson: {
            double c = 0.0;
            for (long long x : data.counts) c -= std::lgamma(static_cast<double>(x) + 1.0);
            return c;
        }
        case FamilyTag::MultinomialProfile: {
            double c = 0.0;
            for (const auto& row : data.rows) {
                long long total = 0;
                for (long long v : row) total += v;
                c += std::lgamma(static_cast<double>(total) + 1.0);
                for (long long v : row) c -= std::lgamma(static_cast<double>(v) + 1.0);
            }
            return c;
        }
        case FamilyTag::BernoulliProduct: return 0.0;
        default:
            throw UnsupportedFamilyError("log_data_constant: non-conjugate family " + family.name());
    }
}

LogValue exact_log_marginal(const StatTable& table, const PriorSpec& prior) {
    std::vector<LogValue> terms;
    terms.reserve(table.entries.size());
    for (const auto& [stat, mult] : table.entries)
        terms.push_back(log_big(mult) + partition_log_weight(table.family, stat, prior));
    return log_sum_exp(terms);
}

LogValue exact_log_marginal(const Dataset& data, int J, const ComponentFamily& family,
                            const PriorSpec& prior, std::size_t cap) {
    return exact_log_marginal(enumerate_stats(data, J, family, cap), prior);
}

std::vector<double> exact_weight_posterior(const Dataset& data, const ComponentFamily& family,
                                           const PriorSpec& prior, const std::vector<double>& grid,
                                           std::size_t cap) {
    const auto table = enumerate_stats(data, 2, family, cap);
    validate_prior(prior, family, 2);
    for (double p : grid)
        if (!(p > 0.0 && p < 1.0)) throw ValidationError("exact_weight_posterior: grid values must be in (0,1)");

    const double a = prior.dirichlet_alpha[0];
    const double b = prior.dirichlet_alpha[1];
    const double n = static_cast<double>(table.n);
    const LogValue log_m = exact_log_marginal(table, prior);

    // Mixture of Beta(n_1 + a, n - n_1 + b) kernels with posterior masses.
    std::vector<double> density(grid.size(), 0.0);
    for (const auto& [stat, mult] : table.entries) {
        const double mass = std::exp(log_big(mult) + partition_log_weight(family, stat, prior) - log_m);
        const double n1 = static_cast<double>(stat.counts[0]);
        for (std::size_t g = 0; g < grid.size(); ++g)
            density[g] += mass * std::exp(log_beta_pdf(grid[g], n1 + a, n - n1 + b));
    }
    // Renormalise on the grid (trapezoid), including the boundary gaps.
    double integral = 0.0;
    for (std::size_t g = 0; g + 1 < grid.size(); ++g)
        integral += 0.5 * (density[g] + density[g + 1]) * (grid[g + 1] - grid[g]);
    if (integral <= 0.0) throw NumericalError("exact_weight_posterior: vanishing density on grid");
    for (double& v : density) v /= integral;
    return density;
}

std::vector<RankedPartition> top_partitions(const Dataset& data, int J,
                                            const ComponentFamily& family, const PriorSpec& prior,
                                            std::size_t k, std::size_t cap) {
    if (k < 1) throw UsageError("top_partitions: k must be >= 1");
    const auto table = enumerate_stats(data, J, family, cap);
    const LogValue log_m = exact_log_marginal(table, prior);

    std::vector<RankedPartition> ranked;
    ranked.reserve(table.entries.size());
    for (const auto& [stat, mult] : table.entries) {
        const LogValue lw = partition_log_weight(family, stat, prior);
        ranked.push_back({stat, mult, lw, log_big(mult) + lw - log_m});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedPartition& x, const RankedPartition& y) {
        if (x.log_weight != y.log_weight) return x.log_weight > y.log_weight;
        return x.stat < y.stat;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

std::vector<double> exact_component_marginal(const Dataset& data, const ComponentFamily& family,
                                             const PriorSpec& prior, int component,
                                             const std::vector<double>& grid, std::size_t cap) {
    if (family.tag != FamilyTag::Poisson)
        throw UnsupportedFamilyError("exact_component_marginal supports the Poisson two-component model only");
    if (component != 1 && component != 2)
        throw UsageError("exact_component_marginal: component must be 1 or 2");
    for (double v : grid)
        if (!(v > 0.0)) throw ValidationError("exact_component_marginal: grid values must be positive");

    const auto table = enumerate_stats(data, 2, family, cap);
    const LogValue log_m = exact_log_marginal(table, prior);
    const std::size_t c = static_cast<std::size_t>(component - 1);

    // Mixture of Gamma(S_c + 1, tau_c + n_c) kernels.
    std::vector<double> density(grid.size(), 0.0);
    for (const auto& [stat, mult] : table.entries) {
        const double mass = std::exp(log_big(mult) + partition_log_weight(family, stat, prior) - log_m);
        const double shape = static_cast<double>(stat.stats[c]) + 1.0;
        const double rate = prior.poisson_rate[c] + static_cast<double>(stat.counts[c]);
        for (std::size_t g = 0; g < grid.size(); ++g)
            density[g] += mass * std::exp(log_gamma_pdf(grid[g], shape, rate));
    }
    double integral = 0.0;
    for (std::size_t g = 0; g + 1 < grid.size(); ++g)
        integral += 0.5 * (density[g] + density[g + 1]) * (grid[g + 1] - grid[g]);
    if (integral <= 0.0) throw NumericalError("exact_component_marginal: vanishing density on grid");
    for (double& v : density) v /= integral;
    return density;
}

std::string stat_table_csv(const StatTable& table, const PriorSpec& prior) {
    std::ostringstream out;
    out.precision(12);
    for (int j = 1; j <= table.J; ++j) out << "n_" << j << ",";
    const int sdim = table.family.stat_dim();
    for (int j = 1; j <= table.J; ++j)
        for (int v = 1; v <= sdim; ++v) out << "S_" << j << "_" << v << ",";
    out << "multiplicity,log_weight\n";
    for (const auto& [stat, mult] : table.entries) {
        for (int c : stat.counts) out << c << ",";
        for (long long s : stat.stats) out << s << ",";
        out << mult.str() << "," << partition_log_weight(table.family, stat, prior) << "\n";
    }
    return out.str();
}

}  // namespace mixkit
