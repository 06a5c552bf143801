#ifndef MIXKIT_TESTS_ORACLES_HPP
#define MIXKIT_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests. These
// deliberately avoid the library's own enumeration and weight code paths:
// allocations are enumerated exhaustively and conjugate marginals are
// rebuilt from lgamma identities, so agreement is a genuine cross-check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/exact.hpp"
#include "mixkit/logsum.hpp"
#include "mixkit/model.hpp"

namespace oracles {

// Recursive adaptive Simpson quadrature.
inline double simpson_slice(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_slice(f, a, m, fa, flm, fm);
    const double right = simpson_slice(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

// Panelised so that integrands much narrower than the range are still
// seen by the initial sampling.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 40) {
    const int panels = 32;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h, hi = lo + h;
        const double m = 0.5 * (lo + hi);
        const double fa = f(lo), fm = f(m), fb = f(hi);
        total += adaptive_simpson_rec(f, lo, hi, fa, fm, fb, simpson_slice(f, lo, hi, fa, fm, fb),
                                      tol / panels, depth);
    }
    return total;
}

// Visits every allocation of n observations into J components, passed as a
// 0-based label vector. J^n calls.
inline void for_each_allocation(int n, int J, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> z(static_cast<std::size_t>(n), 0);
    while (true) {
        visit(z);
        int i = 0;
        while (i < n && ++z[static_cast<std::size_t>(i)] == J) z[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
    }
}

// Exhaustive rebuild of the sufficient-statistic table: walks all J^n
// allocations and accumulates multiplicities keyed by (counts, stats).
inline std::map<mixkit::SufficientStat, long long> brute_force_table(const mixkit::Dataset& data,
                                                                     int J,
                                                                     const mixkit::ComponentFamily& family) {
    const int n = static_cast<int>(data.size());
    const int sd = family.stat_dim();
    std::map<mixkit::SufficientStat, long long> table;
    for_each_allocation(n, J, [&](const std::vector<int>& z) {
        mixkit::SufficientStat s;
        s.counts.assign(static_cast<std::size_t>(J), 0);
        s.stats.assign(static_cast<std::size_t>(J * sd), 0);
        for (int i = 0; i < n; ++i) {
            const int j = z[static_cast<std::size_t>(i)];
            ++s.counts[static_cast<std::size_t>(j)];
            if (family.tag == mixkit::FamilyTag::Poisson) {
                s.stats[static_cast<std::size_t>(j)] += data.counts[static_cast<std::size_t>(i)];
            } else {
                for (int v = 0; v < sd; ++v)
                    s.stats[static_cast<std::size_t>(j * sd + v)] +=
                        data.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
            }
        }
        ++table[s];
    });
    return table;
}

// Marginal likelihood of the data subset assigned to one component under
// the component's conjugate prior, including all data-dependent constants.
// Poisson rates carry Exp(tau) priors; Bernoulli cells Beta(a,a); profile
// rows Dirichlet(a,...,a).
inline double subset_log_marginal(const mixkit::Dataset& data, const std::vector<int>& members,
                                  const mixkit::ComponentFamily& family,
                                  const mixkit::PriorSpec& prior, int component) {
    using std::lgamma;
    const double nj = static_cast<double>(members.size());
    switch (family.tag) {
        case mixkit::FamilyTag::Poisson: {
            const double tau = prior.poisson_rate[static_cast<std::size_t>(component)];
            long long S = 0;
            double log_fact = 0.0;
            for (int i : members) {
                S += data.counts[static_cast<std::size_t>(i)];
                log_fact += lgamma(static_cast<double>(data.counts[static_cast<std::size_t>(i)]) + 1.0);
            }
            return std::log(tau) + lgamma(static_cast<double>(S) + 1.0) -
                   (static_cast<double>(S) + 1.0) * std::log(nj + tau) - log_fact;
        }
        case mixkit::FamilyTag::BernoulliProduct: {
            const double a = prior.categorical_alpha;
            double total = 0.0;
            for (int v = 0; v < family.variables; ++v) {
                long long s = 0;
                for (int i : members)
                    s += data.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
                total += lgamma(2.0 * a) - 2.0 * lgamma(a) + lgamma(a + static_cast<double>(s)) +
                         lgamma(a + nj - static_cast<double>(s)) - lgamma(2.0 * a + nj);
            }
            return total;
        }
        case mixkit::FamilyTag::MultinomialProfile: {
            const double a = prior.categorical_alpha;
            const int m = family.modalities;
            double coeff = 0.0;
            std::vector<long long> S(static_cast<std::size_t>(m), 0);
            long long total = 0;
            for (int i : members) {
                long long di = 0;
                for (int v = 0; v < m; ++v) {
                    const long long c = data.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
                    S[static_cast<std::size_t>(v)] += c;
                    di += c;
                    coeff -= lgamma(static_cast<double>(c) + 1.0);
                }
                coeff += lgamma(static_cast<double>(di) + 1.0);
                total += di;
            }
            double dir = lgamma(a * m) - m * lgamma(a) - lgamma(a * m + static_cast<double>(total));
            for (int v = 0; v < m; ++v)
                dir += lgamma(a + static_cast<double>(S[static_cast<std::size_t>(v)]));
            return coeff + dir;
        }
        default:
            return mixkit::kLogZero;
    }
}

// Exhaustive-allocation log marginal, all constants included:
// m(x) = sum_z [Dirichlet-multinomial(counts)] prod_j m_j(x in component j).
inline double brute_force_log_marginal(const mixkit::Dataset& data, int J,
                                       const mixkit::ComponentFamily& family,
                                       const mixkit::PriorSpec& prior) {
    using std::lgamma;
    const int n = static_cast<int>(data.size());
    const double alpha_sum =
        std::accumulate(prior.dirichlet_alpha.begin(), prior.dirichlet_alpha.end(), 0.0);
    std::vector<double> terms;
    for_each_allocation(n, J, [&](const std::vector<int>& z) {
        std::vector<std::vector<int>> members(static_cast<std::size_t>(J));
        for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])].push_back(i);
        double term = lgamma(alpha_sum) - lgamma(alpha_sum + static_cast<double>(n));
        for (int j = 0; j < J; ++j) {
            const double aj = prior.dirichlet_alpha[static_cast<std::size_t>(j)];
            term += lgamma(aj + static_cast<double>(members[static_cast<std::size_t>(j)].size())) -
                    lgamma(aj);
            term += subset_log_marginal(data, members[static_cast<std::size_t>(j)], family, prior, j);
        }
        terms.push_back(term);
    });
    return mixkit::log_sum_exp(terms);
}

inline double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// Monte Carlo standard error of the mean of a correlated series, by batch
// means with sqrt(T) batches.
inline double batch_means_se(const std::vector<double>& v) {
    const std::size_t T = v.size();
    const std::size_t B = static_cast<std::size_t>(std::sqrt(static_cast<double>(T)));
    const std::size_t len = T / B;
    std::vector<double> batch;
    for (std::size_t b = 0; b < B; ++b) {
        double acc = 0.0;
        for (std::size_t t = b * len; t < (b + 1) * len; ++t) acc += v[t];
        batch.push_back(acc / static_cast<double>(len));
    }
    return sd_of(batch) / std::sqrt(static_cast<double>(B));
}

}  // namespace oracles

#endif
