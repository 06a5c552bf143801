#include "mixkit/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/exact.hpp"

namespace mixkit {

std::string evidence_method_name(EvidenceMethod m) {
    switch (m) {
        case EvidenceMethod::ChibPlain: return "chib-plain";
        case EvidenceMethod::ChibSymmetrized: return "chib-symmetrized";
        case EvidenceMethod::GelfandDey: return "gelfand-dey";
        case EvidenceMethod::PriorMc: return "prior-mc";
        case EvidenceMethod::Exact: return "exact";
    }
    return "unknown";
}

namespace {

// Conditional-density pieces for one allocation. `base` holds everything
// permutation-invariant (normalising constants, the shared-variance term);
// mat[j*J + k] is slot j's conditional log density evaluated at candidate
// component k, including the Dirichlet exponent on the weight.
struct RbCache {
    double base = 0.0;
    std::vector<double> mat;
    int J = 0;
};

RbCache build_rb_cache(const ComponentFamily& family, const MixtureParams& star,
                       const Allocation& z, const Dataset& data, const PriorSpec& prior) {
    const int J = star.component_count();
    RbCache cache;
    cache.J = J;
    cache.mat.assign(static_cast<std::size_t>(J) * J, 0.0);

    const ComponentMoments mom = component_moments(data, z, J);

    std::vector<double> log_p(J);
    for (int k = 0; k < J; ++k)
        log_p[k] = star.weights[k] > 0.0 ? std::log(star.weights[k]) : kLogZero;

    // Dirichlet(alpha + n) on the weights.
    double alpha_sum = 0.0;
    for (int j = 0; j < J; ++j) {
        const double a = prior.dirichlet_alpha[j] + mom.counts[j];
        alpha_sum += a;
        cache.base -= std::lgamma(a);
        for (int k = 0; k < J; ++k)
            cache.mat[static_cast<std::size_t>(j) * J + k] += (a - 1.0) * log_p[k];
    }
    cache.base += std::lgamma(alpha_sum);

    switch (family.tag) {
        case FamilyTag::Poisson:
            for (int j = 0; j < J; ++j)
                for (int k = 0; k < J; ++k)
                    cache.mat[static_cast<std::size_t>(j) * J + k] +=
                        log_gamma_pdf(star.components[k][0], 1.0 + mom.sums[j],
                                      prior.poisson_rate[j] + mom.counts[j]);
            break;
        case FamilyTag::MultinomialProfile:
            for (int j = 0; j < J; ++j) {
                std::vector<double> a(family.modalities, prior.categorical_alpha);
                for (int v = 0; v < family.modalities; ++v)
                    a[v] += mom.sums[static_cast<std::size_t>(j) * family.modalities + v];
                for (int k = 0; k < J; ++k)
                    cache.mat[static_cast<std::size_t>(j) * J + k] +=
                        log_dirichlet_pdf(star.components[k], a);
            }
            break;
        case FamilyTag::BernoulliProduct:
            for (int j = 0; j < J; ++j)
                for (int k = 0; k < J; ++k) {
                    double& cell = cache.mat[static_cast<std::size_t>(j) * J + k];
                    for (int v = 0; v < family.variables; ++v) {
                        const double s = mom.sums[static_cast<std::size_t>(j) * family.variables + v];
                        cell += log_beta_pdf(star.components[k][v], prior.categorical_alpha + s,
                                             prior.categorical_alpha + mom.counts[j] - s);
                    }
                }
            break;
        case FamilyTag::Normal: {
            const double r = 1.0 / prior.normal_variance_ratio;
            const double m0 = prior.normal_mean;
            const double sigma2 = star.components[0][1];

            // Shared variance from its mean-marginalised conditional: the
            // precision is Gamma, mapped to the variance scale.
            double rate = prior.normal_precision_rate;
            for (int j = 0; j < J; ++j) {
                if (mom.counts[j] == 0) continue;
                const double nj = mom.counts[j];
                const double xbar = mom.sums[j] / nj;
                const double ssd = mom.sum_squares[j] - nj * xbar * xbar;
                const double dev = xbar - m0;
                rate += 0.5 * (r * nj * dev * dev / (nj + r) + ssd);
            }
            const double n = static_cast<double>(data.size());
            cache.base += log_gamma_pdf(1.0 / sigma2, 1.0 + 0.5 * n, rate) - 2.0 * std::log(sigma2);

            for (int j = 0; j < J; ++j) {
                const double nj = mom.counts[j];
                const double mean = (mom.sums[j] + r * m0) / (nj + r);
                const double var = sigma2 / (nj + r);
                for (int k = 0; k < J; ++k)
                    cache.mat[static_cast<std::size_t>(j) * J + k] +=
                        log_normal_pdf(star.components[k][0], mean, var);
            }
            break;
        }
        case FamilyTag::StudentT:
            throw UnsupportedFamilyError(
                "conditional density: the t mixture has no closed-form marginal variance "
                "conditional");
    }
    return cache;
}

double rb_term(const RbCache& cache, const std::vector<int>& perm) {
    double t = cache.base;
    for (int j = 0; j < cache.J; ++j)
        t += cache.mat[static_cast<std::size_t>(j) * cache.J + perm[j]];
    return t;
}

long long factorial_capped(int J, long long cap) {
    long long f = 1;
    for (int j = 2; j <= J; ++j) {
        if (f > cap / j) return cap + 1;
        f *= j;
    }
    return f;
}

// Standard error of log(mean of exp(terms)) by the delta method, computed
// after shifting by the maximum term.
std::optional<double> log_mean_std_err(const std::vector<double>& terms) {
    const std::size_t T = terms.size();
    if (T < 2) return std::nullopt;
    const double m = *std::max_element(terms.begin(), terms.end());
    if (m == kLogZero) return std::nullopt;
    double mean = 0.0;
    for (double t : terms) mean += std::exp(t - m);
    mean /= static_cast<double>(T);
    double var = 0.0;
    for (double t : terms) {
        const double d = std::exp(t - m) - mean;
        var += d * d;
    }
    var /= static_cast<double>(T - 1);
    return std::sqrt(var / static_cast<double>(T)) / mean;
}

// Batch-means variant for correlated chains.
std::optional<double> log_mean_std_err_batched(const std::vector<double>& terms) {
    const std::size_t T = terms.size();
    const std::size_t B = static_cast<std::size_t>(std::sqrt(static_cast<double>(T)));
    if (B < 2) return log_mean_std_err(terms);
    const std::size_t L = T / B;
    const double m = *std::max_element(terms.begin(), terms.end());
    if (m == kLogZero) return std::nullopt;

    std::vector<double> batch(B, 0.0);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t i = b * L; i < (b + 1) * L; ++i) batch[b] += std::exp(terms[i] - m);
        batch[b] /= static_cast<double>(L);
    }
    double mean = 0.0;
    for (double v : batch) mean += v;
    mean /= static_cast<double>(B);
    if (!(mean > 0.0)) return std::nullopt;
    double var = 0.0;
    for (double v : batch) var += (v - mean) * (v - mean);
    var /= static_cast<double>(B - 1);
    return std::sqrt(var / static_cast<double>(B)) / mean;
}

}  // namespace

LogValue rb_conditional_log_density(const ComponentFamily& family, const MixtureParams& params,
                                    const Allocation& z, const Dataset& data,
                                    const PriorSpec& prior) {
    if (!params_valid(family, params)) return kLogZero;
    const RbCache cache = build_rb_cache(family, params, z, data, prior);
    std::vector<int> identity(cache.J);
    for (int j = 0; j < cache.J; ++j) identity[j] = j;
    return rb_term(cache, identity);
}

EvidenceResult chib_estimate(const Trace& trace, const MixtureParams& lambda_star,
                             const Dataset& data, const PriorSpec& prior, bool symmetrize,
                             std::optional<long long> perm_sample, RngStream& rng) {
    if (!trace.has_allocations())
        throw UsageError("chib: the trace must store allocations (rerun with them enabled)");
    validate_params(trace.family, lambda_star);
    const int J = lambda_star.component_count();
    const std::size_t T = trace.allocations.size();

    std::vector<std::vector<int>> perms;
    {
        std::vector<int> identity(J);
        for (int j = 0; j < J; ++j) identity[j] = j;
        perms.push_back(identity);
        if (symmetrize) {
            const long long fact = factorial_capped(J, 1'000'000'000);
            long long target = perm_sample ? std::min(*perm_sample, fact)
                                           : (fact <= 720 ? fact : 100);
            if (target < 1) throw UsageError("chib: permutation sample must be positive");
            if (target == fact) {
                std::vector<int> p = identity;
                while (std::next_permutation(p.begin(), p.end())) perms.push_back(p);
            } else {
                std::set<std::vector<int>> seen{identity};
                while (static_cast<long long>(perms.size()) < target) {
                    std::vector<int> p = rng.permutation(J);
                    if (seen.insert(p).second) perms.push_back(p);
                }
            }
        }
    }
    const double log_p_count = std::log(static_cast<double>(perms.size()));

    // Per-draw log of the permutation-averaged conditional density.
    std::vector<double> per_draw(T);
    std::vector<double> terms(perms.size());
    for (std::size_t t = 0; t < T; ++t) {
        const RbCache cache = build_rb_cache(trace.family, lambda_star, trace.allocations[t], data,
                                             prior);
        for (std::size_t s = 0; s < perms.size(); ++s) terms[s] = rb_term(cache, perms[s]);
        per_draw[t] = log_sum_exp(terms) - log_p_count;
    }
    const LogValue log_density_hat = log_sum_exp(per_draw) - std::log(static_cast<double>(T));

    EvidenceResult res;
    res.method = symmetrize ? EvidenceMethod::ChibSymmetrized : EvidenceMethod::ChibPlain;
    res.permutations_used = static_cast<long long>(perms.size());
    res.log_marginal = observed_log_likelihood(trace.family, lambda_star, data) +
                       log_prior(prior, trace.family, lambda_star) - log_density_hat;
    res.mc_std_err = log_mean_std_err_batched(per_draw);
    return res;
}

namespace {

// Unconstrained coordinates for the Gaussian auxiliary: additive log
// ratios for simplex blocks, logits for probabilities, logs for scales.
std::vector<double> gaussian_coords(const ComponentFamily& family, const MixtureParams& params) {
    const int J = params.component_count();
    std::vector<double> c;
    for (int j = 0; j + 1 < J; ++j) c.push_back(std::log(params.weights[j] / params.weights[J - 1]));
    for (int j = 0; j < J; ++j) {
        const auto& th = params.components[j];
        switch (family.tag) {
            case FamilyTag::Poisson:
                c.push_back(std::log(th[0]));
                break;
            case FamilyTag::MultinomialProfile:
                for (std::size_t v = 0; v + 1 < th.size(); ++v)
                    c.push_back(std::log(th[v] / th.back()));
                break;
            case FamilyTag::BernoulliProduct:
                for (double q : th) c.push_back(std::log(q / (1.0 - q)));
                break;
            case FamilyTag::Normal:
                c.push_back(th[0]);
                if (j == 0) c.push_back(std::log(th[1]));  // shared variance enters once
                break;
            case FamilyTag::StudentT:
                c.push_back(th[0]);
                c.push_back(std::log(th[1]));
                c.push_back(std::log(th[2]));
                break;
        }
    }
    return c;
}

// log |d coords / d params|: the change-of-variable correction so the
// Gaussian auxiliary is a proper density on the original parameters.
double gaussian_log_jacobian(const ComponentFamily& family, const MixtureParams& params) {
    const int J = params.component_count();
    double lj = 0.0;
    if (J > 1)
        for (int j = 0; j < J; ++j) lj -= std::log(params.weights[j]);
    for (int j = 0; j < J; ++j) {
        const auto& th = params.components[j];
        switch (family.tag) {
            case FamilyTag::Poisson:
                lj -= std::log(th[0]);
                break;
            case FamilyTag::MultinomialProfile:
                for (double q : th) lj -= std::log(q);
                break;
            case FamilyTag::BernoulliProduct:
                for (double q : th) lj -= std::log(q) + std::log(1.0 - q);
                break;
            case FamilyTag::Normal:
                if (j == 0) lj -= std::log(th[1]);
                break;
            case FamilyTag::StudentT:
                lj -= std::log(th[1]) + std::log(th[2]);
                break;
        }
    }
    return lj;
}

struct MomentFit {
    double mean = 0.0;
    double var = 0.0;
};

MomentFit fit_moments(const std::vector<double>& values) {
    MomentFit f;
    for (double v : values) f.mean += v;
    f.mean /= static_cast<double>(values.size());
    for (double v : values) f.var += (v - f.mean) * (v - f.mean);
    f.var /= static_cast<double>(values.size() > 1 ? values.size() - 1 : 1);
    f.var = std::max(f.var, 1e-12);
    return f;
}

// Dirichlet by moment matching: concentration from the average
// mean-variance relation across cells.
std::vector<double> fit_dirichlet(const std::vector<std::vector<double>>& simplex_draws) {
    const std::size_t K = simplex_draws.front().size();
    std::vector<double> alpha(K);
    double s = 0.0;
    std::vector<MomentFit> fits(K);
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> col(simplex_draws.size());
        for (std::size_t t = 0; t < simplex_draws.size(); ++t) col[t] = simplex_draws[t][k];
        fits[k] = fit_moments(col);
        s += std::max(fits[k].mean * (1.0 - fits[k].mean) / fits[k].var - 1.0, 1e-3);
    }
    s /= static_cast<double>(K);
    for (std::size_t k = 0; k < K; ++k) alpha[k] = std::max(fits[k].mean * s, 1e-3);
    return alpha;
}

}  // namespace

AuxiliaryDensity fit_auxiliary(const Trace& trace, AuxiliaryDensity::Kind kind) {
    if (trace.size() == 0) throw ValidationError("auxiliary fit: empty trace");
    AuxiliaryDensity aux;
    aux.kind = kind;
    aux.family = trace.family;
    const int J = trace.draws[0].component_count();

    if (kind == AuxiliaryDensity::Kind::Gaussian) {
        const std::size_t dim = gaussian_coords(trace.family, trace.draws[0]).size();
        std::vector<std::vector<double>> cols(dim, std::vector<double>(trace.size()));
        for (std::size_t t = 0; t < trace.size(); ++t) {
            const auto c = gaussian_coords(trace.family, trace.draws[t]);
            for (std::size_t k = 0; k < dim; ++k) cols[k][t] = c[k];
        }
        aux.coord_mean.resize(dim);
        aux.coord_sd.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const MomentFit f = fit_moments(cols[k]);
            aux.coord_mean[k] = f.mean;
            aux.coord_sd[k] = std::sqrt(f.var);
        }
        return aux;
    }

    // Fitted product form in the natural parameter space.
    if (J > 1) {
        std::vector<std::vector<double>> w(trace.size());
        for (std::size_t t = 0; t < trace.size(); ++t) w[t] = trace.draws[t].weights;
        aux.weight_alpha = fit_dirichlet(w);
    }
    aux.component_a.resize(J);
    aux.component_b.resize(J);
    for (int j = 0; j < J; ++j) {
        switch (trace.family.tag) {
            case FamilyTag::Poisson: {
                std::vector<double> col(trace.size());
                for (std::size_t t = 0; t < trace.size(); ++t) col[t] = trace.draws[t].components[j][0];
                const MomentFit f = fit_moments(col);
                aux.component_a[j] = {f.mean * f.mean / f.var};
                aux.component_b[j] = {f.mean / f.var};
                break;
            }
            case FamilyTag::MultinomialProfile: {
                std::vector<std::vector<double>> rows(trace.size());
                for (std::size_t t = 0; t < trace.size(); ++t) rows[t] = trace.draws[t].components[j];
                aux.component_a[j] = fit_dirichlet(rows);
                break;
            }
            case FamilyTag::BernoulliProduct: {
                const std::size_t d = trace.draws[0].components[j].size();
                aux.component_a[j].resize(d);
                aux.component_b[j].resize(d);
                for (std::size_t v = 0; v < d; ++v) {
                    std::vector<double> col(trace.size());
                    for (std::size_t t = 0; t < trace.size(); ++t)
                        col[t] = trace.draws[t].components[j][v];
                    const MomentFit f = fit_moments(col);
                    const double c = std::max(f.mean * (1.0 - f.mean) / f.var - 1.0, 1e-3);
                    aux.component_a[j][v] = std::max(f.mean * c, 1e-3);
                    aux.component_b[j][v] = std::max((1.0 - f.mean) * c, 1e-3);
                }
                break;
            }
            case FamilyTag::Normal: {
                std::vector<double> mu(trace.size()), ls(trace.size());
                for (std::size_t t = 0; t < trace.size(); ++t) {
                    mu[t] = trace.draws[t].components[j][0];
                    ls[t] = std::log(trace.draws[t].components[j][1]);
                }
                const MomentFit fm = fit_moments(mu);
                const MomentFit fs = fit_moments(ls);
                // mean, variance of mu; then log-normal fit of the shared variance.
                aux.component_a[j] = {fm.mean, fs.mean};
                aux.component_b[j] = {fm.var, fs.var};
                break;
            }
            case FamilyTag::StudentT: {
                std::vector<double> mu(trace.size()), ls(trace.size()), ln(trace.size());
                for (std::size_t t = 0; t < trace.size(); ++t) {
                    mu[t] = trace.draws[t].components[j][0];
                    ls[t] = std::log(trace.draws[t].components[j][1]);
                    ln[t] = std::log(trace.draws[t].components[j][2]);
                }
                const MomentFit fm = fit_moments(mu);
                const MomentFit fs = fit_moments(ls);
                const MomentFit fn = fit_moments(ln);
                aux.component_a[j] = {fm.mean, fs.mean, fn.mean};
                aux.component_b[j] = {fm.var, fs.var, fn.var};
                break;
            }
        }
    }
    return aux;
}

LogValue auxiliary_log_density(const AuxiliaryDensity& aux, const MixtureParams& params) {
    const int J = params.component_count();
    if (aux.kind == AuxiliaryDensity::Kind::Gaussian) {
        const auto c = gaussian_coords(aux.family, params);
        if (c.size() != aux.coord_mean.size())
            throw ValidationError("auxiliary: coordinate dimension mismatch");
        LogValue lp = gaussian_log_jacobian(aux.family, params);
        for (std::size_t k = 0; k < c.size(); ++k)
            lp += log_normal_pdf(c[k], aux.coord_mean[k], aux.coord_sd[k] * aux.coord_sd[k]);
        return lp;
    }

    LogValue lp = 0.0;
    if (J > 1) lp += log_dirichlet_pdf(params.weights, aux.weight_alpha);
    for (int j = 0; j < J; ++j) {
        const auto& th = params.components[j];
        switch (aux.family.tag) {
            case FamilyTag::Poisson:
                lp += log_gamma_pdf(th[0], aux.component_a[j][0], aux.component_b[j][0]);
                break;
            case FamilyTag::MultinomialProfile:
                lp += log_dirichlet_pdf(th, aux.component_a[j]);
                break;
            case FamilyTag::BernoulliProduct:
                for (std::size_t v = 0; v < th.size(); ++v)
                    lp += log_beta_pdf(th[v], aux.component_a[j][v], aux.component_b[j][v]);
                break;
            case FamilyTag::Normal:
                lp += log_normal_pdf(th[0], aux.component_a[j][0], aux.component_b[j][0]);
                if (j == 0)
                    lp += log_normal_pdf(std::log(th[1]), aux.component_a[j][1],
                                         aux.component_b[j][1]) -
                          std::log(th[1]);
                break;
            case FamilyTag::StudentT:
                lp += log_normal_pdf(th[0], aux.component_a[j][0], aux.component_b[j][0]);
                lp += log_normal_pdf(std::log(th[1]), aux.component_a[j][1],
                                     aux.component_b[j][1]) -
                      std::log(th[1]);
                lp += log_normal_pdf(std::log(th[2]), aux.component_a[j][2],
                                     aux.component_b[j][2]) -
                      std::log(th[2]);
                break;
        }
    }
    return lp;
}

EvidenceResult gelfand_dey(const Trace& trace, const AuxiliaryDensity& aux, const Dataset& data,
                           const PriorSpec& prior) {
    if (trace.size() == 0) throw ValidationError("gelfand-dey: empty trace");
    std::vector<double> terms(trace.size());
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const LogValue lp = log_prior(prior, trace.family, trace.draws[t]);
        const LogValue ll = trace.log_lik[t];
        if (lp == kLogZero || ll == kLogZero)
            throw NumericalError("gelfand-dey: zero prior or likelihood at draw " +
                                 std::to_string(t));
        terms[t] = auxiliary_log_density(aux, trace.draws[t]) - ll - lp;
    }
    EvidenceResult res;
    res.method = EvidenceMethod::GelfandDey;
    res.log_marginal = -(log_sum_exp(terms) - std::log(static_cast<double>(terms.size())));
    res.mc_std_err = log_mean_std_err_batched(terms);
    res.variance_warning = true;  // the importance ratio can have infinite variance
    return res;
}

EvidenceResult prior_monte_carlo(const Dataset& data, int J, const ComponentFamily& family,
                                 const PriorSpec& prior, long long draws, RngStream& rng) {
    if (draws < 1) throw UsageError("prior-mc: need at least one draw");
    validate_prior(prior, family, J);
    std::vector<double> terms(static_cast<std::size_t>(draws));
    for (long long t = 0; t < draws; ++t) {
        const MixtureParams params = sample_prior(prior, family, J, rng);
        terms[static_cast<std::size_t>(t)] = observed_log_likelihood(family, params, data);
    }
    EvidenceResult res;
    res.method = EvidenceMethod::PriorMc;
    res.log_marginal = log_sum_exp(terms) - std::log(static_cast<double>(draws));
    res.mc_std_err = log_mean_std_err(terms);
    return res;
}

MixingDiagnostic mixing_diagnostic(const EvidenceResult& plain, const EvidenceResult& symmetrized,
                                   int J) {
    MixingDiagnostic d;
    d.delta = symmetrized.log_marginal - plain.log_marginal;
    d.log_j_factorial = std::lgamma(static_cast<double>(J) + 1.0);
    if (std::abs(d.delta - d.log_j_factorial) < 0.05)
        d.verdict = "single-mode";
    else if (std::abs(d.delta) < 0.05)
        d.verdict = "mixed";
    else
        d.verdict = "partial";
    return d;
}

EvidenceResult exact_evidence(const Dataset& data, int J, const ComponentFamily& family,
                              const PriorSpec& prior) {
    EvidenceResult res;
    res.method = EvidenceMethod::Exact;
    if (family.is_discrete_conjugate()) {
        res.log_marginal =
            exact_log_marginal(data, J, family, prior) + log_data_constant(family, data);
        return res;
    }
    if (family.tag == FamilyTag::Normal && family.shared_variance && J == 1) {
        // Integrate the mean (conjugate normal), then the precision
        // (exponential prior gives a Gamma integral).
        const double n = static_cast<double>(data.size());
        const double c = prior.normal_variance_ratio;
        const double rate = prior.normal_precision_rate;
        double xbar = 0.0;
        for (double x : data.reals) xbar += x;
        xbar /= n;
        double ssd = 0.0;
        for (double x : data.reals) ssd += (x - xbar) * (x - xbar);
        const double dev = xbar - prior.normal_mean;
        const double q = ssd + n * dev * dev / (1.0 + c * n);
        res.log_marginal = -0.5 * n * std::log(2.0 * std::acos(-1.0)) -
                           0.5 * std::log(1.0 + c * n) + std::log(rate) +
                           std::lgamma(0.5 * n + 1.0) - (0.5 * n + 1.0) * std::log(rate + 0.5 * q);
        return res;
    }
    throw UnsupportedFamilyError("exact evidence: no closed form for this family and J");
}

}  // namespace mixkit
