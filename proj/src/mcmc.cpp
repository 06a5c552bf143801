#include "mixkit/mcmc.hpp"

#include <algorithm>
#include <cmath>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/logsum.hpp"

namespace mixkit {

void ChainConfig::validate() const {
    if (iterations <= 0) throw ValidationError("chain: iterations must be positive");
    if (thin <= 0) throw ValidationError("chain: thin must be positive");
    if (effective_burnin() < 0 || effective_burnin() >= iterations)
        throw ValidationError("chain: burnin must leave at least one retained draw");
    if (!(rw_scale_params > 0.0) || !(rw_scale_nu > 0.0))
        throw ValidationError("chain: random-walk scales must be positive");
}

namespace {

// Shared recording policy: iteration t (1-based) is retained when past
// burnin and on the thinning grid.
struct Recorder {
    Trace& trace;
    long long burnin;
    long long thin;

    bool due(long long t) const { return t > burnin && (t - burnin) % thin == 0; }
};

void check_sampler_inputs(const Dataset& data, int J, const ComponentFamily& family,
                          const PriorSpec& prior, const ChainConfig& config) {
    config.validate();
    if (J < 1) throw ValidationError("sampler: need at least one component");
    if (data.size() == 0) throw UsageError("sampler: empty dataset");
    if (data.kind != family.expected_kind())
        throw DataError("sampler: dataset kind does not match the component family");
    validate_dataset(data);
    validate_prior(prior, family, J);
}

}  // namespace

Allocation sample_allocations(const ComponentFamily& family, const MixtureParams& params,
                              const Dataset& data, RngStream& rng) {
    const int J = params.component_count();
    Allocation z;
    z.labels.resize(data.size());
    std::vector<double> logw(J);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (int j = 0; j < J; ++j) {
            logw[j] = (params.weights[j] > 0.0 ? std::log(params.weights[j]) : kLogZero) +
                      component_log_density(family, params.components[j], data, i);
        }
        if (*std::max_element(logw.begin(), logw.end()) == kLogZero)
            throw NumericalError("allocation: every component density is zero at observation " +
                                 std::to_string(i));
        z.labels[i] = rng.categorical_from_log(logw);
    }
    return z;
}

ComponentMoments component_moments(const Dataset& data, const Allocation& z, int J) {
    ComponentMoments m;
    m.counts.assign(J, 0);
    const int block = (data.kind == DataKind::MultinomialRows || data.kind == DataKind::BinaryMatrix)
                          ? data.columns
                          : 1;
    m.sums.assign(static_cast<std::size_t>(J) * block, 0.0);
    if (data.kind == DataKind::UnivariateReal) m.sum_squares.assign(J, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int j = z.labels[i];
        m.counts[j] += 1;
        switch (data.kind) {
            case DataKind::UnivariateReal: {
                const double x = data.reals[i];
                m.sums[j] += x;
                m.sum_squares[j] += x * x;
                break;
            }
            case DataKind::UnivariateCount:
                m.sums[j] += static_cast<double>(data.counts[i]);
                break;
            case DataKind::MultinomialRows:
            case DataKind::BinaryMatrix:
                for (int v = 0; v < block; ++v)
                    m.sums[static_cast<std::size_t>(j) * block + v] +=
                        static_cast<double>(data.rows[i][v]);
                break;
        }
    }
    return m;
}

Trace gibbs_normal_mixture(const Dataset& data, int J, const PriorSpec& prior,
                           const ChainConfig& config) {
    const ComponentFamily family = ComponentFamily::normal(true);
    check_sampler_inputs(data, J, family, prior, config);

    RngStream rng(config.seed);
    MixtureParams params = sample_prior(prior, family, J, rng);

    Trace trace;
    trace.family = family;
    trace.config = config;
    Recorder rec{trace, config.effective_burnin(), config.thin};

    const double n = static_cast<double>(data.size());
    const double r = 1.0 / prior.normal_variance_ratio;  // prior precision factor on the means
    const double m0 = prior.normal_mean;

    for (long long t = 1; t <= config.iterations; ++t) {
        Allocation z = sample_allocations(family, params, data, rng);
        ComponentMoments mom = component_moments(data, z, J);

        std::vector<double> alpha(prior.dirichlet_alpha);
        for (int j = 0; j < J; ++j) alpha[j] += mom.counts[j];
        params.weights = rng.dirichlet(alpha);

        // Precision draw with the means integrated out of its conditional.
        double rate = prior.normal_precision_rate;
        for (int j = 0; j < J; ++j) {
            if (mom.counts[j] == 0) continue;
            const double nj = mom.counts[j];
            const double xbar = mom.sums[j] / nj;
            const double ssd = mom.sum_squares[j] - nj * xbar * xbar;
            const double dev = xbar - m0;
            rate += 0.5 * (r * nj * dev * dev / (nj + r) + ssd);
        }
        const double precision = rng.gamma(1.0 + 0.5 * n, rate);
        const double sigma2 = 1.0 / precision;

        for (int j = 0; j < J; ++j) {
            const double nj = mom.counts[j];
            const double mean = (mom.sums[j] + r * m0) / (nj + r);
            const double mu = rng.normal(mean, std::sqrt(sigma2 / (nj + r)));
            params.components[j] = {mu, sigma2};
        }

        if (rec.due(t)) {
            trace.draws.push_back(params);
            trace.log_lik.push_back(observed_log_likelihood(family, params, data));
            if (config.store_allocations) trace.allocations.push_back(z);
        }
    }
    return trace;
}

LogValue nu_log_target(double nu, const std::vector<double>& component_scales,
                       const PriorSpec& prior) {
    if (!(nu > 0.0) || !std::isfinite(nu)) return kLogZero;
    const double h = 0.5 * nu;
    LogValue lt = static_cast<double>(component_scales.size()) * (h * std::log(h) - std::lgamma(h));
    for (double v : component_scales) lt += -(h + 1.0) * std::log(v) - h / v;
    lt += log_gamma_pdf(nu, prior.t_a_nu, prior.t_b_nu);
    return lt;
}

std::vector<bool> nu_metropolis_step(std::vector<double>& nu, const Dataset& data,
                                     const std::vector<double>& latent_scales, const Allocation& z,
                                     const PriorSpec& prior, double rw_scale_nu, RngStream& rng) {
    (void)data;
    const int J = static_cast<int>(nu.size());
    std::vector<std::vector<double>> scales(J);
    for (std::size_t i = 0; i < z.size(); ++i) scales[z.labels[i]].push_back(latent_scales[i]);

    std::vector<bool> accepted(J, false);
    for (int j = 0; j < J; ++j) {
        const double proposal = nu[j] * std::exp(rw_scale_nu * rng.normal());
        // Log-scale walk: the log(nu'/nu) term is the proposal Jacobian.
        const double log_ratio = nu_log_target(proposal, scales[j], prior) -
                                 nu_log_target(nu[j], scales[j], prior) +
                                 std::log(proposal / nu[j]);
        if (std::log(rng.uniform_pos()) < log_ratio) {
            nu[j] = proposal;
            accepted[j] = true;
        }
    }
    return accepted;
}

Trace gibbs_t_mixture(const Dataset& data, int J, const PriorSpec& prior,
                      const std::optional<std::vector<double>>& nu_known,
                      const ChainConfig& config) {
    const ComponentFamily family = ComponentFamily::student_t();
    check_sampler_inputs(data, J, family, prior, config);
    if (nu_known) {
        if (static_cast<int>(nu_known->size()) != J)
            throw ValidationError("t sampler: fixed degrees-of-freedom vector has wrong length");
        for (double v : *nu_known)
            if (!(v > 0.0)) throw ValidationError("t sampler: degrees of freedom must be positive");
    }

    RngStream rng(config.seed);
    MixtureParams params = sample_prior(prior, family, J, rng);
    if (nu_known)
        for (int j = 0; j < J; ++j) params.components[j][2] = (*nu_known)[j];

    const std::size_t n = data.size();
    std::vector<double> V(n, 1.0);

    Trace trace;
    trace.family = family;
    trace.config = config;
    Recorder rec{trace, config.effective_burnin(), config.thin};

    long long nu_proposals = 0;
    long long nu_accepts = 0;

    for (long long t = 1; t <= config.iterations; ++t) {
        // Blocked (z_i, V_i): label from the scale-marginal t density, then
        // the latent scale from its inverse-gamma conditional.
        Allocation z = sample_allocations(family, params, data, rng);
        for (std::size_t i = 0; i < n; ++i) {
            const int j = z.labels[i];
            const double nu_j = params.components[j][2];
            const double dev = data.reals[i] - params.components[j][0];
            V[i] = rng.inverse_gamma(0.5 * (1.0 + nu_j),
                                     0.5 * nu_j + dev * dev / (2.0 * params.components[j][1]));
        }

        std::vector<int> counts = z.counts(J);
        std::vector<double> alpha(prior.dirichlet_alpha);
        for (int j = 0; j < J; ++j) alpha[j] += counts[j];
        params.weights = rng.dirichlet(alpha);

        std::vector<double> inv_v_sum(J, 0.0), x_inv_v_sum(J, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const int j = z.labels[i];
            inv_v_sum[j] += 1.0 / V[i];
            x_inv_v_sum[j] += data.reals[i] / V[i];
        }

        for (int j = 0; j < J; ++j) {
            double ssd_scaled = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (z.labels[i] != j) continue;
                const double dev = data.reals[i] - params.components[j][0];
                ssd_scaled += dev * dev / V[i];
            }
            const double sigma2 =
                rng.inverse_gamma(prior.t_a_sigma + 0.5 * counts[j],
                                  prior.t_b_sigma + 0.5 * ssd_scaled);

            const double denom = sigma2 + 2.0 * prior.t_sigma0sq * inv_v_sum[j];
            const double mean =
                (prior.t_mu0 * sigma2 + 2.0 * prior.t_sigma0sq * x_inv_v_sum[j]) / denom;
            const double var = 2.0 * prior.t_sigma0sq * sigma2 / denom;
            params.components[j][0] = rng.normal(mean, std::sqrt(var));
            params.components[j][1] = sigma2;
        }

        if (!nu_known) {
            std::vector<double> nu(J);
            for (int j = 0; j < J; ++j) nu[j] = params.components[j][2];
            auto flags = nu_metropolis_step(nu, data, V, z, prior, config.rw_scale_nu, rng);
            for (int j = 0; j < J; ++j) {
                params.components[j][2] = nu[j];
                nu_proposals += 1;
                if (flags[j]) nu_accepts += 1;
            }
        }

        if (rec.due(t)) {
            trace.draws.push_back(params);
            trace.log_lik.push_back(observed_log_likelihood(family, params, data));
            if (config.store_allocations) trace.allocations.push_back(z);
            if (config.store_latent_scales) trace.latent_scales.push_back(V);
        }
    }
    if (nu_proposals > 0)
        trace.acceptance_rates["nu"] =
            static_cast<double>(nu_accepts) / static_cast<double>(nu_proposals);
    return trace;
}

Trace gibbs_conjugate_mixture(const Dataset& data, int J, const ComponentFamily& family,
                              const PriorSpec& prior, const ChainConfig& config) {
    if (!family.is_discrete_conjugate())
        throw UnsupportedFamilyError("conjugate sampler: family has no closed-form conditionals");
    check_sampler_inputs(data, J, family, prior, config);

    RngStream rng(config.seed);
    MixtureParams params = sample_prior(prior, family, J, rng);

    Trace trace;
    trace.family = family;
    trace.config = config;
    Recorder rec{trace, config.effective_burnin(), config.thin};

    for (long long t = 1; t <= config.iterations; ++t) {
        Allocation z = sample_allocations(family, params, data, rng);
        ComponentMoments mom = component_moments(data, z, J);

        std::vector<double> alpha(prior.dirichlet_alpha);
        for (int j = 0; j < J; ++j) alpha[j] += mom.counts[j];
        params.weights = rng.dirichlet(alpha);

        switch (family.tag) {
            case FamilyTag::Poisson:
                for (int j = 0; j < J; ++j)
                    params.components[j][0] =
                        rng.gamma(1.0 + mom.sums[j], prior.poisson_rate[j] + mom.counts[j]);
                break;
            case FamilyTag::MultinomialProfile:
                for (int j = 0; j < J; ++j) {
                    std::vector<double> a(family.modalities, prior.categorical_alpha);
                    for (int v = 0; v < family.modalities; ++v)
                        a[v] += mom.sums[static_cast<std::size_t>(j) * family.modalities + v];
                    params.components[j] = rng.dirichlet(a);
                }
                break;
            case FamilyTag::BernoulliProduct:
                for (int j = 0; j < J; ++j) {
                    for (int v = 0; v < family.variables; ++v) {
                        const double s = mom.sums[static_cast<std::size_t>(j) * family.variables + v];
                        params.components[j][v] =
                            rng.beta(prior.categorical_alpha + s,
                                     prior.categorical_alpha + mom.counts[j] - s);
                    }
                }
                break;
            default:
                throw UnsupportedFamilyError("conjugate sampler: unexpected family");
        }

        if (rec.due(t)) {
            trace.draws.push_back(params);
            trace.log_lik.push_back(observed_log_likelihood(family, params, data));
            if (config.store_allocations) trace.allocations.push_back(z);
        }
    }
    return trace;
}

Trace gibbs_latent_class(const Dataset& data, int J, const PriorSpec& prior,
                         const ChainConfig& config) {
    if (data.kind != DataKind::BinaryMatrix)
        throw DataError("latent class sampler: needs a binary matrix");
    return gibbs_conjugate_mixture(data, J, ComponentFamily::bernoulli_product(data.columns),
                                   prior, config);
}

namespace {

// Unconstrained coordinate layout for the random-walk sampler. Weights are
// overparameterised as log w_j with independent Gamma(alpha_j, 1) priors,
// so the induced weight vector is Dirichlet(alpha). Scales and degrees of
// freedom live on the log scale, Bernoulli probabilities on the logit
// scale, multinomial profiles as per-cell log gammas.
struct MhLayout {
    ComponentFamily family;
    int J = 0;
    int dim = 0;

    int component_block() const {
        switch (family.tag) {
            case FamilyTag::Poisson: return 1;
            case FamilyTag::MultinomialProfile: return family.modalities;
            case FamilyTag::BernoulliProduct: return family.variables;
            case FamilyTag::Normal: return 1;  // means; shared log-variance appended at the end
            case FamilyTag::StudentT: return 3;
        }
        return 0;
    }
};

MhLayout make_layout(const ComponentFamily& family, int J) {
    if (family.tag == FamilyTag::Normal && !family.shared_variance)
        throw UnsupportedFamilyError("random-walk sampler: only the shared-variance normal model");
    MhLayout lay{family, J, 0};
    lay.dim = J + J * lay.component_block() + (family.tag == FamilyTag::Normal ? 1 : 0);
    return lay;
}

MixtureParams unpack_phi(const MhLayout& lay, const std::vector<double>& phi) {
    MixtureParams params;
    const int J = lay.J;
    params.weights.resize(J);
    double wmax = phi[0];
    for (int j = 1; j < J; ++j) wmax = std::max(wmax, phi[j]);
    double wsum = 0.0;
    for (int j = 0; j < J; ++j) {
        params.weights[j] = std::exp(phi[j] - wmax);
        wsum += params.weights[j];
    }
    for (int j = 0; j < J; ++j) params.weights[j] /= wsum;

    params.components.resize(J);
    const int block = lay.component_block();
    for (int j = 0; j < J; ++j) {
        const double* base = phi.data() + J + static_cast<std::size_t>(j) * block;
        switch (lay.family.tag) {
            case FamilyTag::Poisson:
                params.components[j] = {std::exp(base[0])};
                break;
            case FamilyTag::MultinomialProfile: {
                std::vector<double> q(block);
                double qmax = base[0];
                for (int v = 1; v < block; ++v) qmax = std::max(qmax, base[v]);
                double qsum = 0.0;
                for (int v = 0; v < block; ++v) {
                    q[v] = std::exp(base[v] - qmax);
                    qsum += q[v];
                }
                for (int v = 0; v < block; ++v) q[v] /= qsum;
                params.components[j] = std::move(q);
                break;
            }
            case FamilyTag::BernoulliProduct: {
                std::vector<double> q(block);
                for (int v = 0; v < block; ++v) q[v] = 1.0 / (1.0 + std::exp(-base[v]));
                params.components[j] = std::move(q);
                break;
            }
            case FamilyTag::Normal:
                params.components[j] = {base[0], std::exp(phi[lay.dim - 1])};
                break;
            case FamilyTag::StudentT:
                params.components[j] = {base[0], std::exp(base[1]), std::exp(base[2])};
                break;
        }
    }
    return params;
}

// Log prior density in the unconstrained coordinates, change-of-variable
// Jacobians included; normalising constants that depend on hyperparameters
// only are dropped.
LogValue log_prior_phi(const MhLayout& lay, const PriorSpec& prior,
                       const std::vector<double>& phi) {
    const int J = lay.J;
    LogValue lp = 0.0;
    for (int j = 0; j < J; ++j)
        lp += prior.dirichlet_alpha[j] * phi[j] - std::exp(phi[j]);

    const int block = lay.component_block();
    for (int j = 0; j < J; ++j) {
        const double* base = phi.data() + J + static_cast<std::size_t>(j) * block;
        switch (lay.family.tag) {
            case FamilyTag::Poisson:
                lp += base[0] - prior.poisson_rate[j] * std::exp(base[0]);
                break;
            case FamilyTag::MultinomialProfile:
                for (int v = 0; v < block; ++v)
                    lp += prior.categorical_alpha * base[v] - std::exp(base[v]);
                break;
            case FamilyTag::BernoulliProduct:
                for (int v = 0; v < block; ++v) {
                    const double q = 1.0 / (1.0 + std::exp(-base[v]));
                    lp += log_beta_pdf(q, prior.categorical_alpha, prior.categorical_alpha) +
                          std::log(q) + std::log(1.0 - q);
                }
                break;
            case FamilyTag::Normal: {
                const double sigma2 = std::exp(phi[lay.dim - 1]);
                lp += log_normal_pdf(base[0], prior.normal_mean,
                                     prior.normal_variance_ratio * sigma2);
                if (j == 0) {
                    // Exponential prior on the precision, mapped to log sigma2.
                    lp += std::log(prior.normal_precision_rate) -
                          prior.normal_precision_rate / sigma2 - phi[lay.dim - 1];
                }
                break;
            }
            case FamilyTag::StudentT: {
                const double sigma2 = std::exp(base[1]);
                const double nu = std::exp(base[2]);
                lp += log_normal_pdf(base[0], prior.t_mu0, 2.0 * prior.t_sigma0sq);
                lp += log_inverse_gamma_pdf(sigma2, prior.t_a_sigma, prior.t_b_sigma) + base[1];
                lp += log_gamma_pdf(nu, prior.t_a_nu, prior.t_b_nu) + base[2];
                break;
            }
        }
    }
    return lp;
}

}  // namespace

Trace mh_mixture(const Dataset& data, int J, const ComponentFamily& family, const PriorSpec& prior,
                 const ChainConfig& config) {
    check_sampler_inputs(data, J, family, prior, config);
    const MhLayout lay = make_layout(family, J);

    RngStream rng(config.seed);

    std::vector<double> phi(lay.dim);
    {
        // Prior-consistent start: Gamma weights for the overparameterised
        // block, a prior draw for everything else.
        MixtureParams init = sample_prior(prior, family, J, rng);
        for (int j = 0; j < J; ++j) phi[j] = std::log(rng.gamma(prior.dirichlet_alpha[j], 1.0));
        const int block = lay.component_block();
        for (int j = 0; j < J; ++j) {
            double* base = phi.data() + J + static_cast<std::size_t>(j) * block;
            switch (family.tag) {
                case FamilyTag::Poisson:
                    base[0] = std::log(init.components[j][0]);
                    break;
                case FamilyTag::MultinomialProfile:
                    for (int v = 0; v < block; ++v) base[v] = std::log(init.components[j][v]);
                    break;
                case FamilyTag::BernoulliProduct:
                    for (int v = 0; v < block; ++v) {
                        const double q = init.components[j][v];
                        base[v] = std::log(q / (1.0 - q));
                    }
                    break;
                case FamilyTag::Normal:
                    base[0] = init.components[j][0];
                    if (j == 0) phi[lay.dim - 1] = std::log(init.components[j][1]);
                    break;
                case FamilyTag::StudentT:
                    base[0] = init.components[j][0];
                    base[1] = std::log(init.components[j][1]);
                    base[2] = std::log(init.components[j][2]);
                    break;
            }
        }
    }

    auto nu_coordinate = [&](int k) {
        return family.tag == FamilyTag::StudentT && k >= J && (k - J) % 3 == 2;
    };

    auto log_target = [&](const std::vector<double>& v, LogValue& loglik_out) {
        MixtureParams params = unpack_phi(lay, v);
        loglik_out = observed_log_likelihood(family, params, data);
        return loglik_out + log_prior_phi(lay, prior, v);
    };

    LogValue cur_loglik = kLogZero;
    LogValue cur_target = log_target(phi, cur_loglik);
    if (cur_target == kLogZero || !std::isfinite(cur_target))
        throw NumericalError("random-walk sampler: zero posterior density at the initial point");

    Trace trace;
    trace.family = family;
    trace.config = config;
    Recorder rec{trace, config.effective_burnin(), config.thin};

    long long accepts = 0;
    std::vector<double> proposal(lay.dim);
    for (long long t = 1; t <= config.iterations; ++t) {
        for (int k = 0; k < lay.dim; ++k) {
            const double scale = nu_coordinate(k) ? config.rw_scale_nu : config.rw_scale_params;
            proposal[k] = phi[k] + scale * rng.normal();
        }
        LogValue prop_loglik = kLogZero;
        const LogValue prop_target = log_target(proposal, prop_loglik);
        if (std::log(rng.uniform_pos()) < prop_target - cur_target) {
            phi = proposal;
            cur_target = prop_target;
            cur_loglik = prop_loglik;
            accepts += 1;
        }

        if (rec.due(t)) {
            trace.draws.push_back(unpack_phi(lay, phi));
            trace.log_lik.push_back(cur_loglik);
        }
    }
    trace.acceptance_rates["params"] =
        static_cast<double>(accepts) / static_cast<double>(config.iterations);
    return trace;
}

}  // namespace mixkit
