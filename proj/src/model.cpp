#include "mixkit/model.hpp"

#include <cmath>
#include <numeric>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

ComponentFamily ComponentFamily::multinomial_profile(int m) {
    if (m < 2) throw ValidationError("multinomial profile: m must be >= 2");
    return {FamilyTag::MultinomialProfile, m, 0, true};
}

ComponentFamily ComponentFamily::bernoulli_product(int d) {
    if (d < 1) throw ValidationError("bernoulli product: d must be >= 1");
    return {FamilyTag::BernoulliProduct, 0, d, true};
}

int ComponentFamily::param_dim() const {
    switch (tag) {
        case FamilyTag::Poisson: return 1;
        case FamilyTag::MultinomialProfile: return modalities;
        case FamilyTag::BernoulliProduct: return variables;
        case FamilyTag::Normal: return 2;
        case FamilyTag::StudentT: return 3;
    }
    return 0;
}

int ComponentFamily::stat_dim() const {
    switch (tag) {
        case FamilyTag::Poisson: return 1;
        case FamilyTag::MultinomialProfile: return modalities;
        case FamilyTag::BernoulliProduct: return variables;
        default: return 0;
    }
}

DataKind ComponentFamily::expected_kind() const {
    switch (tag) {
        case FamilyTag::Poisson: return DataKind::UnivariateCount;
        case FamilyTag::MultinomialProfile: return DataKind::MultinomialRows;
        case FamilyTag::BernoulliProduct: return DataKind::BinaryMatrix;
        case FamilyTag::Normal:
        case FamilyTag::StudentT: return DataKind::UnivariateReal;
    }
    return DataKind::UnivariateReal;
}

std::string ComponentFamily::name() const {
    switch (tag) {
        case FamilyTag::Poisson: return "poisson";
        case FamilyTag::MultinomialProfile: return "multinomial";
        case FamilyTag::BernoulliProduct: return "latent-class";
        case FamilyTag::Normal: return shared_variance ? "normal" : "normal-free-variance";
        case FamilyTag::StudentT: return "student-t";
    }
    return "unknown";
}

ComponentFamily family_from_name(const std::string& name, int columns, bool shared_variance) {
    if (name == "poisson") return ComponentFamily::poisson();
    if (name == "multinomial") return ComponentFamily::multinomial_profile(columns);
    if (name == "latent-class" || name == "bernoulli") return ComponentFamily::bernoulli_product(columns);
    if (name == "normal" || name == "normal-free-variance")
        return ComponentFamily::normal(name == "normal" ? shared_variance : false);
    if (name == "student-t") return ComponentFamily::student_t();
    throw ValidationError("unknown family name: " + name);
}

MixtureParams MixtureParams::permuted(const std::vector<int>& perm) const {
    MixtureParams out;
    out.weights.resize(weights.size());
    out.components.resize(components.size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
        out.weights[j] = weights[static_cast<std::size_t>(perm[j])];
        out.components[j] = components[static_cast<std::size_t>(perm[j])];
    }
    return out;
}

namespace {

bool simplex_ok(const std::vector<double>& q, double tol) {
    double s = 0.0;
    for (double v : q) {
        if (!(v > 0.0) || !std::isfinite(v)) return false;
        s += v;
    }
    return std::abs(s - 1.0) <= tol;
}

bool component_ok(const ComponentFamily& family, const std::vector<double>& theta) {
    if (static_cast<int>(theta.size()) != family.param_dim()) return false;
    switch (family.tag) {
        case FamilyTag::Poisson:
            return theta[0] > 0.0 && std::isfinite(theta[0]);
        case FamilyTag::MultinomialProfile:
        case FamilyTag::BernoulliProduct:
            for (double q : theta)
                if (!(q > 0.0) || !(q < 1.0)) return false;
            if (family.tag == FamilyTag::MultinomialProfile) {
                double s = std::accumulate(theta.begin(), theta.end(), 0.0);
                return std::abs(s - 1.0) <= 1e-9;
            }
            return true;
        case FamilyTag::Normal:
            return std::isfinite(theta[0]) && theta[1] > 0.0 && std::isfinite(theta[1]);
        case FamilyTag::StudentT:
            return std::isfinite(theta[0]) && theta[1] > 0.0 && std::isfinite(theta[1]) &&
                   theta[2] > 0.0 && std::isfinite(theta[2]);
    }
    return false;
}

}  // namespace

bool params_valid(const ComponentFamily& family, const MixtureParams& params, double simplex_tol) {
    const std::size_t J = params.weights.size();
    if (J == 0 || params.components.size() != J) return false;
    if (!simplex_ok(params.weights, simplex_tol)) return false;
    for (const auto& theta : params.components)
        if (!component_ok(family, theta)) return false;
    if (family.tag == FamilyTag::Normal && family.shared_variance) {
        for (std::size_t j = 1; j < J; ++j)
            if (params.components[j][1] != params.components[0][1]) return false;
    }
    return true;
}

void validate_params(const ComponentFamily& family, const MixtureParams& params, double simplex_tol) {
    if (!params_valid(family, params, simplex_tol))
        throw ValidationError("mixture parameters violate their invariants for family " + family.name());
}

PriorSpec PriorSpec::default_for(const ComponentFamily& family, int J, const Dataset& data) {
    PriorSpec prior;
    prior.dirichlet_alpha.assign(static_cast<std::size_t>(J), 1.0);
    prior.poisson_rate.assign(static_cast<std::size_t>(J), 1.0);
    if (family.tag == FamilyTag::StudentT && data.kind == DataKind::UnivariateReal &&
        data.reals.size() > 1) {
        const double n = static_cast<double>(data.reals.size());
        double mean = 0.0;
        for (double v : data.reals) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : data.reals) var += (v - mean) * (v - mean);
        var /= (n - 1.0);
        prior.t_mu0 = mean;
        prior.t_sigma0sq = var;
    }
    return prior;
}

void validate_prior(const PriorSpec& prior, const ComponentFamily& family, int J) {
    if (static_cast<int>(prior.dirichlet_alpha.size()) != J)
        throw ValidationError("prior: dirichlet alpha length must equal J");
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    for (double a : prior.dirichlet_alpha)
        if (!positive(a)) throw ValidationError("prior: dirichlet alphas must be positive and finite");
    switch (family.tag) {
        case FamilyTag::Poisson:
            if (static_cast<int>(prior.poisson_rate.size()) != J)
                throw ValidationError("prior: poisson rate vector length must equal J");
            for (double t : prior.poisson_rate)
                if (!positive(t)) throw ValidationError("prior: poisson rates must be positive (improper priors are rejected)");
            break;
        case FamilyTag::MultinomialProfile:
        case FamilyTag::BernoulliProduct:
            if (!positive(prior.categorical_alpha))
                throw ValidationError("prior: categorical alpha must be positive");
            break;
        case FamilyTag::Normal:
            if (!positive(prior.normal_variance_ratio) || !positive(prior.normal_precision_rate) ||
                !std::isfinite(prior.normal_mean))
                throw ValidationError("prior: normal hyperparameters must be proper");
            break;
        case FamilyTag::StudentT:
            if (!std::isfinite(prior.t_mu0) || !positive(prior.t_sigma0sq) || !positive(prior.t_a_sigma) ||
                !positive(prior.t_b_sigma) || !positive(prior.t_a_nu) || !positive(prior.t_b_nu))
                throw ValidationError("prior: student-t hyperparameters must be proper");
            break;
    }
}

std::vector<int> Allocation::counts(int J) const {
    std::vector<int> n(static_cast<std::size_t>(J), 0);
    for (int z : labels) {
        if (z < 0 || z >= J) throw ValidationError("allocation: label out of range");
        ++n[static_cast<std::size_t>(z)];
    }
    return n;
}

LogValue component_log_density(const ComponentFamily& family, const std::vector<double>& theta,
                               const Dataset& data, std::size_t i) {
    switch (family.tag) {
        case FamilyTag::Poisson:
            return log_poisson_pmf(data.counts[i], theta[0]);
        case FamilyTag::MultinomialProfile:
            return log_multinomial_pmf(data.rows[i], theta);
        case FamilyTag::BernoulliProduct: {
            LogValue lp = 0.0;
            for (int v = 0; v < family.variables; ++v) {
                const LogValue term =
                    log_bernoulli_pmf(static_cast<int>(data.rows[i][static_cast<std::size_t>(v)]),
                                      theta[static_cast<std::size_t>(v)]);
                if (term == kLogZero) return kLogZero;
                lp += term;
            }
            return lp;
        }
        case FamilyTag::Normal:
            return log_normal_pdf(data.reals[i], theta[0], theta[1]);
        case FamilyTag::StudentT:
            return log_student_t_pdf(data.reals[i], theta[2], theta[0], theta[1]);
    }
    throw ValidationError("component_log_density: unknown family");
}

LogValue observed_log_likelihood(const ComponentFamily& family, const MixtureParams& params,
                                 const Dataset& data) {
    if (data.kind != family.expected_kind())
        throw ValidationError("observed_log_likelihood: dataset kind does not match family " + family.name());
    const std::size_t J = params.weights.size();
    std::vector<double> log_w(J);
    for (std::size_t j = 0; j < J; ++j) log_w[j] = std::log(params.weights[j]);
    std::vector<double> inner(J);
    LogValue total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < J; ++j)
            inner[j] = log_w[j] + component_log_density(family, params.components[j], data, i);
        total += log_sum_exp(inner);
    }
    return total;
}

LogValue complete_log_likelihood(const ComponentFamily& family, const MixtureParams& params,
                                 const Dataset& data, const Allocation& z) {
    if (z.size() != data.size())
        throw ValidationError("complete_log_likelihood: allocation length must equal n");
    const int J = params.component_count();
    LogValue total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int zi = z.labels[i];
        if (zi < 0 || zi >= J) throw ValidationError("complete_log_likelihood: label out of range");
        total += std::log(params.weights[static_cast<std::size_t>(zi)]) +
                 component_log_density(family, params.components[static_cast<std::size_t>(zi)], data, i);
    }
    return total;
}

LogValue log_prior(const PriorSpec& prior, const ComponentFamily& family,
                   const MixtureParams& params) {
    const int J = params.component_count();
    validate_prior(prior, family, J);
    if (!params_valid(family, params, 1e-9)) return kLogZero;

    LogValue lp = log_dirichlet_pdf(params.weights, prior.dirichlet_alpha);
    if (lp == kLogZero) return kLogZero;

    for (int j = 0; j < J; ++j) {
        const auto& theta = params.components[static_cast<std::size_t>(j)];
        switch (family.tag) {
            case FamilyTag::Poisson:
                lp += log_gamma_pdf(theta[0], 1.0, prior.poisson_rate[static_cast<std::size_t>(j)]);
                break;
            case FamilyTag::MultinomialProfile: {
                std::vector<double> alpha(static_cast<std::size_t>(family.modalities),
                                          prior.categorical_alpha);
                lp += log_dirichlet_pdf(theta, alpha);
                break;
            }
            case FamilyTag::BernoulliProduct:
                for (double q : theta)
                    lp += log_beta_pdf(q, prior.categorical_alpha, prior.categorical_alpha);
                break;
            case FamilyTag::Normal: {
                const double sigma2 = theta[1];
                lp += log_normal_pdf(theta[0], prior.normal_mean,
                                     prior.normal_variance_ratio * sigma2);
                // sigma^{-2} ~ Exp(rate); density mapped to sigma2 with its Jacobian.
                // The shared variance contributes once (at j = 0).
                if (!family.shared_variance || j == 0)
                    lp += std::log(prior.normal_precision_rate) -
                          prior.normal_precision_rate / sigma2 - 2.0 * std::log(sigma2);
                break;
            }
            case FamilyTag::StudentT:
                lp += log_normal_pdf(theta[0], prior.t_mu0, 2.0 * prior.t_sigma0sq);
                lp += log_inverse_gamma_pdf(theta[1], prior.t_a_sigma, prior.t_b_sigma);
                lp += log_gamma_pdf(theta[2], prior.t_a_nu, prior.t_b_nu);
                break;
        }
        if (lp == kLogZero || std::isnan(lp)) return kLogZero;
    }
    return lp;
}

MixtureParams sample_prior(const PriorSpec& prior, const ComponentFamily& family, int J,
                           RngStream& rng) {
    validate_prior(prior, family, J);
    MixtureParams params;
    params.weights = rng.dirichlet(prior.dirichlet_alpha);
    params.components.resize(static_cast<std::size_t>(J));
    double shared_sigma2 = 0.0;
    if (family.tag == FamilyTag::Normal)
        shared_sigma2 = 1.0 / rng.gamma(1.0, prior.normal_precision_rate);
    for (int j = 0; j < J; ++j) {
        auto& theta = params.components[static_cast<std::size_t>(j)];
        switch (family.tag) {
            case FamilyTag::Poisson:
                theta = {rng.gamma(1.0, prior.poisson_rate[static_cast<std::size_t>(j)])};
                break;
            case FamilyTag::MultinomialProfile:
                theta = rng.dirichlet(std::vector<double>(static_cast<std::size_t>(family.modalities),
                                                          prior.categorical_alpha));
                break;
            case FamilyTag::BernoulliProduct:
                theta.resize(static_cast<std::size_t>(family.variables));
                for (auto& q : theta) q = rng.beta(prior.categorical_alpha, prior.categorical_alpha);
                break;
            case FamilyTag::Normal: {
                const double sigma2 = family.shared_variance
                                          ? shared_sigma2
                                          : 1.0 / rng.gamma(1.0, prior.normal_precision_rate);
                theta = {rng.normal(prior.normal_mean,
                                    std::sqrt(prior.normal_variance_ratio * sigma2)),
                         sigma2};
                break;
            }
            case FamilyTag::StudentT:
                theta = {rng.normal(prior.t_mu0, std::sqrt(2.0 * prior.t_sigma0sq)),
                         rng.inverse_gamma(prior.t_a_sigma, prior.t_b_sigma),
                         rng.gamma(prior.t_a_nu, prior.t_b_nu)};
                break;
        }
    }
    return params;
}

}  // namespace mixkit
