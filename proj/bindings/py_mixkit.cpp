// Python bindings. The compiled module is `mixkit._mixkit`; the package
// __init__ re-exports everything under friendlier names.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/evidence.hpp"
#include "mixkit/exact.hpp"
#include "mixkit/io.hpp"
#include "mixkit/mcmc.hpp"
#include "mixkit/model.hpp"
#include "mixkit/relabel.hpp"
#include "mixkit/rng.hpp"
#include "mixkit/simulate.hpp"

namespace py = pybind11;
using namespace mixkit;

namespace {

// Row layout matches the trace CSV: weights first, then each component's
// parameter vector.
py::array_t<double> trace_matrix(const Trace& trace) {
    const std::size_t T = trace.size();
    const int J = trace.draws.empty() ? 0 : trace.draws[0].component_count();
    const int pd = trace.family.param_dim();
    const std::size_t cols = static_cast<std::size_t>(J + J * pd);
    py::array_t<double> out({T, cols});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t t = 0; t < T; ++t) {
        std::size_t c = 0;
        for (double w : trace.draws[t].weights) m(t, c++) = w;
        for (const auto& theta : trace.draws[t].components)
            for (double v : theta) m(t, c++) = v;
    }
    return out;
}

py::array_t<double> double_vector(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

Trace run_sampler(const Dataset& data, int J, const ComponentFamily& family,
                  const PriorSpec& prior, const ChainConfig& config, const std::string& sampler,
                  const std::optional<std::vector<double>>& nu_known) {
    if (sampler == "mh") return mh_mixture(data, J, family, prior, config);
    if (sampler != "gibbs") throw UsageError("sampler must be 'gibbs' or 'mh'");
    switch (family.tag) {
        case FamilyTag::Normal:
            return gibbs_normal_mixture(data, J, prior, config);
        case FamilyTag::StudentT:
            return gibbs_t_mixture(data, J, prior, nu_known, config);
        case FamilyTag::BernoulliProduct:
            return gibbs_latent_class(data, J, prior, config);
        default:
            return gibbs_conjugate_mixture(data, J, family, prior, config);
    }
}

py::dict evidence_dict(const EvidenceResult& r) {
    py::dict d;
    d["log_marginal"] = r.log_marginal;
    d["permutations_used"] = r.permutations_used;
    if (r.mc_std_err)
        d["mc_std_err"] = *r.mc_std_err;
    else
        d["mc_std_err"] = py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_mixkit, m) {
    m.doc() = "Bayesian finite mixtures: exact conjugate enumeration, MCMC, "
              "relabeling and marginal-likelihood estimation";

    py::register_exception<UsageError>(m, "UsageError");
    static py::exception<ValidationError> validation_exc(m, "ValidationError");
    py::register_exception<UnsupportedFamilyError>(m, "UnsupportedFamilyError",
                                                   validation_exc.ptr());
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericalError>(m, "NumericalError");
    py::register_exception<ResourceError>(m, "ResourceError");

    py::class_<Dataset>(m, "Dataset")
        .def_static("univariate_real", &Dataset::univariate_real, py::arg("values"))
        .def_static("univariate_count", &Dataset::univariate_count, py::arg("values"))
        .def_static("multinomial_rows", &Dataset::multinomial_rows, py::arg("rows"),
                    py::arg("modalities"))
        .def_static("binary_matrix", &Dataset::binary_matrix, py::arg("rows"),
                    py::arg("variables"))
        .def_readonly("reals", &Dataset::reals)
        .def_readonly("counts", &Dataset::counts)
        .def_readonly("rows", &Dataset::rows)
        .def_readonly("columns", &Dataset::columns)
        .def_property_readonly("kind", [](const Dataset& d) { return kind_name(d.kind); })
        .def("__len__", &Dataset::size);

    py::class_<ComponentFamily>(m, "ComponentFamily")
        .def_property_readonly("name", &ComponentFamily::name)
        .def_property_readonly("param_dim", &ComponentFamily::param_dim)
        .def_property_readonly("is_discrete_conjugate", &ComponentFamily::is_discrete_conjugate);

    m.def("family", &family_from_name, py::arg("name"), py::arg("columns") = 0,
          py::arg("shared_variance") = true,
          "poisson | multinomial | latent-class | normal | student-t");

    py::class_<PriorSpec>(m, "PriorSpec")
        .def_static("default_for", &PriorSpec::default_for, py::arg("family"), py::arg("J"),
                    py::arg("data"))
        .def_readwrite("dirichlet_alpha", &PriorSpec::dirichlet_alpha)
        .def_readwrite("poisson_rate", &PriorSpec::poisson_rate)
        .def_readwrite("categorical_alpha", &PriorSpec::categorical_alpha)
        .def_readwrite("normal_mean", &PriorSpec::normal_mean)
        .def_readwrite("normal_variance_ratio", &PriorSpec::normal_variance_ratio)
        .def_readwrite("normal_precision_rate", &PriorSpec::normal_precision_rate)
        .def_readwrite("t_mu0", &PriorSpec::t_mu0)
        .def_readwrite("t_sigma0sq", &PriorSpec::t_sigma0sq)
        .def_readwrite("t_a_nu", &PriorSpec::t_a_nu)
        .def_readwrite("t_b_nu", &PriorSpec::t_b_nu);

    py::class_<ChainConfig>(m, "ChainConfig")
        .def(py::init<>())
        .def_readwrite("iterations", &ChainConfig::iterations)
        .def_readwrite("burnin", &ChainConfig::burnin)
        .def_readwrite("thin", &ChainConfig::thin)
        .def_readwrite("seed", &ChainConfig::seed)
        .def_readwrite("rw_scale_params", &ChainConfig::rw_scale_params)
        .def_readwrite("rw_scale_nu", &ChainConfig::rw_scale_nu)
        .def_readwrite("store_allocations", &ChainConfig::store_allocations);

    py::class_<Trace>(m, "Trace")
        .def("__len__", &Trace::size)
        .def_readonly("relabeled", &Trace::relabeled)
        .def_readonly("acceptance_rates", &Trace::acceptance_rates)
        .def_property_readonly("column_names",
                               [](const Trace& t) {
                                   const int J = t.draws.empty()
                                                     ? 0
                                                     : t.draws[0].component_count();
                                   return trace_column_names(t.family, J);
                               })
        .def_property_readonly("log_lik", [](const Trace& t) { return double_vector(t.log_lik); })
        .def("matrix", &trace_matrix,
             "draws as a (T, J + J*param_dim) array, columns as in column_names");

    m.def("sample", &run_sampler, py::arg("data"), py::arg("J"), py::arg("family"),
          py::arg("prior"), py::arg("config") = ChainConfig(), py::arg("sampler") = "gibbs",
          py::arg("nu_known") = std::nullopt,
          "Run the Gibbs or random-walk sampler for the given family.");

    m.def("reorder_trace", &reorder_trace, py::arg("trace"), py::arg("prior"),
          "Undo label switching against the highest-posterior draw.");

    m.def(
        "point_estimates",
        [](const Trace& trace) {
            const auto est = point_estimates(trace);
            auto flatten = [](const MixtureParams& p) {
                std::vector<double> out(p.weights);
                for (const auto& theta : p.components)
                    out.insert(out.end(), theta.begin(), theta.end());
                return double_vector(out);
            };
            py::dict d;
            d["mean"] = flatten(est.mean);
            d["sd"] = flatten(est.stddev);
            return d;
        },
        py::arg("trace"), "Posterior means and standard deviations, trace column order.");

    m.def(
        "exact_summary",
        [](const Dataset& data, int J, const ComponentFamily& family, const PriorSpec& prior) {
            const auto table = enumerate_stats(data, J, family);
            py::dict d;
            d["distinct_statistics"] = table.entries.size();
            d["distinct_count_vectors"] = table.distinct_count_vectors();
            d["total_multiplicity"] = table.total_multiplicity().str();
            d["log_marginal"] = exact_log_marginal(table, prior) +
                                log_data_constant(family, data);
            return d;
        },
        py::arg("data"), py::arg("J"), py::arg("family"), py::arg("prior"),
        "Enumerate the sufficient-statistic table; log_marginal includes all "
        "data constants.");

    m.def(
        "exact_weight_posterior",
        [](const Dataset& data, const ComponentFamily& family, const PriorSpec& prior,
           const std::vector<double>& grid) {
            return double_vector(exact_weight_posterior(data, family, prior, grid));
        },
        py::arg("data"), py::arg("family"), py::arg("prior"), py::arg("grid"));

    m.def(
        "chib",
        [](const Trace& trace, const Dataset& data, const PriorSpec& prior, bool symmetrize,
           std::optional<long long> perm_sample, std::uint64_t seed) {
            const auto star = trace.draws[approximate_map(trace, prior)];
            RngStream rng(seed);
            return evidence_dict(
                chib_estimate(trace, star, data, prior, symmetrize, perm_sample, rng));
        },
        py::arg("trace"), py::arg("data"), py::arg("prior"), py::arg("symmetrize") = true,
        py::arg("perm_sample") = std::nullopt, py::arg("seed") = 1,
        "Candidate-point estimator anchored at the highest-posterior draw.");

    m.def(
        "gelfand_dey",
        [](const Trace& trace, const Dataset& data, const PriorSpec& prior,
           const std::string& kind) {
            const auto k = kind == "fitted" ? AuxiliaryDensity::Kind::Fitted
                                            : AuxiliaryDensity::Kind::Gaussian;
            if (kind != "fitted" && kind != "gaussian")
                throw UsageError("auxiliary kind must be 'gaussian' or 'fitted'");
            return evidence_dict(gelfand_dey(trace, fit_auxiliary(trace, k), data, prior));
        },
        py::arg("trace"), py::arg("data"), py::arg("prior"), py::arg("kind") = "gaussian");

    m.def(
        "prior_monte_carlo",
        [](const Dataset& data, int J, const ComponentFamily& family, const PriorSpec& prior,
           long long draws, std::uint64_t seed) {
            RngStream rng(seed);
            return evidence_dict(prior_monte_carlo(data, J, family, prior, draws, rng));
        },
        py::arg("data"), py::arg("J"), py::arg("family"), py::arg("prior"),
        py::arg("draws") = 100000, py::arg("seed") = 1);

    m.def(
        "exact_evidence",
        [](const Dataset& data, int J, const ComponentFamily& family, const PriorSpec& prior) {
            return evidence_dict(exact_evidence(data, J, family, prior));
        },
        py::arg("data"), py::arg("J"), py::arg("family"), py::arg("prior"));

    m.def(
        "simulate_t_benchmark",
        [](std::size_t n, std::uint64_t seed) {
            const auto sim = simulate_t_benchmark(n, seed);
            return py::make_tuple(sim.data, sim.truth.labels);
        },
        py::arg("n"), py::arg("seed") = 1,
        "Two-component t benchmark; returns (dataset, true 0-based labels).");

    m.def("load_univariate", &load_univariate, py::arg("path"), py::arg("scale") = 1.0);
    m.def("load_counts", &load_counts, py::arg("path"));
    m.def("load_binary_matrix", &load_binary_matrix, py::arg("path"), py::arg("columns"));
    m.def("load_multinomial_rows", &load_multinomial_rows, py::arg("path"), py::arg("columns"));
    m.def("write_trace_csv", &write_trace_csv, py::arg("path"), py::arg("trace"));
    m.def("read_trace_csv", &read_trace_csv, py::arg("path"));
}
