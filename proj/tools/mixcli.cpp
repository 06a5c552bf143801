// Command line front end: exact enumeration, MCMC sampling, relabeling,
// marginal-likelihood estimation, and benchmark simulation.
//
// Exit codes: 0 success, 1 usage, 2 data/validation, 3 numerical/resource.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixkit/errors.hpp"
#include "mixkit/evidence.hpp"
#include "mixkit/exact.hpp"
#include "mixkit/io.hpp"
#include "mixkit/mcmc.hpp"
#include "mixkit/model.hpp"
#include "mixkit/relabel.hpp"
#include "mixkit/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mixkit;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string family = "poisson";
    int J = 2;
    bool shared_variance = true;

    std::string data_path;
    std::string data_kind;  // defaults to the family's expected kind
    double scale = 1.0;
    bool standardize = false;
    int columns = 0;

    long long iterations = 10'000;
    long long burnin = -1;
    long long thin = 1;
    std::uint64_t seed = 1;
    double rw_scale = 0.1;
    double rw_scale_nu = 5.0;

    std::string out_dir = "out";
    std::string sampler = "gibbs";
    std::vector<double> nu_fixed;
    int chains = 1;

    int j_min = 0;
    int j_max = 0;
    long long prior_mc_draws = 0;
    long long perm_sample = 0;

    json prior_json;
    std::string config_path;
};

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ValidationError("config: unknown key '" + context + "." + it.key() + "'");
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw DataError("config parse failure: " + std::string(e.what()));
    }
    check_keys(root, {"model", "prior", "mcmc", "data", "output", "evidence"}, "");
    if (root.contains("model")) {
        const json& m = root["model"];
        check_keys(m, {"family", "J", "sharedVariance"}, "model");
        if (m.contains("family")) cfg.family = m["family"].get<std::string>();
        if (m.contains("J")) cfg.J = m["J"].get<int>();
        if (m.contains("sharedVariance")) cfg.shared_variance = m["sharedVariance"].get<bool>();
    }
    if (root.contains("prior")) {
        check_keys(root["prior"],
                   {"dirichletAlpha", "poissonRate", "categoricalAlpha", "normalMean",
                    "normalVarianceRatio", "normalPrecisionRate", "tMu0", "tSigma0sq", "tASigma",
                    "tBSigma", "tANu", "tBNu"},
                   "prior");
        cfg.prior_json = root["prior"];
    }
    if (root.contains("mcmc")) {
        const json& m = root["mcmc"];
        check_keys(m,
                   {"iterations", "burnin", "thin", "seed", "rwScale", "rwScaleNu", "sampler",
                    "chains", "nuFixed"},
                   "mcmc");
        if (m.contains("iterations")) cfg.iterations = m["iterations"].get<long long>();
        if (m.contains("burnin")) cfg.burnin = m["burnin"].get<long long>();
        if (m.contains("thin")) cfg.thin = m["thin"].get<long long>();
        if (m.contains("seed")) cfg.seed = m["seed"].get<std::uint64_t>();
        if (m.contains("rwScale")) cfg.rw_scale = m["rwScale"].get<double>();
        if (m.contains("rwScaleNu")) cfg.rw_scale_nu = m["rwScaleNu"].get<double>();
        if (m.contains("sampler")) cfg.sampler = m["sampler"].get<std::string>();
        if (m.contains("chains")) cfg.chains = m["chains"].get<int>();
        if (m.contains("nuFixed")) cfg.nu_fixed = m["nuFixed"].get<std::vector<double>>();
    }
    if (root.contains("data")) {
        const json& d = root["data"];
        check_keys(d, {"path", "kind", "scale", "standardize", "columns"}, "data");
        if (d.contains("path")) cfg.data_path = d["path"].get<std::string>();
        if (d.contains("kind")) cfg.data_kind = d["kind"].get<std::string>();
        if (d.contains("scale")) cfg.scale = d["scale"].get<double>();
        if (d.contains("standardize")) cfg.standardize = d["standardize"].get<bool>();
        if (d.contains("columns")) cfg.columns = d["columns"].get<int>();
    }
    if (root.contains("output")) {
        const json& o = root["output"];
        check_keys(o, {"dir"}, "output");
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
    }
    if (root.contains("evidence")) {
        const json& e = root["evidence"];
        check_keys(e, {"jMin", "jMax", "priorMcDraws", "permSample"}, "evidence");
        if (e.contains("jMin")) cfg.j_min = e["jMin"].get<int>();
        if (e.contains("jMax")) cfg.j_max = e["jMax"].get<int>();
        if (e.contains("priorMcDraws")) cfg.prior_mc_draws = e["priorMcDraws"].get<long long>();
        if (e.contains("permSample")) cfg.perm_sample = e["permSample"].get<long long>();
    }
}

void standardize_in_place(Dataset& d) {
    double mean = 0.0;
    for (double v : d.reals) mean += v;
    mean /= static_cast<double>(d.reals.size());
    double var = 0.0;
    for (double v : d.reals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d.reals.size() > 1 ? d.reals.size() - 1 : 1);
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) throw DataError("standardize: zero sample variance");
    for (double& v : d.reals) v = (v - mean) / sd;
}

ComponentFamily make_family(const RunConfig& cfg) {
    return family_from_name(cfg.family, cfg.columns, cfg.shared_variance);
}

Dataset load_data(const RunConfig& cfg, const ComponentFamily& family) {
    if (cfg.data_path.empty()) throw UsageError("no data file given (use --data)");
    std::string kind = cfg.data_kind;
    if (kind.empty()) kind = kind_name(family.expected_kind());
    if (kind == "univariate-real") {
        Dataset d = load_univariate(cfg.data_path, cfg.scale);
        if (cfg.standardize) standardize_in_place(d);
        return d;
    }
    if (cfg.standardize) throw UsageError("--standardize applies to real-valued data only");
    if (kind == "univariate-count") return load_counts(cfg.data_path);
    if (kind == "multinomial-rows") {
        if (cfg.columns < 2) throw UsageError("multinomial data needs --columns");
        return load_multinomial_rows(cfg.data_path, cfg.columns);
    }
    if (kind == "binary-matrix") {
        if (cfg.columns < 1) throw UsageError("binary data needs --columns");
        return load_binary_matrix(cfg.data_path, cfg.columns);
    }
    throw ValidationError("unknown data kind: " + kind);
}

std::vector<double> json_real_vector(const json& v, int J, const std::string& what) {
    std::vector<double> out;
    if (v.is_number()) {
        out.assign(static_cast<std::size_t>(J), v.get<double>());
    } else {
        out = v.get<std::vector<double>>();
        if (static_cast<int>(out.size()) != J)
            throw ValidationError("prior: " + what + " length must equal J");
    }
    return out;
}

PriorSpec make_prior(const RunConfig& cfg, const ComponentFamily& family, int J,
                     const Dataset& data) {
    PriorSpec prior = PriorSpec::default_for(family, J, data);
    const json& p = cfg.prior_json;
    if (p.is_null() || p.empty()) return prior;
    if (p.contains("dirichletAlpha"))
        prior.dirichlet_alpha = json_real_vector(p["dirichletAlpha"], J, "dirichletAlpha");
    if (p.contains("poissonRate"))
        prior.poisson_rate = json_real_vector(p["poissonRate"], J, "poissonRate");
    if (p.contains("categoricalAlpha")) prior.categorical_alpha = p["categoricalAlpha"].get<double>();
    if (p.contains("normalMean")) prior.normal_mean = p["normalMean"].get<double>();
    if (p.contains("normalVarianceRatio"))
        prior.normal_variance_ratio = p["normalVarianceRatio"].get<double>();
    if (p.contains("normalPrecisionRate"))
        prior.normal_precision_rate = p["normalPrecisionRate"].get<double>();
    if (p.contains("tMu0")) prior.t_mu0 = p["tMu0"].get<double>();
    if (p.contains("tSigma0sq")) prior.t_sigma0sq = p["tSigma0sq"].get<double>();
    if (p.contains("tASigma")) prior.t_a_sigma = p["tASigma"].get<double>();
    if (p.contains("tBSigma")) prior.t_b_sigma = p["tBSigma"].get<double>();
    if (p.contains("tANu")) prior.t_a_nu = p["tANu"].get<double>();
    if (p.contains("tBNu")) prior.t_b_nu = p["tBNu"].get<double>();
    validate_prior(prior, family, J);
    return prior;
}

ChainConfig make_chain_config(const RunConfig& cfg, std::uint64_t seed, bool store_allocations) {
    ChainConfig cc;
    cc.iterations = cfg.iterations;
    cc.burnin = cfg.burnin;
    cc.thin = cfg.thin;
    cc.seed = seed;
    cc.rw_scale_params = cfg.rw_scale;
    cc.rw_scale_nu = cfg.rw_scale_nu;
    cc.store_allocations = store_allocations;
    return cc;
}

Trace run_sampler(const RunConfig& cfg, const ComponentFamily& family, int J,
                  const Dataset& data, const PriorSpec& prior, std::uint64_t seed,
                  bool store_allocations) {
    const ChainConfig cc = make_chain_config(cfg, seed, store_allocations);
    if (cfg.sampler == "mh") return mh_mixture(data, J, family, prior, cc);
    if (cfg.sampler != "gibbs") throw UsageError("unknown sampler: " + cfg.sampler);
    switch (family.tag) {
        case FamilyTag::Normal:
            return gibbs_normal_mixture(data, J, prior, cc);
        case FamilyTag::StudentT: {
            std::optional<std::vector<double>> nu;
            if (!cfg.nu_fixed.empty()) nu = cfg.nu_fixed;
            return gibbs_t_mixture(data, J, prior, nu, cc);
        }
        default:
            return gibbs_conjugate_mixture(data, J, family, prior, cc);
    }
}

void write_cli_manifest(const RunConfig& cfg, const std::string& command, const Dataset* data) {
    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("command", command);
    m.emplace_back("version", kVersion);
    m.emplace_back("family", cfg.family);
    m.emplace_back("J", std::to_string(cfg.J));
    m.emplace_back("seed", std::to_string(cfg.seed));
    m.emplace_back("iterations", std::to_string(cfg.iterations));
    m.emplace_back("burnin", std::to_string(cfg.burnin));
    m.emplace_back("thin", std::to_string(cfg.thin));
    m.emplace_back("sampler", cfg.sampler);
    m.emplace_back("chains", std::to_string(cfg.chains));
    m.emplace_back("scale", format_double(cfg.scale));
    m.emplace_back("standardize", cfg.standardize ? "true" : "false");
    if (!cfg.config_path.empty()) m.emplace_back("config", cfg.config_path);
    if (!cfg.prior_json.is_null() && !cfg.prior_json.empty())
        m.emplace_back("prior", cfg.prior_json.dump());
    if (data != nullptr && !cfg.data_path.empty()) {
        const DataManifest dm = manifest_for(cfg.data_path, *data);
        m.emplace_back("data.path", dm.path);
        m.emplace_back("data.kind", kind_name(dm.kind));
        m.emplace_back("data.n", std::to_string(dm.n));
        m.emplace_back("data.checksum", dm.checksum);
    }
    write_manifest((fs::path(cfg.out_dir) / "manifest.txt").string(), m);
}

// Parameter names for the human summary; the shared variance appears once.
std::vector<std::pair<std::string, std::vector<double>>> summary_series(const Trace& trace) {
    std::vector<std::pair<std::string, std::vector<double>>> series;
    if (trace.size() == 0) return series;
    const int J = trace.draws[0].component_count();
    const auto names = trace_column_names(trace.family, J);
    const bool shared = trace.family.tag == FamilyTag::Normal && trace.family.shared_variance;
    std::size_t c = 0;
    auto add = [&](const std::string& name, auto getter) {
        std::vector<double> v(trace.size());
        for (std::size_t t = 0; t < trace.size(); ++t) v[t] = getter(trace.draws[t]);
        series.emplace_back(name, std::move(v));
    };
    for (int j = 0; j < J; ++j, ++c)
        add(names[c], [j](const MixtureParams& d) { return d.weights[j]; });
    const int dim = trace.family.param_dim();
    for (int j = 0; j < J; ++j) {
        for (int k = 0; k < dim; ++k, ++c) {
            if (shared && k == 1) {
                if (j == 0)
                    add("sigma2", [](const MixtureParams& d) { return d.components[0][1]; });
                continue;
            }
            add(names[c], [j, k](const MixtureParams& d) { return d.components[j][k]; });
        }
    }
    return series;
}

void write_histogram(const std::string& path, const std::vector<double>& values, int bins = 30) {
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi == lo) hi = lo + 1.0;
    std::vector<long long> count(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++count[b];
    }
    std::ofstream out(path);
    out << "bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b)
        out << format_double(lo + (hi - lo) * b / bins) << ","
            << format_double(lo + (hi - lo) * (b + 1) / bins) << "," << count[b] << "\n";
}

void write_point_summary(std::ostream& out, const Trace& trace) {
    out << "parameter,mean,sd\n";
    for (const auto& [name, values] : summary_series(trace)) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size() > 1 ? values.size() - 1 : 1);
        out << name << "," << format_double(mean) << "," << format_double(std::sqrt(var)) << "\n";
    }
}

int cmd_exact(const RunConfig& cfg) {
    const ComponentFamily family = make_family(cfg);
    if (!family.is_discrete_conjugate())
        throw UnsupportedFamilyError("exact enumeration needs a discrete conjugate family");
    const Dataset data = load_data(cfg, family);
    const PriorSpec prior = make_prior(cfg, family, cfg.J, data);

    fs::create_directories(cfg.out_dir);
    const StatTable table = enumerate_stats(data, cfg.J, family);
    {
        std::ofstream out(fs::path(cfg.out_dir) / "stats_table.csv");
        out << stat_table_csv(table, prior);
    }
    const LogValue lm = exact_log_marginal(table, prior);
    const LogValue data_const = log_data_constant(family, data);

    if (cfg.J == 2) {
        std::vector<double> grid;
        for (int i = 1; i < 200; ++i) grid.push_back(i / 200.0);
        const auto density = exact_weight_posterior(data, family, prior, grid);
        std::ofstream out(fs::path(cfg.out_dir) / "weight_posterior.csv");
        out << "p1,density\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << format_double(grid[i]) << "," << format_double(density[i]) << "\n";
    }

    std::ofstream out(fs::path(cfg.out_dir) / "summary.txt");
    out << "family=" << family.name() << " J=" << cfg.J << " n=" << data.size() << "\n";
    out << "distinct statistics: " << table.entries.size() << "\n";
    out << "distinct count vectors: " << table.distinct_count_vectors() << "\n";
    out << "total multiplicity: " << table.total_multiplicity().str() << "\n";
    out << "exact log marginal (data constant excluded): " << format_double(lm) << "\n";
    out << "exact log marginal (data constant included): " << format_double(lm + data_const)
        << "\n";
    out << "top partitions (counts | stats | multiplicity | log weight | posterior mass):\n";
    for (const auto& rp : top_partitions(data, cfg.J, family, prior, 10)) {
        out << "  ";
        for (std::size_t j = 0; j < rp.stat.counts.size(); ++j)
            out << (j ? "," : "") << rp.stat.counts[j];
        out << " | ";
        for (std::size_t k = 0; k < rp.stat.stats.size(); ++k)
            out << (k ? "," : "") << rp.stat.stats[k];
        out << " | " << rp.multiplicity.str() << " | " << format_double(rp.log_weight) << " | "
            << format_double(std::exp(rp.log_posterior_mass)) << "\n";
    }
    write_cli_manifest(cfg, "exact", &data);
    return 0;
}

int cmd_sample(const RunConfig& cfg) {
    const ComponentFamily family = make_family(cfg);
    const Dataset data = load_data(cfg, family);
    const PriorSpec prior = make_prior(cfg, family, cfg.J, data);
    if (cfg.chains < 1) throw UsageError("--chains must be >= 1");

    fs::create_directories(cfg.out_dir);
    std::vector<Trace> traces(cfg.chains);
    {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> failures(cfg.chains);
        for (int c = 0; c < cfg.chains; ++c) {
            workers.emplace_back([&, c]() {
                try {
                    traces[c] = run_sampler(cfg, family, cfg.J, data, prior,
                                            cfg.seed + static_cast<std::uint64_t>(c), false);
                } catch (...) {
                    failures[c] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    for (int c = 0; c < cfg.chains; ++c) {
        const std::string name = c == 0 ? "trace.csv" : "trace.chain" + std::to_string(c + 1) +
                                                            ".csv";
        write_trace_csv((fs::path(cfg.out_dir) / name).string(), traces[c]);
    }
    const Trace relabeled = reorder_trace(traces[0], prior);
    write_trace_csv((fs::path(cfg.out_dir) / "trace_relabeled.csv").string(), relabeled);

    for (const auto& [name, values] : summary_series(relabeled))
        write_histogram((fs::path(cfg.out_dir) / ("hist_" + name + ".csv")).string(), values);

    std::ofstream out(fs::path(cfg.out_dir) / "summary.txt");
    out << "family=" << family.name() << " J=" << cfg.J << " n=" << data.size()
        << " draws=" << relabeled.size() << "\n";
    for (const auto& [block, rate] : traces[0].acceptance_rates)
        out << "acceptance." << block << "=" << format_double(rate) << "\n";
    out << "relabeled point estimates:\n";
    write_point_summary(out, relabeled);
    for (int c = 1; c < cfg.chains; ++c) {
        out << "chain " << (c + 1) << " (raw) point estimates:\n";
        write_point_summary(out, traces[c]);
    }
    write_cli_manifest(cfg, "sample", &data);
    return 0;
}

int cmd_evidence(const RunConfig& cfg) {
    const ComponentFamily family = make_family(cfg);
    const Dataset data = load_data(cfg, family);
    const int j_lo = cfg.j_min > 0 ? cfg.j_min : cfg.J;
    const int j_hi = cfg.j_max > 0 ? cfg.j_max : j_lo;
    if (j_hi < j_lo) throw UsageError("evidence: empty J range");

    fs::create_directories(cfg.out_dir);
    std::ofstream table(fs::path(cfg.out_dir) / "evidence.csv");
    table << "J,method,log_marginal,permutations,mc_std_err,delta_sym_minus_plain,verdict\n";
    std::ofstream summary(fs::path(cfg.out_dir) / "summary.txt");

    auto emit = [&](int J, const EvidenceResult& r, const MixingDiagnostic* diag) {
        table << J << "," << evidence_method_name(r.method) << ","
              << format_double(r.log_marginal) << "," << r.permutations_used << ","
              << (r.mc_std_err ? format_double(*r.mc_std_err) : "") << ","
              << (diag ? format_double(diag->delta) : "") << ","
              << (diag ? diag->verdict : "") << "\n";
        summary << "J=" << J << " " << evidence_method_name(r.method) << ": "
                << format_double(r.log_marginal);
        if (r.mc_std_err) summary << " (mc se " << format_double(*r.mc_std_err) << ")";
        if (diag)
            summary << " [delta=" << format_double(diag->delta) << " logJ!="
                    << format_double(diag->log_j_factorial) << " " << diag->verdict << "]";
        if (r.variance_warning) summary << " [variance warning]";
        summary << "\n";
    };

    double best_value = -std::numeric_limits<double>::infinity();
    int best_j = j_lo;
    for (int J = j_lo; J <= j_hi; ++J) {
        const PriorSpec prior = make_prior(cfg, family, J, data);
        std::optional<double> headline;

        // Exact enumeration is attempted only where it is cheap: J=1 is a
        // single table entry, and small discrete samples stay well under
        // the entry cap. Larger problems go straight to the estimators.
        const bool have_exact =
            (family.is_discrete_conjugate() && (J == 1 || data.size() <= 40)) ||
            (family.tag == FamilyTag::Normal && family.shared_variance && J == 1);
        if (have_exact) {
            bool feasible = true;
            EvidenceResult ex;
            try {
                ex = exact_evidence(data, J, family, prior);
            } catch (const ResourceError&) {
                feasible = false;  // table too large; fall back to the estimators
            }
            if (feasible) {
                emit(J, ex, nullptr);
                headline = ex.log_marginal;
            }
        }

        if (J > 1 || !headline) {
            RunConfig run = cfg;
            run.sampler = "gibbs";
            const Trace trace = run_sampler(run, family, J, data, prior,
                                            cfg.seed + static_cast<std::uint64_t>(J), true);
            const MixtureParams lambda_star = trace.draws[approximate_map(trace, prior)];
            RngStream rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
            const EvidenceResult plain =
                chib_estimate(trace, lambda_star, data, prior, false, std::nullopt, rng);
            std::optional<long long> perm_sample;
            if (cfg.perm_sample > 0) perm_sample = cfg.perm_sample;
            EvidenceResult sym =
                chib_estimate(trace, lambda_star, data, prior, true, perm_sample, rng);
            sym.mixing_discrepancy = plain.log_marginal - sym.log_marginal;
            const MixingDiagnostic diag = mixing_diagnostic(plain, sym, J);
            emit(J, plain, nullptr);
            emit(J, sym, &diag);
            if (!headline) headline = sym.log_marginal;

            if (cfg.prior_mc_draws > 0) {
                RngStream mc_rng(cfg.seed + 1000003ull * static_cast<std::uint64_t>(J));
                emit(J, prior_monte_carlo(data, J, family, prior, cfg.prior_mc_draws, mc_rng),
                     nullptr);
            }
        }
        if (headline && *headline > best_value) {
            best_value = *headline;
            best_j = J;
        }
    }
    summary << "recommended J: " << best_j << " (log marginal " << format_double(best_value)
            << ")\n";
    write_cli_manifest(cfg, "evidence", &data);
    return 0;
}

int cmd_relabel(const RunConfig& cfg, const std::string& trace_path) {
    Trace trace = read_trace_csv(trace_path);
    const int J = trace.draws.empty() ? 0 : trace.draws[0].component_count();
    if (J == 0) throw DataError("relabel: empty trace file");

    Dataset data;
    if (!cfg.data_path.empty()) {
        data = load_data(cfg, trace.family);
    } else if (trace.family.tag == FamilyTag::StudentT) {
        throw UsageError("relabel: the t model needs --data for its default prior");
    } else {
        data.kind = trace.family.expected_kind();  // defaults do not depend on the data
    }
    RunConfig pc = cfg;
    const PriorSpec prior = make_prior(pc, trace.family, J, data);

    fs::create_directories(cfg.out_dir);
    const Trace relabeled = reorder_trace(trace, prior);
    write_trace_csv((fs::path(cfg.out_dir) / "trace_relabeled.csv").string(), relabeled);
    std::ofstream out(fs::path(cfg.out_dir) / "summary.txt");
    out << "family=" << trace.family.name() << " J=" << J << " draws=" << relabeled.size() << "\n";
    out << "relabeled point estimates:\n";
    write_point_summary(out, relabeled);
    write_cli_manifest(cfg, "relabel", nullptr);
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::string& preset, long long n, long long k) {
    fs::create_directories(cfg.out_dir);
    if (preset == "t-benchmark") {
        const SimulatedData sim = simulate_t_benchmark(static_cast<std::size_t>(n), cfg.seed);
        save_dataset((fs::path(cfg.out_dir) / "simulated.txt").string(), sim.data);
        std::ofstream out(fs::path(cfg.out_dir) / "truth_labels.txt");
        for (int z : sim.truth.labels) out << (z + 1) << "\n";
    } else if (preset == "stouffer-subset") {
        if (cfg.data_path.empty()) throw UsageError("stouffer-subset needs --data");
        const Dataset full = load_binary_matrix(cfg.data_path, cfg.columns > 0 ? cfg.columns : 4);
        const Dataset sub = subsample_rows(full, static_cast<std::size_t>(k), cfg.seed);
        save_dataset((fs::path(cfg.out_dir) / "simulated.txt").string(), sub);
    } else {
        throw UsageError("unknown preset: " + preset + " (t-benchmark, stouffer-subset)");
    }
    write_cli_manifest(cfg, "simulate", nullptr);
    return 0;
}

std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc - 1; ++i)
        if (std::string(argv[i]) == "--config") return argv[i + 1];
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        cfg.config_path = find_config_arg(argc, argv);
        if (!cfg.config_path.empty()) apply_config_file(cfg, cfg.config_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"Finite mixture inference: exact enumeration, MCMC, relabeling, evidence"};
    app.require_subcommand(1);
    std::string config_path = cfg.config_path;
    app.add_option("--config", config_path, "structured configuration file");

    auto add_common = [&](CLI::App* sub) {
        // Accepted here too so it can follow the subcommand; already loaded
        // by the pre-scan above.
        sub->add_option("--config", config_path, "structured configuration file");
        sub->add_option("--family", cfg.family, "poisson|multinomial|latent-class|normal|student-t");
        sub->add_option("--J", cfg.J, "number of components");
        sub->add_option("--data", cfg.data_path, "observation file");
        sub->add_option("--kind", cfg.data_kind, "dataset kind override");
        sub->add_option("--scale", cfg.scale, "multiplier applied to real observations");
        sub->add_flag("--standardize", cfg.standardize,
                      "center and scale real observations to unit variance");
        sub->add_option("--columns", cfg.columns, "columns for matrix data");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "random seed");
    };
    auto add_mcmc = [&](CLI::App* sub) {
        sub->add_option("--iterations", cfg.iterations, "MCMC iterations");
        sub->add_option("--burnin", cfg.burnin, "burn-in (default 10% of iterations)");
        sub->add_option("--thin", cfg.thin, "thinning stride");
        sub->add_option("--sampler", cfg.sampler, "gibbs|mh");
        sub->add_option("--rw-scale", cfg.rw_scale, "random-walk scale");
        sub->add_option("--rw-scale-nu", cfg.rw_scale_nu, "log-nu random-walk scale");
        sub->add_option("--nu", cfg.nu_fixed, "fixed degrees of freedom (t model)");
    };

    CLI::App* exact = app.add_subcommand("exact", "exact enumeration for conjugate mixtures");
    add_common(exact);

    CLI::App* sample = app.add_subcommand("sample", "run an MCMC sampler and relabel its trace");
    add_common(sample);
    add_mcmc(sample);
    sample->add_option("--chains", cfg.chains, "independent chains");

    CLI::App* evidence = app.add_subcommand("evidence", "marginal likelihood estimation over J");
    add_common(evidence);
    add_mcmc(evidence);
    evidence->add_option("--j-min", cfg.j_min, "smallest J");
    evidence->add_option("--j-max", cfg.j_max, "largest J");
    evidence->add_option("--prior-mc-draws", cfg.prior_mc_draws, "prior Monte Carlo draws");
    evidence->add_option("--perm-sample", cfg.perm_sample, "permutation subset size");

    std::string trace_path = "trace.csv";
    CLI::App* relabel = app.add_subcommand("relabel", "relabel an existing trace file");
    add_common(relabel);
    relabel->add_option("--trace", trace_path, "trace CSV to relabel");

    std::string preset = "t-benchmark";
    long long sim_n = 2000, sim_k = 50;
    CLI::App* simulate = app.add_subcommand("simulate", "generate benchmark datasets");
    add_common(simulate);
    simulate->add_option("--preset", preset, "t-benchmark|stouffer-subset");
    simulate->add_option("--n", sim_n, "observations to simulate");
    simulate->add_option("--k", sim_k, "subset size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (exact->parsed()) return cmd_exact(cfg);
        if (sample->parsed()) return cmd_sample(cfg);
        if (evidence->parsed()) return cmd_evidence(cfg);
        if (relabel->parsed()) return cmd_relabel(cfg, trace_path);
        if (simulate->parsed()) return cmd_simulate(cfg, preset, sim_n, sim_k);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << " (cap " << e.entry_cap << ")\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
