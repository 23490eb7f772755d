// Batch front end: simulate | fit | summarize | compare.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgm/basis.hpp"
#include "fgm/io.hpp"
#include "fgm/sampler.hpp"
#include "fgm/simgen.hpp"
#include "fgm/summaries.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fgm::SimSpec preset_spec(const std::string& preset) {
    const auto catalog = fgm::default_true_graphs();
    fgm::SimSpec spec;
    if (preset == "sim1" || preset == "sim2") {
        spec.true_edges = catalog.six_node.edges();
    } else if (preset == "sim3") {
        spec.p = 60;
        spec.n = 55;
        spec.true_edges = catalog.sixty_node.edges();
    } else {
        throw ConfigError("unknown preset: " + preset);
    }
    return spec;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& spec_file, const std::string& preset,
                 const std::string& out_dir, std::uint64_t seed, bool noisy,
                 double noise_mean, double noise_var) {
    const auto t0 = std::chrono::steady_clock::now();
    fgm::SimSpec spec;
    if (!spec_file.empty())
        spec = fgm::io::read_simspec(spec_file);
    else if (!preset.empty())
        spec = preset_spec(preset);
    else
        throw ConfigError("simulate needs --spec or --preset");
    if (preset == "sim2") noisy = true;
    spec.seed = seed;

    fgm::Rng rng(spec.seed);
    const fgm::SimOutput sim = fgm::gen_smooth_dataset(spec, rng);
    const fgm::FunctionalDataset out_data =
        noisy ? fgm::add_noise(sim.data, noise_mean, noise_var, rng) : sim.data;

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    fgm::io::write_functional(dir / "data.csv", out_data);
    fgm::io::write_graph(dir / "truth_graph.txt", sim.truth.graph);
    fgm::io::write_matrix(dir / "truth_covariance.csv", sim.truth.covariance,
                          sim.truth.layout);
    fgm::io::write_text(dir / "spec.json", fgm::io::simspec_to_json(spec) + "\n");

    json config = json::parse(fgm::io::simspec_to_json(spec));
    config["noisy"] = noisy;
    if (noisy) {
        config["noise_mean"] = noise_mean;
        config["noise_var"] = noise_var;
    }
    fgm::io::write_manifest(dir, "simulate", config.dump(), spec.seed, seconds_since(t0));
    return 0;
}

// --------------------------------------------------------------------- fit

struct FitOptions {
    std::string data_dir;
    std::string out_dir;
    std::string mode = "smooth";   // smooth | noisy
    std::string basis = "fpca";    // fpca | fourier | scores
    double fve = 0.9;
    int delta = 5;
    int fourier_trunc = 5;
    int iters = 5000;
    int burnin = 1000;
    double q = 0.0;
    std::uint64_t seed = 0;
    int chains = 1;
    bool simplified_ratio = false;
};

// basis extraction producing coefficients, HIW scale diag(lambda-hat), and
// per-node noise variances for the noisy mode
struct FitInputs {
    fgm::CoefficientDataset coeffs;
    fgm::HiwParams params;
    std::vector<double> noise_s2;
};

FitInputs prepare_fit(const FitOptions& opt) {
    const fs::path dir(opt.data_dir);
    FitInputs in;

    if (opt.basis == "scores") {
        in.coeffs = fgm::io::read_coefficients(dir / "coeffs.csv");
        const Eigen::MatrixXd centered =
            in.coeffs.samples.rowwise() - in.coeffs.samples.colwise().mean();
        Eigen::VectorXd var =
            centered.colwise().squaredNorm().transpose() / double(in.coeffs.n() - 1);
        in.params = fgm::HiwParams(opt.delta, var.asDiagonal());
        return in;
    }

    const fgm::FunctionalDataset data = fgm::io::read_functional(dir / "data.csv");
    const int p = data.node_count();
    if (opt.mode == "noisy") in.noise_s2 = fgm::estimate_noise_variance(data);

    if (opt.basis == "fpca") {
        const fgm::FpcaResult fp =
            opt.mode == "noisy" ? fgm::fpca(data, in.noise_s2) : fgm::fpca(data);
        std::vector<int> m(p);
        for (int j = 0; j < p; ++j)
            m[j] = fgm::fve_truncate(fp.system.eigenvalues[j], opt.fve);
        fgm::BlockLayout layout(m);
        Eigen::MatrixXd samples(data.sample_count(), layout.total);
        Eigen::VectorXd lambda(layout.total);
        for (int j = 0; j < p; ++j) {
            samples.middleCols(layout.offsets[j], m[j]) = fp.scores[j].leftCols(m[j]);
            lambda.segment(layout.offsets[j], m[j]) = fp.system.eigenvalues[j].head(m[j]);
        }
        in.coeffs = fgm::CoefficientDataset(std::move(samples),
                                            Eigen::VectorXd::Zero(layout.total), layout);
        in.params = fgm::HiwParams(opt.delta, lambda.asDiagonal());
        return in;
    }

    if (opt.basis == "fourier") {
        std::vector<int> m(p, opt.fourier_trunc);
        const auto scores = fgm::project_fourier(data, m, /*center=*/true);
        fgm::BlockLayout layout(m);
        Eigen::MatrixXd samples(data.sample_count(), layout.total);
        for (int j = 0; j < p; ++j)
            samples.middleCols(layout.offsets[j], m[j]) = scores[j];
        const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
        Eigen::VectorXd var =
            centered.colwise().squaredNorm().transpose() / double(samples.rows() - 1);
        in.coeffs = fgm::CoefficientDataset(std::move(samples),
                                            Eigen::VectorXd::Zero(layout.total), layout);
        in.params = fgm::HiwParams(opt.delta, var.asDiagonal());
        return in;
    }

    throw ConfigError("unknown basis: " + opt.basis);
}

int cmd_fit(const FitOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.mode != "smooth" && opt.mode != "noisy")
        throw ConfigError("mode must be smooth or noisy");

    const FitInputs in = prepare_fit(opt);
    const int p = in.coeffs.layout.node_count();

    fgm::McmcConfig config;
    config.iterations = opt.iters;
    config.burn_in = opt.burnin;
    config.global_prob = (p <= config.p_enum_max) ? opt.q : 0.0;
    config.prior = fgm::GraphPrior::default_bernoulli(p);
    config.chains = opt.chains;
    config.simplified_proposal_ratio = opt.simplified_ratio;
    config.validate();

    const fgm::DecomposableGraph initial(p, {});
    std::optional<fgm::NoiseModel> noise;
    if (opt.mode == "noisy")
        noise = fgm::NoiseModel::from_node_variances(in.noise_s2, in.coeffs.layout);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);

    std::vector<fgm::ChainTrace> traces(opt.chains);
    std::vector<std::exception_ptr> errors(opt.chains);
    auto run_chain = [&](int c) {
        try {
            fgm::McmcConfig cc = config;
            cc.seed = opt.seed + std::uint64_t(c);
            traces[c] = noise ? fgm::run_algorithm2(in.coeffs, in.params, *noise, cc, initial)
                              : fgm::run_algorithm1(in.coeffs, in.params, cc, initial);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };
    if (opt.chains == 1) {
        run_chain(0);
    } else {
        std::vector<std::thread> workers;
        for (int c = 0; c < opt.chains; ++c) workers.emplace_back(run_chain, c);
        for (auto& w : workers) w.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (int c = 0; c < opt.chains; ++c)
        fgm::io::write_trace(dir / ("trace_" + std::to_string(c) + ".jsonl"), traces[c]);

    json config_json{{"mode", opt.mode},       {"basis", opt.basis},
                     {"fve", opt.fve},         {"delta", opt.delta},
                     {"iters", opt.iters},     {"burnin", opt.burnin},
                     {"q", config.global_prob},{"chains", opt.chains},
                     {"data_dir", opt.data_dir},
                     {"truncations", in.coeffs.layout.truncations}};
    fgm::io::write_manifest(dir, "fit", config_json.dump(), opt.seed, seconds_since(t0));
    return 0;
}

// --------------------------------------------------------------- summarize

fgm::ChainTrace read_merged_traces(const fs::path& dir) {
    fgm::ChainTrace merged;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("trace_", 0) == 0 && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw fgm::io::IoError("no trace files in " + dir.string());
    for (const auto& f : files) {
        fgm::ChainTrace t = fgm::io::read_trace(f);
        if (merged.p == 0) {
            merged.p = t.p;
            merged.seed = t.seed;
        } else if (merged.p != t.p) {
            throw fgm::io::IoError("trace files disagree on node count");
        }
        merged.graphs.insert(merged.graphs.end(), t.graphs.begin(), t.graphs.end());
        merged.log_posts.insert(merged.log_posts.end(), t.log_posts.begin(),
                                t.log_posts.end());
        merged.accepts.insert(merged.accepts.end(), t.accepts.begin(), t.accepts.end());
    }
    return merged;
}

int cmd_summarize(const std::string& trace_dir, const std::string& truth_file,
                  const std::string& metadata_file, double tau,
                  const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const fgm::ChainTrace trace = read_merged_traces(trace_dir);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    const fgm::EdgeProbMatrix probs = fgm::inclusion_probs(trace);
    fgm::io::write_matrix_plain(dir / "inclusion_probs.csv", probs);

    {
        std::ostringstream os;
        os << std::setprecision(17) << "sweep,log_post,accepted\n";
        for (int s = 0; s < trace.size(); ++s)
            os << s << "," << trace.log_posts[s] << "," << int(trace.accepts[s]) << "\n";
        fgm::io::write_text(dir / "log_posterior.csv", os.str());
    }

    {
        // thresholded edge set as DOT (summary only; may be non-chordal)
        std::ostringstream os;
        os << "graph G {\n";
        for (int v = 0; v < trace.p; ++v) os << "  " << (v + 1) << ";\n";
        for (const auto& e : fgm::threshold_graph(probs, tau))
            os << "  " << (e.a + 1) << " -- " << (e.b + 1) << ";\n";
        os << "}\n";
        fgm::io::write_text(dir / "thresholded.dot", os.str());
    }

    if (!truth_file.empty()) {
        const fgm::DecomposableGraph truth = fgm::io::read_graph(truth_file);
        const fgm::AccuracyStats acc = fgm::accuracy_stats(trace, truth);
        std::ostringstream os;
        os << std::setprecision(17) << "MisR,Sen,Spec,nEdge\n"
           << acc.mis_rate << "," << acc.sensitivity << "," << acc.specificity << ","
           << acc.mean_edges << "\n";
        fgm::io::write_text(dir / "accuracy.csv", os.str());
    }

    if (!metadata_file.empty()) {
        const fgm::NodeMetadata meta = fgm::io::read_metadata(metadata_file, trace.p);
        const fgm::RegionStats rs = fgm::region_asymmetry_stats(trace, meta);
        std::ostringstream os;
        os << std::setprecision(17) << "sweep,total_edges,total_asymmetric";
        for (const auto& r : rs.regions) os << ",edges_" << r << ",asym_" << r;
        os << "\n";
        for (int s = 0; s < trace.size(); ++s) {
            os << s << "," << rs.total_edges(s) << "," << rs.total_asymmetric(s);
            for (std::size_t r = 0; r < rs.regions.size(); ++r)
                os << "," << rs.edges_by_region(s, r) << ","
                   << rs.asymmetric_by_region(s, r);
            os << "\n";
        }
        fgm::io::write_text(dir / "region_stats.csv", os.str());
    }

    json config{{"trace_dir", trace_dir}, {"tau", tau}};
    if (!truth_file.empty()) config["truth"] = truth_file;
    if (!metadata_file.empty()) config["metadata"] = metadata_file;
    fgm::io::write_manifest(dir, "summarize", config.dump(), trace.seed, seconds_since(t0));
    return 0;
}

// ----------------------------------------------------------------- compare

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& metadata_file, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const fgm::ChainTrace a = read_merged_traces(dir_a);
    const fgm::ChainTrace b = read_merged_traces(dir_b);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::ostringstream os;
    os << std::setprecision(17) << "statistic,prob_a_greater,prob_equal,prob_a_less\n";
    auto emit = [&os](const std::string& name, const fgm::GroupComparison& gc) {
        os << name << "," << gc.prob_greater << "," << gc.prob_equal << ","
           << gc.prob_less << "\n";
    };

    auto edge_totals = [](const fgm::ChainTrace& t) {
        Eigen::VectorXd v(t.size());
        for (int s = 0; s < t.size(); ++s) v(s) = double(t.graphs[s].size());
        return v;
    };
    emit("total_edges", fgm::compare_groups(edge_totals(a), edge_totals(b)));

    if (!metadata_file.empty()) {
        if (a.p != b.p) throw fgm::io::IoError("trace groups disagree on node count");
        const fgm::NodeMetadata meta = fgm::io::read_metadata(metadata_file, a.p);
        const fgm::RegionStats ra = fgm::region_asymmetry_stats(a, meta);
        const fgm::RegionStats rb = fgm::region_asymmetry_stats(b, meta);
        emit("total_asymmetric",
             fgm::compare_groups(ra.total_asymmetric, rb.total_asymmetric));
        for (std::size_t r = 0; r < ra.regions.size(); ++r) {
            emit("edges_" + ra.regions[r],
                 fgm::compare_groups(ra.edges_by_region.col(r), rb.edges_by_region.col(r)));
            emit("asym_" + ra.regions[r],
                 fgm::compare_groups(ra.asymmetric_by_region.col(r),
                                     rb.asymmetric_by_region.col(r)));
        }
    }
    fgm::io::write_text(dir / "group_comparison.csv", os.str());

    json config{{"trace_a", dir_a}, {"trace_b", dir_b}};
    if (!metadata_file.empty()) config["metadata"] = metadata_file;
    fgm::io::write_manifest(dir, "compare", config.dump(), a.seed, seconds_since(t0));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-structure inference for multivariate functional data"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
    std::string sim_spec, sim_preset, sim_out = "out_sim";
    std::uint64_t sim_seed = 0;
    bool sim_noisy = false;
    double noise_mean = 2.5, noise_var = 0.5;
    sim->add_option("--spec", sim_spec, "spec file (JSON or key=value)");
    sim->add_option("--preset", sim_preset, "sim1 | sim2 | sim3");
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_flag("--noisy", sim_noisy, "add white noise to the curves");
    sim->add_option("--noise-mean", noise_mean, "mean of the per-curve noise variance");
    sim->add_option("--noise-var", noise_var, "variance of the per-curve noise variance");

    // fit
    auto* fit = app.add_subcommand("fit", "run the graph sampler on a dataset");
    FitOptions fo;
    fit->add_option("--data", fo.data_dir, "dataset directory")->required();
    fit->add_option("--out", fo.out_dir, "output directory")->required();
    fit->add_option("--mode", fo.mode, "smooth | noisy");
    fit->add_option("--basis", fo.basis, "fpca | fourier | scores");
    fit->add_option("--fve", fo.fve, "fraction-of-variance threshold (fpca)");
    fit->add_option("--delta", fo.delta, "prior degrees of freedom");
    fit->add_option("--trunc", fo.fourier_trunc, "per-node truncation (fourier)");
    fit->add_option("--iters", fo.iters, "total sweeps");
    fit->add_option("--burnin", fo.burnin, "burn-in sweeps");
    fit->add_option("--q", fo.q, "global proposal probability");
    fit->add_option("--seed", fo.seed, "RNG seed");
    fit->add_option("--chains", fo.chains, "number of concurrent chains");
    fit->add_flag("--simplified-ratio", fo.simplified_ratio,
                  "use the closed-form local proposal ratio");

    // summarize
    auto* summ = app.add_subcommand("summarize", "report posterior summaries");
    std::string su_trace, su_truth, su_meta, su_out = "out_summary";
    double su_tau = 0.5;
    summ->add_option("--trace", su_trace, "trace directory")->required();
    summ->add_option("--truth", su_truth, "ground-truth graph file");
    summ->add_option("--metadata", su_meta, "node metadata CSV");
    summ->add_option("--tau", su_tau, "inclusion-probability threshold");
    summ->add_option("--out", su_out, "output directory");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare two fitted groups");
    std::string cp_a, cp_b, cp_meta, cp_out = "out_compare";
    cmp->add_option("--trace-a", cp_a, "first trace directory")->required();
    cmp->add_option("--trace-b", cp_b, "second trace directory")->required();
    cmp->add_option("--metadata", cp_meta, "node metadata CSV");
    cmp->add_option("--out", cp_out, "output directory");

    try {
        app.parse(argc, argv);
        if (sim->parsed())
            return cmd_simulate(sim_spec, sim_preset, sim_out, sim_seed, sim_noisy,
                                noise_mean, noise_var);
        if (fit->parsed()) return cmd_fit(fo);
        if (summ->parsed()) return cmd_summarize(su_trace, su_truth, su_meta, su_tau, su_out);
        if (cmp->parsed()) return cmd_compare(cp_a, cp_b, cp_meta, cp_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fgm::io::IoError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fgm::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fgm::DimensionMismatchError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
