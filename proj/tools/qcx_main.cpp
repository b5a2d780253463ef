#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qcx/builders.hpp"
#include "qcx/cohomology.hpp"
#include "qcx/errors.hpp"
#include "qcx/json_io.hpp"
#include "qcx/reduction.hpp"
#include "qcx/rng.hpp"
#include "qcx/symbolcx.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using qcx::Json;

struct GlobalOpts {
    double rank_tol = 1e-10;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;

    qcx::RankPolicy rank_policy() const { return qcx::RankPolicy{rank_tol}; }
    qcx::ExactnessPolicy exactness() const { return qcx::ExactnessPolicy{tol, 1e-12}; }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        const auto dt = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(dt).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    return qcx::read_text_file(path);
}

void print_doc(const Json& doc) {
    qcx::ensure_finite(doc);
    std::cout << doc.dump(2) << "\n";
}

// Payload-producing commands: the payload itself is the stdout document
// unless --out redirects it to a file, in which case a small report takes
// its place on stdout.
void emit_payload(const GlobalOpts& g, Json payload, Json report) {
    qcx::ensure_finite(payload);
    if (g.out.empty()) {
        print_doc(payload);
    } else {
        qcx::write_text_file(g.out, payload.dump(2) + "\n");
        report["out"] = g.out;
        print_doc(report);
    }
}

Json envelope(const std::string& command, const std::string& digest) {
    return Json{{"command", command}, {"version", kVersion}, {"input_digest", digest}};
}

std::vector<int> dims_of(const qcx::QuasiComplex& qc) {
    std::vector<int> dims;
    for (int i = 0; i < qc.steps(); ++i) dims.push_back(qc.space(i).dim());
    return dims;
}

Json curvature_json(const qcx::CurvatureReport& rep) {
    return Json{{"absolute", rep.absolute},
                {"relative", rep.relative},
                {"norm_products", rep.norm_products},
                {"max_relative", rep.max_relative()},
                {"is_exact", rep.is_exact}};
}

int run_analyze(const GlobalOpts& g, const std::string& file, int trials) {
    Stopwatch watch;
    const std::string bytes = read_input(file);
    qcx::QuasiComplex qc = qcx::complex_from_json(qcx::parse_json(bytes));
    qcx::CurvatureReport curv = qcx::validate(qc, g.exactness());

    Json report = envelope("analyze", qcx::input_digest(bytes));
    report["dims"] = dims_of(qc);
    report["orders"] = qc.orders();
    report["curvature"] = curvature_json(curv);
    report["is_exact"] = curv.is_exact;

    int exit_code = 0;
    if (curv.is_exact) {
        qcx::BettiReport rn = qcx::betti(qc, qcx::BettiRoute::rank_nullity, g.rank_policy(),
                                         g.exactness());
        qcx::BettiReport hm = qcx::betti(qc, qcx::BettiRoute::harmonic, g.rank_policy(),
                                         g.exactness());
        report["betti"] = rn.betti;
        report["betti_harmonic"] = hm.betti;
        report["routes_agree"] = (rn.betti == hm.betti);
        report["chi"] = rn.chi;
    } else {
        qcx::EulerReport euler = qcx::euler_quasi(qc, trials, g.seed, g.rank_policy(), g.tol);
        report["chi"] = euler.chi;
        report["euler"] = Json{{"trial_chis", euler.trial_chis},
                               {"consistent", euler.consistent},
                               {"certified", euler.certified},
                               {"trials", euler.trials},
                               {"seed", euler.seed},
                               {"rng", qcx::Rng::kStreamName}};
        report["seed"] = euler.seed;
        if (!euler.consistent || !euler.certified) exit_code = 3;
    }
    report["timing_ms"] = watch.ms();
    print_doc(report);
    return exit_code;
}

int run_reduce(const GlobalOpts& g, const std::string& file) {
    Stopwatch watch;
    const std::string bytes = read_input(file);
    qcx::QuasiComplex qc = qcx::complex_from_json(qcx::parse_json(bytes));
    qcx::ReductionResult res = qcx::reduce(qc, g.rank_policy(), g.tol);

    Json report = envelope("reduce", qcx::input_digest(bytes));
    report["dims"] = dims_of(qc);
    report.update(qcx::reduction_to_json(res, g.out.empty()));
    if (!g.out.empty()) {
        qcx::write_text_file(g.out, qcx::complex_to_json(res.reduced).dump(2) + "\n");
        report["out"] = g.out;
    }
    report["timing_ms"] = watch.ms();
    print_doc(report);
    return res.certified ? 0 : 3;
}

int run_perturb(const GlobalOpts& g, const std::string& file, double eps,
                std::optional<int> rank_limit) {
    Stopwatch watch;
    const std::string bytes = read_input(file);
    qcx::QuasiComplex qc = qcx::complex_from_json(qcx::parse_json(bytes));
    qcx::PerturbationSpec spec;
    spec.eps = eps;
    spec.rank_limit = rank_limit;
    spec.seed = g.seed;
    qcx::QuasiComplex bent = qcx::perturb(qc, spec);

    Json payload = qcx::complex_to_json(bent);
    payload["seed"] = spec.seed;
    payload["eps"] = spec.eps;
    payload["rng"] = qcx::Rng::kStreamName;
    if (rank_limit) payload["rank_limit"] = *rank_limit;

    Json report = envelope("perturb", qcx::input_digest(bytes));
    report["seed"] = spec.seed;
    report["eps"] = spec.eps;
    report["rng"] = qcx::Rng::kStreamName;
    report["dims"] = dims_of(bent);
    report["timing_ms"] = watch.ms();
    emit_payload(g, std::move(payload), std::move(report));
    return 0;
}

int run_mesh_derham(const GlobalOpts& g, const std::string& file) {
    Stopwatch watch;
    const std::string bytes = read_input(file);
    qcx::SurfaceMesh mesh = qcx::parse_mesh(bytes);
    qcx::QuasiComplex qc = qcx::derham_complex(mesh);

    Json report = envelope("mesh-derham", qcx::input_digest(bytes));
    report["dims"] = dims_of(qc);
    report["timing_ms"] = watch.ms();
    emit_payload(g, qcx::complex_to_json(qc), std::move(report));
    return 0;
}

int run_symbol(const GlobalOpts& g, const std::string& file, const std::string& generator,
               int dim, int samples) {
    Stopwatch watch;
    const bool file_mode = !file.empty();
    const bool gen_mode = !generator.empty();
    if (file_mode == gen_mode)
        throw qcx::InvalidInput("pass either a sample file or --generator, not both");

    Json report;
    std::vector<qcx::SymbolComplexSample> batch;
    if (gen_mode) {
        if (generator != "koszul")
            throw qcx::InvalidInput("unknown generator '" + generator + "'");
        if (samples < 0) throw qcx::InvalidInput("--samples must be non-negative");
        qcx::SampleGenerator gen = qcx::koszul_generator(dim);
        for (int k = 0; k < samples; ++k) batch.push_back(gen(g.seed, k));
        const std::string param_id = "koszul-n" + std::to_string(dim) + "-seed" +
                                     std::to_string(g.seed) + "-samples" +
                                     std::to_string(samples);
        report = envelope("symbol", qcx::input_digest(param_id));
        report["generator"] = generator;
        report["dim"] = dim;
        report["seed"] = g.seed;
        report["rng"] = qcx::Rng::kStreamName;
    } else {
        const std::string bytes = read_input(file);
        Json doc = qcx::parse_json(bytes);
        if (doc.is_array())
            for (const Json& s : doc) batch.push_back(qcx::sample_from_json(s));
        else
            batch.push_back(qcx::sample_from_json(doc));
        report = envelope("symbol", qcx::input_digest(bytes));
    }

    bool elliptic = true, routes_agree = true;
    Json per_sample = Json::array();
    std::vector<std::string> failing;
    for (const qcx::SymbolComplexSample& s : batch) {
        qcx::ExactnessVerdict e = qcx::symbol_exact(s, g.rank_policy());
        qcx::LaplacianVerdict l = qcx::symbol_laplacian_check(s, g.rank_policy());
        if (!e.exact) {
            elliptic = false;
            failing.push_back(s.point_id);
        }
        if (e.exact != l.all_invertible) routes_agree = false;
        for (std::size_t i = 0; i < e.exact_at.size(); ++i)
            if (e.exact_at[i] != l.invertible[i]) routes_agree = false;
        per_sample.push_back(Json{{"point_id", s.point_id},
                                  {"exact", e.exact},
                                  {"exact_at", e.exact_at},
                                  {"laplacians_invertible", l.all_invertible}});
    }
    report["n_samples"] = static_cast<int>(batch.size());
    report["elliptic"] = elliptic;
    report["laplacian_route_agrees"] = routes_agree;
    report["per_sample"] = std::move(per_sample);
    report["failing_points"] = failing;
    if (batch.empty()) {
        report["warning"] = "no samples drawn; verdict is vacuous";
        std::cerr << "warning: no samples drawn; verdict is vacuous\n";
    }
    report["timing_ms"] = watch.ms();
    print_doc(report);
    return 0;
}

int run_lefschetz(const GlobalOpts& g, const std::string& complex_file,
                  const std::string& endo_file) {
    Stopwatch watch;
    const std::string cbytes = read_input(complex_file);
    qcx::QuasiComplex qc = qcx::complex_from_json(qcx::parse_json(cbytes));
    const std::string ebytes = qcx::read_text_file(endo_file);
    qcx::Endomorphism endo =
        qcx::make_endomorphism(qc, qcx::endo_maps_from_json(qcx::parse_json(ebytes)));

    const qcx::cxd value = qcx::lefschetz(qc, endo, g.rank_policy(), g.exactness(), g.tol);
    if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value.real())))
        throw qcx::InvalidInput("trace has a non-negligible imaginary part");

    Json report = envelope("lefschetz", qcx::input_digest(cbytes));
    report["endo_digest"] = qcx::input_digest(ebytes);
    report["lefschetz"] = value.real();
    report["commute_defect_rel"] = endo.commute_defect_rel;
    report["chi"] = qcx::betti(qc, qcx::BettiRoute::rank_nullity, g.rank_policy(), g.exactness()).chi;
    report["timing_ms"] = watch.ms();
    print_doc(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    CLI::App app{"cochain complex and quasicomplex toolbox"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.add_option("--rank-tol", g.rank_tol, "relative numerical-rank threshold")
        ->capture_default_str();
    app.add_option("--tol", g.tol, "certificate / exactness threshold")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized commands")->capture_default_str();
    app.add_option("--format", g.format, "output format (json)")->capture_default_str();
    app.add_option("--out", g.out, "write the payload document to this file");

    std::string an_file = "-";
    int an_trials = 0;
    CLI::App* an = app.add_subcommand("analyze", "curvature, cohomology and Euler report");
    an->fallthrough();
    an->add_option("file", an_file, "complex JSON ('-' for stdin)");
    an->add_option("--trials", an_trials, "extra seeded re-perturbation runs for chi");

    std::string red_file = "-";
    CLI::App* red = app.add_subcommand("reduce", "reduce a quasicomplex to an exact complex");
    red->fallthrough();
    red->add_option("file", red_file, "complex JSON ('-' for stdin)");

    std::string per_file = "-";
    double per_eps = 0.0;
    int per_rank = 0;
    CLI::App* per = app.add_subcommand("perturb", "add a seeded perturbation of fixed norm");
    per->fallthrough();
    per->add_option("file", per_file, "complex JSON ('-' for stdin)");
    per->add_option("--eps", per_eps, "spectral norm of each perturbation")->required();
    CLI::Option* per_rank_opt = per->add_option("--rank-limit", per_rank, "cap perturbation rank");

    std::string sym_file, sym_gen;
    int sym_dim = 3, sym_samples = 0;
    CLI::App* sym = app.add_subcommand("symbol", "ellipticity verdicts for symbol samples");
    sym->fallthrough();
    sym->add_option("file", sym_file, "sample JSON (object or array; '-' for stdin)");
    sym->add_option("--generator", sym_gen, "built-in sample generator (koszul)");
    sym->add_option("--dim", sym_dim, "base dimension for the generator")->capture_default_str();
    sym->add_option("--samples", sym_samples, "number of generated samples")
        ->capture_default_str();

    std::string mesh_file;
    CLI::App* md = app.add_subcommand("mesh-derham", "incidence complex of a closed surface");
    md->fallthrough();
    md->add_option("file", mesh_file, "mesh file, OFF or JSON ('-' for stdin)")->required();

    std::string lef_complex, lef_endo;
    CLI::App* lef = app.add_subcommand("lefschetz", "Lefschetz number of a chain self-map");
    lef->fallthrough();
    lef->add_option("complex", lef_complex, "complex JSON ('-' for stdin)")->required();
    lef->add_option("endo", lef_endo, "endomorphism JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << Json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        if (g.format != "json") throw qcx::InvalidInput("unsupported format '" + g.format + "'");
        if (an->parsed()) return run_analyze(g, an_file, an_trials);
        if (red->parsed()) return run_reduce(g, red_file);
        if (per->parsed())
            return run_perturb(g, per_file, per_eps,
                               per_rank_opt->count() ? std::optional<int>(per_rank)
                                                     : std::nullopt);
        if (sym->parsed()) return run_symbol(g, sym_file, sym_gen, sym_dim, sym_samples);
        if (md->parsed()) return run_mesh_derham(g, mesh_file);
        if (lef->parsed()) return run_lefschetz(g, lef_complex, lef_endo);
        throw qcx::InvalidInput("no command given");
    } catch (const qcx::Error& e) {
        std::cerr << Json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
