#include "lspde/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lspde/besov.hpp"
#include "lspde/config.hpp"
#include "lspde/errors.hpp"
#include "lspde/levy_measure.hpp"
#include "lspde/linear.hpp"
#include "lspde/semilinear.hpp"
#include "lspde/text.hpp"

namespace lspde::cli {

namespace fs = std::filesystem;

namespace {

enum class InputKind { config, field };

struct Input {
    std::string flag;
    std::string path;
    InputKind kind;
};

// Inputs read and outputs written by one invocation, for the manifest.
struct Session {
    std::vector<std::string> args;
    std::vector<Input> inputs;
    std::vector<std::string> outputs;
    std::optional<std::uint64_t> seed;

    json config(const std::string& flag, const std::string& path)
    {
        inputs.push_back({flag, path, InputKind::config});
        return load_json(path);
    }
    Field field(const std::string& flag, const std::string& path, std::vector<std::string>* extra = nullptr)
    {
        if (!std::filesystem::is_regular_file(path)) throw InvalidArgument(flag + ": cannot open " + path);
        inputs.push_back({flag, path, InputKind::field});
        return read_field(path, extra);
    }
    void wrote(const std::string& path) { outputs.push_back(path); }
};

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot write " + path);
    os.imbue(std::locale::classic());
    return os;
}

void write_text(Session& s, const std::string& path, const std::string& text)
{
    open_out(path) << text;
    s.wrote(path);
}

void write_manifest(const Session& s, const std::string& subcommand, const std::string& primary)
{
    if (s.outputs.empty()) return;
    const bool has_primary = std::find(s.outputs.begin(), s.outputs.end(), primary) != s.outputs.end();
    json inputs = json::array();
    for (const Input& in : s.inputs) {
        json e = {{"flag", in.flag}, {"path", in.path}, {"sha256", sha256_file(in.path)}};
        e["kind"] = in.kind == InputKind::config ? "config" : "field";
        if (in.kind == InputKind::config) e["content"] = load_json(in.path);
        inputs.push_back(e);
    }
    json outputs = json::array();
    for (const auto& p : s.outputs) outputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    json m = {{"tool", "lspde"},
              {"manifest_version", 1},
              {"subcommand", subcommand},
              {"argv", s.args},
              {"cwd", fs::current_path().string()},
              {"seed", s.seed ? json(*s.seed) : json(nullptr)},
              {"inputs", inputs},
              {"outputs", outputs}};
    open_out(manifest_path(has_primary ? primary : s.outputs.front()).string()) << m.dump(2) << '\n';
}

std::string finite_tag(const quad::Integral& v) { return v.divergent ? "divergent" : "finite"; }
std::string value_of(const quad::Integral& v) { return v.divergent ? "inf" : format_real(v.value); }

NoiseRealization noise_from_field(const Field& f)
{
    NoiseRealization w;
    w.grid = f.grid();
    for (const cplx& v : f.values()) w.cell_integrals.push_back(v.real() * f.grid().cell_volume());
    return w;
}

std::vector<std::string> noise_header(const NoiseRealization& w)
{
    return {"triplet " + triplet_to_json(w.triplet).dump(), "delta " + format_real(w.delta),
            "seed " + std::to_string(w.seed)};
}

std::vector<std::vector<int>> parse_shifts(const std::string& s)
{
    std::vector<std::vector<int>> out;
    std::istringstream is(s);
    std::string vec;
    while (std::getline(is, vec, ';')) {
        std::vector<int> v;
        for (double x : parse_real_list(vec)) {
            if (x != std::floor(x)) throw InvalidArgument("shift components must be integers: " + vec);
            v.push_back(static_cast<int>(x));
        }
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("--shifts: no shift given");
    return out;
}

BesovSpace parse_space(const std::string& s)
{
    const auto v = parse_real_list(s);
    if (v.size() != 3) throw InvalidArgument("expected tau,p,rho: " + s);
    return {v[0], v[1], v[2]};
}

// Everything a subcommand can be configured with; CLI11 binds into it.
struct Options {
    std::string p_file, q_file, triplet_file, grid, out, noise_file, field_file, blocks, csv, noise_out, log;
    std::string g_spec = "builtin:sin", weight, c_list = "0.5,1,2", src, dst, shifts, manifest;
    std::uint64_t seed = 0;
    double delta = defaults::delta, tol = defaults::picard_tol, c = 1.0;
    double beta = 0.0, l = 0.0, r = 2.0, t = 2.0, rho = 0.0, eps = 1.0, alpha = defaults::stationarity_alpha;
    double sharpness = defaults::partition_sharpness;
    int max_iter = defaults::max_iter, n_probes = defaults::n_probes, reps = defaults::stationarity_reps;
    int d = 1, log_d = 1, min_pass = defaults::stationarity_min_pass;
    bool gauge = false;
};

MultiPoly load_poly(Session& s, const std::string& flag, const std::string& path, int dim)
{
    if (path.empty()) return MultiPoly::constant(dim, 1.0);
    MultiPoly p = poly_from_json(s.config(flag, path));
    if (p.dim() != dim) throw DimensionMismatch(flag + ": polynomial dimension does not match the grid");
    return p;
}

NoiseRealization load_or_sample_noise(Session& s, const Options& o)
{
    if (!o.noise_file.empty()) return noise_from_field(s.field("--noise", o.noise_file));
    if (o.triplet_file.empty() || o.grid.empty())
        throw InvalidArgument("either --noise or both --triplet and --grid are required");
    s.seed = o.seed;
    return sample_noise(triplet_from_json(s.config("--triplet", o.triplet_file)), parse_grid_spec(o.grid), o.delta,
                        o.seed);
}

int cmd_sample_noise(Session& s, const Options& o, std::ostream& out)
{
    const NoiseRealization w = load_or_sample_noise(s, o);
    const Field f = w.density();
    write_field(f, o.out, noise_header(w));
    s.wrote(o.out);
    if (!o.csv.empty()) {
        std::ofstream os = open_out(o.csv);
        write_field_csv(f, os);
        os.close();
        s.wrote(o.csv);
    }
    out << "cells = " << w.cell_integrals.size() << '\n';
    return 0;
}

int cmd_solve_linear(Session& s, const Options& o, std::ostream& out)
{
    const NoiseRealization w = load_or_sample_noise(s, o);
    const MultiPoly p = load_poly(s, "--p", o.p_file, w.grid.dim());
    const MultiPoly q = load_poly(s, "--q", o.q_file, w.grid.dim());
    const Field sol = solve_linear(p, q, w, o.gauge);
    write_field(sol, o.out);
    s.wrote(o.out);
    if (!o.noise_out.empty()) {
        write_field(w.density(), o.noise_out, noise_header(w));
        s.wrote(o.noise_out);
    }
    out << "spectral_residual = " << format_real(spectral_residual(p, q, sol, w.density())) << '\n';
    if (o.gauge) out << "note: zero-mean gauge applied; s^(0) set to 0\n";
    return 0;
}

int cmd_solve_semilinear(Session& s, const Options& o, std::ostream& out)
{
    const NoiseRealization w = load_or_sample_noise(s, o);
    const MultiPoly p = load_poly(s, "--p", o.p_file, w.grid.dim());
    const std::string tab = "tabulated:";
    if (o.g_spec.rfind(tab, 0) == 0) s.inputs.push_back({"--g", o.g_spec.substr(tab.size()), InputKind::config});
    const Nonlinearity g = parse_nonlinearity(o.g_spec, o.c);
    const BesovParams params{o.beta, o.r, o.r, o.rho};
    PicardOptions opt;
    opt.tol = o.tol;
    opt.max_iter = o.max_iter;
    opt.n_probes = o.n_probes;
    opt.probe_seed = o.seed;
    const PicardResult res = picard_solve(p, g, w, params, opt);
    write_field(res.s, o.out);
    s.wrote(o.out);
    const std::string log = o.log.empty() ? o.out + ".iterations.csv" : o.log;
    std::ofstream os = open_out(log);
    write_iteration_csv(res.log, os);
    os.close();
    s.wrote(log);

    const auto& c = res.certificate;
    out << "iterations = " << res.iterations << '\n'
        << "certificate_ratio = " << format_real(c.ratio) << '\n'
        << "op_norm_est = " << format_real(c.op_norm_est) << '\n'
        << "embed_norm_est = " << format_real(c.embed_norm_est) << '\n'
        << "lip = " << format_real(c.lip) << '\n'
        << "weak_residual = " << format_real(res.weak_residual) << '\n'
        << "fixed_point_residual = " << format_real(res.fixed_point_residual) << '\n';
    try {
        const double kappa = estimate_kappa({MultiPoly::constant(p.dim(), 1.0), p}).kappa;
        const RegularityCondition rc = regularity_condition(o.beta, kappa, p.dim(), o.r);
        out << "regularity_condition: l = " << format_real(rc.l) << " vs " << format_real(rc.bound) << " ("
            << (rc.satisfied ? "satisfied" : "violated") << ", reported only)\n";
    } catch (const FitFailed&) {
        out << "regularity_condition: kappa fit failed, not evaluated\n";
    }
    return 0;
}

int cmd_besov_norm(Session& s, const Options& o, std::ostream& out)
{
    const Field f = s.field("--field", o.field_file);
    const BesovTerms bt = besov_terms(f, {o.l, o.r, o.t, o.rho}, DyadicPartition(o.sharpness));
    std::ostringstream rep;
    rep << "besov_norm = " << format_real(bt.norm) << '\n';
    std::string trunc;
    for (std::size_t k = 0; k < bt.truncated.size(); ++k)
        if (bt.truncated[k]) trunc += (trunc.empty() ? "" : ",") + std::to_string(k);
    if (!trunc.empty()) rep << "warning: blocks " << trunc << " extend beyond the Nyquist radius\n";
    out << rep.str();
    if (!o.blocks.empty()) {
        std::ofstream os = open_out(o.blocks);
        write_block_energies_csv(bt, os);
        os.close();
        s.wrote(o.blocks);
    }
    if (!o.out.empty()) write_text(s, o.out, rep.str());
    return 0;
}

int cmd_embedding(Session& s, const Options& o, std::ostream& out)
{
    const Embedding e = embedding_check(parse_space(o.src), parse_space(o.dst), o.d);
    const std::string line = std::string(to_string(e)) + '\n';
    out << line;
    if (!o.out.empty()) write_text(s, o.out, line);
    return 0;
}

int cmd_check_conditions(Session& s, const Options& o, std::ostream& out)
{
    const LevyTriplet t = triplet_from_json(s.config("--triplet", o.triplet_file));
    std::ostringstream rep;
    rep << "min_one_x2_mass = " << format_real(min_one_x2_mass(t.nu)) << '\n';
    const auto em = epsilon_moment(t.nu, o.eps);
    rep << "epsilon_moment(" << format_real(o.eps) << ") = " << value_of(em) << " (" << finite_tag(em) << ")\n";
    const auto lm = log_moment(t.nu, o.log_d);
    rep << "log_moment(" << o.log_d << ") = " << value_of(lm) << " (" << finite_tag(lm) << ")\n";
    rep << "small_jump_variance(" << format_real(o.delta) << ") = " << format_real(small_jump_variance(t.nu, o.delta))
        << '\n';
    if (!o.weight.empty()) {
        const WeightFunction w = parse_weight(o.weight);
        const WeightCheck wc = check_weight(w);
        rep << "weight " << o.weight << ": " << (wc.passed() ? "admissible" : "not admissible") << '\n';
        for (double c : parse_real_list(o.c_list)) {
            const auto ua = ultra_admissibility(t.nu, w, c, o.d);
            rep << "ultra_admissibility(c=" << format_real(c) << ", d=" << o.d << ") = " << value_of(ua) << " ("
                << finite_tag(ua) << ")\n";
        }
    }
    if (!o.p_file.empty()) {
        const MultiPoly p = poly_from_json(s.config("--p", o.p_file));
        const KappaEstimate k = estimate_kappa({MultiPoly::constant(p.dim(), 1.0), p});
        const RegularityCondition rc = regularity_condition(o.beta, k.kappa, p.dim(), o.r);
        rep << "kappa = " << format_real(k.kappa) << '\n'
            << "regularity_condition: l = " << format_real(rc.l) << " vs " << format_real(rc.bound) << " ("
            << (rc.satisfied ? "satisfied" : "violated") << ")\n";
    }
    out << rep.str();
    if (!o.out.empty()) write_text(s, o.out, rep.str());
    return 0;
}

int cmd_variance(Session& s, const Options& o, std::ostream& out)
{
    const LevyTriplet t = triplet_from_json(s.config("--triplet", o.triplet_file));
    const Grid g = parse_grid_spec(o.grid);
    const MultiPoly p = load_poly(s, "--p", o.p_file, g.dim());
    const MultiPoly q = load_poly(s, "--q", o.q_file, g.dim());
    s.seed = o.seed;
    const VarianceSpectrum vs = variance_spectrum(p, q, t, g, o.delta, o.reps, o.seed);
    std::ofstream os = open_out(o.out);
    write_variance_csv(vs, os);
    os.close();
    s.wrote(o.out);
    out << "replicates = " << vs.replicates << '\n';
    return 0;
}

int cmd_stationarity(Session& s, const Options& o, std::ostream& out)
{
    const LevyTriplet t = triplet_from_json(s.config("--triplet", o.triplet_file));
    const Grid g = parse_grid_spec(o.grid);
    const MultiPoly p = load_poly(s, "--p", o.p_file, g.dim());
    const MultiPoly q = load_poly(s, "--q", o.q_file, g.dim());
    StationarityOptions opt;
    opt.delta = o.delta;
    opt.n_reps = o.reps;
    opt.seed = o.seed;
    opt.alpha = o.alpha;
    opt.min_pass = o.min_pass;
    s.seed = o.seed;
    const StationarityReport rep = stationarity_test(p, q, t, g, parse_shifts(o.shifts), opt);
    std::ofstream os = open_out(o.out);
    write_stationarity_csv(rep, os);
    os.close();
    s.wrote(o.out);
    for (const auto& sh : rep.shifts) {
        out << "shift";
        for (int v : sh.shift) out << ' ' << v;
        out << ": " << sh.passing << "/" << sh.tests.size() << " above alpha (" << (sh.passed ? "pass" : "fail")
            << ")\n";
    }
    out << "stationarity: " << (rep.passed() ? "pass" : "fail") << '\n';
    return 0;
}

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err)
{
    const json m = load_json(o.manifest);
    if (!m.contains("argv") || !m.contains("outputs")) throw ConfigError("manifest: missing argv or outputs");
    // Paths in the manifest are relative to the directory the run started in.
    const fs::path here = fs::current_path();
    const fs::path stash = fs::absolute(fs::path(o.manifest).string() + ".inputs");
    struct Restore {
        fs::path dir;
        ~Restore() { fs::current_path(dir); }
    } restore{here};
    if (m.contains("cwd")) fs::current_path(m["cwd"].get<std::string>());
    std::vector<std::string> args = m["argv"].get<std::vector<std::string>>();
    // Restore config inputs that changed or disappeared from their inlined copies.
    for (const auto& in : m["inputs"]) {
        const std::string path = in["path"].get<std::string>();
        const bool same = fs::exists(path) && sha256_file(path) == in["sha256"].get<std::string>();
        if (same) continue;
        if (in["kind"] != "config") throw ConfigError("replay: field input " + path + " is missing or changed");
        fs::create_directories(stash);
        const fs::path copy = stash / (in["flag"].get<std::string>().substr(2) + ".json");
        open_out(copy.string()) << in["content"].dump(2) << '\n';
        for (auto& a : args) {
            if (a == path) a = copy.string();
            else if (a == "tabulated:" + path) a = "tabulated:" + copy.string();
        }
        out << "restored " << path << " from the manifest\n";
    }
    std::ostringstream sink;
    const int code = run(args, sink, err);
    if (code != 0) return code;
    int differing = 0;
    for (const auto& o2 : m["outputs"]) {
        const std::string path = o2["path"].get<std::string>();
        const bool same = fs::exists(path) && sha256_file(path) == o2["sha256"].get<std::string>();
        out << (same ? "identical " : "differs ") << path << '\n';
        if (!same) ++differing;
    }
    return differing == 0 ? 0 : 1;
}

}  // namespace

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

fs::path manifest_path(const fs::path& output) { return output.string() + ".manifest.json"; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Levy-driven stochastic PDE toolkit", "lspde"};
    app.require_subcommand(1);
    Options o;

    auto grid_opts = [&](CLI::App* c) {
        c->add_option("--triplet", o.triplet_file, "Levy triplet JSON");
        c->add_option("--grid", o.grid, "grid spec, e.g. 64x64:10x10");
        c->add_option("--delta", o.delta, "jump truncation level")->capture_default_str();
        c->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    };
    auto noise_opts = [&](CLI::App* c) {
        grid_opts(c);
        c->add_option("--noise", o.noise_file, "noise field file instead of sampling");
    };

    auto* sn = app.add_subcommand("sample-noise", "draw a noise realization");
    noise_opts(sn);
    sn->add_option("--out", o.out, "field file")->required();
    sn->add_option("--csv", o.csv, "also write a CSV export");

    auto* sl = app.add_subcommand("solve-linear", "solve p(D) s = q(D) L");
    noise_opts(sl);
    sl->add_option("--p", o.p_file, "polynomial JSON")->required();
    sl->add_option("--q", o.q_file, "polynomial JSON (default 1)");
    sl->add_option("--out", o.out, "solution field file")->required();
    sl->add_option("--noise-out", o.noise_out, "also write the noise density");
    sl->add_flag("--gauge", o.gauge, "zero-mean gauge when p vanishes only at 0");

    auto* ss = app.add_subcommand("solve-semilinear", "solve p(D) s = g(s) + L by Picard iteration");
    noise_opts(ss);
    ss->add_option("--p", o.p_file, "polynomial JSON")->required();
    ss->add_option("--g", o.g_spec, "builtin:sin|builtin:tanh|builtin:constant|builtin:zero|tabulated:<file>")
        ->capture_default_str();
    ss->add_option("--c", o.c, "nonlinearity scale")->capture_default_str();
    ss->add_option("--beta", o.beta, "Besov smoothness")->capture_default_str();
    ss->add_option("--r", o.r, "integrability")->capture_default_str();
    ss->add_option("--rho", o.rho, "weight exponent")->capture_default_str();
    ss->add_option("--tol", o.tol, "stopping tolerance")->capture_default_str();
    ss->add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
    ss->add_option("--n-probes", o.n_probes, "operator-norm probes")->capture_default_str();
    ss->add_option("--out", o.out, "solution field file")->required();
    ss->add_option("--log", o.log, "iteration CSV (default <out>.iterations.csv)");

    auto* bn = app.add_subcommand("besov-norm", "weighted Besov norm of a field file");
    bn->add_option("--field", o.field_file, "field file")->required();
    bn->add_option("--l", o.l, "smoothness")->capture_default_str();
    bn->add_option("--r", o.r, "integrability")->capture_default_str();
    bn->add_option("--t", o.t, "summability")->capture_default_str();
    bn->add_option("--rho", o.rho, "weight exponent")->capture_default_str();
    bn->add_option("--sharpness", o.sharpness, "partition sharpness")->capture_default_str();
    bn->add_option("--blocks", o.blocks, "block energy CSV");
    bn->add_option("--out", o.out, "report file");

    auto* ec = app.add_subcommand("embedding-check", "Besov embedding predicate");
    ec->add_option("--src", o.src, "tau,p,rho")->required();
    ec->add_option("--dst", o.dst, "tau,p,rho")->required();
    ec->add_option("--d", o.d, "dimension")->capture_default_str();
    ec->add_option("--out", o.out, "report file");

    auto* cc = app.add_subcommand("check-conditions", "moment and admissibility conditions of a triplet");
    cc->add_option("--triplet", o.triplet_file, "Levy triplet JSON")->required();
    cc->add_option("--eps", o.eps, "moment exponent")->capture_default_str();
    cc->add_option("--log-d", o.log_d, "log-moment power")->capture_default_str();
    cc->add_option("--delta", o.delta, "small-jump level")->capture_default_str();
    cc->add_option("--weight", o.weight, "logpower:<m> or powerbeta:<beta>");
    cc->add_option("--c", o.c_list, "comma-separated c values for the weight condition")->capture_default_str();
    cc->add_option("--d", o.d, "dimension for the weight condition")->capture_default_str();
    cc->add_option("--p", o.p_file, "polynomial JSON for the regularity condition");
    cc->add_option("--beta", o.beta, "Besov smoothness")->capture_default_str();
    cc->add_option("--r", o.r, "integrability")->capture_default_str();
    cc->add_option("--out", o.out, "report file");

    auto* vs = app.add_subcommand("variance-spectrum", "empirical and theoretical variance per Fourier mode");
    grid_opts(vs);
    vs->add_option("--p", o.p_file, "polynomial JSON")->required();
    vs->add_option("--q", o.q_file, "polynomial JSON (default 1)");
    vs->add_option("--reps", o.reps, "replicates")->capture_default_str();
    vs->add_option("--out", o.out, "CSV file")->required();

    auto* st = app.add_subcommand("stationarity-test", "two-sample KS tests under lattice shifts");
    grid_opts(st);
    st->add_option("--p", o.p_file, "polynomial JSON")->required();
    st->add_option("--q", o.q_file, "polynomial JSON (default 1)");
    st->add_option("--shifts", o.shifts, "lattice shifts, e.g. '5;-17' or '1,0;0,3'")->required();
    st->add_option("--reps", o.reps, "replicates per sample")->capture_default_str();
    st->add_option("--alpha", o.alpha, "KS level")->capture_default_str();
    st->add_option("--min-pass", o.min_pass, "test functions that must pass")->capture_default_str();
    st->add_option("--out", o.out, "CSV file")->required();

    auto* rp = app.add_subcommand("replay", "re-run a manifest and compare output hashes");
    rp->add_option("--manifest", o.manifest, "manifest JSON")->required();

    for (auto* c : {vs, st}) {
        c->get_option("--triplet")->required();
        c->get_option("--grid")->required();
    }

    std::vector<const char*> argv{"lspde"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    Session s;
    s.args = args;
    try {
        int code = 0;
        std::string name = app.get_subcommands().front()->get_name();
        if (name == "sample-noise") code = cmd_sample_noise(s, o, out);
        else if (name == "solve-linear") code = cmd_solve_linear(s, o, out);
        else if (name == "solve-semilinear") code = cmd_solve_semilinear(s, o, out);
        else if (name == "besov-norm") code = cmd_besov_norm(s, o, out);
        else if (name == "embedding-check") code = cmd_embedding(s, o, out);
        else if (name == "check-conditions") code = cmd_check_conditions(s, o, out);
        else if (name == "variance-spectrum") code = cmd_variance(s, o, out);
        else if (name == "stationarity-test") code = cmd_stationarity(s, o, out);
        else return cmd_replay(o, out, err);
        write_manifest(s, name, o.out);
        return code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const MalformedHeader& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ShapeMismatch& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace lspde::cli
