#include "qshape/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>
#include <string_view>

#include <CLI11.hpp>

#include "qshape/diffusion.hpp"
#include "qshape/dynamics.hpp"
#include "qshape/entangle.hpp"
#include "qshape/errors.hpp"
#include "qshape/json_out.hpp"
#include "qshape/point_io.hpp"
#include "qshape/svg_render.hpp"
#include "qshape/version.hpp"

namespace qshape {

namespace {

struct InputRecord {
    std::string path;
    std::uint64_t digest = 0;
};

// Everything a handler accumulates for the final document.
struct Ctx {
    std::vector<InputRecord> inputs;
    std::vector<std::string> svg_files;
    std::uint64_t seed = 0;
    JsonValue result = JsonValue::object();
};

std::string digest_string(std::uint64_t d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(d));
    return buf;
}

std::string load_text(const std::string& path, Ctx& ctx) {
    std::string text = read_file(path);
    ctx.inputs.push_back({path, fnv1a64(text)});
    return text;
}

PointFormat format_of(const std::string& name) {
    if (name == "csv") return PointFormat::csv;
    if (name == "json") return PointFormat::json;
    return PointFormat::autodetect;
}

TensorOrder order_of(const std::string& name) {
    return name == "column" ? TensorOrder::column_major : TensorOrder::row_major;
}

JsonValue complex_pairs(const cvector_t& v) {
    JsonValue arr = JsonValue::array();
    for (const auto& z : v) {
        arr.push_back(JsonValue::array().push_back(z.real()).push_back(z.imag()));
    }
    return arr;
}

JsonValue real_array(const std::vector<double>& v) {
    JsonValue arr = JsonValue::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

JsonValue int_array(const std::vector<int>& v) {
    JsonValue arr = JsonValue::array();
    for (int x : v) arr.push_back(x);
    return arr;
}

std::vector<double> parse_real_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string_view token(text.data() + pos, comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size() ||
            !std::isfinite(v)) {
            throw InvalidParams(std::string(what) + " has a bad entry: \"" +
                                std::string(token) + "\"");
        }
        out.push_back(v);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty()) {
        throw InvalidParams(std::string(what) + " must not be empty");
    }
    return out;
}

std::pair<int, int> parse_factors(std::string text) {
    std::replace(text.begin(), text.end(), 'x', ',');
    const auto vals = parse_real_list(text, "--factors");
    if (vals.size() != 2 || vals[0] != std::floor(vals[0]) ||
        vals[1] != std::floor(vals[1]) || vals[0] < 2 || vals[1] < 2) {
        throw InvalidParams("--factors needs two integers of at least 2, like 2,3");
    }
    return {static_cast<int>(vals[0]), static_cast<int>(vals[1])};
}

std::string stem_of(const std::string& path) {
    std::string stem = std::filesystem::path(path).stem().string();
    return stem.empty() ? std::string("shape") : stem;
}

std::string write_svg(const std::string& dir, const std::string& name,
                      const std::vector<CaptionedConfig>& configs, Ctx& ctx) {
    const std::string path = (std::filesystem::path(dir) / (name + ".svg")).string();
    write_file(path, render_svg(configs));
    ctx.svg_files.push_back(path);
    return path;
}

// ---------------------------------------------------------------- handlers

struct Opts {
    std::string file_a;
    std::string file_b;
    std::vector<std::string> files;
    std::string format = "auto";
    std::string convention = "row";
    std::string svg_dir;
    std::string energies;
    std::string factors;
    double t = 0.0;
    int samples = 0;
    double sigma = 1.0;
    int trials = 1000;
    double dt = 0.0;
    double tmax = 0.0;
    double threshold = 0.999;
    int threads = 1;
    double tol = 0.0;
    std::uint64_t seed = 0;
    int basis_n = 0;
};

ShapeVector load_shape(const std::string& path, const Opts& o, Ctx& ctx) {
    return normalize(parse_points(load_text(path, ctx), format_of(o.format)));
}

void run_normalize(const Opts& o, Ctx& ctx) {
    const ShapeVector s = load_shape(o.file_a, o, ctx);
    ctx.result.set("n_points", s.n_points());
    ctx.result.set("amplitudes", complex_pairs(s.amplitudes()));
    if (!o.svg_dir.empty()) {
        const std::string stem = stem_of(o.file_a);
        write_svg(o.svg_dir, stem, {{PointConfig(s.amplitudes()), stem}}, ctx);
    }
}

void run_dist(const Opts& o, Ctx& ctx) {
    const ShapeVector a = load_shape(o.file_a, o, ctx);
    const ShapeVector b = load_shape(o.file_b, o, ctx);
    ctx.result.set("theta", fs_distance(a, b));
    ctx.result.set("transition_probability", transition_probability(a, b));
}

void run_unlabeled_dist(const Opts& o, Ctx& ctx) {
    const ShapeVector a = load_shape(o.file_a, o, ctx);
    const ShapeVector b = load_shape(o.file_b, o, ctx);
    ctx.result.set("theta", unlabeled_distance(a, b));
    ctx.result.set("labeled_theta", fs_distance(a, b));
}

void run_basis(const Opts& o, Ctx& ctx) {
    const EigenBasis b = basis(o.basis_n);
    JsonValue shapes = JsonValue::array();
    std::vector<int> counts;
    for (int k = 1; k <= b.n_points - 1; ++k) {
        const DegeneracyInfo d = degeneracy(b.n_points, k);
        counts.push_back(d.distinct_vertices);
        JsonValue row = JsonValue::object();
        row.set("k", k);
        row.set("exponents", int_array(eigenshape_exponents(b.n_points, k)));
        row.set("distinct_vertices", d.distinct_vertices);
        row.set("multiplicity", d.multiplicity);
        row.set("nondegenerate", d.nondegenerate());
        row.set("amplitudes", complex_pairs(b.at(k).amplitudes()));
        shapes.push_back(std::move(row));
        if (!o.svg_dir.empty()) {
            const std::string name = "eigenshape_" + std::to_string(b.n_points) +
                                     "_" + std::to_string(k);
            write_svg(o.svg_dir, name,
                      {{PointConfig(b.at(k).amplitudes()),
                        "eigenshape " + std::to_string(k) + " of " +
                            std::to_string(b.n_points)}},
                      ctx);
        }
    }
    ctx.result.set("n_points", b.n_points);
    ctx.result.set("degeneracy_counts", int_array(counts));
    ctx.result.set("eigenshapes", std::move(shapes));
}

void run_decompose(const Opts& o, Ctx& ctx) {
    const ShapeVector s = load_shape(o.file_a, o, ctx);
    const CoeffVector c = decompose(s, basis(s.n_points()));
    ctx.result.set("n_points", s.n_points());
    ctx.result.set("coefficients", complex_pairs(c.coefficients));
    ctx.result.set("populations", real_array(c.populations()));
    ctx.result.set("norm", c.norm());
}

void run_synth(const Opts& o, Ctx& ctx) {
    CoeffVector c;
    c.coefficients =
        parse_pairs(load_text(o.file_a, ctx), format_of(o.format), 2);
    c.basis_n_points = c.n_coeffs() + 1;
    const ShapeVector s = superpose(c, basis(c.basis_n_points));

    const double norm = c.norm();
    std::vector<double> pops = c.populations();
    for (double& p : pops) p /= norm * norm;

    ctx.result.set("n_points", s.n_points());
    ctx.result.set("amplitudes", complex_pairs(s.amplitudes()));
    ctx.result.set("populations", real_array(pops));
    if (!o.svg_dir.empty()) {
        const std::string stem = stem_of(o.file_a);
        write_svg(o.svg_dir, stem, {{PointConfig(s.amplitudes()), stem}}, ctx);
    }
}

void run_evolve(const Opts& o, Ctx& ctx) {
    const ShapeVector s = load_shape(o.file_a, o, ctx);
    const Hamiltonian h = make_hamiltonian(
        s.n_points(), parse_real_list(o.energies, "--energies"));
    const EigenBasis b = basis(s.n_points());
    const CoeffVector ct = evolve_coeffs(decompose(s, b), h, o.t);
    const ShapeVector st = superpose(ct, b);

    ctx.result.set("n_points", s.n_points());
    ctx.result.set("t", o.t);
    ctx.result.set("amplitudes", complex_pairs(st.amplitudes()));
    ctx.result.set("coefficients", complex_pairs(ct.coefficients));
    if (o.samples > 0) {
        const Trajectory tr = sample_trajectory(s, h, 0.0, o.t, o.samples);
        JsonValue states = JsonValue::array();
        for (const auto& state : tr.states) {
            states.push_back(complex_pairs(state.amplitudes()));
        }
        JsonValue traj = JsonValue::object();
        traj.set("times", real_array(tr.times));
        traj.set("states", std::move(states));
        ctx.result.set("trajectory", std::move(traj));
    }
    if (!o.svg_dir.empty()) {
        const std::string name = stem_of(o.file_a) + "_evolved";
        write_svg(o.svg_dir, name, {{PointConfig(st.amplitudes()), name}}, ctx);
    }
}

void run_phase(const Opts& o, Ctx& ctx) {
    const ShapeVector s = load_shape(o.file_a, o, ctx);
    const Hamiltonian h = make_hamiltonian(
        s.n_points(), parse_real_list(o.energies, "--energies"));
    const PhaseBreakdown pb = phase_breakdown(s, h);
    ctx.result.set("stationary", pb.stationary);
    ctx.result.set("period", pb.stationary ? JsonValue(nullptr) : JsonValue(pb.period));
    ctx.result.set("total", pb.total);
    ctx.result.set("dynamical", pb.dynamical);
    ctx.result.set("geometric", pb.geometric);
}

void run_combine(const Opts& o, Ctx& ctx) {
    const ShapeVector sa = load_shape(o.file_a, o, ctx);
    const ShapeVector sb = load_shape(o.file_b, o, ctx);
    const CoeffVector a = decompose(sa, basis(sa.n_points()));
    const CoeffVector b = decompose(sb, basis(sb.n_points()));
    const BipartiteShape bp = combine(a, b, order_of(o.convention));
    const ShapeVector cs = combined_shape(bp);

    ctx.result.set("m", bp.m);
    ctx.result.set("n", bp.n);
    ctx.result.set("convention", o.convention);
    ctx.result.set("combined_n_points", cs.n_points());
    ctx.result.set("coefficients", complex_pairs(bp.coeffs.coefficients));
    ctx.result.set("amplitudes", complex_pairs(cs.amplitudes()));
    if (!o.svg_dir.empty()) {
        write_svg(o.svg_dir, "combined",
                  {{PointConfig(cs.amplitudes()), "combined"}}, ctx);
    }
}

void run_schmidt(const Opts& o, Ctx& ctx) {
    const ShapeVector s = load_shape(o.file_a, o, ctx);
    const auto [m, n] = parse_factors(o.factors);
    if (m * n + 1 != s.n_points()) {
        throw DimensionMismatch("factors " + std::to_string(m) + "x" +
                                std::to_string(n) + " need " +
                                std::to_string(m * n + 1) + " points, got " +
                                std::to_string(s.n_points()));
    }
    const CoeffVector c = decompose(s, basis(s.n_points()));
    const BipartiteShape bp = bipartite_of(c, m, n, order_of(o.convention));
    const SchmidtData d = schmidt(bp);
    const double tol = o.tol > 0.0 ? o.tol : 1e-10;

    ctx.result.set("m", m);
    ctx.result.set("n", n);
    ctx.result.set("convention", o.convention);
    ctx.result.set("values", real_array(d.values));
    ctx.result.set("entropy", d.entropy);
    ctx.result.set("product", is_product(bp, tol));
    ctx.result.set("tol", tol);
}

void run_collinear(const Opts& o, Ctx& ctx) {
    const PointConfig config =
        parse_points(load_text(o.file_a, ctx), format_of(o.format));
    const double tol = o.tol > 0.0 ? o.tol : 1e-6;
    ctx.result.set("n_points", config.n_points());
    ctx.result.set("tol", tol);
    ctx.result.set("max_collinear", max_collinear(config, tol));
}

void run_diffuse(const Opts& o, Ctx& ctx) {
    const ShapeVector s = load_shape(o.file_a, o, ctx);
    const Hamiltonian h = make_hamiltonian(
        s.n_points(), parse_real_list(o.energies, "--energies"));
    const CoeffVector c0 = decompose(s, basis(s.n_points()));

    DiffusionParams p;
    p.hamiltonian = h;
    p.sigma = o.sigma;
    p.dt = o.dt;
    p.t_max = o.tmax;
    p.collapse_threshold = o.threshold;
    p.seed = o.seed;
    const DiffusionParams resolved = validated(p);
    const EnsembleReport report = run_ensemble(c0, p, o.trials, o.threads);

    JsonValue counts = JsonValue::object();
    JsonValue freqs = JsonValue::object();
    for (const auto& [k, count] : report.terminal_counts) {
        counts.set(std::to_string(k), count);
        freqs.set(std::to_string(k),
                  static_cast<double>(count) / static_cast<double>(report.trials));
    }
    JsonValue params = JsonValue::object();
    params.set("energies", real_array(resolved.hamiltonian.energies));
    params.set("sigma", resolved.sigma);
    params.set("dt", resolved.dt);
    params.set("t_max", resolved.t_max);
    params.set("collapse_threshold", resolved.collapse_threshold);
    params.set("seed", resolved.seed);
    params.set("threads", o.threads);

    ctx.result.set("trials", report.trials);
    ctx.result.set("initial_populations", real_array(c0.populations()));
    ctx.result.set("terminal_counts", std::move(counts));
    ctx.result.set("frequencies", std::move(freqs));
    ctx.result.set("undecided", report.undecided);
    ctx.result.set("params", std::move(params));
    ctx.result.set("sample_times", real_array(report.sample_times));
    ctx.result.set("mean_energy", real_array(report.mean_energy));
    ctx.result.set("std_energy", real_array(report.std_energy));
}

void run_render(const Opts& o, Ctx& ctx) {
    JsonValue rendered = JsonValue::array();
    std::set<std::string> used;
    for (const auto& file : o.files) {
        const PointConfig config =
            parse_points(load_text(file, ctx), format_of(o.format));
        std::string name = stem_of(file);
        int suffix = 2;
        while (!used.insert(name).second) {
            name = stem_of(file) + "_" + std::to_string(suffix++);
        }
        const std::string path =
            write_svg(o.svg_dir, name, {{config, stem_of(file)}}, ctx);
        JsonValue row = JsonValue::object();
        row.set("input", file);
        row.set("svg", path);
        rendered.push_back(std::move(row));
    }
    ctx.result.set("rendered", std::move(rendered));
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
    Opts o;
    CLI::App app{"planar shapes as quantum states: geometry, eigenshape bases, "
                 "evolution, entanglement, collapse",
                 std::string(kToolName)};
    app.require_subcommand(1);

    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "input format")
            ->check(CLI::IsMember({"auto", "csv", "json"}))
            ->default_str("auto");
    };
    const auto add_svg = [&](CLI::App* cmd) {
        cmd->add_option("--svg", o.svg_dir, "directory for SVG output");
    };

    auto* c_normalize =
        app.add_subcommand("normalize", "canonical shape of a point file");
    c_normalize->add_option("file", o.file_a, "point file")->required();
    add_format(c_normalize);
    add_svg(c_normalize);

    auto* c_dist = app.add_subcommand("dist", "distance between two shapes");
    c_dist->add_option("a", o.file_a, "first point file")->required();
    c_dist->add_option("b", o.file_b, "second point file")->required();
    add_format(c_dist);

    auto* c_udist = app.add_subcommand("unlabeled-dist",
                                       "distance minimized over relabellings");
    c_udist->add_option("a", o.file_a, "first point file")->required();
    c_udist->add_option("b", o.file_b, "second point file")->required();
    add_format(c_udist);

    auto* c_basis = app.add_subcommand("basis", "eigenshape basis for N points");
    c_basis->add_option("N", o.basis_n, "number of points")
        ->required()
        ->check(CLI::Range(3, 1024));
    add_svg(c_basis);

    auto* c_decompose =
        app.add_subcommand("decompose", "eigenshape coefficients of a shape");
    c_decompose->add_option("file", o.file_a, "point file")->required();
    add_format(c_decompose);

    auto* c_synth = app.add_subcommand(
        "synth", "shape from eigenshape coefficients ([re,im] pairs)");
    c_synth->add_option("file", o.file_a, "coefficient file")->required();
    add_format(c_synth);
    add_svg(c_synth);

    auto* c_evolve =
        app.add_subcommand("evolve", "evolve a shape for time t");
    c_evolve->add_option("file", o.file_a, "point file")->required();
    c_evolve->add_option("--energies", o.energies, "comma list, one per eigenshape")
        ->required();
    c_evolve->add_option("--t", o.t, "evolution time")->required();
    c_evolve->add_option("--samples", o.samples, "trajectory sample count")
        ->check(CLI::Range(0, 1000000));
    add_format(c_evolve);
    add_svg(c_evolve);

    auto* c_phase =
        app.add_subcommand("phase", "phase breakdown over one period");
    c_phase->add_option("file", o.file_a, "point file")->required();
    c_phase->add_option("--energies", o.energies, "comma list, one per eigenshape")
        ->required();
    add_format(c_phase);

    auto* c_combine =
        app.add_subcommand("combine", "tensor combination of two shapes");
    c_combine->add_option("a", o.file_a, "first point file")->required();
    c_combine->add_option("b", o.file_b, "second point file")->required();
    c_combine->add_option("--convention", o.convention, "combined index order")
        ->check(CLI::IsMember({"row", "column"}))
        ->default_str("row");
    add_format(c_combine);
    add_svg(c_combine);

    auto* c_schmidt = app.add_subcommand(
        "schmidt", "Schmidt values and entropy of a combined shape");
    c_schmidt->add_option("file", o.file_a, "point file with m*n+1 points")
        ->required();
    c_schmidt->add_option("--factors", o.factors, "factor sizes, like 2,2")
        ->required();
    c_schmidt->add_option("--convention", o.convention, "combined index order")
        ->check(CLI::IsMember({"row", "column"}))
        ->default_str("row");
    c_schmidt->add_option("--tol", o.tol, "product-state tolerance (default 1e-10)");
    add_format(c_schmidt);

    auto* c_collinear =
        app.add_subcommand("collinear", "largest collinear subset of points");
    c_collinear->add_option("file", o.file_a, "point file")->required();
    c_collinear->add_option("--tol", o.tol,
                            "relative perpendicular distance (default 1e-6)");
    add_format(c_collinear);

    auto* c_diffuse = app.add_subcommand(
        "diffuse", "stochastic collapse ensemble from a shape");
    c_diffuse->add_option("file", o.file_a, "point file")->required();
    c_diffuse->add_option("--energies", o.energies, "comma list, one per eigenshape")
        ->required();
    c_diffuse->add_option("--sigma", o.sigma, "coupling strength (default 1)");
    c_diffuse->add_option("--trials", o.trials, "trajectory count")
        ->check(CLI::Range(1, 100000000));
    c_diffuse->add_option("--dt", o.dt, "time step (default from sigma and spread)");
    c_diffuse->add_option("--tmax", o.tmax, "horizon (default from sigma and spread)");
    c_diffuse->add_option("--threshold", o.threshold,
                          "collapse population threshold (default 0.999)");
    c_diffuse->add_option("--seed", o.seed, "ensemble seed (default 0)");
    c_diffuse->add_option("--threads", o.threads, "worker threads (default 1)")
        ->check(CLI::Range(1, 256));
    add_format(c_diffuse);

    auto* c_render = app.add_subcommand("render", "SVG files for point files");
    c_render->add_option("files", o.files, "point files")->required();
    c_render->add_option("--svg", o.svg_dir, "output directory")->required();
    add_format(c_render);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Ctx ctx;
    ctx.seed = o.seed;

    JsonValue command = JsonValue::array();
    for (const auto& a : args) command.push_back(a);

    JsonValue doc = JsonValue::object();
    doc.set("tool", std::string(kToolName));
    doc.set("version", std::string(kVersion));
    doc.set("command", std::move(command));

    const auto finish_error = [&](const std::string& type, const std::string& msg) {
        JsonValue error = JsonValue::object();
        error.set("type", type);
        error.set("message", msg);
        doc.set("error", std::move(error));
        out << doc.dump(2);
        return 1;
    };

    try {
        if (app.got_subcommand(c_normalize)) run_normalize(o, ctx);
        else if (app.got_subcommand(c_dist)) run_dist(o, ctx);
        else if (app.got_subcommand(c_udist)) run_unlabeled_dist(o, ctx);
        else if (app.got_subcommand(c_basis)) run_basis(o, ctx);
        else if (app.got_subcommand(c_decompose)) run_decompose(o, ctx);
        else if (app.got_subcommand(c_synth)) run_synth(o, ctx);
        else if (app.got_subcommand(c_evolve)) run_evolve(o, ctx);
        else if (app.got_subcommand(c_phase)) run_phase(o, ctx);
        else if (app.got_subcommand(c_combine)) run_combine(o, ctx);
        else if (app.got_subcommand(c_schmidt)) run_schmidt(o, ctx);
        else if (app.got_subcommand(c_collinear)) run_collinear(o, ctx);
        else if (app.got_subcommand(c_diffuse)) run_diffuse(o, ctx);
        else if (app.got_subcommand(c_render)) run_render(o, ctx);
    } catch (const Error& e) {
        return finish_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return finish_error("Internal", e.what());
    }

    doc.set("seed", ctx.seed);
    JsonValue inputs = JsonValue::array();
    for (const auto& rec : ctx.inputs) {
        JsonValue row = JsonValue::object();
        row.set("path", rec.path);
        row.set("digest", digest_string(rec.digest));
        inputs.push_back(std::move(row));
    }
    doc.set("inputs", std::move(inputs));
    if (!ctx.svg_files.empty()) {
        JsonValue files = JsonValue::array();
        for (const auto& f : ctx.svg_files) files.push_back(f);
        doc.set("svg_files", std::move(files));
    }
    doc.set("result", std::move(ctx.result));
    out << doc.dump(2);
    return 0;
}

} // namespace qshape
