// schottkylab: command-line front end for the Schottky surface laboratory.
// One subcommand per computation; every run writes its data file (CSV or
// JSON) plus a JSON manifest with the group-file hash and all tolerances.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schottky/errors.hpp"
#include "schottky/group_io.hpp"
#include "schottky/lattice.hpp"
#include "schottky/moebius.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/thermo.hpp"
#include "schottky/trace_formula.hpp"
#include "schottky/words.hpp"
#include "schottky/zeta.hpp"

namespace {

using schottky::cplx;
using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt(int x) { return std::to_string(x); }
std::string fmt(long long x) { return std::to_string(x); }

// Rows are pre-formatted strings so CSV and JSON emission are both
// deterministic byte for byte for a fixed configuration.
struct Table {
    struct Column {
        std::string name;
        bool quoted = false;  // string-valued in JSON output
    };
    std::vector<Column> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != columns.size())
            throw std::logic_error("table row width mismatch");
        rows.push_back(std::move(row));
    }
};

void write_table(const Table& t, const std::string& path, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        for (size_t c = 0; c < t.columns.size(); ++c)
            os << (c ? "," : "") << t.columns[c].name;
        os << "\n";
        for (const auto& row : t.rows) {
            for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
            os << "\n";
        }
    } else {
        os << "[\n";
        for (size_t r = 0; r < t.rows.size(); ++r) {
            os << "  {";
            for (size_t c = 0; c < t.columns.size(); ++c) {
                os << (c ? ", " : "") << '"' << t.columns[c].name << "\": ";
                if (t.columns[c].quoted)
                    os << '"' << t.rows[r][c] << '"';
                else
                    os << t.rows[r][c];
            }
            os << (r + 1 < t.rows.size() ? "},\n" : "}\n");
        }
        os << "]\n";
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << os.str();
}

// Per-run bookkeeping emitted as the manifest.
struct RunContext {
    std::string command;
    std::string group_path;
    std::string out;
    std::string manifest_path;
    std::string format = "csv";
    int threads = 0;
    json params = json::object();
    json results = json::object();
    std::vector<std::string> warnings;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void absorb(const std::vector<std::string>& w) {
        warnings.insert(warnings.end(), w.begin(), w.end());
    }

    void finish() {
        json m;
        m["command"] = command;
        m["version"] = kVersion;
        m["group_hash"] = schottky::file_hash_hex(group_path);
        m["params"] = params;
        m["results"] = results;
        m["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        m["warnings"] = warnings;
        const std::string path = manifest_path.empty()
                                     ? (out.empty() ? command + ".manifest.json"
                                                    : out + ".manifest.json")
                                     : manifest_path;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open manifest file: " + path);
        f << m.dump(2) << "\n";
    }
};

std::vector<double> parse_doubles(const std::string& text, size_t expect, const char* what) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        vals.push_back(std::stod(item, &pos));
    }
    if (expect > 0 && vals.size() != expect)
        throw CLI::ValidationError(std::string(what) + ": expected " + std::to_string(expect) +
                                   " comma-separated numbers, got '" + text + "'");
    return vals;
}

cplx parse_point(const std::string& text, const char* what) {
    const auto v = parse_doubles(text, 2, what);
    return {v[0], v[1]};
}

schottky::Rect parse_rect(const std::string& text) {
    const auto v = parse_doubles(text, 4, "--rect");
    return {v[0], v[1], v[2], v[3]};
}

std::vector<schottky::Resonance> read_resonance_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open resonance file: " + path);
    std::vector<schottky::Resonance> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-' &&
            line[0] != '+' && line[0] != '.')
            continue;  // header or comment
        std::stringstream ss(line);
        std::string item;
        std::vector<std::string> fields;
        while (std::getline(ss, item, ',')) fields.push_back(item);
        if (fields.size() < 3)
            throw std::invalid_argument("resonance file row needs re,im,order: " + line);
        schottky::Resonance r;
        r.s = cplx(std::stod(fields[0]), std::stod(fields[1]));
        r.order = std::stoi(fields[2]);
        if (fields.size() > 3) r.newton_residual = std::stod(fields[3]);
        out.push_back(r);
    }
    return out;
}

std::string word_string(const std::vector<int>& letters) {
    std::string s;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(letters[i]);
    }
    return s;
}

// ---------------------------------------------------------------- commands

void cmd_validate(RunContext& ctx, const schottky::SchottkyGroup& g) {
    const auto report = schottky::validate_schottky(g);
    std::printf("group: %s\n", g.label.empty() ? "(unlabeled)" : g.label.c_str());
    std::printf("model: %s  rank: %d  integer_trace: %s\n",
                g.model == schottky::Model::HalfPlane ? "halfplane" : "disc", g.rank,
                g.integer_trace ? "true" : "false");
    std::printf("transfer: kappa=%.6f  basis_order=%d  min_gap=%.6f\n",
                g.transfer.contraction_ratio, g.transfer.default_basis_order,
                g.transfer.min_hyperbolic_gap);
    for (const auto& c : report.checks)
        std::printf("  %-28s margin=% .3e threshold=%.3e %s\n", c.name.c_str(), c.margin,
                    c.threshold, c.pass ? "ok" : "FAIL");
    std::printf("validation: %s\n", report.pass ? "pass" : "FAIL");
    if (!report.suggestion.empty()) std::printf("suggestion: %s\n", report.suggestion.c_str());
    ctx.results["pass"] = report.pass;
    ctx.results["worst_disjointness"] = report.worst_disjointness;
    ctx.results["worst_pairing"] = report.worst_pairing;
    ctx.finish();
    if (!report.pass) throw schottky::GeometryError("validation failed");
}

void cmd_dim(RunContext& ctx, const schottky::SchottkyGroup& g, double tol, int n_max) {
    const auto r = schottky::hausdorff_dimension(g, tol, n_max);
    Table t;
    t.columns = {{"delta"}, {"delta_eigenvalue"}, {"method", true}, {"tolerance"}, {"n_used"}};
    t.add_row({fmt(r.delta), fmt(r.delta_eigenvalue), r.method, fmt(r.tolerance), fmt(r.n_used)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["delta"] = r.delta;
    ctx.results["delta_eigenvalue"] = r.delta_eigenvalue;
    ctx.results["achieved_tolerance"] = r.tolerance;
    ctx.finish();
    std::printf("delta=%.12f (eigenvalue route %.12f, agreement %.2e)\n", r.delta,
                r.delta_eigenvalue, r.tolerance);
}

void cmd_lengths(RunContext& ctx, const schottky::SchottkyGroup& g, double T, double bin_tol) {
    const auto entries = schottky::length_spectrum(g, T, bin_tol);
    Table t;
    t.columns = {{"ell"}, {"prime_length"}, {"k"}, {"multiplicity"}, {"word", true}};
    for (const auto& e : entries)
        t.add_row({fmt(e.ell), fmt(e.prime_length), fmt(e.k), fmt(e.multiplicity),
                   word_string(e.representative.letters)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["entries"] = entries.size();
    ctx.finish();
    std::printf("%zu length classes up to T=%s\n", entries.size(), fmt(T).c_str());
}

void cmd_zeta_eval(RunContext& ctx, const schottky::SchottkyGroup& g, cplx s,
                   const std::string& method, int order, double T_cut, int n_cut) {
    schottky::ZetaEvaluation ev;
    if (method == "cycle")
        ev = schottky::zeta_cycle(g, s, order > 0 ? order : 12);
    else if (method == "fredholm")
        ev = schottky::zeta_fredholm(g, s, order);
    else
        ev = schottky::zeta_product(g, s, T_cut, n_cut);
    ctx.absorb(ev.warnings);
    Table t;
    t.columns = {{"s_re"}, {"s_im"}, {"method", true}, {"order"},
                 {"value_re"}, {"value_im"}, {"error_estimate"}};
    t.add_row({fmt(s.real()), fmt(s.imag()), method, fmt(ev.order), fmt(ev.value.real()),
               fmt(ev.value.imag()), fmt(ev.error_estimate)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["value_re"] = ev.value.real();
    ctx.results["value_im"] = ev.value.imag();
    ctx.results["error_estimate"] = ev.error_estimate;
    ctx.finish();
    std::printf("Z(%g%+gi) = %.12g %+.12gi  (err<=%.2e)\n", s.real(), s.imag(),
                ev.value.real(), ev.value.imag(), ev.error_estimate);
}

void cmd_resonances(RunContext& ctx, const schottky::SchottkyGroup& g, const schottky::Rect& rect,
                    double step, int order, const std::string& grid_dump) {
    const auto search = schottky::find_resonances(g, rect, step, order);
    ctx.absorb(search.warnings);
    Table t;
    t.columns = {{"re"}, {"im"}, {"order"}, {"newton_residual"},
                 {"method", true}, {"M"}, {"box_id"}};
    int id = 0;
    for (const auto& r : search.resonances) {
        t.add_row({fmt(r.s.real()), fmt(r.s.imag()), fmt(r.order), fmt(r.newton_residual),
                   "grid-newton", fmt(search.basis_order), fmt(id)});
        ++id;
    }
    write_table(t, ctx.out, ctx.format);
    if (!grid_dump.empty()) {
        Table gd;
        gd.columns = {{"re"}, {"im"}, {"log_abs_Z"}};
        const int nx = static_cast<int>(std::floor((rect.re_max - rect.re_min) / step)) + 1;
        const int ny = static_cast<int>(std::floor((rect.im_max - rect.im_min) / step)) + 1;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const cplx s(rect.re_min + i * step, rect.im_min + j * step);
                const auto ev = schottky::zeta_fredholm(g, s, search.basis_order);
                gd.add_row({fmt(s.real()), fmt(s.imag()), fmt(std::log(std::abs(ev.value)))});
            }
        write_table(gd, grid_dump, ctx.format);
    }
    ctx.results["zeros"] = search.resonances.size();
    ctx.results["boundary_winding"] = search.boundary_winding;
    ctx.results["grid_median_abs"] = search.grid_median_abs;
    ctx.finish();
    std::printf("%zu zeros, boundary winding %d, basis order %d\n", search.resonances.size(),
                search.boundary_winding, search.basis_order);
}

void cmd_strip(RunContext& ctx, const schottky::SchottkyGroup& g, double sigma, double T,
               double step, int order, const std::string& resonance_file) {
    std::vector<schottky::Resonance> list;
    if (!resonance_file.empty()) {
        list = read_resonance_csv(resonance_file);
    } else {
        const double delta = schottky::dimension_from_operator(g);
        schottky::Rect rect{sigma, std::max(delta + 0.25, sigma + 4.0 * step), 0.0, T};
        const auto search = schottky::find_resonances(g, rect, step, order);
        ctx.absorb(search.warnings);
        list = search.resonances;
    }
    const auto census = schottky::strip_census(list, sigma, T);
    const double delta = schottky::dimension_from_operator(g);
    double theorem = std::nan(""), conj = std::nan("");
    if (delta > 0.0 && delta < 1.0) {
        const auto bound = schottky::theorem_strip(delta);
        theorem = bound.theorem_value;
        conj = bound.conjectural_value;
    }
    Table t;
    t.columns = {{"sigma"}, {"T"}, {"count"}, {"loglog_slope"},
                 {"theorem_value"}, {"conjectural_value"}};
    t.add_row({fmt(sigma), fmt(T), fmt(census.count), fmt(census.loglog_slope), fmt(theorem),
               fmt(conj)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["count"] = census.count;
    ctx.results["loglog_slope"] = census.loglog_slope;
    json ladder = json::array();
    for (const auto& [h, n] : census.ladder) ladder.push_back({{"height", h}, {"count", n}});
    ctx.results["ladder"] = ladder;
    ctx.finish();
    std::printf("census: %d zeros with Re>=%s, Im<=%s (loglog slope %.3f)\n", census.count,
                fmt(sigma).c_str(), fmt(T).c_str(), census.loglog_slope);
}

void cmd_trace_check(RunContext& ctx, const schottky::SchottkyGroup& g, double T, double xi,
                     double rho, const schottky::TraceCheckOptions& opts,
                     const std::string& resonance_file) {
    std::vector<schottky::Resonance> list;
    if (!resonance_file.empty()) {
        list = read_resonance_csv(resonance_file);
    } else if (g.rank == 1) {
        // Cylinder resonances are known exactly: s = i pi m / (l0/2) rows of
        // order 2 plus the simple zero at 0; for l0 = 2 the rows sit at i pi m.
        const double l0 = schottky::length_spectrum(g, 10.0)[0].prime_length;
        const double spacing = 2.0 * 3.14159265358979323846 / l0;
        const double top = opts.covered_height > 0.0 ? opts.covered_height : 40.0 * spacing;
        for (int m = 0; spacing * m <= top; ++m)
            list.push_back({cplx(0.0, spacing * m), 2, 0.0});
    } else {
        throw std::invalid_argument("trace-check: --resonances file required for rank >= 2");
    }
    schottky::TestFunction tf;
    tf.xi = xi;
    tf.T = T;
    tf.amplitude = 1.0;
    const auto rep = schottky::resonance_check(g, tf, rho, list, opts);
    Table t;
    t.columns = {{"T"}, {"rho"}, {"geodesic_side_re"}, {"geodesic_side_im"},
                 {"resonance_side_re"}, {"resonance_side_im"}, {"residual_abs"},
                 {"bound_estimate"}};
    t.add_row({fmt(T), fmt(rho), fmt(rep.geodesic_value.real()), fmt(rep.geodesic_value.imag()),
               fmt(rep.resonance_value.real()), fmt(rep.resonance_value.imag()),
               fmt(std::abs(rep.residual)), fmt(rep.bound_estimate)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["residual_abs"] = std::abs(rep.residual);
    ctx.results["bound_estimate"] = rep.bound_estimate;
    ctx.results["epsilon_used"] = rep.epsilon_used;
    ctx.finish();
    std::printf("T=%s residual %.6e within bound %.6f (eps=%.4f)\n", fmt(T).c_str(),
                std::abs(rep.residual), rep.bound_estimate, rep.epsilon_used);
}

void cmd_mean_square(RunContext& ctx, const schottky::SchottkyGroup& g, double sigma, double T) {
    const auto ms = schottky::mean_square_G(g, sigma, T);
    Table t;
    t.columns = {{"sigma"}, {"T"}, {"G"}, {"diagonal"}};
    t.add_row({fmt(sigma), fmt(T), fmt(ms.value), fmt(ms.diagonal)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["G"] = ms.value;
    ctx.results["diagonal"] = ms.diagonal;
    ctx.finish();
    std::printf("G(sigma=%s, T=%s) = %.9f  diagonal %.9f\n", fmt(sigma).c_str(), fmt(T).c_str(),
                ms.value, ms.diagonal);
}

void cmd_moments(RunContext& ctx, const schottky::SchottkyGroup& g, double T) {
    const auto rep = schottky::multiplicity_moments(g, T);
    Table t;
    t.columns = {{"T"}, {"m_sum"}, {"m2_sum"}, {"distinct"}};
    for (const auto& w : rep.ladder)
        t.add_row({fmt(w.T), fmt(w.m_sum), fmt(w.m2_sum), fmt(w.distinct)});
    if (rep.ladder.empty() || rep.ladder.back().T != rep.at_T.T)
        t.add_row({fmt(rep.at_T.T), fmt(rep.at_T.m_sum), fmt(rep.at_T.m2_sum),
                   fmt(rep.at_T.distinct)});
    write_table(t, ctx.out, ctx.format);
    ctx.results["m2_exponent"] = rep.m2_exponent;
    ctx.results["distinct_exponent"] = rep.distinct_exponent;
    ctx.results["max_trace_cluster"] = rep.max_trace_cluster;
    ctx.finish();
    std::printf("m2 exponent %.4f, distinct exponent %.4f, max trace cluster %d\n",
                rep.m2_exponent, rep.distinct_exponent, rep.max_trace_cluster);
}

// Base points are taken in the group's native model; the default is i in the
// half-plane and the origin in the disc.
schottky::HPoint native_point(const schottky::SchottkyGroup& g, const std::string& text,
                              const char* what) {
    if (text.empty())
        return {g.model == schottky::Model::HalfPlane ? cplx(0.0, 1.0) : cplx(0.0, 0.0), g.model};
    return {parse_point(text, what), g.model};
}

void cmd_count(RunContext& ctx, const schottky::SchottkyGroup& g, const std::vector<double>& Ts,
               const schottky::HPoint& hz, const schottky::HPoint& hzp, long long budget) {
    schottky::OrbitOptions opts;
    opts.node_budget = budget;
    Table t;
    t.columns = {{"T"}, {"N"}, {"pruned_nodes"}, {"visited_nodes"}};
    for (double T : Ts) {
        const auto c = schottky::orbit_count(g, hz, hzp, T, opts);
        t.add_row({fmt(T), fmt(c.count), fmt(c.pruned_nodes), fmt(c.visited_nodes)});
        std::printf("N(%s) = %lld  (visited %lld, pruned %lld)\n", fmt(T).c_str(), c.count,
                    c.visited_nodes, c.pruned_nodes);
    }
    write_table(t, ctx.out, ctx.format);
    ctx.results["points"] = Ts.size();
    ctx.finish();
}

void cmd_residuals(RunContext& ctx, const schottky::SchottkyGroup& g, double T_min, double T_max,
                   int samples, const schottky::HPoint& hz, const schottky::HPoint& hzp,
                   int degree) {
    if (samples < 2) throw std::invalid_argument("residuals: need at least 2 samples");
    std::vector<schottky::OrbitCount> counts;
    for (int i = 0; i < samples; ++i) {
        const double T = T_min + (T_max - T_min) * i / (samples - 1);
        counts.push_back(schottky::orbit_count(g, hz, hzp, T));
    }
    const double delta = schottky::dimension_from_operator(g);
    std::vector<schottky::ExpansionTerm> terms = {{cplx(delta, 0.0), degree}};
    const auto model = schottky::fit_expansion(counts, terms);
    const std::vector<double> betas = {0.25 * delta, 0.5 * delta, 0.75 * delta, delta};
    const auto rr = schottky::residual_analysis(counts, model, betas);
    Table t;
    t.columns = {{"T"}, {"N"}, {"model_value"}, {"residual"}};
    for (size_t i = 0; i < counts.size(); ++i)
        t.add_row({fmt(counts[i].T), fmt(counts[i].count),
                   fmt(schottky::eval_expansion(model, counts[i].T)), fmt(rr.residual[i])});
    write_table(t, ctx.out, ctx.format);
    json coeffs = json::array();
    for (double c : model.coefficients) coeffs.push_back(c);
    ctx.results["coefficients"] = coeffs;
    json bs = json::array();
    for (const auto& [b, s] : rr.beta_sup) bs.push_back({{"beta", b}, {"sup", s}});
    ctx.results["beta_sup"] = bs;
    ctx.results["sign_changes"] = rr.sign_changes;
    ctx.finish();
    std::printf("fit exponent delta=%.6f, %d residual sign changes\n", delta, rr.sign_changes);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"schottkylab: resonances, dimension, and lattice counting on "
                 "convex co-compact Schottky surfaces"};
    app.require_subcommand(1);

    std::string group_path, out, manifest, format = "csv";
    int threads = 0;
    app.add_option("--threads", threads, "parallelism cap (results are thread-count invariant)")
        ->capture_default_str();

    RunContext ctx;

    // Shared per-subcommand plumbing: every subcommand takes the group file,
    // an output path, an output format, and an optional manifest path.
    auto common = [&](CLI::App* sub, const char* default_out) {
        sub->add_option("--group", group_path, "group config file")->required();
        sub->add_option("--out", out, "output data file")->default_val(default_out);
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--manifest", manifest, "manifest path (default <out>.manifest.json)");
    };

    auto* validate = app.add_subcommand("validate", "check Schottky disc geometry");
    common(validate, "");

    auto* dim = app.add_subcommand("dim", "Hausdorff dimension of the limit set");
    double dim_tol = 1e-6;
    int dim_nmax = 16;
    common(dim, "dim.csv");
    dim->add_option("--tol", dim_tol, "target tolerance")->capture_default_str();
    dim->add_option("--n-max", dim_nmax, "deepest word length")->capture_default_str();

    auto* lengths = app.add_subcommand("lengths", "length spectrum up to T");
    double len_T = 8.0, len_bin = 1e-7;
    common(lengths, "lengths.csv");
    lengths->add_option("--T", len_T, "length cutoff")->required();
    lengths->add_option("--bin-tol", len_bin, "merge tolerance")->capture_default_str();

    auto* zeta = app.add_subcommand("zeta-eval", "evaluate the Selberg zeta function");
    std::string zeta_s = "1,0", zeta_method = "fredholm";
    int zeta_order = 0, zeta_ncut = 6;
    double zeta_tcut = 8.0;
    common(zeta, "zeta.csv");
    zeta->add_option("--s", zeta_s, "evaluation point re,im")->required();
    zeta->add_option("--method", zeta_method, "cycle | fredholm | product")
        ->check(CLI::IsMember({"cycle", "fredholm", "product"}))
        ->capture_default_str();
    zeta->add_option("--order", zeta_order, "cumulant cutoff N or basis order M (0 = default)")
        ->capture_default_str();
    zeta->add_option("--T-cut", zeta_tcut, "product: prime length cutoff")->capture_default_str();
    zeta->add_option("--n-cut", zeta_ncut, "product: shift cutoff")->capture_default_str();

    auto* res = app.add_subcommand("resonances", "zero search in a rectangle");
    std::string res_rect, res_grid_dump;
    double res_step = 0.05;
    int res_order = 0;
    common(res, "resonances.csv");
    res->add_option("--rect", res_rect, "search rectangle re_min,re_max,im_min,im_max")
        ->required();
    res->add_option("--step", res_step, "grid step")->capture_default_str();
    res->add_option("--order", res_order, "basis order M (0 = default)")->capture_default_str();
    res->add_option("--grid-dump", res_grid_dump, "also write the |Z| scan grid to this path");

    auto* strip = app.add_subcommand("strip", "resonance census in a vertical strip");
    double strip_sigma = 0.0, strip_T = 10.0, strip_step = 0.05;
    int strip_order = 0;
    std::string strip_res_file;
    common(strip, "strip.csv");
    strip->add_option("--sigma", strip_sigma, "strip abscissa")->required();
    strip->add_option("--T", strip_T, "height cutoff")->required();
    strip->add_option("--step", strip_step, "grid step for the search")->capture_default_str();
    strip->add_option("--order", strip_order, "basis order M (0 = default)")
        ->capture_default_str();
    strip->add_option("--resonances", strip_res_file, "reuse zeros from this CSV");

    auto* tc = app.add_subcommand("trace-check", "two-sided trace formula comparison");
    double tc_T = 8.0, tc_xi = 0.0, tc_rho = std::nan(""), tc_eps = 0.05, tc_height = 0.0,
           tc_tail = 1e-10;
    int tc_order = 0;
    std::string tc_res_file;
    common(tc, "trace-check.csv");
    tc->add_option("--T", tc_T, "test function center")->required();
    tc->add_option("--xi", tc_xi, "test function frequency")->capture_default_str();
    tc->add_option("--rho", tc_rho, "half-plane abscissa (default -0.25 on cylinders)");
    tc->add_option("--eps", tc_eps, "verification line offset")->capture_default_str();
    tc->add_option("--height", tc_height, "certified resonance coverage height")
        ->capture_default_str();
    tc->add_option("--tail-tol", tc_tail, "coverage tail tolerance")->capture_default_str();
    tc->add_option("--order", tc_order, "basis order M (0 = default)")->capture_default_str();
    tc->add_option("--resonances", tc_res_file, "resonance list CSV (re,im,order[,residual])");

    auto* ms = app.add_subcommand("mean-square", "Gaussian mean square of the geodesic side");
    double ms_sigma = 1.0, ms_T = 8.0;
    common(ms, "mean-square.csv");
    ms->add_option("--sigma", ms_sigma, "Gaussian width parameter")->required();
    ms->add_option("--T", ms_T, "test function center")->required();

    auto* mom = app.add_subcommand("moments", "multiplicity moments in sliding windows");
    double mom_T = 12.0;
    common(mom, "moments.csv");
    mom->add_option("--T", mom_T, "top window center")->required();

    auto* cnt = app.add_subcommand("count", "hyperbolic lattice-point counting");
    std::string cnt_T = "8", cnt_z, cnt_zp;
    long long cnt_budget = 50000000;
    common(cnt, "count.csv");
    cnt->add_option("--T", cnt_T, "distance cutoff(s), comma separated")->required();
    cnt->add_option("--z", cnt_z, "base point re,im in the group's model (default i or 0)");
    cnt->add_option("--zp", cnt_zp, "target point re,im (default --z)");
    cnt->add_option("--budget", cnt_budget, "node budget")->capture_default_str();

    auto* rsd = app.add_subcommand("residuals", "counting residuals against the leading term");
    double rsd_tmin = 4.0, rsd_tmax = 10.0;
    int rsd_samples = 9, rsd_degree = 0;
    std::string rsd_z, rsd_zp;
    common(rsd, "residuals.csv");
    rsd->add_option("--T-min", rsd_tmin, "smallest cutoff")->capture_default_str();
    rsd->add_option("--T-max", rsd_tmax, "largest cutoff")->required();
    rsd->add_option("--samples", rsd_samples, "ladder size")->capture_default_str();
    rsd->add_option("--degree", rsd_degree, "polynomial degree on the leading term")
        ->capture_default_str();
    rsd->add_option("--z", rsd_z, "base point re,im in the group's model (default i or 0)");
    rsd->add_option("--zp", rsd_zp, "target point re,im (default --z)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        std::fprintf(stderr, "%s", app.help().c_str());
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        ctx.command = sub->get_name();
        ctx.group_path = group_path;
        ctx.out = out;
        ctx.manifest_path = manifest;
        ctx.format = format;
        ctx.threads = threads;
        for (const auto* opt : sub->get_options())
            if (opt->count() > 0 || !opt->get_default_str().empty())
                ctx.params[opt->get_name()] =
                    opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
        ctx.params["--threads"] = threads;

        const schottky::SchottkyGroup g = schottky::read_group(group_path);

        if (sub == validate) {
            cmd_validate(ctx, g);
        } else if (sub == dim) {
            cmd_dim(ctx, g, dim_tol, dim_nmax);
        } else if (sub == lengths) {
            cmd_lengths(ctx, g, len_T, len_bin);
        } else if (sub == zeta) {
            cmd_zeta_eval(ctx, g, parse_point(zeta_s, "--s"), zeta_method, zeta_order, zeta_tcut,
                          zeta_ncut);
        } else if (sub == res) {
            cmd_resonances(ctx, g, parse_rect(res_rect), res_step, res_order, res_grid_dump);
        } else if (sub == strip) {
            cmd_strip(ctx, g, strip_sigma, strip_T, strip_step, strip_order, strip_res_file);
        } else if (sub == tc) {
            if (std::isnan(tc_rho)) {
                if (g.rank != 1)
                    throw std::invalid_argument("trace-check: --rho required for rank >= 2");
                tc_rho = -0.25;
            }
            schottky::TraceCheckOptions opts;
            opts.epsilon = tc_eps;
            opts.covered_height = tc_height;
            opts.tail_tolerance = tc_tail;
            opts.basis_order = tc_order;
            cmd_trace_check(ctx, g, tc_T, tc_xi, tc_rho, opts, tc_res_file);
        } else if (sub == ms) {
            cmd_mean_square(ctx, g, ms_sigma, ms_T);
        } else if (sub == mom) {
            cmd_moments(ctx, g, mom_T);
        } else if (sub == cnt) {
            const auto z = native_point(g, cnt_z, "--z");
            const auto zp = cnt_zp.empty() ? z : native_point(g, cnt_zp, "--zp");
            cmd_count(ctx, g, parse_doubles(cnt_T, 0, "--T"), z, zp, cnt_budget);
        } else if (sub == rsd) {
            const auto z = native_point(g, rsd_z, "--z");
            const auto zp = rsd_zp.empty() ? z : native_point(g, rsd_zp, "--zp");
            cmd_residuals(ctx, g, rsd_tmin, rsd_tmax, rsd_samples, z, zp, rsd_degree);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "schottkylab: %s\n", e.what());
        return 1;
    }
    return 0;
}
