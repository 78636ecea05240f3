// mdicke: command-line driver for the mean-field, Gaussian-fluctuation and
// exact-diagonalization pipelines.
//
// Every subcommand writes <out>/<subcommand>.csv and .json with a metadata
// block (config hash, model hash, code version) and appends wall-clock
// details to <out>/run.log, so the CSV/JSON bytes depend on inputs only.
//
// Exit codes: 0 success, 1 numerical failure, 2 input or validation error.

#include "mdicke/analysis.hpp"
#include "mdicke/ed.hpp"
#include "mdicke/fluctuations.hpp"
#include "mdicke/model_io.hpp"
#include "mdicke/scan.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace mdicke;

namespace {

struct Common {
    std::string model_path;
    int reference{0};
    std::string out_dir{"."};
    int workers{0};
    std::uint64_t seed{1};
    std::size_t mem_cap_mb{8192};
};

struct ScanArgs {
    std::vector<std::string> axes;
    bool no_boundary{false};
};

struct CritArgs {
    int order{5};
};

struct FluctArgs {
    std::vector<std::string> axes;
    bool force_normal{false};
    int atoms{0};
};

struct EdArgs {
    int atoms{0};
    std::string nmax{"auto"};
    std::vector<std::string> axes;
    std::vector<std::string> observables{"e0", "e1", "gap", "entropy", "photon_number"};
};

struct CritEntropyArgs {
    std::vector<int> atoms;
    std::vector<double> bracket{1.0, 3.0};
    std::string level{"h22"};
    int nmax{0};
    int prescan{32};
    double tol{1e-6};
};

struct FitArgs {
    std::string input;
    int order{2};
};

struct LoadedModel {
    AtomModel model;
    ModelParams params;
};

LoadedModel load_model(const Common& c)
{
    if (c.reference != 0) {
        if (!c.model_path.empty()) throw InputError("give either --model or --reference, not both");
        const ReferenceModel ref = raman_scheme_model(c.reference);
        return {ref.model.expand(), ref.params};
    }
    if (c.model_path.empty()) throw InputError("a model is required (--model or --reference)");
    ModelFile mf = load_model_file(c.model_path);
    const ValidationReport rep = validate(mf.model);
    if (!rep.ok()) throw InputError("invalid model:\n" + rep.to_string());
    return {mf.model, mf.params};
}

// Resolved run parameters; hashed and echoed into every output.
class RunConfig {
public:
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set(const std::string& key, double value) { values_[key] = format_double(value); }
    void set(const std::string& key, long long value) { values_[key] = std::to_string(value); }

    Metadata metadata(const std::string& subcommand, const LoadedModel* model) const
    {
        std::string canonical = "subcommand=" + subcommand + "\n";
        for (const auto& [k, v] : values_) canonical += k + "=" + v + "\n";
        Metadata meta;
        meta["code_version"] = std::string(kCodeVersion);
        meta["config_hash"] = hex64(fnv1a(canonical));
        meta["subcommand"] = subcommand;
        if (model) meta["model_hash"] = hex64(model_hash(model->model, model->params));
        for (const auto& [k, v] : values_) meta["param." + k] = v;
        return meta;
    }

private:
    std::map<std::string, std::string> values_;
};

std::string join(const std::vector<std::string>& xs, const char* sep = ";")
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

std::string join_doubles(const std::vector<double>& xs)
{
    std::vector<std::string> s;
    for (double x : xs) s.push_back(format_double(x));
    return join(s);
}

class Outputs {
public:
    Outputs(const Common& c, std::string subcommand) : dir_(fs::absolute(c.out_dir)), sub_(std::move(subcommand))
    {
        fs::create_directories(dir_);
    }

    std::ofstream open(const std::string& suffix) const
    {
        std::ofstream f(dir_ / (sub_ + suffix), std::ios::binary);
        if (!f) throw InputError("cannot write " + (dir_ / (sub_ + suffix)).string());
        return f;
    }

    void json(const nlohmann::json& j) const { open(".json") << j.dump(2) << '\n'; }

    void log(double seconds, int exit_code) const
    {
        std::ofstream f(dir_ / "run.log", std::ios::app);
        const std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        f << stamp << ' ' << sub_ << " exit=" << exit_code << " seconds=" << seconds << '\n';
    }

private:
    fs::path dir_;
    std::string sub_;
};

std::vector<ScanAxis> parse_axes(const std::vector<std::string>& specs, int levels)
{
    std::vector<ScanAxis> axes;
    for (const auto& s : specs) axes.push_back(parse_axis(s, levels));
    return axes;
}

// All grid points of a small sweep, axis 0 slowest; a single empty point when
// no axis is given.
std::vector<std::vector<double>> sweep_points(const std::vector<ScanAxis>& axes)
{
    std::vector<std::vector<double>> pts{{}};
    for (const auto& ax : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& p : pts) {
            for (int i = 0; i < ax.points; ++i) {
                auto q = p;
                q.push_back(ax.value(i));
                next.push_back(std::move(q));
            }
        }
        pts = std::move(next);
    }
    return pts;
}

AtomModel apply_point(AtomModel m, const std::vector<ScanAxis>& axes, const std::vector<double>& coords)
{
    for (std::size_t a = 0; a < axes.size(); ++a) m.h_diag[axes[a].level] = coords[a];
    return m;
}

int run_mf_scan(const Common& c, const ScanArgs& a)
{
    const LoadedModel lm = load_model(c);
    if (a.axes.empty()) throw InputError("mf-scan needs at least one --axis");
    std::vector<ScanAxis> axes = parse_axes(a.axes, lm.model.levels);

    RunConfig cfg;
    cfg.set("axes", join(a.axes));
    cfg.set("boundary", a.no_boundary ? "off" : "on");
    cfg.set("kappa", lm.params.kappa);
    cfg.set("mem_cap_mb", static_cast<long long>(c.mem_cap_mb));

    ScanOptions opts;
    opts.workers = c.workers;
    opts.mem_cap_bytes = c.mem_cap_mb << 20;
    opts.trace_boundary = !a.no_boundary;
    const ScanResult scan = scan_phase_diagram(lm.model, lm.params.kappa, axes, opts);

    const Metadata meta = cfg.metadata("mf-scan", &lm);
    Outputs out(c, "mf-scan");
    {
        auto f = out.open(".csv");
        write_scan_csv(f, scan, meta);
    }
    if (scan.boundary) {
        auto f = out.open("_boundary.csv");
        write_boundary_csv(f, scan, meta);
    }
    out.json(scan_to_json(scan, meta));

    if (scan.boundary && axes.size() == 1) {
        for (const auto& p : scan.boundary->points) {
            std::cout << axes[0].name << " crossing at " << format_double(p.x) << " (" << to_string(p.order)
                      << ")\n";
        }
    }
    return 0;
}

int run_crit_check(const Common& c, const CritArgs& a)
{
    const LoadedModel lm = load_model(c);
    if (a.order < 1 || a.order > 12) throw InputError("--order must lie in 1..12");
    RunConfig cfg;
    cfg.set("order", static_cast<long long>(a.order));
    cfg.set("kappa", lm.params.kappa);

    const double kappa = lm.params.kappa;
    const LandauCoefficients lc = landau_coefficients(lm.model, kappa, a.order);
    const double r3 = ordinary_critical_residual(lm.model, kappa);
    const double r4 = c2_residual(lm.model, kappa);
    const auto tclass = as_tclass(lm.model);

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("ordinary_critical_residual", format_double(r3));
    rows.emplace_back("c2_residual", format_double(r4));
    if (tclass) {
        rows.emplace_back("tclass_order", std::to_string(tclass_criticality_order(*tclass, kappa)));
        const ZetaPolynomial z = tclass_determinant(*tclass, kappa, 1.0);
        rows.emplace_back("zeta_lowest_power", std::to_string(z.lowest_power));
    } else {
        rows.emplace_back("tclass_order", "skipped");
    }
    for (std::size_t k = 0; k < lc.c.size(); ++k) rows.emplace_back("c" + std::to_string(k), format_double(lc.c[k]));
    rows.emplace_back("max_odd_correction", format_double(lc.max_odd_correction));

    const Metadata meta = cfg.metadata("crit-check", &lm);
    Outputs out(c, "crit-check");
    {
        auto f = out.open(".csv");
        CsvWriter w(f, meta, {"quantity", "value"});
        for (const auto& [k, v] : rows) w.row({k, v});
    }
    nlohmann::json j;
    j["metadata"] = meta;
    for (const auto& [k, v] : rows) j["results"][k] = v;
    out.json(j);
    for (const auto& [k, v] : rows) std::cout << k << " = " << v << '\n';
    return 0;
}

int run_fluct(const Common& c, const FluctArgs& a)
{
    const LoadedModel lm = load_model(c);
    const std::vector<ScanAxis> axes = parse_axes(a.axes, lm.model.levels);
    RunConfig cfg;
    cfg.set("axes", join(a.axes));
    cfg.set("branch", a.force_normal ? "normal" : "minimum");
    cfg.set("N", static_cast<long long>(a.atoms));

    std::vector<std::string> cols;
    for (const auto& ax : axes) cols.push_back(ax.name);
    for (const char* s : {"phi", "valid", "lambdas", "gap", "gamma", "entropy", "photon_fluct", "depletion",
                          "divergent", "flags"}) {
        cols.emplace_back(s);
    }
    const Metadata meta = cfg.metadata("fluct", &lm);
    Outputs out(c, "fluct");
    auto f = out.open(".csv");
    CsvWriter w(f, meta, cols);
    nlohmann::json records = nlohmann::json::array();
    const auto points = sweep_points(axes);
    for (const auto& coords : points) {
        const AtomModel m = apply_point(lm.model, axes, coords);
        std::vector<std::string> row;
        for (double x : coords) row.push_back(format_double(x));
        nlohmann::json rec;
        rec["coords"] = coords;
        try {
            const FluctuationInput in = a.force_normal ? fluctuation_input_at(m, lm.params, 0.0)
                                                       : build_fluctuation_input(m, lm.params);
            const FluctuationSpectrum s = fluctuation_spectrum(in, lm.params);
            std::string flags = s.valid ? "" : "asymptotic-expansion-invalid";
            if (a.atoms > 0 && s.valid && !(s.depletion < 0.1 * a.atoms)) flags = "depletion-warning";
            row.insert(row.end(), {format_double(in.phi), s.valid ? "1" : "0", join_doubles(s.lambdas),
                                   format_double(s.gap), format_double(s.gamma), format_double(s.entropy),
                                   format_double(s.photon_fluct), format_double(s.depletion),
                                   s.divergent ? "1" : "0", flags});
            rec["phi"] = in.phi;
            rec["valid"] = s.valid;
            nlohmann::json lam = nlohmann::json::array();
            for (double x : s.lambdas) lam.push_back(json_number(x));
            rec["lambdas"] = lam;
            rec["gap"] = json_number(s.gap);
            rec["gamma"] = json_number(s.gamma);
            rec["entropy"] = json_number(s.entropy);
            rec["photon_fluct"] = json_number(s.photon_fluct);
            rec["depletion"] = json_number(s.depletion);
            rec["divergent"] = s.divergent;
            rec["flags"] = flags;
        } catch (const InputError& e) {
            if (points.size() == 1) throw;
            row.insert(row.end(), {"nan", "0", "", "nan", "nan", "nan", "nan", "nan", "0", "degenerate-ground-state"});
            rec["error"] = e.what();
        }
        w.row(row);
        records.push_back(std::move(rec));
    }
    nlohmann::json j;
    j["metadata"] = meta;
    j["records"] = std::move(records);
    out.json(j);
    return 0;
}

int run_ed(const Common& c, const EdArgs& a)
{
    const LoadedModel lm = load_model(c);
    if (a.atoms < 1) throw InputError("--N must be >= 1");
    const bool auto_cutoff = a.nmax == "auto";
    int fixed = 0;
    if (!auto_cutoff) {
        try {
            fixed = std::stoi(a.nmax);
        } catch (const std::exception&) {
            throw InputError("--nmax must be an integer or 'auto'");
        }
        if (fixed < 1) throw InputError("--nmax must be >= 1");
    }
    static const std::vector<std::string> known{"e0", "e1", "gap", "entropy", "photon_number"};
    for (const auto& o : a.observables) {
        if (std::find(known.begin(), known.end(), o) == known.end()) throw InputError("unknown observable '" + o + "'");
    }
    const std::vector<ScanAxis> axes = parse_axes(a.axes, lm.model.levels);

    RunConfig cfg;
    cfg.set("N", static_cast<long long>(a.atoms));
    cfg.set("nmax", a.nmax);
    cfg.set("axes", join(a.axes));
    cfg.set("observables", join(a.observables));
    cfg.set("seed", static_cast<long long>(c.seed));
    cfg.set("mem_cap_mb", static_cast<long long>(c.mem_cap_mb));

    EdOptions eo;
    eo.lanczos.seed = c.seed;
    eo.lanczos.workers = c.workers;
    const std::size_t cap = c.mem_cap_mb << 20;

    std::vector<std::string> cols;
    for (const auto& ax : axes) cols.push_back(ax.name);
    cols.insert(cols.end(), {"N", "n_max"});
    cols.insert(cols.end(), a.observables.begin(), a.observables.end());
    cols.insert(cols.end(), {"converged", "certified", "max_residual"});

    const Metadata meta = cfg.metadata("ed", &lm);
    Outputs out(c, "ed");
    auto f = out.open(".csv");
    CsvWriter w(f, meta, cols);
    nlohmann::json records = nlohmann::json::array();
    bool all_converged = true;
    for (const auto& coords : sweep_points(axes)) {
        const AtomModel m = apply_point(lm.model, axes, coords);
        EDResult r;
        bool certified = false;
        nlohmann::json steps = nlohmann::json::array();
        if (auto_cutoff) {
            const auto schedule = default_cutoff_schedule(m, lm.params, a.atoms);
            CutoffReport rep = cutoff_convergence(m, lm.params, a.atoms, schedule, eo, {}, cap);
            certified = rep.converged;
            for (const auto& s : rep.steps) {
                steps.push_back({{"n_max", s.n_max}, {"entropy", s.entropy}, {"gap", s.gap}, {"e0", s.e0},
                                 {"photon_number", s.photon_number}, {"solver_converged", s.solver_converged}});
            }
            r = std::move(rep.result);
        } else {
            const SymmetricBasis basis(a.atoms, m.levels, fixed, cap);
            r = solve_ed(m, lm.params, basis, eo);
        }
        all_converged = all_converged && r.converged;
        const double max_res = r.residuals.empty() ? 0.0 : *std::max_element(r.residuals.begin(), r.residuals.end());
        const std::map<std::string, double> obs{{"e0", r.e0}, {"e1", r.e1}, {"gap", r.gap}, {"entropy", r.entropy},
                                                {"photon_number", r.photon_number}};
        std::vector<std::string> row;
        for (double x : coords) row.push_back(format_double(x));
        row.push_back(std::to_string(a.atoms));
        row.push_back(std::to_string(r.n_max));
        for (const auto& o : a.observables) row.push_back(format_double(obs.at(o)));
        row.push_back(r.converged ? "1" : "0");
        row.push_back(auto_cutoff ? (certified ? "1" : "0") : "");
        row.push_back(format_double(max_res));
        w.row(row);

        nlohmann::json rec;
        rec["coords"] = coords;
        rec["N"] = a.atoms;
        rec["n_max"] = r.n_max;
        for (const auto& o : a.observables) rec[o] = json_number(obs.at(o));
        rec["ground_parity"] = r.ground_parity;
        rec["converged"] = r.converged;
        rec["residuals"] = r.residuals;
        rec["matvecs"] = r.matvecs;
        if (auto_cutoff) {
            rec["cutoff_certified"] = certified;
            rec["cutoff_steps"] = std::move(steps);
        }
        records.push_back(std::move(rec));
    }
    nlohmann::json j;
    j["metadata"] = meta;
    j["records"] = std::move(records);
    out.json(j);
    if (!all_converged) {
        std::cerr << "ed: eigensolver did not converge for at least one point (see residuals)\n";
        return 1;
    }
    return 0;
}

int run_crit_entropy(const Common& c, const CritEntropyArgs& a)
{
    const LoadedModel lm = load_model(c);
    if (a.atoms.empty()) throw InputError("--N-list is required");
    for (int n : a.atoms) {
        if (n < 1) throw InputError("--N-list entries must be >= 1");
    }
    if (a.bracket.size() != 2) throw InputError("--bracket takes two values");

    CriticalSearchOptions so;
    so.lo = a.bracket[0];
    so.hi = a.bracket[1];
    so.prescan = a.prescan;
    so.tol = a.tol;
    so.level = parse_level_name(a.level, lm.model.levels);
    if (a.nmax > 0) so.n_max = a.nmax;
    so.ed.lanczos.seed = c.seed;
    so.ed.lanczos.workers = c.workers;
    so.mem_cap_bytes = c.mem_cap_mb << 20;

    RunConfig cfg;
    std::vector<std::string> ns;
    for (int n : a.atoms) ns.push_back(std::to_string(n));
    cfg.set("N_list", join(ns));
    cfg.set("bracket", join_doubles(a.bracket));
    cfg.set("level", a.level);
    cfg.set("nmax", a.nmax > 0 ? std::to_string(a.nmax) : std::string("auto"));
    cfg.set("prescan", static_cast<long long>(a.prescan));
    cfg.set("tol", a.tol);
    cfg.set("seed", static_cast<long long>(c.seed));
    cfg.set("mem_cap_mb", static_cast<long long>(c.mem_cap_mb));

    const Metadata meta = cfg.metadata("crit-entropy", &lm);
    Outputs out(c, "crit-entropy");
    auto f = out.open(".csv");
    CsvWriter w(f, meta, {"N", a.level + "_star", "S_cri", "n_max_used", "certified", "unimodal"});
    nlohmann::json records = nlohmann::json::array();
    for (int n : a.atoms) {
        const CriticalEntropy ce = locate_critical_entropy(lm.model, lm.params, n, so);
        w.row({std::to_string(n), format_double(ce.h_star), format_double(ce.s_cri), std::to_string(ce.n_max),
               ce.certified ? "1" : "0", ce.unimodal ? "1" : "0"});
        f.flush();
        nlohmann::json pre = nlohmann::json::array();
        for (const auto& [x, s] : ce.prescan) pre.push_back({x, s});
        records.push_back({{"N", n}, {"h_star", ce.h_star}, {"S_cri", ce.s_cri}, {"n_max", ce.n_max},
                           {"certified", ce.certified}, {"unimodal", ce.unimodal},
                           {"evaluations", ce.evaluations}, {"prescan", pre}});
        if (!ce.unimodal) std::cerr << "crit-entropy: N=" << n << " pre-scan not unimodal; best grid point kept\n";
    }
    nlohmann::json j;
    j["metadata"] = meta;
    j["records"] = std::move(records);
    out.json(j);
    return 0;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

int run_fit(const Common& c, const FitArgs& a)
{
    std::ifstream in(a.input);
    if (!in) throw InputError("cannot open input CSV " + a.input);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::pair<double, double>> pts;
    int excluded = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = split(line, ',');
            continue;
        }
        const auto cells = split(line, ',');
        auto col = [&](const std::string& name) -> const std::string& {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw InputError("input CSV lacks column '" + name + "'");
            return cells.at(static_cast<std::size_t>(it - header.begin()));
        };
        if (col("certified") != "1") {
            ++excluded;
            continue;
        }
        pts.emplace_back(std::stod(col("N")), std::stod(col("S_cri")));
    }
    if (header.empty()) throw InputError("input CSV has no header");
    std::sort(pts.begin(), pts.end());

    RunConfig cfg;
    cfg.set("input_hash", [&] {
        std::ifstream raw(a.input, std::ios::binary);
        std::stringstream ss;
        ss << raw.rdbuf();
        return hex64(fnv1a(ss.str()));
    }());
    cfg.set("order", static_cast<long long>(a.order));
    cfg.set("excluded_uncertified", static_cast<long long>(excluded));

    const ScalingFit full = fit_log_scaling(pts);
    const auto upper = fit_upper_half(pts);

    const Metadata meta = cfg.metadata("fit", nullptr);
    Outputs out(c, "fit");
    auto f = out.open(".csv");
    CsvWriter w(f, meta, {"order", "window", "s0", "s1", "se_s0", "se_s1", "N_min", "N_max", "R2"});
    nlohmann::json fits = nlohmann::json::array();
    auto emit = [&](const std::string& window, const ScalingFit& s) {
        w.row({std::to_string(a.order), window, format_double(s.s0), format_double(s.s1), format_double(s.se_s0),
               format_double(s.se_s1), format_double(s.n_min), format_double(s.n_max), format_double(s.r2)});
        fits.push_back({{"window", window}, {"s0", s.s0}, {"s1", s.s1}, {"se_s0", s.se_s0}, {"se_s1", s.se_s1},
                        {"N_min", s.n_min}, {"N_max", s.n_max}, {"R2", s.r2}, {"residuals", s.residuals},
                        {"covariance", s.covariance}});
        std::cout << "order " << a.order << " [" << window << "] s0=" << format_double(s.s0)
                  << " s1=" << format_double(s.s1) << " R2=" << format_double(s.r2) << '\n';
    };
    emit("full", full);
    if (upper) emit("upper_half", *upper);
    nlohmann::json j;
    j["metadata"] = meta;
    j["order"] = a.order;
    j["fits"] = std::move(fits);
    out.json(j);
    return 0;
}

void add_common(CLI::App& sub, Common& c)
{
    sub.add_option("--model", c.model_path, "Model file (JSON)");
    sub.add_option("--reference", c.reference, "Built-in Raman-scheme model of criticality order 2..5")
        ->check(CLI::Range(2, 5));
    sub.add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    sub.add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
    sub.add_option("--seed", c.seed, "Eigensolver start-vector seed")->capture_default_str();
    sub.add_option("--mem-cap-mb", c.mem_cap_mb, "Memory cap for grids and bases (MiB)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multicritical generalized Dicke model: mean field, Gaussian fluctuations, exact diagonalization"};
    app.set_config("--config", "", "Config file (TOML/INI) supplying any flag");
    app.set_version_flag("--version", std::string(kCodeVersion));
    app.require_subcommand(1);

    Common common;
    ScanArgs scan_args;
    CritArgs crit_args;
    FluctArgs fluct_args;
    EdArgs ed_args;
    CritEntropyArgs ce_args;
    FitArgs fit_args;

    auto* scan = app.add_subcommand("mf-scan", "Mean-field phase diagram over 1-3 level energies");
    add_common(*scan, common);
    scan->add_option("--axis", scan_args.axes, "NAME:LO:HI:POINTS, e.g. h22:1:3:200 (repeatable)")->required();
    scan->add_flag("--no-boundary", scan_args.no_boundary, "Skip boundary tracing");

    auto* crit = app.add_subcommand("crit-check", "Critical-condition residuals and Landau coefficients");
    add_common(*crit, common);
    crit->add_option("--order", crit_args.order, "Highest Landau coefficient")->capture_default_str();

    auto* fluct = app.add_subcommand("fluct", "Gaussian fluctuation spectrum, entropy and photon fluctuation");
    add_common(*fluct, common);
    fluct->add_option("--axis", fluct_args.axes, "Optional sweep NAME:LO:HI:POINTS (repeatable)");
    fluct->add_flag("--normal-branch", fluct_args.force_normal, "Expand about phi = 0 instead of the minimum");
    fluct->add_option("--N", fluct_args.atoms, "Atom number for the depletion validity warning");

    auto* ed = app.add_subcommand("ed", "Finite-N exact diagonalization");
    add_common(*ed, common);
    ed->add_option("--N", ed_args.atoms, "Atom number")->required();
    ed->add_option("--nmax", ed_args.nmax, "Photon cutoff or 'auto'")->capture_default_str();
    ed->add_option("--axis", ed_args.axes, "Optional sweep NAME:LO:HI:POINTS (repeatable)");
    ed->add_option("--observables", ed_args.observables, "Subset of e0,e1,gap,entropy,photon_number")
        ->delimiter(',');

    auto* ce = app.add_subcommand("crit-entropy", "Locate the entropy maximum for each N");
    add_common(*ce, common);
    ce->add_option("--N-list", ce_args.atoms, "Atom numbers, comma separated")->delimiter(',')->required();
    ce->add_option("--bracket", ce_args.bracket, "LO,HI of the tuned level energy")->delimiter(',')
        ->expected(2);
    ce->add_option("--level", ce_args.level, "Tuned level energy")->capture_default_str();
    ce->add_option("--nmax", ce_args.nmax, "Fixed photon cutoff (default: certified automatically)");
    ce->add_option("--prescan", ce_args.prescan, "Coarse pre-scan points")->capture_default_str();
    ce->add_option("--tol", ce_args.tol, "Golden-section tolerance")->capture_default_str();

    auto* fit = app.add_subcommand("fit", "Fit S_cri = s0 + s1 ln N to crit-entropy output");
    add_common(*fit, common);
    fit->add_option("--input", fit_args.input, "crit-entropy CSV")->required();
    fit->add_option("--order", fit_args.order, "Criticality order label")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (common.workers > 0) omp_set_num_threads(common.workers);
    const auto t0 = std::chrono::steady_clock::now();
    std::string name;
    int code = 0;
    try {
        if (*scan) {
            name = "mf-scan";
            code = run_mf_scan(common, scan_args);
        } else if (*crit) {
            name = "crit-check";
            code = run_crit_check(common, crit_args);
        } else if (*fluct) {
            name = "fluct";
            code = run_fluct(common, fluct_args);
        } else if (*ed) {
            name = "ed";
            code = run_ed(common, ed_args);
        } else if (*ce) {
            name = "crit-entropy";
            code = run_crit_entropy(common, ce_args);
        } else if (*fit) {
            name = "fit";
            code = run_fit(common, fit_args);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        code = 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        code = 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        code = 1;
    }
    if (code != 2 && !name.empty()) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        try {
            Outputs(common, name).log(secs, code);
        } catch (const std::exception&) {
        }
    }
    return code;
}
