#include "mdicke/scan.hpp"

#include "mdicke/analysis.hpp"

#include <omp.h>

#include <sstream>

namespace mdicke {

double ScanAxis::value(int i) const
{
    if (points <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

ScanAxis parse_axis(const std::string& spec, int levels)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) throw InputError("axis must look like name:lo:hi:points, got '" + spec + "'");
    ScanAxis axis;
    axis.name = parts[0];
    axis.level = parse_level_name(parts[0], levels);
    try {
        axis.lo = std::stod(parts[1]);
        axis.hi = std::stod(parts[2]);
        axis.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw InputError("axis '" + spec + "': bad number");
    }
    if (axis.points < 1) throw InputError("axis '" + spec + "': points must be >= 1");
    return axis;
}

std::size_t ScanResult::index(int i0, int i1, int i2) const
{
    std::size_t idx = 0;
    const int is[3] = {i0, i1, i2};
    for (std::size_t a = 0; a < axes.size(); ++a) idx = idx * axes[a].points + is[a];
    return idx;
}

AtomModel ScanResult::model_at(std::span<const double> coords) const
{
    AtomModel m = base;
    for (std::size_t a = 0; a < axes.size(); ++a) m.h_diag[axes[a].level] = coords[a];
    return m;
}

namespace kernels {

namespace {

ScanPoint evaluate_point(const AtomModel& base, const std::optional<TClassModel>& tclass, double kappa,
                         std::span<const ScanAxis> axes, const MeanFieldOptions& mf, std::size_t flat)
{
    ScanPoint p;
    AtomModel m = base;
    std::size_t rest = flat;
    for (std::size_t a = axes.size(); a-- > 0;) {
        const int i = static_cast<int>(rest % axes[a].points);
        rest /= axes[a].points;
        p.coords[a] = axes[a].value(i);
        m.h_diag[axes[a].level] = p.coords[a];
    }
    p.mf = order_parameter(m, kappa, mf);
    if (tclass) {
        TClassModel t = *tclass;
        t.h_diag = m.h_diag;
        p.crit_order = tclass_criticality_order(t, kappa);
    }
    return p;
}

}  // namespace

void evaluate_grid_serial(const AtomModel& base, double kappa, std::span<const ScanAxis> axes,
                          const MeanFieldOptions& mf, std::span<ScanPoint> out)
{
    const auto tclass = as_tclass(base);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = evaluate_point(base, tclass, kappa, axes, mf, i);
    }
}

void evaluate_grid_omp(const AtomModel& base, double kappa, std::span<const ScanAxis> axes,
                       const MeanFieldOptions& mf, std::span<ScanPoint> out, int workers)
{
    const auto tclass = as_tclass(base);
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const long long n = static_cast<long long>(out.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long long i = 0; i < n; ++i) {
        try {
            out[i] = evaluate_point(base, tclass, kappa, axes, mf, static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(mdicke_scan_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace kernels

ScanResult scan_phase_diagram(const AtomModel& base, double kappa, std::vector<ScanAxis> axes,
                              const ScanOptions& opts)
{
    if (axes.empty() || axes.size() > 3) throw InputError("scan needs 1 to 3 axes");
    std::size_t total = 1;
    for (const auto& a : axes) {
        if (a.level < 1 || a.level >= base.levels) throw InputError("scan axis '" + a.name + "' not in model");
        total *= static_cast<std::size_t>(a.points);
    }
    if (total * sizeof(ScanPoint) > opts.mem_cap_bytes) {
        throw InputError("scan grid of " + std::to_string(total) + " points exceeds the memory cap");
    }

    ScanResult res;
    res.base = base;
    res.kappa = kappa;
    res.axes = std::move(axes);
    res.mf = opts.mf;
    res.points.resize(total);
    kernels::evaluate_grid_omp(base, kappa, res.axes, opts.mf, res.points, opts.workers);

    if (opts.trace_boundary && res.axes.size() <= 2) {
        res.boundary = trace_boundary(res, opts.boundary);
    }
    return res;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan, const Metadata& meta)
{
    std::vector<std::string> cols;
    for (const auto& a : scan.axes) cols.push_back(a.name);
    for (const char* c : {"phi_star", "energy", "phase", "crit_order", "flags"}) cols.emplace_back(c);
    CsvWriter w(out, meta, cols);
    for (const auto& p : scan.points) {
        std::vector<std::string> row;
        for (std::size_t a = 0; a < scan.axes.size(); ++a) row.push_back(format_double(p.coords[a]));
        row.push_back(format_double(p.mf.phi_star));
        row.push_back(format_double(p.mf.energy));
        row.emplace_back(to_string(p.mf.phase));
        row.push_back(std::to_string(p.crit_order));
        row.emplace_back(p.crit_order >= 3 ? "multicritical" : "");
        w.row(row);
    }
}

void write_boundary_csv(std::ostream& out, const ScanResult& scan, const Metadata& meta)
{
    if (scan.axes.size() == 1) {
        CsvWriter w(out, meta, {"point", scan.axes[0].name, "order", "jump", "c1"});
        if (!scan.boundary) return;
        for (std::size_t i = 0; i < scan.boundary->points.size(); ++i) {
            const auto& p = scan.boundary->points[i];
            w.row({std::to_string(i), format_double(p.x), to_string(p.order), format_double(p.jump),
                   format_double(p.c1)});
        }
        return;
    }
    const std::string x = scan.axes.size() > 0 ? scan.axes[0].name : "x";
    const std::string y = scan.axes.size() > 1 ? scan.axes[1].name : "y";
    CsvWriter w(out, meta, {"segment", x + "_a", y + "_a", x + "_b", y + "_b", "order_a", "order_b"});
    if (!scan.boundary) return;
    const auto& b = *scan.boundary;
    for (std::size_t s = 0; s < b.segments.size(); ++s) {
        const auto& pa = b.points[b.segments[s][0]];
        const auto& pb = b.points[b.segments[s][1]];
        w.row({std::to_string(s), format_double(pa.x), format_double(pa.y), format_double(pb.x),
               format_double(pb.y), to_string(pa.order), to_string(pb.order)});
    }
}

nlohmann::json scan_to_json(const ScanResult& scan, const Metadata& meta)
{
    nlohmann::json j;
    j["metadata"] = meta;
    j["kappa"] = scan.kappa;
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : scan.axes) {
        axes.push_back({{"name", a.name}, {"lo", a.lo}, {"hi", a.hi}, {"points", a.points}});
    }
    j["grid"] = axes;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : scan.points) {
        nlohmann::json r;
        r["coords"] = std::vector<double>(p.coords.begin(), p.coords.begin() + scan.axes.size());
        r["phi_star"] = p.mf.phi_star;
        r["energy"] = p.mf.energy;
        r["phase"] = to_string(p.mf.phase);
        r["crit_order"] = p.crit_order;
        pts.push_back(std::move(r));
    }
    j["points"] = std::move(pts);
    if (scan.boundary) {
        nlohmann::json bp = nlohmann::json::array();
        for (const auto& p : scan.boundary->points) {
            bp.push_back({{"x", p.x}, {"y", p.y}, {"order", to_string(p.order)},
                          {"jump", p.jump}, {"c1", p.c1}});
        }
        j["boundary"] = {{"points", bp}, {"segments", scan.boundary->segments}};
    }
    return j;
}

}  // namespace mdicke
