#include "mdicke/analysis.hpp"

#include <cmath>
#include <map>
#include <span>

namespace mdicke {

namespace {

class EdgeRefiner {
public:
    EdgeRefiner(const ScanResult& scan, const BoundaryOptions& opts) : scan_(scan), opts_(opts) {}

    // Refine the crossing between grid nodes a and b (phases differ).
    BoundaryPoint refine(std::array<double, 2> a, std::array<double, 2> b, bool a_superradiant)
    {
        std::array<double, 2> normal = a_superradiant ? b : a;
        std::array<double, 2> super = a_superradiant ? a : b;
        MeanFieldSolution super_sol = solve(super);
        auto dist = [](const std::array<double, 2>& p, const std::array<double, 2>& q) {
            return std::hypot(p[0] - q[0], p[1] - q[1]);
        };
        while (dist(normal, super) > opts_.refine_tol) {
            const std::array<double, 2> mid{0.5 * (normal[0] + super[0]), 0.5 * (normal[1] + super[1])};
            MeanFieldSolution sol = solve(mid);
            if (sol.phase == Phase::Superradiant) {
                super = mid;
                super_sol = sol;
            } else {
                normal = mid;
            }
        }
        BoundaryPoint p;
        p.x = 0.5 * (normal[0] + super[0]);
        p.y = 0.5 * (normal[1] + super[1]);
        p.jump = super_sol.phi_star;
        const double coords[2] = {p.x, p.y};
        p.c1 = ordinary_critical_residual(scan_.model_at(std::span(coords, scan_.axes.size())), scan_.kappa);
        p.order = (p.jump > opts_.jump_threshold && p.c1 > opts_.c1_tol) ? TransitionOrder::FirstOrder
                                                                         : TransitionOrder::SecondOrder;
        return p;
    }

    bool superradiant_at(std::array<double, 2> p) { return solve(p).phase == Phase::Superradiant; }

private:
    MeanFieldSolution solve(const std::array<double, 2>& p)
    {
        const double coords[2] = {p[0], p[1]};
        return order_parameter(scan_.model_at(std::span(coords, scan_.axes.size())), scan_.kappa, scan_.mf);
    }

    const ScanResult& scan_;
    const BoundaryOptions& opts_;
};

Boundary trace_crossings(const ScanResult& scan, const BoundaryOptions& opts)
{
    Boundary out;
    EdgeRefiner refiner(scan, opts);
    const ScanAxis& ax = scan.axes[0];
    for (int i = 0; i + 1 < ax.points; ++i) {
        const bool a = scan.points[i].mf.phase == Phase::Superradiant;
        const bool b = scan.points[i + 1].mf.phase == Phase::Superradiant;
        if (a != b) out.points.push_back(refiner.refine({ax.value(i), 0.0}, {ax.value(i + 1), 0.0}, a));
    }
    return out;
}

}  // namespace

Boundary trace_boundary(const ScanResult& scan, const BoundaryOptions& opts)
{
    if (scan.axes.size() == 1) return trace_crossings(scan, opts);
    if (scan.axes.size() != 2) throw InputError("trace_boundary needs a 1-D or 2-D scan");
    const int nx = scan.axes[0].points;
    const int ny = scan.axes[1].points;
    auto sr = [&](int i, int j) { return scan.points[scan.index(i, j)].mf.phase == Phase::Superradiant; };
    auto node = [&](int i, int j) {
        return std::array<double, 2>{scan.axes[0].value(i), scan.axes[1].value(j)};
    };

    Boundary out;
    EdgeRefiner refiner(scan, opts);
    // Edge keys: (i, j, 0) joins (i,j)-(i+1,j); (i, j, 1) joins (i,j)-(i,j+1).
    std::map<std::array<int, 3>, int> edge_point;
    auto crossing = [&](int i, int j, int dir) -> int {
        const std::array<int, 3> key{i, j, dir};
        if (auto it = edge_point.find(key); it != edge_point.end()) return it->second;
        const int i2 = dir == 0 ? i + 1 : i;
        const int j2 = dir == 0 ? j : j + 1;
        out.points.push_back(refiner.refine(node(i, j), node(i2, j2), sr(i, j)));
        const int id = static_cast<int>(out.points.size()) - 1;
        edge_point.emplace(key, id);
        return id;
    };

    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j + 1 < ny; ++j) {
            const bool a = sr(i, j), b = sr(i + 1, j), c = sr(i + 1, j + 1), d = sr(i, j + 1);
            std::vector<std::pair<int, std::array<int, 3>>> edges;  // edge id, key
            // bottom, right, top, left in cyclic order
            if (a != b) edges.push_back({0, {i, j, 0}});
            if (b != c) edges.push_back({1, {i + 1, j, 1}});
            if (d != c) edges.push_back({2, {i, j + 1, 0}});
            if (a != d) edges.push_back({3, {i, j, 1}});
            auto id_of = [&](const std::array<int, 3>& k) { return crossing(k[0], k[1], k[2]); };
            if (edges.size() == 2) {
                out.segments.push_back({id_of(edges[0].second), id_of(edges[1].second)});
            } else if (edges.size() == 4) {
                // Saddle: the cell center decides whether a and c are joined.
                const auto center = std::array<double, 2>{0.5 * (node(i, j)[0] + node(i + 1, j)[0]),
                                                          0.5 * (node(i, j)[1] + node(i, j + 1)[1])};
                const bool joined_ac = refiner.superradiant_at(center) == a;
                const int bottom = id_of(edges[0].second), right = id_of(edges[1].second);
                const int top = id_of(edges[2].second), left = id_of(edges[3].second);
                if (joined_ac) {
                    out.segments.push_back({bottom, right});  // isolates b
                    out.segments.push_back({top, left});      // isolates d
                } else {
                    out.segments.push_back({bottom, left});   // isolates a
                    out.segments.push_back({right, top});     // isolates c
                }
            }
        }
    }
    return out;
}

}  // namespace mdicke
