#include "support.hpp"

#include "mdicke/analysis.hpp"
#include "mdicke/scan.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace mdicke;

namespace {

ScanResult scan2d(int order, const std::string& ax, const std::string& ay, double fixed_level_value = 0.0,
                  int fixed_level = -1, int workers = 0)
{
    AtomModel base = testsupport::reference(order);
    if (fixed_level > 0) base = with_level_energy(base, fixed_level, fixed_level_value);
    ScanOptions opts;
    opts.workers = workers;
    return scan_phase_diagram(base, 1.0, {parse_axis(ax, base.levels), parse_axis(ay, base.levels)}, opts);
}

}  // namespace

TEST_CASE("axis parsing")
{
    const ScanAxis a = parse_axis("h22:1:3:201", 3);
    CHECK(a.level == 1);
    CHECK(a.points == 201);
    CHECK(a.value(0) == 1.0);
    CHECK(a.value(200) == 3.0);
    CHECK(a.value(100) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(parse_axis("h33:2.5:2.5:1", 3).value(0) == 2.5);
    CHECK_THROWS_AS(parse_axis("h22:1:3", 3), InputError);
    CHECK_THROWS_AS(parse_axis("h22:a:3:4", 3), InputError);
    CHECK_THROWS_AS(parse_axis("h44:1:3:4", 3), InputError);
    CHECK_THROWS_AS(parse_axis("h22:1:3:0", 3), InputError);
}

TEST_CASE("scan preconditions")
{
    const AtomModel m = testsupport::reference(3);
    CHECK_THROWS_AS(scan_phase_diagram(m, 1.0, {}), InputError);
    ScanOptions tiny;
    tiny.mem_cap_bytes = 1024;
    CHECK_THROWS_AS(scan_phase_diagram(m, 1.0, {parse_axis("h22:1:3:100", 3), parse_axis("h33:1:3:100", 3)}, tiny),
                    InputError);
}

TEST_CASE("1-D scan crosses where the critical residual changes sign")
{
    std::mt19937_64 rng(41);
    int tested = 0;
    for (int trial = 0; trial < 40; ++trial) {
        AtomModel m = testsupport::random_model(rng, 2 + trial % 3);
        int lv = 1;
        while (m.parity_signs[lv] == 1) ++lv;
        // Put the ordinary critical point of level lv at h = 2 for kappa = 1.
        double rest = 0.0;
        for (int k = 1; k < m.levels; ++k) {
            if (k != lv) rest += std::norm(m.d_matrix(0, k)) / m.h_diag[k];
        }
        if (!(1.0 - rest > 0.1)) continue;
        const double scale = std::sqrt((1.0 - rest) * 2.0 / std::norm(m.d_matrix(0, lv)));
        m.d_matrix(0, lv) *= scale;
        m.d_matrix(lv, 0) *= scale;
        m.h_diag[lv] = 2.0;
        CHECK(std::abs(ordinary_critical_residual(m, 1.0)) < 1e-12);
        if (landau_coefficients(m, 1.0, 2).c[2] <= 1e-3) continue;  // continuous transitions only

        const auto scan = scan_phase_diagram(m, 1.0, {ScanAxis{"h", lv, 1.5, 2.6, 23}});
        ++tested;
        REQUIRE(scan.boundary);
        REQUIRE(scan.boundary->points.size() == 1);
        const BoundaryPoint& p = scan.boundary->points[0];
        CHECK(p.x == doctest::Approx(2.0).epsilon(1e-7));
        CHECK(p.order == TransitionOrder::SecondOrder);
        CHECK(scan.boundary->segments.empty());
    }
    CHECK(tested >= 5);
}

TEST_CASE("serial and parallel grid kernels agree")
{
    const AtomModel base = testsupport::reference(4);
    const std::vector<ScanAxis> axes{parse_axis("h22:1:3:17", 4), parse_axis("h33:2:4:13", 4)};
    std::vector<ScanPoint> a(17 * 13), b(17 * 13);
    kernels::evaluate_grid_serial(base, 1.0, axes, {}, a);
    kernels::evaluate_grid_omp(base, 1.0, axes, {}, b, 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mf.phi_star == b[i].mf.phi_star);
        CHECK(a[i].mf.energy == b[i].mf.energy);
        CHECK(a[i].coords == b[i].coords);
    }
}

TEST_CASE("single-point scan at the tetracritical point")
{
    const AtomModel base = testsupport::reference(4);
    const auto scan = scan_phase_diagram(
        base, 1.0, {parse_axis("h22:2:2:1", 4), parse_axis("h33:3:3:1", 4), parse_axis("h44:3:3:1", 4)});
    REQUIRE(scan.points.size() == 1);
    CHECK(scan.points[0].crit_order == 4);
    CHECK(scan.points[0].mf.phase == Phase::Normal);
    CHECK_FALSE(scan.boundary.has_value());
}

TEST_CASE("second-order line and first-order segment of the four-level diagram")
{
    const auto scan = scan2d(4, "h22:1:3:41", "h33:2:4:41");
    REQUIRE(scan.boundary);
    int second_above = 0, first_below = 0;
    for (const BoundaryPoint& p : scan.boundary->points) {
        if (p.y > 3.0 + 1e-9) {
            CHECK(std::abs(p.x - 2.0) < 1e-6);
            CHECK(p.order == TransitionOrder::SecondOrder);
            ++second_above;
        } else if (p.y < 2.9) {
            CHECK(p.order == TransitionOrder::FirstOrder);
            CHECK(p.jump > 1e-3);
            ++first_below;
        }
    }
    CHECK(second_above >= 10);
    CHECK(first_below >= 3);
}

TEST_CASE("tricritical line of the four-level diagram")
{
    const auto scan = scan2d(4, "h22:1:3:41", "h44:2:4:41", 3.0, 2);
    REQUIRE(scan.boundary);
    int on_line = 0;
    for (const BoundaryPoint& p : scan.boundary->points) {
        if (p.y > 3.0 + 1e-9) {
            CHECK(std::abs(p.x - 2.0) < 1e-6);
            CHECK(p.order == TransitionOrder::SecondOrder);
            ++on_line;
        }
    }
    CHECK(on_line >= 10);
}

TEST_CASE("boundary labels are stable under grid refinement")
{
    const auto coarse = scan2d(4, "h22:1:3:21", "h33:2:4:21");
    const auto fine = scan2d(4, "h22:1:3:42", "h33:2:4:42");
    REQUIRE(coarse.boundary);
    REQUIRE(fine.boundary);
    int compared = 0;
    for (const BoundaryPoint& p : coarse.boundary->points) {
        if (std::hypot(p.x - 2.0, p.y - 3.0) < 0.15) continue;  // labels meet at the tetracritical point
        const BoundaryPoint* nearest = nullptr;
        double best = 1e9;
        for (const BoundaryPoint& q : fine.boundary->points) {
            const double d = std::hypot(p.x - q.x, p.y - q.y);
            if (d < best) {
                best = d;
                nearest = &q;
            }
        }
        REQUIRE(nearest);
        CHECK(best < 0.1);
        CHECK(nearest->order == p.order);
        ++compared;
    }
    CHECK(compared > 10);
}

TEST_CASE("single-phase window gives an empty boundary")
{
    const auto scan = scan2d(3, "h22:2.5:3.5:9", "h33:3:4:9");
    REQUIRE(scan.boundary);
    CHECK(scan.boundary->points.empty());
    CHECK(scan.boundary->segments.empty());
}

TEST_CASE("scan output is deterministic and independent of the worker count")
{
    const auto a = scan2d(4, "h22:1:3:15", "h33:2:4:15", 0.0, -1, 1);
    const auto b = scan2d(4, "h22:1:3:15", "h33:2:4:15", 0.0, -1, 4);
    const Metadata meta{{"subcommand", "mf-scan"}};
    std::ostringstream ca, cb, ba, bb;
    write_scan_csv(ca, a, meta);
    write_scan_csv(cb, b, meta);
    write_boundary_csv(ba, a, meta);
    write_boundary_csv(bb, b, meta);
    CHECK(ca.str() == cb.str());
    CHECK(ba.str() == bb.str());
    CHECK(scan_to_json(a, meta).dump() == scan_to_json(b, meta).dump());
    CHECK(ca.str().rfind("# subcommand=mf-scan\n", 0) == 0);
}
