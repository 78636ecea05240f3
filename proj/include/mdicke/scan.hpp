// scan.hpp: mean-field phase-diagram grid scans over 1-3 level energies.

#pragma once

#include "mdicke/meanfield.hpp"
#include "mdicke/output.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mdicke {

struct ScanAxis {
    std::string name;  // "h22", "h33", ...
    int level{1};      // 0-based index into h_diag
    double lo{0.0};
    double hi{0.0};
    int points{1};

    double value(int i) const;
};

// "h22:1:3:200" -> axis (levels is needed to resolve the name).
ScanAxis parse_axis(const std::string& spec, int levels);

struct ScanPoint {
    std::array<double, 3> coords{};
    MeanFieldSolution mf;
    int crit_order{0};  // T-class criticality order, 0 when not T-class
};

struct BoundaryPoint {
    double x{0.0};
    double y{0.0};
    TransitionOrder order{TransitionOrder::SecondOrder};
    double jump{0.0};  // phi_star on the superradiant side
    double c1{0.0};    // c1 at the boundary point
};

struct Boundary {
    std::vector<BoundaryPoint> points;
    std::vector<std::array<int, 2>> segments;  // indices into points
};

struct BoundaryOptions {
    double refine_tol{1e-8};
    double jump_threshold{1e-3};
    double c1_tol{1e-6};
};

struct ScanOptions {
    int workers{0};  // 0: OpenMP default
    std::size_t mem_cap_bytes{std::size_t{1} << 30};
    MeanFieldOptions mf;
    bool trace_boundary{true};
    BoundaryOptions boundary;
};

struct ScanResult {
    AtomModel base;
    double kappa{1.0};
    std::vector<ScanAxis> axes;
    std::vector<ScanPoint> points;  // axis 0 slowest
    MeanFieldOptions mf;
    std::optional<Boundary> boundary;

    std::size_t index(int i0, int i1 = 0, int i2 = 0) const;
    AtomModel model_at(std::span<const double> coords) const;
};

ScanResult scan_phase_diagram(const AtomModel& base, double kappa, std::vector<ScanAxis> axes,
                              const ScanOptions& opts = {});

namespace kernels {

// Fill `out` (size = product of axis points) with per-point solutions.
void evaluate_grid_serial(const AtomModel& base, double kappa, std::span<const ScanAxis> axes,
                          const MeanFieldOptions& mf, std::span<ScanPoint> out);
void evaluate_grid_omp(const AtomModel& base, double kappa, std::span<const ScanAxis> axes,
                       const MeanFieldOptions& mf, std::span<ScanPoint> out, int workers);

}  // namespace kernels

void write_scan_csv(std::ostream& out, const ScanResult& scan, const Metadata& meta);
void write_boundary_csv(std::ostream& out, const ScanResult& scan, const Metadata& meta);
nlohmann::json scan_to_json(const ScanResult& scan, const Metadata& meta);

}  // namespace mdicke
