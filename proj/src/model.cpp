#include "mdicke/model.hpp"

#include "mdicke/output.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace mdicke {

bool AtomModel::is_real(double tol) const
{
    return d_matrix.size() == 0 || d_matrix.imag().cwiseAbs().maxCoeff() <= tol;
}

double AtomModel::max_h() const
{
    return h_diag.empty() ? 0.0 : *std::max_element(h_diag.begin(), h_diag.end());
}

double ModelParams::g() const
{
    return std::sqrt(omega * epsilon / kappa);
}

ModelParams make_params(double omega, double kappa)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InputError("omega must be a positive finite number");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw InputError("kappa must be a positive finite number");
    }
    return ModelParams{omega, kappa};
}

AtomModel TClassModel::expand() const
{
    if (levels < 2 || static_cast<int>(h_diag.size()) != levels ||
        static_cast<int>(couplings.size()) != levels - 1) {
        throw InputError("TClassModel: need levels >= 2, levels energies and levels-1 couplings");
    }
    AtomModel m;
    m.levels = levels;
    m.h_diag = h_diag;
    m.d_matrix = Eigen::MatrixXcd::Zero(levels, levels);
    m.parity_signs.resize(levels);
    for (int k = 0; k < levels; ++k) {
        m.parity_signs[k] = (k % 2 == 0) ? 1 : -1;
    }
    for (int k = 1; k < levels; ++k) {
        m.d_matrix(k, k - 1) = couplings[k - 1];
        m.d_matrix(k - 1, k) = couplings[k - 1];
    }
    return m;
}

std::string ValidationReport::to_string() const
{
    if (ok()) return "model is valid";
    std::ostringstream os;
    for (const auto& v : violations) {
        os << '[' << v.kind << ']';
        for (int i : v.indices) os << ' ' << i;
        os << ": " << v.message << '\n';
    }
    return os.str();
}

ValidationReport validate(const AtomModel& model, double tol)
{
    ValidationReport report;
    auto add = [&](std::string kind, std::vector<int> idx, std::string msg) {
        report.violations.push_back({std::move(kind), std::move(idx), std::move(msg)});
    };

    const int l = model.levels;
    if (l < 2) {
        add("shape", {l}, "an atom needs at least two levels");
        return report;
    }
    if (static_cast<int>(model.h_diag.size()) != l) {
        add("shape", {static_cast<int>(model.h_diag.size())}, "h_diag length differs from levels");
        return report;
    }
    if (model.d_matrix.rows() != l || model.d_matrix.cols() != l) {
        add("shape", {static_cast<int>(model.d_matrix.rows()), static_cast<int>(model.d_matrix.cols())},
            "d_matrix is not levels x levels");
        return report;
    }
    if (static_cast<int>(model.parity_signs.size()) != l) {
        add("shape", {static_cast<int>(model.parity_signs.size())}, "parity_signs length differs from levels");
        return report;
    }

    if (model.h_diag[0] != 0.0) {
        add("energy", {0}, "h_diag[0] must be exactly 0");
    }
    for (int k = 1; k < l; ++k) {
        if (!(model.h_diag[k] > 0.0) || !std::isfinite(model.h_diag[k])) {
            add("energy", {k}, "excited level energy must be positive and finite");
        }
    }
    for (int k = 0; k < l; ++k) {
        if (model.parity_signs[k] != 1 && model.parity_signs[k] != -1) {
            add("parity", {k}, "parity sign must be +1 or -1");
        }
    }

    const double scale = std::max(1.0, model.d_matrix.cwiseAbs().maxCoeff());
    for (int i = 0; i < l; ++i) {
        for (int j = i; j < l; ++j) {
            const cplx dij = model.d_matrix(i, j);
            if (std::abs(dij - std::conj(model.d_matrix(j, i))) > tol * scale) {
                add("hermiticity", {i, j}, "d_matrix is not Hermitian");
            }
            if (model.parity_signs[i] == model.parity_signs[j] && std::abs(dij) > tol * scale) {
                add("z2", {i, j}, i == j ? "nonzero diagonal dipole element"
                                         : "dipole couples equal-parity levels");
            }
        }
    }
    return report;
}

int tunable_parameter_count(int levels, int delta)
{
    if (levels < 2) throw InputError("tunable_parameter_count: levels must be >= 2");
    if (std::abs(delta) > levels) throw InputError("tunable_parameter_count: |delta| exceeds levels");
    if ((levels - delta) % 2 != 0) {
        throw InputError("tunable_parameter_count: levels and delta must have equal parity");
    }
    return (levels * levels - delta * delta) / 2 - 1;
}

ReferenceModel raman_scheme_model(int order)
{
    if (order < 2 || order > 5) {
        throw InputError("reference model order must lie in 2..5");
    }
    static const double kEnergies[5] = {0.0, 2.0, 3.0, 3.0, 2.0};
    static const double kCouplings[4] = {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(3.0), std::sqrt(2.0)};

    ReferenceModel ref;
    ref.model.levels = order;
    ref.model.h_diag.assign(kEnergies, kEnergies + order);
    ref.model.couplings.assign(kCouplings, kCouplings + order - 1);
    ref.params = ModelParams{1.0, 1.0};
    return ref;
}

std::optional<TClassModel> as_tclass(const AtomModel& model, double tol)
{
    const int l = model.levels;
    if (l < 2 || model.d_matrix.rows() != l) return std::nullopt;
    for (int i = 0; i < l; ++i) {
        for (int j = 0; j < l; ++j) {
            if (std::abs(i - j) != 1 && std::abs(model.d_matrix(i, j)) > tol) return std::nullopt;
        }
    }
    TClassModel t;
    t.levels = l;
    t.h_diag = model.h_diag;
    for (int k = 1; k < l; ++k) t.couplings.push_back(std::abs(model.d_matrix(k, k - 1)));
    return t;
}

std::vector<int> infer_parity(const Eigen::MatrixXcd& d, double tol)
{
    const int l = static_cast<int>(d.rows());
    std::vector<int> sign(l, 0);
    for (int root = 0; root < l; ++root) {
        if (sign[root] != 0) continue;
        sign[root] = 1;
        std::queue<int> todo;
        todo.push(root);
        while (!todo.empty()) {
            const int i = todo.front();
            todo.pop();
            for (int j = 0; j < l; ++j) {
                if (j == i || std::abs(d(i, j)) <= tol || sign[j] != 0) continue;
                sign[j] = -sign[i];
                todo.push(j);
            }
        }
    }
    return sign;
}

int parse_level_name(const std::string& name, int levels)
{
    // "hKK" with a repeated 1-based index, e.g. h22, h33; h1010 is not supported.
    if (name.size() >= 3 && name[0] == 'h') {
        const std::string digits = name.substr(1);
        if (digits.size() % 2 == 0 &&
            std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            const std::string a = digits.substr(0, digits.size() / 2);
            const std::string b = digits.substr(digits.size() / 2);
            if (a == b) {
                const int k = std::stoi(a) - 1;
                if (k >= 1 && k < levels) return k;
            }
        }
    }
    throw InputError("unknown level parameter '" + name + "' (expected h22 .. h" +
                     std::to_string(levels) + std::to_string(levels) + ")");
}

AtomModel with_level_energy(const AtomModel& model, int level, double value)
{
    AtomModel out = model;
    out.h_diag.at(level) = value;
    return out;
}

TClassModel with_level_energy(const TClassModel& model, int level, double value)
{
    TClassModel out = model;
    out.h_diag.at(level) = value;
    return out;
}

std::uint64_t model_hash(const AtomModel& model, const ModelParams& params)
{
    std::ostringstream os;
    os << "l=" << model.levels << ";h=";
    for (double h : model.h_diag) os << format_double(h) << ',';
    os << ";d=";
    for (int i = 0; i < model.d_matrix.rows(); ++i) {
        for (int j = 0; j < model.d_matrix.cols(); ++j) {
            os << format_double(model.d_matrix(i, j).real()) << ':'
               << format_double(model.d_matrix(i, j).imag()) << ',';
        }
    }
    os << ";p=";
    for (int p : model.parity_signs) os << p << ',';
    os << ";omega=" << format_double(params.omega) << ";kappa=" << format_double(params.kappa);
    return fnv1a(os.str());
}

}  // namespace mdicke
