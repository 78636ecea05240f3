#include "mdicke/model_io.hpp"

#include <fstream>

namespace mdicke {

namespace {

double number(const nlohmann::json& j, const char* what)
{
    if (!j.is_number()) throw InputError(std::string("model file: '") + what + "' must be a number");
    return j.get<double>();
}

cplx complex_entry(const nlohmann::json& j)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw InputError("model file: d_matrix entries must be numbers or [re, im] pairs");
}

}  // namespace

ModelFile parse_model(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw InputError("model file: top level must be an object");
    for (const char* key : {"levels", "h_diag"}) {
        if (!doc.contains(key)) throw InputError(std::string("model file: missing key '") + key + "'");
    }
    const bool has_d = doc.contains("d_matrix");
    const bool has_t = doc.contains("t_class_couplings");
    if (has_d == has_t) {
        throw InputError("model file: give exactly one of 'd_matrix' or 't_class_couplings'");
    }

    ModelFile out;
    if (!doc["levels"].is_number_integer()) throw InputError("model file: 'levels' must be an integer");
    const int l = doc["levels"].get<int>();
    if (l < 2) throw InputError("model file: 'levels' must be >= 2");

    const auto& h = doc["h_diag"];
    if (!h.is_array() || static_cast<int>(h.size()) != l) {
        throw InputError("model file: 'h_diag' must be an array of length levels");
    }
    std::vector<double> h_diag;
    for (const auto& v : h) h_diag.push_back(number(v, "h_diag"));

    if (has_t) {
        const auto& c = doc["t_class_couplings"];
        if (!c.is_array() || static_cast<int>(c.size()) != l - 1) {
            throw InputError("model file: 't_class_couplings' must have levels-1 entries");
        }
        TClassModel t;
        t.levels = l;
        t.h_diag = h_diag;
        for (const auto& v : c) t.couplings.push_back(number(v, "t_class_couplings"));
        out.model = t.expand();
        out.tclass = t;
    } else {
        const auto& d = doc["d_matrix"];
        if (!d.is_array() || static_cast<int>(d.size()) != l) {
            throw InputError("model file: 'd_matrix' must have levels rows");
        }
        out.model.levels = l;
        out.model.h_diag = h_diag;
        out.model.d_matrix = Eigen::MatrixXcd::Zero(l, l);
        for (int i = 0; i < l; ++i) {
            if (!d[i].is_array() || static_cast<int>(d[i].size()) != l) {
                throw InputError("model file: 'd_matrix' rows must have levels entries");
            }
            for (int j = 0; j < l; ++j) out.model.d_matrix(i, j) = complex_entry(d[i][j]);
        }
        out.model.parity_signs = infer_parity(out.model.d_matrix);
    }

    if (doc.contains("parity")) {
        const auto& p = doc["parity"];
        if (!p.is_array() || static_cast<int>(p.size()) != l) {
            throw InputError("model file: 'parity' must have levels entries");
        }
        out.model.parity_signs.clear();
        for (const auto& v : p) {
            if (!v.is_number_integer()) throw InputError("model file: parity entries must be +1 or -1");
            out.model.parity_signs.push_back(v.get<int>());
        }
    }

    const double omega = doc.contains("omega") ? number(doc["omega"], "omega") : 1.0;
    const double kappa = doc.contains("kappa") ? number(doc["kappa"], "kappa") : 1.0;
    out.params = make_params(omega, kappa);
    return out;
}

ModelFile load_model_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("model file " + path.string() + ": " + e.what());
    }
    return parse_model(doc);
}

nlohmann::json to_json(const AtomModel& model, const ModelParams& params)
{
    nlohmann::json j;
    j["levels"] = model.levels;
    j["h_diag"] = model.h_diag;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < model.d_matrix.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j2 = 0; j2 < model.d_matrix.cols(); ++j2) {
            const cplx v = model.d_matrix(i, j2);
            if (v.imag() == 0.0) row.push_back(v.real());
            else row.push_back({v.real(), v.imag()});
        }
        rows.push_back(row);
    }
    j["d_matrix"] = rows;
    j["parity"] = model.parity_signs;
    j["omega"] = params.omega;
    j["kappa"] = params.kappa;
    return j;
}

}  // namespace mdicke
