// model_io.hpp: JSON model files.
//
//   {
//     "levels": 3,
//     "h_diag": [0, 2, 3],
//     "t_class_couplings": [1.4142135623730951, 1.7320508075688772],
//     "omega": 1.0,
//     "kappa": 1.0
//   }
//
// Instead of "t_class_couplings" a dense row-major "d_matrix" may be given;
// entries are numbers or [re, im] pairs. An optional "parity" array fixes the
// parity signs, otherwise they are inferred from the coupling graph.

#pragma once

#include "mdicke/model.hpp"

#include <filesystem>
#include <optional>

#include <json.hpp>

namespace mdicke {

struct ModelFile {
    AtomModel model;
    ModelParams params;
    std::optional<TClassModel> tclass;  // set when given as t_class_couplings
};

// Throws InputError on malformed content. Does not run validate().
ModelFile parse_model(const nlohmann::json& doc);
ModelFile load_model_file(const std::filesystem::path& path);

nlohmann::json to_json(const AtomModel& model, const ModelParams& params);

}  // namespace mdicke
