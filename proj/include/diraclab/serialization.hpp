#pragma once

#include <json.hpp>

#include "diraclab/fields.hpp"
#include "diraclab/grid.hpp"

namespace diraclab {

// Interchange documents:
//   { "m": int, "grid": {"x_min", "x_max", "n", "periodic"},
//     "samples": [ [ [re, im], ... ], ... ] }
// one inner list per grid point, matrix entries row-major.

nlohmann::json grid_to_json(const Grid& grid);
Grid grid_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const MatrixPotential& q);
nlohmann::json to_json(const SpinorField& f);

/// Reads a potential document. Symmetry is enforced unless the document
/// carries "allow_asymmetric": true.
MatrixPotential potential_from_json(const nlohmann::json& doc);
SpinorField spinor_from_json(const nlohmann::json& doc);

/// Same sample layout for arbitrary square blocks (e.g. 2m x 2m unitary
/// families).
nlohmann::json blocks_to_json(const Grid& grid, int m, const std::vector<CMatrix>& blocks);
std::vector<CMatrix> blocks_from_json(const nlohmann::json& doc, int rows);

}  // namespace diraclab
