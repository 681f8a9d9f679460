#include "diraclab/serialization.hpp"

#include <string>

#include "diraclab/errors.hpp"

namespace diraclab {

using nlohmann::json;

namespace {

json pair(Complex z) { return json::array({z.real(), z.imag()}); }

Complex unpair(const json& p) {
  if (!p.is_array() || p.size() != 2) throw DomainError("json: expected [re, im] pair");
  return {p[0].get<double>(), p[1].get<double>()};
}

json matrix_rows(const Eigen::Ref<const CMatrix>& a) {
  json row = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(pair(a(i, j)));
  }
  return row;
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw DomainError(std::string("json: missing key '") + key + "'");
  }
  return doc.at(key);
}

}  // namespace

json grid_to_json(const Grid& grid) {
  return {{"x_min", grid.x_min()},
          {"x_max", grid.x_max()},
          {"n", grid.size()},
          {"periodic", grid.periodic()}};
}

Grid grid_from_json(const json& doc) {
  try {
    return Grid(require(doc, "x_min").get<double>(), require(doc, "x_max").get<double>(),
                require(doc, "n").get<int>(), require(doc, "periodic").get<bool>());
  } catch (const json::exception& e) {
    throw DomainError(std::string("json: bad grid: ") + e.what());
  }
}

json blocks_to_json(const Grid& grid, int m, const std::vector<CMatrix>& blocks) {
  json samples = json::array();
  for (const auto& b : blocks) samples.push_back(matrix_rows(b));
  return {{"m", m}, {"grid", grid_to_json(grid)}, {"samples", std::move(samples)}};
}

std::vector<CMatrix> blocks_from_json(const json& doc, int rows) {
  const json& samples = require(doc, "samples");
  std::vector<CMatrix> out;
  for (const auto& s : samples) {
    if (!s.is_array() || s.size() != static_cast<std::size_t>(rows) * rows) {
      throw DomainError("json: sample has wrong number of entries");
    }
    CMatrix b(rows, rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < rows; ++j) b(i, j) = unpair(s[i * rows + j]);
    }
    out.push_back(std::move(b));
  }
  return out;
}

json to_json(const MatrixPotential& q) {
  std::vector<CMatrix> blocks;
  blocks.reserve(q.size());
  for (int k = 0; k < q.size(); ++k) blocks.emplace_back(q.sample(k));
  json doc = blocks_to_json(q.grid(), q.m(), blocks);
  if (!q.symmetric()) doc["allow_asymmetric"] = true;
  return doc;
}

MatrixPotential potential_from_json(const json& doc) {
  try {
    const Grid grid = grid_from_json(require(doc, "grid"));
    const int m = require(doc, "m").get<int>();
    if (m < 1) throw DomainError("json: m must be positive");
    const bool asym = doc.value("allow_asymmetric", false);
    auto blocks = blocks_from_json(doc, m);
    if (blocks.size() != static_cast<std::size_t>(grid.size())) {
      throw DomainError("json: sample count does not match grid");
    }
    return MatrixPotential(grid, blocks, asym ? Symmetry::allow_asymmetric : Symmetry::enforce);
  } catch (const json::exception& e) {
    throw DomainError(std::string("json: bad potential document: ") + e.what());
  }
}

json to_json(const SpinorField& f) {
  json samples = json::array();
  for (int k = 0; k < f.size(); ++k) {
    json row = json::array();
    for (int c = 0; c < f.width(); ++c) row.push_back(pair(f.sample(k)[c]));
    samples.push_back(std::move(row));
  }
  return {{"m", f.m()}, {"grid", grid_to_json(f.grid())}, {"samples", std::move(samples)}};
}

SpinorField spinor_from_json(const json& doc) {
  try {
    const Grid grid = grid_from_json(require(doc, "grid"));
    const int m = require(doc, "m").get<int>();
    if (m < 1) throw DomainError("json: m must be positive");
    const json& samples = require(doc, "samples");
    if (samples.size() != static_cast<std::size_t>(grid.size())) {
      throw DomainError("json: sample count does not match grid");
    }
    SpinorField f = SpinorField::zero(grid, m);
    for (int k = 0; k < grid.size(); ++k) {
      const json& row = samples[k];
      if (row.size() != static_cast<std::size_t>(2 * m)) {
        throw DomainError("json: spinor sample has wrong width");
      }
      for (int c = 0; c < 2 * m; ++c) f.sample(k)[c] = unpair(row[c]);
    }
    return f;
  } catch (const json::exception& e) {
    throw DomainError(std::string("json: bad spinor document: ") + e.what());
  }
}

}  // namespace diraclab
