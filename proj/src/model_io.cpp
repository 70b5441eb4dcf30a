//------------------------------------------------------------------------------
//
//   Copyright 2026 The randcert Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "randcert/model_io.hpp"

#include <fstream>

#include "randcert/errors.hpp"

namespace randcert {

namespace {

using nlohmann::json;

json const &Require(json const &doc, char const *key)
{
  if (!doc.is_object() || !doc.contains(key))
  {
    throw ValidationError(std::string("model file is missing \"") + key + "\"");
  }
  return doc.at(key);
}

Eigen::MatrixXd MatrixFromJson(json const &rows, char const *what)
{
  if (!rows.is_array() || rows.empty() || !rows.front().is_array())
  {
    throw ValidationError(std::string(what) + " must be a non-empty array of rows");
  }
  auto const      r = static_cast<Eigen::Index>(rows.size());
  auto const      c = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
  {
    auto const &row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
    {
      throw ValidationError(std::string(what) + " rows must all have the same length");
    }
    for (Eigen::Index j = 0; j < c; ++j)
    {
      m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

json MatrixToJson(Eigen::MatrixXd const &m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<GaussianNoiseSpec> NoiseFromJson(json const &doc)
{
  if (!doc.contains("noise") || doc.at("noise").is_null())
  {
    return std::nullopt;
  }
  json const &noise = doc.at("noise");
  if (noise.contains("sigma"))
  {
    return GaussianNoiseSpec::Isotropic(noise.at("sigma").get<double>());
  }
  if (noise.contains("covariance"))
  {
    return GaussianNoiseSpec::FullCovariance(MatrixFromJson(noise.at("covariance"), "covariance"));
  }
  throw ValidationError("noise must contain \"sigma\" or \"covariance\"");
}

}  // namespace

ModelFile ModelFromJson(json const &doc)
{
  try
  {
    std::string const variant = Require(doc, "variant").get<std::string>();
    if (variant == "linear")
    {
      LinearModel model;
      model.weights     = MatrixFromJson(Require(doc, "weights"), "weights");
      auto const bias   = Require(doc, "bias").get<std::vector<double>>();
      model.bias        = Eigen::Map<Eigen::VectorXd const>(bias.data(),
                                                            static_cast<Eigen::Index>(bias.size()));
      return {DeterministicClassifier(std::move(model)), NoiseFromJson(doc)};
    }
    if (variant == "grid")
    {
      GridTable table;
      table.origin      = Require(doc, "origin").get<std::vector<double>>();
      table.cell_size   = Require(doc, "cell_size").get<double>();
      table.shape       = Require(doc, "shape").get<std::vector<std::size_t>>();
      table.labels      = Require(doc, "labels").get<std::vector<Label>>();
      table.num_classes = Require(doc, "num_classes").get<std::size_t>();
      return {DeterministicClassifier(std::move(table)), NoiseFromJson(doc)};
    }
    throw ValidationError("unknown model variant \"" + variant + "\"");
  }
  catch (json::exception const &e)
  {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  catch (std::domain_error const &e)
  {
    throw ValidationError(std::string("invalid model parameters: ") + e.what());
  }
}

json ModelToJson(DeterministicClassifier const &base, std::optional<GaussianNoiseSpec> const &noise)
{
  json doc;
  if (auto const *lin = std::get_if<LinearModel>(&base.variant()))
  {
    doc["variant"] = "linear";
    doc["weights"] = MatrixToJson(lin->weights);
    doc["bias"]    = std::vector<double>(lin->bias.data(), lin->bias.data() + lin->bias.size());
  }
  else
  {
    auto const &grid   = std::get<GridTable>(base.variant());
    doc["variant"]     = "grid";
    doc["origin"]      = grid.origin;
    doc["cell_size"]   = grid.cell_size;
    doc["shape"]       = grid.shape;
    doc["labels"]      = grid.labels;
    doc["num_classes"] = grid.num_classes;
  }
  if (noise)
  {
    doc["noise"] = noise->is_isotropic() ? json{{"sigma", noise->sigma()}}
                                         : json{{"covariance", MatrixToJson(noise->covariance())}};
  }
  return doc;
}

ModelFile LoadModelFile(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ValidationError("cannot open model file " + path);
  }
  json doc;
  try
  {
    in >> doc;
  }
  catch (json::exception const &e)
  {
    throw ValidationError("model file " + path + " is not valid JSON: " + e.what());
  }
  return ModelFromJson(doc);
}

}  // namespace randcert
