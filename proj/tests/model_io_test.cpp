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

#include <cstdio>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "randcert/errors.hpp"
#include "randcert/model_io.hpp"

namespace randcert {
namespace {

using nlohmann::json;

TEST(ModelIoTest, LinearRoundTripWithIsotropicNoise)
{
  DeterministicClassifier const base(LinearModel::Binary({0.5, -2.0}, 0.125));
  auto const doc    = ModelToJson(base, GaussianNoiseSpec::Isotropic(0.25));
  auto const parsed = ModelFromJson(json::parse(doc.dump()));
  EXPECT_EQ(ModelToJson(parsed.base, parsed.noise), doc);
  ASSERT_TRUE(parsed.noise);
  EXPECT_EQ(parsed.noise->sigma(), 0.25);
  EXPECT_EQ(parsed.base.dim(), 2u);
}

TEST(ModelIoTest, GridRoundTripWithCovariance)
{
  GridTable g;
  g.origin      = {-1.0, -1.0};
  g.cell_size   = 1.0;
  g.shape       = {2, 2};
  g.labels      = {0, 1, 1, 2};
  g.num_classes = 3;
  Eigen::MatrixXd cov(2, 2);
  cov << 0.2, 0.05, 0.05, 0.1;
  DeterministicClassifier const base(g);
  auto const doc    = ModelToJson(base, GaussianNoiseSpec::FullCovariance(cov));
  auto const parsed = ModelFromJson(doc);
  EXPECT_EQ(ModelToJson(parsed.base, parsed.noise), doc);
  EXPECT_EQ(parsed.base.num_classes(), 3u);
}

TEST(ModelIoTest, NoiseIsOptional)
{
  auto const parsed =
      ModelFromJson(json::parse(R"({"variant":"linear","weights":[[0,0],[1,1]],"bias":[0,0]})"));
  EXPECT_FALSE(parsed.noise);
}

TEST(ModelIoTest, MalformedDocumentsAreValidationErrors)
{
  for (char const *text : {
           R"({"weights":[[1]],"bias":[0]})",
           R"({"variant":"tree"})",
           R"({"variant":"linear","weights":[[1,2],[3]],"bias":[0,0]})",
           R"({"variant":"linear","weights":"x","bias":[0,0]})",
           R"({"variant":"linear","weights":[[0],[1]],"bias":[0,0],"noise":{"sigma":-1}})",
           R"({"variant":"linear","weights":[[0],[1]],"bias":[0,0],"noise":{"tau":1}})",
           R"({"variant":"grid","origin":[0],"cell_size":1,"shape":[2],"labels":[0],"num_classes":2})",
       })
  {
    EXPECT_THROW(ModelFromJson(json::parse(text)), std::invalid_argument) << text;
  }
}

TEST(ModelIoTest, LoadFromDisk)
{
  std::string const path = ::testing::TempDir() + "model_io_test.json";
  {
    std::ofstream out(path);
    out << R"({"variant":"linear","weights":[[0,0],[1,0]],"bias":[0,0],"noise":{"sigma":0.5}})";
  }
  auto const model = LoadModelFile(path);
  EXPECT_EQ(model.noise->sigma(), 0.5);
  std::remove(path.c_str());
  EXPECT_THROW(LoadModelFile(path), ValidationError);
}

}  // namespace
}  // namespace randcert
