/*
   Copyright 2026 The SpikeForge Authors
   SPDX-License-Identifier: Apache-2.0

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "spikeforge/annq.hpp"
#include "spikeforge/container.hpp"
#include "spikeforge/convert.hpp"

namespace sf = spikeforge;
namespace fs = std::filesystem;

namespace {

class ContainerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spikeforge_container_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  static void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(ContainerTest, AnnRoundTripIsExact) {
  const sf::VRConfig cfg(10, 0, 8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sf::testing::FixtureOptions opts;
    opts.batch_norm = seed % 2 == 0;
    const sf::NetworkSpec net = sf::testing::random_network(seed, cfg, opts);
    sf::write_network(path("net.json"), net);
    EXPECT_EQ(sf::read_network(path("net.json")), net);
  }
}

TEST_F(ContainerTest, SnnRoundTripIsStable) {
  const sf::VRConfig cfg(10, 2, 8);
  const sf::NetworkSpec snn =
      sf::convert_network(sf::fold_network(sf::testing::vgg_tiny(3, cfg, true)));
  sf::write_network(path("a.json"), snn);
  const sf::NetworkSpec back = sf::read_network(path("a.json"));
  ASSERT_EQ(back.layers.size(), snn.layers.size());
  for (std::size_t i = 0; i < snn.layers.size(); ++i) {
    EXPECT_EQ(back.layers[i].thresholds, snn.layers[i].thresholds);
    EXPECT_EQ(back.layers[i].step_constant, snn.layers[i].step_constant);
    EXPECT_EQ(back.layers[i].pool_scale, snn.layers[i].pool_scale);
    const auto w = snn.layers[i].weights.data();
    const auto r = back.layers[i].weights.data();
    ASSERT_EQ(w.size(), r.size());
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_EQ(r[k], static_cast<float>(w[k]));
  }
  sf::write_network(path("b.json"), back);
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
  EXPECT_EQ(sf::read_network(path("b.json")), back);
}

TEST_F(ContainerTest, ManifestFields) {
  const sf::NetworkSpec snn = sf::convert_network(sf::testing::vgg_tiny(1, {10, 0, 8}, false));
  sf::write_network(path("m.json"), snn);
  const std::string text = slurp(path("m.json"));
  for (const char* key : {"\"format\": \"spikeforge-network\"", "\"version\": \"1.0\"",
                          "\"mode\": \"snn\"", "\"blob\": \"m.bin\"", "\"thresholds\"",
                          "\"step_constant\"", "\"pool_scale\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST_F(ContainerTest, TensorRoundTrip) {
  std::mt19937_64 rng(2);
  const sf::VRConfig cfg(16, 4, 16);
  const sf::Tensor x = sf::testing::random_grid_input(rng, {3, 2, 5, 5}, cfg);
  sf::write_tensor(path("x.json"), x);
  EXPECT_EQ(sf::read_tensor(path("x.json")), x);
  EXPECT_NE(slurp(path("x.json")).find("\"dtype\": \"f64\""), std::string::npos);

  sf::write_tensor(path("y.json"), x, sf::TensorDType::F32);
  const sf::Tensor y = sf::read_tensor(path("y.json"));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(y[i], static_cast<float>(x[i]));

  // Manifests without a dtype are float32.
  std::string text = slurp(path("y.json"));
  text.erase(text.find("\"dtype\""), std::string("\"dtype\": \"f32\",").size());
  spit(path("y.json"), text);
  EXPECT_EQ(sf::read_tensor(path("y.json")), y);
}

TEST_F(ContainerTest, Labels) {
  spit(path("l.csv"), "# labels\n3\n\n1, 4\n 2 \n");
  EXPECT_EQ(sf::read_labels(path("l.csv")), (std::vector<int>{3, 1, 4, 2}));
  sf::write_labels(path("o.csv"), {7, 0, 9});
  EXPECT_EQ(sf::read_labels(path("o.csv")), (std::vector<int>{7, 0, 9}));
  spit(path("bad.csv"), "1\nx\n");
  EXPECT_THROW(sf::read_labels(path("bad.csv")), sf::ContainerError);
}

TEST_F(ContainerTest, MalformedInputs) {
  const sf::NetworkSpec net = sf::testing::vgg_tiny(1, {8, 0, 8}, false);
  sf::write_network(path("n.json"), net);
  const std::string good = slurp(path("n.json"));
  const std::string blob = slurp(path("n.bin"));

  EXPECT_THROW(sf::read_network(path("missing.json")), sf::ContainerError);

  spit(path("n.json"), "{ not json");
  EXPECT_THROW(sf::read_network(path("n.json")), sf::ContainerError);

  std::string text = good;
  text.replace(text.find("spikeforge-network"), 18, "something-else-xx");
  spit(path("n.json"), text);
  EXPECT_THROW(sf::read_network(path("n.json")), sf::ContainerError);

  text = good;
  text.replace(text.find("\"1.0\""), 5, "\"2.0\"");
  spit(path("n.json"), text);
  EXPECT_THROW(sf::read_network(path("n.json")), sf::ContainerError);

  text = good;
  text.replace(text.find("\"t_max\": 8"), 10, "\"t_max\": 9");
  spit(path("n.json"), text);
  EXPECT_THROW(sf::read_network(path("n.json")), sf::ContainerError);

  spit(path("n.json"), good);
  spit(path("n.bin"), blob.substr(0, blob.size() / 2));
  EXPECT_THROW(sf::read_network(path("n.json")), sf::ContainerError);

  spit(path("n.bin"), blob);
  EXPECT_EQ(sf::read_network(path("n.json")), net);
  EXPECT_THROW(sf::read_tensor(path("n.json")), sf::ContainerError);
}
