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

#include <random>

#include "fixtures.hpp"
#include "spikeforge/kernels.hpp"
#include "spikeforge/tensor.hpp"

namespace sf = spikeforge;
using sf::testing::max_abs_diff;

namespace {

sf::LayerGeometry conv_geometry(std::size_t in, std::size_t out, std::size_t k, std::size_t stride,
                                std::size_t pad) {
  return {sf::LayerKind::Conv2d, in, out, k, stride, pad};
}

}  // namespace

TEST(Tensor, RejectsLengthMismatch) {
  EXPECT_THROW(sf::Tensor(sf::Shape{1, 1, 2, 2}, {1.0, 2.0}), sf::ShapeError);
}

TEST(Tensor, RejectsNonFinite) {
  EXPECT_THROW(sf::Tensor(sf::Shape{1, 1, 1, 1}, {std::nan("")}), std::domain_error);
}

TEST(Tensor, ItemAndStackRoundTrip) {
  std::mt19937_64 rng(3);
  const sf::Tensor t = sf::testing::random_tensor(rng, {3, 2, 2, 2}, -1, 1);
  std::vector<sf::Tensor> items;
  for (std::size_t i = 0; i < 3; ++i) items.push_back(t.item(i));
  EXPECT_EQ(sf::stack(items), t);
  EXPECT_THROW(t.item(3), sf::ShapeError);
}

TEST(SpikeTrain, CountsAndStack) {
  sf::SpikeTrain a(3, {1, 1, 1, 2});
  a.set(0, 0, true);
  a.set(2, 0, true);
  a.set(1, 1, true);
  EXPECT_EQ(a.count(0), 2u);
  EXPECT_EQ(a.count(1), 1u);
  EXPECT_EQ(a.total(), 3u);
  const std::vector<sf::SpikeTrain> parts{a, a};
  const sf::SpikeTrain s = sf::stack(parts);
  EXPECT_EQ(s.shape().n, 2u);
  EXPECT_EQ(s.item(1), a);
  EXPECT_EQ(s.total(), 6u);
}

TEST(Conv2d, SingleElement) {
  const sf::Tensor x({1, 1, 1, 1}, {2.0});
  const sf::Tensor w({1, 1, 1, 1}, {3.0});
  const std::vector<double> b{0.5};
  const sf::Tensor y = sf::conv2d_forward(x, w, b, conv_geometry(1, 1, 1, 1, 0));
  EXPECT_EQ(y[0], 6.5);
}

TEST(Conv2d, IdentityKernel) {
  std::mt19937_64 rng(7);
  const sf::Tensor x = sf::testing::random_tensor(rng, {2, 1, 5, 5}, -3, 3);
  const sf::Tensor w({1, 1, 1, 1}, {1.0});
  const std::vector<double> b{0.0};
  EXPECT_EQ(sf::conv2d_forward(x, w, b, conv_geometry(1, 1, 1, 1, 0)), x);
}

TEST(Conv2d, MatchesNaiveOracle) {
  std::mt19937_64 rng(11);
  const sf::Tensor x = sf::testing::random_tensor(rng, {1, 2, 4, 4}, -1, 1);
  const sf::Tensor w = sf::testing::random_tensor(rng, {3, 2, 3, 3}, -1, 1);
  const sf::Tensor bt = sf::testing::random_tensor(rng, {1, 3, 1, 1}, -1, 1);
  const std::vector<double> b(bt.data().begin(), bt.data().end());
  const sf::Tensor got = sf::conv2d_forward(x, w, b, conv_geometry(2, 3, 3, 1, 1));
  const sf::Tensor want = sf::testing::naive_conv2d(x, w, b, 1, 1);
  ASSERT_EQ(got.shape(), want.shape());
  EXPECT_LE(max_abs_diff(got, want), 1e-12);
}

TEST(Conv2d, RandomCasesMatchOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const std::size_t in = 1 + rng() % 3, out = 1 + rng() % 4, k = 1 + rng() % 3;
    const std::size_t stride = 1 + rng() % 2, pad = rng() % (k + 1);
    const std::size_t h = k + rng() % 5;
    const sf::Tensor x = sf::testing::random_tensor(rng, {1 + rng() % 2, in, h, h}, -2, 2);
    const sf::Tensor w = sf::testing::random_tensor(rng, {out, in, k, k}, -1, 1);
    const sf::Tensor bt = sf::testing::random_tensor(rng, {1, out, 1, 1}, -1, 1);
    const std::vector<double> b(bt.data().begin(), bt.data().end());
    const sf::Tensor got = sf::conv2d_forward(x, w, b, conv_geometry(in, out, k, stride, pad));
    EXPECT_LE(max_abs_diff(got, sf::testing::naive_conv2d(x, w, b, stride, pad)), 1e-12);
  }
}

TEST(Conv2d, NamesBadChannelCount) {
  const sf::Tensor x({1, 2, 3, 3}, std::vector<double>(18, 0.0));
  const sf::Tensor w({1, 3, 1, 1}, {1.0, 1.0, 1.0});
  const std::vector<double> b{0.0};
  try {
    sf::conv2d_forward(x, w, b, conv_geometry(3, 1, 1, 1, 0));
    FAIL() << "expected ShapeError";
  } catch (const sf::ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("channels"), std::string::npos);
  }
}

TEST(Conv2d, IsLinear) {
  std::mt19937_64 rng(13);
  const sf::Tensor a = sf::testing::random_tensor(rng, {1, 2, 5, 5}, -1, 1);
  const sf::Tensor c = sf::testing::random_tensor(rng, {1, 2, 5, 5}, -1, 1);
  const sf::Tensor w = sf::testing::random_tensor(rng, {2, 2, 3, 3}, -1, 1);
  const std::vector<double> zero(2, 0.0);
  sf::Tensor sum = a;
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + 2.0 * c[i];
  const auto g = conv_geometry(2, 2, 3, 1, 1);
  const sf::Tensor ya = sf::conv2d_forward(a, w, zero, g);
  const sf::Tensor yc = sf::conv2d_forward(c, w, zero, g);
  sf::Tensor expect = ya;
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = ya[i] + 2.0 * yc[i];
  EXPECT_LE(max_abs_diff(sf::conv2d_forward(sum, w, zero, g), expect), 1e-12);
}

TEST(Dense, Examples) {
  const sf::Tensor x({1, 2, 1, 1}, {1.0, 0.0});
  const sf::Tensor w({1, 2, 1, 1}, {2.0, 5.0});
  const std::vector<double> b{1.0};
  EXPECT_EQ(sf::dense_forward(x, w, b)[0], 3.0);

  const sf::Tensor zero({1, 3, 1, 1}, {0.0, 0.0, 0.0});
  const sf::Tensor w2({2, 3, 1, 1}, {1, 2, 3, 4, 5, 6});
  const std::vector<double> b2{0.25, -1.5};
  const sf::Tensor y = sf::dense_forward(zero, w2, b2);
  EXPECT_EQ(y[0], 0.25);
  EXPECT_EQ(y[1], -1.5);
}

TEST(Dense, MatchesNaiveOracle) {
  std::mt19937_64 rng(17);
  const sf::Tensor x = sf::testing::random_tensor(rng, {3, 8, 1, 1}, -1, 1);
  const sf::Tensor w = sf::testing::random_tensor(rng, {4, 8, 1, 1}, -1, 1);
  const sf::Tensor bt = sf::testing::random_tensor(rng, {1, 4, 1, 1}, -1, 1);
  const std::vector<double> b(bt.data().begin(), bt.data().end());
  EXPECT_LE(max_abs_diff(sf::dense_forward(x, w, b), sf::testing::naive_dense(x, w, b)), 1e-12);
}

TEST(Dense, FlattensSpatialInput) {
  std::mt19937_64 rng(19);
  const sf::Tensor x = sf::testing::random_tensor(rng, {2, 2, 2, 2}, -1, 1);
  const sf::Tensor w = sf::testing::random_tensor(rng, {3, 8, 1, 1}, -1, 1);
  const std::vector<double> b(3, 0.0);
  const sf::Tensor flat = x.reshaped({2, 8, 1, 1});
  EXPECT_EQ(sf::dense_forward(x, w, b), sf::dense_forward(flat, w, b));
}

TEST(Dense, RejectsWrongWidth) {
  const sf::Tensor x({1, 3, 1, 1}, {1, 2, 3});
  const sf::Tensor w({1, 2, 1, 1}, {1, 1});
  const std::vector<double> b{0.0};
  EXPECT_THROW(sf::dense_forward(x, w, b), sf::ShapeError);
}

TEST(AvgPool, Examples) {
  const sf::Tensor x({1, 1, 2, 2}, {1, 3, 5, 7});
  EXPECT_EQ(sf::avgpool_forward(x, 2, 2)[0], 4.0);

  const sf::Tensor c = sf::Tensor::filled({2, 3, 4, 4}, 0.625);
  const sf::Tensor y = sf::avgpool_forward(c, 2, 2);
  EXPECT_EQ(y.shape(), (sf::Shape{2, 3, 2, 2}));
  for (double v : y.data()) EXPECT_EQ(v, 0.625);
}

TEST(AvgPool, MatchesNaiveOracle) {
  std::mt19937_64 rng(23);
  const sf::Tensor x = sf::testing::random_tensor(rng, {2, 3, 6, 6}, -1, 1);
  EXPECT_LE(max_abs_diff(sf::avgpool_forward(x, 2, 2), sf::testing::naive_avgpool(x, 2, 2)),
            1e-12);
  EXPECT_LE(max_abs_diff(sf::avgpool_forward(x, 3, 3), sf::testing::naive_avgpool(x, 3, 3)),
            1e-12);
}

TEST(AvgPool, RejectsUntiledWindow) {
  const sf::Tensor x = sf::Tensor::zeros({1, 1, 5, 5});
  EXPECT_THROW(sf::avgpool_forward(x, 2, 2), sf::ShapeError);
}

TEST(Geometry, Validation) {
  sf::LayerGeometry pool{sf::LayerKind::AvgPool, 2, 3, 2, 2, 0};
  EXPECT_THROW(pool.validate(), std::invalid_argument);
  sf::LayerGeometry dense{sf::LayerKind::Dense, 4, 2, 3, 1, 0};
  EXPECT_THROW(dense.validate(), std::invalid_argument);
  EXPECT_EQ(sf::layer_kind_from_string("avgpool"), sf::LayerKind::AvgPool);
  EXPECT_THROW(sf::layer_kind_from_string("lstm"), std::invalid_argument);
}

TEST(Kernels, Deterministic) {
  std::mt19937_64 rng(29);
  const sf::Tensor x = sf::testing::random_tensor(rng, {2, 3, 7, 7}, -1, 1);
  const sf::Tensor w = sf::testing::random_tensor(rng, {4, 3, 3, 3}, -1, 1);
  const std::vector<double> b(4, 0.1);
  const auto g = conv_geometry(3, 4, 3, 2, 1);
  EXPECT_EQ(sf::conv2d_forward(x, w, b, g), sf::conv2d_forward(x, w, b, g));
}
