// Copyright 2026 The polarcvx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "polarcvx/descriptor.hpp"
#include "polarcvx/pde.hpp"

using namespace polarcvx;

namespace fs = std::filesystem;
using ACF = AnalyticConvexFunction;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("polarcvx_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("analytic descriptors round trip by value") {
  Mat a(2);
  a(0, 0) = 2.0;
  a(0, 1) = a(1, 0) = 1.0 / 3.0;
  a(1, 1) = 1.0;
  Mat m = Mat::identity(2);
  m(0, 1) = 0.5;
  std::vector<ACF> catalog = {
      ACF::power_norm(2, 1.5, 2.5, 0.7),
      ACF::quadratic(a),
      ACF::ball_indicator(2, 2, 1.25),
      ACF::polytope_indicator(
          1, {HalfSpace{Vec{1.0}, 1.0}, HalfSpace{Vec{-1.0}, 2.0}}),
      ACF::max_affine(1, {AffinePiece{Vec{2.0}, -1.0}}),
      ACF::sum({ACF::power_norm(1, 2, 2), ACF::power_norm(1, 2, 4)}),
      ACF::scaled(1.0 / 3.0, ACF::power_norm(1, 2, 2)),
      ACF::precompose(m, ACF::quadratic(a)),
  };
  for (const auto& f : catalog) {
    FunctionDescriptor d;
    d.analytic = f;
    FunctionDescriptor back = descriptor_from_json(descriptor_to_json(d));
    REQUIRE(back.is_analytic());
    REQUIRE(back.analytic->dim() == f.dim());
    // Compare by evaluation on a probe set, exactly.
    for (double t : {-1.3, -0.4, 0.0, 0.6, 1.7}) {
      Vec x(f.dim());
      for (int ax = 0; ax < f.dim(); ++ax) x[ax] = t + 0.1 * ax;
      double u = f.evaluate(x);
      double v = back.analytic->evaluate(x);
      if (std::isinf(u))
        CHECK(std::isinf(v));
      else
        CHECK(u == v);
    }
  }
}

TEST_CASE("grid descriptor round trips exactly, including infinities") {
  GridFunction g = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 9);
  g.values[5] = 1.0 / 3.0;  // exercise full double precision
  FunctionDescriptor d;
  d.grid = g;
  nlohmann::json j = descriptor_to_json(d);
  CHECK(j.at("kind") == "grid");
  CHECK(j.at("inf") == "inf");
  FunctionDescriptor back = descriptor_from_json(j);
  REQUIRE(back.grid.has_value());
  REQUIRE(back.grid->size() == g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (std::isinf(g.values[i]))
      CHECK(std::isinf(back.grid->values[i]));
    else
      CHECK(back.grid->values[i] == g.values[i]);
  }
}

TEST_CASE("file round trip and parse errors") {
  TempDir tmp;
  FunctionDescriptor d;
  d.analytic = ACF::power_norm(1, 2, 2);
  std::string path = tmp.file("f.json");
  save_descriptor(path, d);
  FunctionDescriptor back = load_descriptor(path);
  CHECK(back.is_analytic());
  CHECK_FALSE(fs::exists(path + ".tmp"));

  CHECK_THROWS_AS(load_descriptor(tmp.file("missing.json")), Error);
  std::ofstream bad(tmp.file("bad.json"));
  bad << "{not json";
  bad.close();
  CHECK_THROWS_AS(load_descriptor(tmp.file("bad.json")), Error);
  std::ofstream wrong(tmp.file("wrong.json"));
  wrong << "{\"kind\": \"grid\", \"dim\": 1}";
  wrong.close();
  CHECK_THROWS_AS(load_descriptor(tmp.file("wrong.json")), Error);
}

TEST_CASE("materialize samples analytic descriptors") {
  FunctionDescriptor d;
  d.analytic = ACF::power_norm(1, 2, 2);
  SampleBox box;
  box.lo = -1;
  box.hi = 1;
  box.n = 101;
  GridFunction g = materialize(d, box);
  CHECK(g.size() == 101);
  CHECK(g.evaluate(Vec{0.5}) == doctest::Approx(0.25).epsilon(1e-3));

  FunctionDescriptor dg;
  dg.grid = g;
  GridFunction g2 = materialize(dg, box);
  CHECK(g2.values == g.values);
}

TEST_CASE("transform result serialization keeps diagnostics") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 101);
  TransformResult r = polar(g, default_dual_grid(g));
  nlohmann::json j = transform_result_to_json(r);
  CHECK(j.contains("boundary_fraction"));
  CHECK(j.contains("argmax"));
  CHECK(j.at("values").size() == static_cast<std::size_t>(r.output.size()));
}

TEST_CASE("time path directory round trip") {
  TempDir tmp;
  GridFunction f = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 65);
  Mat a(1);
  a(0, 0) = 1.0;
  TimePath path = solve_polar_hj(f, ACF::quadratic(a), {0.0, 0.5, 1.0});
  std::string dir = tmp.file("path");
  save_time_path(dir, path, /*timestamp=*/false);
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));
  CHECK(fs::exists(fs::path(dir) / "frame_0002.json"));

  TimePath back = load_time_path(dir);
  CHECK(back.times == path.times);
  CHECK(back.provenance == ProvenanceKind::HJ);
  REQUIRE(back.frames.size() == 3);
  for (size_t i = 0; i < back.frames.size(); ++i)
    CHECK(back.frames[i].values == path.frames[i].values);
  REQUIRE(back.diagnostics.size() == 3);

  // Without the timestamp field, a rerun writes byte-identical files.
  std::ifstream m1(fs::path(dir) / "manifest.json");
  std::string first((std::istreambuf_iterator<char>(m1)),
                    std::istreambuf_iterator<char>());
  save_time_path(dir, path, /*timestamp=*/false);
  std::ifstream m2(fs::path(dir) / "manifest.json");
  std::string second((std::istreambuf_iterator<char>(m2)),
                     std::istreambuf_iterator<char>());
  CHECK(first == second);
  CHECK(first.find("written_unix_ms") == std::string::npos);
}

TEST_CASE("time path csv") {
  TempDir tmp;
  GridFunction f = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 17);
  Mat a(1);
  a(0, 0) = 1.0;
  TimePath path = solve_polar_hj(f, ACF::quadratic(a), {0.0, 1.0});
  std::string file = tmp.file("path.csv");
  save_time_path_csv(file, path);
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x0,u");
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2 * 17);
}
