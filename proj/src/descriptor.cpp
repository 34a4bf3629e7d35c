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

#include "polarcvx/descriptor.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace polarcvx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kInfToken = "inf";

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.n; ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim)
    throw Error("vector must be an array of 1..3 numbers");
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.n; ++i) v[i] = j[i].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim)
    throw Error("matrix must be an array of 1..3 rows");
  Mat m(static_cast<int>(j.size()));
  for (int i = 0; i < m.n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != m.n)
      throw Error("matrix rows must be square");
    for (int k = 0; k < m.n; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json expr_to_json(const AnalyticConvexFunction& f) {
  using F = AnalyticConvexFunction;
  json j;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, F::PowerOfPNorm>) {
          j = {{"type", "power_norm"},
               {"dim", f.dim()},
               {"p", node.p},
               {"q", node.q},
               {"scale", node.scale}};
        } else if constexpr (std::is_same_v<T, F::Quadratic>) {
          j = {{"type", "quadratic"}, {"a", mat_to_json(node.A)}};
        } else if constexpr (std::is_same_v<T, F::IndicatorOfBall>) {
          j = {{"type", "ball_indicator"},
               {"dim", f.dim()},
               {"p", node.p},
               {"radius", node.radius}};
        } else if constexpr (std::is_same_v<T, F::IndicatorOfPolytope>) {
          json faces = json::array();
          for (const auto& h : node.faces)
            faces.push_back({{"a", vec_to_json(h.a)}, {"b", h.b}});
          j = {{"type", "polytope_indicator"},
               {"dim", f.dim()},
               {"faces", faces}};
        } else if constexpr (std::is_same_v<T, F::MaxOfAffinePlus>) {
          json pieces = json::array();
          for (const auto& p : node.pieces)
            pieces.push_back({{"a", vec_to_json(p.a)}, {"b", p.b}});
          j = {{"type", "max_affine"}, {"dim", f.dim()}, {"pieces", pieces}};
        } else if constexpr (std::is_same_v<T, F::Sum>) {
          json children = json::array();
          for (const auto& c : node.children) children.push_back(expr_to_json(c));
          j = {{"type", "sum"}, {"children", children}};
        } else if constexpr (std::is_same_v<T, F::Scaled>) {
          j = {{"type", "scaled"},
               {"t", node.t},
               {"child", expr_to_json(*node.child)}};
        } else if constexpr (std::is_same_v<T, F::PrecomposeLinear>) {
          j = {{"type", "precompose"},
               {"m", mat_to_json(node.m)},
               {"child", expr_to_json(*node.child)}};
        }
      },
      f.node());
  return j;
}

AnalyticConvexFunction expr_from_json(const json& j) {
  using F = AnalyticConvexFunction;
  const std::string type = j.at("type").get<std::string>();
  if (type == "power_norm")
    return F::power_norm(j.at("dim").get<int>(), j.at("p").get<double>(),
                         j.at("q").get<double>(), j.at("scale").get<double>());
  if (type == "quadratic") return F::quadratic(mat_from_json(j.at("a")));
  if (type == "ball_indicator")
    return F::ball_indicator(j.at("dim").get<int>(), j.at("p").get<double>(),
                             j.at("radius").get<double>());
  if (type == "polytope_indicator") {
    std::vector<HalfSpace> faces;
    for (const auto& h : j.at("faces"))
      faces.push_back({vec_from_json(h.at("a")), h.at("b").get<double>()});
    return F::polytope_indicator(j.at("dim").get<int>(), std::move(faces));
  }
  if (type == "max_affine") {
    std::vector<AffinePiece> pieces;
    for (const auto& p : j.at("pieces"))
      pieces.push_back({vec_from_json(p.at("a")), p.at("b").get<double>()});
    return F::max_affine(j.at("dim").get<int>(), std::move(pieces));
  }
  if (type == "sum") {
    std::vector<AnalyticConvexFunction> children;
    for (const auto& c : j.at("children")) children.push_back(expr_from_json(c));
    return F::sum(std::move(children));
  }
  if (type == "scaled")
    return F::scaled(j.at("t").get<double>(), expr_from_json(j.at("child")));
  if (type == "precompose")
    return F::precompose(mat_from_json(j.at("m")),
                         expr_from_json(j.at("child")));
  throw Error("unknown expression type: " + type);
}

json grid_to_json(const GridFunction& g) {
  json box = json::array();
  for (int ax = 0; ax < g.dim; ++ax)
    box.push_back(json::array({g.lo[ax], g.hi[ax]}));
  json shape = json::array();
  for (int ax = 0; ax < g.dim; ++ax) shape.push_back(g.shape[ax]);
  json values = json::array();
  for (double v : g.values) {
    if (std::isinf(v))
      values.push_back(kInfToken);
    else
      values.push_back(v);
  }
  return {{"kind", "grid"},     {"dim", g.dim}, {"box", box},
          {"shape", shape},     {"values", values}, {"inf", kInfToken}};
}

GridFunction grid_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  if (dim < 1 || dim > kMaxDim) throw Error("dim must be in 1..3");
  std::array<double, kMaxDim> lo{}, hi{};
  std::array<int, kMaxDim> shape{};
  const json& box = j.at("box");
  const json& shp = j.at("shape");
  if (static_cast<int>(box.size()) != dim ||
      static_cast<int>(shp.size()) != dim)
    throw Error("box/shape size must match dim");
  for (int ax = 0; ax < dim; ++ax) {
    lo[ax] = box[ax][0].get<double>();
    hi[ax] = box[ax][1].get<double>();
    shape[ax] = shp[ax].get<int>();
  }
  GridFunction g = make_grid(dim, lo, hi, shape);
  const std::string inf_token =
      j.contains("inf") ? j.at("inf").get<std::string>() : kInfToken;
  const json& values = j.at("values");
  if (static_cast<std::int64_t>(values.size()) != g.size())
    throw Error("values length does not match shape");
  for (std::int64_t k = 0; k < g.size(); ++k) {
    const json& v = values[k];
    if (v.is_string()) {
      if (v.get<std::string>() != inf_token)
        throw Error("unexpected string in values");
      g.values[k] = kInf;
    } else {
      g.values[k] = v.get<double>();
    }
  }
  if (j.contains("convexified")) g.convexified = j["convexified"].get<bool>();
  return g;
}

}  // namespace

json descriptor_to_json(const FunctionDescriptor& d) {
  if (d.analytic)
    return {{"kind", "analytic"}, {"expr", expr_to_json(*d.analytic)}};
  if (d.grid) return grid_to_json(*d.grid);
  throw Error("empty descriptor");
}

FunctionDescriptor descriptor_from_json(const json& j) {
  FunctionDescriptor d;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "analytic")
    d.analytic = expr_from_json(j.at("expr"));
  else if (kind == "grid")
    d.grid = grid_from_json(j);
  else
    throw Error("unknown descriptor kind: " + kind);
  return d;
}

FunctionDescriptor load_descriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("parse error in " + path + ": " + e.what());
  }
  try {
    return descriptor_from_json(j);
  } catch (const json::exception& e) {
    throw Error("malformed descriptor " + path + ": " + e.what());
  }
}

void save_descriptor(const std::string& path, const FunctionDescriptor& d) {
  write_file_atomic(path, descriptor_to_json(d).dump(2) + "\n");
}

GridFunction materialize(const FunctionDescriptor& d, const SampleBox& box) {
  if (d.grid) return *d.grid;
  std::array<double, kMaxDim> lo{}, hi{};
  std::array<int, kMaxDim> shape{};
  for (int ax = 0; ax < d.analytic->dim(); ++ax) {
    lo[ax] = box.lo;
    hi[ax] = box.hi;
    shape[ax] = box.n;
  }
  return sample(*d.analytic, lo, hi, shape);
}

json transform_result_to_json(const TransformResult& r) {
  json j = grid_to_json(r.output);
  j["boundary_fraction"] = r.boundary_attainment_fraction;
  if (!r.output.argmax_map.empty()) j["argmax"] = r.output.argmax_map;
  return j;
}

namespace {

const char* provenance_name(ProvenanceKind k) {
  switch (k) {
    case ProvenanceKind::HJ:
      return "hj";
    case ProvenanceKind::MADirichlet:
      return "ma_dirichlet";
    case ProvenanceKind::MACauchy:
      return "ma_cauchy";
  }
  return "unknown";
}

ProvenanceKind provenance_from_name(const std::string& s) {
  if (s == "hj") return ProvenanceKind::HJ;
  if (s == "ma_dirichlet") return ProvenanceKind::MADirichlet;
  if (s == "ma_cauchy") return ProvenanceKind::MACauchy;
  throw Error("unknown provenance: " + s);
}

std::string frame_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04d.json", i);
  return buf;
}

}  // namespace

void save_time_path(const std::string& dir, const TimePath& path,
                    bool timestamp) {
  fs::create_directories(dir);
  for (size_t i = 0; i < path.frames.size(); ++i) {
    FunctionDescriptor d;
    d.grid = path.frames[i];
    save_descriptor((fs::path(dir) / frame_name(static_cast<int>(i))).string(),
                    d);
  }
  json manifest;
  manifest["schema"] = 1;
  manifest["times"] = path.times;
  manifest["provenance"] = provenance_name(path.provenance);
  manifest["provenance_detail"] = path.provenance_detail;
  json diags = json::array();
  for (const auto& d : path.diagnostics)
    diags.push_back({{"boundary_fraction", d.boundary_fraction},
                     {"convexity_violation", d.convexity_violation}});
  manifest["diagnostics"] = diags;
  if (timestamp) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    manifest["written_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  }
  // Manifest last: readers treat its presence as "directory complete".
  write_file_atomic((fs::path(dir) / "manifest.json").string(),
                    manifest.dump(2) + "\n");
}

TimePath load_time_path(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw Error("missing manifest in " + dir);
  json manifest;
  in >> manifest;
  if (manifest.at("schema").get<int>() != 1)
    throw Error("unsupported manifest schema");
  TimePath path;
  path.times = manifest.at("times").get<std::vector<double>>();
  path.provenance =
      provenance_from_name(manifest.at("provenance").get<std::string>());
  if (manifest.contains("provenance_detail"))
    path.provenance_detail = manifest["provenance_detail"].get<std::string>();
  for (const auto& d : manifest.at("diagnostics")) {
    FrameDiagnostics fd;
    fd.boundary_fraction = d.at("boundary_fraction").get<double>();
    fd.convexity_violation = d.at("convexity_violation").get<double>();
    path.diagnostics.push_back(fd);
  }
  for (size_t i = 0; i < path.times.size(); ++i) {
    FunctionDescriptor fd = load_descriptor(
        (fs::path(dir) / frame_name(static_cast<int>(i))).string());
    if (!fd.grid) throw Error("frame descriptor is not a grid");
    path.frames.push_back(std::move(*fd.grid));
  }
  return path;
}

void save_time_path_csv(const std::string& file, const TimePath& path) {
  std::ostringstream out;
  out.precision(17);
  out << "t";
  int dim = path.frames.empty() ? 1 : path.frames.front().dim;
  for (int ax = 0; ax < dim; ++ax) out << ",x" << ax;
  out << ",u\n";
  for (size_t i = 0; i < path.frames.size(); ++i) {
    const GridFunction& g = path.frames[i];
    for (std::int64_t k = 0; k < g.size(); ++k) {
      out << path.times[i];
      Vec x = g.node(k);
      for (int ax = 0; ax < dim; ++ax) out << "," << x[ax];
      if (std::isinf(g.values[k]))
        out << "," << kInfToken << "\n";
      else
        out << "," << g.values[k] << "\n";
    }
  }
  write_file_atomic(file, out.str());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, target);
}

}  // namespace polarcvx
