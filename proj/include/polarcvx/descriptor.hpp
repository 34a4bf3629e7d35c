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

#ifndef POLARCVX_DESCRIPTOR_HPP_
#define POLARCVX_DESCRIPTOR_HPP_

#include <optional>
#include <string>

#include <json.hpp>

#include "polarcvx/analytic.hpp"
#include "polarcvx/grid.hpp"
#include "polarcvx/pde.hpp"
#include "polarcvx/transforms.hpp"

namespace polarcvx {

// Serializable function: either a closed-form catalog expression or a
// sampled grid. The JSON shape is
//   {"kind": "analytic", "expr": {...nested variants...}}
//   {"kind": "grid", "dim": n, "box": [[lo,hi],...], "shape": [...],
//    "values": [...], "inf": "inf"}
// with the "inf" string standing in for the +infinity sentinel in values.
struct FunctionDescriptor {
  std::optional<AnalyticConvexFunction> analytic;
  std::optional<GridFunction> grid;

  bool is_analytic() const { return analytic.has_value(); }
};

nlohmann::json descriptor_to_json(const FunctionDescriptor& d);
FunctionDescriptor descriptor_from_json(const nlohmann::json& j);

// Throws Error with a parse message on malformed files.
FunctionDescriptor load_descriptor(const std::string& path);
void save_descriptor(const std::string& path, const FunctionDescriptor& d);

// Sampling defaults for turning an analytic descriptor into a grid.
struct SampleBox {
  double lo = -2.0, hi = 2.0;
  int n = 257;
};
GridFunction materialize(const FunctionDescriptor& d, const SampleBox& box);

// TransformResult as a grid descriptor plus the attainment diagnostics.
nlohmann::json transform_result_to_json(const TransformResult& r);

// TimePath persists as a directory of frame descriptors plus manifest.json
// {"schema": 1, "times": [...], "provenance": ..., "diagnostics": [...]}.
// The manifest is written last so a crash never leaves a manifest pointing
// at missing frames. Set timestamp=false for byte-identical reruns.
void save_time_path(const std::string& dir, const TimePath& path,
                    bool timestamp = true);
TimePath load_time_path(const std::string& dir);

// Flat plotting CSV with header t,x0[,x1[,x2]],u; one row per (time, node).
void save_time_path_csv(const std::string& file, const TimePath& path);

// Atomic text write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace polarcvx

#endif  // POLARCVX_DESCRIPTOR_HPP_
