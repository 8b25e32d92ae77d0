// Copyright 2026 The hcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON descriptions of hulls and slit domains, as used by job files.
//
//   {"kind": "empty"}
//   {"kind": "vertical_slit", "base": 0.0, "height": 1.0}
//   {"kind": "half_disk", "center": 0.0, "radius": 1.0}
//   {"kind": "ridge", "profile": "lorentzian", "height": 1, "center": 0, "width": 1}
//   {"kind": "ridge", "profile": "gaussian", "height": 1, "center": 0, "width": 1}
//   {"kind": "ridge", "profile": "table", "xs": [...], "heights": [...]}
//   {"kind": "ridge", "profile": "constant", "height": 1}
//   {"kind": "polyline", "points": [[x0, y0], [x1, y1], ...]}
//   {"kind": "union", "parts": [<hull>, ...]}
//   {"kind": "shifted", "offset": t, "hull": <hull>}
//   {"kind": "scaled", "factor": r, "hull": <hull>}
//
// Slit domains are arrays of {"y": 1.0, "x_lo": -1.0, "x_hi": 1.0}.
// Unknown keys are rejected with PreconditionError.

#pragma once

#include <json.hpp>

#include "hcap/geometry.h"

namespace hcap {

nlohmann::json hull_to_json(const Hull& h);
Hull hull_from_json(const nlohmann::json& j);

nlohmann::json slits_to_json(const SlitDomain& d);
SlitDomain slits_from_json(const nlohmann::json& j);

nlohmann::json point_to_json(Point p);
Point point_from_json(const nlohmann::json& j);

}  // namespace hcap
