// Copyright 2026 The Monophily Authors.
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

#pragma once

#include "monophily/classifiers.hpp"
#include "monophily/error.hpp"
#include "monophily/evaluation.hpp"
#include "monophily/graph.hpp"
#include "monophily/io.hpp"
#include "monophily/osbm.hpp"
#include "monophily/preference_stats.hpp"
#include "monophily/special.hpp"

namespace monophily {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace monophily
