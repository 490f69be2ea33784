// Copyright 2026 The scisumm Authors
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

// Convenience header for the library; the HTTP layer lives in service.hpp.

#include "scisumm/config.hpp"
#include "scisumm/entities.hpp"
#include "scisumm/errors.hpp"
#include "scisumm/evalharness.hpp"
#include "scisumm/index.hpp"
#include "scisumm/ingest.hpp"
#include "scisumm/objectives.hpp"
#include "scisumm/query.hpp"
#include "scisumm/summarizer.hpp"
#include "scisumm/textproc.hpp"
