// Copyright 2026 The mtkrr Authors. All Rights Reserved.
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
// =============================================================================
#pragma once

#include "mtkrr/error.hpp"
#include "mtkrr/estimators.hpp"
#include "mtkrr/experiments.hpp"
#include "mtkrr/format.hpp"
#include "mtkrr/oracle.hpp"
#include "mtkrr/parallel.hpp"
#include "mtkrr/report_io.hpp"
#include "mtkrr/risk_function.hpp"
#include "mtkrr/rng.hpp"
#include "mtkrr/scenarios.hpp"
#include "mtkrr/shrinkage.hpp"
#include "mtkrr/spectral.hpp"
#include "mtkrr/stats.hpp"
