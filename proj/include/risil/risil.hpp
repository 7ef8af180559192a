// SPDX-License-Identifier: Apache-2.0
//
// risil - interference leakage minimization for RIS-assisted MIMO interference channels
// Copyright (C) 2026 The risil authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "risil/feasibility.hpp"
#include "risil/harness.hpp"
#include "risil/io.hpp"
#include "risil/leakage.hpp"
#include "risil/random.hpp"
#include "risil/rates.hpp"
#include "risil/ris_optimizer.hpp"
#include "risil/scenario.hpp"
#include "risil/txrx_optimizer.hpp"
#include "risil/types.hpp"
