// Copyright 2026 The Terracurric Authors
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

#pragma once

// Umbrella header.
#include "terracurric/archive.hpp"
#include "terracurric/cppn.hpp"
#include "terracurric/curriculum.hpp"
#include "terracurric/diamond_square.hpp"
#include "terracurric/difficulty.hpp"
#include "terracurric/errors.hpp"
#include "terracurric/features.hpp"
#include "terracurric/genome.hpp"
#include "terracurric/gp.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/parallel.hpp"
#include "terracurric/perlin.hpp"
#include "terracurric/rng.hpp"
#include "terracurric/worley.hpp"
