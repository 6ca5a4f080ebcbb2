// Copyright 2026 The fgel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "fgel/alphabet.hpp"
#include "fgel/budget.hpp"
#include "fgel/census.hpp"
#include "fgel/entropy.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/growth.hpp"
#include "fgel/homomorphism.hpp"
#include "fgel/joining.hpp"
#include "fgel/markov.hpp"
#include "fgel/parallel.hpp"
#include "fgel/rational.hpp"
#include "fgel/realize.hpp"
#include "fgel/rng.hpp"
#include "fgel/sampler.hpp"
#include "fgel/weight.hpp"
