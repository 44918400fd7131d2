// Copyright 2026 The lkme authors
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

#include "lkme/algebra.hpp"
#include "lkme/bch.hpp"
#include "lkme/generators.hpp"
#include "lkme/io.hpp"
#include "lkme/linalg.hpp"
#include "lkme/projection.hpp"
#include "lkme/su.hpp"
#include "lkme/types.hpp"
#include "lkme/vec.hpp"
#include "lkme/verify.hpp"
