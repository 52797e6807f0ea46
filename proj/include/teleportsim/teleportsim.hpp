// Copyright 2026 The teleportsim Authors
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

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/explorer.hpp"
#include "teleportsim/numerics.hpp"
#include "teleportsim/qlinalg.hpp"
#include "teleportsim/resources.hpp"
#include "teleportsim/scheme.hpp"
#include "teleportsim/serialization.hpp"
#include "teleportsim/teleport.hpp"
