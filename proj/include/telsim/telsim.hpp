// Copyright 2026 The telsim Authors
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

#include "telsim/channels.hpp"
#include "telsim/common.hpp"
#include "telsim/gates.hpp"
#include "telsim/measure.hpp"
#include "telsim/protocol_one.hpp"
#include "telsim/protocol_two.hpp"
#include "telsim/state.hpp"
#include "telsim/unitaries.hpp"
