// Copyright 2026 The increty Authors
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

#include "increty/cache.hpp"
#include "increty/diff_bench.hpp"
#include "increty/engine.hpp"
#include "increty/env.hpp"
#include "increty/error.hpp"
#include "increty/fun_ast.hpp"
#include "increty/fun_check.hpp"
#include "increty/fun_infer.hpp"
#include "increty/fun_parser.hpp"
#include "increty/fun_type.hpp"
#include "increty/instance.hpp"
#include "increty/serialize.hpp"
#include "increty/symbol.hpp"
#include "increty/while_ast.hpp"
#include "increty/while_security.hpp"
