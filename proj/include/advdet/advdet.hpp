/* Copyright 2026 The advdet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include "advdet/builtins.hpp"
#include "advdet/core.hpp"
#include "advdet/detector.hpp"
#include "advdet/evaluation.hpp"
#include "advdet/map.hpp"
#include "advdet/matching.hpp"
#include "advdet/parallel.hpp"
#include "advdet/png_io.hpp"
#include "advdet/scenario.hpp"
#include "advdet/temporal.hpp"
#include "advdet/tracker.hpp"
#include "advdet/transforms.hpp"
#include "advdet/wap.hpp"
