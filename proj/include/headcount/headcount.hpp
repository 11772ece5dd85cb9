// Copyright 2026 The headcount Authors
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

#include "headcount/background.hpp"
#include "headcount/blobs.hpp"
#include "headcount/error.hpp"
#include "headcount/frame_io.hpp"
#include "headcount/image.hpp"
#include "headcount/line_counter.hpp"
#include "headcount/metrics.hpp"
#include "headcount/pipeline.hpp"
#include "headcount/synthetic.hpp"
#include "headcount/tracker.hpp"
