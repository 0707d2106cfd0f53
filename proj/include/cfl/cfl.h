// Copyright 2026 The cfl Authors
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

#ifndef CFL_CFL_H_
#define CFL_CFL_H_

#include "cfl/bd_rate.h"
#include "cfl/cdf.h"
#include "cfl/cfl_core.h"
#include "cfl/cfl_params.h"
#include "cfl/cfl_signaling.h"
#include "cfl/codec.h"
#include "cfl/color.h"
#include "cfl/corpus.h"
#include "cfl/dc_analysis.h"
#include "cfl/error.h"
#include "cfl/fitting.h"
#include "cfl/frame.h"
#include "cfl/metrics.h"
#include "cfl/range_coder.h"
#include "cfl/rd_search.h"
#include "cfl/sweep.h"
#include "cfl/synthetic.h"
#include "cfl/transform.h"
#include "cfl/y4m.h"

#endif  // CFL_CFL_H_
