// Copyright 2026 The qcat Authors
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

#include "qcat/core.hpp"
#include "qcat/pauli.hpp"
#include "qcat/state.hpp"
#include "qcat/linear_operator.hpp"
#include "qcat/eigensolver.hpp"
#include "qcat/evolution.hpp"
#include "qcat/rdm.hpp"
#include "qcat/fermion.hpp"
#include "qcat/fcidump.hpp"
#include "qcat/molecular.hpp"
#include "qcat/dvr.hpp"
#include "qcat/pes_io.hpp"
#include "qcat/vibrational.hpp"
#include "qcat/nqd.hpp"
#include "qcat/qmd.hpp"
#include "qcat/pathway.hpp"
#include "qcat/resources.hpp"
#include "qcat/workflow.hpp"
