// Copyright 2026 The wqrbf Authors - All Rights Reserved.
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


#ifndef WQRBF_WQRBF_HPP
#define WQRBF_WQRBF_HPP

#include "wqrbf/classifier.hpp"
#include "wqrbf/dataset.hpp"
#include "wqrbf/de.hpp"
#include "wqrbf/errors.hpp"
#include "wqrbf/experiment.hpp"
#include "wqrbf/pdf.hpp"
#include "wqrbf/qstate.hpp"
#include "wqrbf/text.hpp"
#include "wqrbf/wq.hpp"

#endif  // WQRBF_WQRBF_HPP
