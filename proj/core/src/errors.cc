/* Copyright 2026 The segscore Authors. All Rights Reserved.

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

#include "segscore/errors.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace segscore {

DatasetError::DatasetError(std::vector<std::string> failures)
    : Error(fmt::format("{} dataset entr{} failed:\n  {}", failures.size(),
                        failures.size() == 1 ? "y" : "ies",
                        fmt::join(failures, "\n  "))),
      failures_(std::move(failures)) {}

}  // namespace segscore
