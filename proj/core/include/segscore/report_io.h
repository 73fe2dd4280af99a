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

#ifndef SEGSCORE_REPORT_IO_H_
#define SEGSCORE_REPORT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "segscore/metrics.h"

namespace segscore {

enum class ReportFormat { kJson, kCsv };

// Throws DomainError unless text is "json" or "csv".
ReportFormat ParseReportFormat(std::string_view text);

// JSON object with keys config, per_class, miou, ia_miou, ia_small,
// ia_medium, ia_large and instance_counts. Reals carry 6 decimal places;
// undefined values are null.
std::string FormatReportJson(const Report& report);

// One row per evaluated class (class_id,iou,tilde_iou,small,medium,large)
// followed by an "all" row holding mIoU, IA-mIoU and the instance totals,
// and one row per size stratum. Undefined values are empty fields.
std::string FormatReportCsv(const Report& report);

// Inverse of FormatReportJson. Throws FormatError on bad input.
Report ParseReportJson(std::string_view text);

// Throws IoError naming the path on failure.
void WriteReport(const Report& report, const std::filesystem::path& path,
                 ReportFormat format);

// Writes `text` to `path`, replacing it. Throws IoError naming the path.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace segscore

#endif  // SEGSCORE_REPORT_IO_H_
