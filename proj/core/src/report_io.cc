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

#include "segscore/report_io.h"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "segscore/errors.h"

namespace segscore {
namespace {

using nlohmann::json;

std::string JsonNumber(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string("null");
}

std::string CsvNumber(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

std::optional<double> OptionalNumber(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string SizeCounts(const std::array<std::int64_t, kNumSizeClasses>& k) {
  return fmt::format(R"({{"small": {}, "medium": {}, "large": {}}})", k[0],
                     k[1], k[2]);
}

std::array<std::int64_t, kNumSizeClasses> ParseSizeCounts(const json& j) {
  return {j.at("small").get<std::int64_t>(), j.at("medium").get<std::int64_t>(),
          j.at("large").get<std::int64_t>()};
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  throw DomainError(fmt::format("report format must be json or csv, got '{}'",
                                text));
}

std::string FormatReportJson(const Report& report) {
  const EvalConfig& cfg = report.config;
  std::string out = "{\n";
  out += fmt::format(
      "  \"config\": {{\"connectivity\": {}, \"ignore_id\": {}, "
      "\"num_classes\": {}, \"small_area_limit\": {}, "
      "\"medium_area_limit\": {}}},\n",
      ToString(cfg.connectivity), cfg.ignore_id, cfg.num_classes,
      kSmallAreaLimit, kMediumAreaLimit);
  out += "  \"per_class\": [";
  for (std::size_t i = 0; i < report.per_class.size(); ++i) {
    const ClassReport& row = report.per_class[i];
    out += fmt::format(
        "{}\n    {{\"class_id\": {}, \"iou\": {}, \"tilde_iou\": {}, "
        "\"instances\": {}}}",
        i == 0 ? "" : ",", row.class_id, JsonNumber(row.iou),
        JsonNumber(row.tilde_iou), SizeCounts(row.instance_counts));
  }
  out += report.per_class.empty() ? "],\n" : "\n  ],\n";
  out += fmt::format("  \"miou\": {},\n", JsonNumber(report.miou));
  out += fmt::format("  \"ia_miou\": {},\n", JsonNumber(report.ia_miou));
  out += fmt::format("  \"ia_small\": {},\n", JsonNumber(report.ia_small));
  out += fmt::format("  \"ia_medium\": {},\n", JsonNumber(report.ia_medium));
  out += fmt::format("  \"ia_large\": {},\n", JsonNumber(report.ia_large));
  out += fmt::format("  \"instance_counts\": {}\n}}\n",
                     SizeCounts(report.instance_totals));
  return out;
}

std::string FormatReportCsv(const Report& report) {
  std::string out = "class_id,iou,tilde_iou,small,medium,large\n";
  for (const ClassReport& row : report.per_class) {
    out += fmt::format("{},{},{},{},{},{}\n", row.class_id, CsvNumber(row.iou),
                       CsvNumber(row.tilde_iou), row.instance_counts[0],
                       row.instance_counts[1], row.instance_counts[2]);
  }
  const auto& t = report.instance_totals;
  out += fmt::format("all,{},{},{},{},{}\n", CsvNumber(report.miou),
                     CsvNumber(report.ia_miou), t[0], t[1], t[2]);
  out += fmt::format("ia_small,,{},{},,\n", CsvNumber(report.ia_small), t[0]);
  out += fmt::format("ia_medium,,{},,{},\n", CsvNumber(report.ia_medium), t[1]);
  out += fmt::format("ia_large,,{},,,{}\n", CsvNumber(report.ia_large), t[2]);
  return out;
}

Report ParseReportJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    Report report;
    const json& cfg = doc.at("config");
    report.config.connectivity =
        ParseConnectivity(std::to_string(cfg.at("connectivity").get<int>()));
    report.config.ignore_id = cfg.at("ignore_id").get<ClassId>();
    report.config.num_classes = cfg.at("num_classes").get<int>();
    for (const json& item : doc.at("per_class")) {
      ClassReport row;
      row.class_id = item.at("class_id").get<ClassId>();
      row.iou = OptionalNumber(item.at("iou"));
      row.tilde_iou = OptionalNumber(item.at("tilde_iou"));
      row.instance_counts = ParseSizeCounts(item.at("instances"));
      report.per_class.push_back(row);
    }
    report.miou = OptionalNumber(doc.at("miou"));
    report.ia_miou = OptionalNumber(doc.at("ia_miou"));
    report.ia_small = OptionalNumber(doc.at("ia_small"));
    report.ia_medium = OptionalNumber(doc.at("ia_medium"));
    report.ia_large = OptionalNumber(doc.at("ia_large"));
    report.instance_totals = ParseSizeCounts(doc.at("instance_counts"));
    return report;
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("malformed report: {}", e.what()));
  } catch (const DomainError& e) {
    throw FormatError(fmt::format("malformed report: {}", e.what()));
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

void WriteReport(const Report& report, const std::filesystem::path& path,
                 ReportFormat format) {
  WriteTextFile(path, format == ReportFormat::kJson ? FormatReportJson(report)
                                                    : FormatReportCsv(report));
}

}  // namespace segscore
