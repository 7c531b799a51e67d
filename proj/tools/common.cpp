#include "common.h"

#include "beat/bvh.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>

namespace beat::cli {

double report_number(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(format_number(value, 6));
}

Json report(const std::string& metric, double value, Json params, std::size_t n) {
  Json doc;
  doc["metric"] = metric;
  doc["value"] = report_number(value);
  doc["params"] = std::move(params);
  doc["n"] = n;
  return doc;
}

void emit(const Json& doc) { std::cout << doc.dump(2) << '\n'; }

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace beat::cli
