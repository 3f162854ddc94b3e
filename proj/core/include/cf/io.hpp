#pragma once

#include <string>

#include "cf/fields.hpp"

namespace cf {

// Model document: {"labels":[...], "g":[[...]], "vertices":[{"idx":[...],"v":...}]}.
// Parsing or shape problems surface as model_error.
FieldModel model_from_json(const std::string& text);
std::string model_to_json(const FieldModel& m);
FieldModel load_model_json(const std::string& path);

// One row per table entry: multiset key as space-joined site labels, then the
// value. Header row "key,value".
std::string green_table_csv(const FieldModel& m, const GreenTable<double>& table);

}  // namespace cf
