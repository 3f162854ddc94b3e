#include "cf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FieldModel model_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw model_error(std::string("model document is not valid json: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw model_error("model document must be an object");
    std::vector<std::string> labels = doc.at("labels").get<std::vector<std::string>>();
    std::vector<std::vector<double>> g =
        doc.at("g").get<std::vector<std::vector<double>>>();
    std::map<Multiset, double> vertices;
    if (doc.contains("vertices")) {
      if (!doc.at("vertices").is_array())
        throw model_error("vertices must be an array");
      for (const auto& item : doc.at("vertices")) {
        Multiset idx = item.at("idx").get<Multiset>();
        double v = item.at("v").get<double>();
        auto key = ms_normalized(std::move(idx));
        vertices[key] += v;
      }
    }
    return make_field_model(std::move(labels), std::move(g), std::move(vertices));
  } catch (const nlohmann::json::exception& e) {
    throw model_error(std::string("model document has the wrong shape: ") + e.what());
  }
}

std::string model_to_json(const FieldModel& m) {
  ordered_json doc;
  doc["labels"] = m.labels;
  doc["g"] = m.g;
  doc["vertices"] = ordered_json::array();
  for (const auto& [idx, v] : m.vertices) {
    ordered_json item;
    item["idx"] = idx;
    item["v"] = v;
    doc["vertices"].push_back(std::move(item));
  }
  return doc.dump(2);
}

FieldModel load_model_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw model_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string green_table_csv(const FieldModel& m, const GreenTable<double>& table) {
  std::string out = "key,value\n";
  for (const auto& [key, value] : table.vals) {
    std::string name;
    for (size_t i = 0; i < key.size(); ++i) {
      int idx = key[i];
      if (idx < 0 || idx >= m.size())
        throw domain_error("green table key outside the model's sites");
      if (i) name += ' ';
      name += m.labels[size_t(idx)];
    }
    out += name;
    out += ',';
    out += fmt_double(value);
    out += '\n';
  }
  return out;
}

}  // namespace cf
